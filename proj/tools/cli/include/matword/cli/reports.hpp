#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "matword/deformation.hpp"
#include "matword/minpoly.hpp"
#include "matword/pseudospectra.hpp"

namespace matword::cli {

/// Report file layout: one header line "# matword <command> <UTC time>",
/// then the JSON body on a single line. Only the header varies between
/// identical runs.
std::string render_report(std::string_view command, const nlohmann::json& body);

/// The body line of a rendered report (everything after the header).
std::string report_body(std::string_view rendered);

nlohmann::json poly_to_json(const PolyC& p);
PolyC poly_from_json(const nlohmann::json& j);

nlohmann::json check_to_json(const ConstraintCheck& c);
nlohmann::json deformation_to_json(std::string_view mode, const DeformationResult& r);
nlohmann::json harness_to_json(const HarnessReport& r);
nlohmann::json instance_spec_to_json(const InstanceSpec& s);
nlohmann::json triple_to_json(const ScanTriple& t);

/// trial,seed,pass,delta,achieved_eps,... one row per trial.
std::string harness_csv(const HarnessReport& r);

/// One JSON record per line: {"path", "i", "t", "entries"}.
std::string paths_jsonl(const DeformationResult& r);

/// Polylines as CSV rows: contour,index,re,im,closed.
std::string contours_csv(const std::vector<Polyline>& lines);

}  // namespace matword::cli
