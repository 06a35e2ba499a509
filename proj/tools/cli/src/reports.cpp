#include "matword/cli/reports.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <sstream>

#include "matword/cli/io.hpp"

namespace matword::cli {

using nlohmann::json;

namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string render_report(std::string_view command, const json& body) {
  std::string out = "# matword ";
  out += command;
  out += ' ';
  out += utc_now();
  out += '\n';
  out += body.dump();
  out += '\n';
  return out;
}

std::string report_body(std::string_view rendered) {
  const auto nl = rendered.find('\n');
  if (nl == std::string_view::npos || rendered.substr(0, 1) != "#") return std::string(rendered);
  return std::string(rendered.substr(nl + 1));
}

json poly_to_json(const PolyC& p) {
  json c = json::array();
  for (const auto& z : p.coeffs) c.push_back(json::array({z.real(), z.imag()}));
  return json{{"coeffs", c}, {"degree", p.degree()}, {"monic", p.monic}};
}

PolyC poly_from_json(const json& j) {
  const json& c = j.is_object() ? j.at("coeffs") : j;
  std::vector<cplx> coeffs;
  for (const auto& e : c) {
    if (e.is_number()) coeffs.emplace_back(e.get<double>(), 0.0);
    else coeffs.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
  }
  const bool monic = !coeffs.empty() && coeffs.back() == cplx(1.0, 0.0);
  return PolyC(std::move(coeffs), monic);
}

json check_to_json(const ConstraintCheck& c) {
  return json{{"name", c.name}, {"max_residual", c.max_residual}, {"argmax_t", c.argmax_t},
              {"bound", c.bound}, {"pass", c.pass}};
}

json deformation_to_json(std::string_view mode, const DeformationResult& r) {
  json paths = json::array();
  for (std::size_t j = 0; j < r.paths.size(); ++j) {
    json checks = json::array();
    if (j < r.reports.size())
      for (const auto& c : r.reports[j].checks) checks.push_back(check_to_json(c));
    json segs = json::array();
    if (j < r.segments.size())
      for (const auto& s : r.segments[j])
        segs.push_back(json{{"kind", to_string(s.kind)}, {"samples", s.size()}, {"length", path_length(s)}});
    paths.push_back(json{{"index", j},
                         {"kind", to_string(r.paths[j].kind)},
                         {"samples", r.paths[j].size()},
                         {"length", path_length(r.paths[j])},
                         {"pass", j < r.reports.size() && r.reports[j].pass},
                         {"segments", segs},
                         {"checks", checks}});
  }
  return json{{"mode", mode},
              {"eps", r.eps},
              {"delta_in", r.delta_in},
              {"achieved_eps", r.achieved_eps},
              {"endpoint_error", r.endpoint_error},
              {"commutator_max", r.commutator_max},
              {"log_argument_distance", r.log_argument_distance},
              {"k_constant", r.k_constant},
              {"delta_bound", r.delta_bound},
              {"pass", r.pass()},
              {"paths", paths}};
}

json instance_spec_to_json(const InstanceSpec& s) {
  json polys = json::array();
  for (const auto& p : s.polys) polys.push_back(poly_to_json(p));
  return json{{"kind", to_string(s.kind)}, {"m", s.m},         {"n", s.n},      {"polys", polys},
              {"eps_alg", s.eps_alg},      {"delta", s.delta}, {"seed", s.seed}};
}

json harness_to_json(const HarnessReport& r) {
  json trials = json::array();
  for (const auto& t : r.trials) {
    json rec{{"index", t.index},
             {"seed", t.seed},
             {"pass", t.pass},
             {"delta", t.delta},
             {"achieved_eps", t.achieved_eps},
             {"endpoint_error", t.endpoint_error},
             {"commutator_max", t.commutator_max},
             {"hermitian_defect", t.hermitian_defect},
             {"contraction_excess", t.contraction_excess}};
    if (r.mode == "ulpac") {
      rec["polynomial_max"] = t.polynomial_max;
      if (r.spec.kind == InstanceSpec::Kind::sphere) {
        rec["relation_residual"] = t.relation_residual;
        rec["relation_bound"] = t.relation_bound;
      }
    } else {
      rec["dilation_distance_source"] = t.dilation_distance_source;
      rec["dilation_distance_target"] = t.dilation_distance_target;
      rec["compression_error"] = t.compression_error;
    }
    if (!t.error.empty()) rec["error"] = t.error;
    trials.push_back(std::move(rec));
  }
  return json{{"mode", r.mode},
              {"spec", instance_spec_to_json(r.spec)},
              {"eps", r.eps},
              {"trials", r.trials.size()},
              {"passed", r.passed()},
              {"achieved_mean", r.achieved_mean()},
              {"achieved_max", r.achieved_max()},
              {"records", trials}};
}

json triple_to_json(const ScanTriple& t) {
  json u = json::array(), v = json::array();
  for (Index r = 0; r < t.u.rows(); ++r)
    for (Index c = 0; c < t.u.cols(); ++c) u.push_back(json::array({t.u(r, c).real(), t.u(r, c).imag()}));
  for (Index r = 0; r < t.v.rows(); ++r)
    for (Index c = 0; c < t.v.cols(); ++c) v.push_back(json::array({t.v(r, c).real(), t.v(r, c).imag()}));
  return json{{"sigma", json::array({t.sigma.real(), t.sigma.imag()})},
              {"rank", t.v.cols()},
              {"residual", t.residual},
              {"u", u},
              {"v", v}};
}

std::string harness_csv(const HarnessReport& r) {
  std::ostringstream os;
  os << "trial,seed,pass,delta,achieved_eps,endpoint_error,commutator_max,polynomial_max,hermitian_defect,"
        "contraction_excess,relation_residual,compression_error,error\n";
  for (const auto& t : r.trials) {
    std::string err = t.error;
    for (auto& ch : err)
      if (ch == ',' || ch == '\n' || ch == '"') ch = ' ';
    os << t.index << ',' << t.seed << ',' << (t.pass ? 1 : 0) << ',' << g17(t.delta) << ',' << g17(t.achieved_eps)
       << ',' << g17(t.endpoint_error) << ',' << g17(t.commutator_max) << ',' << g17(t.polynomial_max) << ','
       << g17(t.hermitian_defect) << ',' << g17(t.contraction_excess) << ',' << g17(t.relation_residual) << ','
       << g17(t.compression_error) << ',' << err << '\n';
  }
  return os.str();
}

std::string paths_jsonl(const DeformationResult& r) {
  std::string out;
  for (std::size_t j = 0; j < r.paths.size(); ++j) {
    const auto& p = r.paths[j];
    for (std::size_t i = 0; i < p.size(); ++i) {
      out += json{{"path", j}, {"i", i}, {"t", p.times[i]}, {"entries", matrix_to_json(p.samples[i])}}.dump();
      out += '\n';
    }
  }
  return out;
}

std::string contours_csv(const std::vector<Polyline>& lines) {
  std::ostringstream os;
  os << "contour,index,re,im,closed\n";
  for (std::size_t c = 0; c < lines.size(); ++c)
    for (std::size_t i = 0; i < lines[c].points.size(); ++i)
      os << c << ',' << i << ',' << g17(lines[c].points[i].real()) << ',' << g17(lines[c].points[i].imag()) << ','
         << (lines[c].closed ? 1 : 0) << '\n';
  return os.str();
}

}  // namespace matword::cli
