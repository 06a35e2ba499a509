#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "matword/errors.hpp"
#include "matword/linalg.hpp"

namespace matword::cli {

// Unreadable file, malformed JSON, wrong shape or non-finite entries.
class IoError : public Error {
 public:
  using Error::Error;
};

inline constexpr const char* kMatrixFormat = "matword.matrices";
inline constexpr int kMatrixFormatVersion = 1;

/// One or more same-size matrices with optional names and free-form
/// metadata. Tolerances stored in `meta` are informational only; loaders
/// recompute them.
struct MatrixFile {
  std::vector<MatrixC> matrices;
  std::vector<std::string> names;
  nlohmann::json meta = nlohmann::json::object();
};

/// {"format", "version", "dim", "count", "entries": [[[re, im], ...], ...],
///  "names", "meta"} with row-major entries.
MatrixFile parse_matrices(std::string_view text);
MatrixFile load_matrices(const std::string& path);

std::string dump_matrices(const MatrixFile& file);
void save_matrices(const std::string& path, const MatrixFile& file);

nlohmann::json matrix_to_json(const MatrixC& m);

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);

}  // namespace matword::cli
