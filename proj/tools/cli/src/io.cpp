#include "matword/cli/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace matword::cli {

namespace {

using nlohmann::json;

// JSON has no NaN or Infinity. Writers that emit them anyway produce bare
// tokens; turn those into null so the offending entry can be named.
std::string neutralise_non_finite(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool in_string = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_string) {
      out.push_back(c);
      if (c == '\\' && i + 1 < text.size()) out.push_back(text[++i]);
      else if (c == '"') in_string = false;
      continue;
    }
    if (c == '"') {
      in_string = true;
      out.push_back(c);
      continue;
    }
    bool replaced = false;
    for (std::string_view tok : {"-Infinity", "Infinity", "-NaN", "NaN", "-nan", "nan", "-inf", "inf"}) {
      if (text.substr(i, tok.size()) == tok) {
        out += "null";
        // keep byte offsets of later errors roughly aligned
        out.append(tok.size() > 4 ? tok.size() - 4 : 0, ' ');
        i += tok.size() - 1;
        replaced = true;
        break;
      }
    }
    if (!replaced) out.push_back(c);
  }
  return out;
}

cplx read_entry(const json& e, std::size_t matrix, std::size_t index, Index dim) {
  auto where = [&] {
    std::ostringstream os;
    os << "matrix " << matrix << ", entry " << index << " (row " << index / static_cast<std::size_t>(dim)
       << ", col " << index % static_cast<std::size_t>(dim) << ")";
    return os.str();
  };
  double re = 0.0, im = 0.0;
  if (e.is_number()) {
    re = e.get<double>();
  } else if (e.is_array() && e.size() == 2 && (e[0].is_number() || e[0].is_null()) &&
             (e[1].is_number() || e[1].is_null())) {
    if (e[0].is_null() || e[1].is_null()) throw IoError("non-finite value at " + where());
    re = e[0].get<double>();
    im = e[1].get<double>();
  } else if (e.is_null()) {
    throw IoError("non-finite value at " + where());
  } else {
    throw IoError("expected [re, im] at " + where());
  }
  if (!std::isfinite(re) || !std::isfinite(im)) throw IoError("non-finite value at " + where());
  return {re, im};
}

}  // namespace

MatrixFile parse_matrices(std::string_view text) {
  json doc;
  try {
    doc = json::parse(neutralise_non_finite(text));
  } catch (const json::parse_error& e) {
    std::ostringstream os;
    os << "parse error at byte " << e.byte << ": " << e.what();
    throw IoError(os.str());
  }
  if (!doc.is_object()) throw IoError("matrix file: top level must be an object");
  if (doc.value("format", std::string()) != kMatrixFormat)
    throw IoError(std::string("matrix file: format must be \"") + kMatrixFormat + "\"");
  if (!doc.contains("version") || !doc["version"].is_number_integer() ||
      doc["version"].get<int>() != kMatrixFormatVersion)
    throw IoError("matrix file: unsupported version");
  if (!doc.contains("dim") || !doc["dim"].is_number_integer() || doc["dim"].get<long long>() < 1)
    throw IoError("matrix file: dim must be a positive integer");
  const auto dim = static_cast<Index>(doc["dim"].get<long long>());
  if (!doc.contains("entries") || !doc["entries"].is_array()) throw IoError("matrix file: missing entries");
  const json& entries = doc["entries"];
  if (doc.contains("count") && (!doc["count"].is_number_integer() || doc["count"].get<std::size_t>() != entries.size()))
    throw IoError("matrix file: count does not match the number of matrices");
  if (entries.empty()) throw IoError("matrix file: no matrices");

  MatrixFile out;
  const auto expected = static_cast<std::size_t>(dim * dim);
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const json& flat = entries[k];
    if (!flat.is_array() || flat.size() != expected) {
      std::ostringstream os;
      os << "matrix file: matrix " << k << " has " << (flat.is_array() ? flat.size() : 0) << " entries, dim "
         << dim << " needs " << expected;
      throw IoError(os.str());
    }
    MatrixC m(dim, dim);
    for (std::size_t i = 0; i < expected; ++i)
      m(static_cast<Index>(i) / dim, static_cast<Index>(i) % dim) = read_entry(flat[i], k, i, dim);
    out.matrices.push_back(std::move(m));
  }
  if (doc.contains("names")) {
    if (!doc["names"].is_array() || doc["names"].size() != entries.size())
      throw IoError("matrix file: names must list one string per matrix");
    for (const auto& n : doc["names"]) out.names.push_back(n.get<std::string>());
  }
  if (doc.contains("meta")) out.meta = doc["meta"];
  return out;
}

MatrixFile load_matrices(const std::string& path) { return parse_matrices(read_text(path)); }

json matrix_to_json(const MatrixC& m) {
  json flat = json::array();
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c) flat.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
  return flat;
}

std::string dump_matrices(const MatrixFile& file) {
  if (file.matrices.empty()) throw IoError("dump_matrices: nothing to write");
  const Index dim = file.matrices.front().rows();
  json doc;
  doc["format"] = kMatrixFormat;
  doc["version"] = kMatrixFormatVersion;
  doc["dim"] = dim;
  doc["count"] = file.matrices.size();
  json entries = json::array();
  for (const auto& m : file.matrices) {
    if (m.rows() != dim || m.cols() != dim) throw IoError("dump_matrices: matrices differ in size");
    for (Index r = 0; r < dim; ++r)
      for (Index c = 0; c < dim; ++c)
        if (!std::isfinite(m(r, c).real()) || !std::isfinite(m(r, c).imag()))
          throw IoError("dump_matrices: non-finite entry");
    entries.push_back(matrix_to_json(m));
  }
  doc["entries"] = std::move(entries);
  if (!file.names.empty()) doc["names"] = file.names;
  if (!file.meta.empty()) doc["meta"] = file.meta;
  return doc.dump() + "\n";
}

void save_matrices(const std::string& path, const MatrixFile& file) { write_text(path, dump_matrices(file)); }

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace matword::cli
