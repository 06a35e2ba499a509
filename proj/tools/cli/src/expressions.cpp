#include "matword/cli/expressions.hpp"

#include <cctype>
#include <charconv>
#include <string>

#include "matword/errors.hpp"

namespace matword::cli {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

double parse_number(std::string_view s, std::string_view what) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw DomainError(std::string(what) + ": cannot read number '" + std::string(s) + "'");
  return v;
}

class Cursor {
 public:
  Cursor(std::string_view s, std::string_view what) : s_(s), what_(what) {}

  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool done() {
    skip();
    return i_ >= s_.size();
  }
  char peek() {
    skip();
    return i_ < s_.size() ? s_[i_] : '\0';
  }
  bool eat(char c) {
    if (peek() != c) return false;
    ++i_;
    return true;
  }
  bool at_number() {
    const char c = peek();
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.';
  }
  double number() {
    skip();
    const std::size_t start = i_;
    while (i_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[i_])) || s_[i_] == '.')) ++i_;
    if (i_ < s_.size() && (s_[i_] == 'e' || s_[i_] == 'E')) {
      std::size_t j = i_ + 1;
      if (j < s_.size() && (s_[j] == '+' || s_[j] == '-')) ++j;
      if (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) {
        i_ = j;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
      }
    }
    return parse_number(s_.substr(start, i_ - start), what_);
  }
  unsigned integer() {
    skip();
    const std::size_t start = i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (start == i_) fail("expected an integer");
    unsigned v = 0;
    std::from_chars(s_.data() + start, s_.data() + i_, v);
    return v;
  }
  [[noreturn]] void fail(std::string_view msg) {
    throw DomainError(std::string(what_) + ": " + std::string(msg) + " at position " + std::to_string(i_) +
                      " in '" + std::string(s_) + "'");
  }

 private:
  std::string_view s_;
  std::string_view what_;
  std::size_t i_ = 0;
};

PolyC finish_poly(std::vector<cplx> coeffs) {
  while (coeffs.size() > 1 && coeffs.back() == cplx(0.0, 0.0)) coeffs.pop_back();
  const bool monic = coeffs.back() == cplx(1.0, 0.0);
  return PolyC(std::move(coeffs), monic);
}

PolyC parse_poly_literal(std::string_view text) {
  Cursor c(text, "polynomial");
  std::vector<cplx> coeffs(1, 0.0);
  bool first = true;
  while (!c.done()) {
    double sign = 1.0;
    if (c.eat('+')) {
    } else if (c.eat('-')) {
      sign = -1.0;
    } else if (!first) {
      c.fail("expected + or -");
    }
    first = false;
    double coef = 1.0;
    bool has_coef = false;
    if (c.at_number()) {
      coef = c.number();
      has_coef = true;
      c.eat('*');
    }
    unsigned power = 0;
    if (c.eat('z')) {
      power = 1;
      if (c.eat('^')) power = c.integer();
    } else if (!has_coef) {
      c.fail("expected a coefficient or z");
    }
    if (coeffs.size() <= power) coeffs.resize(power + 1, 0.0);
    coeffs[power] += sign * coef;
  }
  if (first) throw DomainError("polynomial: empty expression");
  return finish_poly(std::move(coeffs));
}

}  // namespace

PolyC parse_poly(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw DomainError("polynomial: empty expression");
  if (text.find('z') != std::string_view::npos) return parse_poly_literal(text);
  std::vector<cplx> coeffs;
  for (auto part : split(text, ',')) {
    part = trim(part);
    coeffs.emplace_back(part.empty() ? 0.0 : parse_number(part, "polynomial"), 0.0);
  }
  return finish_poly(std::move(coeffs));
}

std::vector<PolyC> parse_poly_list(std::string_view text) {
  std::vector<PolyC> out;
  for (auto part : split(text, ';')) out.push_back(parse_poly(part));
  return out;
}

WordSum parse_word_sum(std::string_view text, std::size_t num_vars) {
  Cursor c(text, "word");
  WordSum out;
  bool first = true;
  while (!c.done()) {
    double sign = 1.0;
    if (c.eat('+')) {
    } else if (c.eat('-')) {
      sign = -1.0;
    } else if (!first) {
      c.fail("expected + or -");
    }
    first = false;
    double coef = 1.0;
    if (c.at_number()) {
      coef = c.number();
      c.eat('*');
    }
    WordSpec word;
    while (c.peek() == 'x') {
      c.eat('x');
      const unsigned k = c.integer();
      if (k < 1 || k > num_vars) c.fail("variable index out of range");
      std::size_t var = k - 1;
      if (c.eat('\'')) var += num_vars;
      unsigned e = 1;
      if (c.eat('^')) e = c.integer();
      word = word.then(WordSpec::power(var, e));
      c.eat('*');
    }
    if (word.length() == 0) word = WordSpec::power(0, 0);
    out.push_back({cplx(sign * coef, 0.0), word});
  }
  if (out.empty()) throw DomainError("word: empty expression");
  return out;
}

std::vector<WordSum> parse_word_sums(std::string_view text, std::size_t num_vars) {
  std::vector<WordSum> out;
  for (auto part : split(text, ';')) out.push_back(parse_word_sum(part, num_vars));
  return out;
}

Bounds parse_bounds(std::string_view text) {
  const auto parts = split(text, ',');
  if (parts.size() != 4) throw DomainError("bounds: expected re_min,re_max,im_min,im_max");
  Bounds b{parse_number(parts[0], "bounds"), parse_number(parts[1], "bounds"), parse_number(parts[2], "bounds"),
           parse_number(parts[3], "bounds")};
  if (!(b.re_min < b.re_max) || !(b.im_min < b.im_max)) throw DomainError("bounds: degenerate rectangle");
  return b;
}

Grid2D parse_grid(std::string_view text, const Bounds& bounds) {
  text = trim(text);
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw DomainError("grid: expected cheb:PxQ or quad:D[:L]");
  const auto kind = text.substr(0, colon);
  const auto rest = text.substr(colon + 1);
  auto as_int = [](std::string_view s) {
    const double v = parse_number(s, "grid");
    if (v != static_cast<int>(v)) throw DomainError("grid: expected an integer");
    return static_cast<int>(v);
  };
  if (kind == "cheb") {
    const auto x = rest.find('x');
    if (x == std::string_view::npos) throw DomainError("grid: expected cheb:PxQ");
    return chebyshev_grid(bounds, as_int(rest.substr(0, x)), as_int(rest.substr(x + 1)));
  }
  if (kind == "quad") {
    const auto parts = split(rest, ':');
    if (parts.size() > 2) throw DomainError("grid: expected quad:D[:L]");
    return quadtree_grid(bounds, as_int(parts[0]), parts.size() == 2 ? as_int(parts[1]) : 3);
  }
  throw DomainError("grid: unknown kind '" + std::string(kind) + "'");
}

}  // namespace matword::cli
