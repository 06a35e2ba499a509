#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "matword/minpoly.hpp"
#include "matword/pseudospectra.hpp"
#include "matword/words.hpp"

namespace matword::cli {

/// "c0,c1,...,cd" (ascending, empty slots are zero) or a literal such as
/// "z^2-1" or "0.5z^3 - 2z + 1". Coefficients are integers or decimals.
/// Throws DomainError on malformed input.
PolyC parse_poly(std::string_view text);

/// Polynomials separated by ';'.
std::vector<PolyC> parse_poly_list(std::string_view text);

/// Noncommutative polynomial over x1..xN, e.g. "x1 x2 - x2 x1" or
/// "x1^2 + 0.5 x1' x2". A trailing ' marks the adjoint, which maps to
/// variable N + k. Factors are separated by spaces or '*'.
WordSum parse_word_sum(std::string_view text, std::size_t num_vars);

/// Word sums separated by ';'.
std::vector<WordSum> parse_word_sums(std::string_view text, std::size_t num_vars);

/// "re_min,re_max,im_min,im_max"
Bounds parse_bounds(std::string_view text);

/// "cheb:PxQ" (tensor Chebyshev) or "quad:D[:L]" (uniform quadtree of depth
/// D with L x L Chebyshev points per leaf).
Grid2D parse_grid(std::string_view text, const Bounds& bounds);

}  // namespace matword::cli
