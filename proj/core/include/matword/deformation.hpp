#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "matword/approximants.hpp"
#include "matword/linalg.hpp"
#include "matword/minpoly.hpp"
#include "matword/paths.hpp"

namespace matword {

struct DeformationOptions {
  int samples = kDefaultSamples;
  /// Precondition slack for commutation, unitarity and endpoint matching;
  /// defaults to 1e-8 * n.
  std::optional<double> tol;
  /// Bound for the pairwise commutator and normality checks along paths;
  /// defaults to 1e-7 * n.
  std::optional<double> commutator_bound;
};

struct DeformationResult {
  std::vector<MatrixPath> paths;                   // one per tuple member
  std::vector<std::vector<MatrixPath>> segments;   // pieces of each path, in order
  std::vector<PathReport> reports;                 // verify_path per member
  double achieved_eps = 0.0;     // max_j max_t ||path_j(t) - Y_j||
  double delta_in = 0.0;         // max_j ||X_j - Y_j||
  double endpoint_error = 0.0;   // max_j max(||path_j(0) - X_j||, ||path_j(1) - Y_j||)
  double commutator_max = 0.0;   // max_t max_{j<k} ||[path_j(t), path_k(t)]||
  double eps = 0.0;              // requested bound

  // construction data
  MatrixC approximant;           // W
  MatrixC commuting_unitary;     // W hat
  double log_argument_distance = 0.0;  // ||1 - W hat* W||
  double delta_bound = 0.0;      // algebraic: h * eps / (6 K (K - 1))
  int k_constant = 0;            // algebraic: K

  bool pass() const;
};

/// Curved path Ad[e^{pi i t H_Z}](X_j) followed by the flat path from
/// W X_j W* to Y_j, where W comes from the joint isospectral approximant,
/// W hat commutes with W X^ W* for a nearby generator X^, and
/// e^{pi i H_Z} = W hat* W. Throws DomainError when ||1 - W hat* W|| >= 2.
DeformationResult connect_gujc(const NormalTuple& x, const NormalTuple& y, double eps,
                               const DeformationOptions& options = {});

/// K = 1 + prod_j max(1, deg p_j)
int algebraic_k_constant(const std::vector<PolyC>& polys);

/// Smallest distance between distinct roots of p (infinity for fewer than
/// two distinct roots).
double root_gap(const PolyC& p);

/// GUJC connection for tuples with p_j(X_j) = p_j(Y_j) = 0. `polys` holds
/// one polynomial per member or a single one shared by all. Requires
/// max_j ||X_j - Y_j|| < min(g / 3, 1 / 2), g the smallest root gap.
DeformationResult connect_algebraic(const NormalTuple& x, const NormalTuple& y,
                                    const std::vector<PolyC>& polys, double eps,
                                    const DeformationOptions& options = {});

/// Eigenvalues of each X_j rounded to the nearest root of p_j in the joint
/// eigenbasis. Throws DomainError when an eigenvalue is farther than
/// max_distance from Z(p_j).
NormalTuple round_to_roots(const NormalTuple& x, const std::vector<PolyC>& polys, double max_distance,
                           std::optional<double> tol = std::nullopt);

/// Flat path X -> X^, algebraic connection X^ -> Y^, flat path Y^ -> Y.
/// Requires ||p_j(X_j)||, ||p_j(Y_j)||, ||X_j - Y_j|| <= delta, delta <= g / 6
/// and every eigenvalue within delta / 2 of Z(p_j). Each tuple must commute
/// internally.
DeformationResult connect_soft_algebraic(const NormalTuple& x, const NormalTuple& y,
                                         const std::vector<PolyC>& polys, double delta, double eps,
                                         const DeformationOptions& options = {});

/// Smallest delta accepted by connect_soft_algebraic for this pair:
/// max of ||X_j - Y_j||, ||p_j(X_j)||, ||p_j(Y_j)|| and twice the largest
/// eigenvalue distance to Z(p_j).
double soft_delta(const NormalTuple& x, const NormalTuple& y, const std::vector<PolyC>& polys);

struct InstanceSpec {
  enum class Kind { cube, sphere };
  Kind kind = Kind::cube;
  int m = 2;
  int n = 8;
  std::vector<PolyC> polys;  // empty, one shared, or one per coordinate
  double eps_alg = 0.0;
  double delta = 0.0;
  std::uint64_t seed = 0;
};

const char* to_string(InstanceSpec::Kind kind);

struct Instance {
  NormalTuple x;
  NormalTuple y;
  MatrixC basis;  // common eigenbasis of X
  MatrixC v;      // Y = V X' V*
  std::vector<Eigen::VectorXd> x_values;  // joint eigenvalues, per coordinate
  std::vector<Eigen::VectorXd> y_values;
};

/// Commuting hermitian contractions X diagonal in a Haar-random basis and
/// a nearby Y with ||X_j - Y_j|| <= delta. Throws DomainError for an
/// infeasible spec.
Instance generate_instance(const InstanceSpec& spec);

struct TrialRecord {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  bool pass = false;
  std::string error;             // empty unless the construction threw
  double delta = 0.0;            // delta handed to the connection
  double achieved_eps = 0.0;
  double endpoint_error = 0.0;
  double commutator_max = 0.0;
  double polynomial_max = 0.0;   // ulpac
  double hermitian_defect = 0.0; // max ||Z - Z*||
  double contraction_excess = 0.0;  // max(0, ||Z|| - 1)
  double relation_residual = 0.0;   // sphere: max ||sum Z_j^2 - 1||
  double relation_bound = 0.0;
  double dilation_distance_source = 0.0;  // aulpac: max ||Phi(H_j) - iota(H_j)||
  double dilation_distance_target = 0.0;  // aulpac: max ||Phi(H_j) - iota(K_j)||
  double compression_error = 0.0;         // aulpac: max ||kappa(path_j(0)) - H_j||
};

struct HarnessReport {
  std::string mode;  // "ulpac" or "aulpac"
  InstanceSpec spec;
  double eps = 0.0;
  std::vector<TrialRecord> trials;

  std::size_t passed() const;
  double achieved_mean() const;
  double achieved_max() const;
};

struct HarnessOptions {
  double eps = 0.2;
  int samples = kDefaultSamples;
  int threads = 1;
};

/// Per trial: instance from derive_seed(spec.seed, trial), soft algebraic
/// connection, and checks on endpoints, ||p_j(Z_t)|| <= eps, pairwise
/// commutation, hermitian contraction, the sphere relation and
/// achieved_eps <= eps.
HarnessReport verify_ulpac(const InstanceSpec& spec, int trials, const HarnessOptions& options = {});

/// Per trial: Phi = (Psi^dagger)^{[2]} o iota_2 with Psi the approximant of
/// the instance pair, checks ||Phi(H_j) - iota(H_j)||, ||Phi(H_j) - iota(K_j)||
/// <= eps, then connects Phi(H) to iota(K) in M_2n.
HarnessReport verify_aulpac(const InstanceSpec& spec, int trials, const HarnessOptions& options = {});

}  // namespace matword
