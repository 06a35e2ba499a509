#include "matword/deformation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "matword/errors.hpp"
#include "matword/parallel.hpp"
#include "matword/random.hpp"

namespace matword {

namespace {

struct Settings {
  int samples;
  double tol;
  double commutator_bound;
};

Settings settings_for(const DeformationOptions& o, Index n) {
  if (o.samples < 3) throw DomainError("deformation: need at least 3 samples per path");
  return {o.samples, o.tol.value_or(default_tol(n)), o.commutator_bound.value_or(1e-7 * static_cast<double>(n))};
}

void require_pair(const NormalTuple& x, const NormalTuple& y, const char* what) {
  if (x.empty() || x.size() != y.size() || x.dim() != y.dim()) {
    std::ostringstream os;
    os << what << ": tuples differ in arity or size";
    throw DimensionError(os.str());
  }
}

void require_commuting(const NormalTuple& t, double tol, const char* what, const char* name) {
  if (t.commutator_bound() > tol) {
    std::ostringstream os;
    os << what << ": " << name << " is not commuting (max ||[" << name << "_j, " << name
       << "_k]|| = " << t.commutator_bound() << ")";
    throw ToleranceError(os.str());
  }
}

double max_distance(const NormalTuple& x, const NormalTuple& y) {
  double d = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) d = std::max(d, op_norm(x[j] - y[j]));
  return d;
}

std::vector<PolyC> expand_polys(const std::vector<PolyC>& polys, std::size_t arity, const char* what) {
  if (polys.size() == arity) return polys;
  if (polys.size() == 1) return std::vector<PolyC>(arity, polys.front());
  std::ostringstream os;
  os << what << ": expected 1 or " << arity << " polynomials, got " << polys.size();
  throw DimensionError(os.str());
}

// Distinct roots, with imaginary parts below 1e-12 dropped.
std::vector<cplx> distinct_roots(const PolyC& p) {
  std::vector<cplx> out;
  for (cplx r : poly_roots(p)) {
    if (std::abs(r.imag()) <= 1e-12 * std::max(1.0, std::abs(r))) r = cplx(r.real(), 0.0);
    bool seen = false;
    for (const auto& s : out) seen = seen || std::abs(s - r) <= 1e-6 * std::max(1.0, std::abs(r));
    if (!seen) out.push_back(r);
  }
  return out;
}

cplx nearest(const std::vector<cplx>& roots, cplx z) {
  cplx best = roots.front();
  for (const auto& r : roots)
    if (std::abs(z - r) < std::abs(z - best)) best = r;
  return best;
}

void finalize(DeformationResult& r, const NormalTuple& x, const NormalTuple& y, double eps,
              const Settings& s, const std::vector<PolyC>* polys) {
  r.eps = eps;
  r.delta_in = max_distance(x, y);
  r.achieved_eps = 0.0;
  r.endpoint_error = 0.0;
  r.commutator_max = 0.0;
  r.reports.clear();
  const std::size_t arity = r.paths.size();
  for (std::size_t j = 0; j < arity; ++j) {
    const auto& p = r.paths[j];
    r.endpoint_error = std::max({r.endpoint_error, op_norm(p.front() - x[j]), op_norm(p.back() - y[j])});
    for (const auto& m : p.samples) r.achieved_eps = std::max(r.achieved_eps, op_norm(m - y[j]));
    for (std::size_t k = j + 1; k < arity; ++k)
      for (std::size_t i = 0; i < p.size(); ++i)
        r.commutator_max = std::max(r.commutator_max, op_norm(commutator(p.samples[i], r.paths[k].samples[i])));

    std::vector<PathConstraint> cons;
    cons.emplace_back(DistanceTo{y[j], eps});
    cons.emplace_back(Normality{s.commutator_bound});
    for (std::size_t k = 0; k < arity; ++k)
      if (k != j) cons.emplace_back(CommutesWithPath{r.paths[k], s.commutator_bound});
    if (polys) cons.emplace_back(PolynomialZero{(*polys)[j], eps});
    r.reports.push_back(verify_path(p, cons));
  }
}

}  // namespace

bool DeformationResult::pass() const {
  if (achieved_eps > eps) return false;
  const double n = paths.empty() ? 1.0 : static_cast<double>(paths.front().dim());
  if (endpoint_error > 1e-8 * n) return false;
  for (const auto& rep : reports)
    if (!rep.pass) return false;
  return true;
}

DeformationResult connect_gujc(const NormalTuple& x, const NormalTuple& y, double eps,
                               const DeformationOptions& options) {
  require_pair(x, y, "connect_gujc");
  if (!(eps > 0.0)) throw DomainError("connect_gujc: eps must be > 0");
  const Index n = x.dim();
  const Settings s = settings_for(options, n);
  require_commuting(x, s.tol, "connect_gujc", "X");
  require_commuting(y, s.tol, "connect_gujc", "Y");

  DeformationResult r;
  const double delta = max_distance(x, y);
  const IsospectralApproximant psi = joint_isospectral_approximant(x, y, delta, s.tol);
  const MatrixC& w = psi.w;
  const double generator_delta = std::clamp(eps / 4.0, 1e-4, 0.25);
  const MatrixC xhat = nearby_generator(x, 0, generator_delta, s.tol);
  const MatrixC d = w * xhat * w.adjoint();
  const CommutingUnitary cu = nearby_commuting_unitary(w, d);
  const MatrixC what = cu.z.adjoint();
  const MatrixC z = what.adjoint() * w;
  r.approximant = w;
  r.commuting_unitary = what;
  r.log_argument_distance = op_norm(identity(n) - z);
  if (r.log_argument_distance >= 2.0 - s.tol) {
    std::ostringstream os;
    os << "connect_gujc: ||1 - W^* W|| = " << r.log_argument_distance << " leaves no principal logarithm";
    throw DomainError(os.str());
  }
  const MatrixC hz = principal_unitary_log(z, s.tol);

  const int half = half_samples(s.samples);
  for (std::size_t j = 0; j < x.size(); ++j) {
    MatrixPath curved = curved_path(hz, x[j], half, s.tol);
    MatrixPath flat = flat_path(psi.apply(x[j]), y[j], half);
    r.paths.push_back(concat(curved, flat, s.tol));
    r.segments.push_back({std::move(curved), std::move(flat)});
  }
  finalize(r, x, y, eps, s, nullptr);
  return r;
}

int algebraic_k_constant(const std::vector<PolyC>& polys) {
  long long prod = 1;
  for (const auto& p : polys) prod *= std::max(1, p.degree());
  return static_cast<int>(1 + prod);
}

double root_gap(const PolyC& p) {
  const auto roots = distinct_roots(p);
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < roots.size(); ++a)
    for (std::size_t b = a + 1; b < roots.size(); ++b) gap = std::min(gap, std::abs(roots[a] - roots[b]));
  return gap;
}

DeformationResult connect_algebraic(const NormalTuple& x, const NormalTuple& y,
                                    const std::vector<PolyC>& polys, double eps,
                                    const DeformationOptions& options) {
  require_pair(x, y, "connect_algebraic");
  const Index n = x.dim();
  const Settings s = settings_for(options, n);
  const auto ps = expand_polys(polys, x.size(), "connect_algebraic");
  require_commuting(x, s.tol, "connect_algebraic", "X");
  require_commuting(y, s.tol, "connect_algebraic", "Y");
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double rx = op_norm(poly_eval_matrix(ps[j], x[j]));
    const double ry = op_norm(poly_eval_matrix(ps[j], y[j]));
    if (rx > s.tol || ry > s.tol) {
      std::ostringstream os;
      os << "connect_algebraic: spectrum of member " << j + 1 << " is not in Z(p) (||p(X)|| = " << rx
         << ", ||p(Y)|| = " << ry << ")";
      throw DomainError(os.str());
    }
    gap = std::min(gap, root_gap(ps[j]));
  }
  const double h = gap / 3.0;
  const double delta = max_distance(x, y);
  if (!(delta < std::min(h, 0.5))) {
    std::ostringstream os;
    os << "connect_algebraic: delta " << delta << " not below min(root gap / 3, 1/2) = " << std::min(h, 0.5);
    throw DomainError(os.str());
  }
  DeformationResult r = connect_gujc(x, y, eps, options);
  r.k_constant = algebraic_k_constant(ps);
  r.delta_bound = std::isfinite(h) ? h * eps / (6.0 * r.k_constant * (r.k_constant - 1)) : 0.0;
  finalize(r, x, y, eps, s, &ps);
  return r;
}

NormalTuple round_to_roots(const NormalTuple& x, const std::vector<PolyC>& polys, double max_distance,
                           std::optional<double> tol) {
  if (x.empty()) throw DimensionError("round_to_roots: empty tuple");
  const auto ps = expand_polys(polys, x.size(), "round_to_roots");
  const double limit = tol.value_or(default_tol(x.dim()));
  const JointDiagonalization jd = joint_diagonalize(x, limit);
  std::vector<MatrixC> out;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const auto roots = distinct_roots(ps[j]);
    if (roots.empty()) throw DomainError("round_to_roots: polynomial has no roots");
    VectorC d = jd.diagonals[j];
    for (Index i = 0; i < d.size(); ++i) {
      const cplx r = nearest(roots, d(i));
      if (std::abs(d(i) - r) > max_distance + limit) {
        std::ostringstream os;
        os << "round_to_roots: eigenvalue " << d(i) << " of member " << j + 1 << " is " << std::abs(d(i) - r)
           << " from Z(p), more than " << max_distance;
        throw DomainError(os.str());
      }
      d(i) = r;
    }
    MatrixC m = jd.unitary * d.asDiagonal() * jd.unitary.adjoint();
    if (hermiticity_defect(x[j]) <= limit && d.imag().cwiseAbs().maxCoeff() == 0.0) m = hermitian_part(m);
    out.push_back(std::move(m));
  }
  return NormalTuple(std::move(out));
}

DeformationResult connect_soft_algebraic(const NormalTuple& x, const NormalTuple& y,
                                         const std::vector<PolyC>& polys, double delta, double eps,
                                         const DeformationOptions& options) {
  require_pair(x, y, "connect_soft_algebraic");
  const Index n = x.dim();
  const Settings s = settings_for(options, n);
  const auto ps = expand_polys(polys, x.size(), "connect_soft_algebraic");
  require_commuting(x, s.tol, "connect_soft_algebraic", "X");
  require_commuting(y, s.tol, "connect_soft_algebraic", "Y");
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double rx = op_norm(poly_eval_matrix(ps[j], x[j]));
    const double ry = op_norm(poly_eval_matrix(ps[j], y[j]));
    const double dj = op_norm(x[j] - y[j]);
    if (rx > delta + s.tol || ry > delta + s.tol || dj > delta + s.tol) {
      std::ostringstream os;
      os << "connect_soft_algebraic: member " << j + 1 << " violates delta = " << delta
         << " (||p(X)|| = " << rx << ", ||p(Y)|| = " << ry << ", ||X - Y|| = " << dj << ")";
      throw ToleranceError(os.str());
    }
    gap = std::min(gap, root_gap(ps[j]));
  }
  if (delta > gap / 6.0) {
    std::ostringstream os;
    os << "connect_soft_algebraic: delta " << delta << " exceeds root gap / 6 = " << gap / 6.0;
    throw DomainError(os.str());
  }
  const NormalTuple xh = round_to_roots(x, ps, delta / 2.0, s.tol);
  const NormalTuple yh = round_to_roots(y, ps, delta / 2.0, s.tol);

  const int half = half_samples(s.samples);
  const int quarter = half_samples(half);
  DeformationOptions inner = options;
  inner.samples = quarter;
  DeformationResult mid = connect_algebraic(xh, yh, ps, eps, inner);

  DeformationResult r;
  r.approximant = mid.approximant;
  r.commuting_unitary = mid.commuting_unitary;
  r.log_argument_distance = mid.log_argument_distance;
  r.k_constant = mid.k_constant;
  r.delta_bound = mid.delta_bound;
  for (std::size_t j = 0; j < x.size(); ++j) {
    MatrixPath xbar = flat_path(x[j], xh[j], quarter);
    MatrixPath ybar = flat_path(yh[j], y[j], half);
    r.paths.push_back(concat(concat(xbar, mid.paths[j], s.tol), ybar, s.tol));
    std::vector<MatrixPath> pieces{std::move(xbar)};
    for (auto& seg : mid.segments[j]) pieces.push_back(std::move(seg));
    pieces.push_back(std::move(ybar));
    r.segments.push_back(std::move(pieces));
  }
  finalize(r, x, y, eps, s, &ps);
  return r;
}

const char* to_string(InstanceSpec::Kind kind) {
  return kind == InstanceSpec::Kind::cube ? "cube" : "sphere";
}

Instance generate_instance(const InstanceSpec& spec) {
  if (spec.m < 1 || spec.n < 1) throw DomainError("generate_instance: m and n must be >= 1");
  if (!(spec.eps_alg >= 0.0) || !(spec.delta >= 0.0))
    throw DomainError("generate_instance: eps_alg and delta must be >= 0");
  const bool sphere = spec.kind == InstanceSpec::Kind::sphere;
  if (sphere && spec.m < 2) throw DomainError("generate_instance: the sphere needs m >= 2");
  const auto m = static_cast<std::size_t>(spec.m);
  const Index n = spec.n;
  const bool algebraic = !spec.polys.empty();

  std::vector<std::vector<double>> roots(m);
  if (algebraic) {
    const auto ps = expand_polys(spec.polys, m, "generate_instance");
    for (std::size_t j = 0; j < m; ++j) {
      for (const auto& r : distinct_roots(ps[j])) {
        if (r.imag() != 0.0 || std::abs(r.real()) > 1.0 + 1e-12)
          throw DomainError("generate_instance: polynomial roots must be real and lie in [-1, 1]");
        roots[j].push_back(std::clamp(r.real(), -1.0, 1.0));
      }
      std::sort(roots[j].begin(), roots[j].end());
    }
  }

  // Root combinations on the sphere band |sum r^2 - 1| <= eps_alg / 2.
  std::vector<std::vector<double>> combos;
  if (algebraic && sphere) {
    std::vector<std::size_t> idx(m, 0);
    for (;;) {
      std::vector<double> c(m);
      double s2 = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        c[j] = roots[j][idx[j]];
        s2 += c[j] * c[j];
      }
      if (std::abs(s2 - 1.0) <= spec.eps_alg / 2.0 + 1e-12) combos.push_back(c);
      std::size_t k = 0;
      while (k < m && ++idx[k] == roots[k].size()) idx[k++] = 0;
      if (k == m) break;
    }
    if (combos.empty())
      throw DomainError("generate_instance: no combination of roots lies on the sphere within eps_alg");
  }

  Rng rng(spec.seed);
  Instance inst;
  inst.basis = random_unitary(n, rng);
  inst.x_values.assign(m, Eigen::VectorXd(n));
  inst.y_values.assign(m, Eigen::VectorXd(n));
  const double half_delta = spec.delta / 2.0;

  for (Index i = 0; i < n; ++i) {
    std::vector<double> xv(m), yv(m), lo(m, -1.0), hi(m, 1.0);
    if (algebraic) {
      std::vector<double> base(m);
      if (sphere) base = combos[static_cast<std::size_t>(rng.next() % combos.size())];
      else
        for (std::size_t j = 0; j < m; ++j) base[j] = roots[j][static_cast<std::size_t>(rng.next() % roots[j].size())];
      const double width = sphere ? spec.eps_alg / (4.0 * static_cast<double>(m)) : spec.eps_alg;
      for (std::size_t j = 0; j < m; ++j) {
        double dir = base[j] > 0.0 ? -1.0 : (base[j] < 0.0 ? 1.0 : (rng.uniform() < 0.5 ? -1.0 : 1.0));
        lo[j] = std::max(-1.0, base[j] - width);
        hi[j] = std::min(1.0, base[j] + width);
        xv[j] = std::clamp(base[j] + dir * rng.uniform() * width, lo[j], hi[j]);
        yv[j] = std::clamp(xv[j] + rng.uniform(-half_delta, half_delta), lo[j], hi[j]);
      }
    } else if (sphere) {
      std::vector<double> dir(m);
      double norm = 0.0;
      do {
        norm = 0.0;
        for (auto& c : dir) {
          c = rng.normal();
          norm += c * c;
        }
      } while (norm == 0.0);
      norm = std::sqrt(norm);
      const double wiggle = spec.eps_alg / (2.0 * static_cast<double>(m));
      double r2 = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        xv[j] = std::clamp(dir[j] / norm + rng.uniform(-wiggle, wiggle), -1.0, 1.0);
        r2 += xv[j] * xv[j];
      }
      // Y: same radius, direction moved by at most delta / 2 overall.
      const double step = half_delta / (2.0 * std::sqrt(static_cast<double>(m)));
      std::vector<double> moved(m);
      double mn = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        moved[j] = xv[j] + rng.uniform(-step, step);
        mn += moved[j] * moved[j];
      }
      mn = std::sqrt(mn);
      for (std::size_t j = 0; j < m; ++j)
        yv[j] = mn > 0.0 ? std::clamp(moved[j] / mn * std::sqrt(r2), -1.0, 1.0) : xv[j];
    } else {
      for (std::size_t j = 0; j < m; ++j) {
        xv[j] = rng.uniform(-1.0, 1.0);
        yv[j] = std::clamp(xv[j] + rng.uniform(-half_delta, half_delta), -1.0, 1.0);
      }
    }
    for (std::size_t j = 0; j < m; ++j) {
      inst.x_values[j](i) = xv[j];
      inst.y_values[j](i) = spec.delta == 0.0 ? xv[j] : yv[j];
    }
  }

  // ||1 - e^{iK}|| = 2 sin(||K|| / 2) = delta / 4
  const double angle = 2.0 * std::asin(std::min(1.0, spec.delta / 8.0));
  const MatrixC k = random_hermitian(n, rng, angle);
  inst.v = spec.delta == 0.0 ? identity(n) : exp_i_pi(k, 1.0 / std::numbers::pi);

  std::vector<MatrixC> xs, ys;
  for (std::size_t j = 0; j < m; ++j) {
    const MatrixC xj = hermitian_part(inst.basis * inst.x_values[j].cast<cplx>().asDiagonal() * inst.basis.adjoint());
    if (spec.delta == 0.0) {
      ys.push_back(xj);
    } else {
      const MatrixC yj = inst.basis * inst.y_values[j].cast<cplx>().asDiagonal() * inst.basis.adjoint();
      ys.push_back(hermitian_part(inst.v * yj * inst.v.adjoint()));
    }
    xs.push_back(xj);
  }
  inst.x = NormalTuple(std::move(xs));
  inst.y = NormalTuple(std::move(ys));
  return inst;
}

std::size_t HarnessReport::passed() const {
  return static_cast<std::size_t>(std::count_if(trials.begin(), trials.end(), [](const auto& t) { return t.pass; }));
}

double HarnessReport::achieved_mean() const {
  if (trials.empty()) return 0.0;
  double s = 0.0;
  for (const auto& t : trials) s += t.achieved_eps;
  return s / static_cast<double>(trials.size());
}

double HarnessReport::achieved_max() const {
  double s = 0.0;
  for (const auto& t : trials) s = std::max(s, t.achieved_eps);
  return s;
}

namespace {

double max_root_distance(const NormalTuple& t, const std::vector<PolyC>& ps) {
  double out = 0.0;
  for (std::size_t j = 0; j < t.size(); ++j) {
    const auto roots = distinct_roots(ps[j]);
    Eigen::ComplexEigenSolver<MatrixC> es(t[j], false);
    for (Index i = 0; i < es.eigenvalues().size(); ++i)
      out = std::max(out, std::abs(es.eigenvalues()(i) - nearest(roots, es.eigenvalues()(i))));
  }
  return out;
}

}  // namespace

double soft_delta(const NormalTuple& x, const NormalTuple& y, const std::vector<PolyC>& polys) {
  require_pair(x, y, "soft_delta");
  const auto ps = expand_polys(polys, x.size(), "soft_delta");
  double delta = max_distance(x, y);
  for (std::size_t j = 0; j < x.size(); ++j)
    delta = std::max({delta, op_norm(poly_eval_matrix(ps[j], x[j])), op_norm(poly_eval_matrix(ps[j], y[j]))});
  return std::max({delta, 2.0 * max_root_distance(x, ps), 2.0 * max_root_distance(y, ps)});
}

namespace {

void path_shape_checks(const DeformationResult& r, TrialRecord& rec) {
  for (const auto& p : r.paths)
    for (const auto& m : p.samples) {
      rec.hermitian_defect = std::max(rec.hermitian_defect, hermiticity_defect(m));
      rec.contraction_excess = std::max(rec.contraction_excess, op_norm(m) - 1.0);
    }
}

}  // namespace

HarnessReport verify_ulpac(const InstanceSpec& spec, int trials, const HarnessOptions& options) {
  if (spec.polys.empty()) throw DomainError("verify_ulpac: the instance spec needs polynomials");
  if (trials < 0) throw DomainError("verify_ulpac: trials must be >= 0");
  HarnessReport report;
  report.mode = "ulpac";
  report.spec = spec;
  report.eps = options.eps;
  report.trials.resize(static_cast<std::size_t>(trials));
  const auto ps = expand_polys(spec.polys, static_cast<std::size_t>(spec.m), "verify_ulpac");
  const bool sphere = spec.kind == InstanceSpec::Kind::sphere;

  parallel_for(report.trials.size(), options.threads, [&](std::size_t t) {
    TrialRecord& rec = report.trials[t];
    rec.index = t;
    rec.seed = derive_seed(spec.seed, t);
    InstanceSpec trial = spec;
    trial.seed = rec.seed;
    const double nd = static_cast<double>(spec.n);
    try {
      const Instance inst = generate_instance(trial);
      const double delta = soft_delta(inst.x, inst.y, ps);
      rec.delta = delta;
      DeformationOptions dopt;
      dopt.samples = options.samples;
      const DeformationResult r = connect_soft_algebraic(inst.x, inst.y, ps, delta, options.eps, dopt);
      rec.achieved_eps = r.achieved_eps;
      rec.endpoint_error = r.endpoint_error;
      rec.commutator_max = r.commutator_max;
      for (std::size_t j = 0; j < r.paths.size(); ++j)
        for (const auto& m : r.paths[j].samples)
          rec.polynomial_max = std::max(rec.polynomial_max, op_norm(poly_eval_matrix(ps[j], m)));
      path_shape_checks(r, rec);
      if (sphere) {
        double to_y = 0.0;
        const std::size_t count = r.paths.front().size();
        for (std::size_t i = 0; i < count; ++i) {
          MatrixC sum = -identity(spec.n);
          for (std::size_t j = 0; j < r.paths.size(); ++j) {
            const MatrixC& z = r.paths[j].samples[i];
            sum += z * z;
            to_y = std::max(to_y, op_norm(z - inst.y[j]));
          }
          rec.relation_residual = std::max(rec.relation_residual, op_norm(sum));
        }
        rec.relation_bound = spec.eps_alg + 2.0 * spec.m * to_y + 1e-8 * nd;
      }
      rec.pass = rec.endpoint_error <= 1e-8 * nd && rec.polynomial_max <= options.eps &&
                 rec.commutator_max <= 1e-7 * nd && rec.hermitian_defect <= 1e-8 * nd &&
                 rec.contraction_excess <= 1e-8 * nd && (!sphere || rec.relation_residual <= rec.relation_bound) &&
                 rec.achieved_eps <= options.eps;
    } catch (const Error& e) {
      rec.error = e.what();
      rec.pass = false;
    }
  });
  return report;
}

HarnessReport verify_aulpac(const InstanceSpec& spec, int trials, const HarnessOptions& options) {
  if (!spec.polys.empty()) throw DomainError("verify_aulpac: the instance spec must not carry polynomials");
  if (trials < 0) throw DomainError("verify_aulpac: trials must be >= 0");
  HarnessReport report;
  report.mode = "aulpac";
  report.spec = spec;
  report.eps = options.eps;
  report.trials.resize(static_cast<std::size_t>(trials));

  parallel_for(report.trials.size(), options.threads, [&](std::size_t t) {
    TrialRecord& rec = report.trials[t];
    rec.index = t;
    rec.seed = derive_seed(spec.seed, t);
    InstanceSpec trial = spec;
    trial.seed = rec.seed;
    const double nd = 2.0 * static_cast<double>(spec.n);
    try {
      const Instance inst = generate_instance(trial);
      const double delta = max_distance(inst.x, inst.y);
      rec.delta = delta;
      const IsospectralApproximant psi = joint_isospectral_approximant(inst.x, inst.y, delta);
      const MatrixC u = dilation_unitary(psi.adjoint().w, DilationKind::z2);
      std::vector<MatrixC> phi_h, iota_k;
      for (std::size_t j = 0; j < inst.x.size(); ++j) {
        MatrixC ph = u * embed_iota2(inst.x[j]) * u.adjoint();
        rec.dilation_distance_source = std::max(rec.dilation_distance_source, op_norm(ph - embed_iota2(inst.x[j])));
        rec.dilation_distance_target = std::max(rec.dilation_distance_target, op_norm(ph - embed_iota2(inst.y[j])));
        phi_h.push_back(hermitian_part(ph));
        iota_k.push_back(embed_iota2(inst.y[j]));
      }
      DeformationOptions dopt;
      dopt.samples = options.samples;
      const DeformationResult r =
          connect_gujc(NormalTuple(std::move(phi_h)), NormalTuple(std::move(iota_k)), options.eps, dopt);
      rec.achieved_eps = r.achieved_eps;
      rec.endpoint_error = r.endpoint_error;
      rec.commutator_max = r.commutator_max;
      path_shape_checks(r, rec);
      for (std::size_t j = 0; j < r.paths.size(); ++j)
        rec.compression_error =
            std::max(rec.compression_error, op_norm(compress_kappa(r.paths[j].front()) - inst.x[j]));
      rec.pass = rec.dilation_distance_source <= options.eps && rec.dilation_distance_target <= options.eps &&
                 rec.endpoint_error <= 1e-8 * nd && rec.commutator_max <= 1e-7 * nd &&
                 rec.hermitian_defect <= 1e-8 * nd && rec.contraction_excess <= 1e-8 * nd &&
                 rec.compression_error <= options.eps && rec.achieved_eps <= options.eps;
    } catch (const Error& e) {
      rec.error = e.what();
      rec.pass = false;
    }
  });
  return report;
}

}  // namespace matword
