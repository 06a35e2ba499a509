#include "matword/cli/dispatch.hpp"

#include <cstdlib>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "matword/cli/expressions.hpp"
#include "matword/cli/io.hpp"
#include "matword/cli/reports.hpp"
#include "matword/deformation.hpp"
#include "matword/errors.hpp"
#include "matword/minpoly.hpp"
#include "matword/pseudospectra.hpp"
#include "matword/words.hpp"

namespace matword::cli {

namespace {

using nlohmann::json;

int resolve_thread_flag(const std::optional<int>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("MATWORD_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 0) return static_cast<int>(v);
    throw IoError(std::string("MATWORD_THREADS must be a non-negative integer, got '") + env + "'");
  }
  return 0;
}

// A single matrix, or A = X + iY for a pair of hermitian matrices.
MatrixC load_operator(const std::string& path) {
  const MatrixFile f = load_matrices(path);
  if (f.matrices.size() == 1) return f.matrices.front();
  if (f.matrices.size() == 2) return f.matrices[0] + cplx(0.0, 1.0) * f.matrices[1];
  throw IoError(path + ": expected one matrix or a pair (X, Y)");
}

NormalTuple load_tuple(const std::string& path) { return NormalTuple(load_matrices(path).matrices); }

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) out << text;
  else write_text(path, text);
}

std::string sibling(const std::string& path, const std::string& suffix) {
  const auto dot = path.rfind('.');
  const auto slash = path.rfind('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + suffix;
  return path.substr(0, dot) + suffix;
}

struct Common {
  std::optional<int> threads;
  void add(CLI::App* app) {
    app->add_option("--threads", threads, "Worker threads, 0 = all cores (fallback: MATWORD_THREADS)")
        ->check(CLI::NonNegativeNumber);
  }
};

// --- scan ---------------------------------------------------------------

struct ScanArgs : Common {
  std::string input, grid = "cheb:101x101", bounds = "-1,1,-1,1", out, triples, report;
  double eps = 0.0;
  std::optional<double> refine_threshold;
  int max_depth = 4;
};

int run_scan(const ScanArgs& a, std::ostream& out) {
  const MatrixC op = load_operator(a.input);
  const int threads = resolve_thread_flag(a.threads);
  Grid2D g = parse_grid(a.grid, parse_bounds(a.bounds));
  if (a.refine_threshold) {
    if (g.kind != Grid2D::Kind::quadtree) throw DomainError("scan: --refine needs a quad: grid");
    g = refine_adaptively(g, [&](const Grid2D& gg) { return sigma_min_field(op, gg, threads); },
                          *a.refine_threshold, a.max_depth)
            .grid;
  }
  const Pseudospectrum ps = pseudospectrum(op, a.eps, g, threads);
  std::ostringstream csv;
  write_field_csv(csv, ps.field, &ps.mask);
  write_text(a.out, csv.str());

  const auto triples = scan_triples(op, a.eps, ps.field, threads);
  json list = json::array();
  double worst = 0.0;
  for (const auto& t : triples) {
    list.push_back(triple_to_json(t));
    worst = std::max(worst, t.residual);
  }
  const std::string triples_path = a.triples.empty() ? sibling(a.out, ".triples.json") : a.triples;
  write_text(triples_path, render_report("scan", json{{"eps", a.eps}, {"count", triples.size()}, {"triples", list}}));

  const json summary{{"command", "scan"},
                     {"dim", op.rows()},
                     {"eps", a.eps},
                     {"nodes", ps.field.grid.size()},
                     {"in_pseudospectrum", ps.count()},
                     {"triples", triples.size()},
                     {"max_triple_residual", worst}};
  emit(a.report, render_report("scan", summary), out);
  return kExitOk;
}

// --- minpoly ------------------------------------------------------------

struct MinpolyArgs : Common {
  std::string input, out;
  double delta = 0.0;
  int max_deg = 10;
  std::uint64_t seed = 0;
  int ritz_steps = 60;
};

int run_minpoly(const MinpolyArgs& a, std::ostream& out) {
  const MatrixC op = load_operator(a.input);
  const MinPolyResult r = approx_min_poly(op, a.delta, a.max_deg, a.seed, a.ritz_steps);
  json ritz = json::array();
  for (const auto& z : r.ritz) ritz.push_back(json::array({z.real(), z.imag()}));
  json roots = json::array();
  for (const auto& z : poly_roots(r.p)) roots.push_back(json::array({z.real(), z.imag()}));
  const bool ok = r.residual <= a.delta;
  const json body{{"command", "minpoly"}, {"dim", op.rows()},   {"delta", a.delta},  {"max_deg", a.max_deg},
                  {"seed", a.seed},       {"p", poly_to_json(r.p)}, {"degree", r.p.degree()},
                  {"residual", r.residual}, {"pass", ok},       {"sweep", r.sweep},  {"ritz", ritz},
                  {"roots", roots}};
  emit(a.out, render_report("minpoly", body), out);
  return ok ? kExitOk : kExitConstraintFailure;
}

// --- lemniscate ---------------------------------------------------------

struct LemniscateArgs : Common {
  std::string poly, poly_file, grid = "cheb:101x101", bounds = "-1,1,-1,1", out, contours;
  double level = 0.0;
};

int run_lemniscate(const LemniscateArgs& a, std::ostream& out) {
  if (a.poly.empty() == a.poly_file.empty()) throw IoError("lemniscate: give exactly one of --poly, --poly-file");
  PolyC p;
  if (!a.poly.empty()) {
    p = parse_poly(a.poly);
  } else {
    json doc;
    try {
      doc = json::parse(report_body(read_text(a.poly_file)));
    } catch (const json::parse_error& e) {
      throw IoError(a.poly_file + ": parse error at byte " + std::to_string(e.byte));
    }
    p = poly_from_json(doc.contains("p") ? doc["p"] : doc);
  }
  const ScalarField2D f = lemniscate_field(p, parse_grid(a.grid, parse_bounds(a.bounds)), resolve_thread_flag(a.threads));
  std::ostringstream csv;
  write_field_csv(csv, f);
  write_text(a.out, csv.str());
  const auto lines = lemniscate_contours(f, a.level);
  if (!a.contours.empty()) write_text(a.contours, contours_csv(lines));
  std::size_t closed = 0;
  for (const auto& l : lines) closed += l.closed ? 1 : 0;
  out << render_report("lemniscate", json{{"command", "lemniscate"},
                                          {"p", poly_to_json(p)},
                                          {"level", a.level},
                                          {"nodes", f.grid.size()},
                                          {"contours", lines.size()},
                                          {"closed", closed}});
  return kExitOk;
}

// --- grid ---------------------------------------------------------------

struct GridArgs : Common {
  std::string grid = "quad:2", bounds = "-1,1,-1,1", input, out;
  double threshold = 0.0;
  int max_depth = 4;
};

int run_grid(const GridArgs& a, std::ostream& out) {
  Grid2D g = parse_grid(a.grid, parse_bounds(a.bounds));
  std::ostringstream csv;
  std::size_t leaves = g.leaves.size();
  if (!a.input.empty()) {
    const MatrixC op = load_operator(a.input);
    const int threads = resolve_thread_flag(a.threads);
    auto eval = [&](const Grid2D& gg) { return sigma_min_field(op, gg, threads); };
    const ScalarField2D f = g.kind == Grid2D::Kind::quadtree
                                ? refine_adaptively(g, eval, a.threshold, a.max_depth)
                                : eval(g);
    write_field_csv(csv, f);
    g = f.grid;
    leaves = g.leaves.size();
  } else {
    csv << "re,im\n";
    char buf[80];
    for (const auto& z : g.nodes) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", z.real(), z.imag());
      csv << buf;
    }
  }
  write_text(a.out, csv.str());
  int depth = 0;
  for (const auto& c : g.leaves) depth = std::max(depth, c.depth);
  out << render_report("grid", json{{"command", "grid"},
                                    {"kind", g.kind == Grid2D::Kind::tensor ? "tensor" : "quadtree"},
                                    {"nodes", g.size()},
                                    {"leaves", leaves},
                                    {"max_depth", depth}});
  return kExitOk;
}

// --- deform -------------------------------------------------------------

struct DeformArgs : Common {
  std::string mode, x, y, polys, report, paths;
  double eps = 0.0;
  std::optional<double> delta, tol;
  int samples = kDefaultSamples;
};

int run_deform(const DeformArgs& a, std::ostream& out) {
  const NormalTuple x = load_tuple(a.x);
  const NormalTuple y = load_tuple(a.y);
  DeformationOptions opt;
  opt.samples = a.samples;
  opt.tol = a.tol;
  DeformationResult r;
  if (a.mode == "gujc") {
    r = connect_gujc(x, y, a.eps, opt);
  } else {
    if (a.polys.empty()) throw IoError("deform " + a.mode + ": --polys is required");
    const auto ps = parse_poly_list(a.polys);
    if (a.mode == "algebraic") r = connect_algebraic(x, y, ps, a.eps, opt);
    else r = connect_soft_algebraic(x, y, ps, a.delta.value_or(soft_delta(x, y, ps)), a.eps, opt);
  }
  emit(a.report, render_report("deform", deformation_to_json(a.mode, r)), out);
  if (!a.paths.empty()) write_text(a.paths, paths_jsonl(r));
  return r.pass() ? kExitOk : kExitConstraintFailure;
}

// --- verify / generate --------------------------------------------------

struct SpecArgs {
  std::string kind = "cube", polys;
  int m = 2, n = 16;
  double delta = 0.02, eps_alg = 0.0;
  std::uint64_t seed = 0;

  void add(CLI::App* app) {
    app->add_option("--kind", kind, "cube or sphere")->check(CLI::IsMember({"cube", "sphere"}));
    app->add_option("--m", m, "Tuple arity")->check(CLI::PositiveNumber);
    app->add_option("--n", n, "Matrix size")->check(CLI::PositiveNumber);
    app->add_option("--delta", delta, "Pair distance")->check(CLI::NonNegativeNumber);
    app->add_option("--eps-alg", eps_alg, "Relation slack")->check(CLI::NonNegativeNumber);
    app->add_option("--polys", polys, "Polynomials p_j, ';' separated");
    app->add_option("--seed", seed, "Seed");
  }
  InstanceSpec spec() const {
    InstanceSpec s;
    s.kind = kind == "sphere" ? InstanceSpec::Kind::sphere : InstanceSpec::Kind::cube;
    s.m = m;
    s.n = n;
    s.delta = delta;
    s.eps_alg = eps_alg;
    s.seed = seed;
    if (!polys.empty()) s.polys = parse_poly_list(polys);
    return s;
  }
};

struct VerifyArgs : Common {
  std::string mode, report, csv;
  SpecArgs spec;
  int trials = 50;
  double eps = 0.2;
  int samples = kDefaultSamples;
};

int run_verify(VerifyArgs a, std::ostream& out) {
  if (a.mode == "ulpac" && a.spec.polys.empty()) a.spec.polys = "z^2-1";
  const InstanceSpec spec = a.spec.spec();
  HarnessOptions opt;
  opt.eps = a.eps;
  opt.samples = a.samples;
  opt.threads = resolve_thread_flag(a.threads);
  const HarnessReport r = a.mode == "ulpac" ? verify_ulpac(spec, a.trials, opt) : verify_aulpac(spec, a.trials, opt);
  emit(a.report, render_report("verify", harness_to_json(r)), out);
  if (!a.csv.empty()) write_text(a.csv, harness_csv(r));
  return r.passed() == r.trials.size() ? kExitOk : kExitConstraintFailure;
}

struct GenerateArgs {
  SpecArgs spec;
  std::string out_x, out_y;
};

int run_generate(const GenerateArgs& a, std::ostream& out) {
  const InstanceSpec spec = a.spec.spec();
  const Instance inst = generate_instance(spec);
  json meta = instance_spec_to_json(spec);
  MatrixFile fx{inst.x.matrices(), {}, meta};
  MatrixFile fy{inst.y.matrices(), {}, meta};
  for (int j = 1; j <= spec.m; ++j) {
    fx.names.push_back("X" + std::to_string(j));
    fy.names.push_back("Y" + std::to_string(j));
  }
  save_matrices(a.out_x, fx);
  save_matrices(a.out_y, fy);
  double dist = 0.0;
  for (std::size_t j = 0; j < inst.x.size(); ++j) dist = std::max(dist, op_norm(inst.x[j] - inst.y[j]));
  out << render_report("generate", json{{"command", "generate"},
                                        {"spec", meta},
                                        {"distance", dist},
                                        {"commutator_x", inst.x.commutator_bound()},
                                        {"commutator_y", inst.y.commutator_bound()}});
  return kExitOk;
}

// --- words --------------------------------------------------------------

struct WordsArgs {
  std::string mode, input, f, system, out, report;
  double eps = 0.0;
};

int run_words(const WordsArgs& a, std::ostream& out) {
  const NormalTuple x = load_tuple(a.input);
  if (a.mode == "eval") {
    if (a.f.empty()) throw IoError("words eval: --f is required");
    WordFunction fn;
    fn.arity = x.size();
    fn.components = parse_word_sums(a.f, x.size());
    const auto values = eval_word_function(fn, x);
    MatrixFile file{values, {}, json{{"function", a.f}}};
    if (a.out.empty()) out << dump_matrices(file);
    else save_matrices(a.out, file);
    return kExitOk;
  }
  if (a.system.empty()) throw IoError("words membership: --system is required");
  NCPolySystem sys;
  sys.num_vars = x.size();
  sys.polys = parse_word_sums(a.system, x.size());
  sys.eps = a.eps;
  const MembershipResult m = variety_membership(x, sys);
  emit(a.report,
       render_report("words", json{{"command", "words membership"},
                                   {"system", a.system},
                                   {"eps", a.eps},
                                   {"member", m.member},
                                   {"residuals", m.residuals}}),
       out);
  return m.member ? kExitOk : kExitConstraintFailure;
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"matword: local matrix homotopies and pseudospectral tools", "matword"};
  app.require_subcommand(1);
  app.fallthrough(false);

  ScanArgs scan;
  auto* s = app.add_subcommand("scan", "Pseudospectrum field and scanning triples");
  s->add_option("--input", scan.input, "Matrix file (A, or the pair X, Y for A = X + iY)")->required();
  s->add_option("--eps", scan.eps, "Pseudospectral level")->required()->check(CLI::PositiveNumber);
  s->add_option("--grid", scan.grid, "cheb:PxQ or quad:D[:L]");
  s->add_option("--bounds", scan.bounds, "re_min,re_max,im_min,im_max");
  s->add_option("--out", scan.out, "Field CSV (re,im,value,mask)")->required();
  s->add_option("--triples", scan.triples, "Triples JSON (default: next to --out)");
  s->add_option("--refine", scan.refine_threshold, "Refine quad leaves with sigma_min <= threshold");
  s->add_option("--max-depth", scan.max_depth, "Refinement depth limit");
  s->add_option("--report", scan.report, "Summary report path (default: stdout)");
  scan.add(s);

  MinpolyArgs mp;
  auto* m = app.add_subcommand("minpoly", "Approximate minimal polynomial from Ritz values");
  m->add_option("--input", mp.input, "Matrix file")->required();
  m->add_option("--delta", mp.delta, "Target ||p(A)||")->required()->check(CLI::NonNegativeNumber);
  m->add_option("--max-deg", mp.max_deg, "Largest degree tried")->check(CLI::PositiveNumber);
  m->add_option("--seed", mp.seed, "Arnoldi start vector seed");
  m->add_option("--ritz-steps", mp.ritz_steps, "Arnoldi steps")->check(CLI::PositiveNumber);
  m->add_option("--out", mp.out, "Report path (default: stdout)");
  mp.add(m);

  LemniscateArgs lm;
  auto* l = app.add_subcommand("lemniscate", "|p(z)| field and level-set contours");
  l->add_option("--poly", lm.poly, "\"c0,c1,...\" or \"z^2-1\"");
  l->add_option("--poly-file", lm.poly_file, "minpoly report or coefficient JSON");
  l->add_option("--level", lm.level, "Contour level")->required()->check(CLI::PositiveNumber);
  l->add_option("--grid", lm.grid, "cheb:PxQ or quad:D[:L]");
  l->add_option("--bounds", lm.bounds, "re_min,re_max,im_min,im_max");
  l->add_option("--out", lm.out, "Field CSV")->required();
  l->add_option("--contours", lm.contours, "Contour CSV");
  lm.add(l);

  GridArgs gr;
  auto* g = app.add_subcommand("grid", "Generate a grid, or refine it against sigma_min of a matrix");
  g->add_option("--grid", gr.grid, "cheb:PxQ or quad:D[:L]");
  g->add_option("--bounds", gr.bounds, "re_min,re_max,im_min,im_max");
  g->add_option("--input", gr.input, "Matrix file driving refinement");
  g->add_option("--threshold", gr.threshold, "Refine leaves with sigma_min <= threshold");
  g->add_option("--max-depth", gr.max_depth, "Refinement depth limit");
  g->add_option("--out", gr.out, "Node or field CSV")->required();
  gr.add(g);

  DeformArgs df;
  auto* d = app.add_subcommand("deform", "Connect two commuting tuples by a sampled path");
  d->add_option("mode", df.mode, "gujc, algebraic or soft")
      ->required()
      ->check(CLI::IsMember({"gujc", "algebraic", "soft"}));
  d->add_option("--x", df.x, "Source tuple")->required();
  d->add_option("--y", df.y, "Target tuple")->required();
  d->add_option("--polys", df.polys, "p_j, ';' separated (algebraic, soft)");
  d->add_option("--eps", df.eps, "Distance bound along paths")->required()->check(CLI::PositiveNumber);
  d->add_option("--delta", df.delta, "Soft residual bound (default: measured)");
  d->add_option("--tol", df.tol, "Precondition slack (default 1e-8 n)");
  d->add_option("--samples", df.samples, "Samples per path")->check(CLI::Range(3, 1 << 20));
  d->add_option("--report", df.report, "Report path (default: stdout)");
  d->add_option("--paths", df.paths, "JSONL export of path samples");
  df.add(d);

  VerifyArgs vf;
  auto* v = app.add_subcommand("verify", "Randomised ULPAC / AULPAC harness");
  v->add_option("mode", vf.mode, "ulpac or aulpac")->required()->check(CLI::IsMember({"ulpac", "aulpac"}));
  vf.spec.add(v);
  v->add_option("--trials", vf.trials, "Number of trials")->check(CLI::NonNegativeNumber);
  v->add_option("--eps", vf.eps, "Pass threshold")->check(CLI::PositiveNumber);
  v->add_option("--samples", vf.samples, "Samples per path")->check(CLI::Range(3, 1 << 20));
  v->add_option("--report", vf.report, "Report path (default: stdout)");
  v->add_option("--csv", vf.csv, "Per-trial CSV summary");
  vf.add(v);

  GenerateArgs gn;
  auto* gen = app.add_subcommand("generate", "Write a seeded (X, Y) instance pair");
  gn.spec.add(gen);
  gen->add_option("--out-x", gn.out_x, "X tuple file")->required();
  gen->add_option("--out-y", gn.out_y, "Y tuple file")->required();

  WordsArgs wd;
  auto* w = app.add_subcommand("words", "Evaluate word functions or test variety membership");
  w->add_option("mode", wd.mode, "eval or membership")->required()->check(CLI::IsMember({"eval", "membership"}));
  w->add_option("--input", wd.input, "Tuple file")->required();
  w->add_option("--f", wd.f, "Components, ';' separated, e.g. \"x1 x2 - x2 x1; x1^2\"");
  w->add_option("--system", wd.system, "Polynomials, ';' separated");
  w->add_option("--eps", wd.eps, "Membership slack")->check(CLI::NonNegativeNumber);
  w->add_option("--out", wd.out, "Output matrix file (eval)");
  w->add_option("--report", wd.report, "Report path (membership)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code == 0) return kExitOk;
    err << app.help();
    return kExitUsage;
  }

  try {
    if (s->parsed()) return run_scan(scan, out);
    if (m->parsed()) return run_minpoly(mp, out);
    if (l->parsed()) return run_lemniscate(lm, out);
    if (g->parsed()) return run_grid(gr, out);
    if (d->parsed()) return run_deform(df, out);
    if (v->parsed()) return run_verify(vf, out);
    if (gen->parsed()) return run_generate(gn, out);
    if (w->parsed()) return run_words(wd, out);
  } catch (const IoError& e) {
    err << "matword: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "matword: input rejected: " << e.what() << "\n";
    return kExitUsage;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace matword::cli
