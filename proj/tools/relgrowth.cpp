// relgrowth - command-line drivers for exact growth computations on Cayley
// balls: sphere tables, Floyd distances, partial cones and their types,
// boundary shadow measures, power-quotient growth experiments, transitional
// trees, and the module invariant suites.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "relgrowth/boundary.hpp"
#include "relgrowth/cones.hpp"
#include "relgrowth/floyd.hpp"
#include "relgrowth/parallel.hpp"
#include "relgrowth/presentation_io.hpp"
#include "relgrowth/quotient.hpp"
#include "relgrowth/treelab.hpp"
#include "relgrowth/verify.hpp"

using namespace relgrowth;

namespace {

struct CommonOpts {
  std::string pres_path;
  std::string pres_text;
  std::string out_path;
  std::string peripherals;
  int threads = default_threads();
  unsigned seed = 12345;
  bool gnuplot = false;
};

std::shared_ptr<const Presentation> load_pres(const CommonOpts& opts) {
  if (!opts.pres_text.empty()) return parse_presentation_text(opts.pres_text);
  if (!opts.pres_path.empty()) return load_presentation_file(opts.pres_path);
  throw input_error("no presentation given (use --pres FILE or --pres-text TEXT)");
}

// Output sink: stdout or --out file; every table starts with a timestamp
// header (the single line reruns are allowed to differ in).
struct Sink {
  std::ofstream file;
  std::ostream* os = &std::cout;
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file.open(path);
      if (!file) throw input_error("cannot open output file: " + path);
      os = &file;
    }
  }
  std::ostream& out() { return *os; }
  void header(const std::string& method) {
    auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[64];
    std::strftime(buf, sizeof(buf), "%F %T", std::gmtime(&now));
    *os << "# generated: " << buf << " UTC\n";
    *os << "#method: " << method << "\n";
  }
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_peripherals = false) {
  cmd->add_option("--pres", opts.pres_path, "presentation file");
  cmd->add_option("--pres-text", opts.pres_text, "inline presentation text");
  cmd->add_option("--out", opts.out_path, "output path (default stdout)");
  cmd->add_option("--threads", opts.threads, "worker cap");
  cmd->add_option("--seed", opts.seed, "seed for sampled checks");
  cmd->add_flag("--gnuplot", opts.gnuplot, "emit a companion gnuplot script");
  if (with_peripherals)
    cmd->add_option("--peripherals", opts.peripherals,
                    "peripheral subgroups, e.g. \"a;b\" (semicolon-separated)");
}

void emit_gnuplot(const CommonOpts& opts, const std::string& script) {
  if (!opts.gnuplot) return;
  std::string path = (opts.out_path.empty() ? std::string("relgrowth") : opts.out_path) + ".gp";
  std::ofstream gp(path);
  gp << script;
  std::cerr << "gnuplot script written to " << path << "\n";
}

void sphere_table(Sink& sink, const Ball& ball, const GrowthEstimate* est) {
  sink.out() << "radius\tsphere\tball\tratio_log" << (est ? "\tper_radius_log" : "") << "\n";
  for (int k = 0; k <= ball.radius(); ++k) {
    sink.out() << k << '\t' << ball.sphere_size(k) << '\t' << ball.ball_count(k) << '\t';
    if (k >= 1)
      sink.out() << std::log((double)ball.sphere_size(k) / (double)ball.sphere_size(k - 1));
    if (est) {
      sink.out() << '\t';
      if (k >= 1) sink.out() << est->per_radius_log[k - 1];
    }
    sink.out() << "\n";
  }
}

int cmd_ball(const CommonOpts& opts, int radius, const std::string& save_cache,
             const std::string& load_cache) {
  auto pres = load_pres(opts);
  std::shared_ptr<Ball> ball;
  if (!load_cache.empty()) {
    std::ifstream in(load_cache, std::ios::binary);
    if (!in) throw input_error("cannot open cache: " + load_cache);
    ball = Ball::load(in, pres);
  } else {
    ball = Ball::build(pres, radius);
  }
  if (!save_cache.empty()) {
    std::ofstream out(save_cache, std::ios::binary);
    ball->save(out);
  }
  Sink sink(opts.out_path);
  sink.header("exact Cayley-ball BFS; sphere ratios");
  sink.out() << "#exact: " << (ball->exact() ? "yes" : "no (free-reduction model)") << "\n";
  sink.out() << "#oracle_calls: " << ball->oracle_calls() << "\n";
  sphere_table(sink, *ball, nullptr);
  return 0;
}

int cmd_growth(const CommonOpts& opts, int radius) {
  auto pres = load_pres(opts);
  auto ball = Ball::build(pres, radius);
  auto est = growth_estimate(*ball);
  Sink sink(opts.out_path);
  sink.header(est.method);
  sink.out() << "#exact: " << (ball->exact() ? "yes" : "no") << "\n";
  sink.out() << "#headline: " << est.reported << "\n";
  sphere_table(sink, *ball, &est);
  emit_gnuplot(opts,
               "set xlabel 'radius'\nset ylabel 'ln sphere ratio'\n"
               "plot '" + opts.out_path + "' using 1:4 with linespoints title 'ratio_log'\n");
  return 0;
}

int cmd_floyd(const CommonOpts& opts, int radius, double lambda, const std::string& x_text,
              const std::string& y_text, const std::string& v_text, int visibility_depth) {
  auto pres = load_pres(opts);
  auto ball = Ball::build(pres, radius);
  const GeneratorSet& gs = pres->gens();
  Sink sink(opts.out_path);

  if (visibility_depth > 0) {
    auto rows = visibility_table(*ball, lambda, visibility_depth);
    sink.header("empirical visibility: max d(1, [x,y]) over pairs with rho_1(x,y) >= kappa");
    sink.out() << "kappa\tmax_dist\n";
    for (const auto& row : rows) sink.out() << row.kappa << '\t' << row.max_dist << "\n";
    return 0;
  }

  uint32_t x = ball->require(parse_word(gs, x_text));
  uint32_t y = ball->require(parse_word(gs, y_text));
  uint32_t v = ball->require(parse_word(gs, v_text));
  auto d = floyd_distance(x, y, v, lambda, *ball);
  sink.header("Floyd distance via " +
              std::string(ball->tree_metric() ? "unique tree paths" : "bracketing Dijkstra"));
  sink.out() << "x\ty\tbasepoint\tlambda\tlo\thi\tcertified\n";
  sink.out() << x_text << '\t' << y_text << '\t' << v_text << '\t' << lambda << '\t' << d.lo
             << '\t' << d.hi << '\t' << (d.certified ? "yes" : "no") << "\n";
  return 0;
}

int cmd_cones(const CommonOpts& opts, int radius, int eps, int R, int C, int first_sphere,
              int last_sphere, const std::string& g_text, int r, int delta, int n_max) {
  auto pres = load_pres(opts);
  auto ball = Ball::build(pres, radius);
  PeripheralContext ctx(*ball, PeripheralStructure::parse(opts.peripherals, pres->gens()));
  // default census spheres: as deep as the type horizon allows
  const int horizon = std::max(2 * R + 1, 2 * C + 1);
  if (last_sphere < 0) last_sphere = std::max(0, radius - horizon);
  if (first_sphere < 0) first_sphere = std::max(0, last_sphere - 2);
  Sink sink(opts.out_path);
  sink.header("partial cone type census (translated cones at the 2R+1 horizon) "
              "and cone-annulus counts");
  auto census = enumerate_types(ctx, eps, R, C, first_sphere, last_sphere, opts.threads);
  sink.out() << "sphere\tcone_types\tcertificates\tcumulative\n";
  for (size_t i = 0; i < census.types_per_sphere.size(); ++i)
    sink.out() << (census.first_sphere + (int)i) << '\t' << census.types_per_sphere[i] << '\t'
               << census.certificates_per_sphere[i] << '\t' << census.cumulative_types[i]
               << "\n";
  sink.out() << "#stabilized: " << (census.stabilized ? "yes" : "no") << "\n";

  uint32_t g = ball->require(parse_word(pres->gens(), g_text));
  sink.out() << "\n#cone-annulus counts at g = " << (g_text.empty() ? "1" : g_text)
             << ", r = " << r << ", delta = " << delta << "\n";
  sink.out() << "n\tomega_count\n";
  for (int n = 1; n <= n_max; ++n)
    sink.out() << n << '\t' << partial_cone_members(g, r, eps, R, ctx, n, delta).size() << "\n";
  return 0;
}

int cmd_shadow(const CommonOpts& opts, int radius, const std::string& g_text, int r, int eps,
               int R, bool partial, int max_depth) {
  auto pres = load_pres(opts);
  if (pres->kind() != PresentationKind::Free)
    throw input_error("boundary commands need a free presentation");
  auto ball = Ball::build(pres, radius);
  const int k = (int)pres->gens().size() / 2;
  PeripheralStructure structure = PeripheralStructure::parse(opts.peripherals, pres->gens());
  PeripheralContext ctx(*ball, structure);
  Sink sink(opts.out_path);

  if (!g_text.empty()) {
    uint32_t g = ball->require(parse_word(pres->gens(), g_text));
    auto dec = shadow_decompose(g, r, *ball,
                                partial ? ShadowKind::Partial : ShadowKind::Full, eps, R,
                                partial ? &ctx : nullptr);
    sink.header(std::string(partial ? "partial shadow" : "shadow") +
                " cylinder decomposition (tree model: SOME/ANY geodesic quantifiers coincide)");
    sink.out() << "#mass: " << dec.mass << "\n";
    sink.out() << "#cylinders: " << dec.cylinders.size() << "\n";
    sink.out() << "[";
    for (size_t i = 0; i < dec.cylinders.size(); ++i)
      sink.out() << (i ? ", " : "") << '"' << spell(pres->gens(), dec.cylinders[i]) << '"';
    sink.out() << "]\n";
    return 0;
  }

  std::vector<ShadowRow> rows;
  if (partial) {
    auto rep = verify_partial_shadow_lemma(*ball, ctx, r, eps, R, k, max_depth, &rows);
    sink.header("partial shadow lemma scan on the tree model: mass * (2k-1)^d over B(1," +
                std::to_string(max_depth) + ")");
    sink.out() << "#r=" << r << " eps=" << eps << " R=" << R << " count=" << rep.count
               << " min_ratio=" << rep.min_ratio << " max_ratio=" << rep.max_ratio
               << " horizon_stable=" << (rep.horizon_stable ? "yes" : "no") << "\n";
  } else {
    auto rep = verify_shadow_lemma(*ball, r, k, max_depth, &rows);
    sink.header("shadow lemma scan on the tree model: mass * (2k-1)^d over B(1," +
                std::to_string(max_depth) + ")");
    sink.out() << "#r=" << r << " count=" << rep.count << " min_ratio=" << rep.min_ratio
               << " max_ratio=" << rep.max_ratio << " constant="
               << (rep.constant_ratio ? rep.constant_ratio->str() : std::string("-")) << "\n";
  }
  sink.out() << "g\td\tmass_num\tmass_den\tratio\n";
  for (const auto& row : rows)
    sink.out() << spell(pres->gens(), ball->word_of(row.g)) << '\t' << row.d << '\t'
               << row.mass.num() << '\t' << row.mass.den() << '\t' << row.ratio.to_double()
               << "\n";
  return 0;
}

int cmd_quotient(const CommonOpts& opts, const std::string& h_text,
                 const std::string& n_list_text, int radius) {
  auto pres = load_pres(opts);
  const GeneratorSet& gs = pres->gens();
  std::vector<int> n_list;
  {
    std::stringstream ss(n_list_text);
    std::string tok;
    while (std::getline(ss, tok, ',')) n_list.push_back(std::stoi(tok));
  }
  if (n_list.empty()) throw input_error("quotient: empty exponent list");
  auto res = theorem_a_experiment(pres, parse_word(gs, h_text), n_list, radius, opts.threads);
  Sink sink(opts.out_path);
  sink.header("power-quotient growth experiment; sphere-ratio estimates");
  sink.out() << "#free_estimate: " << res.free_estimate << "\n";
  sink.out() << "#estimates_nondecreasing: " << (res.estimates_nondecreasing ? "yes" : "no")
             << "\n";
  sink.out() << "n\tradius\tsphere\tcollapse\testimate\n";
  for (const auto& leg : res.per_n) {
    if (!leg.error.empty()) {
      sink.out() << "#leg n=" << leg.n << " failed: " << leg.error << "\n";
      continue;
    }
    for (int kk = 0; kk <= res.radius; ++kk)
      sink.out() << leg.n << '\t' << kk << '\t' << leg.spheres[kk] << '\t'
                 << leg.collapse_radius << '\t' << leg.estimate << "\n";
  }
  emit_gnuplot(opts, "set xlabel 'radius'\nset ylabel 'sphere'\nset logscale y\n"
                     "plot '" + opts.out_path + "' using 2:3 with points title 'spheres'\n");
  return 0;
}

int cmd_filter(const CommonOpts& opts, int radius, const std::string& root_text, int L, int eps,
               int check_n) {
  auto pres = load_pres(opts);
  const GeneratorSet& gs = pres->gens();
  auto ball = Ball::build(pres, radius);
  ContainmentFilter filter{free_reduce(gs, parse_word(gs, root_text)), L, eps};
  auto kept = language_filter(*ball, filter);
  Sink sink(opts.out_path);
  sink.header("language filter census: elements whose lexi-geodesics avoid E(root, L)");
  std::vector<size_t> per_sphere(radius + 1, 0);
  for (uint32_t e : kept) ++per_sphere[ball->depth(e)];
  sink.out() << "sphere\tkept\ttotal\n";
  for (int k = 0; k <= radius; ++k)
    sink.out() << k << '\t' << per_sphere[k] << '\t' << ball->sphere_size(k) << "\n";
  if (check_n >= 2) {
    auto q = make_power_quotient(pres, filter.root, check_n);
    auto rep = injectivity_check(kept, q, *ball, opts.threads);
    sink.out() << "#injectivity: n = " << check_n << ", pairs = " << rep.checked_pairs
               << ", collisions = " << rep.collisions.size() << "\n";
    for (auto [x, y] : rep.collisions)
      sink.out() << "#collision: " << spell(gs, ball->word_of(x)) << " = "
                 << spell(gs, ball->word_of(y)) << "\n";
  }
  return 0;
}

int cmd_tree(const CommonOpts& opts, int radius, int r, int delta, int eps, int R, int depth,
             size_t branching) {
  auto pres = load_pres(opts);
  auto ball = Ball::build(pres, radius);
  PeripheralContext ctx(*ball, PeripheralStructure::parse(opts.peripherals, pres->gens()));
  TreeConfig cfg{r, delta, eps, R, branching};
  auto tree = build_tree(cfg, depth, ctx, opts.threads);
  auto rep = verify_tree(tree, ctx);
  Sink sink(opts.out_path);
  sink.header("greedy transitional tree (validated selection inside the ball, not the exact "
              "fixed-point set)");
  sink.out() << "#levels:";
  for (size_t c : rep.level_counts) sink.out() << ' ' << c;
  sink.out() << "\n#min_branching: " << rep.min_branching
             << "\n#mean_branching: " << rep.mean_branching << "\n#spacing: " << rep.spacing
             << " (bound " << rep.spacing_bound << ")"
             << "\n#rate_bound: " << (rep.rate_bound ? std::to_string(*rep.rate_bound) : "-")
             << "\n#empirical_slope: " << rep.empirical_slope << "\n";
  sink.out() << tree_to_json(tree, ctx);
  return 0;
}

int cmd_verify_all(const CommonOpts& opts) {
  Sink sink(opts.out_path);
  sink.header("module invariant suites over the bundled presentations");
  bool ok = report_verify_all(sink.out(), opts.seed, opts.threads);
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"relgrowth - exact growth invariants of (relatively) hyperbolic group models"};
  app.require_subcommand(1);

  CommonOpts opts;
  int radius = 6, r = 0, eps = 0, R = 2, C = 2, delta = 0, depth = 3;
  int first_sphere = -1, last_sphere = -1, n_max = 4, max_depth = 5, check_n = 0;
  double lambda = 2.0;
  size_t branching = 3;
  std::string g_text, x_text, y_text, v_text, h_text = "abAB", n_list = "2,3,4,6";
  std::string root_text = "a", save_cache, load_cache;
  int L = 4;

  auto* ball_cmd = app.add_subcommand("ball", "build a Cayley ball, emit the sphere table");
  add_common(ball_cmd, opts);
  ball_cmd->add_option("--radius", radius, "ball radius");
  ball_cmd->add_option("--save-cache", save_cache, "write the binary ball cache");
  ball_cmd->add_option("--load-cache", load_cache, "read a binary ball cache");

  auto* growth_cmd = app.add_subcommand("growth", "growth-rate estimators from exact spheres");
  add_common(growth_cmd, opts);
  growth_cmd->add_option("--radius", radius, "ball radius");

  auto* floyd_cmd = app.add_subcommand("floyd", "Floyd distance between two elements");
  add_common(floyd_cmd, opts);
  floyd_cmd->add_option("--radius", radius, "ball radius");
  floyd_cmd->add_option("--lambda", lambda, "scaling base (> 1)");
  floyd_cmd->add_option("--x", x_text, "first element");
  floyd_cmd->add_option("--y", y_text, "second element");
  floyd_cmd->add_option("--v", v_text, "basepoint (default identity)");
  int visibility_depth = 0;
  floyd_cmd->add_option("--visibility-depth", visibility_depth,
                        "emit the empirical visibility table over B(1,N) instead");

  auto* cones_cmd = app.add_subcommand("cones", "partial cone types and annulus counts");
  add_common(cones_cmd, opts, true);
  cones_cmd->add_option("--radius", radius, "ball radius");
  cones_cmd->add_option("--eps", eps, "deepness tube width");
  cones_cmd->add_option("--R", R, "transition window radius");
  cones_cmd->add_option("--C", C, "F_g horizon parameter");
  cones_cmd->add_option("--first-sphere", first_sphere, "census start sphere (default auto)");
  cones_cmd->add_option("--last-sphere", last_sphere, "census end sphere (default auto)");
  cones_cmd->add_option("--g", g_text, "annulus base element (default identity)");
  cones_cmd->add_option("--r", r, "cone meeting radius");
  cones_cmd->add_option("--delta", delta, "annulus width");
  cones_cmd->add_option("--n-max", n_max, "annulus offsets 1..n_max");

  auto* shadow_cmd = app.add_subcommand("shadow", "boundary shadow decompositions and scans");
  add_common(shadow_cmd, opts, true);
  shadow_cmd->add_option("--radius", radius, "ball radius");
  shadow_cmd->add_option("--g", g_text, "decompose the shadow of this element");
  shadow_cmd->add_option("--r", r, "shadow radius");
  shadow_cmd->add_option("--max-depth", max_depth, "scan depth when no --g is given");

  auto* pshadow_cmd =
      app.add_subcommand("partial-shadow", "partial shadow decompositions and scans");
  add_common(pshadow_cmd, opts, true);
  pshadow_cmd->add_option("--radius", radius, "ball radius");
  pshadow_cmd->add_option("--g", g_text, "decompose the partial shadow of this element");
  pshadow_cmd->add_option("--r", r, "shadow radius");
  pshadow_cmd->add_option("--eps", eps, "deepness tube width");
  pshadow_cmd->add_option("--R", R, "transition window radius");
  pshadow_cmd->add_option("--max-depth", max_depth, "scan depth when no --g is given");

  auto* quot_cmd = app.add_subcommand("quotient", "power-quotient growth experiment");
  quot_cmd->set_help_flag("--help", "print help");  // frees -h for the element word
  add_common(quot_cmd, opts);
  quot_cmd->add_option("--h", h_text, "hyperbolic element (word)");
  quot_cmd->add_option("--n", n_list, "comma-separated exponents");
  quot_cmd->add_option("--radius", radius, "ball radius per leg");

  auto* filter_cmd = app.add_subcommand("filter", "E(h,L) containment filter census");
  add_common(filter_cmd, opts);
  filter_cmd->add_option("--radius", radius, "ball radius");
  filter_cmd->add_option("--root", root_text, "root word of E(h, L)");
  filter_cmd->add_option("--L", L, "length threshold");
  filter_cmd->add_option("--eps", eps, "containment tube width");
  filter_cmd->add_option("--check-injectivity", check_n,
                         "also run the pairwise quotient check at this exponent");

  auto* tree_cmd = app.add_subcommand("tree", "build and verify a transitional tree");
  add_common(tree_cmd, opts, true);
  tree_cmd->add_option("--radius", radius, "ball radius");
  tree_cmd->add_option("--r", r, "level step")->required();
  tree_cmd->add_option("--delta", delta, "annulus width");
  tree_cmd->add_option("--eps", eps, "deepness tube width");
  tree_cmd->add_option("--R", R, "transition window radius");
  tree_cmd->add_option("--depth", depth, "tree depth (levels)");
  tree_cmd->add_option("--branching", branching, "target children per vertex");

  auto* verify_cmd = app.add_subcommand("verify-all", "run every module invariant suite");
  add_common(verify_cmd, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (ball_cmd->parsed()) return cmd_ball(opts, radius, save_cache, load_cache);
    if (growth_cmd->parsed()) return cmd_growth(opts, radius);
    if (floyd_cmd->parsed())
      return cmd_floyd(opts, radius, lambda, x_text, y_text, v_text, visibility_depth);
    if (cones_cmd->parsed())
      return cmd_cones(opts, radius, eps, R, C, first_sphere, last_sphere, g_text, r, delta,
                       n_max);
    if (shadow_cmd->parsed())
      return cmd_shadow(opts, radius, g_text, r, eps, R, false, max_depth);
    if (pshadow_cmd->parsed())
      return cmd_shadow(opts, radius, g_text, r, eps, R, true, max_depth);
    if (quot_cmd->parsed()) return cmd_quotient(opts, h_text, n_list, radius);
    if (filter_cmd->parsed()) return cmd_filter(opts, radius, root_text, L, eps, check_n);
    if (tree_cmd->parsed())
      return cmd_tree(opts, radius, r, delta, eps, R, depth, branching);
    if (verify_cmd->parsed()) return cmd_verify_all(opts);
  } catch (const budget_error& e) {
    std::cerr << "budget exceeded: " << e.what() << " (completed stage " << e.completed
              << ")\n";
    return 3;
  } catch (const input_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
