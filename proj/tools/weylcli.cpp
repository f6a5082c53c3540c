// Batch front end: load JSON inputs, run the requested operation suite, and
// emit a machine-readable report.  Exit status: 0 when every check passes,
// 1 when a check fails, 2 on invalid input.  The WEYLMOYAL_THREADS environment
// variable caps worker threads in the underlying library.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <weylmoyal/io_json.hpp>
#include <weylmoyal/weylmoyal.hpp>

using namespace weylmoyal;
using nlohmann::json;

namespace {

struct RunConfig {
  std::vector<std::string> input_paths;
  std::string output_path;
  std::uint64_t seed = 42;
  double tol = 1e-10;
  int lattice_n = 2;
  int lattice_points = 5;
  double box_length = 7.0;
};

struct Check {
  std::string name;
  double measured = 0.0;
  double bound = 0.0;
  bool pass = false;
};

Check bounded(const std::string& name, double measured, double bound) {
  return Check{name, measured, bound, measured <= bound};
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw BadInput("input file not found: " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw BadInput("invalid JSON in " + path + ": " + e.what());
  }
}

void require_inputs(const RunConfig& cfg, std::size_t lo, std::size_t hi,
                    const char* what) {
  if (cfg.input_paths.size() < lo || cfg.input_paths.size() > hi)
    throw BadInput(std::string("--input: ") + what);
}

PhaseSpaceFunction conj_function(const PhaseSpaceFunction& f) {
  return PhaseSpaceFunction::from_values(f.lattice, f.values.conjugate());
}

// ---------------------------------------------------------------
// subcommand bodies: each returns its checks and may set an artifact
// ---------------------------------------------------------------

std::vector<Check> run_darboux(const RunConfig& cfg, json& artifact) {
  require_inputs(cfg, 1, 1, "darboux needs exactly one antisymmetric-form file");
  const Bivector sigma = io::bivector_from_json(load_json(cfg.input_paths[0]));
  const DarbouxFrame frame = darboux_frame(sigma);
  const Matrix reduced = frame.basis.transpose() * sigma.matrix * frame.basis;
  const double residual =
      (reduced - standard_form(sigma.n(), frame.r).matrix).cwiseAbs().maxCoeff();
  const double parity = std::abs(2 * frame.r - rank(sigma));
  artifact = io::to_json(frame);
  return {bounded("reduction_residual", residual, cfg.tol),
          bounded("rank_parity", parity, 0.0)};
}

std::vector<Check> run_star(const RunConfig& cfg, json& artifact) {
  require_inputs(cfg, 3, 3, "star needs two function files and one form file");
  const PhaseSpaceFunction f = io::function_from_json(load_json(cfg.input_paths[0]));
  const PhaseSpaceFunction g = io::function_from_json(load_json(cfg.input_paths[1]));
  const Bivector sigma = io::bivector_from_json(load_json(cfg.input_paths[2]));
  const PhaseSpaceFunction fg = star(f, g, sigma);
  artifact = io::to_json(fg);

  std::vector<Check> checks;
  checks.push_back(bounded("banach_l1_excess",
                           l1check_norm(fg) - l1check_norm(f) * l1check_norm(g), cfg.tol));
  if (sigma.matrix.cwiseAbs().maxCoeff() == 0.0)
    checks.push_back(bounded(
        "zero_form_pointwise",
        (fg.values - f.values.cwiseProduct(g.values)).cwiseAbs().maxCoeff(), cfg.tol));
  if (f.lattice.n == 2)
    checks.push_back(bounded("path_agreement",
                             (star(f, g, sigma, StarPath::Shear).values -
                              star(f, g, sigma, StarPath::Blocked).values)
                                 .cwiseAbs()
                                 .maxCoeff(),
                             cfg.tol));
  return checks;
}

std::vector<Check> run_quantize(const RunConfig& cfg, json& artifact) {
  require_inputs(cfg, 1, 1, "quantize needs exactly one function file");
  const PhaseSpaceFunction f = io::function_from_json(load_json(cfg.input_paths[0]));
  const LatticeSpec& lat = f.lattice;
  if (lat.n % 2 != 0)
    throw BadInput("function.lattice.n must be even for the finite model");
  if (lat.box_length != static_cast<double>(lat.points_per_axis))
    throw BadInput(
        "function.lattice.box_length must equal points_per_axis for the finite model");
  const int N = lat.points_per_axis;
  const FiniteWeylSystem sys = finite_weyl_system(N, lat.n / 2);
  const WeylOperator W = weyl_quantize(sys, f);
  artifact = io::to_json(W);

  std::vector<Check> checks;
  // allow norm-computation rounding: the bound itself is exact
  checks.push_back(bounded("norm_bound_excess", operator_norm(W) - l1check_norm(f), 1e-12));
  if (N % 2 == 1) {
    const WeylOperator Wc = weyl_quantize(sys, conj_function(f));
    checks.push_back(bounded(
        "adjoint_compatibility",
        (Wc.matrix - W.matrix.adjoint()).cwiseAbs().maxCoeff(), cfg.tol));
  }
  return checks;
}

std::vector<Check> run_verify(const RunConfig& cfg, json&) {
  if (cfg.lattice_n < 2 || cfg.lattice_n % 2 != 0)
    throw BadInput("--lattice-n: need an even value >= 2 for the finite model");
  if (cfg.lattice_points < 2) throw BadInput("--lattice-points: need at least 2");
  if (cfg.box_length <= 0.0) throw BadInput("--box-length: need a positive length");
  const int N = cfg.lattice_points;
  const int r = cfg.lattice_n / 2;
  const FiniteWeylSystem sys = finite_weyl_system(N, r);
  const LatticeSpec model = model_lattice(sys);
  const Bivector sigma = model_bivector(sys);
  const Bivector J = standard_form(2 * r, r);
  std::mt19937_64 rng(cfg.seed);
  std::vector<Check> checks;

  {  // Darboux reduction on seeded random forms
    std::normal_distribution<double> normal(0.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 25; ++trial) {
      const int n = 2 + trial % 5;
      Matrix a(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = normal(rng);
      const Bivector s(a - a.transpose());
      const DarbouxFrame frame = darboux_frame(s);
      worst = std::max(worst, (frame.basis.transpose() * s.matrix * frame.basis -
                               standard_form(n, frame.r).matrix)
                                  .cwiseAbs()
                                  .maxCoeff());
    }
    checks.push_back(bounded("darboux_reduction", worst, cfg.tol));
  }

  {  // composition law on model label pairs (all pairs, or a seeded sample)
    const std::ptrdiff_t total = model.total();
    const bool exhaustive = total * total <= 20000;
    const std::ptrdiff_t pair_count = exhaustive ? total * total : 20000;
    std::uniform_int_distribution<std::ptrdiff_t> pick(0, total - 1);
    std::vector<int> idx(model.n);
    const auto label_at = [&](std::ptrdiff_t flat) {
      model.decode(flat, idx.data());
      IVector m(model.n);
      for (int a = 0; a < model.n; ++a) m(a) = model.label(idx[a]);
      return m;
    };
    double worst = 0.0;
    for (std::ptrdiff_t t = 0; t < pair_count; ++t) {
      const std::ptrdiff_t i = exhaustive ? t / total : pick(rng);
      const std::ptrdiff_t j = exhaustive ? t % total : pick(rng);
      const IVector p = label_at(i), q = label_at(j);
      const double ang =
          -0.5 * (2.0 * pi / N) * p.cast<double>().dot(J.matrix * q.cast<double>());
      const CMatrix lhs = system_unitary(sys, p) * system_unitary(sys, q);
      const CMatrix rhs =
          Complex(std::cos(ang), std::sin(ang)) * system_unitary(sys, p + q);
      worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
    }
    checks.push_back(
        bounded(exhaustive ? "weyl_relation" : "weyl_relation_sampled", worst, cfg.tol));
  }

  {  // quantization homomorphism and associativity
    double worst_hom = 0.0, worst_assoc = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const PhaseSpaceFunction f = random_function(model, rng());
      const PhaseSpaceFunction g = random_function(model, rng());
      const CMatrix Wf = weyl_quantize(sys, f).matrix;
      const CMatrix Wg = weyl_quantize(sys, g).matrix;
      const CMatrix Wfg = weyl_quantize(sys, star(f, g, sigma)).matrix;
      worst_hom =
          std::max(worst_hom, (Wfg - Wf * Wg).norm() / (Wf.norm() * Wg.norm()));
    }
    for (int trial = 0; trial < 10; ++trial) {
      const PhaseSpaceFunction f = random_function(model, rng());
      const PhaseSpaceFunction g = random_function(model, rng());
      const PhaseSpaceFunction h = random_function(model, rng());
      const double scale = l1check_norm(f) * l1check_norm(g) * l1check_norm(h);
      worst_assoc = std::max(worst_assoc,
                             (star(star(f, g, sigma), h, sigma).values -
                              star(f, star(g, h, sigma), sigma).values)
                                     .cwiseAbs()
                                     .maxCoeff() /
                                 scale);
    }
    checks.push_back(bounded("quantization_homomorphism", worst_hom, cfg.tol));
    checks.push_back(bounded("associativity", worst_assoc, cfg.tol));
  }

  {  // norm chain and Banach inequality
    double worst_chain = -1e300, worst_banach = -1e300;
    for (int trial = 0; trial < 20; ++trial) {
      const PhaseSpaceFunction f = random_function(model, rng());
      const PhaseSpaceFunction g = random_function(model, rng());
      const double l1f = l1check_norm(f);
      worst_chain = std::max(worst_chain, sup_norm(f) - l1f);
      worst_chain = std::max(worst_chain, cstar_norm_estimate(f, sys) - l1f);
      worst_banach = std::max(
          worst_banach, l1check_norm(star(f, g, sigma)) - l1f * l1check_norm(g));
    }
    checks.push_back(bounded("norm_chain_excess", worst_chain, 1e-12));
    checks.push_back(bounded("banach_l1_excess", worst_banach, cfg.tol));
  }

  if (N % 2 == 1) {  // conjugation reverses the product (symmetric label window)
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      const PhaseSpaceFunction f = random_function(model, rng());
      const PhaseSpaceFunction g = random_function(model, rng());
      worst = std::max(worst, (conj_function(star(f, g, sigma)).values -
                               star(conj_function(g), conj_function(f), sigma).values)
                                  .cwiseAbs()
                                  .maxCoeff());
    }
    checks.push_back(bounded("conjugation_antihomomorphism", worst, cfg.tol));
  }

  {  // shear and blocked evaluation paths agree on a continuum lattice
    const LatticeSpec lat{2, cfg.lattice_points, cfg.box_length};
    Matrix sm(2, 2);
    sm << 0.0, 0.53, -0.53, 0.0;
    const Bivector s(sm);
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
      const PhaseSpaceFunction f = random_function(lat, rng());
      const PhaseSpaceFunction g = random_function(lat, rng());
      worst = std::max(worst, (star(f, g, s, StarPath::Shear).values -
                               star(f, g, s, StarPath::Blocked).values)
                                  .cwiseAbs()
                                  .maxCoeff());
    }
    checks.push_back(bounded("path_agreement", worst, cfg.tol));
  }

  return checks;
}

std::vector<Check> run_bundle(const RunConfig& cfg, json&) {
  require_inputs(cfg, 1, 2, "bundle needs a bundle (or leaf-sample) file, optionally a section file");
  const json doc = load_json(cfg.input_paths[0]);
  PoissonBundleSample bundle;
  if (doc.contains("base")) {
    bundle = io::bundle_from_json(doc);
  } else if (doc.contains("points")) {
    const LinearPoissonSample leaf = io::leaf_from_json(doc);
    bundle = make_bundle(make_base(leaf.points),
                         static_cast<int>(leaf.sigmas.front().n()), leaf.sigmas);
  } else {
    throw BadInput("bundle: input is neither a bundle nor a linear-Poisson-sample document");
  }

  const std::size_t count = bundle.base.size();
  if (cfg.lattice_points < 2) throw BadInput("--lattice-points: need at least 2");
  const LatticeSpec lat{bundle.fiber_dim, cfg.lattice_points,
                        static_cast<double>(cfg.lattice_points)};
  std::mt19937_64 rng(cfg.seed);

  const auto random_section = [&](const LatticeSpec& on) {
    std::vector<PhaseSpaceFunction> vals;
    for (std::size_t i = 0; i < count; ++i) {
      PhaseSpaceFunction f = random_function(on, rng());
      if (bundle.base.is_compactification_point[i]) {
        f.values.setZero();
        f.dual_values.setZero();
      }
      vals.push_back(std::move(f));
    }
    return make_section(bundle, std::move(vals));
  };
  const SectionField phi =
      cfg.input_paths.size() == 2
          ? io::section_from_json(bundle, load_json(cfg.input_paths[1]))
          : random_section(lat);
  const SectionField psi = random_section(phi.values.front().lattice);
  const SectionField prod = section_star(phi, psi);

  double worst_eval = 0.0;
  for (std::size_t i = 0; i < count; ++i)
    worst_eval = std::max(
        worst_eval,
        (evaluate(prod, i).values -
         star(evaluate(phi, i), evaluate(psi, i), bundle.sigma_field[i]).values)
            .cwiseAbs()
            .maxCoeff());

  CVector coeff(static_cast<Eigen::Index>(count));
  std::uniform_real_distribution<double> angle(0.0, 2.0 * pi);
  for (std::size_t i = 0; i < count; ++i) {
    const double a = angle(rng);
    coeff(static_cast<Eigen::Index>(i)) =
        bundle.base.is_compactification_point[i] ? Complex(0, 0)
                                                 : std::polar(1.0, a);
  }
  const SectionField fphi =
      module_action(make_scalar_field(bundle.base, coeff, true), phi);
  double worst_module = 0.0;
  for (std::size_t i = 0; i < count; ++i)
    worst_module = std::max(worst_module,
                            (evaluate(fphi, i).values -
                             coeff(static_cast<Eigen::Index>(i)) * evaluate(phi, i).values)
                                .cwiseAbs()
                                .maxCoeff());

  const double banach =
      section_sup_l1_norm(prod) - section_sup_l1_norm(phi) * section_sup_l1_norm(psi);

  return {bounded("evaluation_homomorphism", worst_eval, cfg.tol),
          bounded("module_compatibility", worst_module, cfg.tol),
          bounded("banach_sup_l1_excess", banach, cfg.tol)};
}

std::vector<Check> run_orbit(const RunConfig& cfg, json& artifact) {
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> par(-1.2, 1.2);
  std::vector<LorentzGenerator> gens;
  for (int i = 0; i < 25; ++i) gens.push_back({i % 3, par(rng), i % 2 == 0});
  const OrbitSample sample = lorentz_orbit_sample(gens, true);
  artifact = io::to_json(sample);

  const Matrix eta = minkowski_metric();
  const double pf0 = pfaffian(dfr_sigma0());
  double worst_metric = 0.0, worst_pf = 0.0;
  double rank_fail = 0.0, sign_fail = 0.0;
  for (std::size_t i = 0; i < sample.group_elements.size(); ++i) {
    const Matrix& g = sample.group_elements[i];
    worst_metric =
        std::max(worst_metric, (g.transpose() * eta * g - eta).cwiseAbs().maxCoeff());
    if (rank(sample.sigmas[i]) != 4) rank_fail += 1.0;
    const int sign_det = g.determinant() >= 0.0 ? 1 : -1;
    if (orbit_component(sample.sigmas[i]) != sign_det || sample.component[i] != sign_det)
      sign_fail += 1.0;
    worst_pf = std::max(worst_pf,
                        std::abs(pfaffian(sample.sigmas[i]) - g.determinant() * pf0));
  }
  return {bounded("metric_preservation", worst_metric, cfg.tol),
          bounded("rank_full_failures", rank_fail, 0.0),
          bounded("component_sign_mismatches", sign_fail, 0.0),
          bounded("pfaffian_multiplicativity", worst_pf, cfg.tol)};
}

std::vector<Check> run_leaf(const RunConfig& cfg, json& artifact) {
  require_inputs(cfg, 0, 1, "leaf takes at most one config file");
  double radius = 1.0;
  int count = 24;
  if (cfg.input_paths.size() == 1) {
    const json doc = load_json(cfg.input_paths[0]);
    if (doc.contains("radius")) {
      if (!doc["radius"].is_number() || doc["radius"].get<double>() <= 0.0)
        throw BadInput("leaf config: field 'radius' must be a positive number");
      radius = doc["radius"].get<double>();
    }
    if (doc.contains("count")) {
      if (!doc["count"].is_number_integer() || doc["count"].get<int>() < 1)
        throw BadInput("leaf config: field 'count' must be a positive integer");
      count = doc["count"].get<int>();
    }
  }
  const LinearPoissonSample sample = leaf_sample(radius, count);
  artifact = io::to_json(sample);

  double worst_sphere = 0.0, worst_tangent = 0.0, rank_fail = 0.0;
  for (std::size_t i = 0; i < sample.points.size(); ++i) {
    const Vector& x = sample.points[i];
    worst_sphere = std::max(worst_sphere, std::abs(x.norm() - radius));
    worst_tangent = std::max(
        worst_tangent, (sample.sigmas[i].matrix * x).cwiseAbs().maxCoeff());
    if (rank(sample.sigmas[i]) != 2) rank_fail += 1.0;
  }
  return {bounded("on_sphere", worst_sphere, cfg.tol),
          bounded("kernel_tangency", worst_tangent, cfg.tol),
          bounded("rank_two_failures", rank_fail, 0.0)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "weylcli: star products, Weyl quantization, and Poisson bundle checks "
      "(JSON in, JSON report out; WEYLMOYAL_THREADS caps parallelism)"};
  app.require_subcommand(1);

  RunConfig cfg;
  using Runner = std::vector<Check> (*)(const RunConfig&, json&);
  struct Sub {
    const char* name;
    const char* help;
    Runner runner;
    bool artifact_is_report;
  };
  const std::vector<Sub> subs = {
      {"darboux", "reduce an antisymmetric form to its normal form", run_darboux, false},
      {"star", "multiply two functions with the twisted product", run_star, false},
      {"quantize", "map a function on the finite model to its operator", run_quantize,
       false},
      {"verify", "run the seeded identity suites on the finite model", run_verify, true},
      {"bundle", "check section-algebra identities over a sampled base", run_bundle, true},
      {"orbit", "sample nondegenerate forms along the Lorentz group", run_orbit, false},
      {"leaf", "sample a symplectic leaf of the su(2)-type structure", run_leaf, false},
  };

  std::string chosen;
  Runner runner = nullptr;
  bool artifact_is_report = false;
  for (const Sub& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    sub->add_option("-i,--input", cfg.input_paths, "input JSON file (repeatable)");
    sub->add_option("-o,--output", cfg.output_path, "artifact output path");
    sub->add_option("--seed", cfg.seed, "seed for the randomized suites");
    sub->add_option("--tol", cfg.tol, "tolerance for residual checks");
    sub->add_option("--lattice-n", cfg.lattice_n, "lattice dimension override");
    sub->add_option("--lattice-points", cfg.lattice_points, "points per axis override");
    sub->add_option("--box-length", cfg.box_length, "box length override");
    sub->callback([&chosen, &runner, &artifact_is_report, s]() {
      chosen = s.name;
      runner = s.runner;
      artifact_is_report = s.artifact_is_report;
    });
  }

  CLI11_PARSE(app, argc, argv);

  const auto t0 = std::chrono::steady_clock::now();
  json report;
  report["command"] = chosen;
  try {
    if (cfg.tol <= 0.0) throw BadInput("--tol: tolerance must be positive");
    json artifact;
    const std::vector<Check> checks = runner(cfg, artifact);
    bool all_pass = true;
    json list = json::array();
    for (const Check& c : checks) {
      list.push_back(json{{"name", c.name},
                          {"measured", c.measured},
                          {"bound", c.bound},
                          {"pass", c.pass}});
      all_pass = all_pass && c.pass;
    }
    report["checks"] = list;
    report["pass"] = all_pass;
    report["elapsed_ms"] =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    if (!cfg.output_path.empty()) {
      std::ofstream out(cfg.output_path);
      if (!out) throw BadInput("--output: cannot write " + cfg.output_path);
      out << (artifact_is_report ? report : artifact).dump(2) << "\n";
    }
    std::cout << report.dump(2) << "\n";
    return all_pass ? 0 : 1;
  } catch (const Error& e) {
    report["pass"] = false;
    report["error"] = e.what();
    std::cout << report.dump(2) << "\n";
    return 2;
  } catch (const std::exception& e) {
    report["pass"] = false;
    report["error"] = std::string("internal: ") + e.what();
    std::cout << report.dump(2) << "\n";
    return 2;
  }
}
