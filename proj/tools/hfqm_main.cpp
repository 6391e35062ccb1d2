// hfqm: batch front-end. Subcommands spectrum, axioms, converge, evolve,
// oracle and scalar-demo; see README.md for the config tree.
//
// Exit codes: 0 ok, 2 config error, 3 solver failure, 4 validation failure.

#include <algorithm>
#include <cmath>
#include <complex>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "config.hpp"
#include "hfqm/hfqm.hpp"
#include "hfqm/io.hpp"

namespace fs = std::filesystem;
using namespace hfqm;
using cli::at;
using cli::ConfigError;
using nlohmann::json;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_solver = 3;
constexpr int exit_validation = 4;

struct Run {
  json cfg;
  fs::path dir;

  [[nodiscard]] double num(const std::string& p) const { return at(cfg, p).get<double>(); }
  [[nodiscard]] std::size_t count(const std::string& p) const { return at(cfg, p).get<std::size_t>(); }
  [[nodiscard]] std::string str(const std::string& p) const { return at(cfg, p).get<std::string>(); }

  void write_json(const std::string& name, json body) const {
    body["config"] = cfg;
    io::write_file((dir / name).string(), body.dump(2) + "\n");
  }

  // CSVs carry the config as a leading comment line.
  void write_csv(const std::string& name, const std::string& rows) const {
    io::write_file((dir / name).string(), "# config: " + cfg.dump() + "\n" + rows);
  }
};

LaplacianVariant variant_for(Run& run, LaplacianVariant fallback) {
  auto v = run.str("laplacian") == "auto" ? fallback : parse_laplacian_variant(run.str("laplacian"));
  run.cfg["laplacian"] = std::string(to_string(v));
  return v;
}

Potential potential_for(const Run& run, const GridPtr& g) {
  Potential v;
  const double tau = run.num("potential.tau");
  if (tau != 0.0) v = Potential::delta_at(g->origin(), tau);
  if (!at(run.cfg, "box.L").is_null()) v = v + box_walls(run.num("box.L"), run.num("box.wall"));
  return v;
}

oracle::Sign sign_of(double tau) { return tau < 0.0 ? oracle::Sign::well : oracle::Sign::barrier; }

std::vector<oracle::Parity> parities(const Run& run) {
  const auto p = run.str("oracle.parity");
  if (p == "even") return {oracle::Parity::even};
  if (p == "odd") return {oracle::Parity::odd};
  return {oracle::Parity::even, oracle::Parity::odd};
}

json box_oracle(const Run& run) {
  json out = json::array();
  const double tau = run.num("potential.tau");
  for (auto parity : parities(run)) {
    oracle::BoxProblem p{run.num("box.L"), std::abs(tau), sign_of(tau), parity};
    out.push_back(io::oracle_json(p, oracle::box_spectrum(p, run.count("oracle.count"))));
  }
  return out;
}

linalg::EigenMethod method_of(const Run& run) {
  const auto m = run.str("spectrum.method");
  if (m == "bisection") return linalg::EigenMethod::bisection;
  if (m == "jacobi") return linalg::EigenMethod::jacobi;
  return linalg::EigenMethod::automatic;
}

double mirror_overlap(const std::vector<double>& v, const Grid& g) {
  double s = 0.0;
  for (std::size_t a = 0; a < v.size(); ++a) s += v[a] * v[g.mirror(a)] * g.weight(a);
  return s;
}

double rel(double got, double want) { return std::abs(got - want) / std::max(std::abs(want), 1e-300); }

int cmd_spectrum(Run& run) {
  const double tau = run.num("potential.tau");
  const bool boxed = !at(run.cfg, "box.L").is_null();
  json body;

  if (at(run.cfg, "oracle.only").get<bool>()) {
    run.cfg.erase("grid");
    body["analytic"] = boxed ? box_oracle(run) : json::array();
    if (!boxed) body["analytic"].push_back({{"source", "analytic"}, {"bound_1d", oracle::bound_state_energy_1d(-tau)}});
    for (const auto& block : body["analytic"])
      if (block.contains("k")) std::cout << block["params"].value("parity", "") << " k: " << block["k"].dump() << "\n";
    run.write_json("spectrum.json", body);
    return exit_ok;
  }

  auto g = make_grid(run.count("grid.n"), run.num("grid.h"));
  const auto variant = variant_for(run, LaplacianVariant::compact);
  auto h = assemble_hamiltonian(g, variant, potential_for(run, g));
  const std::size_t count = std::min(run.count("spectrum.count"), g->size());
  const auto& wanted = at(run.cfg, "spectrum.eigenfunctions");

  std::vector<double> eigs;
  std::optional<SpectralDecomposition> dec;
  if (boxed || !wanted.empty()) {
    dec = eigendecompose(h, method_of(run));
    eigs = dec->eigenvalues;
  } else {
    if (!linalg::as_cyclic_tridiagonal(h.matrix) && g->size() > jacobi_size_limit)
      throw SolverError("dense Jacobi path limited to " + std::to_string(jacobi_size_limit) + " unknowns");
    eigs = linalg::lowest_eigenvalues(h.matrix, g->size());
  }
  const auto bound = spectral_bound_check(eigs, tau, *g);
  std::vector<double> lowest(eigs.begin(), eigs.begin() + static_cast<std::ptrdiff_t>(count));
  body["grid"] = io::spectrum_json(h, lowest, bound);
  body["grid"]["solver"] = dec ? dec->method : (linalg::as_cyclic_tridiagonal(h.matrix) ? "sturm_bisection" : "jacobi");

  // Side-by-side table against whichever closed form applies.
  json table = json::array();
  if (boxed) {
    body["analytic"] = box_oracle(run);
    const std::size_t m = run.count("oracle.count");
    std::vector<double> even, odd;
    for (std::size_t j = 0; j < dec->size() && (even.size() < m || odd.size() < m); ++j)
      (mirror_overlap(dec->eigenvectors[j], *g) > 0.0 ? even : odd).push_back(dec->eigenvalues[j]);
    const auto dirichlet = oracle::odd_dirichlet(run.num("box.L"), m);
    for (const auto& block : body["analytic"]) {
      const bool is_even = block["params"]["parity"] == "even";
      const auto& grid_side = is_even ? even : odd;
      for (std::size_t k = 0; k < std::min(grid_side.size(), block["eigenvalues"].size()); ++k) {
        const double want = block["eigenvalues"][k].get<double>();
        json row = {{"parity", is_even ? "even" : "odd"}, {"index", k}, {"grid", grid_side[k]},
                    {"analytic", want}, {"rel_err", rel(grid_side[k], want)}};
        if (!is_even) {
          row["dirichlet"] = dirichlet[k].energy;
          row["dirichlet_rel_err"] = rel(grid_side[k], dirichlet[k].energy);
        }
        table.push_back(row);
      }
    }
  } else if (tau < 0.0) {
    const double want = oracle::bound_state_energy_1d(-tau);
    body["analytic"] = {{"source", "analytic"}, {"bound_1d", want}};
    table.push_back({{"state", "bound"}, {"grid", eigs.front()}, {"analytic", want}, {"rel_err", rel(eigs.front(), want)}});
  } else if (tau == 0.0) {
    const double hh = g->spacing();
    const auto n = static_cast<double>(g->size());
    std::vector<double> closed;
    for (std::size_t m = 0; m < g->size(); ++m) {
      const double s = variant == LaplacianVariant::compact ? std::sin(std::numbers::pi * double(m) / n)
                                                           : std::sin(2.0 * std::numbers::pi * double(m) / n);
      closed.push_back(variant == LaplacianVariant::compact ? 2.0 * s * s / (hh * hh) : s * s / (2.0 * hh * hh));
    }
    std::sort(closed.begin(), closed.end());
    closed.resize(count);
    body["analytic"] = {{"source", "circulant"}, {"eigenvalues", closed}};
    for (std::size_t k = 0; k < count; ++k)
      table.push_back({{"index", k}, {"grid", eigs[k]}, {"analytic", closed[k]}, {"abs_err", std::abs(eigs[k] - closed[k])}});
  }
  body["comparison"] = table;

  for (const auto& j : wanted) {
    const auto idx = j.get<std::size_t>();
    std::ostringstream os;
    io::write_csv(os, dec->eigenfunction(idx));
    run.write_csv("eigenfunction_" + std::to_string(idx) + ".csv", os.str());
  }
  run.write_json("spectrum.json", body);

  std::cout << "solver " << body["grid"]["solver"].get<std::string>() << ", lowest eigenvalue "
            << std::setprecision(10) << eigs.front() << "\n";
  std::cout << "bound check: min " << bound.min_eig << " >= " << bound.bound << (bound.pass ? " pass" : " FAIL") << "\n";
  return bound.pass ? exit_ok : exit_validation;
}

int cmd_axioms(Run& run) {
  const std::size_t n = run.count("grid.n");
  auto g = Grid::make_any_parity(n, run.num("grid.h"));
  const auto variant = variant_for(run, LaplacianVariant::paper_literal);
  const auto d = build_derivative(g);
  const std::size_t centre = n / 2;
  std::mt19937_64 gen(seed_from_env());
  std::normal_distribution<double> nd;
  auto random_function = [&] {
    RealGridFunction u(g);
    for (std::size_t j = 0; j < n; ++j) u[j] = nd(gen);
    return u;
  };

  json report = json::array();
  bool all = true;
  auto record = [&](int number, const std::string& name, bool pass, json measured) {
    report.push_back({{"axiom", number}, {"name", name}, {"pass", pass}, {"measured", measured}});
    all = all && pass;
    std::cout << (pass ? "PASS" : "FAIL") << "  axiom " << number << " " << name << ": " << measured.dump() << "\n";
  };

  double recon = 0.0, parseval = 0.0, ibp = 0.0, semidef = -INFINITY;
  const auto lap = laplacian(g, variant);
  for (std::size_t s = 0; s < run.count("axioms.samples"); ++s) {
    auto u = random_function(), v = random_function();
    const auto r = reconstruct_from_deltas(u);
    for (std::size_t j = 0; j < n; ++j) recon = std::max(recon, std::abs(r[j] - u[j]));
    double sum = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
      const double c = inner_product(u, sqrt_delta(g, a));
      sum += c * c;
    }
    parseval = std::max(parseval, std::abs(sum - inner_product(u, u)) / inner_product(u, u));
    const auto du = d(u), dv = d(v);
    const double scale = norm(du) * norm(v) + norm(u) * norm(dv);
    ibp = std::max(ibp, std::abs(inner_product(du, v) + inner_product(u, dv)) / scale);
    semidef = std::max(semidef, inner_product(RealGridFunction(g, lap.apply<double>(u.values())), u));
  }
  record(1, "delta expansion", recon == 0.0, {{"reconstruction_max_err", recon}});

  const double total = pointwise_integral(RealGridFunction(g, std::vector<double>(n, 1.0)));
  record(2, "pointwise integral", rel(total, g->circumference()) <= 1e-14 && parseval <= run.num("tolerances.parseval"),
         {{"integral_one", total}, {"circumference", g->circumference()}, {"parseval_rel_err", parseval}});

  const double chi0 = pointwise_integral(indicator(g, centre));
  record(3, "positive point masses", chi0 > 0.0 && chi0 == g->weight(centre),
         {{"integral_chi0", chi0}, {"d0", g->weight(centre)}});

  const double k = 2.0 * std::numbers::pi / g->circumference();
  const auto su = embed([k](double x) { return std::sin(k * x); }, g);
  const auto dsu = d(su);
  double consistency = 0.0;
  for (std::size_t j = 0; j < n; ++j) consistency = std::max(consistency, std::abs(dsu[j] - k * std::cos(k * g->point(j))));
  const double taylor = k * k * k * g->spacing() * g->spacing() / 6.0;
  record(4, "derivative consistency", consistency <= taylor * (1.0 + 1e-9) + 1e-14,
         {{"max_err_sin", consistency}, {"taylor_bound", taylor}});

  double dconst = 0.0;
  const auto done = d(RealGridFunction(g, std::vector<double>(n, 1.0)));
  for (double x : done.values()) dconst = std::max(dconst, std::abs(x));
  const auto nullity = circulant_nullity(d.matrix());
  record(5, "constants-only null space", dconst == 0.0 && nullity == 1, {{"d_const_max", dconst}, {"nullity", nullity}});

  const auto bw = d.matrix().periodic_bandwidth();
  record(6, "locality", bw <= d.bandwidth(), {{"bandwidth", bw}, {"declared", d.bandwidth()}});

  const double anti = weighted_antisymmetry_defect(d.matrix(), *g);
  record(7, "integration by parts", anti == 0.0 && ibp <= run.num("tolerances.ibp") && semidef <= 0.0,
         {{"antisymmetry_defect", anti}, {"ibp_rel_residual", ibp}, {"max_laplacian_form", semidef}});

  run.write_json("axioms.json", {{"grid", io::grid_json(*g)}, {"axioms", report}, {"all_pass", all}});
  return all ? exit_ok : exit_validation;
}

int cmd_converge(Run& run) {
  const auto variant = variant_for(run, LaplacianVariant::compact);
  const NetOptions opt{static_cast<unsigned>(run.count("workers")), 3};
  const auto kind = run.str("converge.kind");
  auto stages = [&] {
    std::vector<Stage> s;
    for (const auto& j : at(run.cfg, "converge.stages")) s.push_back({j["n"].get<std::size_t>(), j["h"].get<double>()});
    return s;
  };
  const double tau = run.num("converge.tau");
  json extra;
  Net net;
  if (kind == "approximation") {
    const Stage stage{at(run.cfg, "converge.stage")["n"].get<std::size_t>(), at(run.cfg, "converge.stage")["h"].get<double>()};
    const auto widths = at(run.cfg, "converge.widths").get<std::vector<double>>();
    net = approximation_net(tau, widths, stage, variant, opt);
    auto g = Grid::make(stage);
    const double e_delta = ground_energy(g, variant, Potential::delta_at(g->origin(), tau));
    std::vector<double> gaps;
    bool monotone = true;
    for (const auto& e : net.entries) {
      if (!e.ok) continue;
      gaps.push_back(std::abs(e.value - e_delta));
      if (gaps.size() > 1) monotone = monotone && gaps.back() < gaps[gaps.size() - 2];
    }
    extra = {{"delta_energy", e_delta}, {"gaps", gaps}, {"monotone", monotone}};
  } else if (kind == "chi") {
    net = chi_potential_net(stages(), variant, opt);
  } else if (kind == "refinement") {
    net = run_net(
        stages(), [&](const GridPtr& g) { return ground_energy(g, variant, Potential::delta_at(g->origin(), tau)); },
        opt);
  } else {
    const double c = run.num("converge.value");
    net = run_net(stages(), [c](const GridPtr&) { return c; }, opt);
  }
  for (const auto& e : net.entries)
    if (!e.ok) std::cerr << "stage " << e.stage << ": " << e.error << "\n";

  const auto est = estimate_limit(net, run.num("converge.tol"));
  std::ostringstream csv;
  io::write_net_csv(csv, net);
  run.write_csv("net.csv", csv.str());
  json body = io::net_json(net, est);
  body["kind"] = kind;
  if (!extra.is_null()) body["reference"] = extra;
  run.write_json("net.json", body);
  std::cout << kind << " net: estimate " << std::setprecision(10) << est.value << (est.converged ? " (converged)" : " (not converged)");
  if (est.rate) std::cout << ", rate " << *est.rate;
  std::cout << "\n";
  return exit_ok;
}

int cmd_evolve(Run& run) {
  auto g = make_grid(run.count("grid.n"), run.num("grid.h"));
  const auto variant = variant_for(run, LaplacianVariant::compact);
  auto h = assemble_hamiltonian(g, variant, potential_for(run, g));
  auto dec = eigendecompose(h);

  ComplexGridFunction psi(g);
  const auto initial = run.str("evolve.initial");
  if (initial == "gaussian") {
    const double c = run.num("evolve.center"), w = run.num("evolve.width"), p = run.num("evolve.momentum");
    for (std::size_t j = 0; j < g->size(); ++j) {
      const double x = (g->point(j) - c) / w;
      psi[j] = std::exp(-x * x / 2.0) * std::polar(1.0, p * (g->point(j) - c));
    }
  } else if (initial == "delta") {
    auto a = g->index_of(run.num("evolve.point"));
    if (!a) throw ConfigError("evolve.point", "is not a grid point");
    psi = sqrt_delta(g, *a).as<std::complex<double>>();
  } else {
    psi = dec.eigenfunction(run.count("evolve.index")).as<std::complex<double>>();
  }
  if (at(run.cfg, "evolve.normalize").get<bool>()) psi *= std::complex<double>(1.0 / norm(psi));
  require_normalized(norm(psi));

  const Propagator prop(dec, psi);
  const double e0 = energy_expectation(h, psi);
  const std::size_t steps = run.count("evolve.steps"), every = run.count("evolve.snapshot_every");
  const double dt = run.num("evolve.t_end") / static_cast<double>(steps);
  std::ostringstream density, drift;
  density.precision(17);
  drift.precision(17);
  density << "t,x,density\n";
  drift << "step,t,norm,energy,norm_drift,energy_drift\n";
  double worst_norm = 0.0, worst_energy = 0.0, worst_prob = 0.0, worst_density = 0.0;
  for (std::size_t s = 0; s <= steps; ++s) {
    const double t = dt * static_cast<double>(s);
    const auto p = s == 0 ? psi : prop.at(t);
    const double nrm = norm(p), en = energy_expectation(h, p);
    worst_norm = std::max(worst_norm, std::abs(nrm - 1.0));
    worst_energy = std::max(worst_energy, std::abs(en - e0));
    drift << s << ',' << t << ',' << nrm << ',' << en << ',' << nrm - 1.0 << ',' << en - e0 << '\n';
    for (std::size_t j = 0; j < g->size(); ++j)
      worst_density = std::max(worst_density, std::abs(std::norm(p[j]) - std::norm(psi[j])));
    if (s % every == 0 || s == steps) {
      for (std::size_t j = 0; j < g->size(); ++j) density << t << ',' << g->point(j) << ',' << std::norm(p[j]) << '\n';
      double total = 0.0;
      for (const auto& o : measurement_probabilities(p, dec)) total += o.probability;
      worst_prob = std::max(worst_prob, std::abs(total - 1.0));
    }
  }
  run.write_csv("density.csv", density.str());
  run.write_csv("drift.csv", drift.str());

  const bool pass = worst_norm <= run.num("tolerances.norm_drift") && worst_energy <= run.num("tolerances.energy_drift") &&
                    worst_prob <= run.num("tolerances.probability");
  run.write_json("evolve.json", {{"energy", e0},
                                 {"max_norm_drift", worst_norm},
                                 {"max_energy_drift", worst_energy},
                                 {"max_probability_error", worst_prob},
                                 {"max_density_change", worst_density},
                                 {"pass", pass}});
  std::cout << "norm drift " << worst_norm << ", energy drift " << worst_energy << ", probability error " << worst_prob
            << (pass ? "" : "  FAIL") << "\n";
  return pass ? exit_ok : exit_validation;
}

int cmd_oracle(Run& run) {
  run.cfg.erase("grid");
  const double tau = run.num("potential.tau"), s = std::abs(tau);
  json body;
  if (!at(run.cfg, "box.L").is_null()) body["box"] = box_oracle(run);
  if (tau < 0.0) body["bound_1d"] = oracle::bound_state_energy_1d(s);
  if (s > 0.0) {
    const double w = run.num("oracle.half_width"), sigma = run.num("oracle.sigma"), omega = run.num("oracle.omega");
    const double tau_r = oracle::tau_renormalized(s, sigma, omega);
    body["multidim"] = {{"n_bound_2d", oracle::n_bound_2d(s)},
                        {"n_bound_3d", oracle::n_bound_3d(s, w)},
                        {"e2d_bare", oracle::e2d_bare(s, w)},
                        {"tau_renormalized", tau_r},
                        {"e2d_renormalized", oracle::e2d_renormalized(tau_r, omega)}};
  }
  run.write_json("oracle.json", body);
  std::cout << body.dump(2) << "\n";
  return exit_ok;
}

int cmd_scalar_demo(Run& run) {
  run.cfg.erase("grid");
  using E = EuclideanScalar;
  auto describe = [](const E& a) {
    const auto c = classify(a);
    const auto st = standard_part(a);
    json j = {{"value", a.to_string()},
              {"class", c.infinitesimal ? "infinitesimal" : (c.finite ? "finite" : "infinite")}};
    if (st.is_finite()) j["st"] = st.value;
    else j["st"] = st.kind == StandardPart::Kind::plus_infinity ? "+inf" : "-inf";
    return j;
  };
  json values = json::array();
  for (const auto& text : at(run.cfg, "scalar.values")) {
    const E a = E::parse(text.get<std::string>());
    json j = describe(a);
    j["input"] = text;
    j["square"] = (a * a).to_string();
    if (!a.is_zero()) {
      try {
        j["inverse"] = (E(1.0) / a).to_string();
      } catch (const ExponentUnderflow& e) {
        j["inverse"] = std::string("underflow: ") + e.what();
      }
    }
    values.push_back(j);
  }
  const E eps = E::epsilon(), one(1.0);
  json identities = {
      {"eps*eps^-1", (eps * E::monomial(1.0, -1)).to_string()},
      {"(1+eps)*(1+eps)^-1", (one + eps) * (one / (one + eps)) == one ? "1" : ((one + eps) * (one / (one + eps))).to_string()},
      {"eps < 1e-300", eps < E(1e-300)},
      {"1/eps > 1e300", E::monomial(1.0, -1) > E(1e300)},
      {"st(3 + 2eps)", standard_part(E(3.0) + 2.0 * eps).value},
      {"3 + 2eps ~ 3", infinitely_close(E(3.0) + 2.0 * eps, E(3.0))},
  };
  run.write_json("scalar.json", {{"values", values}, {"identities", identities}, {"truncation_order", default_truncation_order}});
  for (const auto& v : values)
    std::cout << v["input"].get<std::string>() << " -> " << v["class"].get<std::string>() << ", st = " << v["st"].dump() << "\n";
  return exit_ok;
}

// Pulls `--a.b value` and `--a.b=value` pairs out before CLI11 sees them.
std::vector<std::pair<std::string, std::string>> take_overrides(std::vector<std::string>& args) {
  std::vector<std::pair<std::string, std::string>> out;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const auto& a = args[i];
    if (a.rfind("--", 0) == 0) {
      std::string key = a.substr(2), value;
      const auto eq = key.find('=');
      const bool inline_value = eq != std::string::npos;
      if (inline_value) {
        value = key.substr(eq + 1);
        key.resize(eq);
      }
      if (key.find('.') != std::string::npos) {
        if (!inline_value) {
          if (i + 1 >= args.size()) throw ConfigError(key, "missing value");
          value = args[++i];
        }
        out.emplace_back(key, value);
        continue;
      }
    }
    rest.push_back(a);
  }
  args = std::move(rest);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  Run run{cli::default_config(), {}};
  std::vector<std::pair<std::string, std::string>> overrides;
  try {
    overrides = take_overrides(args);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config;
  }

  CLI::App app{"hfqm: grid quantum mechanics with singular potentials"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print help");
  std::string config_file;
  std::vector<std::pair<std::string, std::string>> aliases;
  const std::pair<const char*, const char*> alias_table[] = {
      {"--tau", "potential.tau"}, {"--n", "grid.n"},         {"--h", "grid.h"},
      {"--L", "box.L"},           {"--parity", "oracle.parity"}, {"--variant", "laplacian"},
      {"--workers", "workers"},   {"--out", "output.dir"},
  };
  std::vector<std::string> alias_values(std::size(alias_table));
  bool oracle_only = false;

  const char* names[] = {"spectrum", "axioms", "converge", "evolve", "oracle", "scalar-demo"};
  const char* help[] = {"grid spectrum beside the analytic one, eigenfunction CSVs, bound check",
                        "run the axiom property suite on one grid",
                        "stage net with limit estimate",
                        "time evolution with norm and energy drift log",
                        "closed-form spectra and multidimensional formulas",
                        "Euclidean scalar arithmetic dump"};
  std::vector<CLI::App*> subs;
  for (std::size_t s = 0; s < std::size(names); ++s) {
    auto* sub = app.add_subcommand(names[s], help[s]);
    sub->set_help_flag("--help", "print help");
    sub->add_option("--config", config_file, "JSON config file merged over the defaults");
    for (std::size_t k = 0; k < std::size(alias_table); ++k)
      sub->add_option(alias_table[k].first, alias_values[k], std::string("sets ") + alias_table[k].second)
          ->allow_extra_args(false);
    sub->add_flag("--oracle-only", oracle_only, "sets oracle.only");
    sub->footer("Any config key can be set with --key.path value, e.g. --grid.n 2001.");
    subs.push_back(sub);
  }

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  std::string command;
  for (auto* sub : subs)
    if (sub->parsed()) command = sub->get_name();

  try {
    if (!config_file.empty()) cli::merge_file(run.cfg, config_file);
    for (std::size_t k = 0; k < std::size(alias_table); ++k)
      if (!alias_values[k].empty()) cli::apply_override(run.cfg, alias_table[k].second, alias_values[k]);
    if (oracle_only) run.cfg["oracle"]["only"] = true;
    for (const auto& [key, value] : overrides) cli::apply_override(run.cfg, key, value);
    cli::validate(run.cfg, command);
    run.cfg["command"] = command;
    run.cfg["seed"] = seed_from_env();
    run.dir = run.str("output.dir");
    fs::create_directories(run.dir);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config;
  }

  try {
    if (command == "spectrum") return cmd_spectrum(run);
    if (command == "axioms") return cmd_axioms(run);
    if (command == "converge") return cmd_converge(run);
    if (command == "evolve") return cmd_evolve(run);
    if (command == "oracle") return cmd_oracle(run);
    return cmd_scalar_demo(run);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config;
  } catch (const UnnormalizedState& e) {
    std::cerr << "invalid initial state: " << e.what() << "\n";
    return exit_config;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config;
  } catch (const std::exception& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return exit_solver;
  }
}
