// Command-line front end: eigenvalue runs, maximizer sweeps, Green/A0
// extraction, blow-up diagnostics, and the test-function verification.

#include "htm/bubble.hpp"
#include "htm/capacity.hpp"
#include "htm/extremal.hpp"
#include "htm/green.hpp"
#include "htm/hardy_forms.hpp"
#include "htm/io.hpp"
#include "htm/test_function.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <thread>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace htm;

namespace {

constexpr double kPi = std::numbers::pi;

struct GridConfig {
  Eigen::Index n = 0;        // 0 = per-command default
  double r_min = 0.0;        // 0 = default
  double delta_b = 0.0;      // 0 = default
  double grading = 0.0;      // 0 = auto (solved from the endpoint scale)
};

struct RunConfig {
  GridConfig grid;
  double alpha = 0.0;
  std::vector<double> gammas;
  std::vector<double> eps_list{1e-3, 1e-4, 1e-5};
  SolverOptions solver;
  double window_radius = 5.0;
  int window_samples = 512;
  std::string constants_mode = "exact";
  std::string out = "out";
  std::string format = "both";
  int jobs = 1;
};

[[noreturn]] void config_error(const std::string& field, const std::string& what) {
  throw std::invalid_argument("config field '" + field + "': " + what);
}

double need_number(const json& j, const std::string& field) {
  if (!j.is_number()) config_error(field, "expected a number");
  return j.get<double>();
}

void merge_config_file(RunConfig& cfg, const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) config_error("<root>", "expected a JSON object");
  for (auto& [key, val] : doc.items()) {
    if (key == "grid") {
      if (!val.is_object()) config_error("grid", "expected an object");
      for (auto& [gk, gv] : val.items()) {
        if (gk == "n") {
          if (!gv.is_number_integer() || gv.get<long long>() < 3)
            config_error("grid.n", "expected an integer >= 3");
          cfg.grid.n = gv.get<Eigen::Index>();
        } else if (gk == "r_min") cfg.grid.r_min = need_number(gv, "grid.r_min");
        else if (gk == "delta_b") cfg.grid.delta_b = need_number(gv, "grid.delta_b");
        else if (gk == "grading") cfg.grid.grading = need_number(gv, "grid.grading");
        else config_error("grid." + gk, "unknown field");
      }
    } else if (key == "alpha") {
      cfg.alpha = need_number(val, "alpha");
      if (cfg.alpha < 0.0) config_error("alpha", "must be >= 0");
    } else if (key == "gammas") {
      if (!val.is_array()) config_error("gammas", "expected an array of numbers");
      cfg.gammas.clear();
      for (const auto& g : val) cfg.gammas.push_back(need_number(g, "gammas[]"));
    } else if (key == "eps_list") {
      if (!val.is_array()) config_error("eps_list", "expected an array of numbers");
      cfg.eps_list.clear();
      for (const auto& g : val) cfg.eps_list.push_back(need_number(g, "eps_list[]"));
    } else if (key == "solver") {
      if (!val.is_object()) config_error("solver", "expected an object");
      for (auto& [sk, sv] : val.items()) {
        if (sk == "tol") cfg.solver.tol = need_number(sv, "solver.tol");
        else if (sk == "max_iter") cfg.solver.max_iter = static_cast<int>(need_number(sv, "solver.max_iter"));
        else if (sk == "damping") cfg.solver.damping = need_number(sv, "solver.damping");
        else config_error("solver." + sk, "unknown field");
      }
      if (!(cfg.solver.tol > 0.0)) config_error("solver.tol", "must be positive");
    } else if (key == "window") {
      if (!val.is_object()) config_error("window", "expected an object");
      for (auto& [wk, wv] : val.items()) {
        if (wk == "radius") cfg.window_radius = need_number(wv, "window.radius");
        else if (wk == "samples") cfg.window_samples = static_cast<int>(need_number(wv, "window.samples"));
        else config_error("window." + wk, "unknown field");
      }
    } else if (key == "constants_mode") {
      if (!val.is_string()) config_error("constants_mode", "expected a string");
      cfg.constants_mode = val.get<std::string>();
      if (cfg.constants_mode != "exact" && cfg.constants_mode != "asymptotic")
        config_error("constants_mode", "must be 'exact' or 'asymptotic'");
    } else if (key == "out") {
      if (!val.is_string()) config_error("out", "expected a string");
      cfg.out = val.get<std::string>();
    } else if (key == "format") {
      if (!val.is_string()) config_error("format", "expected a string");
      cfg.format = val.get<std::string>();
    } else if (key == "jobs") {
      if (!val.is_number_integer() || val.get<int>() < 1)
        config_error("jobs", "expected an integer >= 1");
      cfg.jobs = val.get<int>();
    } else {
      config_error(key, "unknown field");
    }
  }
}

// per-command grid defaults: eigen/green/testfn resolve both singular ends,
// the Euler-Lagrange commands use the milder solver cutoffs
GridPtr make_grid(const RunConfig& cfg, bool solver_profile) {
  GridConfig g = cfg.grid;
  if (g.n == 0) g.n = solver_profile ? 1500 : 2000;
  if (g.r_min == 0.0) g.r_min = solver_profile ? 1e-7 : 1e-10;
  if (g.delta_b == 0.0) g.delta_b = solver_profile ? 1e-6 : 1e-8;
  if (g.grading > 0.0) return build_grid(g.n, g.r_min, g.delta_b, g.grading);
  const double w_target = solver_profile ? g.delta_b / 10.0 : std::min(g.r_min, g.delta_b) / 4.0;
  return graded_grid(g.n, g.r_min, g.delta_b, w_target);
}

json grid_provenance(const RadialGrid& g) {
  return json{{"n", g.size()},
              {"r_min", g.r_min},
              {"delta_b", g.delta_b},
              {"grading", g.grading}};
}

json effective_grid_config(const RunConfig& cfg, bool solver_profile) {
  GridPtr g = make_grid(cfg, solver_profile);
  return grid_provenance(*g);
}

std::string hash_of(const json& effective) { return fnv1a_hex(effective.dump()); }

struct OutputWriter {
  fs::path dir;
  std::string format;

  bool want_json() const { return format == "json" || format == "both"; }
  bool want_csv() const { return format == "csv" || format == "both"; }

  void json_file(const std::string& name, const json& doc) const {
    if (!want_json()) return;
    std::ofstream out(dir / name);
    out << doc.dump(2) << '\n';
  }
  void text_file(const std::string& name, const std::string& body) const {
    std::ofstream out(dir / name);
    out << body;
  }
};

std::string csv_row(const std::vector<double>& vals, int iters = -1) {
  std::string row;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (i) row += ',';
    row += format_full(vals[i]);
  }
  if (iters >= 0) row += ',' + std::to_string(iters);
  return row + '\n';
}

int cmd_eigen(const RunConfig& cfg, OutputWriter& out) {
  json eff{{"command", "eigen"}, {"grid", effective_grid_config(cfg, false)}};
  GridPtr grid = make_grid(cfg, false);
  QuadraticForms forms = assemble_forms(grid, 0.0);  // the spectrum query does not read alpha
  SpectralResult spec = first_eigenvalue(forms);
  json rec{{"lambda1", spec.lambda1},
           {"residual", spec.rayleigh_residual},
           {"n", grid->size()},
           {"r_min", grid->r_min},
           {"delta_b", grid->delta_b},
           {"grading", grid->grading},
           {"config_hash", hash_of(eff)}};
  out.json_file("eigen.json", rec);
  if (out.want_csv())
    out.text_file("eigen.csv", "lambda1,residual\n" +
                                   csv_row({spec.lambda1, spec.rayleigh_residual}));
  std::cout << "lambda1 = " << format_full(spec.lambda1) << "\n";
  return 0;
}

struct SweepRow {
  ExtremalResult res;
  bool failed = false;
  std::string error;
};

int cmd_sweep(const RunConfig& cfg, OutputWriter& out, bool single) {
  if (cfg.gammas.empty())
    throw std::invalid_argument("config field 'gammas': at least one exponent is required");
  for (double g : cfg.gammas)
    if (!(g > 0.0) || !(g < 4.0 * kPi))
      throw std::domain_error("gamma values must lie in (0, 4*pi)");
  json eff{{"command", single ? "maximize" : "sweep"},
           {"grid", effective_grid_config(cfg, true)},
           {"alpha", cfg.alpha},
           {"gammas", cfg.gammas},
           {"solver", {{"tol", cfg.solver.tol}, {"max_iter", cfg.solver.max_iter},
                       {"damping", cfg.solver.damping}}}};
  const std::string hash = hash_of(eff);

  GridPtr grid = make_grid(cfg, true);
  QuadraticForms forms = assemble_forms(grid, cfg.alpha);
  forms.require_alpha_admissible();

  std::vector<double> gammas = cfg.gammas;
  std::sort(gammas.begin(), gammas.end());
  std::vector<SweepRow> rows(gammas.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= gammas.size()) return;
      try {
        rows[i].res = maximize_subcritical(gammas[i], cfg.alpha, forms, cfg.solver);
      } catch (const std::exception& e) {
        rows[i].failed = true;
        rows[i].error = e.what();
      }
    }
  };
  const int nthreads = std::max(1, std::min<int>(cfg.jobs, static_cast<int>(gammas.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::string csv = "gamma,alpha,J,lambda_eps,c_eps,norm,residual,iters\n";
  json jrows = json::array();
  bool any_failed = false;
  std::vector<ExtremalResult> converged;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].failed) {
      any_failed = true;
      jrows.push_back(json{{"gamma", gammas[i]}, {"error", rows[i].error},
                           {"config_hash", hash}});
      continue;
    }
    const ExtremalResult& r = rows[i].res;
    csv += csv_row({r.gamma, r.alpha, r.J, r.lambda_eps, r.c_eps, r.norm_1alpha, r.el_residual},
                   r.iterations);
    jrows.push_back(json{{"gamma", r.gamma},
                         {"alpha", r.alpha},
                         {"J", r.J},
                         {"lambda_eps", r.lambda_eps},
                         {"c_eps", r.c_eps},
                         {"norm", r.norm_1alpha},
                         {"residual", r.el_residual},
                         {"iters", r.iterations},
                         {"config_hash", hash}});
    converged.push_back(r);
  }

  json summary{{"config_hash", hash}, {"grid", grid_provenance(*grid)}, {"rows", jrows}};
  if (converged.size() >= 1) {
    RadialFunction ones = sample(grid, [](double) { return 1.0; }, 1.0);
    ConcentrationReport rep = concentration_report(converged, ones);
    json concs = json::array();
    for (const auto& row : rep.rows)
      concs.push_back(json{{"gamma", row.gamma},
                           {"eps", row.eps},
                           {"r_eps", row.r_eps},
                           {"energy_gap_rel", row.energy_gap_rel},
                           {"dirac_value", row.dirac_value},
                           {"dirac_gap", row.dirac_gap}});
    summary["concentration"] = concs;
    json trends;
    if (rep.c_eps_increasing) trends["c_eps_increasing"] = *rep.c_eps_increasing;
    if (rep.gap_decreasing) trends["energy_gap_decreasing"] = *rep.gap_decreasing;
    if (rep.dirac_gap_decreasing) trends["dirac_gap_decreasing"] = *rep.dirac_gap_decreasing;
    bool j_increasing = true;
    for (std::size_t i = 1; i < converged.size(); ++i)
      j_increasing = j_increasing && converged[i].J > converged[i - 1].J;
    if (converged.size() >= 2) trends["J_increasing"] = j_increasing;
    summary["trends"] = trends;
  }

  if (single) {
    out.json_file("maximize.json", jrows.empty() ? json{} : jrows.front());
    if (!converged.empty() && out.want_csv())
      write_radial_csv(out.dir / "solution.csv", converged.front().u);
  } else {
    if (out.want_csv()) out.text_file("sweep.csv", csv);
    out.json_file("sweep.json", summary);
  }
  if (any_failed) {
    std::cerr << "sweep: some rows failed numerically\n";
    return 1;
  }
  std::cout << (single ? "maximize" : "sweep") << ": " << converged.size() << " row(s) converged\n";
  return 0;
}

int cmd_green(const RunConfig& cfg, OutputWriter& out) {
  json eff{{"command", "green"}, {"grid", effective_grid_config(cfg, false)},
           {"alpha", cfg.alpha}};
  GridPtr grid = make_grid(cfg, false);
  GreenResult res = solve_green(cfg.alpha, grid, GreenMode::hardy);
  json rec{{"alpha", res.alpha},
           {"A0", res.A0},
           {"A0_error_estimate", res.A0_error},
           {"flux_defect", res.flux_defect},
           {"n", grid->size()},
           {"config_hash", hash_of(eff)}};
  out.json_file("green.json", rec);
  if (out.want_csv()) write_green_csv(out.dir / "green.csv", res);
  std::cout << "A0 = " << format_full(res.A0) << "\n";
  return 0;
}

int cmd_bubble(const RunConfig& cfg, OutputWriter& out) {
  if (cfg.gammas.empty())
    throw std::invalid_argument("config field 'gammas': one exponent is required");
  json eff{{"command", "bubble"},
           {"grid", effective_grid_config(cfg, true)},
           {"alpha", cfg.alpha},
           {"gamma", cfg.gammas.front()},
           {"window", {{"radius", cfg.window_radius}, {"samples", cfg.window_samples}}}};
  const double gamma = cfg.gammas.front();
  GridPtr grid = make_grid(cfg, true);
  QuadraticForms forms = assemble_forms(grid, cfg.alpha);
  ExtremalResult res = maximize_subcritical(gamma, cfg.alpha, forms, cfg.solver);
  const double eps = 4.0 * kPi - gamma;
  const double rs = r_eps(res.lambda_eps, res.c_eps, eps);
  double window = cfg.window_radius;
  if (rs * window > grid->outer_radius()) window = grid->outer_radius() / rs;
  BlowupDiagnostics diag =
      rescale_blowup(res.u, res.c_eps, rs, window, cfg.window_samples);
  diag.lambda_eps = res.lambda_eps;
  diag.eps = eps;
  diag.r_eps = rs;
  json rec{{"gamma", gamma},
           {"alpha", cfg.alpha},
           {"J", res.J},
           {"c_eps", res.c_eps},
           {"lambda_eps", res.lambda_eps},
           {"eps", eps},
           {"r_eps", rs},
           {"window_radius", window},
           {"sup_deviation", diag.sup_deviation},
           {"psi_deviation", diag.psi_deviation},
           {"dphi_deviation", diag.dphi_deviation},
           {"config_hash", hash_of(eff)}};
  out.json_file("bubble.json", rec);
  if (out.want_csv()) write_profile_csv(out.dir / "profile.csv", diag);
  std::cout << "sup deviation from the bubble on [0," << window << "] = "
            << format_full(diag.sup_deviation) << "\n";
  return 0;
}

int cmd_testfn(const RunConfig& cfg, OutputWriter& out) {
  if (cfg.eps_list.empty())
    throw std::invalid_argument("config field 'eps_list': at least one value is required");
  json eff{{"command", "testfn"},
           {"grid", effective_grid_config(cfg, false)},
           {"alpha", cfg.alpha},
           {"eps_list", cfg.eps_list},
           {"constants_mode", cfg.constants_mode}};
  const std::string hash = hash_of(eff);
  GridPtr base = make_grid(cfg, false);
  {
    QuadraticForms probe = assemble_forms(base, cfg.alpha);
    probe.require_alpha_admissible();  // alpha >= lambda1 exits with a domain error
  }
  std::vector<double> eps_list = cfg.eps_list;
  std::sort(eps_list.rbegin(), eps_list.rend());

  std::string csv = "eps,R,c,B,A0,norm,integral,bound,margin,pass\n";
  json jrows = json::array();
  bool all_pass = true;
  for (double eps : eps_list) {
    GridPtr tg = testfn_grid(*base, eps);
    QuadraticForms tforms = assemble_forms(tg, cfg.alpha);
    GreenResult green = solve_green(cfg.alpha, tg, GreenMode::hardy);
    TestFunctionConstants k =
        cfg.constants_mode == "exact"
            ? solve_constants(eps, green.A0, ConstantsMode::exact, &green, &tforms)
            : solve_constants(eps, green.A0, ConstantsMode::asymptotic);
    TestFunctionBundle bundle = build_test_function(eps, cfg.alpha, green, k, tforms);
    LowerBoundReport rep = verify_lower_bound(bundle, tforms);
    all_pass = all_pass && rep.pass;
    csv += csv_row({rep.eps, rep.R, rep.c, rep.B, rep.A0, rep.norm_1alpha, rep.integral,
                    rep.bound, rep.margin}) ;
    csv.insert(csv.size() - 1, std::string(",") + (rep.pass ? "1" : "0"));
    jrows.push_back(json{{"eps", rep.eps},
                         {"R", rep.R},
                         {"c", rep.c},
                         {"B", rep.B},
                         {"A0", rep.A0},
                         {"norm", rep.norm_1alpha},
                         {"integral", rep.integral},
                         {"bound", rep.bound},
                         {"margin", rep.margin},
                         {"predicted_margin", rep.predicted_margin},
                         {"inner_integral", rep.inner_integral},
                         {"pass", rep.pass},
                         {"config_hash", hash}});
  }
  json doc{{"alpha", cfg.alpha}, {"rows", jrows}, {"pass", all_pass}, {"config_hash", hash}};
  out.json_file("testfn.json", doc);
  if (out.want_csv()) out.text_file("testfn.csv", csv);
  std::cout << (all_pass ? "PASS" : "FAIL") << ": lower bound margin"
            << (all_pass ? " positive for every eps\n" : " not established\n");
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variational toolkit for the improved Hardy-Trudinger-Moser inequality on the unit disc"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string config_path;
  std::vector<double> flag_gammas;
  std::vector<double> flag_eps;
  std::optional<long long> flag_n;
  std::optional<double> flag_alpha, flag_tol, flag_rmin, flag_db, flag_grading;

  for (auto* sub : {app.add_subcommand("eigen", "first eigenvalue of the Hardy-Laplace operator"),
                    app.add_subcommand("maximize", "single subcritical maximizer run"),
                    app.add_subcommand("sweep", "maximizer sweep over gamma"),
                    app.add_subcommand("green", "Green function and the constant A0"),
                    app.add_subcommand("bubble", "blow-up rescaling diagnostics"),
                    app.add_subcommand("testfn", "test-function lower bound verification")}) {
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--out", cfg.out, "output directory");
    sub->add_option("--jobs", cfg.jobs, "worker pool size")->check(CLI::PositiveNumber);
    sub->add_option("--format", cfg.format, "json, csv or both")
        ->check(CLI::IsMember({"json", "csv", "both"}));
    sub->add_option("--n", flag_n, "grid node count");
    sub->add_option("--r-min", flag_rmin, "inner cutoff");
    sub->add_option("--delta-b", flag_db, "boundary cutoff");
    sub->add_option("--grading", flag_grading, "grading ratio in (0,1]; omit for auto");
    sub->add_option("--alpha", flag_alpha, "improvement parameter");
    sub->add_option("--gamma", flag_gammas, "exponent(s), repeatable");
    sub->add_option("--eps", flag_eps, "test-function eps value(s), repeatable");
    sub->add_option("--tol", flag_tol, "solver tolerance");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (!config_path.empty()) merge_config_file(cfg, config_path);
    if (flag_n) cfg.grid.n = static_cast<Eigen::Index>(*flag_n);
    if (flag_rmin) cfg.grid.r_min = *flag_rmin;
    if (flag_db) cfg.grid.delta_b = *flag_db;
    if (flag_grading) cfg.grid.grading = *flag_grading;
    if (flag_alpha) cfg.alpha = *flag_alpha;
    if (!flag_gammas.empty()) cfg.gammas = flag_gammas;
    if (!flag_eps.empty()) cfg.eps_list = flag_eps;
    if (flag_tol) cfg.solver.tol = *flag_tol;
    if (cfg.format != "json" && cfg.format != "csv" && cfg.format != "both")
      config_error("format", "must be json, csv or both");
    if (!(cfg.alpha >= 0.0)) config_error("alpha", "must be >= 0");

    OutputWriter out{fs::path(cfg.out), cfg.format};
    fs::create_directories(out.dir);

    const auto t0 = std::chrono::steady_clock::now();
    int code = 0;
    std::string name;
    if (app.got_subcommand("eigen")) { name = "eigen"; code = cmd_eigen(cfg, out); }
    else if (app.got_subcommand("maximize")) { name = "maximize"; code = cmd_sweep(cfg, out, true); }
    else if (app.got_subcommand("sweep")) { name = "sweep"; code = cmd_sweep(cfg, out, false); }
    else if (app.got_subcommand("green")) { name = "green"; code = cmd_green(cfg, out); }
    else if (app.got_subcommand("bubble")) { name = "bubble"; code = cmd_bubble(cfg, out); }
    else if (app.got_subcommand("testfn")) { name = "testfn"; code = cmd_testfn(cfg, out); }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    // wall time lives outside the data files so runs stay byte-identical
    std::ofstream meta(out.dir / "meta.json");
    meta << json{{"command", name}, {"wall_time_s", wall}}.dump(2) << '\n';
    return code;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 1;
  }
}
