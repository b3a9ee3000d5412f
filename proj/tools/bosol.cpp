// Command-line front end: single simulations, convergence studies, and
// Hilbert-transform operator checks. Emits CSV data plus a JSON report that
// echoes the full configuration so any run can be reproduced exactly.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bo/experiments.hpp"
#include "bo/grid.hpp"
#include "bo/io.hpp"
#include "bo/solutions.hpp"
#include "bo/stepper.hpp"

using nlohmann::json;

namespace {

struct RunConfig {
  std::string initial_condition = "one_soliton";  // one_soliton | two_soliton | file
  int n_points = 129;
  double l_domain = 15.0;  // used when x_min/x_max are not set
  std::optional<double> x_min, x_max;
  double c = 0.25;
  double c1 = 2.0, c2 = 1.0;
  double t_start = -10.0;  // sampling time of the two-soliton initial data
  double t_end = 120.0;
  std::string input_file;
  std::vector<double> snapshot_times;
  std::optional<int> snapshot_count;
  bo::CflParams cfl;
  bo::FixedPointConfig fp;
  std::string output_csv = "run.csv";
  std::string report_json;
};

json cfl_to_json(const bo::CflParams& p) {
  json j{{"cfl_fraction", p.cfl_fraction},
         {"mode", p.mode == bo::CflMode::practical ? "practical" : "theoretical"},
         {"lambda_policy",
          p.lambda_policy == bo::LambdaPolicy::fixed_from_initial ? "fixed_from_initial"
                                                                  : "adaptive"},
         {"lambda_cap", p.lambda_cap}};
  if (p.practical_lambda)
    j["practical_lambda"] = *p.practical_lambda;
  else
    j["practical_lambda"] = nullptr;
  return j;
}

bo::CflParams cfl_from_json(const json& j) {
  bo::CflParams p;
  p.cfl_fraction = j.at("cfl_fraction").get<double>();
  p.mode = j.at("mode").get<std::string>() == "practical" ? bo::CflMode::practical
                                                          : bo::CflMode::theoretical;
  p.lambda_policy = j.at("lambda_policy").get<std::string>() == "adaptive"
                        ? bo::LambdaPolicy::adaptive
                        : bo::LambdaPolicy::fixed_from_initial;
  p.lambda_cap = j.at("lambda_cap").get<double>();
  if (!j.at("practical_lambda").is_null())
    p.practical_lambda = j.at("practical_lambda").get<double>();
  return p;
}

json fp_to_json(const bo::FixedPointConfig& f) {
  return {{"rel_tolerance", f.rel_tolerance},
          {"max_iterations", f.max_iterations},
          {"divergence_guard", f.divergence_guard}};
}

bo::FixedPointConfig fp_from_json(const json& j) {
  bo::FixedPointConfig f;
  f.rel_tolerance = j.at("rel_tolerance").get<double>();
  f.max_iterations = j.at("max_iterations").get<int>();
  f.divergence_guard = j.at("divergence_guard").get<double>();
  return f;
}

json run_config_to_json(const RunConfig& c) {
  json j{{"initial_condition", c.initial_condition},
         {"n_points", c.n_points},
         {"l_domain", c.l_domain},
         {"c", c.c},
         {"c1", c.c1},
         {"c2", c.c2},
         {"t_start", c.t_start},
         {"t_end", c.t_end},
         {"input_file", c.input_file},
         {"snapshot_times", c.snapshot_times},
         {"cfl", cfl_to_json(c.cfl)},
         {"fp", fp_to_json(c.fp)},
         {"output_csv", c.output_csv},
         {"report_json", c.report_json}};
  j["x_min"] = c.x_min ? json(*c.x_min) : json(nullptr);
  j["x_max"] = c.x_max ? json(*c.x_max) : json(nullptr);
  j["snapshot_count"] = c.snapshot_count ? json(*c.snapshot_count) : json(nullptr);
  return j;
}

RunConfig run_config_from_json(const json& j) {
  RunConfig c;
  c.initial_condition = j.at("initial_condition").get<std::string>();
  c.n_points = j.at("n_points").get<int>();
  c.l_domain = j.at("l_domain").get<double>();
  c.c = j.at("c").get<double>();
  c.c1 = j.at("c1").get<double>();
  c.c2 = j.at("c2").get<double>();
  c.t_start = j.at("t_start").get<double>();
  c.t_end = j.at("t_end").get<double>();
  c.input_file = j.at("input_file").get<std::string>();
  c.snapshot_times = j.at("snapshot_times").get<std::vector<double>>();
  if (!j.at("snapshot_count").is_null()) c.snapshot_count = j.at("snapshot_count").get<int>();
  if (!j.at("x_min").is_null()) c.x_min = j.at("x_min").get<double>();
  if (!j.at("x_max").is_null()) c.x_max = j.at("x_max").get<double>();
  c.cfl = cfl_from_json(j.at("cfl"));
  c.fp = fp_from_json(j.at("fp"));
  c.output_csv = j.at("output_csv").get<std::string>();
  c.report_json = j.at("report_json").get<std::string>();
  return c;
}

bo::GridSpec make_grid(const RunConfig& c) {
  if (c.x_min || c.x_max) {
    if (!c.x_min || !c.x_max) throw std::invalid_argument("grid: need both x_min and x_max");
    if (!(*c.x_max > *c.x_min)) throw std::invalid_argument("grid: x_max must exceed x_min");
    bo::GridSpec g{c.n_points, (*c.x_max - *c.x_min) / c.n_points, *c.x_min,
                   bo::Topology::periodic};
    g.validate();
    return g;
  }
  return bo::GridSpec::periodic(c.n_points, c.l_domain);
}

bo::GridFunction load_ic_file(const std::string& path, const bo::GridSpec& grid) {
  bo::CsvTable t = bo::read_csv(path);
  if (t.rows.size() != static_cast<size_t>(grid.n_points))
    throw std::invalid_argument("input_file: row count " + std::to_string(t.rows.size()) +
                                " does not match grid n_points " +
                                std::to_string(grid.n_points));
  bo::GridFunction u(grid);
  for (int j = 0; j < grid.n_points; ++j) {
    const auto& row = t.rows[static_cast<size_t>(j)];
    if (row.size() < 2) throw std::invalid_argument("input_file: need two columns x,u");
    const double x = std::stod(row[0]);
    if (std::abs(x - grid.x(j)) > 1e-9 * grid.spacing)
      throw std::invalid_argument("input_file: x[" + std::to_string(j) +
                                  "] does not match the configured grid (no resampling)");
    u[j] = std::stod(row[1]);
  }
  return u;
}

std::vector<double> resolve_snapshot_times(const RunConfig& c) {
  if (!c.snapshot_times.empty()) return c.snapshot_times;
  if (c.snapshot_count && *c.snapshot_count > 0) {
    std::vector<double> ts;
    for (int i = 0; i <= *c.snapshot_count; ++i)
      ts.push_back(c.t_end * static_cast<double>(i) / *c.snapshot_count);
    return ts;
  }
  return {0.0, c.t_end};
}

int cmd_run(const RunConfig& cfg) {
  const bo::GridSpec grid = make_grid(cfg);
  bo::GridFunction u0(grid);
  std::function<double(double)> exact_at_end;  // set when a closed form applies

  if (cfg.initial_condition == "one_soliton") {
    bo::OneSolitonParams p{cfg.c, grid.l_domain()};
    u0 = bo::sample_on_grid(p, grid, 0.0);
    exact_at_end = [p, t = cfg.t_end](double x) { return bo::one_soliton(x, t, p); };
  } else if (cfg.initial_condition == "two_soliton") {
    bo::TwoSolitonParams p{cfg.c1, cfg.c2};
    u0 = bo::sample_on_grid(p, grid, cfg.t_start);
    exact_at_end = [p, t = cfg.t_start + cfg.t_end](double x) { return bo::two_soliton(x, t, p); };
  } else if (cfg.initial_condition == "file") {
    if (cfg.input_file.empty()) throw std::invalid_argument("initial_condition=file needs input_file");
    u0 = load_ic_file(cfg.input_file, grid);
  } else {
    throw std::invalid_argument("initial_condition must be one_soliton, two_soliton or file");
  }

  const std::vector<double> snap_times = resolve_snapshot_times(cfg);
  bo::Trajectory traj = bo::evolve(u0, cfg.t_end, cfg.cfl, cfg.fp, snap_times);

  std::ofstream csv(cfg.output_csv);
  if (!csv) throw std::runtime_error("cannot write " + cfg.output_csv);
  csv << "x";
  for (size_t s = 0; s < traj.snapshots.size(); ++s) csv << ",u_t" << s;
  csv << "\n";
  for (int j = 0; j < grid.n_points; ++j) {
    csv << bo::format_double(grid.x(j));
    for (const bo::GridFunction& snap : traj.snapshots) csv << ',' << bo::format_double(snap[j]);
    csv << "\n";
  }
  csv.close();

  long total_iter = 0;
  int max_iter = 0;
  double max_ratio = 0.0;
  for (const bo::StepReport& r : traj.step_reports) {
    total_iter += r.iterations;
    max_iter = std::max(max_iter, r.iterations);
    max_ratio = std::max(max_ratio, r.max_contraction_ratio);
  }
  const double l2_0 = bo::norm_l2(u0);
  const bo::GridFunction& u_end = traj.snapshots.empty() ? u0 : traj.snapshots.back();

  json report{{"config", run_config_to_json(cfg)},
              {"lambda", traj.lambda_used},
              {"dt", traj.step_reports.empty() ? 0.0 : traj.step_reports.front().dt_used},
              {"n_steps", traj.step_reports.size()},
              {"total_iterations", total_iter},
              {"max_iterations_per_step", max_iter},
              {"max_contraction_ratio", max_ratio},
              {"l2_initial", l2_0},
              {"l2_final", bo::norm_l2(u_end)},
              {"l2_drift", l2_0 > 0 ? std::abs(bo::norm_l2(u_end) - l2_0) / l2_0 : 0.0},
              {"h2_initial", traj.h2_series.front()},
              {"h2_final", traj.h2_series.back()},
              {"growth_bound_violations", traj.growth_bound_violations},
              {"snapshot_times", traj.snapshot_times}};
  if (exact_at_end && !traj.snapshots.empty()) {
    bo::GridFunction uex(grid);
    for (int j = 0; j < grid.n_points; ++j) uex[j] = exact_at_end(grid.x(j));
    auto [e1, e2] = bo::relative_errors(uex, traj.snapshots.back());
    report["e1_percent"] = e1;
    report["e2_percent"] = e2;
  }
  if (!cfg.report_json.empty()) {
    std::ofstream rj(cfg.report_json);
    if (!rj) throw std::runtime_error("cannot write " + cfg.report_json);
    rj << report.dump(2) << "\n";
  }
  std::cout << "wrote " << cfg.output_csv;
  if (!cfg.report_json.empty()) std::cout << " and " << cfg.report_json;
  std::cout << "\n";
  return 0;
}

int cmd_convergence(const std::string& study, const std::vector<int>& levels, RunConfig cfg,
                    const std::string& out_csv, const std::string& report_path) {
  bo::ConvergenceTable table;
  json config_echo;
  if (study == "one_soliton") {
    bo::OneSolitonStudyConfig sc;
    sc.params = bo::OneSolitonParams{cfg.c, cfg.l_domain};
    sc.t_end = cfg.t_end;
    sc.cfl = cfg.cfl;
    sc.fp = cfg.fp;
    config_echo = {{"study", study},
                   {"levels", levels},
                   {"c", sc.params.c},
                   {"l_domain", sc.params.l_domain},
                   {"t_end", sc.t_end},
                   {"cfl", cfl_to_json(sc.cfl)},
                   {"fp", fp_to_json(sc.fp)}};
    table = bo::run_one_soliton_study(levels, sc);
  } else if (study == "two_soliton") {
    bo::TwoSolitonStudyConfig sc;
    sc.params = bo::TwoSolitonParams{cfg.c1, cfg.c2};
    if (cfg.x_min) sc.x_min = *cfg.x_min;
    if (cfg.x_max) sc.x_max = *cfg.x_max;
    sc.t_start = cfg.t_start;
    sc.duration = cfg.t_end;
    sc.cfl = cfg.cfl;
    sc.fp = cfg.fp;
    config_echo = {{"study", study},       {"levels", levels},
                   {"c1", sc.params.c1},   {"c2", sc.params.c2},
                   {"x_min", sc.x_min},    {"x_max", sc.x_max},
                   {"t_start", sc.t_start},{"duration", sc.duration},
                   {"cfl", cfl_to_json(sc.cfl)},
                   {"fp", fp_to_json(sc.fp)}};
    table = bo::run_two_soliton_study(levels, sc);
  } else {
    throw std::invalid_argument("study must be one_soliton or two_soliton");
  }

  std::ofstream csv(out_csv);
  if (!csv) throw std::runtime_error("cannot write " + out_csv);
  bo::write_table_csv(csv, table);
  csv.close();

  if (!report_path.empty()) {
    json report = bo::to_json(table);
    report["config"] = config_echo;
    std::ofstream rj(report_path);
    if (!rj) throw std::runtime_error("cannot write " + report_path);
    rj << report.dump(2) << "\n";
  }
  bool all_ok = true;
  for (const bo::ErrorReport& r : table.rows) {
    if (!r.ok) {
      std::cerr << "level N=" << r.n_points << " failed: " << r.message << "\n";
      all_ok = false;
    }
  }
  std::cout << "wrote " << out_csv << "\n";
  return all_ok ? 0 : 1;
}

int cmd_hilbert_check(const std::vector<int>& n_levels, const std::string& out_csv,
                      double defect_tol, double inject_defect) {
  std::vector<double> dx_levels;
  const double window = 200.0;
  for (int n : n_levels) {
    if (n < 3 || n % 2 == 0)
      throw std::invalid_argument("hilbert-check: N must be odd and >= 3, got " +
                                  std::to_string(n));
    dx_levels.push_back(2.0 * window / (n - 1));
  }
  std::vector<bo::HilbertStudyRow> rows =
      bo::run_hilbert_convergence_study(dx_levels, window, inject_defect);

  std::ofstream csv(out_csv);
  if (!csv) throw std::runtime_error("cannot write " + out_csv);
  bo::write_hilbert_csv(csv, rows);
  csv.close();

  int bad = 0;
  for (const bo::HilbertStudyRow& r : rows) {
    if (r.skewness_defect > defect_tol || r.norm_defect > defect_tol) {
      std::cerr << "N=" << r.n_points << ": defect above " << defect_tol
                << " (skew=" << r.skewness_defect << ", norm=" << r.norm_defect << ")\n";
      ++bad;
    }
  }
  std::cout << "wrote " << out_csv << "\n";
  return bad == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-difference Benjamin-Ono solver"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string config_path;
  std::string ic = "one-soliton";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--cfl-fraction", cfg.cfl.cfl_fraction, "contraction fraction in (0,1)");
    sub->add_option_function<std::string>(
           "--cfl-mode",
           [&](const std::string& m) {
             if (m == "practical") cfg.cfl.mode = bo::CflMode::practical;
             else if (m == "theoretical") cfg.cfl.mode = bo::CflMode::theoretical;
             else throw CLI::ValidationError("--cfl-mode", "must be practical or theoretical");
           },
           "practical | theoretical")
        ->default_str("practical");
    sub->add_option_function<double>(
        "--lambda", [&](double v) { cfg.cfl.practical_lambda = v; },
        "fixed mesh ratio dt/dx (practical mode override)");
    sub->add_option_function<std::string>(
           "--lambda-policy",
           [&](const std::string& m) {
             if (m == "fixed-from-initial") cfg.cfl.lambda_policy = bo::LambdaPolicy::fixed_from_initial;
             else if (m == "adaptive") cfg.cfl.lambda_policy = bo::LambdaPolicy::adaptive;
             else throw CLI::ValidationError("--lambda-policy", "must be fixed-from-initial or adaptive");
           },
           "fixed-from-initial | adaptive")
        ->default_str("fixed-from-initial");
    sub->add_option("--fp-tol", cfg.fp.rel_tolerance, "fixed-point relative h2 tolerance");
    sub->add_option("--fp-max-iters", cfg.fp.max_iterations, "fixed-point iteration cap");
  };

  // --- run ---
  CLI::App* run = app.add_subcommand("run", "run a single simulation");
  run->add_option("--config", config_path, "JSON run config (flags override)");
  run->add_option("--ic", ic, "one-soliton | two-soliton | file");
  run->add_option("--N", cfg.n_points, "number of grid points (odd)");
  run->add_option("--l-domain", cfg.l_domain, "half period L; domain is [-L, L)");
  run->add_option_function<double>("--x-min", [&](double v) { cfg.x_min = v; }, "domain start");
  run->add_option_function<double>("--x-max", [&](double v) { cfg.x_max = v; }, "domain end");
  run->add_option("--c", cfg.c, "one-soliton wave speed");
  run->add_option("--c1", cfg.c1, "two-soliton speed 1");
  run->add_option("--c2", cfg.c2, "two-soliton speed 2");
  run->add_option("--t-start", cfg.t_start, "two-soliton initial sampling time");
  run->add_option("--t-end", cfg.t_end, "evolution time");
  run->add_option("--input", cfg.input_file, "two-column CSV x,u for --ic file");
  run->add_option("--snapshot-times", cfg.snapshot_times, "explicit snapshot times");
  run->add_option_function<int>("--snapshots", [&](int v) { cfg.snapshot_count = v; },
                                "number of evenly spaced snapshot intervals");
  run->add_option("--out", cfg.output_csv, "snapshot CSV path");
  run->add_option("--report", cfg.report_json, "JSON report path");
  add_common(run);

  // --- convergence ---
  CLI::App* conv = app.add_subcommand("convergence", "grid refinement study");
  std::string study = "one-soliton";
  std::vector<int> levels{33, 65, 129};
  std::string conv_out = "table.csv", conv_report;
  conv->add_option("--study", study, "one-soliton | two-soliton");
  conv->add_option("--levels", levels, "odd N per refinement level")->delimiter(',');
  conv->add_option("--t-end", cfg.t_end, "end time (one-soliton) / duration (two-soliton)");
  conv->add_option("--c", cfg.c, "one-soliton wave speed");
  conv->add_option("--l-domain", cfg.l_domain, "one-soliton half period");
  conv->add_option("--c1", cfg.c1, "two-soliton speed 1");
  conv->add_option("--c2", cfg.c2, "two-soliton speed 2");
  conv->add_option_function<double>("--x-min", [&](double v) { cfg.x_min = v; }, "domain start");
  conv->add_option_function<double>("--x-max", [&](double v) { cfg.x_max = v; }, "domain end");
  conv->add_option("--t-start", cfg.t_start, "two-soliton initial sampling time");
  conv->add_option("--out", conv_out, "CSV table path");
  conv->add_option("--report", conv_report, "JSON report path");
  add_common(conv);

  // --- hilbert-check ---
  CLI::App* hc = app.add_subcommand("hilbert-check", "discrete Hilbert transform checks");
  std::vector<int> hc_levels{2001, 4001, 8001};
  std::string hc_out = "hilbert.csv";
  double inject = 0.0;
  hc->add_option("--levels", hc_levels, "odd point counts on [-200,200]")->delimiter(',');
  hc->add_option("--out", hc_out, "CSV path");
  hc->add_option("--inject-kernel-defect", inject, "test hook: perturb the DFT multiplier")
      ->group("");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw std::runtime_error("cannot open " + config_path);
        json j = json::parse(in);
        RunConfig from_file = run_config_from_json(j);
        // flags given on the command line override the file
        RunConfig defaults;
        auto keep = [&](auto RunConfig::* field, const char* flag) {
          if (run->count(flag) == 0) cfg.*field = from_file.*field;
        };
        keep(&RunConfig::n_points, "--N");
        keep(&RunConfig::l_domain, "--l-domain");
        keep(&RunConfig::c, "--c");
        keep(&RunConfig::c1, "--c1");
        keep(&RunConfig::c2, "--c2");
        keep(&RunConfig::t_start, "--t-start");
        keep(&RunConfig::t_end, "--t-end");
        keep(&RunConfig::input_file, "--input");
        keep(&RunConfig::output_csv, "--out");
        keep(&RunConfig::report_json, "--report");
        if (run->count("--ic") == 0) cfg.initial_condition = from_file.initial_condition;
        if (run->count("--x-min") == 0) cfg.x_min = from_file.x_min;
        if (run->count("--x-max") == 0) cfg.x_max = from_file.x_max;
        if (run->count("--snapshot-times") == 0) cfg.snapshot_times = from_file.snapshot_times;
        if (run->count("--snapshots") == 0) cfg.snapshot_count = from_file.snapshot_count;
        if (run->count("--cfl-fraction") == 0 && run->count("--cfl-mode") == 0 &&
            run->count("--lambda") == 0 && run->count("--lambda-policy") == 0)
          cfg.cfl = from_file.cfl;
        if (run->count("--fp-tol") == 0 && run->count("--fp-max-iters") == 0)
          cfg.fp = from_file.fp;
      }
      if (run->count("--ic") != 0 || config_path.empty()) {
        if (ic == "one-soliton") cfg.initial_condition = "one_soliton";
        else if (ic == "two-soliton") cfg.initial_condition = "two_soliton";
        else if (ic == "file") cfg.initial_condition = "file";
        else throw std::invalid_argument("--ic must be one-soliton, two-soliton or file");
      }
      return cmd_run(cfg);
    }
    if (conv->parsed()) {
      std::string study_key;
      if (study == "one-soliton") study_key = "one_soliton";
      else if (study == "two-soliton") study_key = "two_soliton";
      else throw std::invalid_argument("--study must be one-soliton or two-soliton");
      if (conv->count("--t-end") == 0) cfg.t_end = (study_key == "one_soliton") ? 120.0 : 20.0;
      if (study_key == "two_soliton" && !cfg.x_min) { cfg.x_min = -30.0; cfg.x_max = 30.0; }
      return cmd_convergence(study_key, levels, cfg, conv_out, conv_report);
    }
    if (hc->parsed()) return cmd_hilbert_check(hc_levels, hc_out, 1e-10, inject);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
