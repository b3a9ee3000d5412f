#pragma once

#include <chrono>
#include <cmath>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bo/grid.hpp"
#include "bo/hilbert.hpp"
#include "bo/io.hpp"
#include "bo/solutions.hpp"
#include "bo/stepper.hpp"

namespace bo {

/// Percentage errors against a reference at one comparison time:
/// E1 in the trapezoid-rule L2 norm (which on a periodic grid is the
/// dx-weighted sum with endpoints identified), E2 in the sup norm.
inline std::pair<double, double> relative_errors(const GridFunction& u_exact,
                                                 const GridFunction& u_num) {
  if (!(u_exact.grid == u_num.grid))
    throw std::invalid_argument("relative_errors: grid mismatch");
  const double ref_l2 = norm_l2(u_exact);
  const double ref_inf = norm_inf(u_exact);
  if (ref_l2 == 0.0 || ref_inf == 0.0)
    throw std::invalid_argument("relative_errors: reference norm is zero");
  const GridFunction d = u_exact - u_num;
  return {100.0 * norm_l2(d) / ref_l2, 100.0 * norm_inf(d) / ref_inf};
}

struct ErrorReport {
  int n_points = 0;
  double e1_percent = 0.0;
  double e2_percent = 0.0;
  double dt_used = 0.0;
  double lambda_used = 0.0;
  double l2_drift = 0.0;
  long total_iterations = 0;
  double wall_time_s = 0.0;
  bool ok = true;
  std::string message;
};

struct ConvergenceTable {
  std::vector<ErrorReport> rows;
  // rate i sits between rows i and i+1; absent where an error vanishes or a row failed
  std::vector<std::optional<double>> rates_e1;
  std::vector<std::optional<double>> rates_e2;
};

/// Fill in rate columns: rate = log2(E_coarse / E_fine) between adjacent rows.
inline ConvergenceTable convergence_rates(ConvergenceTable t) {
  if (t.rows.size() < 2)
    throw std::invalid_argument("convergence_rates: need at least two rows");
  for (size_t i = 1; i < t.rows.size(); ++i)
    if (t.rows[i].n_points <= t.rows[i - 1].n_points)
      throw std::invalid_argument("convergence_rates: rows must be strictly increasing in N");
  t.rates_e1.assign(t.rows.size() - 1, std::nullopt);
  t.rates_e2.assign(t.rows.size() - 1, std::nullopt);
  for (size_t i = 0; i + 1 < t.rows.size(); ++i) {
    const ErrorReport& a = t.rows[i];
    const ErrorReport& b = t.rows[i + 1];
    if (!a.ok || !b.ok) continue;
    if (a.e1_percent > 0.0 && b.e1_percent > 0.0)
      t.rates_e1[i] = std::log2(a.e1_percent / b.e1_percent);
    if (a.e2_percent > 0.0 && b.e2_percent > 0.0)
      t.rates_e2[i] = std::log2(a.e2_percent / b.e2_percent);
  }
  return t;
}

namespace detail {
inline void require_levels(const std::vector<int>& levels) {
  if (levels.empty()) throw std::invalid_argument("study: empty level list");
  for (size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] < 3 || levels[i] % 2 == 0)
      throw std::invalid_argument("study: levels must be odd and >= 3");
    if (i > 0 && levels[i] <= levels[i - 1])
      throw std::invalid_argument("study: levels must be strictly increasing");
  }
}

template <typename Sampler>
ErrorReport run_level(int n, const GridSpec& grid, const Sampler& initial, const Sampler& final_ref,
                      double duration, const CflParams& cfl, const FixedPointConfig& fp) {
  ErrorReport r;
  r.n_points = n;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const GridFunction u0 = initial(grid);
    Trajectory traj = evolve(u0, duration, cfl, fp, {duration});
    const GridFunction& u_end = traj.snapshots.back();
    const GridFunction u_exact = final_ref(grid);
    auto [e1, e2] = relative_errors(u_exact, u_end);
    r.e1_percent = e1;
    r.e2_percent = e2;
    r.lambda_used = traj.lambda_used;
    r.dt_used = traj.step_reports.empty() ? 0.0 : traj.step_reports.front().dt_used;
    const double l2_0 = norm_l2(u0);
    r.l2_drift = l2_0 > 0.0 ? std::abs(norm_l2(u_end) - l2_0) / l2_0 : 0.0;
    for (const StepReport& s : traj.step_reports) r.total_iterations += s.iterations;
  } catch (const std::exception& e) {
    r.ok = false;
    r.message = e.what();
  }
  r.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}
}  // namespace detail

struct OneSolitonStudyConfig {
  OneSolitonParams params{0.25, 15.0};
  double t_end = 120.0;  // one temporal period; the full table uses 480
  CflParams cfl;
  FixedPointConfig fp;
};

inline ConvergenceTable run_one_soliton_study(const std::vector<int>& levels,
                                              const OneSolitonStudyConfig& cfg) {
  detail::require_levels(levels);
  cfg.params.validate();
  ConvergenceTable table;
  for (int n : levels) {
    const GridSpec grid = GridSpec::periodic(n, cfg.params.l_domain);
    auto at_time = [&cfg](double t) {
      return [&cfg, t](const GridSpec& g) { return sample_on_grid(cfg.params, g, t); };
    };
    table.rows.push_back(detail::run_level(n, grid, at_time(0.0), at_time(cfg.t_end), cfg.t_end,
                                           cfg.cfl, cfg.fp));
  }
  return table.rows.size() >= 2 ? convergence_rates(std::move(table)) : table;
}

struct TwoSolitonStudyConfig {
  TwoSolitonParams params{2.0, 1.0};
  double x_min = -30.0;
  double x_max = 30.0;
  double t_start = -10.0;
  double duration = 20.0;
  CflParams cfl;
  FixedPointConfig fp;
};

/// Two-soliton study on a truncated interval with periodic continuation; the
/// tails of w stay small on [t_start, t_start + duration], so the periodic
/// run approximates the unrestricted problem.
inline ConvergenceTable run_two_soliton_study(const std::vector<int>& levels,
                                              const TwoSolitonStudyConfig& cfg) {
  detail::require_levels(levels);
  cfg.params.validate();
  if (!(cfg.x_max > cfg.x_min)) throw std::invalid_argument("study: x_max must exceed x_min");
  ConvergenceTable table;
  for (int n : levels) {
    const GridSpec grid{n, (cfg.x_max - cfg.x_min) / n, cfg.x_min, Topology::periodic};
    auto at_time = [&cfg](double t) {
      return [&cfg, t](const GridSpec& g) { return sample_on_grid(cfg.params, g, t); };
    };
    table.rows.push_back(detail::run_level(n, grid, at_time(cfg.t_start),
                                           at_time(cfg.t_start + cfg.duration), cfg.duration,
                                           cfg.cfl, cfg.fp));
  }
  return table.rows.size() >= 2 ? convergence_rates(std::move(table)) : table;
}

struct HilbertStudyRow {
  int n_points = 0;
  double dx = 0.0;
  double l2_error_vs_continuous = 0.0;
  double skewness_defect = 0.0;
  double norm_defect = 0.0;
};

namespace detail {
inline double lorentzian(double x) { return 1.0 / (1.0 + x * x); }
inline double lorentzian_hilbert(double x) { return x / (1.0 + x * x); }
}  // namespace detail

/// Line-transform L2 convergence study for phi = 1/(1+x^2) on [-window, window],
/// plus periodic-kernel skewness and norm defects at the same odd N per level.
/// The L2 distance compares the piecewise-constant transform against the
/// closed form x/(1+x^2) by per-cell Gauss-Legendre quadrature.
/// multiplier_perturbation is a test hook that corrupts the DFT multiplier of
/// mode 1 so callers can verify their defect guards fire.
inline std::vector<HilbertStudyRow> run_hilbert_convergence_study(
    const std::vector<double>& dx_levels, double window = 200.0,
    double multiplier_perturbation = 0.0) {
  if (dx_levels.empty()) throw std::invalid_argument("hilbert study: empty level list");
  std::vector<HilbertStudyRow> rows;
  // 4-point Gauss-Legendre nodes/weights on [-1, 1]
  const double gx[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                        0.8611363115940526};
  const double gw[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                        0.3478548451374538};

  for (double dx : dx_levels) {
    if (!(dx > 0.0)) throw std::invalid_argument("hilbert study: dx must be positive");
    const int n = static_cast<int>(std::lround(2.0 * window / dx)) + 1;
    if (n % 2 == 0)
      throw std::invalid_argument("hilbert study: level gives even N = " + std::to_string(n));
    HilbertStudyRow row;
    row.n_points = n;
    row.dx = dx;

    // L2 error of the piecewise-constant discrete transform over the window.
    const GridSpec line = GridSpec::line(n, dx, -window);
    GridFunction phi(line);
    for (int j = 0; j < n; ++j) phi[j] = detail::lorentzian(line.x(j));
    const GridFunction h = hilbert_line(phi, 0);
    double err2 = 0.0;
    for (int j = 0; j < n; ++j) {
      const double xl = line.x(j);
      if (xl + dx > window + 1e-12) break;
      double cell = 0.0;
      for (int q = 0; q < 4; ++q) {
        const double xq = xl + 0.5 * dx * (gx[q] + 1.0);
        const double d = detail::lorentzian_hilbert(xq) - h[j];
        cell += gw[q] * d * d;
      }
      err2 += 0.5 * dx * cell;
    }
    row.l2_error_vs_continuous = std::sqrt(err2);

    // Periodic-kernel law defects at the same N, on seeded random data.
    PeriodicHilbertKernel kernel = build_periodic_kernel(n);
    if (multiplier_perturbation != 0.0) {
      kernel.c_hat[1] *= (1.0 + multiplier_perturbation);
      kernel.c_hat[static_cast<size_t>(n - 1)] *= (1.0 + multiplier_perturbation);
    }
    const GridSpec per = GridSpec::periodic(n, window);
    std::mt19937_64 rng(0x9E3779B97F4A7C15ull ^ static_cast<unsigned long long>(n));
    std::normal_distribution<double> gauss;
    for (int trial = 0; trial < 3; ++trial) {
      GridFunction p(per), q(per);
      double mean_p = 0.0;
      for (int j = 0; j < n; ++j) {
        p[j] = gauss(rng);
        q[j] = gauss(rng);
        mean_p += p[j];
      }
      mean_p /= n;
      for (int j = 0; j < n; ++j) p[j] -= mean_p;  // mean-zero: norm is preserved exactly

      const GridFunction hp = hilbert_periodic(p, kernel);
      const GridFunction hq = hilbert_periodic(q, kernel);
      const double skew = std::abs(inner_product(hp, q) + inner_product(p, hq)) /
                          (norm_l2(p) * norm_l2(q));
      const double norm_def = std::abs(norm_l2(hp) - norm_l2(p)) / norm_l2(p);
      row.skewness_defect = std::max(row.skewness_defect, skew);
      row.norm_defect = std::max(row.norm_defect, norm_def);
    }
    rows.push_back(row);
  }
  return rows;
}

// ---- CSV / JSON emission ----

inline void write_table_csv(std::ostream& os, const ConvergenceTable& t) {
  os << "N,E1,rate1,E2,rate2,lambda,dt,l2_drift,iterations,wall_time_s\n";
  for (size_t i = 0; i < t.rows.size(); ++i) {
    const ErrorReport& r = t.rows[i];
    const auto rate = [&](const std::vector<std::optional<double>>& rates) -> std::string {
      if (i == 0 || i - 1 >= rates.size() || !rates[i - 1]) return "";
      return format_double(*rates[i - 1]);
    };
    os << r.n_points << ',' << format_double(r.e1_percent) << ',' << rate(t.rates_e1) << ','
       << format_double(r.e2_percent) << ',' << rate(t.rates_e2) << ','
       << format_double(r.lambda_used) << ',' << format_double(r.dt_used) << ','
       << format_double(r.l2_drift) << ',' << r.total_iterations << ','
       << format_double(r.wall_time_s) << '\n';
  }
}

inline void write_hilbert_csv(std::ostream& os, const std::vector<HilbertStudyRow>& rows) {
  os << "N,l2_error_vs_continuous,skewness_defect,norm_defect\n";
  for (const HilbertStudyRow& r : rows)
    os << r.n_points << ',' << format_double(r.l2_error_vs_continuous) << ','
       << format_double(r.skewness_defect) << ',' << format_double(r.norm_defect) << '\n';
}

inline nlohmann::json to_json(const ErrorReport& r) {
  return {{"n_points", r.n_points},
          {"e1_percent", r.e1_percent},
          {"e2_percent", r.e2_percent},
          {"dt_used", r.dt_used},
          {"lambda_used", r.lambda_used},
          {"l2_drift", r.l2_drift},
          {"total_iterations", r.total_iterations},
          {"wall_time_s", r.wall_time_s},
          {"ok", r.ok},
          {"message", r.message}};
}

inline nlohmann::json to_json(const ConvergenceTable& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const ErrorReport& r : t.rows) rows.push_back(to_json(r));
  const auto rates = [](const std::vector<std::optional<double>>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& r : v) {
      if (r)
        a.push_back(*r);
      else
        a.push_back(nullptr);
    }
    return a;
  };
  return {{"rows", rows}, {"rates_e1", rates(t.rates_e1)}, {"rates_e2", rates(t.rates_e2)}};
}

}  // namespace bo
