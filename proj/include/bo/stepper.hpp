#pragma once

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "bo/dft.hpp"
#include "bo/grid.hpp"
#include "bo/hilbert.hpp"

namespace bo {

enum class CflMode { theoretical, practical };
enum class LambdaPolicy { fixed_from_initial, adaptive };

/// Time-step selection. lambda is the mesh ratio dt/dx. The theoretical mode
/// enforces lambda <= cfl_fraction / (k_const * |u|_h2), which guarantees the
/// inner iteration contracts with factor cfl_fraction; the practical mode uses
/// lambda = 0.5 / |u|_h2 (or an explicit override), roughly an order of
/// magnitude larger and adequate in practice.
struct CflParams {
  double cfl_fraction = 0.5;
  CflMode mode = CflMode::practical;
  std::optional<double> practical_lambda;
  LambdaPolicy lambda_policy = LambdaPolicy::fixed_from_initial;
  double lambda_cap = 1.0;

  double k_const() const { return (6.0 - cfl_fraction) / (1.0 - cfl_fraction); }

  void validate() const {
    if (!(cfl_fraction > 0.0 && cfl_fraction < 1.0))
      throw std::invalid_argument("cfl_fraction must lie in (0,1)");
    if (practical_lambda && !(*practical_lambda > 0.0))
      throw std::invalid_argument("practical_lambda must be positive");
    if (!(lambda_cap > 0.0)) throw std::invalid_argument("lambda_cap must be positive");
  }
};

struct FixedPointConfig {
  double rel_tolerance = 1e-10;  // on |w_{l+1}-w_l|_h2 / |v|_h2
  int max_iterations = 50;
  double divergence_guard = 10.0;  // abort if an increment grows by this factor

  void validate() const {
    if (!(rel_tolerance > 0.0)) throw std::invalid_argument("rel_tolerance must be positive");
    if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
    if (!(divergence_guard > 1.0)) throw std::invalid_argument("divergence_guard must exceed 1");
  }
};

struct StepReport {
  double dt_used = 0.0;
  int iterations = 0;
  double final_contraction_ratio = 0.0;
  double max_contraction_ratio = 0.0;
  double l2_before = 0.0;
  double l2_after = 0.0;
};

struct StepError : std::runtime_error {
  StepError(const std::string& what, int iteration, double last_ratio)
      : std::runtime_error(what), iteration(iteration), last_ratio(last_ratio) {}
  int iteration = 0;
  double last_ratio = 0.0;
};

/// G(u) = <u> Du: three-point average times central difference. Satisfies
/// <G(u), u> = 0, which is what makes the scheme conservative.
inline GridFunction nonlinear_term(const GridFunction& u) {
  return hadamard(average(u, Avg::three_point), difference(u, Diff::central));
}

/// Largest admissible mesh ratio dt/dx for the state u under the given policy.
inline double max_lambda(const GridFunction& u, const CflParams& p) {
  p.validate();
  const double nh2 = norm_h2(u);
  if (nh2 == 0.0) return p.lambda_cap;
  double lam;
  if (p.mode == CflMode::theoretical)
    lam = p.cfl_fraction / (p.k_const() * nh2);
  else
    lam = p.practical_lambda ? *p.practical_lambda : 0.5 / nh2;
  return std::min(lam, p.lambda_cap);
}

/// Crank-Nicolson stepper for the periodic scheme
///   u^{n+1} = u^n + dt G(u^{n+1/2}) + dt H_per(D+D- u^{n+1/2}),
/// solved per step by the fixed-point iteration that keeps the linear
/// Hilbert-Laplacian term implicit. All linear solves are exact in spectral
/// space: mode k is divided by 1 - (dt/2) c_hat_k sigma_k, whose modulus is
/// >= 1 because c_hat_k sigma_k is purely imaginary.
///
/// Holds FFT plans; not safe to share one instance across threads.
class CrankNicolsonStepper {
 public:
  CrankNicolsonStepper(const GridSpec& grid, PeriodicHilbertKernel kernel, FixedPointConfig fp)
      : grid_(grid), kernel_(std::move(kernel)), fp_(fp), plan_(grid.n_points),
        sigma_(laplacian_symbol(grid)) {
    grid_.validate();
    fp_.validate();
    if (grid_.topology != Topology::periodic)
      throw std::invalid_argument("CrankNicolsonStepper: requires periodic topology");
    if (kernel_.n_points != grid_.n_points)
      throw std::invalid_argument("CrankNicolsonStepper: kernel size does not match grid");
    const size_t n = static_cast<size_t>(grid_.n_points);
    hilbert_laplacian_im_.resize(n);
    for (size_t k = 0; k < n; ++k)
      hilbert_laplacian_im_[k] = kernel_.c_hat[k].imag() * sigma_[k];
  }

  const GridSpec& grid() const { return grid_; }
  const PeriodicHilbertKernel& kernel() const { return kernel_; }
  const FixedPointConfig& fixed_point_config() const { return fp_; }

  /// Solve (I - (dt/2) H D+D-) w = rhs. Unconditionally well posed; the
  /// solve is non-expansive in l2 since every spectral divisor has modulus >= 1.
  GridFunction resolvent(const GridFunction& rhs, double dt) {
    require_nonempty(rhs, "resolvent");
    if (!(rhs.grid == grid_)) throw std::invalid_argument("resolvent: grid mismatch");
    Spectrum s = plan_.forward(rhs.values);
    divide_resolvent(s, dt);
    return invert(s, "resolvent");
  }

  std::pair<GridFunction, StepReport> step(const GridFunction& v, double dt) {
    require_nonempty(v, "step");
    require_finite(v, "step");
    if (!(v.grid == grid_)) throw std::invalid_argument("step: grid mismatch");
    if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");

    StepReport report;
    report.dt_used = dt;
    report.l2_before = norm_l2(v);
    const double v_h2 = norm_h2(v);

    // Fixed part of the iteration: v + (dt/2) H D+D- v, computed once.
    Spectrum vhat = plan_.forward(v.values);
    Spectrum fhat = vhat;
    for (size_t k = 0; k < fhat.size(); ++k)
      fhat[k] += std::complex<double>(0.0, 0.5 * dt * hilbert_laplacian_im_[k]) * vhat[k];
    const GridFunction fixed = invert(fhat, "step");

    GridFunction w = v;
    double prev_inc = -1.0;
    for (int l = 1; l <= fp_.max_iterations; ++l) {
      const GridFunction mid = 0.5 * (v + w);
      GridFunction rhs = fixed + dt * nonlinear_term(mid);
      Spectrum s = plan_.forward(rhs.values);
      divide_resolvent(s, dt);
      GridFunction w_next = invert(s, "step");

      const double inc = norm_h2(w_next - w);
      w = std::move(w_next);
      report.iterations = l;
      if (prev_inc > 0.0) {
        const double ratio = inc / prev_inc;
        report.final_contraction_ratio = ratio;
        report.max_contraction_ratio = std::max(report.max_contraction_ratio, ratio);
        if (ratio > fp_.divergence_guard)
          throw StepError("fixed-point iteration diverging; reduce lambda", l, ratio);
      }
      prev_inc = inc;
      if (inc <= fp_.rel_tolerance * v_h2) {
        report.l2_after = norm_l2(w);
        return {std::move(w), report};
      }
    }
    throw StepError("fixed-point iteration did not converge in " +
                        std::to_string(fp_.max_iterations) + " iterations",
                    fp_.max_iterations, report.final_contraction_ratio);
  }

 private:
  void divide_resolvent(Spectrum& s, double dt) const {
    for (size_t k = 0; k < s.size(); ++k) {
      const double a = 0.5 * dt * hilbert_laplacian_im_[k];  // divisor is 1 - i a
      s[k] = s[k] * std::complex<double>(1.0, a) / (1.0 + a * a);
    }
  }

  GridFunction invert(const Spectrum& s, const char* op) {
    if (detail::hermitian_defect(s) > detail::kImagResidueTol)
      throw std::runtime_error(std::string(op) + ": spectrum lost conjugate symmetry");
    Spectrum inv = plan_.backward(s);
    GridFunction out(grid_, detail::real_part_checked(inv, grid_.n_points, op));
    require_finite(out, op);
    return out;
  }

  GridSpec grid_;
  PeriodicHilbertKernel kernel_;
  FixedPointConfig fp_;
  Dft plan_;
  std::vector<double> sigma_;
  std::vector<double> hilbert_laplacian_im_;  // imaginary part of c_hat_k * sigma_k
};

inline GridFunction implicit_resolvent(const GridFunction& rhs, double dt,
                                       const PeriodicHilbertKernel& kernel) {
  CrankNicolsonStepper stepper(rhs.grid, kernel, FixedPointConfig{});
  return stepper.resolvent(rhs, dt);
}

inline std::pair<GridFunction, StepReport> step_crank_nicolson(const GridFunction& v, double dt,
                                                               const PeriodicHilbertKernel& kernel,
                                                               const FixedPointConfig& fp) {
  CrankNicolsonStepper stepper(v.grid, kernel, fp);
  return stepper.step(v, dt);
}

struct Trajectory {
  std::vector<double> snapshot_times;
  std::vector<GridFunction> snapshots;
  std::vector<StepReport> step_reports;
  std::vector<double> h2_series;  // |u^n|_h2 including the initial state
  double lambda_used = 0.0;       // lambda of the first step
  int growth_bound_violations = 0;
};

struct EvolveOptions {
  double blow_up_factor = 1e3;  // error out if |u|_h2 exceeds this times |u0|_h2
};

/// Advance u0 to t_end with dt = lambda dx. Steps are shortened to land
/// exactly on every snapshot time and on t_end; snapshots are never
/// interpolated. The h2 growth bound y_{n+1} <= y_n + dt sqrt(3/2) (K y_n)^2
/// is monitored and violations counted.
inline Trajectory evolve(const GridFunction& u0, double t_end, const CflParams& cfl,
                         const FixedPointConfig& fp, std::vector<double> snapshot_times = {},
                         const EvolveOptions& opts = {}) {
  require_nonempty(u0, "evolve");
  require_finite(u0, "evolve");
  cfl.validate();
  fp.validate();
  if (!(t_end >= 0.0)) throw std::invalid_argument("evolve: t_end must be nonnegative");
  std::sort(snapshot_times.begin(), snapshot_times.end());
  snapshot_times.erase(std::unique(snapshot_times.begin(), snapshot_times.end()),
                       snapshot_times.end());
  for (double t : snapshot_times)
    if (t < 0.0 || t > t_end * (1.0 + 1e-12) + 1e-15)
      throw std::invalid_argument("evolve: snapshot times must lie in [0, t_end]");

  PeriodicHilbertKernel kernel = build_periodic_kernel(u0.grid.n_points);
  CrankNicolsonStepper stepper(u0.grid, std::move(kernel), fp);

  Trajectory traj;
  const double h2_0 = norm_h2(u0);
  const double sqrt32 = std::sqrt(1.5);
  const double k_const = cfl.k_const();
  double lambda = max_lambda(u0, cfl);
  traj.lambda_used = lambda;
  traj.h2_series.push_back(h2_0);

  GridFunction u = u0;
  double t = 0.0;
  size_t next_snap = 0;
  auto take_snapshots_at = [&](double time) {
    while (next_snap < snapshot_times.size() &&
           std::abs(snapshot_times[next_snap] - time) <= 1e-12 * std::max(1.0, t_end)) {
      traj.snapshot_times.push_back(snapshot_times[next_snap]);
      traj.snapshots.push_back(u);
      ++next_snap;
    }
  };
  take_snapshots_at(0.0);

  const double t_eps = 1e-12 * std::max(1.0, t_end);
  int step_index = 0;
  while (t < t_end - t_eps) {
    if (cfl.lambda_policy == LambdaPolicy::adaptive) lambda = max_lambda(u, cfl);
    double dt = lambda * u0.grid.spacing;
    // Land exactly on the next event (snapshot or final time).
    double next_event = t_end;
    if (next_snap < snapshot_times.size()) next_event = std::min(next_event, snapshot_times[next_snap]);
    bool hits_event = false;
    if (t + dt >= next_event - t_eps) {
      dt = next_event - t;
      hits_event = true;
    }

    const double y_before = traj.h2_series.back();
    try {
      auto [u_next, report] = stepper.step(u, dt);
      u = std::move(u_next);
      traj.step_reports.push_back(report);
    } catch (StepError& e) {
      throw StepError(std::string(e.what()) + " (step " + std::to_string(step_index) + ")",
                      e.iteration, e.last_ratio);
    }
    t = hits_event ? next_event : t + dt;
    ++step_index;

    const double y_after = norm_h2(u);
    traj.h2_series.push_back(y_after);
    if (y_after > y_before + dt * sqrt32 * (k_const * y_before) * (k_const * y_before) + 1e-12)
      ++traj.growth_bound_violations;
    if (y_after > opts.blow_up_factor * h2_0)
      throw StepError("h2 norm exceeded blow-up bound at step " + std::to_string(step_index),
                      step_index, y_after / std::max(h2_0, 1e-300));
    take_snapshots_at(t);
  }
  return traj;
}

}  // namespace bo
