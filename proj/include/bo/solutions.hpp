#pragma once

#include <cmath>
#include <functional>

#include "bo/dft.hpp"
#include "bo/grid.hpp"

namespace bo {

/// Periodic one-wave solution
///   u(x,t) = -2 c delta^2 / (1 - sqrt(1-delta^2) cos(c delta (x - c t))),
/// 2 l_domain-periodic in x and periodic in time with period 2 l_domain / c.
struct OneSolitonParams {
  double c = 0.25;
  double l_domain = 15.0;

  double delta() const { return M_PI / (c * l_domain); }
  double time_period() const { return 2.0 * l_domain / c; }

  void validate() const {
    if (!(c > 0.0)) throw std::invalid_argument("one-soliton: wave speed c must be positive");
    if (!(l_domain > 0.0)) throw std::invalid_argument("one-soliton: l_domain must be positive");
    const double d = delta();
    if (!(d > 0.0 && d < 1.0))
      throw std::invalid_argument("one-soliton: delta = pi/(c l_domain) must lie in (0,1)");
  }
};

inline double one_soliton(double x, double t, const OneSolitonParams& p) {
  p.validate();
  const double d = p.delta();
  const double phase = p.c * d * (x - p.c * t);
  return -2.0 * p.c * d * d / (1.0 - std::sqrt(1.0 - d * d) * std::cos(phase));
}

/// Line two-soliton of the unrestricted problem, speeds c1 != c2, with
/// lambda_j = x - c_j t. Decays rationally in both tails.
struct TwoSolitonParams {
  double c1 = 2.0;
  double c2 = 1.0;

  void validate() const {
    if (!(c1 > 0.0) || !(c2 > 0.0))
      throw std::invalid_argument("two-soliton: speeds must be positive");
    if (c1 == c2) throw std::invalid_argument("two-soliton: speeds must differ");
  }
};

inline double two_soliton(double x, double t, const TwoSolitonParams& p) {
  p.validate();
  const double l1 = x - p.c1 * t;
  const double l2 = x - p.c2 * t;
  const double sum = p.c1 + p.c2;
  const double diff = p.c1 - p.c2;
  const double a = sum * sum * sum / (p.c1 * p.c2 * diff * diff);
  const double num = -4.0 * p.c1 * p.c2 * (p.c1 * l1 * l1 + p.c2 * l2 * l2 + a);
  const double q1 = p.c1 * p.c2 * l1 * l2 - sum * sum / (diff * diff);
  const double q2 = p.c1 * l1 + p.c2 * l2;
  return num / (q1 * q1 + q2 * q2);
}

inline GridFunction sample_on_grid(const OneSolitonParams& p, const GridSpec& grid, double t) {
  p.validate();
  grid.validate();
  GridFunction u(grid);
  for (int j = 0; j < grid.n_points; ++j) u[j] = one_soliton(grid.x(j), t, p);
  require_finite(u, "sample_on_grid");
  return u;
}

inline GridFunction sample_on_grid(const TwoSolitonParams& p, const GridSpec& grid, double t) {
  p.validate();
  grid.validate();
  GridFunction u(grid);
  for (int j = 0; j < grid.n_points; ++j) u[j] = two_soliton(grid.x(j), t, p);
  require_finite(u, "sample_on_grid");
  return u;
}

enum class PdeForm { reference, sign_flipped };

/// Sup-norm PDE residual of a space-time function on a periodic grid, using
/// spectral differentiation in x (multiplier -i sign(k) for the Hilbert
/// transform) and a centered time difference. The reference form is
/// u_t - u u_x - H u_xx; the sign-flipped form u_t + u u_x + H u_xx is kept
/// so tests can demonstrate the convention is pinned down.
inline double pde_residual(const std::function<double(double, double)>& u_fn, const GridSpec& grid,
                           double t, PdeForm form = PdeForm::reference, double dt_fd = 1e-6) {
  if (grid.topology != Topology::periodic)
    throw std::invalid_argument("pde_residual: requires periodic topology");
  const int n = grid.n_points;
  const double l_dom = grid.l_domain();

  GridFunction u(grid), ut(grid);
  for (int j = 0; j < n; ++j) {
    const double x = grid.x(j);
    u[j] = u_fn(x, t);
    ut[j] = (u_fn(x, t + dt_fd) - u_fn(x, t - dt_fd)) / (2.0 * dt_fd);
  }

  Dft plan(n);
  const Spectrum uhat = plan.forward(u.values);
  Spectrum dx_hat(uhat.size(), {0.0, 0.0}), hil_dxx_hat(uhat.size(), {0.0, 0.0});
  // Fill positive modes and mirror the conjugates explicitly: the xi^2
  // amplification at the top modes would otherwise magnify FFT roundoff into
  // an asymmetry the strict real-inversion guard rejects.
  for (int k = 1; k <= (n - 1) / 2; ++k) {
    const double xi = M_PI * k / l_dom;
    dx_hat[static_cast<size_t>(k)] = std::complex<double>(0.0, xi) * uhat[static_cast<size_t>(k)];
    dx_hat[static_cast<size_t>(n - k)] = std::conj(dx_hat[static_cast<size_t>(k)]);
    // (-i sgn)(-xi^2) = i sgn xi^2
    hil_dxx_hat[static_cast<size_t>(k)] =
        std::complex<double>(0.0, xi * xi) * uhat[static_cast<size_t>(k)];
    hil_dxx_hat[static_cast<size_t>(n - k)] = std::conj(hil_dxx_hat[static_cast<size_t>(k)]);
  }
  const GridFunction ux = idft(dx_hat, grid);
  const GridFunction hil_uxx = idft(hil_dxx_hat, grid);

  double res = 0.0;
  for (int j = 0; j < n; ++j) {
    const double r = (form == PdeForm::reference)
                         ? ut[j] - u[j] * ux[j] - hil_uxx[j]
                         : ut[j] + u[j] * ux[j] + hil_uxx[j];
    res = std::max(res, std::abs(r));
  }
  return res;
}

inline double pde_residual(const OneSolitonParams& p, const GridSpec& grid, double t,
                           PdeForm form = PdeForm::reference) {
  p.validate();
  return pde_residual([&p](double x, double tt) { return one_soliton(x, tt, p); }, grid, t, form);
}

inline double pde_residual(const TwoSolitonParams& p, const GridSpec& grid, double t,
                           PdeForm form = PdeForm::reference) {
  p.validate();
  return pde_residual([&p](double x, double tt) { return two_soliton(x, tt, p); }, grid, t, form);
}

}  // namespace bo
