#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "bo/dft.hpp"
#include "bo/grid.hpp"

namespace bo {

/// Quadrature Hilbert transform on the line:
///   (Hu)_j = (1/pi) sum_{k != j} u_k (1 - (-1)^{j-k}) / (j - k),
/// with u extended by zero outside its stored window. The output window is
/// widened by pad_each_side points per side (default: one input width) so the
/// slowly decaying tails are captured; widen further when norm identities are
/// being measured.
inline GridFunction hilbert_line(const GridFunction& u, int pad_each_side = -1) {
  require_nonempty(u, "hilbert_line");
  require_finite(u, "hilbert_line");
  if (u.grid.topology != Topology::line)
    throw std::invalid_argument("hilbert_line: requires line topology");
  const int m = u.grid.n_points;
  if (pad_each_side < 0) pad_each_side = m;
  const int n_out = m + 2 * pad_each_side;

  GridSpec out_grid = GridSpec::line(n_out, u.grid.spacing,
                                     u.grid.origin - pad_each_side * u.grid.spacing);
  GridFunction out(out_grid);
  const double two_over_pi = 2.0 / M_PI;
  for (int i = 0; i < n_out; ++i) {
    const int j = i - pad_each_side;  // index in the input frame
    // (1 - (-1)^{j-k}) vanishes for even j-k, so only opposite-parity k enter.
    const int k0 = (((j % 2) + 2) % 2 == 0) ? 1 : 0;
    double s = 0.0;
    for (int k = k0; k < m; k += 2) s += u[k] / static_cast<double>(j - k);
    out[i] = two_over_pi * s;
  }
  require_finite(out, "hilbert_line");
  return out;
}

/// Periodic discrete Hilbert transform kernel for odd N: the circular
/// convolution weights c and their DFT multiplier c_hat (-i on positive
/// modes, +i on negative ones, 0 at the mean). Construction cross-checks
/// dft(c) against the closed-form multiplier.
struct PeriodicHilbertKernel {
  int n_points = 0;
  std::vector<double> c;
  Spectrum c_hat;
};

inline PeriodicHilbertKernel build_periodic_kernel(int n) {
  if (n < 3 || n % 2 == 0)
    throw std::invalid_argument("build_periodic_kernel: N must be odd and >= 3, got " +
                                std::to_string(n));
  PeriodicHilbertKernel k;
  k.n_points = n;
  k.c.resize(static_cast<size_t>(n), 0.0);
  for (int i = 1; i < n; ++i) {
    const double theta = M_PI * i / (2.0 * n);
    if (i % 2 == 1)
      k.c[static_cast<size_t>(i)] = std::cos(theta) / std::sin(theta) / n;
    else
      k.c[static_cast<size_t>(i)] = -std::tan(theta) / n;
  }

  k.c_hat.assign(static_cast<size_t>(n), {0.0, 0.0});
  const int half = (n - 1) / 2;
  for (int i = 1; i <= half; ++i) k.c_hat[static_cast<size_t>(i)] = {0.0, -1.0};
  for (int i = half + 1; i < n; ++i) k.c_hat[static_cast<size_t>(i)] = {0.0, 1.0};

  // Invariants: antisymmetry and agreement of dft(c) with the closed form.
  for (int i = 1; i < n; ++i) {
    if (std::abs(k.c[static_cast<size_t>(n - i)] + k.c[static_cast<size_t>(i)]) > 1e-12)
      throw std::runtime_error("build_periodic_kernel: kernel antisymmetry violated");
  }
  Dft plan(n);
  Spectrum chat_num = plan.forward(k.c);
  for (int i = 0; i < n; ++i) {
    if (std::abs(chat_num[static_cast<size_t>(i)] - k.c_hat[static_cast<size_t>(i)]) > 1e-11)
      throw std::runtime_error("build_periodic_kernel: dft(c) disagrees with closed form");
  }
  return k;
}

enum class HilbertPath { direct, spectral };

/// H_per u = c * u (circular convolution). The spectral path multiplies by
/// c_hat mode by mode; the direct O(N^2) path is kept as a cross-check.
inline GridFunction hilbert_periodic(const GridFunction& u, const PeriodicHilbertKernel& kernel,
                                     HilbertPath path = HilbertPath::spectral) {
  require_nonempty(u, "hilbert_periodic");
  require_finite(u, "hilbert_periodic");
  if (u.grid.topology != Topology::periodic)
    throw std::invalid_argument("hilbert_periodic: requires periodic topology");
  const int n = u.grid.n_points;
  if (kernel.n_points != n)
    throw std::invalid_argument("hilbert_periodic: kernel size does not match grid");

  if (path == HilbertPath::direct) {
    GridFunction out(u.grid);
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) {
        int d = i - j;
        if (d < 0) d += n;
        s += kernel.c[static_cast<size_t>(d)] * u[j];
      }
      out[i] = s;
    }
    require_finite(out, "hilbert_periodic");
    return out;
  }

  Dft plan(n);
  Spectrum s = plan.forward(u.values);
  for (int i = 0; i < n; ++i) s[static_cast<size_t>(i)] *= kernel.c_hat[static_cast<size_t>(i)];
  return idft(s, u.grid);
}

}  // namespace bo
