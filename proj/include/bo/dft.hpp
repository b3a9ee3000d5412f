#pragma once

#include <complex>
#include <memory>
#include <vector>

#include <fftw3.h>

#include "bo/grid.hpp"

namespace bo {

using Spectrum = std::vector<std::complex<double>>;

/// FFTW plan pair for one transform size. Forward matches the convention
/// u_hat_k = sum_n u_n e^{-i 2 pi k n / N}; backward() applies the unscaled
/// adjoint, so callers divide by N to invert.
///
/// Instances own their scratch buffers and are not safe to share across
/// threads; create one per thread of control.
class Dft {
 public:
  explicit Dft(int n) : n_(n) {
    if (n <= 0) throw std::invalid_argument("Dft: size must be positive");
    in_ = fftw_alloc_complex(static_cast<size_t>(n));
    out_ = fftw_alloc_complex(static_cast<size_t>(n));
    fwd_ = fftw_plan_dft_1d(n, in_, out_, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_1d(n, in_, out_, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~Dft() {
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
    fftw_free(in_);
    fftw_free(out_);
  }
  Dft(const Dft&) = delete;
  Dft& operator=(const Dft&) = delete;

  int size() const { return n_; }

  Spectrum forward(const std::vector<double>& u) {
    load_real(u);
    fftw_execute(fwd_);
    return collect();
  }

  Spectrum forward(const Spectrum& u) {
    load_complex(u);
    fftw_execute(fwd_);
    return collect();
  }

  /// Unscaled inverse: divide by N afterwards.
  Spectrum backward(const Spectrum& u) {
    load_complex(u);
    fftw_execute(bwd_);
    return collect();
  }

 private:
  void load_real(const std::vector<double>& u) {
    check_size(u.size());
    for (int j = 0; j < n_; ++j) {
      in_[j][0] = u[static_cast<size_t>(j)];
      in_[j][1] = 0.0;
    }
  }
  void load_complex(const Spectrum& u) {
    check_size(u.size());
    for (int j = 0; j < n_; ++j) {
      in_[j][0] = u[static_cast<size_t>(j)].real();
      in_[j][1] = u[static_cast<size_t>(j)].imag();
    }
  }
  Spectrum collect() const {
    Spectrum s(static_cast<size_t>(n_));
    for (int j = 0; j < n_; ++j) s[static_cast<size_t>(j)] = {out_[j][0], out_[j][1]};
    return s;
  }
  void check_size(size_t m) const {
    if (m != static_cast<size_t>(n_)) throw std::invalid_argument("Dft: length mismatch");
  }

  int n_;
  fftw_complex* in_;
  fftw_complex* out_;
  fftw_plan fwd_;
  fftw_plan bwd_;
};

namespace detail {
constexpr double kImagResidueTol = 1e-12;

/// Largest deviation of a spectrum from conjugate symmetry, relative to its
/// largest magnitude. Real signals must pass this before real inversion.
inline double hermitian_defect(const Spectrum& s) {
  const size_t n = s.size();
  double scale = 0.0, defect = std::abs(s[0].imag());
  for (const auto& z : s) scale = std::max(scale, std::abs(z));
  for (size_t k = 1; k <= n / 2; ++k)
    defect = std::max(defect, std::abs(s[k] - std::conj(s[n - k])));
  return scale > 0.0 ? defect / scale : defect;
}

inline std::vector<double> real_part_checked(const Spectrum& inv, int n, const char* op) {
  const double inv_n = 1.0 / n;
  double real_inf = 0.0, imag_inf = 0.0;
  for (const auto& z : inv) {
    real_inf = std::max(real_inf, std::abs(z.real()) * inv_n);
    imag_inf = std::max(imag_inf, std::abs(z.imag()) * inv_n);
  }
  if (imag_inf > kImagResidueTol * std::max(1.0, real_inf))
    throw std::runtime_error(std::string(op) + ": imaginary residue above tolerance");
  std::vector<double> out(inv.size());
  for (size_t j = 0; j < inv.size(); ++j) out[j] = inv[j].real() * inv_n;
  return out;
}
}  // namespace detail

inline Spectrum dft(const GridFunction& u) {
  require_nonempty(u, "dft");
  if (u.grid.topology != Topology::periodic)
    throw std::invalid_argument("dft: requires periodic topology");
  Dft plan(u.grid.n_points);
  return plan.forward(u.values);
}

/// Inverse DFT of a conjugate-symmetric spectrum back onto a periodic grid.
/// Rejects spectra that are not (numerically) the transform of a real signal.
inline GridFunction idft(const Spectrum& s, const GridSpec& grid) {
  if (grid.topology != Topology::periodic)
    throw std::invalid_argument("idft: requires periodic topology");
  if (s.size() != static_cast<size_t>(grid.n_points))
    throw std::invalid_argument("idft: spectrum length does not match grid");
  if (detail::hermitian_defect(s) > detail::kImagResidueTol)
    throw std::runtime_error("idft: spectrum is not conjugate symmetric");
  Dft plan(grid.n_points);
  Spectrum inv = plan.backward(s);
  GridFunction out(grid, detail::real_part_checked(inv, grid.n_points, "idft"));
  require_finite(out, "idft");
  return out;
}

/// DFT symbol of D+D- on a periodic grid: sigma_k = -(4/dx^2) sin^2(pi k / N).
inline std::vector<double> laplacian_symbol(const GridSpec& grid) {
  if (grid.topology != Topology::periodic)
    throw std::invalid_argument("laplacian_symbol: requires periodic topology");
  const int n = grid.n_points;
  std::vector<double> sigma(static_cast<size_t>(n));
  const double a = -4.0 / (grid.spacing * grid.spacing);
  for (int k = 0; k < n; ++k) {
    const double s = std::sin(M_PI * k / n);
    sigma[static_cast<size_t>(k)] = a * s * s;
  }
  return sigma;
}

}  // namespace bo
