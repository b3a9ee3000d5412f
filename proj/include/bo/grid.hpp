#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace bo {

enum class Topology { periodic, line };

/// Uniform 1-D grid. values[j] lives at x_j = origin + j*spacing.
/// Periodic grids identify index N with index 0 and require odd N;
/// line grids are finite windows with implicit zero extension outside.
struct GridSpec {
  int n_points = 0;
  double spacing = 0.0;
  double origin = 0.0;
  Topology topology = Topology::line;

  static GridSpec periodic(int n_points, double l_domain) {
    if (n_points < 3 || n_points % 2 == 0)
      throw std::invalid_argument("periodic grid needs odd n_points >= 3, got " +
                                  std::to_string(n_points));
    if (!(l_domain > 0.0))
      throw std::invalid_argument("l_domain must be positive");
    return GridSpec{n_points, 2.0 * l_domain / n_points, -l_domain, Topology::periodic};
  }

  static GridSpec line(int n_points, double spacing, double origin) {
    GridSpec g{n_points, spacing, origin, Topology::line};
    g.validate();
    return g;
  }

  void validate() const {
    if (n_points <= 0) throw std::invalid_argument("grid needs at least one point");
    if (!(spacing > 0.0)) throw std::invalid_argument("grid spacing must be positive");
    if (topology == Topology::periodic && (n_points < 3 || n_points % 2 == 0))
      throw std::invalid_argument("periodic grid needs odd n_points >= 3, got " +
                                  std::to_string(n_points));
  }

  double x(int j) const { return origin + j * spacing; }
  double period() const { return spacing * n_points; }
  double l_domain() const { return 0.5 * period(); }

  bool operator==(const GridSpec&) const = default;
};

struct GridFunction {
  GridSpec grid;
  std::vector<double> values;

  GridFunction() = default;
  explicit GridFunction(GridSpec g) : grid(g), values(static_cast<size_t>(g.n_points), 0.0) {
    grid.validate();
  }
  GridFunction(GridSpec g, std::vector<double> v) : grid(g), values(std::move(v)) {
    grid.validate();
    if (values.size() != static_cast<size_t>(grid.n_points))
      throw std::invalid_argument("values length does not match grid");
  }

  int size() const { return grid.n_points; }
  double& operator[](int j) { return values[static_cast<size_t>(j)]; }
  double operator[](int j) const { return values[static_cast<size_t>(j)]; }
};

#ifndef BO_DISABLE_FINITE_CHECKS
inline void require_finite(const GridFunction& u, const char* op) {
  for (double v : u.values)
    if (!std::isfinite(v))
      throw std::runtime_error(std::string(op) + ": non-finite value in grid function");
}
#else
inline void require_finite(const GridFunction&, const char*) {}
#endif

inline void require_nonempty(const GridFunction& u, const char* op) {
  if (u.values.empty()) throw std::invalid_argument(std::string(op) + ": empty grid");
}

namespace detail {
// Neighbour access honouring the topology: modular wrap on periodic grids,
// zero extension on line grids.
inline double at(const GridFunction& u, int j) {
  const int n = u.grid.n_points;
  if (u.grid.topology == Topology::periodic) {
    int m = j % n;
    if (m < 0) m += n;
    return u.values[static_cast<size_t>(m)];
  }
  if (j < 0 || j >= n) return 0.0;
  return u.values[static_cast<size_t>(j)];
}
}  // namespace detail

enum class Diff { forward, backward, central };

inline GridFunction difference(const GridFunction& u, Diff kind) {
  require_nonempty(u, "difference");
  GridFunction out(u.grid);
  const int n = u.grid.n_points;
  const double inv = 1.0 / u.grid.spacing;
  for (int j = 0; j < n; ++j) {
    switch (kind) {
      case Diff::forward: out[j] = (detail::at(u, j + 1) - u[j]) * inv; break;
      case Diff::backward: out[j] = (u[j] - detail::at(u, j - 1)) * inv; break;
      case Diff::central: out[j] = (detail::at(u, j + 1) - detail::at(u, j - 1)) * (0.5 * inv); break;
    }
  }
  require_finite(out, "difference");
  return out;
}

enum class Avg { three_point, two_point };

inline GridFunction average(const GridFunction& u, Avg kind) {
  require_nonempty(u, "average");
  GridFunction out(u.grid);
  const int n = u.grid.n_points;
  for (int j = 0; j < n; ++j) {
    const double l = detail::at(u, j - 1), r = detail::at(u, j + 1);
    out[j] = (kind == Avg::three_point) ? (r + u[j] + l) / 3.0 : 0.5 * (r + l);
  }
  require_finite(out, "average");
  return out;
}

/// S^offset: (shift(u, k))_j = u_{j+k}.
inline GridFunction shift(const GridFunction& u, int offset) {
  require_nonempty(u, "shift");
  GridFunction out(u.grid);
  for (int j = 0; j < u.grid.n_points; ++j) out[j] = detail::at(u, j + offset);
  return out;
}

inline double inner_product(const GridFunction& p, const GridFunction& q) {
  if (!(p.grid == q.grid)) throw std::invalid_argument("inner_product: grid mismatch");
  double s = 0.0;
  for (size_t j = 0; j < p.values.size(); ++j) s += p.values[j] * q.values[j];
  return p.grid.spacing * s;
}

struct Norms {
  double l2 = 0.0;
  double h2 = 0.0;
  double inf = 0.0;
};

inline double norm_l2(const GridFunction& u) {
  return std::sqrt(inner_product(u, u));
}

inline double norm_inf(const GridFunction& u) {
  double m = 0.0;
  for (double v : u.values) m = std::max(m, std::abs(v));
  return m;
}

inline double norm_h2(const GridFunction& u) {
  const GridFunction d1 = difference(u, Diff::forward);
  const GridFunction d2 = difference(difference(u, Diff::backward), Diff::forward);
  return std::sqrt(inner_product(u, u) + inner_product(d1, d1) + inner_product(d2, d2));
}

inline Norms norms(const GridFunction& u) {
  require_nonempty(u, "norms");
  return Norms{norm_l2(u), norm_h2(u), norm_inf(u)};
}

// Elementwise helpers used throughout the schemes.
inline GridFunction operator+(const GridFunction& a, const GridFunction& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("operator+: grid mismatch");
  GridFunction out(a.grid);
  for (size_t j = 0; j < a.values.size(); ++j) out.values[j] = a.values[j] + b.values[j];
  return out;
}

inline GridFunction operator-(const GridFunction& a, const GridFunction& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("operator-: grid mismatch");
  GridFunction out(a.grid);
  for (size_t j = 0; j < a.values.size(); ++j) out.values[j] = a.values[j] - b.values[j];
  return out;
}

inline GridFunction operator*(double s, const GridFunction& a) {
  GridFunction out(a.grid);
  for (size_t j = 0; j < a.values.size(); ++j) out.values[j] = s * a.values[j];
  return out;
}

inline GridFunction hadamard(const GridFunction& a, const GridFunction& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("hadamard: grid mismatch");
  GridFunction out(a.grid);
  for (size_t j = 0; j < a.values.size(); ++j) out.values[j] = a.values[j] * b.values[j];
  return out;
}

}  // namespace bo
