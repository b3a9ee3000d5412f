#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "bo/dft.hpp"
#include "bo/grid.hpp"
#include "oracles.hpp"

using namespace bo;

namespace {
GridFunction random_periodic(int n, double dx, std::mt19937_64& rng) {
  GridSpec g{n, dx, 0.0, Topology::periodic};
  return oracle::random_gridfunction(g, rng);
}
}  // namespace

TEST_CASE("grid spec validation", "[grid]") {
  CHECK_THROWS_AS(GridSpec::periodic(34, 15.0), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec::periodic(1, 15.0), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec::line(0, 0.1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec::line(5, -0.1, 0.0), std::invalid_argument);
  const GridSpec g = GridSpec::periodic(129, 15.0);
  CHECK(g.spacing == Catch::Approx(30.0 / 129));
  CHECK(g.x(0) == -15.0);
  CHECK(g.period() == Catch::Approx(30.0));
}

TEST_CASE("forward difference with zero extension", "[grid]") {
  GridFunction u(GridSpec::line(4, 1.0, 0.0), {0.0, 1.0, 4.0, 9.0});
  const GridFunction d = difference(u, Diff::forward);
  CHECK(d.values == std::vector<double>{1.0, 3.0, 5.0, -9.0});
}

TEST_CASE("difference of a constant vanishes", "[grid]") {
  for (Topology topo : {Topology::periodic, Topology::line}) {
    GridSpec g{7, 0.3, -1.0, topo};
    GridFunction u(g);
    for (int j = 0; j < 7; ++j) u[j] = 4.25;
    if (topo == Topology::periodic)
      for (Diff k : {Diff::forward, Diff::backward, Diff::central})
        for (double v : difference(u, k).values) CHECK(v == 0.0);
    else
      // interior only; the window edges see the zero extension
      for (int j = 1; j < 6; ++j) CHECK(difference(u, Diff::central)[j] == 0.0);
  }
}

TEST_CASE("summation by parts", "[grid]") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 20; ++trial) {
    const GridFunction p = random_periodic(5, 0.7, rng);
    const GridFunction q = random_periodic(5, 0.7, rng);
    const double a = inner_product(p, difference(q, Diff::forward));
    const double b = -inner_product(difference(p, Diff::backward), q);
    CHECK(a == Catch::Approx(b).margin(1e-13));
    const double c = inner_product(p, difference(q, Diff::central));
    const double d = -inner_product(difference(p, Diff::central), q);
    CHECK(c == Catch::Approx(d).margin(1e-13));
  }
}

TEST_CASE("averages", "[grid]") {
  GridFunction u(GridSpec::periodic(3, 1.5), {0.0, 3.0, 0.0});
  CHECK(average(u, Avg::three_point).values == std::vector<double>{1.0, 1.0, 1.0});

  GridFunction k(GridSpec::periodic(5, 1.0));
  for (int j = 0; j < 5; ++j) k[j] = -2.5;
  for (double v : average(k, Avg::three_point).values) CHECK(v == Catch::Approx(-2.5));
}

TEST_CASE("product rule with two-point averages", "[grid]") {
  std::mt19937_64 rng(7);
  const GridFunction p = random_periodic(11, 0.25, rng);
  const GridFunction q = random_periodic(11, 0.25, rng);
  const GridFunction lhs = difference(hadamard(p, q), Diff::central);
  const GridFunction rhs = hadamard(average(p, Avg::two_point), difference(q, Diff::central)) +
                           hadamard(average(q, Avg::two_point), difference(p, Diff::central));
  for (int j = 0; j < 11; ++j) CHECK(lhs[j] == Catch::Approx(rhs[j]).margin(1e-13));
}

TEST_CASE("leibniz identities", "[grid]") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 5 + 2 * (trial % 20);
    const double dx = 0.05 + 0.1 * (trial % 5);
    const GridFunction p = random_periodic(n, dx, rng);
    const GridFunction q = random_periodic(n, dx, rng);

    const double lhs1 = inner_product(difference(hadamard(p, q), Diff::central), q);
    const double rhs1 =
        0.5 * dx *
            inner_product(hadamard(difference(p, Diff::forward), difference(q, Diff::central)), q) +
        0.5 * inner_product(hadamard(shift(q, -1), difference(p, Diff::central)), q);
    CHECK(lhs1 == Catch::Approx(rhs1).margin(1e-12));

    const GridFunction lhs2 =
        difference(difference(hadamard(p, q), Diff::backward), Diff::forward);
    const GridFunction dpdm_p = difference(difference(p, Diff::backward), Diff::forward);
    const GridFunction dpdm_q = difference(difference(q, Diff::backward), Diff::forward);
    const GridFunction rhs2 =
        hadamard(difference(p, Diff::backward), difference(q, Diff::forward)) +
        hadamard(dpdm_q, shift(p, -1)) +
        hadamard(difference(p, Diff::forward), difference(q, Diff::forward)) +
        hadamard(q, dpdm_p);
    for (int j = 0; j < n; ++j) CHECK(lhs2[j] == Catch::Approx(rhs2[j]).margin(1e-10));
  }
}

TEST_CASE("inner product basics", "[grid]") {
  GridFunction p(GridSpec::periodic(3, 0.75), {1.0, 1.0, 1.0});
  CHECK(inner_product(p, p) == Catch::Approx(1.5));

  GridFunction a(GridSpec::line(4, 1.0, 0.0), {1.0, -1.0, 1.0, -1.0});
  GridFunction b(GridSpec::line(4, 1.0, 0.0), {1.0, 1.0, 1.0, 1.0});
  CHECK(inner_product(a, b) == 0.0);

  GridFunction c(GridSpec::line(3, 1.0, 0.0), {1.0, 2.0, 3.0});
  CHECK_THROWS_AS(inner_product(a, c), std::invalid_argument);

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const GridFunction u = random_periodic(9, 0.2, rng);
    const GridFunction v = random_periodic(9, 0.2, rng);
    CHECK(std::abs(inner_product(u, v)) <= norm_l2(u) * norm_l2(v) * (1.0 + 1e-14));
  }
}

TEST_CASE("norms", "[grid]") {
  GridFunction z(GridSpec::periodic(9, 2.0));
  const Norms nz = norms(z);
  CHECK(nz.l2 == 0.0);
  CHECK(nz.h2 == 0.0);
  CHECK(nz.inf == 0.0);

  const double l_dom = 3.0, k = -1.7;
  GridFunction c(GridSpec::periodic(15, l_dom));
  for (int j = 0; j < 15; ++j) c[j] = k;
  const Norms nc = norms(c);
  CHECK(nc.l2 == Catch::Approx(std::abs(k) * std::sqrt(2.0 * l_dom)));
  CHECK(nc.h2 == Catch::Approx(nc.l2));

  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const double dx = 0.1 + 0.2 * trial;
    const GridFunction u = random_periodic(21, dx, rng);
    const Norms n = norms(u);
    CHECK(n.inf <= n.l2 / std::sqrt(dx) * (1.0 + 1e-14));
    CHECK(n.l2 <= n.h2 * (1.0 + 1e-14));
  }
}

TEST_CASE("discrete sobolev inequality", "[grid]") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const GridFunction u = random_periodic(17, 0.05 + 0.05 * (trial % 7), rng);
    const GridFunction dm = difference(u, Diff::backward);
    const GridFunction dpdm = difference(dm, Diff::forward);
    CHECK(norm_inf(dm) <=
          std::sqrt(1.5) * (norm_l2(dpdm) + norm_l2(u)) * (1.0 + 1e-14));
  }
}

TEST_CASE("second difference norm equals squared forward difference norm", "[grid]") {
  std::mt19937_64 rng(37);
  const GridFunction u = random_periodic(33, 0.17, rng);
  const GridFunction dpdm = difference(difference(u, Diff::backward), Diff::forward);
  const GridFunction dp2 = difference(difference(u, Diff::forward), Diff::forward);
  CHECK(norm_l2(dpdm) == Catch::Approx(norm_l2(dp2)).epsilon(1e-14));
}

TEST_CASE("dft basics", "[dft]") {
  GridFunction u(GridSpec::periodic(3, 1.0), {1.0, 1.0, 1.0});
  const Spectrum s = dft(u);
  CHECK(std::abs(s[0] - std::complex<double>(3.0, 0.0)) < 1e-14);
  CHECK(std::abs(s[1]) < 1e-14);
  CHECK(std::abs(s[2]) < 1e-14);

  GridFunction line_u(GridSpec::line(4, 1.0, 0.0), {1.0, 2.0, 3.0, 4.0});
  CHECK_THROWS_AS(dft(line_u), std::invalid_argument);

  std::mt19937_64 rng(41);
  for (int n : {5, 31, 257}) {
    const GridFunction v = random_periodic(n, 0.21, rng);
    const GridFunction back = idft(dft(v), v.grid);
    CHECK(norm_inf(back - v) < 1e-12 * norm_inf(v));

    // Parseval with both norms dx-weighted
    const Spectrum sv = dft(v);
    double spec2 = 0.0;
    for (const auto& z : sv) spec2 += std::norm(z);
    CHECK(std::sqrt(v.grid.spacing * spec2) ==
          Catch::Approx(std::sqrt(static_cast<double>(n)) * norm_l2(v)).epsilon(1e-12));
  }
}

TEST_CASE("idft rejects non-symmetric spectra", "[dft]") {
  const GridSpec g = GridSpec::periodic(5, 1.0);
  Spectrum s(5, {0.0, 0.0});
  s[1] = {1.0, 1.0};  // no conjugate partner at mode 4
  CHECK_THROWS_AS(idft(s, g), std::runtime_error);
}

TEST_CASE("sampling keeps h2 close to the continuous sobolev norm", "[grid]") {
  // |e^{-x^2}|_{H2} via quadrature oracle (frozen): 2.5033119435215223
  const double h2_continuous = 2.5033119435215223;
  for (double dx : {0.1, 0.05, 0.025}) {
    const int n = static_cast<int>(std::lround(16.0 / dx)) + 1;
    GridFunction u(GridSpec::line(n, dx, -8.0));
    for (int j = 0; j < n; ++j) {
      const double x = u.grid.x(j);
      u[j] = std::exp(-x * x);
    }
    const double ratio = norm_h2(u) / h2_continuous;
    CHECK(ratio > 0.9);
    CHECK(ratio < 1.1);
  }
}

TEST_CASE("non-finite values are rejected", "[grid]") {
  GridFunction u(GridSpec::periodic(5, 1.0), {0.0, 1.0, 0.0, 0.0, 0.0});
  u[2] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(difference(u, Diff::forward), std::runtime_error);
}
