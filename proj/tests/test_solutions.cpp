#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "bo/solutions.hpp"

using namespace bo;

TEST_CASE("one-soliton pointwise values", "[solutions]") {
  OneSolitonParams p{0.25, 15.0};
  CHECK(p.delta() == Catch::Approx(0.8377580409572781).epsilon(1e-15));
  CHECK(p.time_period() == Catch::Approx(120.0));
  // crest at c delta (x - c t) = 0
  CHECK(one_soliton(0.0, 0.0, p) == Catch::Approx(-0.7730208164277146).epsilon(1e-13));

  OneSolitonParams bad{0.1, 15.0};  // delta = pi/1.5 > 1
  CHECK_THROWS_AS(one_soliton(0.0, 0.0, bad), std::invalid_argument);
}

TEST_CASE("one-soliton travels and is periodic in time", "[solutions]") {
  OneSolitonParams p{0.25, 15.0};
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uni(-20.0, 20.0);
  for (int trial = 0; trial < 25; ++trial) {
    const double x = uni(rng), t = uni(rng), s = uni(rng);
    CHECK(one_soliton(x, t, p) ==
          Catch::Approx(one_soliton(x - p.c * s, t - s, p)).epsilon(1e-12));
  }
  const GridSpec g = GridSpec::periodic(129, p.l_domain);
  for (int j = 0; j < g.n_points; ++j)
    CHECK(one_soliton(g.x(j), 0.0, p) ==
          Catch::Approx(one_soliton(g.x(j), 120.0, p)).epsilon(1e-11));
}

TEST_CASE("one-soliton sampled mean is constant in time", "[solutions]") {
  OneSolitonParams p{0.25, 15.0};
  const GridSpec g = GridSpec::periodic(129, p.l_domain);
  auto mean_at = [&](double t) {
    const GridFunction u = sample_on_grid(p, g, t);
    double m = 0.0;
    for (double v : u.values) m += v;
    return m / g.n_points;
  };
  CHECK(mean_at(0.0) == Catch::Approx(mean_at(37.3)).margin(1e-10));
}

TEST_CASE("two-soliton pointwise values", "[solutions]") {
  TwoSolitonParams p{2.0, 1.0};
  CHECK(two_soliton(0.0, 0.0, p) == Catch::Approx(-4.0 / 3.0).epsilon(1e-15));
  CHECK(std::abs(two_soliton(30.0, -10.0, p)) ==
        Catch::Approx(0.003317598339219351).epsilon(1e-12));

  const double d50 = std::abs(two_soliton(50.0, 0.0, p));
  const double d100 = std::abs(two_soliton(100.0, 0.0, p));
  const double d200 = std::abs(two_soliton(200.0, 0.0, p));
  CHECK(d50 > d100);
  CHECK(d100 > d200);

  TwoSolitonParams bad{1.0, 1.0};
  CHECK_THROWS_AS(two_soliton(0.0, 0.0, bad), std::invalid_argument);
}

TEST_CASE("two-soliton bumps travel at their own speeds", "[solutions]") {
  TwoSolitonParams p{2.0, 1.0};
  auto minima = [&](double t) {
    // fine scan plus parabolic refinement of the two deepest local minima
    const int n = 600001;
    const double dx = 60.0 / (n - 1);
    std::vector<std::pair<double, double>> found;  // (value, x)
    double prev2 = two_soliton(-30.0, t, p), prev1 = two_soliton(-30.0 + dx, t, p);
    for (int i = 2; i < n; ++i) {
      const double cur = two_soliton(-30.0 + i * dx, t, p);
      if (prev1 < prev2 && prev1 < cur) {
        const double x1 = -30.0 + (i - 1) * dx;
        const double denom = prev2 - 2.0 * prev1 + cur;
        const double shift = denom != 0.0 ? 0.5 * (prev2 - cur) / denom : 0.0;
        found.emplace_back(prev1, x1 + shift * dx);
      }
      prev2 = prev1;
      prev1 = cur;
    }
    std::sort(found.begin(), found.end());
    REQUIRE(found.size() >= 2);
    // deepest first: bump of speed c1, then bump of speed c2
    return std::pair<double, double>{found[0].second, found[1].second};
  };
  const auto [a10, b10] = minima(-10.0);
  const auto [a8, b8] = minima(-8.0);
  const double speed1 = (a8 - a10) / 2.0;
  const double speed2 = (b8 - b10) / 2.0;
  CHECK(std::abs(speed1 - p.c1) / p.c1 < 0.05);
  CHECK(std::abs(speed2 - p.c2) / p.c2 < 0.05);
}

TEST_CASE("sampling matches pointwise evaluation", "[solutions]") {
  OneSolitonParams p1{0.25, 15.0};
  const GridSpec g1 = GridSpec::periodic(33, p1.l_domain);
  const GridFunction u1 = sample_on_grid(p1, g1, 0.0);
  for (int j = 0; j < 33; ++j) CHECK(u1[j] == one_soliton(g1.x(j), 0.0, p1));

  TwoSolitonParams p2{2.0, 1.0};
  const GridSpec g2{257, 60.0 / 257, -30.0, Topology::periodic};
  const GridFunction u2 = sample_on_grid(p2, g2, -10.0);
  for (int j = 0; j < 257; ++j) CHECK(u2[j] == two_soliton(g2.x(j), -10.0, p2));

  // shifting the origin by dx is the same as sampling the shifted solution
  const GridSpec shifted{257, g2.spacing, -30.0 + g2.spacing, Topology::periodic};
  const GridFunction us = sample_on_grid(p2, shifted, -10.0);
  for (int j = 0; j < 256; ++j)
    CHECK(us[j] == Catch::Approx(u2[j + 1]).epsilon(1e-12).margin(1e-14));
}

TEST_CASE("pde residual pins the sign convention", "[solutions]") {
  OneSolitonParams p{0.25, 15.0};
  const GridSpec g = GridSpec::periodic(2049, p.l_domain);
  const double res = pde_residual(p, g, 7.0);
  const double res_flipped = pde_residual(p, g, 7.0, PdeForm::sign_flipped);
  CHECK(res < 1e-4);
  CHECK(res_flipped >= 1e3 * res);

  const double zero_res =
      pde_residual([](double, double) { return 0.0; }, g, 7.0);
  CHECK(zero_res == 0.0);
}

TEST_CASE("pde residual decreases with resolution while truncation dominates",
          "[solutions]") {
  OneSolitonParams p{0.25, 15.0};
  std::vector<double> res;
  for (int n : {9, 17, 33})
    res.push_back(pde_residual(p, GridSpec::periodic(n, p.l_domain), 7.0));
  CHECK(res[0] > res[1]);
  CHECK(res[1] > res[2]);

  // two-soliton: widen the window together with N so the periodic wrap error
  // shrinks as well
  TwoSolitonParams p2{2.0, 1.0};
  std::vector<double> res2;
  for (auto [n, l] : {std::pair{1025, 64.0}, {2049, 128.0}, {4097, 256.0}})
    res2.push_back(pde_residual(p2, GridSpec::periodic(n, l), 0.0));
  CHECK(res2[0] > res2[1]);
  CHECK(res2[1] > res2[2]);
}
