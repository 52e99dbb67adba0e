// Duhamel convolution against closed forms and the ODE oracle.

#include <doctest.h>

#include <array>
#include <cmath>

#include "telegraph/errors.hpp"
#include "telegraph/oracle.hpp"
#include "telegraph/semigroup.hpp"

using namespace telegraph;

TEST_CASE("zero source gives the zero solution") {
  const PhysicalParams p(1.0, 1.0);
  const TimeGrid grid(2.0, 20, 5);
  const std::size_t M = 8;

  const StateSeries v = duhamel([&](double) { return StateVector::zero(M); }, grid, M, p);
  CHECK(v.max_over_samples([&](const StateVector& s) { return s.h_norm(p); }) == 0.0);

  const ModalSeries zero_src(grid, M);
  const StateSeries v2 = duhamel_velocity(zero_src, p);
  CHECK(v2.max_over_samples([&](const StateVector& s) { return s.h_norm(p); }) == 0.0);
}

TEST_CASE("initial value is exactly zero") {
  const PhysicalParams p(1.0, 1.0);
  const TimeGrid grid(1.0, 10, 4);
  const std::size_t M = 4;
  const StateSeries v = duhamel(
      [&](double) {
        StateVector f = StateVector::zero(M);
        f.v.set_coeff(1, 1.0);
        return f;
      },
      grid, M, p);
  CHECK(v.at_node(0).h_norm(p) == 0.0);
}

TEST_CASE("constant velocity forcing on one mode solves the shifted ODE") {
  const PhysicalParams p(1.0, 1.0);
  const int n = 2;
  const std::size_t M = 8;
  const TimeGrid grid(6.0, 120, 6);
  const StateSeries v = duhamel(
      [&](double) {
        StateVector f = StateVector::zero(M);
        f.v.set_coeff(n, 1.0);
        return f;
      },
      grid, M, p);

  double worst = 0.0;
  for (std::size_t j = 0; j < grid.nodes().size(); ++j) {
    const auto exact = oracle::modal_ode_closed_form(n, p, 0.0, 1.0, grid.nodes()[j]);
    worst = std::max(worst, std::abs(v.at_node(j).u.coeff(n) - exact[0]));
    worst = std::max(worst, std::abs(v.at_node(j).v.coeff(n) - exact[1]));
  }
  CHECK(worst < 1e-10);

  // small-t leading order a ~ t^2/2
  const double t_small = grid.nodes()[1];
  CHECK(v.at_node(1).u.coeff(n) ==
        doctest::Approx(0.5 * t_small * t_small).epsilon(2e-2));

  // long-time steady state a -> 1/(kappa n^2 pi^2)
  const double steady = 1.0 / (p.kappa * n * n * kPi * kPi);
  CHECK(v.at_node(grid.nodes().size() - 1).u.coeff(n) ==
        doctest::Approx(steady).epsilon(2e-2));

  // other modes stay identically zero (mode confinement)
  double other = 0.0;
  for (std::size_t j = 0; j < grid.nodes().size(); ++j)
    for (std::size_t k = 0; k < M; ++k)
      if (static_cast<int>(k + 1) != n)
        other = std::max(other, std::abs(v.at_node(j).u.raw()[k]));
  CHECK(other == 0.0);
}

TEST_CASE("cosine drive matches the ODE oracle to 1e-8") {
  const PhysicalParams p(1.0, 1.0);
  const std::size_t M = 4;
  const TimeGrid grid(3.0, 60, 6);
  auto g = [](double t) { return std::cos(t); };
  const StateSeries v = duhamel(
      [&](double t) {
        StateVector f = StateVector::zero(M);
        f.v.set_coeff(1, g(t));
        return f;
      },
      grid, M, p);

  const double stiff = p.kappa * kPi * kPi;
  auto rhs = [&](double t, const std::array<double, 2>& y) {
    return std::array<double, 2>{y[1], -stiff * y[0] - p.nu * y[1] + g(t)};
  };
  const auto exact =
      oracle::dp54_integrate(rhs, 0.0, {0.0, 0.0}, grid.nodes(), 1e-13, 1e-15);
  double worst = 0.0;
  for (std::size_t j = 0; j < grid.nodes().size(); ++j) {
    worst = std::max(worst, std::abs(v.at_node(j).u.coeff(1) - exact[j][0]));
    worst = std::max(worst, std::abs(v.at_node(j).v.coeff(1) - exact[j][1]));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("sampled-source path agrees with the callback path") {
  const PhysicalParams p(1.0, 1.0);
  const std::size_t M = 6;
  const TimeGrid grid(2.0, 50, 6);

  ModalSeries src(grid, M);
  auto fill = [&](ModalVector& v, double t) {
    v.set_coeff(1, std::cos(t));
    v.set_coeff(3, 0.5 * std::sin(2.0 * t));
  };
  for (std::size_t j = 0; j < grid.nodes().size(); ++j)
    fill(src.at_node(j), grid.nodes()[j]);
  for (std::size_t j = 0; j < grid.cells(); ++j)
    for (int g = 0; g < grid.gauss_order(); ++g)
      fill(src.at_gauss(j, g), grid.gauss_time(j, g));

  const StateSeries a = duhamel_velocity(src, p);
  const StateSeries b = duhamel(
      [&](double t) {
        StateVector f = StateVector::zero(M);
        fill(f.v, t);
        return f;
      },
      grid, M, p);

  double worst = 0.0;
  for (std::size_t j = 0; j < grid.nodes().size(); ++j) {
    const StateVector d(a.at_node(j).u - b.at_node(j).u, a.at_node(j).v - b.at_node(j).v);
    worst = std::max(worst, d.h_norm(p));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("series interpolation reproduces smooth coefficients between samples") {
  const TimeGrid grid(2.0, 10, 6);
  ModalSeries s(grid, 2);
  auto fill = [](ModalVector& v, double t) {
    v.set_coeff(1, std::sin(3.0 * t));
    v.set_coeff(2, t * t);
  };
  for (std::size_t j = 0; j < grid.nodes().size(); ++j) fill(s.at_node(j), grid.nodes()[j]);
  for (std::size_t j = 0; j < grid.cells(); ++j)
    for (int g = 0; g < grid.gauss_order(); ++g)
      fill(s.at_gauss(j, g), grid.gauss_time(j, g));
  for (double t : {0.013, 0.77, 1.391, 1.999}) {
    const ModalVector v = s.eval(t);
    CHECK(v.coeff(1) == doctest::Approx(std::sin(3.0 * t)).epsilon(1e-7));
    CHECK(v.coeff(2) == doctest::Approx(t * t).epsilon(1e-12));  // degree 2 is exact
  }
}

TEST_CASE("time grid rejects malformed node sets") {
  CHECK_THROWS_AS(TimeGrid(std::vector<double>{0.0, 0.5, 0.4}, 4), ArgumentError);
  CHECK_THROWS_AS(TimeGrid(std::vector<double>{0.1, 0.5}, 4), ArgumentError);
  CHECK_THROWS_AS(TimeGrid(-1.0, 10, 4), ArgumentError);
  CHECK_THROWS_AS(TimeGrid(1.0, 10, 1), ArgumentError);
}

TEST_CASE("interior Gauss samples are consistent with nodal values") {
  // the interior samples must lie on the same trajectory: compare against a
  // solve on a grid whose nodes land on those interior times
  const PhysicalParams p(0.8, 1.2);
  const std::size_t M = 3;
  const TimeGrid grid(1.0, 8, 4);
  auto source = [&](double t) {
    StateVector f = StateVector::zero(M);
    f.v.set_coeff(1, std::sin(t) + 0.3);
    return f;
  };
  const StateSeries v = duhamel(source, grid, M, p);

  const double tq = grid.gauss_time(3, 2);
  std::vector<double> nodes;
  for (int i = 0; i <= 64; ++i) nodes.push_back(tq * i / 64.0);
  const StateSeries w = duhamel(source, TimeGrid(nodes, 6), M, p);
  const StateVector& got = v.at_gauss(3, 2);
  const StateVector& want = w.at_node(64);
  CHECK(got.u.coeff(1) == doctest::Approx(want.u.coeff(1)).epsilon(1e-10));
  CHECK(got.v.coeff(1) == doctest::Approx(want.v.coeff(1)).epsilon(1e-10));
}
