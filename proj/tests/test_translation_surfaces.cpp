#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rext/antimach.hpp"
#include "rext/surfaces.hpp"
#include "support.hpp"

using namespace rext;

namespace {

SurfaceGenerators identity_generators(double C3 = 0.0, double C4 = 0.0, double C5 = 0.0) {
  SurfaceGenerators gen;
  gen.f = SmoothFunction::identity();
  gen.g = SmoothFunction::identity();
  gen.C3 = C3;
  gen.C4 = C4;
  gen.C5 = C5;
  return gen;
}

double max_abs(const std::array<double, 4>& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

TEST_CASE("smooth functions differentiate exactly") {
  const SmoothFunction f({1.0, -2.0, 0.5, 3.0}, {{0.4, -1.2, 2.0}});
  const SmoothFunction df = f.derivative();
  for (double u : {-0.7, 0.0, 0.9}) {
    const double expected = -2.0 + u + 9 * u * u - 0.4 * 2 * std::sin(2 * u) - 1.2 * 2 * std::cos(2 * u);
    CHECK(df(u) == doctest::Approx(expected).epsilon(1e-14));
    const D1 x(u, 1.0);
    CHECK(f(x).d == doctest::Approx(expected).epsilon(1e-14));
  }
  const SmoothFunction back = SmoothFunction::from_json(f.to_json());
  CHECK(back(0.3) == f(0.3));
  CHECK(SmoothFunction::from_json(2.5)(7.0) == 2.5);
  CHECK(SmoothFunction::from_json(nlohmann::json::array({0.0, 1.0}))(7.0) == 7.0);
}

TEST_CASE("family example at (1, 1)") {
  const SurfaceMap m = build_family_surface(identity_generators(1, 2, 3));
  const auto p = m(1.0, 1.0);
  CHECK(p[0] == 5.0);
  CHECK(p[1] == -4.0);
  CHECK(p[2] == 2.0);
  CHECK(p[3] == 0.0);
}

TEST_CASE("identity family satisfies the surface system") {
  const SurfaceMap m = build_family_surface(identity_generators());
  for (const auto& [u, v] : GridSpec{}.nodes(m.domain())) {
    REQUIRE(max_abs(surface_pde_residual(antimach::connection4(), m, u, v)) <= 1e-10);
  }
  const auto p = m(0.5, -0.25);
  CHECK(p[0] == doctest::Approx(0.25 - 0.0625));
  CHECK(p[1] == doctest::Approx(-0.25 * -0.25 - 0.5 * 0.0625));
  CHECK(p[2] == 0.25);
  CHECK(p[3] == 0.75);
}

TEST_CASE("constant and point surfaces") {
  const SurfaceMap constant = SurfaceMap::from_generic([](const auto& u, const auto&) {
    using S = std::decay_t<decltype(u)>;
    return std::array<S, 4>{S(1.0), S(-2.0), S(0.5), S(3.0)};
  });
  SurfaceGenerators zero;
  const SurfaceMap point = build_family_surface(zero);
  for (double u : {-1.0, 0.0, 0.6})
    for (double v : {-0.3, 1.0}) {
      CHECK(max_abs(surface_pde_residual(antimach::connection4(), constant, u, v)) == 0.0);
      CHECK(max_abs(surface_pde_residual(antimach::connection4(), point, u, v)) == 0.0);
    }
}

TEST_CASE("perturbing x by 0.1 uv adds exactly 0.1 to the first residual") {
  const SurfaceMap base = build_family_surface(identity_generators());
  const SurfaceMap m = SurfaceMap::from_generic([](const auto& u, const auto& v) {
    using S = std::decay_t<decltype(u)>;
    return std::array<S, 4>{u * u - v * v + 0.1 * u * v, -(u * u) * v - u * (v * v), u + v, u - v};
  });
  for (const auto& [u, v] : GridSpec{7, 7}.nodes(m.domain())) {
    const auto r = surface_pde_residual(antimach::connection4(), m, u, v);
    CHECK(r[0] == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(std::abs(r[2]) <= 1e-14);
    CHECK(max_abs(surface_pde_residual(antimach::connection4(), base, u, v)) <= 1e-14);
  }
}

TEST_CASE("generic contraction equals the written-out anti-Mach residuals") {
  Sampler rng(71);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    std::array<double, 12> c;
    for (double& x : c) x = rng.uniform(-1, 1);
    const SurfaceMap m = SurfaceMap::from_generic([c](const auto& u, const auto& v) {
      using S = std::decay_t<decltype(u)>;
      using std::cos;
      using std::sin;
      return std::array<S, 4>{c[0] * u * v + c[1] * sin(u + v), c[2] * u * u * v + c[3] * cos(v),
                              c[4] * u + c[5] * v * v + c[6] * u * v, c[7] * sin(u * v) + c[8] * u + c[9] * v * v * v};
    });
    for (const auto& [u, v] : GridSpec{9, 9}.nodes(m.domain())) {
      const auto a = surface_pde_residual(antimach::connection4(), m, u, v);
      const auto b = antimach_surface_residual(m, u, v);
      for (int k = 0; k < 4; ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
    }
  }
  CHECK(worst <= 1e-13);
}

TEST_CASE("random polynomial families") {
  Sampler rng(72);
  const GridSpec grid;
  for (int i = 0; i < 20; ++i) {
    const SurfaceGenerators gen = support::random_polynomial_generators(rng);
    const SurfaceMap m = build_family_surface(gen);
    double residual = 0.0, y_dev = 0.0, y_formula = 0.0;
    for (const auto& [u, v] : grid.nodes(m.domain())) {
      residual = std::max(residual, max_abs(surface_pde_residual(antimach::connection4(), m, u, v)));
      const double formula = family_y_mixed_partial(gen, u, v);
      y_dev = std::max(y_dev, std::abs(m.jet(u, v).duv[1] - formula));
      y_formula = std::max(y_formula, std::abs(formula));
    }
    const SeparabilityReport rep = separability_report(m, grid);
    CHECK(residual <= 1e-9);
    CHECK(rep.max_mixed_partial[0] <= 1e-10);
    CHECK(rep.max_mixed_partial[2] <= 1e-10);
    CHECK(rep.max_mixed_partial[3] <= 1e-10);
    CHECK(y_dev <= 1e-9);
    CHECK(std::abs(rep.max_mixed_partial[1] - y_formula) <= 1e-9);
    CHECK(rep.grid_points == 2500);
  }
}

TEST_CASE("separability verdicts") {
  {
    const SurfaceMap m = build_family_surface(identity_generators());
    CHECK(m.jet(1.0, 1.0).duv[1] == -4.0);
    CHECK(family_y_mixed_partial(identity_generators(), 1.0, 1.0) == -4.0);
    const SeparabilityReport rep = separability_report(m, {});
    CHECK(rep.separable == std::array<bool, 4>{true, false, true, true});
    CHECK(rep.max_mixed_partial[1] == doctest::Approx(4.0));
  }
  {
    const SurfaceMap plane = SurfaceMap::from_generic([](const auto& u, const auto& v) {
      using S = std::decay_t<decltype(u)>;
      return std::array<S, 4>{S(0.0), S(0.0), u + v, S(0.0)};
    });
    CHECK(separability_report(plane, {}).separable == std::array<bool, 4>{true, true, true, true});
  }
  {
    // f and g constant with C3 = -(c1 + c2): degenerate member.
    SurfaceGenerators gen;
    gen.f = SmoothFunction::constant(0.4);
    gen.g = SmoothFunction::constant(-1.3);
    gen.C3 = 0.9;
    gen.G1 = SmoothFunction({0.0, 0.0, 1.0});
    const SeparabilityReport rep = separability_report(build_family_surface(gen), {});
    CHECK(rep.separable == std::array<bool, 4>{true, true, true, true});
  }
  const auto j = separability_report(build_family_surface(identity_generators()), {10, 10}).to_json();
  CHECK(j.at("coordinates").at("y").at("verdict") == "not separable");
  CHECK(j.at("grid_points") == 100);
}

TEST_CASE("x1 is the quadrature of 2 f f' + C3 f'") {
  Sampler rng(73);
  for (int i = 0; i < 10; ++i) {
    const SurfaceGenerators gen = support::random_polynomial_generators(rng);
    const SmoothFunction df = gen.f.derivative();
    for (double u : {-0.9, -0.1, 0.5, 1.0}) {
      const D1 x(u, 1.0);
      const double lhs = gen.x1(x).d;
      const double rhs = 2 * gen.f(u) * df(u) + gen.C3 * df(u);
      CHECK(std::abs(lhs - rhs) <= 1e-14);
    }
  }
}

TEST_CASE("domain and generator errors") {
  const SurfaceMap m = build_family_surface(identity_generators(), {0.0, 1.0, 0.0, 1.0});
  CHECK_THROWS_AS(m(1.5, 0.5), DomainError);
  CHECK_THROWS_AS(surface_pde_residual(antimach::connection4(), m, 0.5, -0.1), DomainError);
  CHECK_THROWS_AS(SurfaceGenerators::from_json({{"g", 1.0}}), ConfigError);
  const SurfaceGenerators back = SurfaceGenerators::from_json(identity_generators(1, 2, 3).to_json());
  CHECK(back.C4 == 2.0);
  CHECK(build_family_surface(back)(1.0, 1.0)[0] == 5.0);
}
