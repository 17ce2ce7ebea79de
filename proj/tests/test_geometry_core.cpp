#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "rext/antimach.hpp"
#include "rext/curvature.hpp"
#include "rext/registry.hpp"
#include "support.hpp"

using namespace rext;

namespace {

ChartPoint pt(std::initializer_list<double> v) {
  ChartPoint p(static_cast<Eigen::Index>(v.size()));
  int i = 0;
  for (double x : v) p[i++] = x;
  return p;
}

// Random chart points; the sphere needs θ kept away from the poles.
std::vector<ChartPoint> sample_points(const std::string& id, int dim, int count, std::uint64_t seed) {
  Sampler rng(seed);
  std::vector<ChartPoint> pts;
  for (int i = 0; i < count; ++i) {
    ChartPoint p = rng.uniform_vec(dim, -2.0, 2.0);
    if (id == "sphere2") p[0] = rng.uniform(0.3, 2.8);
    pts.push_back(p);
  }
  return pts;
}

}  // namespace

TEST_CASE("dual numbers carry exact derivatives") {
  const D1 x(0.7, 1.0);
  const D1 y = sin(x) * x + sqrt(x) / (x + 1.0);
  const double v = 0.7;
  const double expected = std::cos(v) * v + std::sin(v) + 0.5 / std::sqrt(v) / (v + 1) - std::sqrt(v) / ((v + 1) * (v + 1));
  CHECK(y.d == doctest::Approx(expected).epsilon(1e-15));

  // Nested: second derivative of x^3 at 2 is 12.
  const D2 s(D1(2.0, 1.0), D1(1.0, 0.0));
  const D2 c = s * s * s;
  CHECK(c.v.v == 8.0);
  CHECK(c.v.d == 12.0);
  CHECK(c.d.d == 12.0);
}

TEST_CASE("inverse agrees with Eigen on a well conditioned matrix") {
  Sampler rng(7);
  Mat<double> m(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) m(i, j) = rng.uniform(-1, 1) + (i == j ? 4.0 : 0.0);
  CHECK((inverse(m) - m.inverse()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK_THROWS_AS(inverse(Mat<double>(Mat<double>::Zero(3, 3))), SingularMetric);
}

TEST_CASE("anti-Mach Christoffel symbols at t = 1") {
  const Tensor3<double> G = christoffel(antimach::metric4(), pt({0, 0, 0, 1}));
  Tensor3<double> expected(4);
  for (auto [k, i, j, v] : std::vector<std::tuple<int, int, int, double>>{
           {3, 0, 2, 1.0}, {1, 0, 3, -1.0}, {3, 2, 2, -2.0}, {0, 2, 3, -1.0}}) {
    expected(k, i, j) = v;
    expected(k, j, i) = v;
  }
  CHECK(support::max_diff(G, expected) <= 1e-15);
}

TEST_CASE("flat metric has vanishing connection") {
  const Tensor3<double> G = christoffel(flat_metric(4), pt({0.3, -1, 2, 5}));
  CHECK(support::max_diff(G, Tensor3<double>(4)) == 0.0);
}

TEST_CASE("round sphere at theta = pi/4") {
  const ChartPoint p = pt({std::numbers::pi / 4, 0.2});
  const Tensor3<double> G = christoffel(sphere2_metric(), p);
  CHECK(G(0, 1, 1) == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(G(1, 0, 1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(G(1, 1, 0) == G(1, 0, 1));
  CHECK(support::max_diff(G, support::fd_christoffel(sphere2_metric(), p)) < 1e-6);

  const ConnectionField conn = levi_civita(sphere2_metric());
  const Tensor4<double> R = riemann_tensor(conn, p);
  CHECK(R(0, 1, 0, 1) == doctest::Approx(0.5).epsilon(1e-14));
  const Mat<double> ric = ricci_tensor(R);
  CHECK(ric(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(ric(1, 1) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(std::abs(ric(0, 1)) < 1e-15);
  for (double theta : {0.4, 1.0, std::numbers::pi / 2, 2.5}) {
    CHECK(kretschmann(sphere2_metric(), pt({theta, 1.0})) == doctest::Approx(4.0).epsilon(1e-12));
  }
}

TEST_CASE("Christoffel output is exactly symmetric for every registered metric") {
  for (const auto& id : registry_ids()) {
    const RegistryEntry e = registry_lookup(id);
    for (const auto& p : sample_points(id, e.metric.dim(), 50, 11)) {
      const Tensor3<double> G = christoffel(e.metric, p);
      const int n = e.metric.dim();
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) REQUIRE(G(k, i, j) == G(k, j, i));
    }
  }
}

TEST_CASE("Levi-Civita connection is metric compatible") {
  for (const auto& id : registry_ids()) {
    const RegistryEntry e = registry_lookup(id);
    const int n = e.metric.dim();
    double worst = 0.0;
    for (const auto& p : sample_points(id, n, 20, 12)) {
      const Tensor3<double> G = christoffel(e.metric, p);
      const Mat<double> g = e.metric(p);
      for (int k = 0; k < n; ++k) {
        const Mat<D1> gd = e.metric.at<D1>(seed(p, k));
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            double v = gd(i, j).d;
            for (int l = 0; l < n; ++l) v -= G(l, k, i) * g(l, j) + G(l, k, j) * g(i, l);
            worst = std::max(worst, std::abs(v));
          }
      }
    }
    INFO(id);
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("Riemann tensor symmetries") {
  for (const std::string id : {"antimach4", "antimach8", "sphere2"}) {
    const RegistryEntry e = registry_lookup(id);
    const ConnectionField conn = levi_civita(e.metric);
    const int n = e.metric.dim();
    double bianchi = 0.0;
    for (const auto& p : sample_points(id, n, 10, 13)) {
      const Tensor4<double> R = riemann_tensor(conn, p);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c)
            for (int d = 0; d < n; ++d) {
              REQUIRE(R(a, b, c, d) + R(a, b, d, c) == 0.0);
              bianchi = std::max(bianchi, std::abs(R(a, b, c, d) + R(a, c, d, b) + R(a, d, b, c)));
            }
    }
    INFO(id);
    CHECK(bianchi <= 1e-12);
  }
}

TEST_CASE("anti-Mach curvature at t = 1") {
  const ChartPoint p = pt({0, 0, 0, 1});
  const ConnectionField conn = levi_civita(antimach::metric4());
  const Tensor4<double> R = riemann_tensor(conn, p);

  // Independent symbolic computation in the same sign convention.
  Tensor4<double> expected(4);
  for (auto [a, b, c, d, v] : std::vector<std::tuple<int, int, int, int, double>>{
           {0, 2, 0, 2, 1.0}, {1, 0, 0, 2, -1.0}, {1, 2, 0, 2, 2.0}, {1, 3, 2, 3, -1.0}, {3, 2, 2, 3, 1.0}}) {
    expected(a, b, c, d) = v;
    expected(a, b, d, c) = -v;
  }
  CHECK(support::max_diff(R, expected) <= 1e-14);
  CHECK(support::max_diff(R, support::fd_riemann(conn, p)) < 1e-6);
  CHECK(ricci_tensor(conn, p).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(std::abs(kretschmann(antimach::metric4(), pt({0.3, -1.2, 0.7, 2.0}))) <= 1e-9);
  CHECK(kretschmann(flat_metric(4), pt({1, 2, 3, 4})) == 0.0);
}

TEST_CASE("anti-Mach metric components and determinant") {
  Sampler rng(5);
  for (int i = 0; i < 20; ++i) {
    const ChartPoint p = rng.uniform_vec(4, -2, 2);
    const Mat<double> g = antimach::metric4()(p);
    const double t = p[3];
    CHECK(g(0, 0) == 1.0);
    CHECK(g(0, 2) == -2 * t);
    CHECK(g(1, 2) == 1.0);
    CHECK(g(2, 2) == 2 * t * t);
    CHECK(g(3, 3) == 1.0);
    CHECK(g.determinant() == doctest::Approx(-1.0).epsilon(1e-13));
  }
}

TEST_CASE("polynomial metrics: dual derivatives match analytic and finite differences") {
  // g = [[1 + 3 x^2 y, x], [x, 2 + y^3]]
  const nlohmann::json spec = {
      {"name", "poly2"},
      {"dim", 2},
      {"coordinates", {"x", "y"}},
      {"components",
       {{{"i", 0}, {"j", 0}, {"terms", {{{"coef", 1}, {"powers", {0, 0}}}, {{"coef", 3}, {"powers", {2, 1}}}}}},
        {{"i", 0}, {"j", 1}, {"terms", {{{"coef", 1}, {"powers", {1, 0}}}}}},
        {{"i", 1}, {"j", 1}, {"terms", {{{"coef", 2}, {"powers", {0, 0}}}, {{"coef", 1}, {"powers", {0, 3}}}}}}}}};
  const MetricField m = polynomial_metric(spec);
  const ChartPoint p = pt({0.4, -0.3});
  const Mat<D1> dx = m.at<D1>(seed(p, 0));
  const Mat<D1> dy = m.at<D1>(seed(p, 1));
  CHECK(dx(0, 0).d == doctest::Approx(6 * 0.4 * -0.3).epsilon(1e-15));
  CHECK(dy(0, 0).d == doctest::Approx(3 * 0.16).epsilon(1e-15));
  CHECK(dx(1, 0).d == 1.0);
  CHECK(dy(1, 1).d == doctest::Approx(3 * 0.09).epsilon(1e-15));
  CHECK(support::max_diff(christoffel(m, p), support::fd_christoffel(m, p)) < 1e-6);
}

TEST_CASE("errors") {
  const MetricField degenerate(2, [](const auto& x) {
    using S = typename std::decay_t<decltype(x)>::Scalar;
    Mat<S> g = Mat<S>::Zero(2, 2);
    g(0, 0) = S(1.0);
    g(1, 1) = x[0] - x[0];
    return g;
  }, "degenerate");
  CHECK_THROWS_AS(christoffel(degenerate, pt({1, 1})), SingularMetric);
  CHECK_THROWS_AS(kretschmann(degenerate, pt({1, 1})), SingularMetric);

  const MetricField values_only(2, [](const auto& x) {
    using S = typename std::decay_t<decltype(x)>::Scalar;
    Mat<S> g = Mat<S>::Identity(2, 2);
    g(1, 1) = S(1.0) + x[0] * x[0];
    return g;
  }, "values_only", 0);
  CHECK_THROWS_AS(christoffel(values_only, pt({1, 1})), DerivativeUnsupported);

  const MetricField first_only(2, [](const auto& x) {
    using S = typename std::decay_t<decltype(x)>::Scalar;
    Mat<S> g = Mat<S>::Identity(2, 2);
    g(1, 1) = S(1.0) + x[0] * x[0];
    return g;
  }, "first_only", 1);
  CHECK_NOTHROW(christoffel(first_only, pt({1, 1})));
  CHECK_THROWS_AS(kretschmann(first_only, pt({1, 1})), DerivativeUnsupported);

  CHECK_THROWS_AS(christoffel(antimach::metric4(), pt({1, 2, 3})), DimensionMismatch);
  CHECK_THROWS_AS(christoffel(antimach::metric4(), pt({1, 2, 3, NAN})), DomainError);
}
