#include "rext/curvature.hpp"

namespace rext {

Tensor3<double> christoffel(const MetricField& metric, const ChartPoint& p) {
  check_finite(p, "christoffel");
  return christoffel_at<double>(metric, p);
}

ConnectionField levi_civita(const MetricField& metric) {
  return ConnectionField(
      metric.dim(), [metric](const auto& x) { return christoffel_at(metric, x); },
      "levi_civita(" + metric.name() + ")", metric.derivative_order() - 1);
}

Tensor4<double> riemann_tensor(const ConnectionField& conn, const ChartPoint& p) {
  const int n = conn.dim();
  check_dim(p.size(), n, "riemann_tensor");
  check_finite(p, "riemann_tensor");

  Tensor3<double> gamma(n);
  std::vector<Tensor3<double>> dgamma(n, Tensor3<double>(n));  // dgamma[c](a,i,j) = ∂_c Γ^a_ij
  for (int c = 0; c < n; ++c) {
    const Tensor3<D1> gd = conn.at<D1>(seed(p, c));
    for (int a = 0; a < n; ++a)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          dgamma[c](a, i, j) = gd(a, i, j).d;
          if (c == 0) gamma(a, i, j) = gd(a, i, j).v;
        }
  }

  Tensor4<double> r(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = c + 1; d < n; ++d) {
          double v = dgamma[c](a, d, b) - dgamma[d](a, c, b);
          for (int e = 0; e < n; ++e) v += gamma(a, c, e) * gamma(e, d, b) - gamma(a, d, e) * gamma(e, c, b);
          r(a, b, c, d) = v;
          r(a, b, d, c) = -v;
        }
  return r;
}

Mat<double> ricci_tensor(const Tensor4<double>& riemann) {
  const int n = riemann.dim();
  Mat<double> ric = Mat<double>::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int a = 0; a < n; ++a) ric(i, k) += riemann(a, i, a, k);
  return ric;
}

Mat<double> ricci_tensor(const ConnectionField& conn, const ChartPoint& p) {
  return ricci_tensor(riemann_tensor(conn, p));
}

namespace {

double full_contraction(const Tensor4<double>& r, const Mat<double>& g, const Mat<double>& ginv) {
  const int n = r.dim();
  // lower[a](b,c,d) = g_ae R^e_bcd ; raised R^a_fgh -> R^{a b c d}
  Tensor4<double> lowered(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          double v = 0.0;
          for (int e = 0; e < n; ++e) v += g(a, e) * r(e, b, c, d);
          lowered(a, b, c, d) = v;
        }
  // Raise b, c, d one index at a time.
  Tensor4<double> t1(n), t2(n), t3(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          double v = 0.0;
          for (int f = 0; f < n; ++f) v += ginv(b, f) * r(a, f, c, d);
          t1(a, b, c, d) = v;
        }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          double v = 0.0;
          for (int f = 0; f < n; ++f) v += ginv(c, f) * t1(a, b, f, d);
          t2(a, b, c, d) = v;
        }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          double v = 0.0;
          for (int f = 0; f < n; ++f) v += ginv(d, f) * t2(a, b, c, f);
          t3(a, b, c, d) = v;
        }
  double k = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) k += lowered(a, b, c, d) * t3(a, b, c, d);
  return k;
}

}  // namespace

double kretschmann(const MetricField& metric, const ChartPoint& p) {
  check_finite(p, "kretschmann");
  const Mat<double> g = metric(p);
  check_nonsingular(g, "kretschmann");
  const Tensor4<double> r = riemann_tensor(levi_civita(metric), p);
  return full_contraction(r, g, g.inverse());
}

CurvatureReport curvature_report(const MetricField& metric, const ChartPoint& p) {
  check_finite(p, "curvature_report");
  const Mat<double> g = metric(p);
  check_nonsingular(g, "curvature_report");
  CurvatureReport rep;
  rep.point = p;
  rep.riemann = riemann_tensor(levi_civita(metric), p);
  rep.ricci = ricci_tensor(rep.riemann);
  rep.kretschmann = full_contraction(rep.riemann, g, g.inverse());
  return rep;
}

}  // namespace rext
