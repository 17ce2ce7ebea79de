#pragma once

#include <algorithm>
#include <cmath>

#include "rext/curvature.hpp"
#include "rext/random.hpp"
#include "rext/surfaces.hpp"

namespace support {

using rext::ChartPoint;
using rext::Mat;
using rext::Tensor3;
using rext::Tensor4;

/// Levi-Civita coefficients from central differences of the metric.
inline Tensor3<double> fd_christoffel(const rext::MetricField& metric, const ChartPoint& p, double h = 1e-5) {
  const int n = metric.dim();
  std::vector<Mat<double>> dg(n);
  for (int l = 0; l < n; ++l) {
    ChartPoint a = p, b = p;
    a[l] += h;
    b[l] -= h;
    dg[l] = (metric(a) - metric(b)) / (2 * h);
  }
  const Mat<double> ginv = metric(p).inverse();
  Tensor3<double> out(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int l = 0; l < n; ++l) acc += 0.5 * ginv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
        out(k, i, j) = acc;
      }
  return out;
}

/// Riemann tensor from central differences of a connection.
inline Tensor4<double> fd_riemann(const rext::ConnectionField& conn, const ChartPoint& p, double h = 1e-5) {
  const int n = conn.dim();
  std::vector<Tensor3<double>> dG;
  for (int c = 0; c < n; ++c) {
    ChartPoint a = p, b = p;
    a[c] += h;
    b[c] -= h;
    const Tensor3<double> ga = conn(a), gb = conn(b);
    Tensor3<double> d(n);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) d(k, i, j) = (ga(k, i, j) - gb(k, i, j)) / (2 * h);
    dG.push_back(d);
  }
  const Tensor3<double> G = conn(p);
  Tensor4<double> R(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          double v = dG[c](a, d, b) - dG[d](a, c, b);
          for (int e = 0; e < n; ++e) v += G(a, c, e) * G(e, d, b) - G(a, d, e) * G(e, c, b);
          R(a, b, c, d) = v;
        }
  return R;
}

inline double max_diff(const Tensor3<double>& x, const Tensor3<double>& y) {
  double m = 0.0;
  const int n = x.dim();
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m = std::max(m, std::abs(x(k, i, j) - y(k, i, j)));
  return m;
}

inline double max_diff(const Tensor4<double>& x, const Tensor4<double>& y) {
  double m = 0.0;
  const int n = x.dim();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) m = std::max(m, std::abs(x(a, b, c, d) - y(a, b, c, d)));
  return m;
}

/// Generators with polynomial f, g, G1, G2 of degree <= 3 and every
/// coefficient and constant drawn from [-1, 1].
inline rext::SurfaceGenerators random_polynomial_generators(rext::Sampler& rng) {
  auto poly = [&rng] {
    std::vector<double> c(4);
    for (double& x : c) x = rng.uniform(-1, 1);
    return rext::SmoothFunction(c);
  };
  rext::SurfaceGenerators gen;
  gen.f = poly();
  gen.g = poly();
  gen.G1 = poly();
  gen.G2 = poly();
  gen.C3 = rng.uniform(-1, 1);
  gen.C4 = rng.uniform(-1, 1);
  gen.C5 = rng.uniform(-1, 1);
  return gen;
}

}  // namespace support
