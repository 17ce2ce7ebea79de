#pragma once

#include <cmath>

#include <Eigen/LU>

#include "rext/field.hpp"

namespace rext {

/// |det g| below this raises SingularMetric.
inline constexpr double kSingularDetThreshold = 1e-12;

inline void check_nonsingular(const Mat<double>& g, const char* what) {
  const double det = g.partialPivLu().determinant();
  if (!(std::abs(det) >= kSingularDetThreshold)) {
    throw SingularMetric(std::string(what) + ": |det g| = " + std::to_string(std::abs(det)) +
                         " below threshold");
  }
}

/// Levi-Civita coefficients Γ^k_ij = ½ g^kl (∂_i g_jl + ∂_j g_il − ∂_l g_ij)
/// at a point given in scalar type S. Needs the metric one dual level deeper.
template <typename S>
Tensor3<S> christoffel_at(const MetricField& metric, const Vec<S>& x) {
  const int n = metric.dim();
  check_dim(x.size(), n, "christoffel");
  const Mat<S> g = metric.at<S>(x);
  {
    Mat<double> gv(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) gv(i, j) = value_of(g(i, j));
    check_nonsingular(gv, "christoffel");
  }
  std::vector<Mat<S>> dg(n);  // dg[l](i,j) = ∂_l g_ij
  for (int l = 0; l < n; ++l) {
    const Mat<Dual<S>> gd = metric.at<Dual<S>>(seed(x, l));
    dg[l] = gd.unaryExpr([](const Dual<S>& e) { return e.d; });
  }
  const Mat<S> ginv = inverse(g);

  Tensor3<S> gamma(n);
  std::vector<S> first_kind(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      for (int l = 0; l < n; ++l) first_kind[l] = 0.5 * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
      for (int k = 0; k < n; ++k) {
        S acc(0.0);
        for (int l = 0; l < n; ++l) acc = acc + ginv(k, l) * first_kind[l];
        gamma(k, i, j) = acc;
        gamma(k, j, i) = acc;
      }
    }
  }
  return gamma;
}

/// Christoffel symbols of the second kind at `p`.
Tensor3<double> christoffel(const MetricField& metric, const ChartPoint& p);

/// The Levi-Civita connection of `metric` as a ConnectionField. Its
/// derivative order is one less than the metric's.
ConnectionField levi_civita(const MetricField& metric);

/// R^a_bcd = ∂_c Γ^a_db − ∂_d Γ^a_cb + Γ^a_ce Γ^e_db − Γ^a_de Γ^e_cb.
/// Antisymmetry in (c,d) holds exactly: only c < d is computed.
Tensor4<double> riemann_tensor(const ConnectionField& conn, const ChartPoint& p);

/// R_ik = R^a_iak. Returned as contracted, without symmetrisation.
Mat<double> ricci_tensor(const Tensor4<double>& riemann);
Mat<double> ricci_tensor(const ConnectionField& conn, const ChartPoint& p);

/// Full contraction R_abcd R^abcd of the Levi-Civita curvature.
double kretschmann(const MetricField& metric, const ChartPoint& p);

struct CurvatureReport {
  ChartPoint point;
  Tensor4<double> riemann;
  Mat<double> ricci;
  double kretschmann = 0.0;
};

CurvatureReport curvature_report(const MetricField& metric, const ChartPoint& p);

}  // namespace rext
