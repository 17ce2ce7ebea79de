#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rext/field.hpp"

namespace rext {

/// Coordinate layout of the doubled chart: (x^1..x^n, Ψ_1..Ψ_n), with Ψ_k
/// paired to x^k.
struct ExtendedChart {
  int base_dim = 0;
  std::vector<std::string> base_names;
  std::vector<std::string> fiber_names;

  int total_dim() const { return 2 * base_dim; }
  std::vector<std::string> names() const;

  /// x, y, z, t paired with P, Q, U, V.
  static ExtendedChart antimach();
  /// x1..xn paired with p1..pn.
  static ExtendedChart generic(int n);
};

/// Riemann extension of a symmetric connection:
///   ds² = −2 Γ^k_ij(x) Ψ_k dx^i dx^j + 2 dΨ_k dx^k.
/// The result is a MetricField on the 2n-dimensional chart with the same
/// derivative order as the connection.
template <typename S>
Mat<S> extended_metric_at(const ConnectionField& conn, const Vec<S>& y) {
  const int n = conn.dim();
  check_dim(y.size(), 2 * n, "extend");
  const Vec<S> x = y.head(n);
  const Tensor3<S> gamma = conn.at<S>(x);
  Mat<S> g = Mat<S>::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      S acc(0.0);
      for (int k = 0; k < n; ++k) acc = acc + gamma(k, i, j) * y[n + k];
      g(i, j) = -2.0 * acc;
    }
    g(i, n + i) = S(1.0);
  }
  return g;
}

MetricField extend(const ConnectionField& conn);

/// Counts of positive and negative eigenvalues of ĝ(p).
std::pair<int, int> extended_signature(const MetricField& metric, const ChartPoint& p);

/// One structurally nonzero coefficient ĝ_ij at a point. `expression` is the
/// coefficient written as a linear form in the fiber coordinates with the
/// connection evaluated at the base point, e.g. "4*V".
struct ExtendedComponent {
  int i = 0;
  int j = 0;
  std::string expression;
  double value = 0.0;
};

std::vector<ExtendedComponent> extended_components(const ConnectionField& conn,
                                                   const ExtendedChart& chart,
                                                   const ChartPoint& p);

nlohmann::json extended_components_json(const ConnectionField& conn, const ExtendedChart& chart,
                                        const ChartPoint& p);

}  // namespace rext
