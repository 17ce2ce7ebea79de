#include "rext/extension.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "rext/curvature.hpp"
#include "rext/format.hpp"

namespace rext {

std::vector<std::string> ExtendedChart::names() const {
  std::vector<std::string> out = base_names;
  out.insert(out.end(), fiber_names.begin(), fiber_names.end());
  return out;
}

ExtendedChart ExtendedChart::antimach() {
  return {4, {"x", "y", "z", "t"}, {"P", "Q", "U", "V"}};
}

ExtendedChart ExtendedChart::generic(int n) {
  ExtendedChart c;
  c.base_dim = n;
  for (int i = 1; i <= n; ++i) {
    c.base_names.push_back("x" + std::to_string(i));
    c.fiber_names.push_back("p" + std::to_string(i));
  }
  return c;
}

MetricField extend(const ConnectionField& conn) {
  return MetricField(
      2 * conn.dim(), [conn](const auto& y) { return extended_metric_at(conn, y); },
      "extension(" + conn.name() + ")", conn.derivative_order());
}

std::pair<int, int> extended_signature(const MetricField& metric, const ChartPoint& p) {
  check_finite(p, "extended_signature");
  const Mat<double> g = metric(p);
  check_nonsingular(g, "extended_signature");
  Eigen::SelfAdjointEigenSolver<Mat<double>> es(g, Eigen::EigenvaluesOnly);
  int pos = 0;
  int neg = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()[i] > 0.0) ++pos;
    else ++neg;
  }
  return {pos, neg};
}

std::vector<ExtendedComponent> extended_components(const ConnectionField& conn,
                                                   const ExtendedChart& chart,
                                                   const ChartPoint& p) {
  const int n = conn.dim();
  check_dim(p.size(), 2 * n, "extended_components");
  if (chart.base_dim != n) throw DimensionMismatch("extended_components: chart does not match connection");
  check_finite(p, "extended_components");
  const Tensor3<double> gamma = conn(ChartPoint(p.head(n)));
  const Mat<double> g = extended_metric_at<double>(conn, p);

  std::vector<ExtendedComponent> out;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      std::ostringstream expr;
      bool any = false;
      for (int k = 0; k < n; ++k) {
        const double coef = -2.0 * gamma(k, i, j);
        if (coef == 0.0) continue;
        if (any) expr << (coef < 0 ? " - " : " + ");
        else if (coef < 0) expr << "-";
        expr << format_double(std::abs(coef)) << "*" << chart.fiber_names[k];
        any = true;
      }
      if (any) out.push_back({i, j, expr.str(), g(i, j)});
    }
  }
  for (int i = 0; i < n; ++i) out.push_back({i, n + i, "1", 1.0});
  return out;
}

nlohmann::json extended_components_json(const ConnectionField& conn, const ExtendedChart& chart,
                                        const ChartPoint& p) {
  const auto names = chart.names();
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& c : extended_components(conn, chart, p)) {
    comps.push_back({{"i", c.i},
                     {"j", c.j},
                     {"pair", names[c.i] + names[c.j]},
                     {"expression", c.expression},
                     {"value", c.value}});
  }
  const MetricField g = extend(conn);
  const auto [pos, neg] = extended_signature(g, p);
  return {{"point", std::vector<double>(p.data(), p.data() + p.size())},
          {"coordinates", names},
          {"components", comps},
          {"determinant", g(p).partialPivLu().determinant()},
          {"signature", {pos, neg}}};
}

}  // namespace rext
