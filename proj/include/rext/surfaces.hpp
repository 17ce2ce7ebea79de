#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rext/field.hpp"

namespace rext {

/// Polynomial plus a finite trigonometric sum in one variable:
///   Σ c_k u^k + Σ (a_j cos ω_j u + b_j sin ω_j u).
/// Closed under differentiation, so derivatives are exact.
class SmoothFunction {
 public:
  struct TrigTerm {
    double a = 0.0;  // cos coefficient
    double b = 0.0;  // sin coefficient
    double omega = 1.0;
  };

  SmoothFunction() = default;
  explicit SmoothFunction(std::vector<double> poly, std::vector<TrigTerm> trig = {})
      : poly_(std::move(poly)), trig_(std::move(trig)) {}

  static SmoothFunction constant(double c) { return SmoothFunction({c}); }
  static SmoothFunction identity() { return SmoothFunction({0.0, 1.0}); }

  template <typename S>
  S operator()(const S& u) const {
    using std::cos;
    using std::sin;
    S acc(0.0);
    for (auto it = poly_.rbegin(); it != poly_.rend(); ++it) acc = acc * u + *it;
    for (const auto& t : trig_) {
      const S arg = t.omega * u;
      acc = acc + t.a * cos(arg) + t.b * sin(arg);
    }
    return acc;
  }

  SmoothFunction derivative() const;

  const std::vector<double>& poly() const { return poly_; }
  const std::vector<TrigTerm>& trig() const { return trig_; }

  nlohmann::json to_json() const;
  static SmoothFunction from_json(const nlohmann::json& j);

 private:
  std::vector<double> poly_;
  std::vector<TrigTerm> trig_;
};

/// Generators of the separated solution family:
///   z = f(u) + g(v), t = f(u) − g(v),
///   x = x₁(u) + x₂(v), x₁ = f² + C₃f + C₄, x₂ = −g² − C₃g + C₅,
///   y = −2C₃fg − f²g − g²f + G₁(u) + G₂(v).
struct SurfaceGenerators {
  SmoothFunction f, g, G1, G2;
  double C3 = 0.0, C4 = 0.0, C5 = 0.0;

  template <typename S>
  S x1(const S& u) const {
    const S fu = f(u);
    return fu * fu + C3 * fu + C4;
  }
  template <typename S>
  S x2(const S& v) const {
    const S gv = g(v);
    return -(gv * gv) - C3 * gv + C5;
  }

  nlohmann::json to_json() const;
  static SurfaceGenerators from_json(const nlohmann::json& j);
};

struct Rectangle {
  double u0 = -1.0, u1 = 1.0, v0 = -1.0, v1 = 1.0;
  bool contains(double u, double v) const { return u >= u0 && u <= u1 && v >= v0 && v <= v1; }
};

/// Value and first/mixed partials of the four coordinates at (u, v).
struct SurfaceJet {
  std::array<double, 4> value, du, dv, duv;
};

/// Map (u, v) → (x, y, z, t) with exact partials up to the mixed second.
class SurfaceMap {
 public:
  using Evaluator = std::function<std::array<D2, 4>(const D2& u, const D2& v)>;

  SurfaceMap(Evaluator eval, Rectangle domain) : eval_(std::move(eval)), domain_(domain) {}

  /// Wrap a generic callable (u, v) -> std::array<S, 4>.
  template <typename F>
  static SurfaceMap from_generic(F f, Rectangle domain = {}) {
    return SurfaceMap([f](const D2& u, const D2& v) { return f(u, v); }, domain);
  }

  const Rectangle& domain() const { return domain_; }
  SurfaceJet jet(double u, double v) const;
  std::array<double, 4> operator()(double u, double v) const { return jet(u, v).value; }

 private:
  Evaluator eval_;
  Rectangle domain_;
};

SurfaceMap build_family_surface(const SurfaceGenerators& gen, Rectangle domain = {});

/// ∂²x^i/∂u∂v + Γ^i_jk ∂x^j/∂u ∂x^k/∂v for a 4-dimensional connection.
std::array<double, 4> surface_pde_residual(const ConnectionField& conn, const SurfaceMap& m, double u, double v);

/// The same four residuals written out for the anti-Mach connection.
std::array<double, 4> antimach_surface_residual(const SurfaceMap& m, double u, double v);

/// −2(C₃ + f + g) f′ g′: mixed partial of y on a family surface.
double family_y_mixed_partial(const SurfaceGenerators& gen, double u, double v);

struct GridSpec {
  int nu = 50;
  int nv = 50;
  /// Grid nodes inclusive of the rectangle edges.
  std::vector<std::pair<double, double>> nodes(const Rectangle& r) const;
};

/// A coordinate is separable (a sum of a u-curve and a v-curve) iff its
/// mixed partial vanishes; the verdict threshold is 1e-10.
inline constexpr double kSeparableTolerance = 1e-10;

struct SeparabilityReport {
  std::array<double, 4> max_mixed_partial{};
  std::array<bool, 4> separable{};
  int grid_points = 0;

  nlohmann::json to_json() const;
};

SeparabilityReport separability_report(const SurfaceMap& m, const GridSpec& grid);

}  // namespace rext
