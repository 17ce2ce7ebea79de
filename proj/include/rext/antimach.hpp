#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "rext/extension.hpp"
#include "rext/geodesic.hpp"

namespace rext::antimach {

// Base chart (x, y, z, t); extended chart (x, y, z, t, P, Q, U, V).
enum Coord { X = 0, Y, Z, T, P, Q, U, V };

/// ds² = dx² − 4t dx dz + 2 dy dz + 2t² dz² + dt².
template <typename S>
Mat<S> metric4_at(const Vec<S>& p) {
  const S& t = p[T];
  Mat<S> g = Mat<S>::Zero(4, 4);
  g(X, X) = S(1.0);
  g(X, Z) = -2.0 * t;
  g(Y, Z) = S(1.0);
  g(Z, Z) = 2.0 * t * t;
  g(T, T) = S(1.0);
  return g;
}

/// Nonzero coefficients Γ^t_xz = 1, Γ^y_xt = −1, Γ^t_zz = −2t, Γ^x_zt = −1.
template <typename S>
Tensor3<S> connection4_at(const Vec<S>& p) {
  Tensor3<S> gamma(4);
  gamma(T, X, Z) = gamma(T, Z, X) = S(1.0);
  gamma(Y, X, T) = gamma(Y, T, X) = S(-1.0);
  gamma(T, Z, Z) = -2.0 * p[T];
  gamma(X, Z, T) = gamma(X, T, Z) = S(-1.0);
  return gamma;
}

MetricField metric4();
/// Hand-coded Levi-Civita connection of metric4().
ConnectionField connection4();
/// Riemann extension of connection4() on (x, y, z, t, P, Q, U, V).
MetricField metric8();

/// Geodesic accelerations written out by hand. `pos`/`vel` have 4 or 8
/// entries; the first four equations never read the fiber entries.
template <typename S>
Vec<S> acceleration_at(const Vec<S>& pos, const Vec<S>& vel) {
  const Eigen::Index n = pos.size();
  Vec<S> a(n);
  const S& t = pos[T];
  const S &xd = vel[X], &zd = vel[Z], &td = vel[T];
  a[X] = 2.0 * zd * td;
  a[Y] = 2.0 * xd * td;
  a[Z] = S(0.0);
  a[T] = 2.0 * t * zd * zd - 2.0 * xd * zd;
  if (n == 8) {
    const S &p = pos[P], &q = pos[Q], &v = pos[V];
    const S &pd = vel[P], &qd = vel[Q], &vd = vel[V];
    a[P] = 4.0 * q * zd * (xd - t * zd) - 2.0 * td * qd + 2.0 * zd * vd;
    a[Q] = S(0.0);
    a[U] = 4.0 * p * zd * (xd - t * zd) - 2.0 * td * pd + 2.0 * (xd - 2.0 * t * zd) * vd;
    a[V] = 2.0 * v * zd * zd - 4.0 * q * zd * td - 2.0 * zd * pd - 2.0 * xd * qd;
  }
  return a;
}

Vec<double> hand_rhs(const GeodesicState& state);

// ---------------------------------------------------------------------------
// Closed-form solutions.

enum class SolutionBranch { xi3_nonzero, xi3_zero };

/// Smallest |ξ³| for which the trigonometric branch is evaluated.
inline constexpr double kBranchThreshold = 1e-6;

/// Branch for ξ³: zero only for ξ³ == 0 exactly; throws IllConditioned for
/// 0 < |ξ³| < kBranchThreshold.
SolutionBranch branch_of(const InitialData& init);

/// Every named constant of the fiber solutions, from (ξ, h, t₀, P₀, Q₀, V₀).
/// Defined only on the nonzero branch.
struct ClosedFormConstants {
  double L1, L2, L3, L4, L5;
  double M, M1, M2;
  double A1, A2;
  double K1, K2, K3, K4;
  double H1, H2, H3;
  double R1, R2, R3, R4, R5, R6, R7;
  double R7_literal;  // leading term read as (−8ξ¹)²h₂
  double N1, N2, N3, N4, N5, N6, N7;
};

ClosedFormConstants closed_form_constants(const InitialData& init);

namespace detail {

struct Params {
  double x0, y0, z0, t0, P0, Q0, U0, V0;
  double a, b, c, e;  // ξ¹..ξ⁴
  double h1, h2, h3, h4;
};

Params params_of(const InitialData& init);

template <typename S>
struct Trig {
  S sin1, cos1, sin2, cos2;
};

template <typename S>
Trig<S> trig(double c, const S& s) {
  using std::cos;
  using std::sin;
  const double w = std::numbers::sqrt2 * c;
  const S ws = w * s;
  return {sin(ws), cos(ws), sin(2.0 * ws), cos(2.0 * ws)};
}

}  // namespace detail

template <typename S>
using Quad = std::array<S, 4>;

/// (x, y, z, t) along the base geodesic. Trigonometric forms for ξ³ ≠ 0,
/// polynomial forms for ξ³ = 0. Argument of every sin/cos is (√2 ξ³) s.
template <typename S>
Quad<S> basic_closed_form(const InitialData& init, const S& s) {
  const detail::Params p = detail::params_of(init);
  const double r2 = std::numbers::sqrt2;
  if (branch_of(init) == SolutionBranch::xi3_zero) {
    return {p.x0 + p.a * s, p.y0 + p.b * s + p.a * p.e * s * s, S(p.z0), p.t0 + p.e * s};
  }
  const double a = p.a, b = p.b, c = p.c, e = p.e, t0 = p.t0;
  const auto tr = detail::trig(c, s);
  const S x = p.x0 + (2 * t0 * c - a) * s + e / c * (1.0 - tr.cos1) + r2 * (a - t0 * c) / c * tr.sin1;
  const S y = p.y0 + (b + (e * e + 2 * a * a) / (2 * c) + t0 * (3 * t0 * c - 4 * a)) * s +
              e / (2 * c * c) * (2 * (a - 2 * t0 * c) * tr.cos1 - (a - t0 * c) * tr.cos2 - (a - 3 * t0 * c)) -
              r2 / (c * c) * (a * a - t0 * c * (3 * a - 2 * t0 * c)) * tr.sin1 +
              1.0 / (2 * r2 * c * c) * (a * a - e * e / 2 - t0 * c * (2 * a - t0 * c)) * tr.sin2;
  const S z = p.z0 + c * s;
  const S t = t0 * (2.0 - tr.cos1) - a / c * (1.0 - tr.cos1) + e / (r2 * c) * tr.sin1;
  return {x, y, z, t};
}

/// Which of the printed fiber displays to evaluate.
struct FiberVariant {
  enum class VForm { printed_k, with_a_constants } v_form = VForm::printed_k;
};

/// (P, Q, U, V) from the general-point displays. On the nonzero branch the
/// printed forms are returned (V from its K-constant display unless
/// `variant` asks for the A-constant form). On the zero branch the
/// polynomial forms are returned.
template <typename S>
Quad<S> fiber_closed_form(const InitialData& init, const S& s, FiberVariant variant = {}) {
  const detail::Params p = detail::params_of(init);
  const double a = p.a, c = p.c, e = p.e;
  if (branch_of(init) == SolutionBranch::xi3_zero) {
    const S P_ = p.P0 + p.h1 * s - e * p.h2 * s * s;
    const S Q_ = p.Q0 + p.h2 * s;
    const S U_ = p.U0 - (e * p.h1 - a * p.h4) * s * s + (2.0 / 3.0) * p.h2 * (e * e - a * a) * s * s * s + p.h3 * s;
    const S V_ = p.V0 + p.h4 * s - a * p.h2 * s * s;
    return {P_, Q_, U_, V_};
  }
  const ClosedFormConstants k = closed_form_constants(init);
  const double r2 = std::numbers::sqrt2;
  const auto tr = detail::trig(c, s);
  const S Q_ = p.h2 * s + p.Q0;
  S V_;
  if (variant.v_form == FiberVariant::VForm::printed_k) {
    V_ = k.K1 * tr.sin1 + k.K2 * tr.cos1 + k.K3 * s * tr.sin1 + k.K4 * s * tr.cos1;
  } else {
    V_ = k.A1 * tr.sin1 + k.A2 * tr.cos1 + k.M / (2 * c * c) - k.M1 / (2 * r2 * c) * s * tr.cos1 +
         k.M2 / (2 * r2 * c) * s * tr.sin1;
  }
  const S P_ = p.P0 + k.H1 / (r2 * c) * (1.0 - tr.cos1) + k.H2 / (r2 * c) * tr.sin1 + k.H3 * s;
  const S U_ = p.U0 + k.N1 * tr.sin1 + k.N2 * (tr.cos1 - 1.0) + k.N3 * s * tr.sin1 + k.N4 * s * tr.cos1 +
               k.N5 * tr.sin2 + k.N6 * (tr.cos2 - 1.0) + k.N7 * s;
  return {P_, Q_, U_, V_};
}

/// Ṗ written with the L constants and the (V − V₀) coupling, given V.
template <typename S>
S pdot_l_form(const InitialData& init, const S& s, const S& v) {
  const detail::Params p = detail::params_of(init);
  const ClosedFormConstants k = closed_form_constants(init);
  const auto tr = detail::trig(p.c, s);
  return k.L1 * tr.sin1 + k.L2 * (tr.cos1 - 1.0) + k.L3 * s * tr.sin1 + k.L4 * s * tr.cos1 +
         2 * p.c * (v - p.V0) + p.h1;
}

/// Ṗ written with the H constants.
template <typename S>
S pdot_h_form(const InitialData& init, const S& s) {
  const detail::Params p = detail::params_of(init);
  const ClosedFormConstants k = closed_form_constants(init);
  const auto tr = detail::trig(p.c, s);
  return k.H1 * tr.sin1 + k.H2 * tr.cos1 + k.H3;
}

/// The immediate antiderivative of the H-form Ṗ with the frequency read as
/// √2 h₃ instead of √2 ξ³; the constant is fixed by P(0) = P₀. Needs h₃ ≠ 0.
template <typename S>
S p_h3_reading(const InitialData& init, const S& s) {
  using std::cos;
  using std::sin;
  const detail::Params p = detail::params_of(init);
  const ClosedFormConstants k = closed_form_constants(init);
  if (p.h3 == 0.0) throw IllConditioned("p_h3_reading: h3 = 0");
  const double w = std::numbers::sqrt2 * p.h3;
  return -k.H1 / w * cos(w * s) + k.H2 / w * sin(w * s) + k.H3 * s + p.P0 + k.H1 / w;
}

/// Ü as the seven-term trigonometric expansion with R constants.
/// `literal_r7` selects the (−8ξ¹)² reading of R₇'s leading term.
template <typename S>
S udd_r_form(const InitialData& init, const S& s, bool literal_r7) {
  const detail::Params p = detail::params_of(init);
  const ClosedFormConstants k = closed_form_constants(init);
  const auto tr = detail::trig(p.c, s);
  const double r7 = literal_r7 ? k.R7_literal : k.R7;
  return k.R1 * tr.sin1 + k.R2 * tr.cos1 + k.R3 * s * tr.sin1 + k.R4 * s * tr.cos1 + k.R5 * tr.sin1 * tr.sin1 +
         k.R6 * tr.cos1 * tr.cos1 + r7 * tr.sin1 * tr.cos1;
}

/// (P, Q, U, V) reduced to the vertex x₀ = Ψ₀ = 0, nonzero branch only.
template <typename S>
Quad<S> vertex_closed_form(const Vec<double>& xi, const Vec<double>& h, const S& s) {
  check_dim(xi.size(), 4, "vertex_closed_form xi");
  check_dim(h.size(), 4, "vertex_closed_form h");
  const double a = xi[0], c = xi[2], e = xi[3];
  const double h1 = h[0], h2 = h[1], h3 = h[2], h4 = h[3];
  if (c == 0.0) throw IllConditioned("vertex_closed_form: requires xi3 != 0");
  if (std::abs(c) < kBranchThreshold) throw IllConditioned("vertex_closed_form: |xi3| below conditioning threshold");
  const double r2 = std::numbers::sqrt2;
  const auto tr = detail::trig(c, s);
  const S P_ = (-4.0 * s * c * c * h1 + (-4 * r2 * a * tr.sin1 + e * (tr.cos1 - 1.0)) * h2 +
                4 * c * (r2 * h1 * tr.sin1 + 2.0 * s * a * h2 + h4 - h4 * tr.cos1)) /
               (4 * c * c);
  const S Q_ = h2 * s;
  const S U_ = (r2 * (-8 * a * c * h1 + 8 * a * a * h2 - e * e * h2 + 4 * c * e * h4) * tr.sin2 -
                4 * r2 * (-4.0 * s * c * c * e * h1 - e * e * h2 + 4 * c * e * (s * a * h2 + h4)) * tr.sin1 +
                2.0 * (7 * a * e * h2 + 8.0 * s * c * c * c * h3 + 8.0 * s * c * c * e * h4 -
                       c * (e * (12 * h1 + 2.0 * s * e * h2) - 20 * a * h4)) +
                2 * (-5 * a * e * h2 + c * (4 * e * h1 + 4 * a * h4)) * tr.cos2 -
                4.0 * (-4 * c * e * h1 + 8.0 * s * a * a * c * h2 + a * (e * h2 + 4 * c * (-2.0 * s * c * h1 + 3 * h4))) *
                    tr.cos1) /
               (16 * c * c * c);
  const S V_ = (-8 * c * h1 + 8 * a * h2 + 8.0 * (-a * h2 + c * (h1 + s * e * h2)) * tr.cos1 +
                r2 * (-8.0 * s * a * c * h2 - e * h2 + 4 * c * h4) * tr.sin1) /
               (8 * c * c);
  return {P_, Q_, U_, V_};
}

/// Value of the supplementary condition at the vertex.
/// Zero branch: both fields hold ξ¹h₁ + ξ²h₂ + ξ⁴h₄.
/// Nonzero branch: `evaluated` is ĝ(ẏ,ẏ) at the vertex,
/// 2ξ¹h₁ + 2ξ²h₂ + 2ξ³h₃ + 2ξ⁴h₄, and `printed` adds 3(ξ⁴)²h₂/(2ξ³).
struct SupplementaryNorm {
  SolutionBranch branch;
  double evaluated;
  double printed;
  double discrepancy() const { return printed - evaluated; }
};

SupplementaryNorm supplementary_norm(const Vec<double>& xi, const Vec<double>& h);

/// Value, first and second derivative of a scalar function of s.
struct Jet {
  double value, first, second;
};

template <typename F>
Jet jet(F&& f, double s) {
  const D2 sd(D1(s, 1.0), D1(1.0, 0.0));
  const D2 r = f(sd);
  return {r.v.v, r.v.d, r.d.d};
}

/// Closed-form fiber values at s together with the residuals of the four
/// fiber geodesic equations, computed by differentiating the closed forms
/// (basic and fiber) exactly in s.
struct ExtendedEvaluation {
  Quad<double> values;
  Quad<double> residuals;
};

ExtendedEvaluation extended_closed_form(const InitialData& init, double s, FiberVariant variant = {});

/// Residuals of the four base equations for the basic closed form at s.
Quad<double> basic_residual(const InitialData& init, double s);

/// Residuals of the fiber equations for the vertex forms (with the basic
/// vertex geodesic) at s.
Quad<double> vertex_residual(const Vec<double>& xi, const Vec<double>& h, double s);

}  // namespace rext::antimach
