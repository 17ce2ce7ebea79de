#include "rext/antimach.hpp"

namespace rext::antimach {

MetricField metric4() {
  return MetricField(4, [](const auto& p) { return metric4_at(p); }, "antimach4");
}

ConnectionField connection4() {
  return ConnectionField(4, [](const auto& p) { return connection4_at(p); }, "antimach4_connection");
}

MetricField metric8() {
  MetricField g = extend(connection4());
  return MetricField(
      8, [g](const auto& y) { return g.at(y); }, "antimach8", g.derivative_order());
}

Vec<double> hand_rhs(const GeodesicState& state) {
  if (state.position.size() != 4 && state.position.size() != 8) {
    throw DimensionMismatch("antimach::hand_rhs: state must be 4- or 8-dimensional");
  }
  check_dim(state.velocity.size(), state.position.size(), "antimach::hand_rhs velocity");
  return acceleration_at<double>(state.position, state.velocity);
}

SolutionBranch branch_of(const InitialData& init) {
  check_dim(init.base_direction.size(), 4, "antimach initial data");
  const double c = init.base_direction[2];
  if (c == 0.0) return SolutionBranch::xi3_zero;
  if (std::abs(c) < kBranchThreshold) {
    throw IllConditioned("closed forms: 0 < |xi3| = " + std::to_string(std::abs(c)) +
                         " < 1e-6; use the numeric integrator");
  }
  return SolutionBranch::xi3_nonzero;
}

namespace detail {

Params params_of(const InitialData& init) {
  check_dim(init.base_point.size(), 4, "antimach base_point");
  check_dim(init.fiber_point.size(), 4, "antimach fiber_point");
  check_dim(init.base_direction.size(), 4, "antimach base_direction");
  check_dim(init.fiber_direction.size(), 4, "antimach fiber_direction");
  const auto& x = init.base_point;
  const auto& psi = init.fiber_point;
  const auto& xi = init.base_direction;
  const auto& h = init.fiber_direction;
  return {x[0],  x[1],  x[2],  x[3],  psi[0], psi[1], psi[2], psi[3],
          xi[0], xi[1], xi[2], xi[3], h[0],   h[1],   h[2],   h[3]};
}

}  // namespace detail

ClosedFormConstants closed_form_constants(const InitialData& init) {
  if (branch_of(init) != SolutionBranch::xi3_nonzero) {
    throw DomainError("closed_form_constants: defined only for xi3 != 0");
  }
  const detail::Params p = detail::params_of(init);
  const double a = p.a, c = p.c, e = p.e, t0 = p.t0, P0 = p.P0, Q0 = p.Q0, V0 = p.V0;
  const double h1 = p.h1, h2 = p.h2, h4 = p.h4;
  const double r2 = std::numbers::sqrt2;
  const double c2 = c * c, c3 = c2 * c;
  ClosedFormConstants k{};

  k.L1 = 2 * r2 * Q0 * (a - c * t0);
  k.L2 = -2 * Q0 * e;
  k.L3 = 2 * r2 * h2 * (a - c * t0);
  k.L4 = -2 * e * h2;
  k.L5 = 2 * h2 * a / c - 4 * h2 * t0;

  k.M = 2 * a * h2 - 2 * c * (h1 + 2 * e * Q0 + 2 * h2 * t0) + 4 * c2 * V0;
  k.M1 = -2 * r2 * e * h2;
  k.M2 = -4 * h2 * (a - c * t0);

  k.A1 = h4 / (r2 * c) + k.M1 / (4 * c2);
  k.A2 = V0 - k.M / (2 * c2);
  k.K1 = k.A1;
  k.K2 = k.A2;
  k.K3 = k.M2 / (2 * r2 * c);
  k.K4 = -k.M1 / (2 * r2 * c);

  k.H1 = (-e * h2 + 4 * c * (h4 + 2 * Q0 * (a - c * t0))) / (2 * r2 * c);
  k.H2 = 2 * (h1 - a * h2 / c + e * Q0 + 2 * h2 * t0 - c * V0);
  k.H3 = -h1 - 2 * e * Q0 + 2 * a * h2 / c - 4 * h2 * t0 + 2 * c * V0;

  k.R1 = (8 * a * a * h2 - e * e * h2 + 4 * c * e * (h4 + c * (P0 + 4 * Q0 * t0)) +
          4 * c2 * t0 * (3 * h1 + 6 * h2 * t0 - 4 * c * V0) + 4 * a * c * (-2 * h1 - 2 * e * Q0 - 7 * h2 * t0 + 3 * c * V0)) /
         (r2 * c);
  k.R2 = (-7 * a * e * h2 - 8 * c3 * t0 * (P0 - 2 * Q0 * t0) +
          4 * c * (2 * e * e * Q0 + a * (3 * h4 + 4 * a * Q0) + e * (h1 + 3 * h2 * t0)) +
          8 * c2 * (-2 * h4 * t0 + a * (P0 - 4 * Q0 * t0) - e * V0)) /
         (2 * c);
  k.R3 = -2 * r2 * e * (-a * h2 + c * (h1 + 2 * e * Q0 + 2 * h2 * t0) - 2 * c2 * V0);
  k.R4 = 4 * (a - c * t0) * (a * h2 - c * (h1 + 2 * e * Q0 + 2 * h2 * t0) + 2 * c2 * V0);
  const double r5_bracket = -5 * a * e * h2 + 8 * c3 * Q0 * t0 * t0 +
                            c * (4 * e * e * Q0 + 4 * a * (h4 + 2 * a * Q0) + e * (4 * h1 + 9 * h2 * t0)) -
                            4 * c2 * (h4 * t0 + 4 * a * Q0 * t0 + e * V0);
  k.R5 = r5_bracket / c;
  k.R6 = (5 * a * e * h2 - 8 * c3 * Q0 * t0 * t0 -
          c * (4 * e * e * Q0 + 4 * a * (h4 + 2 * a * Q0) + e * (4 * h1 + 9 * h2 * t0)) +
          4 * c2 * (h4 * t0 + 4 * a * Q0 * t0 + e * V0)) /
         c;
  const double r7_rest = e * e * h2 - 4 * c * e * h4 + 8 * a * c * (h1 + 3 * h2 * t0 - c * V0) +
                         8 * c2 * t0 * (-h1 - 2 * h2 * t0 + c * V0);
  k.R7 = r2 / c * (-8 * a * a * h2 + r7_rest);
  k.R7_literal = r2 / c * ((-8 * a) * (-8 * a) * h2 + r7_rest);

  k.N1 = (e * e * h2 - 4 * c * e * (h4 + c * P0 + 2 * a * Q0) +
          4 * c * (a * h2 * t0 + c * (-h1 * t0 - 2 * h2 * t0 * t0 + a * V0))) /
         (2 * r2 * c3);
  k.N2 = (-a * e * h2 + 8 * c3 * t0 * (P0 - 2 * Q0 * t0) +
          4 * c * (2 * e * e * Q0 - a * (3 * h4 + 4 * a * Q0) + e * (h1 + h2 * t0)) -
          8 * c2 * (-2 * h4 * t0 + a * (P0 - 4 * Q0 * t0) + e * V0)) /
         (4 * c3);
  k.N3 = r2 * e * (-a * h2 + c * (h1 + 2 * e * Q0 + 2 * h2 * t0) - 2 * c2 * V0) / c2;
  k.N4 = -2 * (a - c * t0) * (a * h2 - c * (h1 + 2 * e * Q0 + 2 * h2 * t0) + 2 * c2 * V0) / c2;
  k.N5 = (8 * a * a * h2 - e * e * h2 + 4 * c * e * h4 + 8 * c2 * t0 * (h1 + 2 * h2 * t0 - c * V0) +
          8 * a * c * (-h1 - 3 * h2 * t0 + c * V0)) /
         (8 * r2 * c3);
  k.N6 = r5_bracket / (8 * c3);
  k.N7 = -(e * e * h2) / (4 * c2) + p.h3 + 2 * e * P0 + 2 * h1 * t0 + 4 * e * Q0 * t0 + 4 * h2 * t0 * t0 +
         (e * h4 - 2 * a * h2 * t0) / c - 2 * c * t0 * V0;
  return k;
}

SupplementaryNorm supplementary_norm(const Vec<double>& xi, const Vec<double>& h) {
  check_dim(xi.size(), 4, "supplementary_norm xi");
  check_dim(h.size(), 4, "supplementary_norm h");
  if (xi[2] == 0.0) {
    const double v = xi[0] * h[0] + xi[1] * h[1] + xi[3] * h[3];
    return {SolutionBranch::xi3_zero, v, v};
  }
  const double direct = 2 * (xi[0] * h[0] + xi[1] * h[1] + xi[2] * h[2] + xi[3] * h[3]);
  const double printed = direct + 3 * xi[3] * xi[3] * h[1] / (2 * xi[2]);
  return {SolutionBranch::xi3_nonzero, direct, printed};
}

namespace {

const D2& seeded_s(double s, D2& storage) {
  storage = D2(D1(s, 1.0), D1(1.0, 0.0));
  return storage;
}

Quad<double> residuals_of(const Quad<D2>& base, const Quad<D2>* fiber) {
  const int n = fiber ? 8 : 4;
  Vec<double> pos(n), vel(n), acc(n);
  for (int i = 0; i < 4; ++i) {
    pos[i] = base[i].v.v;
    vel[i] = base[i].v.d;
    acc[i] = base[i].d.d;
    if (fiber) {
      pos[4 + i] = (*fiber)[i].v.v;
      vel[4 + i] = (*fiber)[i].v.d;
      acc[4 + i] = (*fiber)[i].d.d;
    }
  }
  const Vec<double> rhs = acceleration_at<double>(pos, vel);
  Quad<double> r{};
  const int off = fiber ? 4 : 0;
  for (int i = 0; i < 4; ++i) r[i] = acc[off + i] - rhs[off + i];
  return r;
}

}  // namespace

ExtendedEvaluation extended_closed_form(const InitialData& init, double s, FiberVariant variant) {
  D2 sd;
  seeded_s(s, sd);
  const Quad<D2> base = basic_closed_form(init, sd);
  const Quad<D2> fiber = fiber_closed_form(init, sd, variant);
  ExtendedEvaluation out;
  for (int i = 0; i < 4; ++i) out.values[i] = fiber[i].v.v;
  out.residuals = residuals_of(base, &fiber);
  return out;
}

Quad<double> basic_residual(const InitialData& init, double s) {
  D2 sd;
  seeded_s(s, sd);
  return residuals_of(basic_closed_form(init, sd), nullptr);
}

Quad<double> vertex_residual(const Vec<double>& xi, const Vec<double>& h, double s) {
  D2 sd;
  seeded_s(s, sd);
  const InitialData init = InitialData::at_vertex(xi, h);
  const Quad<D2> base = basic_closed_form(init, sd);
  const Quad<D2> fiber = vertex_closed_form(xi, h, sd);
  return residuals_of(base, &fiber);
}

}  // namespace rext::antimach
