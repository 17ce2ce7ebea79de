#include "rext/geodesic.hpp"

#include <algorithm>
#include <cmath>

#include "rext/curvature.hpp"

namespace rext {

InitialData InitialData::zeros(int n) {
  InitialData d;
  d.base_point = Vec<double>::Zero(n);
  d.fiber_point = Vec<double>::Zero(n);
  d.base_direction = Vec<double>::Zero(n);
  d.fiber_direction = Vec<double>::Zero(n);
  return d;
}

InitialData InitialData::at_vertex(const Vec<double>& xi, const Vec<double>& h) {
  check_dim(h.size(), xi.size(), "InitialData::at_vertex");
  InitialData d = zeros(static_cast<int>(xi.size()));
  d.base_direction = xi;
  d.fiber_direction = h;
  return d;
}

GeodesicState InitialData::state(int dim) const {
  const int n = base_dim();
  check_dim(fiber_point.size(), n, "InitialData fiber_point");
  check_dim(base_direction.size(), n, "InitialData base_direction");
  check_dim(fiber_direction.size(), n, "InitialData fiber_direction");
  GeodesicState st;
  if (dim == n) {
    st.position = base_point;
    st.velocity = base_direction;
  } else if (dim == 2 * n) {
    st.position.resize(dim);
    st.velocity.resize(dim);
    st.position << base_point, fiber_point;
    st.velocity << base_direction, fiber_direction;
  } else {
    throw DimensionMismatch("InitialData: chart dimension " + std::to_string(dim) +
                            " is neither n nor 2n for n = " + std::to_string(n));
  }
  if (!st.position.allFinite() || !st.velocity.allFinite()) throw DomainError("InitialData: non-finite entry");
  return st;
}

GeodesicClass classify(double norm) {
  if (std::abs(norm) < 1e-10) return GeodesicClass::null;
  return norm > 0 ? GeodesicClass::timelike : GeodesicClass::spacelike;
}

int epsilon(GeodesicClass c) { return static_cast<int>(c); }

Vec<double> geodesic_rhs(const ConnectionField& conn, const GeodesicState& state) {
  const int n = conn.dim();
  check_dim(state.position.size(), n, "geodesic_rhs position");
  check_dim(state.velocity.size(), n, "geodesic_rhs velocity");
  const Tensor3<double> gamma = conn(state.position);
  const Vec<double>& v = state.velocity;
  Vec<double> acc = Vec<double>::Zero(n);
  for (int k = 0; k < n; ++k) {
    double a = 0.0;
    for (int i = 0; i < n; ++i) {
      if (v[i] == 0.0) continue;
      for (int j = 0; j < n; ++j) a += gamma(k, i, j) * v[i] * v[j];
    }
    acc[k] = -a;
  }
  return acc;
}

double conserved_norm(const MetricField& metric, const GeodesicState& state) {
  check_dim(state.position.size(), metric.dim(), "conserved_norm position");
  check_dim(state.velocity.size(), metric.dim(), "conserved_norm velocity");
  return state.velocity.dot(metric(state.position) * state.velocity);
}

// Dormand–Prince 5(4) tableau.
namespace {
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b − b̂ (fifth minus fourth order weights)
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

constexpr double kSafety = 0.9;
constexpr double kAlpha = 0.17;  // 1/5 − 0.75·β
constexpr double kBeta = 0.04;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 10.0;
}  // namespace

DormandPrince45::DormandPrince45(OdeSystem f, double tol, double min_step, long max_steps)
    : f_(std::move(f)), tol_(tol), min_step_(min_step), max_steps_(max_steps) {
  if (!(tol > 0.0)) throw DomainError("DormandPrince45: tol must be positive");
}

double DormandPrince45::error_norm(const Vec<double>& err, const Vec<double>& y0,
                                   const Vec<double>& y1) const {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double sc = tol_ + tol_ * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double r = err[i] / sc;
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(err.size()));
}

double DormandPrince45::initial_step(double s0, const Vec<double>& y0, const Vec<double>& f0,
                                     double span) const {
  auto scaled = [&](const Vec<double>& v) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const double sc = tol_ + tol_ * std::abs(y0[i]);
      sum += (v[i] / sc) * (v[i] / sc);
    }
    return std::sqrt(sum / static_cast<double>(v.size()));
  };
  const double d0 = scaled(y0);
  const double d1 = scaled(f0);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min(h0, span);
  Vec<double> y1 = y0 + h0 * f0;
  Vec<double> f1(y0.size());
  f_(s0 + h0, y1, f1);
  const double d2 = scaled(f1 - f0) / h0;
  const double dmax = std::max(d1, d2);
  const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 1.0 / 5.0);
  return std::min({100.0 * h0, h1, span});
}

void DormandPrince45::run(double s0, const Vec<double>& y0, const std::vector<double>& outputs,
                          const std::function<void(double, const Vec<double>&)>& on_output,
                          const std::function<void(double, const Vec<double>&, const Vec<double>&)>& on_step) {
  stats_ = {};
  if (outputs.empty()) return;
  const Eigen::Index n = y0.size();
  Vec<double> y = y0;
  Vec<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n), err(n);
  double s = s0;
  f_(s, y, k1);
  if (on_step) on_step(s, y, k1);

  double h = initial_step(s0, y0, k1, outputs.back() - s0);
  double err_old = 1e-4;
  bool last_rejected = false;
  size_t next = 0;
  long steps = 0;

  while (next < outputs.size()) {
    const double target = outputs[next];
    if (target <= s) {
      on_output(s, y);
      ++next;
      continue;
    }
    if (++steps > max_steps_) throw StepSizeUnderflow("DormandPrince45: step budget exhausted");
    if (h < min_step_) throw StepSizeUnderflow("DormandPrince45: required step below " + std::to_string(min_step_));
    bool hits = false;
    double step = h;
    if (s + step >= target) {
      step = target - s;
      hits = true;
    }

    ytmp = y + step * a21 * k1;
    f_(s + c2 * step, ytmp, k2);
    ytmp = y + step * (a31 * k1 + a32 * k2);
    f_(s + c3 * step, ytmp, k3);
    ytmp = y + step * (a41 * k1 + a42 * k2 + a43 * k3);
    f_(s + c4 * step, ytmp, k4);
    ytmp = y + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    f_(s + c5 * step, ytmp, k5);
    ytmp = y + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    f_(s + step, ytmp, k6);
    ynew = y + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    f_(s + step, ynew, k7);
    err = step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    const double en = error_norm(err, y, ynew);
    if (!std::isfinite(en) || !ynew.allFinite()) {
      throw NonFiniteState("DormandPrince45: non-finite state at s = " + std::to_string(s));
    }

    if (en <= 1.0) {
      const double fac11 = std::pow(std::max(en, 1e-16), kAlpha);
      double factor = 1.0 / (fac11 / std::pow(err_old, kBeta) / kSafety);
      factor = std::clamp(factor, kMinFactor, kMaxFactor);
      if (last_rejected) factor = std::min(factor, 1.0);
      err_old = std::max(en, 1e-4);
      s = hits ? target : s + step;
      y = ynew;
      k1 = k7;
      ++stats_.accepted;
      last_rejected = false;
      if (on_step) on_step(s, y, k1);
      // A clamped step does not shrink the controller's proposal.
      h = hits ? std::max(h, step * factor) : step * factor;
      if (hits) {
        on_output(s, y);
        ++next;
      }
    } else {
      const double factor = std::max(kMinFactor, kSafety / std::pow(en, kAlpha));
      h = step * factor;
      ++stats_.rejected;
      last_rejected = true;
    }
  }
}

GeodesicState Trajectory::at(double s) const {
  if (knots.size() < 2) throw DomainError("Trajectory::at: no dense output recorded");
  if (s < knots.front().s || s > knots.back().s) throw DomainError("Trajectory::at: s outside the integrated range");
  auto it = std::upper_bound(knots.begin(), knots.end(), s, [](double v, const DenseKnot& k) { return v < k.s; });
  if (it == knots.end()) --it;
  const DenseKnot& b = *it;
  const DenseKnot& a = *(it - 1);
  const double h = b.s - a.s;
  const double th = (s - a.s) / h;
  const double h00 = (1 + 2 * th) * (1 - th) * (1 - th);
  const double h10 = th * (1 - th) * (1 - th);
  const double h01 = th * th * (3 - 2 * th);
  const double h11 = th * th * (th - 1);
  const Vec<double> y = h00 * a.y + h10 * h * a.dy + h01 * b.y + h11 * h * b.dy;
  const Eigen::Index n = y.size() / 2;
  return {s, y.head(n), y.tail(n)};
}

Trajectory integrate(const ConnectionField& conn, const GeodesicState& start, const IntegrateOptions& opts,
                     const MetricField* monitor) {
  const int n = conn.dim();
  check_dim(start.position.size(), n, "integrate position");
  check_dim(start.velocity.size(), n, "integrate velocity");
  if (!(opts.s_max > 0.0)) throw DomainError("integrate: s_max must be positive");
  if (!(opts.tol > 0.0)) throw DomainError("integrate: tol must be positive");
  if (monitor) check_dim(monitor->dim(), n, "integrate monitor metric");

  std::vector<double> outputs = opts.sample_points;
  if (outputs.empty()) {
    const int m = std::max(1, opts.samples);
    for (int i = 1; i < m; ++i) outputs.push_back(opts.s_max * i / m);
    outputs.push_back(opts.s_max);
  }
  std::sort(outputs.begin(), outputs.end());
  outputs.erase(std::unique(outputs.begin(), outputs.end()), outputs.end());
  for (double o : outputs) {
    if (!(o > 0.0) || o > opts.s_max) throw DomainError("integrate: sample points must lie in (0, s_max]");
  }

  OdeSystem rhs = [&conn, n](double, const Vec<double>& y, Vec<double>& dy) {
    GeodesicState st{0.0, y.head(n), y.tail(n)};
    dy.resize(2 * n);
    dy.head(n) = st.velocity;
    dy.tail(n) = geodesic_rhs(conn, st);
  };

  Trajectory traj;
  Vec<double> y0(2 * n);
  y0 << start.position, start.velocity;
  auto norm_of = [&](const Vec<double>& y) {
    return conserved_norm(*monitor, GeodesicState{0.0, y.head(n), y.tail(n)});
  };
  if (monitor) traj.initial_norm = norm_of(y0);

  auto record = [&](double s, const Vec<double>& y) {
    traj.samples.push_back({start.s + s, y.head(n), y.tail(n)});
    if (monitor) traj.sample_norms.push_back(norm_of(y));
  };
  record(0.0, y0);

  DormandPrince45 dp(rhs, opts.tol, opts.min_step, opts.max_steps);
  dp.run(0.0, y0, outputs, record, [&](double s, const Vec<double>& y, const Vec<double>& dy) {
    if (monitor) traj.norm_drift = std::max(traj.norm_drift, std::abs(norm_of(y) - traj.initial_norm));
    if (opts.keep_knots) traj.knots.push_back({start.s + s, y, dy});
  });
  traj.accepted_steps = dp.stats().accepted;
  traj.rejected_steps = dp.stats().rejected;
  return traj;
}

Trajectory integrate(const ConnectionField& conn, const InitialData& init, double s_max, double tol) {
  IntegrateOptions opts;
  opts.s_max = s_max;
  opts.tol = tol;
  return integrate(conn, init.state(conn.dim()), opts);
}

Trajectory integrate(const MetricField& metric, const InitialData& init, const IntegrateOptions& opts) {
  const ConnectionField conn = levi_civita(metric);
  return integrate(conn, init.state(metric.dim()), opts, &metric);
}

}  // namespace rext
