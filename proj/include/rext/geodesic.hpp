#pragma once

#include <functional>
#include <vector>

#include "rext/field.hpp"

namespace rext {

struct GeodesicState {
  double s = 0.0;
  ChartPoint position;
  Vec<double> velocity;
};

/// Initial point (x₀, Ψ₀) and initial directions (ξ, h) of an extended
/// geodesic. A base-only geodesic uses just x₀ and ξ.
struct InitialData {
  Vec<double> base_point;
  Vec<double> fiber_point;
  Vec<double> base_direction;
  Vec<double> fiber_direction;

  static InitialData zeros(int n);
  static InitialData at_vertex(const Vec<double>& xi, const Vec<double>& h);

  int base_dim() const { return static_cast<int>(base_point.size()); }
  /// Phase-space state at s = 0 on an n- (base) or 2n- (extended) chart.
  GeodesicState state(int dim) const;
};

/// Null, timelike or spacelike, as ε ∈ {0, +1, −1} of ĝ(ẏ, ẏ) = ε.
enum class GeodesicClass { null = 0, timelike = 1, spacelike = -1 };

/// Sign classification of an initial norm; |norm| < 1e-10 counts as null.
GeodesicClass classify(double norm);
int epsilon(GeodesicClass c);

/// Accepted step endpoint kept for dense output.
struct DenseKnot {
  double s;
  Vec<double> y;   // (position, velocity)
  Vec<double> dy;  // (velocity, acceleration)
};

struct Trajectory {
  std::vector<GeodesicState> samples;
  std::vector<double> sample_norms;  // empty unless a metric was monitored
  double initial_norm = 0.0;
  /// max over accepted steps of |ĝ(ẏ,ẏ) − initial_norm|; 0 when unmonitored.
  double norm_drift = 0.0;
  long accepted_steps = 0;
  long rejected_steps = 0;
  std::vector<DenseKnot> knots;

  /// Cubic Hermite interpolation between accepted steps.
  GeodesicState at(double s) const;
};

struct IntegrateOptions {
  double s_max = 1.0;
  double tol = 1e-10;
  /// Explicit output parameters in (0, s_max]; if empty, `samples` uniform
  /// intervals are used. s = 0 is always the first sample.
  std::vector<double> sample_points;
  int samples = 100;
  double min_step = 1e-14;
  long max_steps = 50'000'000;
  bool keep_knots = false;
};

/// Acceleration −Γ^k_ij ẏ^i ẏ^j.
Vec<double> geodesic_rhs(const ConnectionField& conn, const GeodesicState& state);

/// ĝ_ij(y) ẏ^i ẏ^j.
double conserved_norm(const MetricField& metric, const GeodesicState& state);

/// Integrate the geodesic system of `conn`. When `monitor` is given, the
/// quadratic form ĝ(ẏ,ẏ) is tracked on every accepted step (never enforced).
Trajectory integrate(const ConnectionField& conn, const GeodesicState& start,
                     const IntegrateOptions& opts, const MetricField* monitor = nullptr);

Trajectory integrate(const ConnectionField& conn, const InitialData& init, double s_max, double tol);

/// Integrate with the Levi-Civita connection of `metric`, monitoring its norm.
Trajectory integrate(const MetricField& metric, const InitialData& init, const IntegrateOptions& opts);

/// Generic first-order system y' = f(s, y).
using OdeSystem = std::function<void(double s, const Vec<double>& y, Vec<double>& dy)>;

/// Embedded Dormand-Prince 5(4) pair with PI step-size control. Output
/// points are hit exactly by shortening the step that would cross them.
class DormandPrince45 {
 public:
  struct Stats {
    long accepted = 0;
    long rejected = 0;
  };

  DormandPrince45(OdeSystem f, double tol, double min_step = 1e-14, long max_steps = 50'000'000);

  /// Advances from (s0, y0) through every point of `outputs` (ascending,
  /// > s0). `on_output` sees the state at each output; `on_step` sees every
  /// accepted step endpoint with its derivative.
  void run(double s0, const Vec<double>& y0, const std::vector<double>& outputs,
           const std::function<void(double, const Vec<double>&)>& on_output,
           const std::function<void(double, const Vec<double>&, const Vec<double>&)>& on_step);

  const Stats& stats() const { return stats_; }

 private:
  double initial_step(double s0, const Vec<double>& y0, const Vec<double>& f0, double span) const;
  double error_norm(const Vec<double>& err, const Vec<double>& y0, const Vec<double>& y1) const;

  OdeSystem f_;
  double tol_;
  double min_step_;
  long max_steps_;
  Stats stats_;
};

}  // namespace rext
