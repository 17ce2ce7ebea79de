#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rext/antimach.hpp"

namespace rext {

enum class BranchSelection { both, xi3_zero, xi3_nonzero };

BranchSelection parse_branch(const std::string& s);
std::string to_string(BranchSelection b);
std::string to_string(antimach::SolutionBranch b);

struct VerificationOptions {
  int trials = 20;
  std::uint64_t seed = 42;
  double tol = 1e-6;
  double oracle_tol = 1e-12;
  BranchSelection branches = BranchSelection::both;
  int samples = 100;       // uniform s-grid intervals per trial
  int trace_points = 9;    // residual trace length for flagged formulas
};

struct TracePoint {
  double s, closed_form, oracle, residual;
};

/// Comparison of one closed-form display against the numeric oracle.
struct FormulaCheck {
  std::string name;
  std::string description;
  int derivative_order = 0;  // 0: coordinate, 1: first derivative, 2: second
  double max_deviation = 0.0;
  /// Residual of the display's own geodesic equation with the remaining
  /// coordinates taken from the oracle (coordinates only).
  std::optional<double> max_residual_coupled;
  /// Residual with every coordinate taken from the same closed-form set.
  std::optional<double> max_residual_self;
  std::optional<double> initial_value_error;
  std::optional<double> initial_slope_error;
  bool pass = false;
  std::vector<TracePoint> trace;  // filled only when !pass
};

/// A check between two closed-form displays (no oracle involved).
struct ConsistencyCheck {
  std::string name;
  double max_abs = 0.0;
};

struct TrialReport {
  int index = 0;
  std::uint64_t seed = 0;
  antimach::SolutionBranch branch = antimach::SolutionBranch::xi3_zero;
  InitialData init;
  double s_max = 0.0;
  std::optional<antimach::ClosedFormConstants> constants;
  antimach::SupplementaryNorm vertex_norm{};
  double vertex_norm_shifted_h4 = 0.0;  // ĝ(ẏ,ẏ) at the vertex with h₄ + 3ξ⁴h₂/(4ξ³)
  double oracle_norm_drift = 0.0;
  std::vector<FormulaCheck> formulas;
  std::vector<ConsistencyCheck> consistency;
};

struct FormulaSummary {
  std::string name;
  antimach::SolutionBranch branch = antimach::SolutionBranch::xi3_zero;
  int trials = 0;
  int passed = 0;
  double max_deviation = 0.0;
  std::optional<double> max_residual_coupled;
  std::optional<double> max_residual_self;
};

struct VerificationReport {
  VerificationOptions options;
  std::vector<TrialReport> trials;
  std::vector<FormulaSummary> summary;
  bool all_pass = true;

  const FormulaSummary* find(const std::string& name, antimach::SolutionBranch branch) const;
  nlohmann::json to_json() const;
};

/// Draws random initial data per branch, integrates each geodesic
/// numerically and compares every closed-form display against it over one
/// period (ξ³ ≠ 0) or s ∈ [0, 2] (ξ³ = 0). Deviations above `tol` are
/// flagged with a residual trace; nothing is silently passed.
VerificationReport verify_closed_forms(const VerificationOptions& opts);
VerificationReport verify_closed_forms(int trials, std::uint64_t seed, double tol);

}  // namespace rext
