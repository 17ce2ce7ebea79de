#include "rext/verification.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>

#include "rext/parallel.hpp"
#include "rext/random.hpp"

namespace rext {

using antimach::Jet;
using antimach::SolutionBranch;

BranchSelection parse_branch(const std::string& s) {
  if (s == "both") return BranchSelection::both;
  if (s == "xi3-zero" || s == "zero") return BranchSelection::xi3_zero;
  if (s == "xi3-nonzero" || s == "nonzero") return BranchSelection::xi3_nonzero;
  throw ConfigError("unknown branch '" + s + "' (expected both, xi3-zero, xi3-nonzero)");
}

std::string to_string(BranchSelection b) {
  switch (b) {
    case BranchSelection::both: return "both";
    case BranchSelection::xi3_zero: return "xi3-zero";
    case BranchSelection::xi3_nonzero: return "xi3-nonzero";
  }
  return "?";
}

std::string to_string(SolutionBranch b) { return b == SolutionBranch::xi3_zero ? "xi3-zero" : "xi3-nonzero"; }

namespace {

using ClosedForm = std::function<D2(const D2&)>;

/// Closed form of a scalar quantity together with what it is compared to.
struct FormulaSpec {
  std::string name;
  std::string description;
  int derivative_order = 0;
  int coordinate = 0;      // extended-chart index the quantity refers to
  ClosedForm closed;
  const Trajectory* oracle = nullptr;
  std::function<double(double)> self_residual;  // optional
  double init_value = 0.0;  // expected value at s = 0 (coordinates)
  double init_slope = 0.0;  // expected derivative at s = 0 (coordinates)
};

Jet jet_of(const ClosedForm& f, double s) {
  return antimach::jet([&](const D2& x) { return f(x); }, s);
}

double oracle_quantity(const FormulaSpec& spec, const GeodesicState& st) {
  switch (spec.derivative_order) {
    case 0: return st.position[spec.coordinate];
    case 1: return st.velocity[spec.coordinate];
    default: return antimach::acceleration_at<double>(st.position, st.velocity)[spec.coordinate];
  }
}

double coupled_residual(const FormulaSpec& spec, const Jet& j, const GeodesicState& st) {
  Vec<double> pos = st.position;
  Vec<double> vel = st.velocity;
  pos[spec.coordinate] = j.value;
  vel[spec.coordinate] = j.first;
  return j.second - antimach::acceleration_at<double>(pos, vel)[spec.coordinate];
}

std::vector<TracePoint> thin_trace(const std::vector<TracePoint>& all, int points) {
  std::vector<TracePoint> out;
  if (all.empty()) return out;
  const size_t m = static_cast<size_t>(std::max(2, points));
  for (size_t i = 0; i < m; ++i) out.push_back(all[(all.size() - 1) * i / (m - 1)]);
  return out;
}

FormulaCheck run_check(const FormulaSpec& spec, double tol, int trace_points) {
  FormulaCheck out;
  out.name = spec.name;
  out.description = spec.description;
  out.derivative_order = spec.derivative_order;
  const auto& samples = spec.oracle->samples;
  std::vector<TracePoint> all;
  all.reserve(samples.size());
  double coupled = 0.0;
  double self = 0.0;
  for (const auto& st : samples) {
    const Jet j = jet_of(spec.closed, st.s);
    const double ref = oracle_quantity(spec, st);
    double res = std::nan("");
    if (spec.derivative_order == 0) {
      res = coupled_residual(spec, j, st);
      coupled = std::max(coupled, std::abs(res));
    }
    if (spec.self_residual) self = std::max(self, std::abs(spec.self_residual(st.s)));
    out.max_deviation = std::max(out.max_deviation, std::abs(j.value - ref));
    if (!std::isfinite(j.value)) out.max_deviation = std::numeric_limits<double>::infinity();
    all.push_back({st.s, j.value, ref, res});
  }
  if (spec.derivative_order == 0) {
    out.max_residual_coupled = coupled;
    const Jet j0 = jet_of(spec.closed, 0.0);
    out.initial_value_error = std::abs(j0.value - spec.init_value);
    out.initial_slope_error = std::abs(j0.first - spec.init_slope);
  }
  if (spec.self_residual) out.max_residual_self = self;
  out.pass = out.max_deviation <= tol;
  if (!out.pass) out.trace = thin_trace(all, trace_points);
  return out;
}

InitialData random_init(Sampler& rng, SolutionBranch branch) {
  InitialData d = InitialData::zeros(4);
  d.base_point = rng.uniform_vec(4, -1.0, 1.0);
  d.fiber_point = rng.uniform_vec(4, -1.0, 1.0);
  d.base_direction = rng.uniform_vec(4, -1.0, 1.0);
  d.fiber_direction = rng.uniform_vec(4, -1.0, 1.0);
  if (branch == SolutionBranch::xi3_zero) {
    d.base_direction[2] = 0.0;
  } else {
    const double mag = rng.uniform(0.2, 2.0);
    d.base_direction[2] = rng.uniform01() < 0.5 ? -mag : mag;
  }
  return d;
}

Trajectory run_oracle(const MetricField& g8, const InitialData& init, double s_max, const VerificationOptions& opts) {
  IntegrateOptions io;
  io.s_max = s_max;
  io.tol = opts.oracle_tol;
  io.samples = opts.samples;
  return integrate(g8, init, io);
}

/// Pdot written with the L constants contains V itself; V is read from the
/// oracle so that only the L-constant terms are under test.
FormulaCheck check_pdot_l(const InitialData& init, const Trajectory& oracle, const VerificationOptions& opts) {
  FormulaCheck fc;
  fc.name = "Pdot_L";
  fc.description = "Pdot with L1..L4 and 2 xi3 (V - V0), V from the oracle";
  fc.derivative_order = 1;
  std::vector<TracePoint> all;
  for (const auto& st : oracle.samples) {
    const double val = antimach::pdot_l_form(init, st.s, st.position[7]);
    const double ref = st.velocity[4];
    fc.max_deviation = std::max(fc.max_deviation, std::abs(val - ref));
    all.push_back({st.s, val, ref, std::nan("")});
  }
  fc.pass = fc.max_deviation <= opts.tol;
  if (!fc.pass) fc.trace = thin_trace(all, opts.trace_points);
  return fc;
}

/// Relations between displays that must hold if they were derived from each
/// other: U'' against the R-expansion (both R7 readings), P' against the
/// H-form Pdot (both frequency readings) and the N5/R7 integration relation.
std::vector<ConsistencyCheck> consistency_checks(const InitialData& init, const Trajectory& grid) {
  namespace am = antimach;
  const am::ClosedFormConstants k = am::closed_form_constants(init);
  const double c = init.base_direction[2];
  ConsistencyCheck u_r{"U'' - Udd_R (R7 leading term -8 (xi1)^2 h2)"};
  ConsistencyCheck u_lit{"U'' - Udd_R (R7 leading term (-8 xi1)^2 h2)"};
  ConsistencyCheck p_xi3{"P' - Pdot_H (frequency sqrt2 xi3)"};
  ConsistencyCheck p_h3{"P' - Pdot_H (frequency sqrt2 h3)"};
  const bool have_h3 = init.fiber_direction[2] != 0.0;
  for (const auto& st : grid.samples) {
    const Jet u = am::jet([&](const D2& s) { return am::fiber_closed_form(init, s)[2]; }, st.s);
    u_r.max_abs = std::max(u_r.max_abs, std::abs(u.second - am::udd_r_form(init, st.s, false)));
    u_lit.max_abs = std::max(u_lit.max_abs, std::abs(u.second - am::udd_r_form(init, st.s, true)));
    const Jet p = am::jet([&](const D2& s) { return am::fiber_closed_form(init, s)[0]; }, st.s);
    const double pdot = am::pdot_h_form(init, st.s);
    p_xi3.max_abs = std::max(p_xi3.max_abs, std::abs(p.first - pdot));
    if (have_h3) {
      const Jet ph = am::jet([&](const D2& s) { return am::p_h3_reading(init, s); }, st.s);
      p_h3.max_abs = std::max(p_h3.max_abs, std::abs(ph.first - pdot));
    }
  }
  std::vector<ConsistencyCheck> out{u_r, u_lit, p_xi3};
  if (have_h3) out.push_back(p_h3);
  out.push_back({"N5 + R7/(16 xi3^2) (R7 leading term -8 (xi1)^2 h2)", std::abs(k.N5 + k.R7 / (16 * c * c))});
  out.push_back({"N5 + R7/(16 xi3^2) (R7 leading term (-8 xi1)^2 h2)", std::abs(k.N5 + k.R7_literal / (16 * c * c))});
  return out;
}

TrialReport run_trial(int index, SolutionBranch branch, const VerificationOptions& opts, const MetricField& g8) {
  namespace am = antimach;
  TrialReport rep;
  rep.index = index;
  rep.seed = trial_seed(opts.seed, static_cast<std::uint64_t>(index));
  rep.branch = branch;
  Sampler rng(rep.seed);
  rep.init = random_init(rng, branch);
  const InitialData& init = rep.init;
  const double c = init.base_direction[2];
  rep.s_max = branch == SolutionBranch::xi3_zero ? 2.0 : 2.0 * std::numbers::pi / (std::numbers::sqrt2 * std::abs(c));
  rep.vertex_norm = am::supplementary_norm(init.base_direction, init.fiber_direction);

  const Trajectory oracle = run_oracle(g8, init, rep.s_max, opts);
  rep.oracle_norm_drift = oracle.norm_drift;

  Vec<double> y0(8), v0(8);
  y0 << init.base_point, init.fiber_point;
  v0 << init.base_direction, init.fiber_direction;

  std::vector<FormulaSpec> specs;
  auto coord = [&](std::string name, std::string desc, int k, ClosedForm f, const Trajectory* orc,
                   std::function<double(double)> self, const Vec<double>& iv, const Vec<double>& is) {
    FormulaSpec sp{std::move(name), std::move(desc), 0, k, std::move(f), orc, std::move(self), iv[k], is[k]};
    specs.push_back(std::move(sp));
  };

  const std::array<const char*, 4> base_names{"x", "y", "z", "t"};
  const std::array<const char*, 4> fiber_names{"P", "Q", "U", "V"};
  const bool zero = branch == SolutionBranch::xi3_zero;

  for (int k = 0; k < 4; ++k) {
    coord(base_names[k], zero ? "polynomial base geodesic" : "trigonometric base geodesic", k,
          [&init, k](const D2& s) { return am::basic_closed_form(init, s)[k]; }, &oracle,
          [&init, k](double s) { return am::basic_residual(init, s)[k]; }, y0, v0);
  }

  using VForm = am::FiberVariant::VForm;
  auto general_self = [&init](int k, VForm form) {
    return [&init, k, form](double s) { return am::extended_closed_form(init, s, {form}).residuals[k]; };
  };
  if (zero) {
    for (int k = 0; k < 4; ++k) {
      coord(fiber_names[k], "polynomial fiber solution", 4 + k,
            [&init, k](const D2& s) { return am::fiber_closed_form(init, s)[k]; }, &oracle,
            general_self(k, VForm::printed_k), y0, v0);
    }
  } else {
    rep.constants = am::closed_form_constants(init);
    coord("Q", "Q = Q0 + h2 s", 5, [&init](const D2& s) { return am::fiber_closed_form(init, s)[1]; }, &oracle,
          general_self(1, VForm::printed_k), y0, v0);
    coord("V", "V with K1..K4 (no constant term)", 7,
          [&init](const D2& s) { return am::fiber_closed_form(init, s)[3]; }, &oracle,
          general_self(3, VForm::printed_k), y0, v0);
    coord("V_A", "V with A1, A2 and constant M/(2 xi3^2)", 7,
          [&init](const D2& s) { return am::fiber_closed_form(init, s, {VForm::with_a_constants})[3]; }, &oracle,
          general_self(3, VForm::with_a_constants), y0, v0);
    coord("P", "P with H1..H3, frequency sqrt2 xi3", 4,
          [&init](const D2& s) { return am::fiber_closed_form(init, s)[0]; }, &oracle,
          general_self(0, VForm::printed_k), y0, v0);
    if (init.fiber_direction[2] != 0.0) {
      coord("P_h3_reading", "antiderivative of the H-form Pdot with frequency sqrt2 h3", 4,
            [&init](const D2& s) { return am::p_h3_reading(init, s); }, &oracle, {}, y0, v0);
    }
    coord("U", "U with N1..N7", 6, [&init](const D2& s) { return am::fiber_closed_form(init, s)[2]; }, &oracle,
          general_self(2, VForm::printed_k), y0, v0);

    // Derivative displays, compared against the oracle's Pdot and Uddot.
    specs.push_back({"Pdot_H", "Pdot with H1..H3", 1, 4,
                     [&init](const D2& s) { return am::pdot_h_form(init, s); }, &oracle, {}, 0.0, 0.0});
    specs.push_back({"Udd_R", "Uddot with R1..R7, R7 leading term -8 (xi1)^2 h2", 2, 6,
                     [&init](const D2& s) { return am::udd_r_form(init, s, false); }, &oracle, {}, 0.0, 0.0});
    specs.push_back({"Udd_R_literal", "Uddot with R7 leading term (-8 xi1)^2 h2", 2, 6,
                     [&init](const D2& s) { return am::udd_r_form(init, s, true); }, &oracle, {}, 0.0, 0.0});
  }

  // Vertex-reduced forms against a vertex oracle, and against an oracle with
  // the initial Vdot shifted by 3 xi4 h2 / (4 xi3).
  Trajectory vertex_oracle;
  Trajectory shifted_oracle;
  InitialData vertex_init = InitialData::at_vertex(init.base_direction, init.fiber_direction);
  InitialData shifted_init = vertex_init;
  if (!zero) {
    const Vec<double>& xi = init.base_direction;
    const Vec<double>& h = init.fiber_direction;
    shifted_init.fiber_direction[3] += 3.0 * xi[3] * h[1] / (4.0 * xi[2]);
    rep.vertex_norm_shifted_h4 = 2.0 * (xi[0] * h[0] + xi[1] * h[1] + xi[2] * h[2] + xi[3] * shifted_init.fiber_direction[3]);
    vertex_oracle = run_oracle(g8, vertex_init, rep.s_max, opts);
    shifted_oracle = run_oracle(g8, shifted_init, rep.s_max, opts);
    const Vec<double> zero8 = Vec<double>::Zero(8);
    Vec<double> vv(8), vs(8);
    vv << vertex_init.base_direction, vertex_init.fiber_direction;
    vs << shifted_init.base_direction, shifted_init.fiber_direction;
    for (int k = 0; k < 4; ++k) {
      auto closed = [&init, k](const D2& s) {
        return am::vertex_closed_form(init.base_direction, init.fiber_direction, s)[k];
      };
      auto self = [&init, k](double s) {
        return am::vertex_residual(init.base_direction, init.fiber_direction, s)[k];
      };
      coord(std::string("vertex_") + fiber_names[k], "vertex-reduced form", 4 + k, closed, &vertex_oracle, self,
            zero8, vv);
      coord(std::string("vertex_") + fiber_names[k] + "_shifted_h4",
            "vertex-reduced form vs oracle with h4 + 3 xi4 h2/(4 xi3)", 4 + k, closed, &shifted_oracle, self, zero8,
            vs);
    }
  }

  for (const auto& spec : specs) rep.formulas.push_back(run_check(spec, opts.tol, opts.trace_points));
  if (!zero) {
    rep.formulas.push_back(check_pdot_l(init, oracle, opts));
    rep.consistency = consistency_checks(init, oracle);
  }
  return rep;
}

nlohmann::json opt_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::vector<double> to_std(const Vec<double>& v) { return {v.data(), v.data() + v.size()}; }

nlohmann::json constants_json(const antimach::ClosedFormConstants& k) {
  return {{"L", {k.L1, k.L2, k.L3, k.L4, k.L5}},
          {"M", {k.M, k.M1, k.M2}},
          {"A", {k.A1, k.A2}},
          {"K", {k.K1, k.K2, k.K3, k.K4}},
          {"H", {k.H1, k.H2, k.H3}},
          {"R", {k.R1, k.R2, k.R3, k.R4, k.R5, k.R6, k.R7}},
          {"R7_literal", k.R7_literal},
          {"N", {k.N1, k.N2, k.N3, k.N4, k.N5, k.N6, k.N7}}};
}

}  // namespace

const FormulaSummary* VerificationReport::find(const std::string& name, SolutionBranch branch) const {
  for (const auto& s : summary)
    if (s.name == name && s.branch == branch) return &s;
  return nullptr;
}

VerificationReport verify_closed_forms(const VerificationOptions& opts) {
  if (opts.trials < 1) throw ConfigError("verify: trials must be >= 1");
  if (!(opts.tol > 0.0)) throw ConfigError("verify: tol must be positive");
  if (!(opts.oracle_tol > 0.0)) throw ConfigError("verify: oracle tol must be positive");
  if (opts.samples < 1) throw ConfigError("verify: samples must be >= 1");

  std::vector<SolutionBranch> plan;
  if (opts.branches != BranchSelection::xi3_nonzero)
    for (int i = 0; i < opts.trials; ++i) plan.push_back(SolutionBranch::xi3_zero);
  if (opts.branches != BranchSelection::xi3_zero)
    for (int i = 0; i < opts.trials; ++i) plan.push_back(SolutionBranch::xi3_nonzero);

  const MetricField g8 = antimach::metric8();
  VerificationReport rep;
  rep.options = opts;
  rep.trials.resize(plan.size());
  parallel_for(plan.size(), [&](size_t i) { rep.trials[i] = run_trial(static_cast<int>(i), plan[i], opts, g8); });

  std::map<std::pair<int, std::string>, size_t> slot;
  for (const auto& t : rep.trials) {
    for (const auto& f : t.formulas) {
      auto [it, inserted] = slot.try_emplace({static_cast<int>(t.branch), f.name}, rep.summary.size());
      if (inserted) {
        FormulaSummary fresh;
        fresh.name = f.name;
        fresh.branch = t.branch;
        rep.summary.push_back(std::move(fresh));
      }
      FormulaSummary& s = rep.summary[it->second];
      ++s.trials;
      if (f.pass) ++s.passed;
      else rep.all_pass = false;
      s.max_deviation = std::max(s.max_deviation, f.max_deviation);
      if (f.max_residual_coupled) s.max_residual_coupled = std::max(s.max_residual_coupled.value_or(0.0), *f.max_residual_coupled);
      if (f.max_residual_self) s.max_residual_self = std::max(s.max_residual_self.value_or(0.0), *f.max_residual_self);
    }
  }
  return rep;
}

VerificationReport verify_closed_forms(int trials, std::uint64_t seed, double tol) {
  VerificationOptions o;
  o.trials = trials;
  o.seed = seed;
  o.tol = tol;
  return verify_closed_forms(o);
}

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json trials_json = nlohmann::json::array();
  for (const auto& t : trials) {
    nlohmann::json formulas = nlohmann::json::array();
    for (const auto& f : t.formulas) {
      nlohmann::json trace = nlohmann::json::array();
      for (const auto& p : f.trace) {
        trace.push_back({{"s", p.s},
                         {"closed_form", p.closed_form},
                         {"oracle", p.oracle},
                         {"residual", std::isfinite(p.residual) ? nlohmann::json(p.residual) : nlohmann::json(nullptr)}});
      }
      nlohmann::json fj = {{"name", f.name},
                           {"description", f.description},
                           {"derivative_order", f.derivative_order},
                           {"max_deviation", f.max_deviation},
                           {"max_residual_coupled", opt_json(f.max_residual_coupled)},
                           {"max_residual_self", opt_json(f.max_residual_self)},
                           {"initial_value_error", opt_json(f.initial_value_error)},
                           {"initial_slope_error", opt_json(f.initial_slope_error)},
                           {"pass", f.pass}};
      if (!f.pass) fj["residual_trace"] = trace;
      formulas.push_back(std::move(fj));
    }
    nlohmann::json tj = {{"index", t.index},
                         {"seed", t.seed},
                         {"branch", to_string(t.branch)},
                         {"init",
                          {{"x0", to_std(t.init.base_point)},
                           {"psi0", to_std(t.init.fiber_point)},
                           {"xi", to_std(t.init.base_direction)},
                           {"h", to_std(t.init.fiber_direction)}}},
                         {"s_max", t.s_max},
                         {"oracle_norm_drift", t.oracle_norm_drift},
                         {"vertex_norm",
                          {{"evaluated", t.vertex_norm.evaluated},
                           {"printed", t.vertex_norm.printed},
                           {"discrepancy", t.vertex_norm.discrepancy()}}},
                         {"formulas", formulas}};
    if (!t.consistency.empty()) {
      nlohmann::json cj = nlohmann::json::array();
      for (const auto& c : t.consistency) cj.push_back({{"name", c.name}, {"max_abs", c.max_abs}});
      tj["consistency"] = cj;
    }
    if (t.branch == SolutionBranch::xi3_nonzero) tj["vertex_norm"]["with_shifted_h4"] = t.vertex_norm_shifted_h4;
    if (t.constants) tj["constants"] = constants_json(*t.constants);
    trials_json.push_back(std::move(tj));
  }
  nlohmann::json summary_json = nlohmann::json::array();
  for (const auto& s : summary) {
    summary_json.push_back({{"name", s.name},
                            {"branch", to_string(s.branch)},
                            {"trials", s.trials},
                            {"passed", s.passed},
                            {"verdict", s.passed == s.trials ? "agrees" : "flagged"},
                            {"max_deviation", s.max_deviation},
                            {"max_residual_coupled", opt_json(s.max_residual_coupled)},
                            {"max_residual_self", opt_json(s.max_residual_self)}});
  }
  return {{"schema", 1},
          {"kind", "closed_form_verification"},
          {"generator", Sampler::kAlgorithm},
          {"seed", options.seed},
          {"trials_per_branch", options.trials},
          {"branch", to_string(options.branches)},
          {"tol", options.tol},
          {"oracle_tol", options.oracle_tol},
          {"samples", options.samples},
          {"all_pass", all_pass},
          {"summary", summary_json},
          {"trials", trials_json}};
}

}  // namespace rext
