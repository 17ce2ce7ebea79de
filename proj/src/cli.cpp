#include "rext/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "rext/antimach.hpp"
#include "rext/curvature.hpp"
#include "rext/extension.hpp"
#include "rext/format.hpp"
#include "rext/parallel.hpp"
#include "rext/random.hpp"
#include "rext/registry.hpp"
#include "rext/surfaces.hpp"
#include "rext/verification.hpp"

namespace rext::cli {

using nlohmann::json;

Command parse_command(const std::string& s) {
  if (s == "christoffel") return Command::christoffel;
  if (s == "ricci") return Command::ricci;
  if (s == "kretschmann") return Command::kretschmann;
  if (s == "extend") return Command::extend;
  if (s == "geodesic") return Command::geodesic;
  if (s == "verify") return Command::verify;
  if (s == "surface") return Command::surface;
  throw ConfigError("unknown command '" + s + "'");
}

Format parse_format(const std::string& s) {
  if (s == "json") return Format::json;
  if (s == "csv") return Format::csv;
  if (s == "jsonl") return Format::jsonl;
  throw ConfigError("unknown format '" + s + "' (expected json, csv, jsonl)");
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size() && item.find_first_not_of(' ', used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("cannot parse number '" + item + "' in list '" + s + "'");
    }
  }
  return out;
}

void RunConfig::validate() const {
  if (tol && !(*tol > 0.0)) throw ConfigError("--tol must be positive");
  if (!(oracle_tol > 0.0)) throw ConfigError("--oracle-tol must be positive");
  if (trials < 1) throw ConfigError("--trials must be >= 1");
  if (samples < 1) throw ConfigError("--samples must be >= 1");
  if (grid < 1) throw ConfigError("--grid must be >= 1");
  if (!(s_max > 0.0)) throw ConfigError("--s-max must be positive");
  if (!(range > 0.0)) throw ConfigError("--range must be positive");
  if (domain.size() != 4 || !(domain[0] < domain[1]) || !(domain[2] < domain[3])) {
    throw ConfigError("--domain must be u0,u1,v0,v1 with u0 < u1 and v0 < v1");
  }
  if (point.empty() && points.rfind("random:", 0) != 0) throw ConfigError("--points must be random:N");
  if (format) {
    const bool tabular = command == Command::geodesic || command == Command::surface;
    if (*format == Format::csv && !tabular) throw ConfigError("--format csv is only available for geodesic and surface");
    if (*format == Format::jsonl && command != Command::geodesic) throw ConfigError("--format jsonl is only available for geodesic");
  }
  parse_branch(branch);
}

namespace {

std::vector<double> to_std(const Vec<double>& v) { return {v.data(), v.data() + v.size()}; }

Vec<double> to_vec(const std::vector<double>& v) {
  return Eigen::Map<const Vec<double>>(v.data(), static_cast<Eigen::Index>(v.size()));
}

RegistryEntry lookup(const RunConfig& c) {
  return c.metric_file.empty() ? registry_lookup(c.metric_id) : registry_from_file(c.metric_file);
}

std::vector<ChartPoint> select_points(const RunConfig& c, int dim) {
  if (!c.point.empty()) {
    check_dim(static_cast<Eigen::Index>(c.point.size()), dim, "--point");
    return {to_vec(c.point)};
  }
  int count = 0;
  try {
    count = std::stoi(c.points.substr(7));
  } catch (const std::exception&) {
    throw ConfigError("--points: cannot parse '" + c.points + "'");
  }
  if (count < 1) throw ConfigError("--points: count must be >= 1");
  Sampler rng(c.seed);
  std::vector<ChartPoint> pts;
  for (int i = 0; i < count; ++i) pts.push_back(rng.uniform_vec(dim, -c.range, c.range));
  return pts;
}

json header(const RunConfig& c, const char* command, const RegistryEntry& e) {
  return {{"schema", 1},
          {"command", command},
          {"metric", e.id},
          {"coordinates", e.coordinates},
          {"generator", Sampler::kAlgorithm},
          {"seed", c.seed}};
}

void emit_json(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

int cmd_christoffel(const RunConfig& c, std::ostream& out) {
  const RegistryEntry e = lookup(c);
  const auto pts = select_points(c, e.metric.dim());
  const int n = e.metric.dim();
  std::vector<json> rows(pts.size());
  parallel_for(pts.size(), [&](size_t i) {
    const Tensor3<double> gamma = christoffel(e.metric, pts[i]);
    json nz = json::array();
    for (int k = 0; k < n; ++k)
      for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b)
          if (gamma(k, a, b) != 0.0) {
            nz.push_back({{"k", k}, {"i", a}, {"j", b}, {"value", gamma(k, a, b)}});
          }
    rows[i] = {{"point", to_std(pts[i])}, {"nonzero", nz}};
  });
  json j = header(c, "christoffel", e);
  j["index_order"] = "Gamma^k_ij, i <= j";
  j["points"] = rows;
  emit_json(out, j);
  return kExitOk;
}

int cmd_ricci(const RunConfig& c, std::ostream& out) {
  const RegistryEntry e = lookup(c);
  const double tol = c.tol.value_or(1e-10);
  const auto pts = select_points(c, e.metric.dim());
  const ConnectionField conn = levi_civita(e.metric);
  std::vector<double> maxima(pts.size());
  parallel_for(pts.size(), [&](size_t i) { maxima[i] = ricci_tensor(conn, pts[i]).cwiseAbs().maxCoeff(); });
  json rows = json::array();
  double worst = 0.0;
  for (size_t i = 0; i < pts.size(); ++i) {
    rows.push_back({{"point", to_std(pts[i])}, {"max_abs_ricci", maxima[i]}, {"pass", maxima[i] <= tol}});
    worst = std::max(worst, maxima[i]);
  }
  json j = header(c, "ricci", e);
  j["tol"] = tol;
  j["max_abs_ricci"] = worst;
  j["all_pass"] = worst <= tol;
  j["points"] = rows;
  emit_json(out, j);
  return worst <= tol ? kExitOk : kExitFlagged;
}

int cmd_kretschmann(const RunConfig& c, std::ostream& out) {
  const RegistryEntry e = lookup(c);
  const auto pts = select_points(c, e.metric.dim());
  std::vector<double> k(pts.size());
  parallel_for(pts.size(), [&](size_t i) { k[i] = kretschmann(e.metric, pts[i]); });
  json rows = json::array();
  bool ok = true;
  for (size_t i = 0; i < pts.size(); ++i) {
    json r = {{"point", to_std(pts[i])}, {"kretschmann", k[i]}};
    if (c.tol) {
      r["pass"] = std::abs(k[i]) <= *c.tol;
      ok = ok && std::abs(k[i]) <= *c.tol;
    }
    rows.push_back(r);
  }
  json j = header(c, "kretschmann", e);
  if (c.tol) {
    j["tol"] = *c.tol;
    j["all_pass"] = ok;
  }
  j["points"] = rows;
  emit_json(out, j);
  return ok ? kExitOk : kExitFlagged;
}

int cmd_extend(const RunConfig& c, std::ostream& out) {
  const RegistryEntry e = lookup(c);
  const int n = e.connection.dim();
  ExtendedChart chart = e.id == "antimach4" ? ExtendedChart::antimach() : ExtendedChart::generic(n);
  if (e.id != "antimach4") {
    chart.base_names = e.coordinates;
    for (int i = 0; i < n; ++i) chart.fiber_names[i] = "psi_" + e.coordinates[i];
  }
  const auto pts = select_points(c, 2 * n);
  json rows = json::array();
  for (const auto& p : pts) rows.push_back(extended_components_json(e.connection, chart, p));
  json j = header(c, "extend", e);
  j["coordinates"] = chart.names();
  j["points"] = rows;
  emit_json(out, j);
  return kExitOk;
}

InitialData geodesic_init(const RunConfig& c, int metric_dim) {
  size_t n = std::max({c.x0.size(), c.psi0.size(), c.xi.size(), c.h.size()});
  if (n == 0) n = static_cast<size_t>(metric_dim);
  const bool extended = c.psi0.size() + c.h.size() > 0 || static_cast<int>(n) * 2 == metric_dim;
  if (extended && static_cast<int>(n) * 2 != metric_dim && static_cast<int>(n) == metric_dim) {
    throw ConfigError("--psi0/--h given for a metric that is not an extension");
  }
  InitialData d = InitialData::zeros(static_cast<int>(n));
  auto fill = [n](const std::vector<double>& src, Vec<double>& dst, const char* flag) {
    if (src.empty()) return;
    if (src.size() != n) throw ConfigError(std::string(flag) + ": expected " + std::to_string(n) + " values");
    dst = to_vec(src);
  };
  fill(c.x0, d.base_point, "--x0");
  fill(c.psi0, d.fiber_point, "--psi0");
  fill(c.xi, d.base_direction, "--xi");
  fill(c.h, d.fiber_direction, "--h");
  return d;
}

int cmd_geodesic(const RunConfig& c, std::ostream& out) {
  const RegistryEntry e = lookup(c);
  const int dim = e.metric.dim();
  const InitialData init = geodesic_init(c, dim);
  IntegrateOptions io;
  io.s_max = c.s_max;
  io.tol = c.tol.value_or(1e-12);
  io.samples = c.samples;
  const Trajectory tr = integrate(e.connection, init.state(dim), io, &e.metric);
  const Format fmt = c.format.value_or(Format::csv);

  if (fmt == Format::csv) {
    out << "s";
    for (const auto& name : e.coordinates) out << ',' << name;
    for (const auto& name : e.coordinates) out << ',' << name << "dot";
    out << ",norm\n";
    for (size_t i = 0; i < tr.samples.size(); ++i) {
      const auto& st = tr.samples[i];
      out << format_double(st.s);
      for (int k = 0; k < dim; ++k) out << ',' << format_double(st.position[k]);
      for (int k = 0; k < dim; ++k) out << ',' << format_double(st.velocity[k]);
      out << ',' << format_double(tr.sample_norms[i]) << '\n';
    }
    return kExitOk;
  }
  json samples = json::array();
  for (size_t i = 0; i < tr.samples.size(); ++i) {
    const auto& st = tr.samples[i];
    json row = {{"s", st.s}, {"position", to_std(st.position)}, {"velocity", to_std(st.velocity)}, {"norm", tr.sample_norms[i]}};
    if (fmt == Format::jsonl) out << row.dump() << '\n';
    else samples.push_back(std::move(row));
  }
  if (fmt == Format::jsonl) return kExitOk;
  json j = header(c, "geodesic", e);
  j["tol"] = io.tol;
  j["initial_norm"] = tr.initial_norm;
  j["geodesic_class"] = epsilon(classify(tr.initial_norm));
  j["norm_drift"] = tr.norm_drift;
  j["accepted_steps"] = tr.accepted_steps;
  j["rejected_steps"] = tr.rejected_steps;
  j["samples"] = samples;
  emit_json(out, j);
  return kExitOk;
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
  VerificationOptions o;
  o.trials = c.trials;
  o.seed = c.seed;
  o.tol = c.tol.value_or(1e-6);
  o.oracle_tol = c.oracle_tol;
  o.branches = parse_branch(c.branch);
  o.samples = c.samples;
  const VerificationReport rep = verify_closed_forms(o);
  emit_json(out, rep.to_json());
  return rep.all_pass ? kExitOk : kExitFlagged;
}

SurfaceGenerators load_generators(const RunConfig& c) {
  if (c.generators_file.empty()) {
    SurfaceGenerators gen;
    gen.f = SmoothFunction::identity();
    gen.g = SmoothFunction::identity();
    return gen;
  }
  std::ifstream in(c.generators_file);
  if (!in) throw IoError("cannot open generators file '" + c.generators_file + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& ex) {
    throw ConfigError("generators file: " + std::string(ex.what()));
  }
  return SurfaceGenerators::from_json(j);
}

int cmd_surface(const RunConfig& c, std::ostream& out) {
  const RegistryEntry e = lookup(c);
  check_dim(e.connection.dim(), 4, "surface --metric");
  const SurfaceGenerators gen = load_generators(c);
  const Rectangle dom{c.domain[0], c.domain[1], c.domain[2], c.domain[3]};
  const SurfaceMap m = build_family_surface(gen, dom);
  const GridSpec grid{c.grid, c.grid};
  const double tol = c.tol.value_or(1e-9);
  const auto nodes = grid.nodes(dom);

  std::vector<std::array<double, 4>> values(nodes.size()), residuals(nodes.size());
  parallel_for(nodes.size(), [&](size_t i) {
    values[i] = m(nodes[i].first, nodes[i].second);
    residuals[i] = surface_pde_residual(e.connection, m, nodes[i].first, nodes[i].second);
  });
  double max_res = 0.0;
  for (const auto& r : residuals)
    for (double v : r) max_res = std::max(max_res, std::abs(v));

  if (c.format.value_or(Format::csv) == Format::csv) {
    out << "u,v,x,y,z,t,res1,res2,res3,res4\n";
    for (size_t i = 0; i < nodes.size(); ++i) {
      out << format_double(nodes[i].first) << ',' << format_double(nodes[i].second);
      for (double v : values[i]) out << ',' << format_double(v);
      for (double v : residuals[i]) out << ',' << format_double(v);
      out << '\n';
    }
  } else {
    double y_dev = 0.0;
    for (const auto& [u, v] : nodes) {
      y_dev = std::max(y_dev, std::abs(m.jet(u, v).duv[1] - family_y_mixed_partial(gen, u, v)));
    }
    json j = header(c, "surface", e);
    j["generators"] = gen.to_json();
    j["domain"] = c.domain;
    j["grid"] = {c.grid, c.grid};
    j["tol"] = tol;
    j["max_pde_residual"] = max_res;
    j["separability"] = separability_report(m, grid).to_json();
    j["y_mixed_partial_vs_family_formula"] = y_dev;
    j["all_pass"] = max_res <= tol;
    emit_json(out, j);
  }
  return max_res <= tol ? kExitOk : kExitFlagged;
}

int dispatch(const RunConfig& c, std::ostream& out) {
  switch (c.command) {
    case Command::christoffel: return cmd_christoffel(c, out);
    case Command::ricci: return cmd_ricci(c, out);
    case Command::kretschmann: return cmd_kretschmann(c, out);
    case Command::extend: return cmd_extend(c, out);
    case Command::geodesic: return cmd_geodesic(c, out);
    case Command::verify: return cmd_verify(c, out);
    case Command::surface: return cmd_surface(c, out);
  }
  return kExitError;
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    config.validate();
    if (config.out.empty()) return dispatch(config, out);
    std::ostringstream buffer;
    const int status = dispatch(config, buffer);
    std::ofstream file(config.out, std::ios::binary);
    if (!file) throw IoError("cannot open output file '" + config.out + "'");
    file << buffer.str();
    if (!file) throw IoError("failed writing '" + config.out + "'");
    return status;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

}  // namespace rext::cli
