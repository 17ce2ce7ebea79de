#include "rext/surfaces.hpp"

#include <algorithm>

namespace rext {

SmoothFunction SmoothFunction::derivative() const {
  std::vector<double> dp;
  for (size_t k = 1; k < poly_.size(); ++k) dp.push_back(static_cast<double>(k) * poly_[k]);
  std::vector<TrigTerm> dt;
  dt.reserve(trig_.size());
  for (const auto& t : trig_) dt.push_back({t.b * t.omega, -t.a * t.omega, t.omega});
  return SmoothFunction(std::move(dp), std::move(dt));
}

nlohmann::json SmoothFunction::to_json() const {
  nlohmann::json trig = nlohmann::json::array();
  for (const auto& t : trig_) trig.push_back({{"a", t.a}, {"b", t.b}, {"omega", t.omega}});
  return {{"poly", poly_}, {"trig", trig}};
}

SmoothFunction SmoothFunction::from_json(const nlohmann::json& j) {
  if (j.is_number()) return constant(j.get<double>());
  if (j.is_array()) return SmoothFunction(j.get<std::vector<double>>());
  if (!j.is_object()) throw ConfigError("function spec must be a number, coefficient list or object");
  std::vector<double> poly = j.value("poly", std::vector<double>{});
  std::vector<TrigTerm> trig;
  if (j.contains("trig")) {
    for (const auto& t : j.at("trig")) trig.push_back({t.value("a", 0.0), t.value("b", 0.0), t.value("omega", 1.0)});
  }
  return SmoothFunction(std::move(poly), std::move(trig));
}

nlohmann::json SurfaceGenerators::to_json() const {
  return {{"f", f.to_json()},   {"g", g.to_json()}, {"G1", G1.to_json()}, {"G2", G2.to_json()},
          {"C3", C3},           {"C4", C4},         {"C5", C5}};
}

SurfaceGenerators SurfaceGenerators::from_json(const nlohmann::json& j) {
  try {
    SurfaceGenerators gen;
    gen.f = SmoothFunction::from_json(j.at("f"));
    gen.g = SmoothFunction::from_json(j.at("g"));
    if (j.contains("G1")) gen.G1 = SmoothFunction::from_json(j.at("G1"));
    if (j.contains("G2")) gen.G2 = SmoothFunction::from_json(j.at("G2"));
    gen.C3 = j.value("C3", 0.0);
    gen.C4 = j.value("C4", 0.0);
    gen.C5 = j.value("C5", 0.0);
    return gen;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("surface generators: ") + e.what());
  }
}

SurfaceJet SurfaceMap::jet(double u, double v) const {
  if (!std::isfinite(u) || !std::isfinite(v) || !domain_.contains(u, v)) {
    throw DomainError("SurfaceMap: (" + std::to_string(u) + ", " + std::to_string(v) + ") outside domain");
  }
  // outer infinitesimal carries u, inner carries v
  const D2 ud(D1(u, 0.0), D1(1.0, 0.0));
  const D2 vd(D1(v, 1.0), D1(0.0, 0.0));
  const auto r = eval_(ud, vd);
  SurfaceJet j{};
  for (int i = 0; i < 4; ++i) {
    j.value[i] = r[i].v.v;
    j.dv[i] = r[i].v.d;
    j.du[i] = r[i].d.v;
    j.duv[i] = r[i].d.d;
  }
  return j;
}

SurfaceMap build_family_surface(const SurfaceGenerators& gen, Rectangle domain) {
  return SurfaceMap::from_generic(
      [gen](const D2& u, const D2& v) {
        const D2 f = gen.f(u);
        const D2 g = gen.g(v);
        const D2 x = gen.x1(u) + gen.x2(v);
        const D2 y = -2.0 * gen.C3 * f * g - f * f * g - g * g * f + gen.G1(u) + gen.G2(v);
        return std::array<D2, 4>{x, y, f + g, f - g};
      },
      domain);
}

std::array<double, 4> surface_pde_residual(const ConnectionField& conn, const SurfaceMap& m, double u, double v) {
  check_dim(conn.dim(), 4, "surface_pde_residual connection");
  const SurfaceJet j = m.jet(u, v);
  ChartPoint p(4);
  for (int i = 0; i < 4; ++i) p[i] = j.value[i];
  const Tensor3<double> gamma = conn(p);
  std::array<double, 4> res{};
  for (int i = 0; i < 4; ++i) {
    double acc = j.duv[i];
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) acc += gamma(i, a, b) * j.du[a] * j.dv[b];
    res[i] = acc;
  }
  return res;
}

std::array<double, 4> antimach_surface_residual(const SurfaceMap& m, double u, double v) {
  const SurfaceJet j = m.jet(u, v);
  enum { x, y, z, t };
  const auto& d1 = j.du;
  const auto& d2 = j.dv;
  return {j.duv[x] - d1[z] * d2[t] - d1[t] * d2[z], j.duv[y] - d1[x] * d2[t] - d1[t] * d2[x], j.duv[z],
          j.duv[t] + d1[x] * d2[z] + d1[z] * d2[x] - 2.0 * j.value[t] * d1[z] * d2[z]};
}

double family_y_mixed_partial(const SurfaceGenerators& gen, double u, double v) {
  const double fp = gen.f.derivative()(u);
  const double gp = gen.g.derivative()(v);
  return -2.0 * (gen.C3 + gen.f(u) + gen.g(v)) * fp * gp;
}

std::vector<std::pair<double, double>> GridSpec::nodes(const Rectangle& r) const {
  if (nu < 1 || nv < 1) throw DomainError("GridSpec: grid must be nonempty");
  std::vector<std::pair<double, double>> out;
  out.reserve(static_cast<size_t>(nu) * nv);
  for (int i = 0; i < nu; ++i) {
    const double u = nu == 1 ? r.u0 : r.u0 + (r.u1 - r.u0) * i / (nu - 1);
    for (int k = 0; k < nv; ++k) {
      const double v = nv == 1 ? r.v0 : r.v0 + (r.v1 - r.v0) * k / (nv - 1);
      out.emplace_back(u, v);
    }
  }
  return out;
}

SeparabilityReport separability_report(const SurfaceMap& m, const GridSpec& grid) {
  SeparabilityReport rep;
  for (const auto& [u, v] : grid.nodes(m.domain())) {
    const SurfaceJet j = m.jet(u, v);
    for (int i = 0; i < 4; ++i) rep.max_mixed_partial[i] = std::max(rep.max_mixed_partial[i], std::abs(j.duv[i]));
    ++rep.grid_points;
  }
  for (int i = 0; i < 4; ++i) rep.separable[i] = rep.max_mixed_partial[i] <= kSeparableTolerance;
  return rep;
}

nlohmann::json SeparabilityReport::to_json() const {
  static const char* names[] = {"x", "y", "z", "t"};
  nlohmann::json coords = nlohmann::json::object();
  for (int i = 0; i < 4; ++i) {
    coords[names[i]] = {{"max_mixed_partial", max_mixed_partial[i]},
                        {"verdict", separable[i] ? "separable" : "not separable"}};
  }
  return {{"grid_points", grid_points}, {"threshold", kSeparableTolerance}, {"coordinates", coords}};
}

}  // namespace rext
