#include "rext/registry.hpp"

#include <cmath>
#include <fstream>

#include "rext/antimach.hpp"
#include "rext/curvature.hpp"

namespace rext {

MetricField flat_metric(int dim) {
  return MetricField(
      dim, [dim](const auto& x) {
        using S = typename std::decay_t<decltype(x)>::Scalar;
        return Mat<S>(Mat<S>::Identity(dim, dim));
      },
      "flat");
}

MetricField sphere2_metric() {
  return MetricField(
      2, [](const auto& x) {
        using S = typename std::decay_t<decltype(x)>::Scalar;
        using std::sin;
        Mat<S> g = Mat<S>::Zero(2, 2);
        const S s = sin(x[0]);
        g(0, 0) = S(1.0);
        g(1, 1) = s * s;
        return g;
      },
      "sphere2");
}

namespace {

struct Monomial {
  double coef;
  std::vector<int> powers;
};

struct PolyComponent {
  int i, j;
  std::vector<Monomial> terms;
};

}  // namespace

MetricField polynomial_metric(const nlohmann::json& spec) {
  try {
    const int dim = spec.at("dim").get<int>();
    if (dim < 1) throw ConfigError("polynomial metric: dim must be positive");
    std::vector<PolyComponent> comps;
    for (const auto& c : spec.at("components")) {
      PolyComponent pc{c.at("i").get<int>(), c.at("j").get<int>(), {}};
      if (pc.i < 0 || pc.j < 0 || pc.i >= dim || pc.j >= dim) throw ConfigError("polynomial metric: index out of range");
      if (pc.i > pc.j) std::swap(pc.i, pc.j);
      for (const auto& t : c.at("terms")) {
        Monomial m{t.at("coef").get<double>(), t.value("powers", std::vector<int>(dim, 0))};
        if (static_cast<int>(m.powers.size()) != dim) throw ConfigError("polynomial metric: powers length != dim");
        for (int p : m.powers)
          if (p < 0) throw ConfigError("polynomial metric: negative power");
        pc.terms.push_back(std::move(m));
      }
      comps.push_back(std::move(pc));
    }
    const std::string name = spec.value("name", std::string("user"));
    return MetricField(
        dim, [dim, comps](const auto& x) {
          using S = typename std::decay_t<decltype(x)>::Scalar;
          Mat<S> g = Mat<S>::Zero(dim, dim);
          for (const auto& c : comps) {
            for (const auto& m : c.terms) {
              S term(m.coef);
              for (int k = 0; k < dim; ++k)
                if (m.powers[k] > 0) term = term * ipow(x[k], m.powers[k]);
              g(c.i, c.j) = g(c.i, c.j) + term;
            }
          }
          return g;
        },
        name);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("polynomial metric: ") + e.what());
  }
}

std::vector<std::string> registry_ids() { return {"antimach4", "antimach8", "flat", "sphere2"}; }

RegistryEntry registry_lookup(const std::string& id) {
  if (id == "antimach4") {
    return {id, antimach::metric4(), antimach::connection4(), {"x", "y", "z", "t"}};
  }
  if (id == "antimach8") {
    MetricField g = antimach::metric8();
    return {id, g, levi_civita(g), ExtendedChart::antimach().names()};
  }
  if (id == "flat") {
    MetricField g = flat_metric(4);
    return {id, g, levi_civita(g), {"x1", "x2", "x3", "x4"}};
  }
  if (id == "sphere2") {
    MetricField g = sphere2_metric();
    return {id, g, levi_civita(g), {"theta", "phi"}};
  }
  throw ConfigError("unknown metric id '" + id + "'");
}

RegistryEntry registry_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open metric file '" + path + "'");
  nlohmann::json spec;
  try {
    in >> spec;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("metric file '" + path + "': " + e.what());
  }
  MetricField g = polynomial_metric(spec);
  std::vector<std::string> names = spec.value("coordinates", std::vector<std::string>{});
  if (names.empty())
    for (int i = 0; i < g.dim(); ++i) names.push_back("x" + std::to_string(i + 1));
  return {g.name(), g, levi_civita(g), names};
}

}  // namespace rext
