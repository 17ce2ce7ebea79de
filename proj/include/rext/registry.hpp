#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "rext/field.hpp"

namespace rext {

/// diag(1, ..., 1).
MetricField flat_metric(int dim = 4);

/// Unit round 2-sphere, coordinates (θ, φ): diag(1, sin²θ).
MetricField sphere2_metric();

/// Metric with polynomial components read from JSON:
///   {"name": "...", "dim": n, "coordinates": [...],
///    "components": [{"i": 0, "j": 2, "terms": [{"coef": -2, "powers": [0,0,0,1]}]}]}
/// Components are given for i <= j; missing entries are zero.
MetricField polynomial_metric(const nlohmann::json& spec);

/// A registered chart: metric, the connection used for extensions and
/// geodesics, and coordinate labels.
struct RegistryEntry {
  std::string id;
  MetricField metric;
  ConnectionField connection;
  std::vector<std::string> coordinates;
};

std::vector<std::string> registry_ids();

/// "antimach4", "antimach8", "flat", "sphere2". Throws ConfigError otherwise.
RegistryEntry registry_lookup(const std::string& id);

/// Entry built from a polynomial metric JSON file.
RegistryEntry registry_from_file(const std::string& path);

}  // namespace rext
