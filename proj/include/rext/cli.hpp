#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rext::cli {

enum class Command { christoffel, ricci, kretschmann, extend, geodesic, verify, surface };

enum class Format { json, csv, jsonl };

/// Exit statuses of `run`.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFlagged = 1;  // a verification check failed
inline constexpr int kExitError = 2;    // configuration, I/O or numerical error

struct RunConfig {
  Command command = Command::christoffel;
  std::string metric_id = "antimach4";
  std::string metric_file;  // polynomial metric JSON; overrides metric_id

  // Point selection for christoffel/ricci/kretschmann/extend.
  std::vector<double> point;
  std::string points = "random:1";  // "random:N" when `point` is empty
  double range = 2.0;               // random points are drawn from [-range, range]^dim

  std::optional<double> tol;  // per-command default when unset
  std::uint64_t seed = 42;

  // geodesic
  std::vector<double> x0, psi0, xi, h;
  double s_max = 1.0;
  int samples = 100;

  // verify
  std::string branch = "both";
  int trials = 20;
  double oracle_tol = 1e-12;

  // surface
  std::string generators_file;
  int grid = 50;
  std::vector<double> domain{-1.0, 1.0, -1.0, 1.0};

  std::optional<Format> format;
  std::string out;  // empty: the stream passed to run()

  /// Throws ConfigError on invalid combinations.
  void validate() const;
};

Command parse_command(const std::string& s);
Format parse_format(const std::string& s);
std::vector<double> parse_list(const std::string& s);

/// Dispatches the command, writes its artifact and returns the exit status.
/// Errors are reported on `err` and mapped to kExitError.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace rext::cli
