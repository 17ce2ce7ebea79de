#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "rext/cli.hpp"

namespace {

using rext::cli::RunConfig;

void add_metric(CLI::App* sub, RunConfig& c) {
  sub->add_option("--metric", c.metric_id, "Registered metric: antimach4, antimach8, flat, sphere2")->capture_default_str();
  sub->add_option("--metric-file", c.metric_file, "Polynomial metric in JSON");
}

void add_points(CLI::App* sub, RunConfig& c, std::string& point) {
  sub->add_option("--point", point, "Comma separated coordinates");
  sub->add_option("--points", c.points, "random:N")->capture_default_str();
  sub->add_option("--range", c.range, "Random points are drawn from [-range, range]")->capture_default_str();
  sub->add_option("--seed", c.seed, "Random seed")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Riemann extensions, geodesics and translation surfaces"};
  app.require_subcommand(1);

  RunConfig c;
  std::string point, x0, psi0, xi, h, domain, format;
  double tol = 0.0;

  auto* christoffel = app.add_subcommand("christoffel", "Christoffel symbols of the second kind");
  auto* ricci = app.add_subcommand("ricci", "Ricci tensor check; exits 1 above --tol");
  auto* kretschmann = app.add_subcommand("kretschmann", "Kretschmann scalar");
  auto* extend = app.add_subcommand("extend", "Components of the Riemann extension");
  auto* geodesic = app.add_subcommand("geodesic", "Integrate a geodesic");
  auto* verify = app.add_subcommand("verify", "Randomized closed form verification");
  auto* surface = app.add_subcommand("surface", "Translation surface PDE residuals");

  for (auto* sub : {christoffel, ricci, kretschmann, extend, geodesic, surface}) add_metric(sub, c);
  for (auto* sub : {christoffel, ricci, kretschmann, extend}) add_points(sub, c, point);
  for (auto* sub : {ricci, kretschmann, geodesic, verify, surface}) sub->add_option("--tol", tol, "Tolerance");
  for (auto* sub : {christoffel, ricci, kretschmann, extend, geodesic, verify, surface}) {
    sub->add_option("--out", c.out, "Write the artifact to PATH instead of stdout");
    sub->add_option("--format", format, "json, csv or jsonl");
  }

  geodesic->set_help_flag("--help", "Print this help message and exit");
  geodesic->add_option("--x0", x0, "Initial base point");
  geodesic->add_option("--psi0", psi0, "Initial fiber point");
  geodesic->add_option("--xi", xi, "Initial base velocity");
  geodesic->add_option("--h", h, "Initial fiber velocity");
  geodesic->add_option("--s-max", c.s_max, "Affine parameter range")->capture_default_str();
  geodesic->add_option("--samples", c.samples, "Output intervals")->capture_default_str();

  verify->add_option("--trials", c.trials, "Trials per branch")->capture_default_str();
  verify->add_option("--seed", c.seed, "Random seed")->capture_default_str();
  verify->add_option("--branch", c.branch, "both, xi3-zero or xi3-nonzero")->capture_default_str();
  verify->add_option("--oracle-tol", c.oracle_tol, "Integrator tolerance of the oracle")->capture_default_str();
  verify->add_option("--samples", c.samples, "Comparison points per trial")->capture_default_str();

  surface->add_option("--generators", c.generators_file, "Generator functions in JSON");
  surface->add_option("--grid", c.grid, "Grid nodes per direction")->capture_default_str();
  surface->add_option("--domain", domain, "u0,u1,v0,v1");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return rext::cli::kExitError;
  }

  try {
    c.command = rext::cli::parse_command(app.get_subcommands().front()->get_name());
    if (!point.empty()) c.point = rext::cli::parse_list(point);
    if (!x0.empty()) c.x0 = rext::cli::parse_list(x0);
    if (!psi0.empty()) c.psi0 = rext::cli::parse_list(psi0);
    if (!xi.empty()) c.xi = rext::cli::parse_list(xi);
    if (!h.empty()) c.h = rext::cli::parse_list(h);
    if (!domain.empty()) c.domain = rext::cli::parse_list(domain);
    if (!format.empty()) c.format = rext::cli::parse_format(format);
    for (auto* sub : app.get_subcommands()) {
      if (auto* opt = sub->get_option_no_throw("--tol"); opt != nullptr && opt->count() > 0) c.tol = tol;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return rext::cli::kExitError;
  }
  return rext::cli::run(c, std::cout, std::cerr);
}
