// heatlab: run verification suites from a JSON config, or export CSV data.
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string_view>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "heatlab/group.hpp"
#include "heatlab/heat.hpp"
#include "heatlab/report.hpp"
#include "heatlab/stochastic.hpp"
#include "heatlab/suites.hpp"

namespace {

using nlohmann::json;

int run(const std::string& config_path, const std::string& report_path,
        const std::vector<std::string>& suites, const std::optional<std::uint64_t>& seed,
        const std::optional<int>& jobs, bool quiet) {
  json j;
  {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "heatlab: cannot read " << config_path << "\n";
      return 2;
    }
    try {
      in >> j;
    } catch (const json::parse_error& e) {
      std::cerr << "heatlab: " << config_path << ": " << e.what() << "\n";
      return 2;
    }
  }
  if (!suites.empty()) j["suites"] = suites;
  if (seed) j["seed"] = *seed;
  if (jobs) j["jobs"] = *jobs;

  heatlab::SuiteConfig cfg;
  try {
    cfg = heatlab::parse_config(j);
  } catch (const heatlab::Error& e) {
    std::cerr << "heatlab: config error: " << e.what() << "\n";
    return 2;
  }

  const std::string started = heatlab::utc_timestamp();
  const heatlab::Report report = heatlab::run_suites(cfg);
  const std::string finished = heatlab::utc_timestamp();

  if (!report_path.empty()) {
    std::ofstream out(report_path);
    if (!out) {
      std::cerr << "heatlab: cannot write " << report_path << "\n";
      return 2;
    }
    out << heatlab::report_document(report, started, finished).dump(2) << "\n";
  }
  if (!quiet) heatlab::write_summary(std::cout, report);
  return report.pass() ? 0 : 1;
}

// rho_t along t -> exp(s X_0), s in [-pi, pi] (torus) or [-2 pi, 2 pi] (su2).
int kernel_csv(const std::string& group, double t, int points) {
  const heatlab::CompactGroup G = heatlab::make_group(std::string_view(group));
  const heatlab::HeatKernel h(G, t);
  const double span = G.is_abelian() ? heatlab::kPi : 2.0 * heatlab::kPi * std::sqrt(2.0);
  std::cout << "s,rho,tail\n";
  std::vector<double> Y(G.dim(), 0.0);
  for (int i = 0; i < points; ++i) {
    Y[0] = -span + 2.0 * span * i / std::max(1, points - 1);
    const auto v = h.evaluate(heatlab::exp_map(G, Y));
    std::cout << Y[0] << "," << v.value.real() << "," << v.tail << "\n";
  }
  return 0;
}

// Holonomy samples as log coordinates, one row per sample.
int holonomy_csv(const std::string& group, double t, int mesh, std::size_t samples,
                 std::uint64_t seed) {
  const heatlab::CompactGroup G = heatlab::make_group(std::string_view(group));
  const auto hs = heatlab::sample_holonomies(G, t, mesh, samples, seed);
  for (int k = 0; k < G.dim(); ++k) std::cout << (k ? "," : "") << "y" << k;
  std::cout << "\n";
  for (const auto& x : hs) {
    const auto y = heatlab::log_map(G, x);
    for (std::size_t k = 0; k < y.size(); ++k) std::cout << (k ? "," : "") << y[k];
    std::cout << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"heatlab: heat-kernel analysis on compact groups"};
  app.require_subcommand(0, 1);

  std::string config, report;
  std::vector<std::string> suites;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  bool quiet = false, list = false;
  app.add_option("--config", config, "JSON config file");
  app.add_option("--report", report, "write the JSON report here");
  app.add_option("--suite", suites, "run only these suites (repeatable)");
  app.add_option("--seed", seed, "override the config seed");
  app.add_option("--jobs", jobs, "worker threads (0: all cores)");
  app.add_flag("--quiet", quiet, "no summary on stdout");
  app.add_flag("--list-suites", list, "print suite names and exit");

  std::string group = "su2";
  double t = 1.0;
  int points = 201, mesh = 200;
  std::size_t samples = 1000;
  std::uint64_t csv_seed = 42;
  auto* kcsv = app.add_subcommand("kernel-csv", "heat kernel along a one-parameter subgroup");
  kcsv->add_option("--group", group, "group descriptor")->capture_default_str();
  kcsv->add_option("--t", t)->capture_default_str()->check(CLI::PositiveNumber);
  kcsv->add_option("--points", points)->capture_default_str()->check(CLI::Range(2, 1000000));
  auto* hcsv = app.add_subcommand("holonomy-csv", "sampled Brownian holonomies in log coordinates");
  hcsv->add_option("--group", group, "group descriptor")->capture_default_str();
  hcsv->add_option("--t", t)->capture_default_str()->check(CLI::PositiveNumber);
  hcsv->add_option("--mesh", mesh)->capture_default_str()->check(CLI::Range(1, 10000000));
  hcsv->add_option("--samples", samples)->capture_default_str();
  hcsv->add_option("--seed", csv_seed)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (list) {
      for (const auto& s : heatlab::suite_names()) std::cout << s << "\n";
      return 0;
    }
    if (*kcsv) return kernel_csv(group, t, points);
    if (*hcsv) return holonomy_csv(group, t, mesh, samples, csv_seed);
    if (config.empty()) {
      std::cerr << app.help();
      return 2;
    }
    return run(config, report, suites, seed, jobs, quiet);
  } catch (const heatlab::Error& e) {
    std::cerr << "heatlab: " << e.what() << "\n";
    return 2;
  }
}
