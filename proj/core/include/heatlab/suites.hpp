#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "heatlab/group.hpp"
#include "heatlab/report.hpp"

namespace heatlab {

// Config schema (all keys but "group"/"groups" optional):
//   group | groups     descriptor or list of descriptors
//   t                  number or list (t-ladder), default [0.1, 0.5, 1.0]
//   truncation         Fock degree N for operator and resolution suites, default 4
//   quadrature_exactness  extra exactness for position-space operators, default 8
//   max_degree         band limit of random test functions, default 1
//   functions          random test functions per case, default 5
//   monte_carlo        {"samples": 20000, "mesh": 200}
//   bound_samples      points per t for the pointwise bound, default 2000
//   phase_grid         sup-search grid per angle, default 48
//   seed, jobs, suites
//   limits             {"max_fock_entries": 2000, "max_mc_steps": 2e9}
//   structure_constants  replaces the constants of a single group (negative tests)
struct SuiteConfig {
  std::vector<nlohmann::json> groups;
  std::vector<double> t_ladder{0.1, 0.5, 1.0};
  int truncation = 4;
  int quadrature_exactness = 8;
  double max_degree = 1.0;
  int functions = 5;
  std::size_t mc_samples = 20000;
  int mc_mesh = 200;
  std::size_t bound_samples = 2000;
  int phase_grid = 48;
  std::uint64_t seed = 42;
  int jobs = 0;
  std::vector<std::string> suites;
  double max_fock_entries = 2000;
  double max_mc_steps = 2e9;
  std::vector<double> structure_constants;
};

class ConfigError : public DomainError {
 public:
  using DomainError::DomainError;
};

const std::vector<std::string>& suite_names();

// Throws ConfigError on unknown keys, wrong types or out-of-range values.
SuiteConfig parse_config(const nlohmann::json& j);
nlohmann::json config_to_json(const SuiteConfig& c);

// Runs every selected suite on every group. Records come out in config
// order (group, then suite) whatever the number of jobs.
Report run_suites(const SuiteConfig& c);

}  // namespace heatlab
