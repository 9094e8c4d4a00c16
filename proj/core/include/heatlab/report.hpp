#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace heatlab {

inline constexpr int kReportSchemaVersion = 1;

// One verified identity: lhs against rhs within tolerance plus tail.
struct TestRecord {
  std::string suite;
  std::string test;
  std::string group;
  double t = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double rel_err = 0.0;
  double tolerance = 0.0;
  double tail = 0.0;
  bool pass = false;
  nlohmann::json detail = nlohmann::json::object();
};

struct SkipRecord {
  std::string suite;
  std::string group;
  std::string reason;
};

struct Report {
  nlohmann::json config = nlohmann::json::object();
  std::vector<TestRecord> tests;
  std::vector<SkipRecord> skipped;

  bool pass() const;
  std::size_t failures() const;
};

nlohmann::json to_json(const TestRecord& r);
// The deterministic part: config, tests, skips and totals.
nlohmann::json report_payload(const Report& r);
// Payload plus a "meta" block with timestamps and the library version.
nlohmann::json report_document(const Report& r, const std::string& started, const std::string& finished);
std::string utc_timestamp();

// One line per test, then totals.
void write_summary(std::ostream& out, const Report& r);

}  // namespace heatlab
