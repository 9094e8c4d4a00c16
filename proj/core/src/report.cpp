#include "heatlab/report.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace heatlab {

bool Report::pass() const { return failures() == 0; }

std::size_t Report::failures() const {
  return static_cast<std::size_t>(
      std::count_if(tests.begin(), tests.end(), [](const TestRecord& r) { return !r.pass; }));
}

nlohmann::json to_json(const TestRecord& r) {
  return {{"suite", r.suite},   {"test", r.test}, {"group", r.group},
          {"t", r.t},           {"lhs", r.lhs},   {"rhs", r.rhs},
          {"rel_err", r.rel_err}, {"tolerance", r.tolerance}, {"tail", r.tail},
          {"pass", r.pass},     {"detail", r.detail}};
}

nlohmann::json report_payload(const Report& r) {
  nlohmann::json tests = nlohmann::json::array();
  for (const auto& t : r.tests) tests.push_back(to_json(t));
  nlohmann::json skipped = nlohmann::json::array();
  for (const auto& s : r.skipped)
    skipped.push_back({{"suite", s.suite}, {"group", s.group}, {"reason", s.reason}});
  return {{"schema_version", kReportSchemaVersion},
          {"config", r.config},
          {"tests", tests},
          {"skipped", skipped},
          {"summary", {{"total", r.tests.size()}, {"failures", r.failures()}, {"pass", r.pass()}}}};
}

nlohmann::json report_document(const Report& r, const std::string& started, const std::string& finished) {
  nlohmann::json doc = report_payload(r);
  doc["meta"] = {{"started", started}, {"finished", finished}, {"library", "heatlab"}};
  return doc;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

void write_summary(std::ostream& out, const Report& r) {
  for (const auto& t : r.tests) {
    out << (t.pass ? "PASS " : "FAIL ") << t.suite << '/' << t.test << " [" << t.group;
    if (t.t > 0.0) out << ", t=" << t.t;
    out << "] rel_err=" << std::setprecision(3) << std::scientific << t.rel_err
        << " tol=" << t.tolerance << " tail=" << t.tail << std::defaultfloat << '\n';
  }
  for (const auto& s : r.skipped)
    out << "SKIP " << s.suite << " [" << s.group << "] " << s.reason << '\n';
  out << r.tests.size() << " tests, " << r.failures() << " failed, " << r.skipped.size()
      << " skipped\n";
}

}  // namespace heatlab
