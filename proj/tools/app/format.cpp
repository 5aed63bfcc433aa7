#include <charconv>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <sstream>

#include <nlohmann/json.hpp>

#include "aloe/io.hpp"
#include "app/app.hpp"

namespace aloe::app {

std::uint64_t default_seed() {
  const char* env = std::getenv("ALOE_SEED");
  if (env == nullptr || *env == '\0') return kDefaultSeed;
  std::uint64_t value = 0;
  const char* end = env + std::char_traits<char>::length(env);
  const auto [ptr, ec] = std::from_chars(env, end, value);
  return ec == std::errc() && ptr == end ? value : kDefaultSeed;
}

std::string format_double(double value) {
  char buf[32];
  const auto result = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, result.ptr);
}

std::string to_csv(const Report& report) {
  bool reference = false;
  for (const auto& row : report.rows) reference = reference || row.has_reference;
  std::ostringstream os;
  os << "case,theta_or_tau,n,mu_hat,se,se_over_mu,mu_lower,mu_bar,s_ge_2_fraction,seed";
  if (reference) os << ",reference_lo,reference_hi,rel_mse";
  os << '\n';
  for (const auto& row : report.rows) {
    const double ratio = row.mu_hat > 0.0 ? row.se / row.mu_hat : 0.0;
    os << row.case_name << ',' << format_double(row.theta_or_tau) << ',' << row.n << ','
       << format_double(row.mu_hat) << ',' << format_double(row.se) << ',' << format_double(ratio) << ','
       << format_double(row.mu_lower) << ',' << format_double(row.mu_bar) << ','
       << format_double(row.s_ge_2_fraction) << ',' << row.seed;
    if (reference) {
      os << ',' << format_double(row.reference_lo) << ',' << format_double(row.reference_hi) << ','
         << format_double(row.rel_mse);
    }
    os << '\n';
  }
  return os.str();
}

std::string to_json_text(const Report& report, bool timestamp) {
  nlohmann::json doc;
  doc["command"] = report.command;
  if (timestamp) {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    doc["timestamp"] = buf;
  }
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows) {
    nlohmann::json r{{"case", row.case_name},
                     {"theta_or_tau", row.theta_or_tau},
                     {"n", row.n},
                     {"reps", row.reps},
                     {"mu_hat", row.mu_hat},
                     {"se", row.se},
                     {"se_over_mu", row.mu_hat > 0.0 ? row.se / row.mu_hat : 0.0},
                     {"mu_lower", row.mu_lower},
                     {"mu_bar", row.mu_bar},
                     {"s_ge_2_fraction", row.s_ge_2_fraction},
                     {"seed", row.seed},
                     {"dropped_events", row.dropped_events},
                     {"dropped_probability", row.dropped_probability},
                     {"empty_mixture", row.empty}};
    if (row.has_reference) {
      r["reference_lo"] = row.reference_lo;
      r["reference_hi"] = row.reference_hi;
      r["rel_mse"] = row.rel_mse;
      r["rel_mse_reference"] = row.rel_mse_reference;
    }
    nlohmann::json runs = nlohmann::json::array();
    for (const auto& run : row.runs) runs.push_back(io::to_json(run));
    r["runs"] = std::move(runs);
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

}  // namespace aloe::app
