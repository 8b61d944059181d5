#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kummer/terracini.hpp"

namespace kummer {

inline constexpr int kReportSchemaVersion = 1;

struct VerifyConfig {
  std::uint64_t seed = 42;
  int samples = 0;  // 0 keeps each check's default count
  std::map<std::string, double> tolerances;  // per-check threshold overrides
};

struct CheckRecord {
  std::string name;
  std::string group;
  int criterion = 0;
  int samples = 0;
  double worst_gap = 0.0;
  double threshold = 0.0;
  bool pass = false;
  double wall_time = 0.0;
  std::string note;
};

struct VerifyReport {
  int schema_version = kReportSchemaVersion;
  std::string curve_hash;
  std::uint64_t seed = 0;
  std::string group;
  std::map<std::string, double> tolerances;
  std::vector<CheckRecord> records;

  bool all_pass() const;
  std::vector<std::string> failing() const;
};

nlohmann::json to_json(const VerifyReport& r, bool include_timing = true);

struct CheckOutcome {
  int samples = 0;
  double worst = 0.0;
  std::string note;
};

struct CheckEnv {
  const EmbeddingContext& ctx;
  std::uint64_t seed;
  int samples;

  int count(int default_count) const { return samples > 0 ? samples : default_count; }
};

struct CheckSpec {
  std::string name;
  std::string group;
  int criterion;
  double threshold;  // pass iff worst < threshold
  std::function<CheckOutcome(const CheckEnv&)> run;
};

// Fixed order; reports follow it.
const std::vector<CheckSpec>& check_registry();
std::vector<std::string> check_groups();
bool is_check_group(const std::string& group);

// Runs the checks of one group ("all" for every check). A throwing check is recorded as failed.
VerifyReport run_checks(const EmbeddingContext& ctx, const std::string& group, const VerifyConfig& cfg);

}  // namespace kummer
