#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "poslab/json_io.hpp"

namespace poslab {

struct SuiteConfig {
  std::size_t n = 3;
  std::size_t trials = 200;
  std::uint64_t seed = 42;
  Mode mode = Mode::Exact;
  std::optional<double> tol;  // float sign tolerance override
  std::size_t workers = 1;    // accepted; suites run sequentially
};

/// Throws ConfigInvalid unless 2 <= n <= 6 and tol (if given) is positive.
void validate(const SuiteConfig& cfg);

struct PropertyResult {
  std::string name;
  std::string statement;
  std::size_t trials = 0;
  std::size_t failures = 0;
  Json stats = Json::object();  // extremal statistics, deterministic
  std::string error;            // error code name when the check threw
  std::string error_message;
  bool pass() const { return error.empty() && failures == 0; }
};

struct SuiteSection {
  std::string name;
  std::vector<PropertyResult> properties;
  bool pass() const;
};

struct SuiteReport {
  std::string suite;
  SuiteConfig config;
  std::vector<SuiteSection> sections;
  bool pass() const;
};

/// combinatorial, circles, metrics, boundary, bruhat.
const std::vector<std::string>& module_suites();
/// Property names of a module suite, in execution order.
std::vector<std::string> suite_properties(const std::string& suite);

/// name is a module suite or "all". `only` restricts execution to the listed
/// property names. Throws UnknownSuite or ConfigInvalid.
SuiteReport run_suite(const std::string& name, const SuiteConfig& cfg, const std::vector<std::string>& only = {});

/// Schema "poslab/1"; byte-identical for identical configurations.
Json to_json(const SuiteReport& r);
Json to_json(const SuiteConfig& c);

}  // namespace poslab
