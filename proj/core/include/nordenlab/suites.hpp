#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "nordenlab/cotangent.hpp"

namespace nordenlab {

enum class CheckStatus { pass, fail, hypothesis_not_met, comparison_only };
std::string_view to_string(CheckStatus s);

struct CheckRecord {
  std::string id;
  std::string anchor;  // the statement being checked
  std::size_t points = 0;
  double max_violation = 0.0;
  double tol = 0.0;
  CheckStatus status = CheckStatus::pass;
  std::string note;
};

struct SuiteOptions {
  std::size_t points = 20;
  std::uint64_t seed = 42;
  double tol = 1e-8;
  int order = 3;
  Interval fiber_box{-1.0, 1.0};
};

struct SuiteReport {
  std::string suite;
  std::string chart;
  SuiteOptions options;
  std::string version;
  std::vector<CheckRecord> checks;

  const CheckRecord* find(std::string_view id) const;
  bool passed() const;
  /// 0 when no assertion-class check failed, 1 otherwise.
  int exit_code() const { return passed() ? 0 : 1; }
};

std::string to_text(const SuiteReport& report);
/// Fixed key order; byte-stable for identical inputs.
std::string to_json(const SuiteReport& report);

enum class Suite { base, generalized, cotangent, kahler_flat, all };
/// Throws std::invalid_argument for unknown names.
Suite parse_suite(std::string_view name);
std::string_view to_string(Suite s);

/// Smallest jet order a suite can run with.
int minimum_order(Suite s);

std::string_view library_version();

SuiteReport run_validate(std::shared_ptr<const NordenChart> chart, const SuiteOptions& options);
/// Throws std::invalid_argument when the options are out of range.
SuiteReport run_check(std::shared_ptr<const NordenChart> chart, Suite suite, const SuiteOptions& options);

/// A seeded section with quadratic polynomial components centred at the
/// point carried by `coords`; only the first n coordinate jets are used.
SectionJet polynomial_section(std::span<const Jet> coords, std::size_t n, std::uint64_t seed, std::uint64_t draw);
/// A seeded quadratic test function, bounded away from zero near the point.
Jet polynomial_function(std::span<const Jet> coords, std::size_t n, std::uint64_t seed, std::uint64_t draw);

}  // namespace nordenlab
