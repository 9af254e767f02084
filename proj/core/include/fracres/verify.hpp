#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fracres::verify {

enum class Suite { specfun, kernels, subordination, cauchy, stochastic, all };

Suite parse_suite(const std::string& s);
const char* to_string(Suite s);

struct Options {
  /// Tightens (never loosens) the residual thresholds of the selected criteria.
  std::optional<double> tol;
  std::uint64_t seed = 1;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  double measured = 0.0;   ///< worst observed error over the criterion's cases
  double tolerance = 0.0;  ///< pinned threshold after any tightening
  bool pass = false;
  std::string detail;      ///< worst case, or the error that stopped the check
};

/// Criterion ids belonging to a suite, in order.
std::vector<int> criteria_of(Suite s);

/// Runs one criterion; numerical failures are reported as a failed row.
CriterionResult run_criterion(int id, const Options& opt = {});

/// Runs the suite's criteria in parallel; rows are ordered by id.
std::vector<CriterionResult> run_suite(Suite s, const Options& opt = {});

/// `criterion,name,measured,tolerance,status,detail` rows.
void write_csv(std::ostream& os, const std::vector<CriterionResult>& rows);

}  // namespace fracres::verify
