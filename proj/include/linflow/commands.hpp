#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "linflow/equiv.hpp"

namespace linflow {

enum ExitCode : int { kExitOk = 0, kExitNotEquivalent = 1, kExitInputError = 2, kExitInternal = 3 };

struct CliOptions {
  Tolerance tol;
  std::int64_t qmax = 64;
  Relation relation = Relation::topological;
  std::optional<Field> field;
  bool json = false;
  bool realify = false;
  std::string certificate_out;
};

/// Each command writes a report to `out` (text or JSON per options),
/// diagnostics to `err`, and returns the exit code.
int cmd_classify(const std::string& source, const CliOptions& opt, std::ostream& out, std::ostream& err);
int cmd_compare(const std::string& a, const std::string& b, const CliOptions& opt, std::ostream& out,
                std::ostream& err);
/// One comparison per line: "A B [relation]"; comparisons run concurrently,
/// output keeps input order. Relative paths are tried against the working
/// directory, then the batch file's directory.
int cmd_batch(const std::string& file, const CliOptions& opt, std::ostream& out, std::ostream& err);
int cmd_enum2(const CliOptions& opt, std::ostream& out, std::ostream& err);
int cmd_selftest(const CliOptions& opt, std::ostream& out, std::ostream& err);

/// Result JSON of a comparison plus its exit code (used by batch mode).
struct CompareOutcome {
  nlohmann::json inputs;
  nlohmann::json results;
  int code = kExitOk;
};
CompareOutcome compare_matrices(const std::string& source_a, const Mat& a, const std::string& source_b,
                                const Mat& b, const CliOptions& opt);

}  // namespace linflow
