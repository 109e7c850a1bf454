#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "linflow/canonical.hpp"
#include "linflow/cores.hpp"
#include "linflow/equiv.hpp"
#include "linflow/ratclass.hpp"
#include "linflow/witness.hpp"

namespace linflow {

inline constexpr const char* kVersion = "1.0.0";

using nlohmann::json;

json scalar_to_json(Scalar z);
json structure_to_json(const JordanStructure& s);
json descriptor_to_json(const ClassDescriptor& d);
json verdict_to_json(const Verdict& v);
json residual_to_json(const ResidualReport& r);
json profile_to_json(const CoreProfile& p);
json partition_to_json(const RationalPartition& p);

/// Input echo: source, field, shape and a FNV-1a digest of the canonical
/// text form.
json input_to_json(const std::string& source, const Mat& a);
std::string digest(const Mat& a);

/// Report envelope shared by every command.
json make_report(const std::string& command, const json& inputs, const Tolerance& tol,
                 std::int64_t qmax, json results);

/// Indented "key: value" rendering of a report; numbers are printed the
/// same way as in the JSON output.
std::string render_text(const json& report);

}  // namespace linflow
