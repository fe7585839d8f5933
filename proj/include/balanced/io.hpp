#pragma once

#include "balanced/integration.hpp"
#include "balanced/moment.hpp"
#include "balanced/solver.hpp"
#include "balanced/stability.hpp"

#include <json.hpp>

#include <string>

// JSON scheme files, report serialization, and the CSV continuity trace.
// Complex numbers are stored as [re, im] pairs throughout.

namespace balanced {

using Json = nlohmann::ordered_json;

Json complex_to_json(const Cplx& z);
Cplx complex_from_json(const Json& j);

// Matrices as {"re": [[...]], "im": [[...]]} row-major entry arrays.
Json matrix_to_json(const Mat& m);
Mat matrix_from_json(const Json& j);

Json scheme_to_json(const Scheme& scheme);
Scheme scheme_from_json(const Json& j);

// Throws io_error when the file cannot be opened, configuration_error when
// the contents are not a valid scheme.
Scheme read_scheme_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);
Json read_json_file(const std::string& path);

Json verdict_to_json(const StabilityVerdict& verdict);
Json residual_to_json(const Residual& residual);
Json balance_report_to_json(const BalanceReport& report);

// Columns: t, residual, iters, min_eig, cond_g, status.
void write_trace_csv(const std::string& path, const ContinuityTrace& trace);
Json trace_to_json(const ContinuityTrace& trace);

}  // namespace balanced
