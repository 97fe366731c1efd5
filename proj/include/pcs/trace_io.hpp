#ifndef PCS_TRACE_IO_HPP
#define PCS_TRACE_IO_HPP

#include "pcs/job.hpp"

#include <string>

namespace pcs {

enum class TraceFormat { Csv, Json };

TraceFormat trace_format_from_string(const std::string& s);

// CSV: header `job_id,arrival,size,max_gpus[,speedup_file]`, one job per
// row, optional per-row sidecar with `{"job_id": {"1": exec1, ...}}`.
// JSON: array of objects with the same fields plus optional inline
// `"demand": {"1": ..., ...}`. Jobs without speedup data get a linear
// demand function up to their declared max allocation. Demand tables are
// rescaled so exec(1) equals the declared size.
Trace load_trace(const std::string& path, TraceFormat format);

void save_trace_csv(const Trace& trace, const std::string& path);
void save_trace_json(const Trace& trace, const std::string& path);

} // namespace pcs

#endif
