#pragma once

// Serialized run records: report.json, loss traces and table rows.

#include <string>

#include "dnnsolve/solve.hpp"
#include "dnnsolve/validate.hpp"

namespace dnnsolve {

RunSummary summarize(const TrainingReport& rep);

/// {case, seed, config, corrections_applied, loss, r, log10_r, epochs,
/// wall_seconds, stop_reason, comparison}. Everything except wall_seconds
/// is a function of the case, the options and the seed.
std::string report_json(const TrainingReport& rep, const BenchmarkCase& c);

/// epoch,loss,lr rows: ADAM epochs first, then BFGS iterations with an
/// empty lr.
std::string loss_trace_csv(const TrainingReport& rep);

/// Throws ConfigError when the file cannot be written.
void write_file(const std::string& path, const std::string& text);

}  // namespace dnnsolve
