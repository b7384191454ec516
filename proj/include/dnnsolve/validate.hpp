#pragma once

// Validation: RMS error against a reference on a regular grid, reference
// selection per case, grid dumps and comparison against the published rows.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "dnnsolve/catalog.hpp"
#include "dnnsolve/network.hpp"

namespace dnnsolve {

/// Regular inclusive grid with 200 / 50 / 30 points per axis in 1 / 2 / 3
/// dimensions. Disk domains use the bounding box grid restricted to the disk.
std::vector<std::array<double, 3>> eval_grid(const Domain& domain);
int grid_points_per_axis(int dims);

/// Closed form when there is one, otherwise the attached numerical oracle.
/// Throws ConfigError when the case has neither.
struct Reference {
  PointFn fn;
  std::string source;  // "analytic", "ode_oracle", "burgers_oracle", "disk_oracle"
};
Reference reference_for(const BenchmarkCase& c);
bool has_reference(const BenchmarkCase& c);

/// sqrt(mean |u_hat - u_ref|^2), pooled over outputs.
double rms_error(const NetParams& theta, const PointFn& ref, int outputs,
                 const std::vector<std::array<double, 3>>& grid);
double rms_error(const NetParams& theta, const BenchmarkCase& c);
double rms_error(const NetParams& theta, const BenchmarkCase& c, const Reference& ref);

/// CSV with header "coords...,u_hat_l...,u_ref_l...,abs_err"; abs_err is the
/// Euclidean norm of the output difference.
void write_grid_csv(const std::string& path, const NetParams& theta, const BenchmarkCase& c,
                    const Reference& ref);

/// Measured run values (raw, not log10).
struct RunSummary {
  double seconds = 0.0;
  int epochs = 0;
  double L = 0.0, L_bulk = 0.0;
  std::optional<double> L_initial, L_boundary, r;  // raw values
};

/// One table column. Loss and r columns are log10 values; time and epochs
/// are raw.
struct ComparisonRow {
  std::string column;
  std::optional<double> run, paper, delta;  // delta = run - paper
  std::string note;
};

/// Column-by-column comparison against the published row of the case.
std::vector<ComparisonRow> compare_report(const RunSummary& run, const BenchmarkCase& c);

}  // namespace dnnsolve
