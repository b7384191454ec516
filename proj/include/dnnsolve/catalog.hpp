#pragma once

// The benchmark problems: 10 ODEs, 12 problems in two variables and 11 in
// three, with analytic solutions where known, default hyperparameters and
// the published result rows.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dnnsolve/loss.hpp"
#include "dnnsolve/problem.hpp"
#include "dnnsolve/taylor.hpp"

namespace dnnsolve {

struct CaseDefaults {
  int neurons = 35;
  Counts counts;
  LossWeights alphas;
  int adam_epochs = 150;
};

/// Published row. Values are log10; absent entries are N/A in the table.
struct ReferenceRow {
  double time = 0.0;
  int epochs = 0;
  std::optional<double> L, L_bulk, L_initial, L_boundary, r;
  bool initial_below = false;  // L_initial printed as "< -25"
  bool r_from_oracle = false;  // r computed against a numerical solution
};

enum class ReferenceKind { Analytic, OdeOracle, BurgersOracle, DiskOracle, None };

using TaylorFn = std::function<void(const Taylor* x, Taylor* out)>;

struct BenchmarkCase {
  std::string id;
  std::string summary;
  ProblemSpec spec;
  PointFn analytic;          // empty without a closed form
  TaylorFn analytic_taylor;  // same function on Taylor inputs
  ReferenceKind reference_kind = ReferenceKind::Analytic;
  CaseDefaults defaults;
  ReferenceRow reference;
  std::vector<std::string> notes;  // corrections and artifact choices
  std::map<std::string, double> params;
  std::string definition;  // expression trees of file-defined cases (JSON)
};

using CaseParams = std::map<std::string, double>;

/// Throws ConfigError for unknown ids or unknown parameter names.
BenchmarkCase get_case(const std::string& id, const CaseParams& overrides = {});

/// Ids in catalog order; dims = 0 lists all.
std::vector<std::string> list_cases(int dims = 0);
std::string case_summary(const std::string& id);
ReferenceRow reference_row(const std::string& id);

}  // namespace dnnsolve
