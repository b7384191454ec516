#pragma once

#include <vector>

#include "dnnsolve/dual.hpp"
#include "dnnsolve/kernels.hpp"
#include "dnnsolve/problem.hpp"

namespace dnnsolve::detail {

/// A term together with the index plans for its two sites.
struct TermRunner {
  const Term* term = nullptr;
  kernels::IndexPlan plan[2];
  int outputs = 1;

  TermRunner(const Term& t, int dims, int outputs);
  int slots(int site) const { return plan[site].size() * outputs; }
};

struct Workspace {
  kernels::PointBuffers buf[2];
  std::vector<double> u[2];
  std::vector<Dual> ud[2];
  std::vector<double> r;
  std::vector<Dual> rd;
  std::vector<double> lam[2];

  void prepare(const kernels::Packed& p, const TermRunner& run);
};

/// Evaluate one term at one point. Writes the residual components to
/// ws.r and returns their sum of squares. With grad set, also adds
/// sum_m r_m d r_m / d theta into it.
double run_point(const TermRunner& run, const kernels::Packed& p, const kernels::KernelSet& ks,
                 const CollocationPoint& pt, Workspace& ws, kernels::GradAccum* grad);

}  // namespace dnnsolve::detail
