#pragma once

// Weighted root-mean-square loss over the three point groups and its exact
// parameter gradient.
//
// Points are processed in fixed chunks of 64 in canonical order. Each chunk
// produces a partial sum and a partial gradient; chunks are then combined by
// pairwise reduction in index order, so results do not depend on how many
// worker threads ran the chunks.

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "dnnsolve/kernels.hpp"
#include "dnnsolve/network.hpp"
#include "dnnsolve/problem.hpp"

namespace dnnsolve {

struct LossWeights {
  double alpha0 = 1.0;
  double alpha_boundary = 1.0;
};

struct LossBreakdown {
  double bulk = 0.0, initial = 0.0, boundary = 0.0, total = 0.0;
  bool has_initial = false, has_boundary = false;
};

enum class Group : std::uint8_t { Bulk = 0, Initial = 1, Boundary = 2 };

/// A collocation point addressed by group and index within the group.
struct PointRef {
  Group group;
  std::uint32_t index;
  friend bool operator<(const PointRef& a, const PointRef& b) {
    return a.group != b.group ? a.group < b.group : a.index < b.index;
  }
};

inline constexpr int kChunk = 64;

class Objective {
 public:
  Objective(const ProblemSpec& spec, CollocationSet pts, LossWeights w, int threads = 1,
            kernels::Backend backend = kernels::Backend::Auto);
  ~Objective();
  Objective(const Objective&) = delete;
  Objective& operator=(const Objective&) = delete;

  const ProblemSpec& spec() const { return spec_; }
  const CollocationSet& points() const { return pts_; }
  const LossWeights& weights() const { return w_; }
  void set_weights(LossWeights w) { w_ = w; }
  int threads() const { return threads_; }
  std::size_t total_points() const;
  /// Every point once, in canonical order.
  std::vector<PointRef> all_refs() const;

  LossBreakdown loss(const NetParams& theta) const;
  LossBreakdown loss_grad(const NetParams& theta, std::span<double> grad) const;

  /// Same, restricted to a subset. Groups absent from the subset contribute
  /// 0. The subset is evaluated in canonical order.
  LossBreakdown loss(const NetParams& theta, std::span<const PointRef> subset) const;
  LossBreakdown loss_grad(const NetParams& theta, std::span<const PointRef> subset,
                          std::span<double> grad) const;

 private:
  struct Impl;
  LossBreakdown run(const NetParams& theta, std::span<const PointRef> subset,
                    std::span<double> grad, bool want_grad) const;

  ProblemSpec spec_;
  CollocationSet pts_;
  LossWeights w_;
  int threads_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace dnnsolve
