#pragma once

// Per-point network kernels with a scalar reference and an AVX2 variant.
//
// The work for one collocation point is element-wise over neurons: factor
// jets per input dimension, neuron products per requested partial, output
// contractions, and the parameter-gradient accumulation. Both variants
// operate on the same padded structure-of-arrays layout (neuron count
// rounded up to a multiple of 4, padding lanes carry zero weights), so they
// are interchangeable at runtime.

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "dnnsolve/diffengine.hpp"
#include "dnnsolve/network.hpp"

namespace dnnsolve::kernels {

enum class Backend { Auto, Scalar, Avx2 };

bool avx2_available();
/// Auto resolves to Avx2 when the CPU supports it and the build includes it.
/// The DNNSOLVE_SIMD environment variable (scalar|avx2) overrides Auto.
Backend resolve(Backend requested);
std::string_view name(Backend b);

inline constexpr int kLanes = 4;
inline int padded(int n) { return (n + kLanes - 1) / kLanes * kLanes; }

/// Padded copy of the network weights.
struct Packed {
  int n = 0, np = 0, dims = 0, outputs = 0;
  std::vector<double> omega, phi, w, b;  // dims x np
  std::vector<double> dF, dS, dG;        // outputs x np
  std::vector<double> a;                 // outputs

  explicit Packed(const NetParams& theta);
  Packed() = default;
};

/// Which partials a point evaluation must produce.
struct IndexPlan {
  std::vector<MultiIndex> indices;   // slot order
  std::array<int, kMaxDims> max_order{};
  std::array<int, 64> slot_of{};     // code -> slot, -1 if absent

  IndexPlan() { slot_of.fill(-1); }
  explicit IndexPlan(std::span<const MultiIndex> needed, int dims);
  int size() const { return static_cast<int>(indices.size()); }
};

/// Scratch buffers for one point, sized for a Packed/IndexPlan pair.
struct PointBuffers {
  int np = 0, dims = 0, nidx = 0;
  std::vector<double> raw;      // sin, cos, sigma, q, 1-2 sigma     : 5 x dims x np
  std::vector<double> factors;  // 11 jet families x dims x 4 orders : x np
  std::vector<double> prods;    // F, S, FS products per index       : 3 x nidx x np

  void reserve(const Packed& p, const IndexPlan& plan);

  enum Family { F, S, G, Fom, Fph, Sw, Sb, Gom, Gph, Gw, Gb, kFamilies };
  double* fam(Family f, int j, int order) {
    return factors.data() + ((static_cast<std::size_t>(f) * static_cast<std::size_t>(dims) +
                              static_cast<std::size_t>(j)) * 4u + static_cast<std::size_t>(order)) *
                                static_cast<std::size_t>(np);
  }
  const double* fam(Family f, int j, int order) const {
    return const_cast<PointBuffers*>(this)->fam(f, j, order);
  }
  double* raw_at(int which, int j) {
    return raw.data() + (static_cast<std::size_t>(which) * static_cast<std::size_t>(dims) +
                         static_cast<std::size_t>(j)) * static_cast<std::size_t>(np);
  }
  double* prod(int branch, int slot) {
    return prods.data() + (static_cast<std::size_t>(slot) * 3u + static_cast<std::size_t>(branch)) *
                              static_cast<std::size_t>(np);
  }
  const double* prod(int branch, int slot) const {
    return const_cast<PointBuffers*>(this)->prod(branch, slot);
  }
};

/// Gradient accumulator in the padded layout.
struct GradAccum {
  int np = 0, dims = 0, outputs = 0;
  std::vector<double> omega, phi, w, b, dF, dS, dG, a;

  GradAccum() = default;
  explicit GradAccum(const Packed& p);
  void clear();
  void add(const GradAccum& other);
  void scale(double s);
  /// Drop the padding and write the canonical flat ordering.
  void to_flat(const NetParams& shape, std::span<double> out) const;
};

/// Function table for one backend.
struct KernelSet {
  /// Fill factor jets for point x. with_param_derivs also fills the
  /// omega/phi/w/b derivative families needed by backward().
  void (*factor_jets)(const Packed&, const double* x, const IndexPlan&, bool with_param_derivs,
                      PointBuffers&);
  /// Neuron products for every index in plan and the output partials
  /// u[slot * outputs + l].
  void (*forward)(const Packed&, const IndexPlan&, PointBuffers&, double* u);
  /// Accumulate sum_{slot,l} lambda[slot * outputs + l] * d u[slot,l] / d theta.
  void (*backward)(const Packed&, const IndexPlan&, const PointBuffers&, const double* lambda,
                   GradAccum&);
};

const KernelSet& scalar_kernels();
/// Kernels for a resolved backend. Throws ConfigError if Avx2 is requested
/// on a CPU or build without it.
const KernelSet& select(Backend b);

}  // namespace dnnsolve::kernels
