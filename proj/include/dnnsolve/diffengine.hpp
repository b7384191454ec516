#pragma once

// Univariate derivative jets and multi-indices for the separable network.
//
// Every network factor is a function of a single input coordinate, so all
// input partials of a neuron product reduce to products of univariate
// derivatives. Jets carry value plus derivatives up to order 3, which is the
// highest order any supported residual reads.

#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>

namespace dnnsolve {

inline constexpr int kMaxOrder = 3;
inline constexpr int kMaxDims = 3;

/// Value and first three derivatives of a univariate function at a point.
struct Jet1 {
  std::array<double, kMaxOrder + 1> c{};

  constexpr double operator[](int i) const { return c[static_cast<std::size_t>(i)]; }
  constexpr double& operator[](int i) { return c[static_cast<std::size_t>(i)]; }

  static constexpr Jet1 constant(double v) { return Jet1{{v, 0.0, 0.0, 0.0}}; }
  static constexpr Jet1 variable(double x) { return Jet1{{x, 1.0, 0.0, 0.0}}; }
};

/// Partial derivative selector: one order per input dimension, total <= 3.
class MultiIndex {
 public:
  constexpr MultiIndex() = default;
  MultiIndex(std::initializer_list<int> orders);
  static MultiIndex zero(int dims);
  static MultiIndex from_span(std::span<const int> orders);

  int dims() const { return dims_; }
  int order(int axis) const { return orders_[static_cast<std::size_t>(axis)]; }
  int total() const { return orders_[0] + orders_[1] + orders_[2]; }
  bool is_zero() const { return total() == 0; }

  /// Dense code in [0, 64) used for slot lookup tables.
  int code() const { return orders_[0] + 4 * orders_[1] + 16 * orders_[2]; }

  /// Same index re-expressed for `dims` dimensions (trailing zeros allowed).
  MultiIndex with_dims(int dims) const;

  std::string to_string() const;

  friend bool operator==(const MultiIndex& a, const MultiIndex& b) {
    return a.orders_ == b.orders_ && a.dims_ == b.dims_;
  }
  friend bool operator<(const MultiIndex& a, const MultiIndex& b) {
    if (a.total() != b.total()) return a.total() < b.total();
    return a.code() < b.code();
  }

 private:
  std::array<int, kMaxDims> orders_{};
  int dims_ = 0;
};

/// Jet of sin(omega * x + phi) with respect to x.
Jet1 jet_sin(double omega, double phi, double x);

/// Jet of the logistic sigmoid of (w * x + b) with respect to x.
Jet1 jet_sigmoid(double w, double b, double x);

/// Leibniz product rule to order 3.
Jet1 jet_mul(const Jet1& a, const Jet1& b);

/// Mixed partial of a product of univariate factors: factor j is
/// differentiated idx.order(j) times. Throws UnsupportedOrder above order 3.
double separable_partial(std::span<const Jet1> factors, const MultiIndex& idx);

/// Numerically stable logistic function pieces for z = w x + b.
///   sigma    = 1 / (1 + e^-z)
///   q        = sigma (1 - sigma), computed without cancellation
///   one_m2s  = 1 - 2 sigma
struct SigmoidParts {
  double sigma;
  double q;
  double one_m2s;
};
SigmoidParts sigmoid_parts(double z);

}  // namespace dnnsolve
