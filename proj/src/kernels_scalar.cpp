#include <cmath>

#include "kernels_impl.hpp"

namespace dnnsolve::kernels {
namespace {

struct Lane1 {
  static constexpr int W = 1;
  double v;

  static Lane1 load(const double* p) { return {*p}; }
  static Lane1 set1(double x) { return {x}; }
  void store(double* p) const { *p = v; }
  double hsum() const { return v; }

  friend Lane1 operator+(Lane1 a, Lane1 b) { return {a.v + b.v}; }
  friend Lane1 operator-(Lane1 a, Lane1 b) { return {a.v - b.v}; }
  friend Lane1 operator*(Lane1 a, Lane1 b) { return {a.v * b.v}; }
  friend Lane1 operator/(Lane1 a, Lane1 b) { return {a.v / b.v}; }

  static Lane1 abs(Lane1 a) { return {std::fabs(a.v)}; }
  static Lane1 sin(Lane1 a) { return {std::sin(a.v)}; }
  static Lane1 cos(Lane1 a) { return {std::cos(a.v)}; }
  static Lane1 exp(Lane1 a) { return {std::exp(a.v)}; }
  bool nonneg() const { return v >= 0.0; }
  static Lane1 select(bool m, Lane1 a, Lane1 b) { return m ? a : b; }
};

}  // namespace

const KernelSet& scalar_kernels() {
  static const KernelSet k = detail::Impl<Lane1>::table();
  return k;
}

}  // namespace dnnsolve::kernels
