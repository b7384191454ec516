#pragma once

// Truncated multivariate Taylor polynomials (3 variables, total order 3).
//
// Used to obtain exact partial derivatives of closed-form reference
// solutions and forcing terms, independently of the network code path.
// Catalog solutions are written once as generic lambdas and instantiated on
// double (values) and on Taylor (values plus all partials up to order 3).

#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include "dnnsolve/diffengine.hpp"

namespace dnnsolve {

class Taylor {
 public:
  static constexpr int kTerms = 20;  // multi-indices with total order <= 3 in 3 variables

  Taylor() = default;
  Taylor(double v) { c_[0] = v; }  // NOLINT: implicit constant promotion

  /// The coordinate `axis` expanded around `x0`.
  static Taylor variable(int axis, double x0);

  double value() const { return c_[0]; }

  /// Partial derivative d^idx f at the expansion point.
  double partial(const MultiIndex& idx) const;

  friend Taylor operator+(const Taylor& a, const Taylor& b);
  friend Taylor operator-(const Taylor& a, const Taylor& b);
  friend Taylor operator*(const Taylor& a, const Taylor& b);
  friend Taylor operator/(const Taylor& a, const Taylor& b);
  friend Taylor operator-(const Taylor& a);
  Taylor& operator+=(const Taylor& o) { return *this = *this + o; }
  Taylor& operator-=(const Taylor& o) { return *this = *this - o; }
  Taylor& operator*=(const Taylor& o) { return *this = *this * o; }

  /// Compose with a univariate function given its derivatives f, f', f'',
  /// f''' at the constant term.
  Taylor compose(const std::array<double, 4>& derivs) const;

 private:
  std::array<double, kTerms> c_{};
};

Taylor sin(const Taylor& a);
Taylor cos(const Taylor& a);
Taylor exp(const Taylor& a);
Taylor expm1(const Taylor& a);
Taylor log(const Taylor& a);
Taylor sqrt(const Taylor& a);
Taylor cosh(const Taylor& a);
Taylor tanh(const Taylor& a);
Taylor pow(const Taylor& a, double p);

inline double value_of(const Taylor& x) { return x.value(); }

}  // namespace dnnsolve
