#pragma once

// Forward-mode dual number over the jet slots read by one residual term.
//
// A residual term is a small straight-line program in the network outputs
// and their partials. Evaluating it on Dual inputs, each seeded with a unit
// tangent in its own slot, yields the residual together with its exact
// gradient with respect to every jet entry it touched. The loss gradient
// then chains that through the analytic parameter derivatives of the jets.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>

namespace dnnsolve {

class Dual {
 public:
  static constexpr int kCapacity = 40;

  constexpr Dual() = default;
  constexpr Dual(double v) : v_(v) {}  // NOLINT: implicit constant promotion

  static Dual seeded(double v, int slot) {
    Dual d(v);
    d.n_ = static_cast<std::uint8_t>(slot + 1);
    for (int i = 0; i < slot; ++i) d.g_[i] = 0.0;
    d.g_[static_cast<std::size_t>(slot)] = 1.0;
    return d;
  }

  double value() const { return v_; }
  int slots() const { return n_; }
  double d(int slot) const { return slot < n_ ? g_[static_cast<std::size_t>(slot)] : 0.0; }

  friend Dual operator+(const Dual& a, const Dual& b) {
    Dual r(a.v_ + b.v_);
    r.n_ = std::max(a.n_, b.n_);
    for (int i = 0; i < r.n_; ++i) r.g_[i] = a.d(i) + b.d(i);
    return r;
  }
  friend Dual operator-(const Dual& a, const Dual& b) {
    Dual r(a.v_ - b.v_);
    r.n_ = std::max(a.n_, b.n_);
    for (int i = 0; i < r.n_; ++i) r.g_[i] = a.d(i) - b.d(i);
    return r;
  }
  friend Dual operator*(const Dual& a, const Dual& b) {
    Dual r(a.v_ * b.v_);
    r.n_ = std::max(a.n_, b.n_);
    for (int i = 0; i < r.n_; ++i) r.g_[i] = a.d(i) * b.v_ + a.v_ * b.d(i);
    return r;
  }
  friend Dual operator/(const Dual& a, const Dual& b) {
    const double inv = 1.0 / b.v_;
    Dual r(a.v_ * inv);
    r.n_ = std::max(a.n_, b.n_);
    for (int i = 0; i < r.n_; ++i) r.g_[i] = (a.d(i) - r.v_ * b.d(i)) * inv;
    return r;
  }
  friend Dual operator-(const Dual& a) { return a.scaled(-1.0, -a.v_); }

  friend Dual operator+(const Dual& a, double b) { Dual r = a; r.v_ += b; return r; }
  friend Dual operator+(double a, const Dual& b) { return b + a; }
  friend Dual operator-(const Dual& a, double b) { Dual r = a; r.v_ -= b; return r; }
  friend Dual operator-(double a, const Dual& b) { return (-b) + a; }
  friend Dual operator*(const Dual& a, double b) { return a.scaled(b, a.v_ * b); }
  friend Dual operator*(double a, const Dual& b) { return b * a; }
  friend Dual operator/(const Dual& a, double b) { return a.scaled(1.0 / b, a.v_ / b); }
  friend Dual operator/(double a, const Dual& b) { return Dual(a) / b; }

  Dual& operator+=(const Dual& o) { return *this = *this + o; }
  Dual& operator-=(const Dual& o) { return *this = *this - o; }
  Dual& operator*=(const Dual& o) { return *this = *this * o; }

  /// Chain rule for a univariate function with value fv and derivative dfv.
  Dual chain(double fv, double dfv) const { return scaled(dfv, fv); }

 private:
  Dual scaled(double factor, double value) const {
    Dual r(value);
    r.n_ = n_;
    for (int i = 0; i < n_; ++i) r.g_[i] = g_[i] * factor;
    return r;
  }

  double v_ = 0.0;
  std::uint8_t n_ = 0;
  // Only the first n_ entries are meaningful.
  std::array<double, kCapacity> g_;
};

inline Dual sin(const Dual& a) { return a.chain(std::sin(a.value()), std::cos(a.value())); }
inline Dual cos(const Dual& a) { return a.chain(std::cos(a.value()), -std::sin(a.value())); }
inline Dual exp(const Dual& a) {
  const double e = std::exp(a.value());
  return a.chain(e, e);
}
inline Dual log(const Dual& a) { return a.chain(std::log(a.value()), 1.0 / a.value()); }
inline Dual sqrt(const Dual& a) {
  const double s = std::sqrt(a.value());
  return a.chain(s, 0.5 / s);
}
inline Dual pow(const Dual& a, double p) {
  const double v = std::pow(a.value(), p);
  return a.chain(v, p * std::pow(a.value(), p - 1.0));
}

/// Scalar helpers so generic residual code can call the same names.
inline double value_of(double x) { return x; }
inline double value_of(const Dual& x) { return x.value(); }

}  // namespace dnnsolve
