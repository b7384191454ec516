#include "dnnsolve/diffengine.hpp"

#include <cmath>

#include "dnnsolve/errors.hpp"

namespace dnnsolve {

MultiIndex::MultiIndex(std::initializer_list<int> orders) {
  if (orders.size() > static_cast<std::size_t>(kMaxDims)) {
    throw ConfigError("multi-index has more than 3 dimensions");
  }
  std::size_t i = 0;
  for (int o : orders) {
    if (o < 0) throw ConfigError("negative derivative order");
    orders_[i++] = o;
  }
  dims_ = static_cast<int>(orders.size());
  if (total() > kMaxOrder) {
    throw UnsupportedOrder("multi-index " + to_string() + " exceeds total order 3");
  }
}

MultiIndex MultiIndex::zero(int dims) {
  MultiIndex m;
  m.dims_ = dims;
  return m;
}

MultiIndex MultiIndex::from_span(std::span<const int> orders) {
  if (orders.size() > static_cast<std::size_t>(kMaxDims)) {
    throw ConfigError("multi-index has more than 3 dimensions");
  }
  MultiIndex m;
  for (std::size_t i = 0; i < orders.size(); ++i) {
    if (orders[i] < 0) throw ConfigError("negative derivative order");
    m.orders_[i] = orders[i];
  }
  m.dims_ = static_cast<int>(orders.size());
  if (m.total() > kMaxOrder) {
    throw UnsupportedOrder("multi-index " + m.to_string() + " exceeds total order 3");
  }
  return m;
}

MultiIndex MultiIndex::with_dims(int dims) const {
  for (int i = dims; i < kMaxDims; ++i) {
    if (orders_[static_cast<std::size_t>(i)] != 0) {
      throw ConfigError("multi-index " + to_string() + " does not fit " +
                        std::to_string(dims) + " dimensions");
    }
  }
  MultiIndex m = *this;
  m.dims_ = dims;
  return m;
}

std::string MultiIndex::to_string() const {
  std::string s = "(";
  for (int i = 0; i < dims_; ++i) {
    if (i) s += ",";
    s += std::to_string(orders_[static_cast<std::size_t>(i)]);
  }
  return s + ")";
}

Jet1 jet_sin(double omega, double phi, double x) {
  const double z = omega * x + phi;
  const double s = std::sin(z);
  const double c = std::cos(z);
  return Jet1{{s, omega * c, -omega * omega * s, -omega * omega * omega * c}};
}

SigmoidParts sigmoid_parts(double z) {
  // e = exp(-|z|) never overflows; both branches share the same q and the
  // sign of 1 - 2 sigma flips with z.
  const double e = std::exp(-std::fabs(z));
  const double inv = 1.0 / (1.0 + e);
  const double q = e * inv * inv;
  if (z >= 0.0) {
    return {inv, q, (e - 1.0) * inv};
  }
  return {e * inv, q, (1.0 - e) * inv};
}

Jet1 jet_sigmoid(double w, double b, double x) {
  const auto p = sigmoid_parts(w * x + b);
  // sigma' = q, sigma'' = q (1 - 2 sigma), sigma''' = q (1 - 6 q)
  return Jet1{{p.sigma, w * p.q, w * w * p.q * p.one_m2s,
               w * w * w * p.q * (1.0 - 6.0 * p.q)}};
}

Jet1 jet_mul(const Jet1& a, const Jet1& b) {
  return Jet1{{a[0] * b[0], a[1] * b[0] + a[0] * b[1],
               a[2] * b[0] + 2.0 * a[1] * b[1] + a[0] * b[2],
               a[3] * b[0] + 3.0 * a[2] * b[1] + 3.0 * a[1] * b[2] + a[0] * b[3]}};
}

double separable_partial(std::span<const Jet1> factors, const MultiIndex& idx) {
  if (static_cast<int>(factors.size()) != idx.dims()) {
    throw ConfigError("separable_partial: factor count does not match multi-index");
  }
  double p = 1.0;
  for (std::size_t j = 0; j < factors.size(); ++j) {
    const int o = idx.order(static_cast<int>(j));
    if (o > kMaxOrder) throw UnsupportedOrder("derivative order above 3");
    p *= factors[j][o];
  }
  return p;
}

}  // namespace dnnsolve
