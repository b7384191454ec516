#include "dnnsolve/taylor.hpp"

#include <cmath>

namespace dnnsolve {
namespace {

struct Tables {
  std::array<std::array<int, 3>, Taylor::kTerms> index{};
  std::array<double, Taylor::kTerms> factorial{};  // alpha!
  std::array<int, 64> position{};                  // code -> term, -1 if absent
  struct Pair {
    int a, b, out;
  };
  std::vector<Pair> products;

  Tables() {
    position.fill(-1);
    int n = 0;
    for (int total = 0; total <= 3; ++total) {
      for (int i = total; i >= 0; --i) {
        for (int j = total - i; j >= 0; --j) {
          const int k = total - i - j;
          index[static_cast<std::size_t>(n)] = {i, j, k};
          static constexpr double fact[] = {1, 1, 2, 6};
          factorial[static_cast<std::size_t>(n)] = fact[i] * fact[j] * fact[k];
          position[static_cast<std::size_t>(i + 4 * j + 16 * k)] = n;
          ++n;
        }
      }
    }
    for (int a = 0; a < Taylor::kTerms; ++a) {
      for (int b = 0; b < Taylor::kTerms; ++b) {
        const auto& ia = index[static_cast<std::size_t>(a)];
        const auto& ib = index[static_cast<std::size_t>(b)];
        const int s0 = ia[0] + ib[0], s1 = ia[1] + ib[1], s2 = ia[2] + ib[2];
        if (s0 + s1 + s2 > 3) continue;
        products.push_back({a, b, position[static_cast<std::size_t>(s0 + 4 * s1 + 16 * s2)]});
      }
    }
  }
};

const Tables& tables() {
  static const Tables t;
  return t;
}

}  // namespace

Taylor Taylor::variable(int axis, double x0) {
  Taylor t(x0);
  int code = 1;
  for (int i = 0; i < axis; ++i) code *= 4;
  t.c_[static_cast<std::size_t>(tables().position[static_cast<std::size_t>(code)])] = 1.0;
  return t;
}

double Taylor::partial(const MultiIndex& idx) const {
  const int pos = tables().position[static_cast<std::size_t>(idx.code())];
  return c_[static_cast<std::size_t>(pos)] * tables().factorial[static_cast<std::size_t>(pos)];
}

Taylor operator+(const Taylor& a, const Taylor& b) {
  Taylor r;
  for (int i = 0; i < Taylor::kTerms; ++i) r.c_[i] = a.c_[i] + b.c_[i];
  return r;
}

Taylor operator-(const Taylor& a, const Taylor& b) {
  Taylor r;
  for (int i = 0; i < Taylor::kTerms; ++i) r.c_[i] = a.c_[i] - b.c_[i];
  return r;
}

Taylor operator-(const Taylor& a) {
  Taylor r;
  for (int i = 0; i < Taylor::kTerms; ++i) r.c_[i] = -a.c_[i];
  return r;
}

Taylor operator*(const Taylor& a, const Taylor& b) {
  Taylor r;
  for (const auto& p : tables().products) {
    r.c_[static_cast<std::size_t>(p.out)] +=
        a.c_[static_cast<std::size_t>(p.a)] * b.c_[static_cast<std::size_t>(p.b)];
  }
  return r;
}

Taylor operator/(const Taylor& a, const Taylor& b) {
  const double v = b.value();
  const double inv = 1.0 / v;
  return a * b.compose({inv, -inv * inv, 2.0 * inv * inv * inv, -6.0 * inv * inv * inv * inv});
}

Taylor Taylor::compose(const std::array<double, 4>& d) const {
  Taylor h = *this;
  h.c_[0] = 0.0;
  const Taylor h2 = h * h;
  const Taylor h3 = h2 * h;
  Taylor r;
  for (int i = 0; i < kTerms; ++i) {
    r.c_[i] = d[1] * h.c_[i] + d[2] / 2.0 * h2.c_[i] + d[3] / 6.0 * h3.c_[i];
  }
  r.c_[0] = d[0];
  return r;
}

Taylor sin(const Taylor& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return a.compose({s, c, -s, -c});
}

Taylor cos(const Taylor& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return a.compose({c, -s, -c, s});
}

Taylor exp(const Taylor& a) {
  const double e = std::exp(a.value());
  return a.compose({e, e, e, e});
}

Taylor expm1(const Taylor& a) {
  const double e = std::exp(a.value());
  return a.compose({std::expm1(a.value()), e, e, e});
}

Taylor log(const Taylor& a) {
  const double inv = 1.0 / a.value();
  return a.compose({std::log(a.value()), inv, -inv * inv, 2.0 * inv * inv * inv});
}

Taylor sqrt(const Taylor& a) { return pow(a, 0.5); }

Taylor cosh(const Taylor& a) {
  const double ch = std::cosh(a.value()), sh = std::sinh(a.value());
  return a.compose({ch, sh, ch, sh});
}

Taylor tanh(const Taylor& a) {
  const double t = std::tanh(a.value());
  const double s2 = 1.0 - t * t;  // sech^2
  return a.compose({t, s2, -2.0 * t * s2, s2 * (6.0 * t * t - 2.0)});
}

Taylor pow(const Taylor& a, double p) {
  const double x = a.value();
  return a.compose({std::pow(x, p), p * std::pow(x, p - 1.0),
                    p * (p - 1.0) * std::pow(x, p - 2.0),
                    p * (p - 1.0) * (p - 2.0) * std::pow(x, p - 3.0)});
}

}  // namespace dnnsolve
