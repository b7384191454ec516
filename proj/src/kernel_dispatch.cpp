#include <algorithm>
#include <cstdlib>
#include <string>

#include "dnnsolve/errors.hpp"
#include "dnnsolve/kernels.hpp"

namespace dnnsolve::kernels {

#if defined(DNNSOLVE_BUILD_AVX2)
const KernelSet& avx2_kernels();
#endif

bool avx2_available() {
#if defined(DNNSOLVE_BUILD_AVX2)
  static const bool ok = __builtin_cpu_supports("avx2");
  return ok;
#else
  return false;
#endif
}

Backend resolve(Backend requested) {
  if (requested != Backend::Auto) return requested;
  if (const char* env = std::getenv("DNNSOLVE_SIMD")) {
    const std::string v(env);
    if (v == "scalar") return Backend::Scalar;
    if (v == "avx2") return Backend::Avx2;
  }
  return avx2_available() ? Backend::Avx2 : Backend::Scalar;
}

std::string_view name(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return "scalar";
    case Backend::Avx2:
      return "avx2";
    default:
      return "auto";
  }
}

const KernelSet& select(Backend b) {
  b = resolve(b);
  if (b == Backend::Avx2) {
#if defined(DNNSOLVE_BUILD_AVX2)
    if (avx2_available()) return avx2_kernels();
#endif
    throw ConfigError("avx2 kernels requested but not available");
  }
  return scalar_kernels();
}

Packed::Packed(const NetParams& theta)
    : n(theta.neurons), np(padded(theta.neurons)), dims(theta.dims), outputs(theta.outputs) {
  const auto snp = static_cast<std::size_t>(np);
  auto pack_layer = [&](const std::vector<double>& src, std::vector<double>& dst) {
    dst.assign(static_cast<std::size_t>(dims) * snp, 0.0);
    for (int j = 0; j < dims; ++j)
      for (int k = 0; k < n; ++k)
        dst[static_cast<std::size_t>(j) * snp + static_cast<std::size_t>(k)] =
            src[static_cast<std::size_t>(j * n + k)];
  };
  pack_layer(theta.omega, omega);
  pack_layer(theta.phi, phi);
  pack_layer(theta.w, w);
  pack_layer(theta.b, b);
  dF.assign(static_cast<std::size_t>(outputs) * snp, 0.0);
  dS = dF;
  dG = dF;
  for (int l = 0; l < outputs; ++l) {
    for (int k = 0; k < n; ++k) {
      const std::size_t at = static_cast<std::size_t>(l) * snp + static_cast<std::size_t>(k);
      dF[at] = theta.amp(l, 0, k);
      dS[at] = theta.amp(l, 1, k);
      dG[at] = theta.amp(l, 2, k);
    }
  }
  a = theta.a;
}

IndexPlan::IndexPlan(std::span<const MultiIndex> needed, int dims) {
  slot_of.fill(-1);
  for (const auto& raw : needed) {
    const MultiIndex mi = raw.with_dims(dims);
    if (slot_of[static_cast<std::size_t>(mi.code())] >= 0) continue;
    slot_of[static_cast<std::size_t>(mi.code())] = static_cast<int>(indices.size());
    indices.push_back(mi);
    for (int j = 0; j < dims; ++j)
      max_order[static_cast<std::size_t>(j)] =
          std::max(max_order[static_cast<std::size_t>(j)], mi.order(j));
  }
}

void PointBuffers::reserve(const Packed& p, const IndexPlan& plan) {
  np = p.np;
  dims = p.dims;
  nidx = plan.size();
  const auto snp = static_cast<std::size_t>(np);
  const auto sd = static_cast<std::size_t>(dims);
  raw.assign(5 * sd * snp, 0.0);
  factors.assign(static_cast<std::size_t>(kFamilies) * sd * 4 * snp, 0.0);
  prods.assign(3 * static_cast<std::size_t>(nidx) * snp, 0.0);
}

GradAccum::GradAccum(const Packed& p) : np(p.np), dims(p.dims), outputs(p.outputs) {
  const auto layer = static_cast<std::size_t>(dims) * static_cast<std::size_t>(np);
  const auto out = static_cast<std::size_t>(outputs) * static_cast<std::size_t>(np);
  omega.assign(layer, 0.0);
  phi = omega;
  w = omega;
  b = omega;
  dF.assign(out, 0.0);
  dS = dF;
  dG = dF;
  a.assign(static_cast<std::size_t>(outputs), 0.0);
}

namespace {
template <class F>
void each_block(GradAccum& g, F&& f) {
  f(g.omega);
  f(g.phi);
  f(g.w);
  f(g.b);
  f(g.dF);
  f(g.dS);
  f(g.dG);
  f(g.a);
}
}  // namespace

void GradAccum::clear() {
  each_block(*this, [](std::vector<double>& v) { std::fill(v.begin(), v.end(), 0.0); });
}

void GradAccum::add(const GradAccum& o) {
  auto& self = *this;
  auto add_vec = [](std::vector<double>& x, const std::vector<double>& y) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += y[i];
  };
  add_vec(self.omega, o.omega);
  add_vec(self.phi, o.phi);
  add_vec(self.w, o.w);
  add_vec(self.b, o.b);
  add_vec(self.dF, o.dF);
  add_vec(self.dS, o.dS);
  add_vec(self.dG, o.dG);
  add_vec(self.a, o.a);
}

void GradAccum::scale(double s) {
  each_block(*this, [s](std::vector<double>& v) {
    for (auto& x : v) x *= s;
  });
}

void GradAccum::to_flat(const NetParams& shape, std::span<double> out) const {
  const int n = shape.neurons;
  const auto snp = static_cast<std::size_t>(np);
  std::size_t at = 0;
  for (const auto* layer : {&omega, &phi, &w, &b}) {
    for (int j = 0; j < dims; ++j)
      for (int k = 0; k < n; ++k)
        out[at++] = (*layer)[static_cast<std::size_t>(j) * snp + static_cast<std::size_t>(k)];
  }
  for (int l = 0; l < outputs; ++l) {
    for (const auto* branch : {&dF, &dS, &dG})
      for (int k = 0; k < n; ++k)
        out[at++] = (*branch)[static_cast<std::size_t>(l) * snp + static_cast<std::size_t>(k)];
  }
  for (int l = 0; l < outputs; ++l) out[at++] = a[static_cast<std::size_t>(l)];
}

}  // namespace dnnsolve::kernels
