// Built with -mavx2 only. Never call into this file without the runtime check
// in kernel_dispatch.cpp.

#include <immintrin.h>

#include "kernels_impl.hpp"

// AVX2 entry points of glibc's libmvec.
extern "C" {
__m256d _ZGVdN4v_sin(__m256d);
__m256d _ZGVdN4v_cos(__m256d);
__m256d _ZGVdN4v_exp(__m256d);
}

namespace dnnsolve::kernels {
namespace {

struct Lane4 {
  static constexpr int W = 4;
  __m256d v;

  static Lane4 load(const double* p) { return {_mm256_loadu_pd(p)}; }
  static Lane4 set1(double x) { return {_mm256_set1_pd(x)}; }
  void store(double* p) const { _mm256_storeu_pd(p, v); }
  double hsum() const {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
  }

  friend Lane4 operator+(Lane4 a, Lane4 b) { return {_mm256_add_pd(a.v, b.v)}; }
  friend Lane4 operator-(Lane4 a, Lane4 b) { return {_mm256_sub_pd(a.v, b.v)}; }
  friend Lane4 operator*(Lane4 a, Lane4 b) { return {_mm256_mul_pd(a.v, b.v)}; }
  friend Lane4 operator/(Lane4 a, Lane4 b) { return {_mm256_div_pd(a.v, b.v)}; }

  static Lane4 abs(Lane4 a) { return {_mm256_andnot_pd(_mm256_set1_pd(-0.0), a.v)}; }
  static Lane4 sin(Lane4 a) { return {_ZGVdN4v_sin(a.v)}; }
  static Lane4 cos(Lane4 a) { return {_ZGVdN4v_cos(a.v)}; }
  static Lane4 exp(Lane4 a) { return {_ZGVdN4v_exp(a.v)}; }
  __m256d nonneg() const { return _mm256_cmp_pd(v, _mm256_setzero_pd(), _CMP_GE_OQ); }
  static Lane4 select(__m256d m, Lane4 a, Lane4 b) { return {_mm256_blendv_pd(b.v, a.v, m)}; }
};

}  // namespace

const KernelSet& avx2_kernels() {
  static const KernelSet k = detail::Impl<Lane4>::table();
  return k;
}

}  // namespace dnnsolve::kernels
