// AVX2 variants of the GF(q) row kernels.
//
// Residues are widened to doubles: for q < 2^26 the product f * x < 2^52 is
// exact, the quotient estimate floor(f * x / q) is off by at most one, and the
// remainder is corrected with two compares.

#include "pnforms/row_kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace pnforms::kernels::avx2 {

namespace {

__attribute__((target("avx2,fma"))) inline __m256d mulmod(__m256d a, __m256d f, __m256d q, __m256d inv_q) {
  const __m256d prod = _mm256_mul_pd(a, f);
  const __m256d quot = _mm256_floor_pd(_mm256_mul_pd(prod, inv_q));
  __m256d r = _mm256_fnmadd_pd(quot, q, prod);
  // r in [-q, 2q)
  r = _mm256_add_pd(r, _mm256_and_pd(_mm256_cmp_pd(r, _mm256_setzero_pd(), _CMP_LT_OQ), q));
  r = _mm256_sub_pd(r, _mm256_and_pd(_mm256_cmp_pd(r, q, _CMP_GE_OQ), q));
  return r;
}

}  // namespace

__attribute__((target("avx2,fma"))) void submul(std::uint32_t* dst, const std::uint32_t* src, std::size_t n,
                                                 std::uint32_t f, std::uint32_t q) {
  if (q >= kVectorModulusLimit) {
    scalar::submul(dst, src, n, f, q);
    return;
  }
  const __m256d vq = _mm256_set1_pd(static_cast<double>(q));
  const __m256d vinv = _mm256_set1_pd(1.0 / static_cast<double>(q));
  const __m256d vf = _mm256_set1_pd(static_cast<double>(f));
  const __m256d zero = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m128i s32 = _mm_loadu_si128(reinterpret_cast<const __m128i*>(src + j));
    const __m128i d32 = _mm_loadu_si128(reinterpret_cast<const __m128i*>(dst + j));
    const __m256d prod = mulmod(_mm256_cvtepi32_pd(s32), vf, vq, vinv);
    __m256d diff = _mm256_sub_pd(_mm256_cvtepi32_pd(d32), prod);
    diff = _mm256_add_pd(diff, _mm256_and_pd(_mm256_cmp_pd(diff, zero, _CMP_LT_OQ), vq));
    _mm_storeu_si128(reinterpret_cast<__m128i*>(dst + j), _mm256_cvttpd_epi32(diff));
  }
  scalar::submul(dst + j, src + j, n - j, f, q);
}

__attribute__((target("avx2,fma"))) void scale(std::uint32_t* v, std::size_t n, std::uint32_t f, std::uint32_t q) {
  if (q >= kVectorModulusLimit) {
    scalar::scale(v, n, f, q);
    return;
  }
  const __m256d vq = _mm256_set1_pd(static_cast<double>(q));
  const __m256d vinv = _mm256_set1_pd(1.0 / static_cast<double>(q));
  const __m256d vf = _mm256_set1_pd(static_cast<double>(f));
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m128i x32 = _mm_loadu_si128(reinterpret_cast<const __m128i*>(v + j));
    const __m256d r = mulmod(_mm256_cvtepi32_pd(x32), vf, vq, vinv);
    _mm_storeu_si128(reinterpret_cast<__m128i*>(v + j), _mm256_cvttpd_epi32(r));
  }
  scalar::scale(v + j, n - j, f, q);
}

}  // namespace pnforms::kernels::avx2

#endif
