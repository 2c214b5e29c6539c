#include "halfline/simd/matvec.hpp"

#include <immintrin.h>

namespace halfline::simd {

static_assert(panel_rows == 4, "AVX2 kernel assumes 4 doubles per panel column");

// mul + add, never fmadd: the scalar reference rounds the product first.
void matvec_avx2(const double* panels, std::size_t cols, std::size_t p_begin,
                 std::size_t p_end, const double* x, double* y) {
    std::size_t p = p_begin;
    for (; p + 2 <= p_end; p += 2) {
        const double* a0 = panels + p * cols * panel_rows;
        const double* a1 = a0 + cols * panel_rows;
        __m256d acc0 = _mm256_setzero_pd();
        __m256d acc1 = _mm256_setzero_pd();
        for (std::size_t j = 0; j < cols; ++j) {
            const __m256d xj = _mm256_broadcast_sd(x + j);
            acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a0 + j * panel_rows), xj));
            acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(_mm256_loadu_pd(a1 + j * panel_rows), xj));
        }
        _mm256_storeu_pd(y + p * panel_rows, acc0);
        _mm256_storeu_pd(y + (p + 1) * panel_rows, acc1);
    }
    for (; p < p_end; ++p) {
        const double* a0 = panels + p * cols * panel_rows;
        __m256d acc0 = _mm256_setzero_pd();
        for (std::size_t j = 0; j < cols; ++j) {
            const __m256d xj = _mm256_broadcast_sd(x + j);
            acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a0 + j * panel_rows), xj));
        }
        _mm256_storeu_pd(y + p * panel_rows, acc0);
    }
}

} // namespace halfline::simd
