#include "halfline/simd/matvec.hpp"

#include <arm_neon.h>

namespace halfline::simd {

static_assert(panel_rows == 4, "NEON kernel assumes 4 doubles per panel column");

void matvec_neon(const double* panels, std::size_t cols, std::size_t p_begin,
                 std::size_t p_end, const double* x, double* y) {
    for (std::size_t p = p_begin; p < p_end; ++p) {
        const double* a = panels + p * cols * panel_rows;
        float64x2_t lo = vdupq_n_f64(0.0);
        float64x2_t hi = vdupq_n_f64(0.0);
        for (std::size_t j = 0; j < cols; ++j) {
            const float64x2_t xj = vdupq_n_f64(x[j]);
            lo = vaddq_f64(lo, vmulq_f64(vld1q_f64(a + j * panel_rows), xj));
            hi = vaddq_f64(hi, vmulq_f64(vld1q_f64(a + j * panel_rows + 2), xj));
        }
        vst1q_f64(y + p * panel_rows, lo);
        vst1q_f64(y + p * panel_rows + 2, hi);
    }
}

} // namespace halfline::simd
