#include "halfline/simd/matvec.hpp"

namespace halfline::simd {

void matvec_scalar(const double* panels, std::size_t cols, std::size_t p_begin,
                   std::size_t p_end, const double* x, double* y) {
    for (std::size_t p = p_begin; p < p_end; ++p) {
        const double* panel = panels + p * cols * panel_rows;
        for (std::size_t r = 0; r < panel_rows; ++r) {
            double acc = 0.0;
            for (std::size_t j = 0; j < cols; ++j) {
                acc += panel[j * panel_rows + r] * x[j];
            }
            y[p * panel_rows + r] = acc;
        }
    }
}

} // namespace halfline::simd
