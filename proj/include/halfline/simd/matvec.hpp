#pragma once

#include <cstddef>
#include <vector>

// Dense mat-vec over row-interleaved panels.
//
// The matrix is stored as panels of `panel_rows` consecutive rows; within a
// panel, column j occupies `panel_rows` contiguous doubles, one per row:
//
//   element (i, j) -> data[((i / panel_rows) * cols + j) * panel_rows + i % panel_rows]
//
// Every variant accumulates each row in ascending column order with separate
// multiply and add, so all variants produce bit-identical results.

namespace halfline::simd {

inline constexpr std::size_t panel_rows = 4;

enum class Variant { scalar, avx2, neon };

const char* to_string(Variant v) noexcept;

/// y[p*panel_rows + r] = Σ_j A(p*panel_rows + r, j) x[j] for panels [p_begin, p_end).
using MatvecKernel = void (*)(const double* panels, std::size_t cols, std::size_t p_begin,
                              std::size_t p_end, const double* x, double* y);

void matvec_scalar(const double* panels, std::size_t cols, std::size_t p_begin,
                   std::size_t p_end, const double* x, double* y);
#if defined(HALFLINE_HAVE_AVX2)
void matvec_avx2(const double* panels, std::size_t cols, std::size_t p_begin,
                 std::size_t p_end, const double* x, double* y);
#endif
#if defined(HALFLINE_HAVE_NEON)
void matvec_neon(const double* panels, std::size_t cols, std::size_t p_begin,
                 std::size_t p_end, const double* x, double* y);
#endif

/// Compiled in and supported by the running CPU.
bool available(Variant v) noexcept;
std::vector<Variant> available_variants();

/// Widest available variant.
Variant best_variant() noexcept;

/// Process-wide selection; starts at best_variant().
Variant active_variant() noexcept;

/// Throws Error(invalid_argument) if the variant is not available.
void set_active_variant(Variant v);

MatvecKernel kernel_for(Variant v);

} // namespace halfline::simd
