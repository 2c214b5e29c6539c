#pragma once

#include "halfline/kernels.hpp"
#include "halfline/quadrature.hpp"
#include "halfline/simd/matvec.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace halfline {

/// Nyström discretization of ∫_0^∞ K(x,t) u(t) dt on a truncated grid.
///
///   (A u)_i = Σ_j w_j K(x_i, t_j) u_j + far_i · u_{N-1}
///
/// far_i = ∫_{x_max}^∞ K(x_i, t) dt carries the mass beyond the grid; the
/// argument is continued past x_max by its last-node value. Row sums are
/// accumulated in ascending column order by every SIMD variant.
class OperatorMatrix {
public:
    /// `entries` is row-major, entries[i*N + j] = w_j K(x_i, t_j). `gamma`
    /// defaults to 1 - row mass when empty.
    OperatorMatrix(HalfLineGrid grid, std::span<const double> entries,
                   std::vector<double> far_field, std::vector<double> gamma = {});

    std::size_t size() const noexcept { return n_; }
    const HalfLineGrid& grid() const noexcept { return grid_; }

    double entry(std::size_t i, std::size_t j) const noexcept {
        return panels_[((i / simd::panel_rows) * n_ + j) * simd::panel_rows + i % simd::panel_rows];
    }
    std::span<const double> far_field() const noexcept { return far_; }

    /// Σ_j A_ij + far_i.
    std::span<const double> row_mass() const noexcept { return row_mass_; }

    /// γ_i. For catalog kernels this is the complement form, accurate where
    /// 1 - row_mass has lost every significant digit.
    std::span<const double> gamma() const noexcept { return gamma_; }

    /// out = A u (including the far-field column), rows split over `threads`.
    void apply(std::span<const double> u, std::span<double> out, int threads = 1) const;

    /// Same, with an explicit SIMD variant.
    void apply(std::span<const double> u, std::span<double> out, simd::Variant variant,
               int threads) const;

    /// max_{i,j} |w_i A_ij - w_j A_ji|. Zero up to rounding for a symmetric kernel.
    double weighted_symmetry_residual() const;

private:
    HalfLineGrid grid_;
    std::size_t n_ = 0;
    std::vector<double> panels_;
    std::vector<double> far_;
    std::vector<double> row_mass_;
    std::vector<double> gamma_;
};

using KernelFn = std::function<double(double, double)>;

/// Assembles from an arbitrary kernel callable; far_field is supplied by the caller.
OperatorMatrix assemble_operator(const KernelFn& kernel, const HalfLineGrid& grid,
                                 std::vector<double> far_field, int threads = 1,
                                 std::vector<double> gamma = {});

/// Assembles a catalog kernel after check_kernel_conditions passes at `tol`.
/// Throws Error(spec_rejected) naming the failed condition otherwise.
OperatorMatrix assemble_operator(const KernelSpec& spec, const HalfLineGrid& grid,
                                 double tol = 1e-10, int threads = 1);

/// Assembles without running the condition checks.
OperatorMatrix assemble_operator_unchecked(const KernelSpec& spec, const HalfLineGrid& grid,
                                           int threads = 1);

} // namespace halfline
