#include "halfline/operator.hpp"

#include "halfline/error.hpp"
#include "halfline/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace halfline {

namespace {

std::size_t padded_rows(std::size_t n) {
    return (n + simd::panel_rows - 1) / simd::panel_rows * simd::panel_rows;
}

std::string failed_conditions(const ConditionReport& r) {
    std::string out;
    const auto add = [&](bool ok, const char* name) {
        if (!ok) {
            out += out.empty() ? "" : ", ";
            out += name;
        }
    };
    add(r.positivity_ok, "positivity");
    add(r.row_mass_ok(), "row-mass");
    add(r.gamma_nonnegative_ok(), "gamma-nonnegative");
    add(r.gamma_routes_ok(), "gamma-routes");
    add(r.gamma_nontrivial_ok(), "gamma-nontrivial");
    add(r.gamma_tail_ok(), "gamma-tail");
    add(r.symmetry_ok(), "symmetry");
    add(r.domination_ok(), "domination");
    return out;
}

} // namespace

OperatorMatrix::OperatorMatrix(HalfLineGrid grid, std::span<const double> entries,
                               std::vector<double> far_field, std::vector<double> gamma)
    : grid_(std::move(grid)), n_(grid_.size()), far_(std::move(far_field)),
      gamma_(std::move(gamma)) {
    if (entries.size() != n_ * n_) {
        fail(ErrorKind::invalid_argument, "OperatorMatrix: entries must be N*N");
    }
    if (far_.empty()) {
        far_.assign(n_, 0.0);
    }
    if (far_.size() != n_) {
        fail(ErrorKind::invalid_argument, "OperatorMatrix: far_field must have N entries");
    }
    panels_.assign(padded_rows(n_) * n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t base = (i / simd::panel_rows) * n_ * simd::panel_rows + i % simd::panel_rows;
        for (std::size_t j = 0; j < n_; ++j) {
            panels_[base + j * simd::panel_rows] = entries[i * n_ + j];
        }
    }
    row_mass_.assign(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < n_; ++j) {
            sum += entries[i * n_ + j];
        }
        row_mass_[i] = sum + far_[i];
    }
    if (gamma_.empty()) {
        gamma_.resize(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            gamma_[i] = 1.0 - row_mass_[i];
        }
    }
    if (gamma_.size() != n_) {
        fail(ErrorKind::invalid_argument, "OperatorMatrix: gamma must have N entries");
    }
}

void OperatorMatrix::apply(std::span<const double> u, std::span<double> out, int threads) const {
    apply(u, out, simd::active_variant(), threads);
}

void OperatorMatrix::apply(std::span<const double> u, std::span<double> out,
                           simd::Variant variant, int threads) const {
    if (u.size() != n_ || out.size() != n_) {
        fail(ErrorKind::invalid_argument, "OperatorMatrix::apply: size mismatch");
    }
    if (n_ == 0) {
        return;
    }
    const auto kernel = simd::kernel_for(variant);
    const std::size_t n_panels = padded_rows(n_) / simd::panel_rows;
    std::vector<double> y(padded_rows(n_));
    parallel_for(n_panels, threads, [&](std::size_t begin, std::size_t end) {
        kernel(panels_.data(), n_, begin, end, u.data(), y.data());
    });
    const double last = u[n_ - 1];
    for (std::size_t i = 0; i < n_; ++i) {
        out[i] = y[i] + far_[i] * last;
    }
}

double OperatorMatrix::weighted_symmetry_residual() const {
    const auto w = grid_.weights();
    double worst = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = i + 1; j < n_; ++j) {
            worst = std::max(worst, std::abs(w[i] * entry(i, j) - w[j] * entry(j, i)));
        }
    }
    return worst;
}

OperatorMatrix assemble_operator(const KernelFn& kernel, const HalfLineGrid& grid,
                                 std::vector<double> far_field, int threads,
                                 std::vector<double> gamma) {
    const std::size_t n = grid.size();
    const auto nodes = grid.nodes();
    const auto weights = grid.weights();
    std::vector<double> entries(n * n);
    parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                entries[i * n + j] = weights[j] * kernel(nodes[i], nodes[j]);
            }
        }
    });
    return OperatorMatrix(grid, entries, std::move(far_field), std::move(gamma));
}

OperatorMatrix assemble_operator_unchecked(const KernelSpec& spec, const HalfLineGrid& grid,
                                           int threads) {
    validate(spec);
    const std::size_t n = grid.size();
    const auto window = far_field_window(spec, grid);
    const auto nodes = grid.nodes();
    const auto weights = grid.weights();
    std::vector<double> far(n);
    std::vector<double> entries(n * n);
    parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            far[i] = far_field_mass(spec, window, nodes[i]);
            for (std::size_t j = 0; j < n; ++j) {
                entries[i * n + j] = weights[j] * eval_kernel(spec, nodes[i], nodes[j]);
            }
        }
    });
    if (!spec.base.smooth()) {
        // Singularity subtraction: the plain rule misjudges ∫K(x_i,t)dt across
        // the kink at t = x_i, so the diagonal absorbs the difference and each
        // row integrates constants exactly (to the kink-aware row mass).
        const auto mass = row_mass_profile(spec, grid);
        for (std::size_t i = 0; i < n; ++i) {
            double sum = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                sum += entries[i * n + j];
            }
            double& diag = entries[i * n + i];
            diag += mass[i] - far[i] - sum;
            if (!(diag > 0.0)) {
                fail(ErrorKind::numerical_breakdown,
                     "assemble_operator: kink correction left a non-positive diagonal; refine the grid");
            }
        }
    }
    return OperatorMatrix(grid, entries, std::move(far), gamma_profile(spec, grid));
}

OperatorMatrix assemble_operator(const KernelSpec& spec, const HalfLineGrid& grid, double tol,
                                 int threads) {
    const auto report = check_kernel_conditions(spec, grid, 32, tol);
    if (!report.passed()) {
        fail(ErrorKind::spec_rejected,
             "kernel rejected; failed conditions: " + failed_conditions(report));
    }
    return assemble_operator_unchecked(spec, grid, threads);
}

} // namespace halfline
