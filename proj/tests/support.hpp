#pragma once

#include "halfline/error.hpp"
#include "halfline/kernels.hpp"
#include "halfline/nonlinearity.hpp"

#include <optional>

namespace halfline::testing {

/// Kind of the halfline::Error thrown by f, or nullopt if none was thrown.
template <class F>
std::optional<ErrorKind> thrown_kind(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return std::nullopt;
}

inline KernelSpec catalog_kernel(KernelFamily family) {
    KernelSpec k;
    k.family = family;
    return k;
}

/// Catalog nonlinearity with the default exponents (α̃ = 0.25, α* = 0.75 for III).
inline NonlinearitySpec catalog_g(GFamily family) {
    return family == GFamily::III ? make_nonlinearity(family, 0.5, 0.75, 0.25)
                                  : make_nonlinearity(family, 0.5, 0.5, 0.25);
}

/// Family C with λ ≡ 1 (d* = 1), Gaussian base.
inline KernelSpec unmodulated_c(double epsilon = 0.5) {
    KernelSpec k;
    k.family = KernelFamily::C;
    k.modulation.d_star = 1.0;
    k.epsilon = epsilon;
    return k;
}

} // namespace halfline::testing
