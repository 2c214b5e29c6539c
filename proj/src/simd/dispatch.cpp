#include "halfline/simd/matvec.hpp"

#include "halfline/error.hpp"

#include <atomic>
#include <string>

namespace halfline::simd {

namespace {

bool cpu_has_avx2() noexcept {
#if defined(HALFLINE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

std::atomic<Variant>& active_slot() noexcept {
    static std::atomic<Variant> slot{best_variant()};
    return slot;
}

} // namespace

const char* to_string(Variant v) noexcept {
    switch (v) {
    case Variant::scalar: return "scalar";
    case Variant::avx2: return "avx2";
    case Variant::neon: return "neon";
    }
    return "unknown";
}

bool available(Variant v) noexcept {
    switch (v) {
    case Variant::scalar:
        return true;
    case Variant::avx2:
        return cpu_has_avx2();
    case Variant::neon:
#if defined(HALFLINE_HAVE_NEON)
        return true;
#else
        return false;
#endif
    }
    return false;
}

std::vector<Variant> available_variants() {
    std::vector<Variant> out;
    for (auto v : {Variant::scalar, Variant::avx2, Variant::neon}) {
        if (available(v)) {
            out.push_back(v);
        }
    }
    return out;
}

Variant best_variant() noexcept {
    if (available(Variant::avx2)) {
        return Variant::avx2;
    }
    if (available(Variant::neon)) {
        return Variant::neon;
    }
    return Variant::scalar;
}

Variant active_variant() noexcept {
    return active_slot().load(std::memory_order_relaxed);
}

void set_active_variant(Variant v) {
    if (!available(v)) {
        fail(ErrorKind::invalid_argument,
             std::string("SIMD variant not available on this machine: ") + to_string(v));
    }
    active_slot().store(v, std::memory_order_relaxed);
}

MatvecKernel kernel_for(Variant v) {
    if (!available(v)) {
        fail(ErrorKind::invalid_argument,
             std::string("SIMD variant not available on this machine: ") + to_string(v));
    }
    switch (v) {
#if defined(HALFLINE_HAVE_AVX2)
    case Variant::avx2:
        return &matvec_avx2;
#endif
#if defined(HALFLINE_HAVE_NEON)
    case Variant::neon:
        return &matvec_neon;
#endif
    default:
        return &matvec_scalar;
    }
}

} // namespace halfline::simd
