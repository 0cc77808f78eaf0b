#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference and, on x86-64,
// an AVX2 variant; the variant is picked at runtime from CPU support and the
// FJET_SIMD environment variable ("scalar" or "avx2"). Every kernel treats one
// array element as one lane and performs the same per-element operations as the
// scalar reference, so all variants produce bit-identical output.

#include <cstddef>
#include <span>
#include <string_view>

#include "fjet/detail/rk_stages.hpp"

namespace fjet::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa);

struct KernelTable {
    Isa isa;
    /// Advance (u[i], v[i]) by `steps` RK4 sub-steps of size h starting at t[i].
    void (*rk4_propagate)(const detail::RhsCoeffs& c, const double* t, double* u, double* v,
                          std::size_t n, double h, long steps);
    /// out[i] *= in[i]
    void (*multiply)(double* out, const double* in, std::size_t n);
    /// out[i] += a * x[i]
    void (*axpy)(double* out, double a, const double* x, std::size_t n);
    /// max_i |x[i] - y[i]|
    double (*max_abs_diff)(const double* x, const double* y, std::size_t n);
};

bool available(Isa isa);
const KernelTable& table(Isa isa);

/// Best available table unless FJET_SIMD requests otherwise.
const KernelTable& active();
/// Replaces the active table (used by equivalence tests and benchmarks).
void set_active(Isa isa);

namespace detail_impl {
const KernelTable& scalar_table();
#if defined(__x86_64__) || defined(_M_X64)
const KernelTable& avx2_table();
#endif
}  // namespace detail_impl

}  // namespace fjet::kernels
