// Compiled with -mavx2 (no -mfma). Only reached after a runtime CPU check.

#include <immintrin.h>

#include <cmath>

#include "fjet/kernels.hpp"

namespace fjet::kernels {
namespace {

struct Vec4 {
    __m256d r;
};

inline Vec4 broadcast(double x) { return {_mm256_set1_pd(x)}; }
inline Vec4 operator+(Vec4 a, Vec4 b) { return {_mm256_add_pd(a.r, b.r)}; }
inline Vec4 operator-(Vec4 a, Vec4 b) { return {_mm256_sub_pd(a.r, b.r)}; }
inline Vec4 operator*(Vec4 a, Vec4 b) { return {_mm256_mul_pd(a.r, b.r)}; }
inline Vec4 operator+(Vec4 a, double b) { return a + broadcast(b); }
inline Vec4 operator*(Vec4 a, double b) { return a * broadcast(b); }
inline Vec4 operator/(Vec4 a, double b) { return {_mm256_div_pd(a.r, _mm256_set1_pd(b))}; }
inline Vec4 operator-(Vec4 a) { return {_mm256_xor_pd(a.r, _mm256_set1_pd(-0.0))}; }

struct Avx2Lanes {
    static Vec4 sin(Vec4 x) {
        alignas(32) double lanes[4];
        _mm256_store_pd(lanes, x.r);
        for (double& l : lanes) l = std::sin(l);
        return {_mm256_load_pd(lanes)};
    }
    static Vec4 cos(Vec4 x) {
        alignas(32) double lanes[4];
        _mm256_store_pd(lanes, x.r);
        for (double& l : lanes) l = std::cos(l);
        return {_mm256_load_pd(lanes)};
    }
};

void rk4_propagate_avx2(const detail::RhsCoeffs& c, const double* t, double* u, double* v,
                        std::size_t n, double h, long steps) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const Vec4 tv{_mm256_loadu_pd(t + i)};
        Vec4 uv{_mm256_loadu_pd(u + i)};
        Vec4 vv{_mm256_loadu_pd(v + i)};
        detail::rk4_propagate<Vec4, Avx2Lanes>(c, tv, uv, vv, h, steps);
        _mm256_storeu_pd(u + i, uv.r);
        _mm256_storeu_pd(v + i, vv.r);
    }
    if (i == n) return;
    // Tail: pad to a full vector; unused lanes carry zeros and are discarded.
    alignas(32) double tb[4] = {0, 0, 0, 0};
    alignas(32) double ub[4] = {0, 0, 0, 0};
    alignas(32) double vb[4] = {0, 0, 0, 0};
    const std::size_t rem = n - i;
    for (std::size_t k = 0; k < rem; ++k) {
        tb[k] = t[i + k];
        ub[k] = u[i + k];
        vb[k] = v[i + k];
    }
    const Vec4 tv{_mm256_load_pd(tb)};
    Vec4 uv{_mm256_load_pd(ub)};
    Vec4 vv{_mm256_load_pd(vb)};
    detail::rk4_propagate<Vec4, Avx2Lanes>(c, tv, uv, vv, h, steps);
    _mm256_store_pd(ub, uv.r);
    _mm256_store_pd(vb, vv.r);
    for (std::size_t k = 0; k < rem; ++k) {
        u[i + k] = ub[k];
        v[i + k] = vb[k];
    }
}

void multiply_avx2(double* out, const double* in, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(out + i), _mm256_loadu_pd(in + i)));
    }
    for (; i < n; ++i) out[i] *= in[i];
}

void axpy_avx2(double* out, double a, const double* x, std::size_t n) {
    const __m256d av = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d prod = _mm256_mul_pd(av, _mm256_loadu_pd(x + i));
        _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(out + i), prod));
    }
    for (; i < n; ++i) out[i] = out[i] + a * x[i];
}

// Finite inputs only: NaN propagation differs from the scalar fmax.
double max_abs_diff_avx2(const double* x, const double* y, std::size_t n) {
    const __m256d sign = _mm256_set1_pd(-0.0);
    __m256d m = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        m = _mm256_max_pd(m, _mm256_andnot_pd(sign, d));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, m);
    double best = lanes[0];
    for (int k = 1; k < 4; ++k) best = lanes[k] > best ? lanes[k] : best;
    for (; i < n; ++i) {
        const double d = std::fabs(x[i] - y[i]);
        best = d > best ? d : best;
    }
    return best;
}

}  // namespace

const KernelTable& detail_impl::avx2_table() {
    static const KernelTable table{Isa::Avx2, rk4_propagate_avx2, multiply_avx2, axpy_avx2,
                                   max_abs_diff_avx2};
    return table;
}

}  // namespace fjet::kernels
