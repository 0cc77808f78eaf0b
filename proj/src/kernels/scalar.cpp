#include <cmath>

#include "fjet/kernels.hpp"

namespace fjet::kernels {
namespace {

struct ScalarLanes {
    static double sin(double x) { return std::sin(x); }
    static double cos(double x) { return std::cos(x); }
};

void rk4_propagate_scalar(const detail::RhsCoeffs& c, const double* t, double* u, double* v,
                          std::size_t n, double h, long steps) {
    for (std::size_t i = 0; i < n; ++i) {
        detail::rk4_propagate<double, ScalarLanes>(c, t[i], u[i], v[i], h, steps);
    }
}

void multiply_scalar(double* out, const double* in, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] *= in[i];
}

void axpy_scalar(double* out, double a, const double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = out[i] + a * x[i];
}

double max_abs_diff_scalar(const double* x, const double* y, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::fmax(m, std::fabs(x[i] - y[i]));
    return m;
}

}  // namespace

const KernelTable& detail_impl::scalar_table() {
    static const KernelTable table{Isa::Scalar, rk4_propagate_scalar, multiply_scalar, axpy_scalar,
                                   max_abs_diff_scalar};
    return table;
}

}  // namespace fjet::kernels
