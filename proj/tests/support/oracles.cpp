#include "oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace fjet::testing {

std::vector<double> normal_equations_solve(const std::vector<std::vector<double>>& cols,
                                           const std::vector<double>& y) {
    const std::size_t k = cols.size();
    std::vector<double> g(k * k, 0.0);
    std::vector<double> b(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            long double s = 0.0;
            for (std::size_t r = 0; r < y.size(); ++r) s += static_cast<long double>(cols[i][r]) * cols[j][r];
            g[i * k + j] = g[j * k + i] = static_cast<double>(s);
        }
        long double s = 0.0;
        for (std::size_t r = 0; r < y.size(); ++r) s += static_cast<long double>(cols[i][r]) * y[r];
        b[i] = static_cast<double>(s);
    }
    // Cholesky G = L L^T, in place in the lower triangle.
    std::vector<double> l(k * k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = g[i * k + j];
            for (std::size_t m = 0; m < j; ++m) s -= l[i * k + m] * l[j * k + m];
            if (i == j) {
                if (!(s > 0.0)) throw std::runtime_error("Gram matrix is not positive definite");
                l[i * k + i] = std::sqrt(s);
            } else {
                l[i * k + j] = s / l[j * k + j];
            }
        }
    }
    std::vector<double> z(k);
    for (std::size_t i = 0; i < k; ++i) {
        double s = b[i];
        for (std::size_t m = 0; m < i; ++m) s -= l[i * k + m] * z[m];
        z[i] = s / l[i * k + i];
    }
    std::vector<double> x(k);
    for (std::size_t ii = k; ii-- > 0;) {
        double s = z[ii];
        for (std::size_t m = ii + 1; m < k; ++m) s -= l[m * k + ii] * x[m];
        x[ii] = s / l[ii * k + ii];
    }
    return x;
}

double finite_difference(const FeatureExpr& f, Var var, UpdateRecord rec, double h) {
    double* slot = nullptr;
    switch (var) {
        case Var::U: slot = &rec.u; break;
        case Var::V: slot = &rec.v; break;
        case Var::T: slot = &rec.t; break;
        case Var::P: slot = &rec.p; break;
        case Var::Pdot: slot = &rec.pdot; break;
    }
    const double x = *slot;
    *slot = x + h;
    const double fp = fjet::evaluate(f, rec);
    *slot = x - h;
    const double fm = fjet::evaluate(f, rec);
    return (fp - fm) / (2.0 * h);
}

double evaluate(const LinearCombination& lc, const UpdateRecord& rec) {
    double s = 0.0;
    for (const auto& t : lc) s += t.coeff * fjet::evaluate(t.feature, rec);
    return s;
}

std::array<double, 4> rk4_ho_normalized(double e, double w, double g) {
    const double w2 = w * w;
    const double a1 = -(e / 6.0) * w2 * (3.0 - 2.0 * e * g + e * e * g * g - 0.25 * e * e * w2);
    const double a2 = (6.0 - 6.0 * e * g + 4.0 * e * e * g * g - 2.0 * e * e * e * g * g * g - e * e * w2 +
                       e * e * e * g * w2) / 6.0;
    const double b1 = -w2 * (6.0 - 6.0 * e * g + 4.0 * e * e * g * g - 2.0 * e * e * e * g * g * g - e * e * w2 +
                             e * e * e * g * w2) / 6.0;
    const double b2 = (-12.0 * g + 12.0 * e * g * g - 8.0 * e * e * g * g * g + 4.0 * e * e * e * g * g * g * g -
                       3.0 * e * w2 + e * e * e / 4.0 * w2 * w2 + 4.0 * e * e * g * w2 -
                       3.0 * e * e * e * g * g * w2) / 6.0;
    return {a1, a2, b1, b2};
}

std::array<double, 4> rk2_ho_raw(double e, double w, double g) {
    const double w2 = w * w;
    return {e * (-e / 2.0 * w2), e * (1.0 - e * g), e * (-w2 * (1.0 - e * g)),
            e * (-2.0 * g * (1.0 - e * g) - e / 2.0 * w2)};
}

std::array<double, 2> ho_solution(double w0, double g, double u0, double v0, double t) {
    const double w = std::sqrt(w0 * w0 - g * g);
    const double c1 = u0;
    const double c2 = (v0 + g * u0) / w;
    const double env = std::exp(-g * t);
    const double c = std::cos(w * t), s = std::sin(w * t);
    const double u = env * (c1 * c + c2 * s);
    const double v = -g * u + env * (-c1 * w * s + c2 * w * c);
    return {u, v};
}

double observed_order(Scheme scheme, const std::vector<double>& eps_list) {
    const SystemSpec spec = harmonic_oscillator(1.0, 0.0);
    std::vector<double> lx, ly;
    for (double eps : eps_list) {
        const auto exact = ho_solution(1.0, 0.0, 1.0, 0.0, eps);
        const State s = step(scheme, spec, 0.0, State(1.0, 0.0), eps);
        lx.push_back(std::log(eps));
        ly.push_back(std::log(std::hypot(s.u() - exact[0], s.v() - exact[1])));
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(lx.size());
    my /= static_cast<double>(ly.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    return sxy / sxx;
}

}  // namespace fjet::testing
