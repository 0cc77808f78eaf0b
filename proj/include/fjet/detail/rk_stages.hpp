#pragma once

// Right-hand sides and explicit Runge-Kutta stages written once over a value
// type V. V is `double` for the scalar path and a 4-lane vector for the AVX2
// kernels; both instantiations perform the same IEEE operations in the same
// order, so batched propagation is bit-identical to the scalar reference.
//
// Requirements on V: V±V, V*V, V*double, V+double, V/double, unary minus.
// `Lanes` supplies lane-wise sin and cos.

#include "fjet/systems.hpp"

namespace fjet {

enum class Scheme { Euler, RK2, RK4 };

namespace detail {

struct RhsCoeffs {
    SystemKind kind = SystemKind::HarmonicOscillator;
    double two_gamma = 0.0;
    double omega0_sq = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double amplitude = 0.0;
    double frequency = 0.0;
};

RhsCoeffs rhs_coeffs(const SystemSpec& spec);

template <class V, class Lanes>
inline V accel(const RhsCoeffs& c, const V& t, const V& u, const V& v) {
    switch (c.kind) {
        case SystemKind::HarmonicOscillator:
            return -(v * c.two_gamma) - u * c.omega0_sq;
        case SystemKind::Pendulum:
            return -(v * c.two_gamma) - Lanes::sin(u) * c.omega0_sq;
        case SystemKind::Duffing:
            return -(v * c.two_gamma) - u * c.alpha - (u * u * u) * c.beta +
                   Lanes::cos(t * c.frequency) * c.amplitude;
    }
    return u;  // unreachable
}

/// One step of size h from (t, u, v); u and v are updated in place.
template <class V, class Lanes>
inline void rk_step(Scheme scheme, const RhsCoeffs& c, const V& t, V& u, V& v, double h) {
    const double half = h * 0.5;
    const V k1u = v * h;
    const V k1v = accel<V, Lanes>(c, t, u, v) * h;
    if (scheme == Scheme::Euler) {
        u = u + k1u;
        v = v + k1v;
        return;
    }
    const V t_mid = t + half;
    const V u2 = u + k1u * 0.5;
    const V v2 = v + k1v * 0.5;
    const V k2u = v2 * h;
    const V k2v = accel<V, Lanes>(c, t_mid, u2, v2) * h;
    if (scheme == Scheme::RK2) {
        u = u + k2u;
        v = v + k2v;
        return;
    }
    const V u3 = u + k2u * 0.5;
    const V v3 = v + k2v * 0.5;
    const V k3u = v3 * h;
    const V k3v = accel<V, Lanes>(c, t_mid, u3, v3) * h;
    const V u4 = u + k3u;
    const V v4 = v + k3v;
    const V k4u = v4 * h;
    const V k4v = accel<V, Lanes>(c, t + h, u4, v4) * h;
    u = u + (k1u + k2u * 2.0 + k3u * 2.0 + k4u) / 6.0;
    v = v + (k1v + k2v * 2.0 + k3v * 2.0 + k4v) / 6.0;
}

/// `steps` RK4 sub-steps of size h; sub-step k starts at t + k*h.
template <class V, class Lanes>
inline void rk4_propagate(const RhsCoeffs& c, const V& t, V& u, V& v, double h, long steps) {
    for (long k = 0; k < steps; ++k) {
        const V tk = t + h * static_cast<double>(k);
        rk_step<V, Lanes>(Scheme::RK4, c, tk, u, v, h);
    }
}

}  // namespace detail
}  // namespace fjet
