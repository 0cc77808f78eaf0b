#include "fjet/integrate.hpp"

#include <cmath>
#include <string>

#include "fjet/error.hpp"

namespace fjet {
namespace {

struct ScalarLanes {
    static double sin(double x) { return std::sin(x); }
    static double cos(double x) { return std::cos(x); }
};

State checked(double u, double v) {
    if (!std::isfinite(u) || !std::isfinite(v)) {
        throw NumericError("integration produced a non-finite state");
    }
    return State(u, v);
}

}  // namespace

std::string_view to_string(Scheme scheme) {
    switch (scheme) {
        case Scheme::Euler: return "euler";
        case Scheme::RK2: return "rk2";
        case Scheme::RK4: return "rk4";
    }
    return "unknown";
}

Scheme parse_scheme(std::string_view name) {
    if (name == "euler" || name == "Euler") return Scheme::Euler;
    if (name == "rk2" || name == "RK2") return Scheme::RK2;
    if (name == "rk4" || name == "RK4") return Scheme::RK4;
    throw ConfigError("unknown scheme '" + std::string(name) + "' (expected euler, rk2 or rk4)");
}

State step(Scheme scheme, const SystemSpec& spec, double t, const State& s, double eps) {
    if (!(eps > 0.0)) throw ConfigError("step size must be positive");
    const auto c = detail::rhs_coeffs(spec);
    double u = s.u();
    double v = s.v();
    detail::rk_step<double, ScalarLanes>(scheme, c, t, u, v, eps);
    return checked(u, v);
}

long substep_count(double eps, double eps_base) {
    if (!(eps_base > 0.0)) throw ConfigError("eps_base must be positive");
    if (!(eps > 0.0)) throw ConfigError("eps must be positive");
    const double ratio = std::round(eps / eps_base);
    if (ratio < 1.0 || std::fabs(ratio * eps_base - eps) > 1e-12) {
        throw ConfigError("eps=" + std::to_string(eps) + " is not an integer multiple of eps_base=" +
                          std::to_string(eps_base));
    }
    return static_cast<long>(ratio);
}

State propagate_fine(const SystemSpec& spec, double t, const State& s, double eps,
                     double eps_base) {
    const long steps = substep_count(eps, eps_base);
    const auto c = detail::rhs_coeffs(spec);
    double u = s.u();
    double v = s.v();
    detail::rk4_propagate<double, ScalarLanes>(c, t, u, v, eps_base, steps);
    return checked(u, v);
}

}  // namespace fjet
