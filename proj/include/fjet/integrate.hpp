#pragma once

#include <string_view>

#include "fjet/detail/rk_stages.hpp"
#include "fjet/systems.hpp"

namespace fjet {

inline constexpr double kDefaultEpsBase = 0.001;

std::string_view to_string(Scheme scheme);
Scheme parse_scheme(std::string_view name);

/// One explicit step of size eps. RK2 is the midpoint rule; stage times are
/// t, t + eps/2 and t + eps.
State step(Scheme scheme, const SystemSpec& spec, double t, const State& s, double eps);

/// Number of eps_base sub-steps making up eps. Throws ConfigError unless eps is
/// an integer multiple of eps_base within 1e-12.
long substep_count(double eps, double eps_base);

/// Ground-truth propagator: round(eps/eps_base) RK4 steps of size eps_base.
State propagate_fine(const SystemSpec& spec, double t, const State& s, double eps,
                     double eps_base = kDefaultEpsBase);

}  // namespace fjet
