#include "fjet/systems.hpp"

#include <cmath>
#include <set>

#include "fjet/detail/rk_stages.hpp"
#include "fjet/error.hpp"

namespace fjet {

State::State(double u, double v) : u_(u), v_(v) {
    if (!std::isfinite(u) || !std::isfinite(v)) {
        throw NumericError("state components must be finite");
    }
}

std::string_view to_string(SystemKind kind) {
    switch (kind) {
        case SystemKind::HarmonicOscillator: return "ho";
        case SystemKind::Pendulum: return "pendulum";
        case SystemKind::Duffing: return "duffing";
    }
    return "unknown";
}

SystemKind parse_system_kind(std::string_view name) {
    if (name == "ho" || name == "HarmonicOscillator" || name == "harmonic") {
        return SystemKind::HarmonicOscillator;
    }
    if (name == "pendulum" || name == "Pendulum") return SystemKind::Pendulum;
    if (name == "duffing" || name == "Duffing") return SystemKind::Duffing;
    throw ConfigError("unknown system '" + std::string(name) + "' (expected ho, pendulum or duffing)");
}

double Forcing::p(double t) const { return amplitude * std::cos(frequency * t); }

double Forcing::pdot(double t) const { return -amplitude * frequency * std::sin(frequency * t); }

namespace {

const std::set<std::string>& required_params(SystemKind kind) {
    static const std::set<std::string> oscillator{"omega0", "gamma"};
    static const std::set<std::string> duffing_params{"gamma", "alpha", "beta", "A", "Omega"};
    return kind == SystemKind::Duffing ? duffing_params : oscillator;
}

}  // namespace

SystemSpec::SystemSpec(SystemKind kind, std::map<std::string, double> params)
    : kind_(kind), params_(std::move(params)) {
    const auto& required = required_params(kind_);
    for (const auto& [name, value] : params_) {
        if (!required.contains(name)) {
            throw ConfigError("unknown parameter '" + name + "' for system " +
                              std::string(to_string(kind_)));
        }
        if (!std::isfinite(value)) {
            throw ConfigError("parameter '" + name + "' must be finite");
        }
    }
    for (const auto& name : required) {
        if (!params_.contains(name)) {
            throw ConfigError("missing parameter '" + name + "' for system " +
                              std::string(to_string(kind_)));
        }
    }
    if (params_.contains("omega0") && !(params_.at("omega0") > 0.0)) {
        throw ConfigError("omega0 must be positive");
    }
}

double SystemSpec::param(const std::string& name) const {
    auto it = params_.find(name);
    if (it == params_.end()) {
        throw ConfigError("unknown parameter '" + name + "' for system " +
                          std::string(to_string(kind_)));
    }
    return it->second;
}

std::optional<Forcing> SystemSpec::forcing() const {
    if (kind_ != SystemKind::Duffing) return std::nullopt;
    return Forcing{param("A"), param("Omega")};
}

SystemSpec harmonic_oscillator(double omega0, double gamma) {
    return SystemSpec(SystemKind::HarmonicOscillator, {{"omega0", omega0}, {"gamma", gamma}});
}

SystemSpec pendulum(double omega0, double gamma) {
    return SystemSpec(SystemKind::Pendulum, {{"omega0", omega0}, {"gamma", gamma}});
}

SystemSpec duffing(double gamma, double alpha, double beta, double amplitude, double frequency) {
    return SystemSpec(SystemKind::Duffing, {{"gamma", gamma},
                                            {"alpha", alpha},
                                            {"beta", beta},
                                            {"A", amplitude},
                                            {"Omega", frequency}});
}

detail::RhsCoeffs detail::rhs_coeffs(const SystemSpec& spec) {
    RhsCoeffs c;
    c.kind = spec.kind();
    c.two_gamma = 2.0 * spec.param("gamma");
    if (spec.kind() == SystemKind::Duffing) {
        c.alpha = spec.param("alpha");
        c.beta = spec.param("beta");
        c.amplitude = spec.param("A");
        c.frequency = spec.param("Omega");
    } else {
        const double w = spec.param("omega0");
        c.omega0_sq = w * w;
    }
    return c;
}

namespace {
struct ScalarLanes {
    static double sin(double x) { return std::sin(x); }
    static double cos(double x) { return std::cos(x); }
};
}  // namespace

Derivative eval_rhs(const SystemSpec& spec, double t, const State& s) {
    const auto c = detail::rhs_coeffs(spec);
    return {s.v(), detail::accel<double, ScalarLanes>(c, t, s.u(), s.v())};
}

std::optional<double> energy(const SystemSpec& spec, const State& s) {
    switch (spec.kind()) {
        case SystemKind::HarmonicOscillator: {
            const double w = spec.param("omega0");
            return 0.5 * (w * w * s.u() * s.u() + s.v() * s.v());
        }
        case SystemKind::Pendulum: {
            const double w = spec.param("omega0");
            return 0.5 * s.v() * s.v() + w * w * (1.0 - std::cos(s.u()));
        }
        case SystemKind::Duffing:
            return std::nullopt;
    }
    return std::nullopt;
}

State exact_ho(const SystemSpec& spec, const State& init, double t) {
    if (spec.kind() != SystemKind::HarmonicOscillator) {
        throw UnsupportedCase("exact_ho requires a harmonic oscillator");
    }
    const double w0 = spec.param("omega0");
    const double g = spec.param("gamma");
    if (!(g < w0)) {
        throw UnsupportedCase("exact_ho supports only the underdamped case (gamma < omega0)");
    }
    const double wd = std::sqrt(w0 * w0 - g * g);
    const double u0 = init.u();
    const double b = (init.v() + g * u0) / wd;
    const double decay = std::exp(-g * t);
    const double cs = std::cos(wd * t);
    const double sn = std::sin(wd * t);
    // u = e^{-γt}[u0 cos ω_d t + b sin ω_d t]
    const double u = decay * (u0 * cs + b * sn);
    const double v = decay * ((b * wd - g * u0) * cs - (u0 * wd + g * b) * sn);
    return State(u, v);
}

}  // namespace fjet
