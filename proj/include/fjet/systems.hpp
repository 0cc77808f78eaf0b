#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace fjet {

/// Phase-space point (u, u̇). Both components are finite by construction.
class State {
public:
    State(double u, double v);

    double u() const { return u_; }
    double v() const { return v_; }

    friend bool operator==(const State&, const State&) = default;

private:
    double u_;
    double v_;
};

enum class SystemKind { HarmonicOscillator, Pendulum, Duffing };

std::string_view to_string(SystemKind kind);
/// Accepts "ho", "pendulum", "duffing" (and the long enum names).
SystemKind parse_system_kind(std::string_view name);

/// Cosine forcing p(t) = A cos(Ωt).
struct Forcing {
    double amplitude = 0.0;
    double frequency = 0.0;

    double p(double t) const;
    double pdot(double t) const;
};

/// A named second-order ODE u'' = G(t, u, u') with its parameters.
///
/// Parameter names: `omega0`, `gamma` for the oscillator and pendulum;
/// `gamma`, `alpha`, `beta`, `A`, `Omega` for Duffing. Construction rejects
/// missing or unknown names and a non-positive `omega0`.
class SystemSpec {
public:
    SystemSpec(SystemKind kind, std::map<std::string, double> params);

    SystemKind kind() const { return kind_; }
    const std::map<std::string, double>& params() const { return params_; }
    double param(const std::string& name) const;

    bool autonomous() const { return kind_ != SystemKind::Duffing; }
    std::optional<Forcing> forcing() const;

    friend bool operator==(const SystemSpec&, const SystemSpec&) = default;

private:
    SystemKind kind_;
    std::map<std::string, double> params_;
};

SystemSpec harmonic_oscillator(double omega0, double gamma);
SystemSpec pendulum(double omega0, double gamma);
SystemSpec duffing(double gamma, double alpha, double beta, double amplitude, double frequency);

struct Derivative {
    double du_dt;
    double dv_dt;
};

Derivative eval_rhs(const SystemSpec& spec, double t, const State& s);

/// HO: ½(ω0²u² + v²). Pendulum: ½v² + ω0²(1 − cos u). Duffing: no energy.
std::optional<double> energy(const SystemSpec& spec, const State& s);

/// Closed-form underdamped oscillator solution starting from `init` at t = 0.
State exact_ho(const SystemSpec& spec, const State& init, double t);

}  // namespace fjet
