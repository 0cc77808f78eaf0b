#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fjet/datagen.hpp"
#include "fjet/integrate.hpp"
#include "fjet/regress.hpp"
#include "fjet/systems.hpp"

namespace fjet {

/// |u| or |v| beyond this ends a run.
inline constexpr double kDivergenceThreshold = 1e12;

struct TrajectoryPoint {
    double t;
    double u;
    double v;
    double p = 0.0;
    double pdot = 0.0;
};

/// Points at t0 + k·eps for k = 0, 1, ... (the initial point included).
struct Trajectory {
    std::vector<TrajectoryPoint> points;
    double eps = 0.0;
    /// exact, euler, rk2, rk4, fine, fjet, fjet-opt
    std::string source;
    bool has_forcing = false;
    /// The run stopped early because the state diverged or became non-finite.
    bool truncated = false;

    std::size_t size() const { return points.size(); }
    State state(std::size_t i) const { return {points[i].u, points[i].v}; }
};

/// Iterates u += h1, v += h2, t += eps from `init`. p and ṗ are taken from
/// `forcing` at the current t; a model with p or ṗ features requires it.
Trajectory generate(const FJetModel& m, const State& init, double t0, long steps,
                    const std::optional<Forcing>& forcing = std::nullopt, std::string source = "fjet");

Trajectory integrate_trajectory(Scheme scheme, const SystemSpec& spec, const State& init, double t0,
                                long steps, double eps);

/// exact_ho for the underdamped oscillator, propagate_fine otherwise.
Trajectory reference_trajectory(const SystemSpec& spec, const State& init, double t0, long steps, double eps,
                                double eps_base = kDefaultEpsBase);

/// One-step matrix [[a11, a12], [a21, a22]] of an explicit scheme on the
/// oscillator (the map is linear there). Row-major.
std::array<double, 4> linear_step_matrix(Scheme scheme, const SystemSpec& spec, double eps);

/// Taylor-expanded midpoint RK2 step as a feature model over the default
/// feature sets, with the O(ε³) remainder dropped.
FJetModel rk2_expansion_model(const SystemSpec& spec, double eps);

struct StabilityReport {
    double lambda_per_step = 0.0;
    double lambda_per_time = 0.0;
    /// Steps actually used (fewer than requested when the run diverged).
    long n_steps = 0;
    /// Root mean square deviation of ln(E_n/E_0) from the fitted line.
    double fit_residual = 0.0;
    bool truncated = false;
};

/// Least-squares slope of ln(E_n/E_0) against n. Throws UnsupportedCase when
/// the system has no energy and NumericError when some E_n ≤ 0.
StabilityReport stability_lambda(const SystemSpec& spec, const Trajectory& traj);
StabilityReport stability_lambda(const SystemSpec& spec, Scheme scheme, const State& init, long steps,
                                 double eps);
StabilityReport stability_lambda(const SystemSpec& spec, const FJetModel& m, const State& init, long steps);

struct ErrorPoint {
    double t;
    double e_u;
    double e_v;
    /// Absent when the system has no energy.
    std::optional<double> e_energy;
};

/// Per-time error measure of `traj` against `ref`. The grids must agree; a
/// truncated trajectory is compared over its available prefix.
std::vector<ErrorPoint> error_curve(const Trajectory& traj, const Trajectory& ref, const SystemSpec& spec);

/// Mean of E_energy over points with t in [t_lo, t_hi].
double mean_energy_error(const std::vector<ErrorPoint>& curve, double t_lo, double t_hi);
double mean_u_error(const std::vector<ErrorPoint>& curve, double t_lo, double t_hi);

/// `t,u,v` plus `p,pdot` when the trajectory carries forcing.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
/// `t,E_u,E_v,E_energy` (last field empty without an energy).
void write_error_csv(std::ostream& os, const std::vector<ErrorPoint>& curve);
/// Structured text: key = value lines.
void write_stability_report(std::ostream& os, const StabilityReport& r);

/// regress::residuals plus a plot-ready CSV.
ResidualSummary residual_map(const FJetModel& m, const Dataset& ds);
/// `u,v,res_du,res_dv,abs_du,abs_dv`
void write_residual_map_csv(std::ostream& os, const ResidualSummary& r);

}  // namespace fjet
