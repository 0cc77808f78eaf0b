#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "fjet/regress.hpp"
#include "fjet/simulate.hpp"

namespace fjet {

struct RefineConfig {
    /// Weight of the velocity mismatch in the cost.
    double alpha = 1.0;
    long iterations = 2000;
    /// Initial relative perturbation scale η.
    double init_scale = 1e-3;
    /// η is multiplied by this after `patience` consecutive rejections.
    double decay = 0.5;
    long patience = 50;
    std::uint64_t seed = 0;

    /// Throws ConfigError on out-of-range values.
    void validate() const;
};

struct OrbitPoint {
    double t;
    double u;
    double v;
};

/// Observed orbit. Times must be strictly increasing; they need not be evenly
/// spaced but must sit on the model's eps grid.
class OrbitData {
public:
    explicit OrbitData(std::vector<OrbitPoint> points);

    /// Every `stride`-th point of `traj` after the initial one.
    static OrbitData from_trajectory(const Trajectory& traj, std::size_t stride = 1);

    const std::vector<OrbitPoint>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }

private:
    std::vector<OrbitPoint> points_;
};

/// Σ_T (u_d − û)² + α (v_d − v̂)² with û, v̂ generated by `m` from `init` at t0.
/// Returns +inf when the generated orbit diverges. Throws ConfigError when a
/// data time is not t0 + k·eps (within 1e-9) for some k ≥ 0.
double orbit_cost(const FJetModel& m, const OrbitData& data, const State& init, double t0, double alpha,
                  const std::optional<Forcing>& forcing = std::nullopt);

struct RefineResult {
    FJetModel model;
    /// Best cost after each iteration, preceded by the initial cost.
    std::vector<double> history;
    long accepted = 0;
};

/// Greedy search: each proposal perturbs all coefficients jointly,
/// c' = c·(1 + η ξ) + η·1e-3·ξ', and is kept only if the cost strictly drops.
RefineResult refine_model(const FJetModel& m, const OrbitData& data, const State& init, double t0,
                          const RefineConfig& cfg, const std::optional<Forcing>& forcing = std::nullopt);

/// Independent restarts with cfg.seed replaced by each of `seeds`; returns the
/// lowest final cost, ties going to the earlier seed.
RefineResult refine_best_of(const FJetModel& m, const OrbitData& data, const State& init, double t0,
                            const RefineConfig& cfg, const std::vector<std::uint64_t>& seeds,
                            const std::optional<Forcing>& forcing = std::nullopt);

/// `iteration,cost`
void write_history_csv(std::ostream& os, const std::vector<double>& history);

}  // namespace fjet
