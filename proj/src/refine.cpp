#include "fjet/refine.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "fjet/error.hpp"
#include "fjet/io.hpp"
#include "fjet/parallel.hpp"
#include "fjet/rng.hpp"

namespace fjet {

void RefineConfig::validate() const {
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ConfigError("alpha must be a finite value >= 0");
    if (iterations < 0) throw ConfigError("iterations must be >= 0");
    if (!(init_scale > 0.0) || !std::isfinite(init_scale)) throw ConfigError("init_scale must be positive");
    if (!(decay > 0.0 && decay < 1.0)) throw ConfigError("decay must lie in (0, 1)");
    if (patience <= 0) throw ConfigError("patience must be positive");
}

OrbitData::OrbitData(std::vector<OrbitPoint> points) : points_(std::move(points)) {
    if (points_.empty()) throw ConfigError("orbit data is empty");
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const auto& p = points_[i];
        if (!std::isfinite(p.t) || !std::isfinite(p.u) || !std::isfinite(p.v)) {
            throw ConfigError("orbit data has a non-finite value at row " + std::to_string(i));
        }
        if (i > 0 && !(p.t > points_[i - 1].t)) {
            throw ConfigError("orbit data times must be strictly increasing (row " + std::to_string(i) + ")");
        }
    }
}

OrbitData OrbitData::from_trajectory(const Trajectory& traj, std::size_t stride) {
    if (stride == 0) throw ConfigError("stride must be positive");
    std::vector<OrbitPoint> pts;
    for (std::size_t i = stride; i < traj.size(); i += stride) {
        pts.push_back({traj.points[i].t, traj.points[i].u, traj.points[i].v});
    }
    return OrbitData(std::move(pts));
}

namespace {

/// Step index of each data time relative to t0.
std::vector<long> grid_indices(const OrbitData& data, double t0, double eps) {
    std::vector<long> idx;
    idx.reserve(data.size());
    for (const auto& p : data.points()) {
        const double k = std::round((p.t - t0) / eps);
        if (k < 0.0 || std::fabs(t0 + k * eps - p.t) > 1e-9) {
            throw ConfigError("orbit time " + io::fmt17(p.t) + " is not on the eps grid from t0=" +
                              io::fmt17(t0));
        }
        idx.push_back(static_cast<long>(k));
    }
    return idx;
}

double cost_at(const FJetModel& m, const OrbitData& data, const std::vector<long>& idx, const State& init,
               double t0, double alpha, const std::optional<Forcing>& forcing) {
    const Trajectory traj = generate(m, init, t0, idx.back(), forcing);
    if (traj.truncated) return std::numeric_limits<double>::infinity();
    double cost = 0.0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        const auto& g = traj.points[static_cast<std::size_t>(idx[i])];
        const auto& d = data.points()[i];
        const double eu = d.u - g.u;
        const double ev = d.v - g.v;
        cost += eu * eu + alpha * ev * ev;
    }
    return std::isfinite(cost) ? cost : std::numeric_limits<double>::infinity();
}

}  // namespace

double orbit_cost(const FJetModel& m, const OrbitData& data, const State& init, double t0, double alpha,
                  const std::optional<Forcing>& forcing) {
    return cost_at(m, data, grid_indices(data, t0, m.eps), init, t0, alpha, forcing);
}

RefineResult refine_model(const FJetModel& m, const OrbitData& data, const State& init, double t0,
                          const RefineConfig& cfg, const std::optional<Forcing>& forcing) {
    cfg.validate();
    const auto idx = grid_indices(data, t0, m.eps);
    RefineResult res{m, {}, 0};
    double best = cost_at(m, data, idx, init, t0, cfg.alpha, forcing);
    if (!std::isfinite(best)) throw NumericError("initial model diverges on the data orbit");
    res.history.reserve(static_cast<std::size_t>(cfg.iterations) + 1);
    res.history.push_back(best);

    Rng rng(cfg.seed);
    double eta = cfg.init_scale;
    long rejections = 0;
    FJetModel trial = m;
    for (long it = 0; it < cfg.iterations; ++it) {
        for (Response r : {Response::Du, Response::Dv}) {
            const auto& cur = res.model.coeffs(r);
            auto& next = trial.coeffs(r);
            for (std::size_t j = 0; j < cur.size(); ++j) {
                const double xi = rng.normal();
                const double xi_abs = rng.normal();
                next[j] = cur[j] * (1.0 + eta * xi) + eta * 1e-3 * xi_abs;
            }
        }
        const double c = cost_at(trial, data, idx, init, t0, cfg.alpha, forcing);
        if (c < best) {
            best = c;
            res.model.coeffs_du = trial.coeffs_du;
            res.model.coeffs_dv = trial.coeffs_dv;
            ++res.accepted;
            rejections = 0;
        } else if (++rejections >= cfg.patience) {
            eta *= cfg.decay;
            rejections = 0;
        }
        res.history.push_back(best);
    }
    res.model.refined_from = "model eps=" + io::fmt17(m.eps) + " sigma=" + io::fmt17(m.sigma) +
                             " seed=" + std::to_string(m.seed) + " refine_seed=" + std::to_string(cfg.seed);
    return res;
}

RefineResult refine_best_of(const FJetModel& m, const OrbitData& data, const State& init, double t0,
                            const RefineConfig& cfg, const std::vector<std::uint64_t>& seeds,
                            const std::optional<Forcing>& forcing) {
    if (seeds.empty()) throw ConfigError("no refinement seeds given");
    std::vector<std::optional<RefineResult>> runs(seeds.size());
    parallel_for(seeds.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            RefineConfig c = cfg;
            c.seed = seeds[i];
            runs[i] = refine_model(m, data, init, t0, c, forcing);
        }
    });
    std::size_t best = 0;
    for (std::size_t i = 1; i < runs.size(); ++i) {
        if (runs[i]->history.back() < runs[best]->history.back()) best = i;
    }
    return std::move(*runs[best]);
}

void write_history_csv(std::ostream& os, const std::vector<double>& history) {
    os << "iteration,cost\n";
    for (std::size_t i = 0; i < history.size(); ++i) os << i << ',' << io::fmt17(history[i]) << '\n';
}

}  // namespace fjet
