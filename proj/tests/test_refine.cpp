#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "fjet/error.hpp"
#include "fjet/recover.hpp"
#include "fjet/refine.hpp"

using namespace fjet;

namespace {

const FeatureSet kUV = FeatureSet::parse("u,v");

FJetModel noisy_ho_model(std::uint64_t seed) {
    const auto ho = harmonic_oscillator(1.0, 0.0);
    return fit(sample_dataset(ho, default_domains(ho), 500, 0.1, 0.3, seed), kUV, kUV);
}

OrbitData reference_orbit(long steps) {
    const auto ho = harmonic_oscillator(1.0, 0.0);
    return OrbitData::from_trajectory(reference_trajectory(ho, State(1.0, 0.0), 0.0, steps, 0.1));
}

RefineConfig quick(std::uint64_t seed, long iterations = 200) {
    RefineConfig cfg;
    cfg.iterations = iterations;
    cfg.seed = seed;
    return cfg;
}

}  // namespace

TEST(OrbitData, Validation) {
    EXPECT_THROW(OrbitData({}), ConfigError);
    EXPECT_THROW(OrbitData({{0.2, 1, 0}, {0.1, 1, 0}}), ConfigError);
    EXPECT_THROW(OrbitData({{0.1, NAN, 0}}), ConfigError);
    const auto ho = harmonic_oscillator(1.0, 0.0);
    const auto traj = reference_trajectory(ho, State(1.0, 0.0), 0.0, 10, 0.1);
    const auto every = OrbitData::from_trajectory(traj);
    EXPECT_EQ(every.size(), 10u);
    EXPECT_NEAR(every.points()[0].t, 0.1, 1e-15);
    const auto third = OrbitData::from_trajectory(traj, 3);
    ASSERT_EQ(third.size(), 3u);
    EXPECT_NEAR(third.points()[0].t, 0.3, 1e-15);
    EXPECT_THROW(OrbitData::from_trajectory(traj, 0), ConfigError);
}

TEST(OrbitCost, ZeroOnOwnOrbit) {
    const auto m = noisy_ho_model(1);
    const auto own = OrbitData::from_trajectory(generate(m, State(1.0, 0.0), 0.0, 50));
    EXPECT_EQ(orbit_cost(m, own, State(1.0, 0.0), 0.0, 1.0), 0.0);
}

TEST(OrbitCost, MatchesHandComputation) {
    const auto m = noisy_ho_model(2);
    std::vector<OrbitPoint> pts;
    for (int k = 1; k <= 10; ++k) pts.push_back({0.3 * k, std::cos(0.3 * k), -std::sin(0.3 * k)});
    const OrbitData data(pts);
    double u = 1.0, v = 0.0, su = 0.0, sv = 0.0;
    for (int k = 1; k <= 30; ++k) {
        const double du = m.coeffs_du[0] * u + m.coeffs_du[1] * v;
        const double dv = m.coeffs_dv[0] * u + m.coeffs_dv[1] * v;
        u += du;
        v += dv;
        if (k % 3 == 0) {
            const auto& p = pts[k / 3 - 1];
            su += (p.u - u) * (p.u - u);
            sv += (p.v - v) * (p.v - v);
        }
    }
    for (double alpha : {0.0, 0.5, 1.0, 3.0}) {
        EXPECT_NEAR(orbit_cost(m, data, State(1.0, 0.0), 0.0, alpha), su + alpha * sv, 1e-12 * (su + sv))
            << "alpha " << alpha;
    }
}

TEST(OrbitCost, ZeroAlphaIgnoresVelocity) {
    const auto m = noisy_ho_model(3);
    auto pts = reference_orbit(20).points();
    const double a = orbit_cost(m, OrbitData(pts), State(1.0, 0.0), 0.0, 0.0);
    for (auto& p : pts) p.v += 5.0;
    EXPECT_EQ(orbit_cost(m, OrbitData(pts), State(1.0, 0.0), 0.0, 0.0), a);
    EXPECT_GT(orbit_cost(m, OrbitData(pts), State(1.0, 0.0), 0.0, 1.0), a);
}

TEST(OrbitCost, OffGridAndDivergence) {
    const auto m = noisy_ho_model(4);
    EXPECT_THROW(orbit_cost(m, OrbitData({{0.15, 1, 0}}), State(1.0, 0.0), 0.0, 1.0), ConfigError);
    EXPECT_THROW(orbit_cost(m, OrbitData({{-0.1, 1, 0}}), State(1.0, 0.0), 0.0, 1.0), ConfigError);
    FJetModel blow = m;
    blow.coeffs_du = {1.0, 0.0};
    blow.coeffs_dv = {0.0, 1.0};
    EXPECT_EQ(orbit_cost(blow, OrbitData({{10.0, 1, 0}}), State(1.0, 1.0), 0.0, 1.0),
              std::numeric_limits<double>::infinity());
}

TEST(Refine, ZeroIterationsReturnsInput) {
    const auto m = noisy_ho_model(5);
    const auto r = refine_model(m, reference_orbit(100), State(1.0, 0.0), 0.0, quick(1, 0));
    EXPECT_EQ(r.model.coeffs_du, m.coeffs_du);
    EXPECT_EQ(r.model.coeffs_dv, m.coeffs_dv);
    ASSERT_EQ(r.history.size(), 1u);
    EXPECT_EQ(r.accepted, 0);
}

TEST(Refine, HistoryIsMonotoneAndEndsAtModelCost) {
    const auto m = noisy_ho_model(6);
    const auto orbit = reference_orbit(100);
    const auto r = refine_model(m, orbit, State(1.0, 0.0), 0.0, quick(2, 300));
    ASSERT_EQ(r.history.size(), 301u);
    EXPECT_EQ(r.history[0], orbit_cost(m, orbit, State(1.0, 0.0), 0.0, 1.0));
    for (std::size_t i = 1; i < r.history.size(); ++i) EXPECT_LE(r.history[i], r.history[i - 1]);
    EXPECT_EQ(r.history.back(), orbit_cost(r.model, orbit, State(1.0, 0.0), 0.0, 1.0));
    EXPECT_LT(r.history.back(), r.history.front());
    EXPECT_GT(r.accepted, 0);
    EXPECT_EQ(r.model.features_du, m.features_du);
}

TEST(Refine, Deterministic) {
    const auto m = noisy_ho_model(7);
    const auto orbit = reference_orbit(50);
    const auto a = refine_model(m, orbit, State(1.0, 0.0), 0.0, quick(9));
    const auto b = refine_model(m, orbit, State(1.0, 0.0), 0.0, quick(9));
    EXPECT_EQ(a.model.coeffs_du, b.model.coeffs_du);
    EXPECT_EQ(a.history, b.history);
    const auto c = refine_model(m, orbit, State(1.0, 0.0), 0.0, quick(10));
    EXPECT_NE(a.history, c.history);
}

TEST(Refine, ExactModelIsFixedPoint) {
    const auto m = noisy_ho_model(8);
    const auto own = OrbitData::from_trajectory(generate(m, State(1.0, 0.0), 0.0, 50));
    const auto r = refine_model(m, own, State(1.0, 0.0), 0.0, quick(3));
    EXPECT_EQ(r.accepted, 0);
    EXPECT_EQ(r.model.coeffs_dv, m.coeffs_dv);
}

TEST(Refine, BestOfPicksLowestCost) {
    const auto m = noisy_ho_model(9);
    const auto orbit = reference_orbit(50);
    const std::vector<std::uint64_t> seeds = {1, 2, 3};
    const auto best = refine_best_of(m, orbit, State(1.0, 0.0), 0.0, quick(0, 100), seeds);
    double lowest = std::numeric_limits<double>::infinity();
    for (auto s : seeds) {
        lowest = std::min(lowest, refine_model(m, orbit, State(1.0, 0.0), 0.0, quick(s, 100)).history.back());
    }
    EXPECT_EQ(best.history.back(), lowest);
}

TEST(RefineConfig, Validation) {
    RefineConfig c;
    EXPECT_NO_THROW(c.validate());
    c.alpha = -1;
    EXPECT_THROW(c.validate(), ConfigError);
    c = {};
    c.decay = 1.0;
    EXPECT_THROW(c.validate(), ConfigError);
    c = {};
    c.patience = 0;
    EXPECT_THROW(c.validate(), ConfigError);
}
