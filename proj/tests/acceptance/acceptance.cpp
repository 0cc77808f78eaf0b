// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "fjet/recover.hpp"
#include "fjet/refine.hpp"
#include "fjet/regress.hpp"
#include "fjet/simulate.hpp"
#include "support/properties.hpp"

using namespace fjet;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void check(bool ok, const std::string& what) {
        pass = pass && ok;
        if (!detail.empty()) detail += "; ";
        detail += (ok ? "" : "FAILED ") + what;
    }
};

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string fmt(const char* f, double a, double b) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

FeatureExpr F(const char* s) { return FeatureExpr::parse(s); }

constexpr std::uint64_t kSeed = 0;

RecoveredDE sweep_and_recover(const SystemSpec& spec, double sigma, const FeatureSet& du, const FeatureSet& dv,
                              int degree = 0) {
    auto series = coefficient_series(epsilon_sweep(spec, default_domains(spec), 2000, sigma, kSeed, du, dv));
    fit_series(series, degree);
    return recover_de(series, spec);
}

RecoveredDE sweep_default(const SystemSpec& spec, double sigma, int degree = 0) {
    return sweep_and_recover(spec, sigma, default_features(spec.kind(), Response::Du),
                             default_features(spec.kind(), Response::Dv), degree);
}

Outcome ac1() {
    Outcome o;
    const auto ho = harmonic_oscillator(1.0, 0.0);
    const auto fs = FeatureSet::parse("u,v");
    const auto m = fit(sample_dataset(ho, default_domains(ho), 2000, 0.1, 0.0, kSeed), fs, fs);
    const double cu = m.raw(Response::Du, F("u")), cv = m.raw(Response::Du, F("v"));
    o.check(std::fabs(cu - (std::cos(0.1) - 1.0)) <= 1e-9, fmt("du[u] = %.17g", cu));
    o.check(std::fabs(cv - std::sin(0.1)) <= 1e-9, fmt("du[v] = %.17g", cv));
    // Tabulated values, same tolerance.
    o.check(std::fabs(cu - -0.004995834721974124) <= 1e-9 && std::fabs(cv - 0.09983341664682731) <= 1e-9,
            "tabulated (-0.004995834721974124, 0.09983341664682731)");
    return o;
}

Outcome ac2() {
    Outcome o;
    const auto ho = harmonic_oscillator(1.0, 0.0);
    const State s0(1.0, 0.0);
    const long steps = 10000;
    const double eps = 0.1;

    const auto rk2 = stability_lambda(ho, Scheme::RK2, s0, steps, eps);
    o.check(std::fabs(rk2.lambda_per_step / 2.49e-5 - 1.0) <= 0.02,
            fmt("RK2 %.6e (2.49e-5 +-2%%)", rk2.lambda_per_step));
    const auto rk4 = stability_lambda(ho, Scheme::RK4, s0, steps, eps);
    o.check(std::fabs(rk4.lambda_per_step / -1.38e-8 - 1.0) <= 0.10,
            fmt("RK4 %.6e (-1.38e-8 +-10%%)", rk4.lambda_per_step));

    const auto fs = FeatureSet::parse("u,v");
    const auto m = fit(sample_dataset(ho, default_domains(ho), 2000, eps, 0.0, kSeed), fs, fs);
    const auto fj = stability_lambda(ho, m, s0, steps);
    o.check(std::fabs(fj.lambda_per_step) <= 1e-14, fmt("FJet0 %.3e (|.| <= 1e-14)", fj.lambda_per_step));

    const auto eu = stability_lambda(ho, Scheme::Euler, s0, steps, eps);
    const double per_step = std::log1p(eps * eps), per_time = per_step / eps;
    o.check(std::fabs(eu.lambda_per_step / per_step - 1.0) <= 0.01,
            fmt("Euler per-step %.6e vs ln(1+eps^2) = %.6e", eu.lambda_per_step, per_step));
    o.check(std::fabs(eu.lambda_per_time / per_time - 1.0) <= 0.01,
            fmt("Euler per-time %.6e vs %.6e (tabulated 9.94e-2)", eu.lambda_per_time, per_time));
    if (eu.truncated) o.detail += fmt(" [Euler diverged; fitted over %.0f steps]", eu.n_steps);
    return o;
}

Outcome ac3() {
    Outcome o;
    const auto ho = harmonic_oscillator(1.0, 0.1);
    const char* labels[] = {"a1", "a2", "b1", "b2"};
    double mean0 = 0.0, mean2 = 0.0;
    const auto de0 = sweep_default(ho, 0.0);
    for (const char* l : labels) {
        const double e = *de0.term(l).error();
        mean0 += e / 4.0;
        o.check(e <= -3.0, std::string("s=0 ") + l + fmt(" E=%.2f", e));
    }
    const auto de2 = sweep_default(ho, 0.2);
    for (const char* l : labels) {
        const double e = *de2.term(l).error();
        mean2 += e / 4.0;
        o.check(e <= -2.0, std::string("s=0.2 ") + l + fmt(" E=%.2f", e));
    }
    // Larger E means a worse fit: the noisy run must not beat the clean one.
    o.check(mean2 >= mean0, fmt("mean E s=0.2 %.2f >= s=0 %.2f", mean2, mean0));
    return o;
}

Outcome ac4() {
    Outcome o;
    const auto de = sweep_default(pendulum(1.0, 0.1), 0.0);
    for (const auto& t : de.terms) {
        const double e = *t.error();
        o.check(e <= -2.8, t.label + fmt(" %.6f E=%.2f", t.intercept(), e));
    }
    return o;
}

Outcome ac5() {
    Outcome o;
    const auto de = sweep_default(duffing(0.15, -1.0, 1.0, 0.28, 1.2), 0.0);
    for (const char* f : {"u", "v", "u^3", "u^2*v", "p", "pdot"}) {
        const auto& t = de.term(Response::Dv, F(f));
        const double e = *t.error();
        o.check(e <= -2.5, std::string(f) + fmt(" %.6f E=%.2f", t.intercept(), e));
    }
    for (const char* f : {"u*v^2", "v^3"}) {
        const double c = de.term(Response::Dv, F(f)).intercept();
        o.check(std::fabs(c) <= 1e-3, std::string(f) + fmt(" |%.2e| <= 1e-3", c));
    }
    return o;
}

Outcome ac6() {
    Outcome o;
    // Slopes of the eps-expanded midpoint step, normalized by eps.
    const double g = 0.1;
    const auto ho = sweep_default(harmonic_oscillator(1.0, g), 0.0, 1);
    const std::vector<std::pair<const char*, double>> ho_ref = {
        {"a1", -0.5}, {"a2", -g}, {"b1", g}, {"b2", 2.0 * g * g - 0.5}};
    for (const auto& [l, want] : ho_ref) {
        const double s = ho.term(l).slope();
        o.check(std::fabs(s - want) <= 0.1, std::string("HO ") + l + fmt(" %.4f vs %.4f", s, want));
    }
    const auto pd = sweep_default(pendulum(1.0, g), 0.0, 1);
    const std::vector<std::pair<const char*, double>> pd_ref = {
        {"a1", -g}, {"a2", -0.5}, {"b1", 2.0 * g * g}, {"b3", -0.5}};
    for (const auto& [l, want] : pd_ref) {
        const double s = pd.term(l).slope();
        o.check(std::fabs(s - want) <= 0.1, std::string("pend ") + l + fmt(" %.4f vs %.4f", s, want));
    }
    return o;
}

Outcome ac7() {
    Outcome o;
    constexpr double kTableScale = 1e4;
    const double eps = 0.1;
    auto maxima = [&](const SystemSpec& spec, const char* name, bool ho) {
        const auto ds = sample_dataset(spec, default_domains(spec), 2000, eps, 0.0, kSeed);
        const auto fj = residuals(fit(ds, default_features(spec.kind(), Response::Du),
                                      default_features(spec.kind(), Response::Dv)),
                                  ds);
        const auto r2 = residuals(rk2_expansion_model(spec, eps), ds);
        const double fu = fj.max_abs_du * kTableScale, fv = fj.max_abs_dv * kTableScale;
        const double ru = r2.max_abs_du * kTableScale, rv = r2.max_abs_dv * kTableScale;
        if (ho) {
            o.check(fu <= 1e-10 && fv <= 1e-10, fmt("HO FJet %.2e / %.2e", fu, fv));
            o.check(std::fabs(ru / 3.9 - 1.0) <= 0.25 && std::fabs(rv / 4.4 - 1.0) <= 0.25,
                    fmt("HO RK2 %.3f / %.3f (3.9 / 4.4)", ru, rv));
        } else {
            o.check(fu < ru && fv < rv,
                    std::string(name) + fmt(" FJet %.3g / %.3g", fu, fv) + fmt(" < RK2 %.3g / %.3g", ru, rv));
        }
    };
    maxima(harmonic_oscillator(1.0, 0.1), "HO", true);
    maxima(pendulum(1.0, 0.1), "pend", false);
    maxima(duffing(0.15, -1.0, 1.0, 0.28, 1.2), "Duffing", false);
    return o;
}

Outcome ac8() {
    Outcome o;
    const auto fs = FeatureSet::parse("u,v");
    auto dep = [&](const SystemSpec& base, const char* param, std::vector<double> grid) {
        ParamDepOptions opt;
        opt.param = param;
        opt.param_grid = std::move(grid);
        opt.seed = kSeed;
        opt.features_du = fs;
        opt.features_dv = fs;
        return parameter_dependence(base, opt);
    };
    const auto w = dep(harmonic_oscillator(1.0, 0.1), "omega0", {0.5, 0.75, 1.0, 1.25, 1.5});
    const auto b1 = w[2].limit();
    o.check(std::fabs(b1[2] + 1.0) <= 0.02, fmt("b1(omega0) quad %.6f", b1[2]));
    o.check(std::fabs(b1[0]) <= 0.02 && std::fabs(b1[1]) <= 0.02, fmt("others %.2e, %.2e", b1[0], b1[1]));
    const auto g = dep(harmonic_oscillator(1.0, 0.1), "gamma", {0.0, 0.05, 0.1, 0.15, 0.2});
    const auto b2 = g[3].limit();
    o.check(std::fabs(b2[1] + 2.0) <= 0.02, fmt("b2(gamma) linear %.6f", b2[1]));
    return o;
}

Outcome ac9() {
    Outcome o;
    const double eps = 0.1;
    const State s0(1.0, 0.0);
    const long horizon = 600;  // t in [0, 60]
    for (const auto& spec : {harmonic_oscillator(1.0, 0.0), pendulum(1.0, 0.0)}) {
        const auto du = default_features(spec.kind(), Response::Du);
        const auto dv = default_features(spec.kind(), Response::Dv);
        const auto ref = reference_trajectory(spec, s0, 0.0, horizon, eps);
        const auto orbit = OrbitData::from_trajectory(reference_trajectory(spec, s0, 0.0, 100, eps));
        int better = 0;
        bool monotone = true;
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            const auto m = fit(sample_dataset(spec, default_domains(spec), 2000, eps, 0.1, seed), du, dv);
            RefineConfig cfg;
            cfg.seed = seed;
            const auto r = refine_model(m, orbit, s0, 0.0, cfg);
            for (std::size_t i = 1; i < r.history.size(); ++i) monotone = monotone && r.history[i] <= r.history[i - 1];
            const double before = mean_energy_error(error_curve(generate(m, s0, 0.0, horizon), ref, spec), 0.0, 60.0);
            const double after =
                mean_energy_error(error_curve(generate(r.model, s0, 0.0, horizon), ref, spec), 0.0, 60.0);
            if (after <= before) ++better;
        }
        const std::string name(to_string(spec.kind()));
        o.check(better >= 3, name + fmt(" refined better in %.0f/5", better));
        o.check(monotone, name + " history non-increasing");
    }
    return o;
}

Outcome ac10() {
    Outcome o;
    for (const auto& r : fjet::testing::all_properties(kSeed + 1)) o.check(r.pass, r.name);
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        const char* id;
        const char* name;
        double limit_s;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> all = {
        {"AC1", "oscillator flow coefficients", 5, ac1},
        {"AC2", "energy stability exponents", 10, ac2},
        {"AC3", "oscillator ODE recovery", 60, ac3},
        {"AC4", "pendulum ODE recovery", 60, ac4},
        {"AC5", "Duffing ODE recovery", 120, ac5},
        {"AC6", "eps-slopes vs RK2 expansion", 600, ac6},
        {"AC7", "residual maxima", 600, ac7},
        {"AC8", "parameter dependence", 600, ac8},
        {"AC9", "orbit refinement", 600, ac9},
        {"AC10", "property suites", 600, ac10},
    };
    int failed = 0;
    for (const auto& c : all) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.check(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        o.check(secs < c.limit_s, fmt("%.2fs < %.0fs", secs, c.limit_s));
        if (!o.pass) ++failed;
        std::printf("%s %-4s %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
    return failed == 0 ? 0 : 1;
}
