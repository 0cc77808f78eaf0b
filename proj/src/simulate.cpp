#include "fjet/simulate.hpp"

#include <cmath>
#include <ostream>

#include "fjet/error.hpp"
#include "fjet/io.hpp"
#include "fjet/recover.hpp"

namespace fjet {

namespace {

bool diverged(double u, double v) {
    return !std::isfinite(u) || !std::isfinite(v) || std::fabs(u) > kDivergenceThreshold ||
           std::fabs(v) > kDivergenceThreshold;
}

TrajectoryPoint make_point(double t, double u, double v, const std::optional<Forcing>& forcing) {
    TrajectoryPoint p{t, u, v};
    if (forcing) {
        p.p = forcing->p(t);
        p.pdot = forcing->pdot(t);
    }
    return p;
}

void check_steps(long steps, double eps) {
    if (steps < 0) throw ConfigError("step count must be non-negative");
    if (!(eps > 0.0) || !std::isfinite(eps)) throw ConfigError("eps must be positive");
}

}  // namespace

Trajectory generate(const FJetModel& m, const State& init, double t0, long steps,
                    const std::optional<Forcing>& forcing, std::string source) {
    check_steps(steps, m.eps);
    if (m.uses_forcing() && !forcing) {
        throw ConfigError("model uses p or pdot features; a forcing (A, Omega) is required");
    }
    Trajectory traj;
    traj.eps = m.eps;
    traj.source = std::move(source);
    traj.has_forcing = forcing.has_value();
    traj.points.reserve(static_cast<std::size_t>(steps) + 1);
    traj.points.push_back(make_point(t0, init.u(), init.v(), forcing));
    for (long k = 0; k < steps; ++k) {
        const TrajectoryPoint& cur = traj.points.back();
        const UpdateRecord rec{cur.t, cur.u, cur.v, cur.p, cur.pdot, 0.0, 0.0};
        const Prediction d = predict(m, rec);
        const double u = cur.u + d.du;
        const double v = cur.v + d.dv;
        if (diverged(u, v)) {
            traj.truncated = true;
            break;
        }
        traj.points.push_back(make_point(t0 + static_cast<double>(k + 1) * m.eps, u, v, forcing));
    }
    return traj;
}

Trajectory integrate_trajectory(Scheme scheme, const SystemSpec& spec, const State& init, double t0,
                                long steps, double eps) {
    check_steps(steps, eps);
    const auto forcing = spec.forcing();
    Trajectory traj;
    traj.eps = eps;
    traj.source = std::string(to_string(scheme));
    traj.has_forcing = forcing.has_value();
    traj.points.reserve(static_cast<std::size_t>(steps) + 1);
    traj.points.push_back(make_point(t0, init.u(), init.v(), forcing));
    State s = init;
    for (long k = 0; k < steps; ++k) {
        try {
            s = step(scheme, spec, traj.points.back().t, s, eps);
        } catch (const NumericError&) {
            traj.truncated = true;
            break;
        }
        if (diverged(s.u(), s.v())) {
            traj.truncated = true;
            break;
        }
        traj.points.push_back(make_point(t0 + static_cast<double>(k + 1) * eps, s.u(), s.v(), forcing));
    }
    return traj;
}

Trajectory reference_trajectory(const SystemSpec& spec, const State& init, double t0, long steps, double eps,
                                double eps_base) {
    check_steps(steps, eps);
    const auto forcing = spec.forcing();
    const bool exact = spec.kind() == SystemKind::HarmonicOscillator && spec.param("gamma") < spec.param("omega0");
    if (!exact) substep_count(eps, eps_base);
    Trajectory traj;
    traj.eps = eps;
    traj.source = exact ? "exact" : "fine";
    traj.has_forcing = forcing.has_value();
    traj.points.reserve(static_cast<std::size_t>(steps) + 1);
    traj.points.push_back(make_point(t0, init.u(), init.v(), forcing));
    State s = init;
    for (long k = 0; k < steps; ++k) {
        const double t = t0 + static_cast<double>(k + 1) * eps;
        if (exact) {
            s = exact_ho(spec, init, t - t0);
        } else {
            s = propagate_fine(spec, traj.points.back().t, s, eps, eps_base);
        }
        traj.points.push_back(make_point(t, s.u(), s.v(), forcing));
    }
    return traj;
}

std::array<double, 4> linear_step_matrix(Scheme scheme, const SystemSpec& spec, double eps) {
    if (spec.kind() != SystemKind::HarmonicOscillator) {
        throw UnsupportedCase("the one-step map is linear only for the harmonic oscillator");
    }
    const State e1 = step(scheme, spec, 0.0, State(1.0, 0.0), eps);
    const State e2 = step(scheme, spec, 0.0, State(0.0, 1.0), eps);
    return {e1.u() - 1.0, e2.u(), e1.v(), e2.v() - 1.0};
}

FJetModel rk2_expansion_model(const SystemSpec& spec, double eps) {
    if (!(eps > 0.0)) throw ConfigError("eps must be positive");
    FJetModel m;
    m.eps = eps;
    m.system = spec;
    m.features_du = default_features(spec.kind(), Response::Du);
    m.features_dv = default_features(spec.kind(), Response::Dv);
    const double g = spec.param("gamma");
    const double damp = 1.0 - eps * g;
    const double h = eps / 2.0;
    switch (spec.kind()) {
        case SystemKind::HarmonicOscillator: {
            const double w2 = spec.param("omega0") * spec.param("omega0");
            m.coeffs_du = {eps * (-h * w2), eps * damp};
            m.coeffs_dv = {eps * (-w2 * damp), eps * (-2.0 * g * damp - h * w2)};
            break;
        }
        case SystemKind::Pendulum: {
            const double w2 = spec.param("omega0") * spec.param("omega0");
            m.coeffs_du = {eps * damp, eps * (-h * w2), 0.0};
            m.coeffs_dv = {eps * (-2.0 * g * damp), eps * (-w2 * damp), eps * (-h * w2)};
            break;
        }
        case SystemKind::Duffing: {
            const double a = spec.param("alpha");
            const double b = spec.param("beta");
            // du over (u, v, u^3, p); dv over (u, v, u^3, u^2 v, u v^2, v^3, p, pdot)
            m.coeffs_du = {eps * (-h * a), eps * damp, eps * (-h * b), eps * h};
            m.coeffs_dv = {eps * (-a * damp),     eps * (-2.0 * g * damp - h * a),
                           eps * (-b * damp),     eps * (-3.0 * h * b),
                           0.0,                   0.0,
                           eps * damp,            eps * h};
            break;
        }
    }
    m.validate();
    return m;
}

StabilityReport stability_lambda(const SystemSpec& spec, const Trajectory& traj) {
    if (traj.points.size() < 2) throw ConfigError("stability fit needs at least two points");
    const auto e0 = energy(spec, traj.state(0));
    if (!e0) throw UnsupportedCase("stability exponent needs a system with an energy");
    if (!(*e0 > 0.0)) throw NumericError("initial energy is not positive");
    const std::size_t n = traj.points.size();
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double e = *energy(spec, traj.state(i));
        if (!(e > 0.0)) throw NumericError("energy became non-positive at step " + std::to_string(i));
        y[i] = std::log1p((e - *e0) / *e0);
    }
    const double xbar = static_cast<double>(n - 1) / 2.0;
    double ybar = 0.0;
    for (double v : y) ybar += v;
    ybar /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = static_cast<double>(i) - xbar;
        sxy += dx * (y[i] - ybar);
        sxx += dx * dx;
    }
    StabilityReport r;
    r.lambda_per_step = sxy / sxx;
    r.lambda_per_time = r.lambda_per_step / traj.eps;
    r.n_steps = static_cast<long>(n - 1);
    r.truncated = traj.truncated;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = y[i] - (ybar + r.lambda_per_step * (static_cast<double>(i) - xbar));
        ss += d * d;
    }
    r.fit_residual = std::sqrt(ss / static_cast<double>(n));
    return r;
}

StabilityReport stability_lambda(const SystemSpec& spec, Scheme scheme, const State& init, long steps,
                                 double eps) {
    return stability_lambda(spec, integrate_trajectory(scheme, spec, init, 0.0, steps, eps));
}

StabilityReport stability_lambda(const SystemSpec& spec, const FJetModel& m, const State& init, long steps) {
    return stability_lambda(spec, generate(m, init, 0.0, steps, spec.forcing()));
}

std::vector<ErrorPoint> error_curve(const Trajectory& traj, const Trajectory& ref, const SystemSpec& spec) {
    if (traj.size() != ref.size() && !traj.truncated && !ref.truncated) {
        throw ConfigError("trajectories have different lengths (" + std::to_string(traj.size()) + " vs " +
                          std::to_string(ref.size()) + ")");
    }
    const std::size_t n = std::min(traj.size(), ref.size());
    std::vector<ErrorPoint> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = traj.points[i];
        const auto& b = ref.points[i];
        if (std::fabs(a.t - b.t) > 1e-9) {
            throw ConfigError("time grids differ at index " + std::to_string(i) + " (t=" + io::fmt17(a.t) +
                              " vs " + io::fmt17(b.t) + ")");
        }
        ErrorPoint e{a.t, error_measure(a.u, b.u), error_measure(a.v, b.v), std::nullopt};
        const auto ea = energy(spec, traj.state(i));
        if (ea) e.e_energy = error_measure(*ea, *energy(spec, ref.state(i)));
        out.push_back(e);
    }
    return out;
}

namespace {

double mean_over(const std::vector<ErrorPoint>& curve, double t_lo, double t_hi, bool use_energy) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& e : curve) {
        if (e.t < t_lo - 1e-9 || e.t > t_hi + 1e-9) continue;
        if (use_energy) {
            if (!e.e_energy) throw UnsupportedCase("error curve has no energy column");
            sum += *e.e_energy;
        } else {
            sum += e.e_u;
        }
        ++count;
    }
    if (count == 0) throw ConfigError("no error points inside the requested time window");
    return sum / static_cast<double>(count);
}

}  // namespace

double mean_energy_error(const std::vector<ErrorPoint>& curve, double t_lo, double t_hi) {
    return mean_over(curve, t_lo, t_hi, true);
}

double mean_u_error(const std::vector<ErrorPoint>& curve, double t_lo, double t_hi) {
    return mean_over(curve, t_lo, t_hi, false);
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    os << (traj.has_forcing ? "t,u,v,p,pdot\n" : "t,u,v\n");
    for (const auto& p : traj.points) {
        os << io::fmt17(p.t) << ',' << io::fmt17(p.u) << ',' << io::fmt17(p.v);
        if (traj.has_forcing) os << ',' << io::fmt17(p.p) << ',' << io::fmt17(p.pdot);
        os << '\n';
    }
}

void write_error_csv(std::ostream& os, const std::vector<ErrorPoint>& curve) {
    os << "t,E_u,E_v,E_energy\n";
    for (const auto& e : curve) {
        os << io::fmt17(e.t) << ',' << io::fmt17(e.e_u) << ',' << io::fmt17(e.e_v) << ',';
        if (e.e_energy) os << io::fmt17(*e.e_energy);
        os << '\n';
    }
}

void write_stability_report(std::ostream& os, const StabilityReport& r) {
    os << "lambda_per_step = " << io::fmt17(r.lambda_per_step) << '\n'
       << "lambda_per_time = " << io::fmt17(r.lambda_per_time) << '\n'
       << "n_steps = " << r.n_steps << '\n'
       << "fit_residual = " << io::fmt17(r.fit_residual) << '\n'
       << "truncated = " << (r.truncated ? "true" : "false") << '\n';
}

ResidualSummary residual_map(const FJetModel& m, const Dataset& ds) { return residuals(m, ds); }

void write_residual_map_csv(std::ostream& os, const ResidualSummary& r) {
    os << "u,v,res_du,res_dv,abs_du,abs_dv\n";
    for (const auto& x : r.records) {
        os << io::fmt17(x.u) << ',' << io::fmt17(x.v) << ',' << io::fmt17(x.res_du) << ','
           << io::fmt17(x.res_dv) << ',' << io::fmt17(std::fabs(x.res_du)) << ','
           << io::fmt17(std::fabs(x.res_dv)) << '\n';
    }
}

}  // namespace fjet
