#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "fjet/datagen.hpp"
#include "fjet/error.hpp"
#include "fjet/features.hpp"
#include "fjet/io.hpp"
#include "fjet/kernels.hpp"
#include "fjet/parallel.hpp"
#include "fjet/recover.hpp"
#include "fjet/refine.hpp"
#include "fjet/regress.hpp"
#include "fjet/simulate.hpp"

namespace fs = std::filesystem;

namespace fjet::cli {

namespace {

struct SystemFlags {
    std::string system;
    std::optional<double> omega0, gamma, alpha, beta, A, Omega;

    void add(CLI::App* app, bool forcing_only = false) {
        if (!forcing_only) {
            app->add_option("--system", system, "ho | pendulum | duffing");
            app->add_option("--omega0", omega0, "natural frequency (ho, pendulum)");
            app->add_option("--gamma", gamma, "damping; the equations use 2*gamma*v");
            app->add_option("--alpha", alpha, "linear stiffness (duffing)");
            app->add_option("--beta", beta, "cubic stiffness (duffing)");
        }
        app->add_option("--A", A, "forcing amplitude");
        app->add_option("--Omega", Omega, "forcing frequency");
    }

    bool given() const { return !system.empty(); }

    SystemSpec resolve() const {
        if (system.empty()) throw ConfigError("missing --system (ho, pendulum or duffing)");
        const SystemKind kind = parse_system_kind(system);
        const std::vector<std::pair<const char*, const std::optional<double>*>> all = {
            {"omega0", &omega0}, {"gamma", &gamma}, {"alpha", &alpha},
            {"beta", &beta},     {"A", &A},         {"Omega", &Omega}};
        std::vector<std::string> wanted = kind == SystemKind::Duffing
                                              ? std::vector<std::string>{"gamma", "alpha", "beta", "A", "Omega"}
                                              : std::vector<std::string>{"omega0", "gamma"};
        std::map<std::string, double> params;
        for (const auto& [name, value] : all) {
            const bool needed = std::find(wanted.begin(), wanted.end(), name) != wanted.end();
            if (needed && !value->has_value()) {
                throw ConfigError("missing required parameter --" + std::string(name) + " for system " + system);
            }
            if (!needed && value->has_value()) {
                throw ConfigError("--" + std::string(name) + " does not apply to system " + system);
            }
            if (needed) params[name] = **value;
        }
        return SystemSpec(kind, params);
    }

    std::optional<Forcing> forcing_flags() const {
        if (A.has_value() != Omega.has_value()) throw ConfigError("--A and --Omega must be given together");
        if (!A) return std::nullopt;
        return Forcing{*A, *Omega};
    }
};

struct DomainFlags {
    std::string t, u, v;

    void add(CLI::App* app) {
        app->add_option("--t-range", t, "sampling interval for t as lo,hi");
        app->add_option("--u-range", u, "sampling interval for u as lo,hi");
        app->add_option("--v-range", v, "sampling interval for v as lo,hi");
    }

    Domains resolve(const SystemSpec& spec) const {
        Domains d = default_domains(spec);
        auto apply = [](const std::string& text, const char* flag, Interval& iv) {
            if (text.empty()) return;
            const auto xs = io::parse_doubles(text, flag);
            if (xs.size() != 2 || !(xs[0] < xs[1])) throw ConfigError(std::string(flag) + " needs lo,hi with lo < hi");
            iv = {xs[0], xs[1]};
        };
        apply(t, "--t-range", d.t);
        apply(u, "--u-range", d.u);
        apply(v, "--v-range", d.v);
        return d;
    }
};

struct FeatureFlags {
    std::string both, du, dv;

    void add(CLI::App* app) {
        app->add_option("--features", both, "features for both responses, e.g. u,v");
        app->add_option("--features-du", du, "features for the du response");
        app->add_option("--features-dv", dv, "features for the dv response");
    }

    std::pair<FeatureSet, FeatureSet> resolve(SystemKind kind) const {
        FeatureSet fdu = default_features(kind, Response::Du);
        FeatureSet fdv = default_features(kind, Response::Dv);
        if (!both.empty()) fdu = fdv = FeatureSet::parse(both);
        if (!du.empty()) fdu = FeatureSet::parse(du);
        if (!dv.empty()) fdv = FeatureSet::parse(dv);
        return {fdu, fdv};
    }
};

State parse_state(const std::string& text, const char* flag) {
    const auto xs = io::parse_doubles(text, flag);
    if (xs.size() != 2) throw ConfigError(std::string(flag) + " needs u,v");
    return {xs[0], xs[1]};
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    body(out);
}

std::optional<Forcing> model_forcing(const FJetModel& m, const SystemFlags& sys) {
    if (auto f = sys.forcing_flags()) return f;
    if (m.system) return m.system->forcing();
    return std::nullopt;
}

struct Context {
    CLI::App* sub = nullptr;
    std::vector<std::string> argv;
    std::string out = "out";
    std::optional<unsigned> threads;

    fs::path dir() const { return fs::path(out); }

    void begin() const {
        if (threads) set_thread_count(*threads);
        fs::create_directories(dir());
    }

    void manifest(const std::string& command, const std::vector<std::string>& outputs) const {
        nlohmann::ordered_json j;
        j["tool"] = "fjet";
        j["version"] = kVersion;
        j["command"] = command;
        j["argv"] = argv;
        j["config"] = "config.toml";
        j["rerun"] = "fjet --config " + (dir() / "config.toml").string() + " " + command;
        j["outputs"] = outputs;
        j["simd"] = std::string(kernels::to_string(kernels::active().isa));
        io::write_text(dir() / "manifest.json", j.dump(2) + "\n");
        // Unset optional flags serialize as empty strings; leave them out so
        // the file can be fed back through --config.
        std::istringstream all(sub->config_to_str(true, false));
        std::string config = "[" + sub->get_name() + "]\n", line;
        while (std::getline(all, line)) {
            if (line.empty() || line.ends_with("=\"\"") || line.starts_with("config=")) continue;
            config += line + "\n";
        }
        io::write_text(dir() / "config.toml", config);
    }
};

// --- commands -------------------------------------------------------------

struct SynthCmd {
    SystemFlags sys;
    DomainFlags dom;
    std::size_t n = 2000;
    double eps = 0.0;
    double sigma = 0.0;
    std::uint64_t seed = 0;
    double eps_base = kDefaultEpsBase;
    bool shared_noise = false;

    void add(CLI::App* app) {
        sys.add(app);
        dom.add(app);
        app->add_option("--n", n, "number of records")->capture_default_str();
        app->add_option("--eps", eps, "update step")->required();
        app->add_option("--sigma", sigma, "noise scale (applied as sigma*eps)")->capture_default_str();
        app->add_option("--seed", seed, "master seed")->capture_default_str();
        app->add_option("--eps-base", eps_base, "fine RK4 step used as ground truth")->capture_default_str();
        app->add_flag("--shared-noise", shared_noise, "one noise draw shared by both endpoints");
    }

    void run(const Context& ctx) const {
        const SystemSpec spec = sys.resolve();
        const SampleOptions opts{eps_base, shared_noise ? NoiseMode::SharedDraw : NoiseMode::IndependentEndpoints};
        ctx.begin();
        const Dataset ds = sample_dataset(spec, dom.resolve(spec), n, eps, sigma, seed, opts);
        save_dataset(ctx.dir() / "dataset.csv", ds);
        ctx.manifest("synth", {"dataset.csv", "dataset.csv.meta.json"});
        std::cout << "wrote " << ds.records.size() << " records to " << (ctx.dir() / "dataset.csv").string() << '\n';
    }
};

struct FitCmd {
    std::string data;
    FeatureFlags feat;
    std::string base;
    int max_n = 3;
    int max_degree = 3;
    bool keep_cos_squared = false;
    bool intercept = false;
    int scores = 0;
    std::uint64_t seed = 0;

    void add(CLI::App* app) {
        app->add_option("--data", data, "dataset CSV written by synth")->required();
        feat.add(app);
        app->add_option("--base", base, "base features for --features auto")->capture_default_str();
        app->add_option("--max-n", max_n, "superset: products of up to this many generators")->capture_default_str();
        app->add_option("--max-degree", max_degree, "superset: polynomial degree cap")->capture_default_str();
        app->add_flag("--keep-cos-squared", keep_cos_squared, "superset: do not rewrite cos(u)^2");
        app->add_flag("--intercept", intercept, "append a constant feature (diagnostic)");
        app->add_option("--scores", scores, "bootstrap resamples for coefficient scores (0: off)")->capture_default_str();
        app->add_option("--seed", seed, "bootstrap seed")->capture_default_str();
    }

    void run(const Context& ctx) const {
        const Dataset ds = load_dataset(data);
        FeatureSet fdu, fdv;
        if (feat.both == "auto") {
            if (base.empty()) throw ConfigError("--features auto needs --base");
            SupersetOptions so;
            so.eliminate_cos_squared = !keep_cos_squared;
            const FeatureSet cands = superset(FeatureSet::parse(base), max_n, max_degree, so);
            const CollinearSplit split = dedupe_collinear(cands.items(), ds);
            for (const auto& f : split.dropped) std::cout << "dropped collinear feature " << f.to_string() << '\n';
            fdu = fdv = split.kept;
        } else {
            std::tie(fdu, fdv) = feat.resolve(ds.system.kind());
        }
        ctx.begin();
        const FJetModel m = fit(ds, fdu, fdv, FitOptions{intercept});
        save_model(ctx.dir() / "model.json", m);
        std::vector<std::string> outputs = {"model.json"};
        if (scores > 0) {
            const CoefficientScores sc = bootstrap_scores(ds, fdu, fdv, scores, seed);
            write_file(ctx.dir() / "scores.csv", [&](std::ostream& os) {
                os << "response,feature,coeff,score\n";
                for (Response r : {Response::Du, Response::Dv}) {
                    const auto& s = r == Response::Du ? sc.du : sc.dv;
                    for (std::size_t j = 0; j < m.features(r).size(); ++j) {
                        os << to_string(r) << ",\"" << m.features(r)[j].to_string() << "\","
                           << io::fmt17(m.coeffs(r)[j]) << ',' << io::fmt17(s[j]) << '\n';
                    }
                }
            });
            outputs.push_back("scores.csv");
        }
        ctx.manifest("fit", outputs);
        std::cout << "du: " << m.features_du.to_string() << "\ndv: " << m.features_dv.to_string() << '\n';
    }
};

struct SweepCmd {
    SystemFlags sys;
    DomainFlags dom;
    FeatureFlags feat;
    std::size_t n = 2000;
    double sigma = 0.0;
    std::uint64_t seed = 0;
    std::string eps_grid;
    int degree = 0;
    double eps_base = kDefaultEpsBase;

    void add(CLI::App* app) {
        sys.add(app);
        dom.add(app);
        feat.add(app);
        app->add_option("--n", n, "records per eps")->capture_default_str();
        app->add_option("--sigma", sigma, "noise scale")->capture_default_str();
        app->add_option("--seed", seed, "master seed")->capture_default_str();
        app->add_option("--eps-grid", eps_grid, "comma-separated eps values (default: 10 values in [0.001, 0.1])");
        app->add_option("--degree", degree, "eps -> 0 fit degree: 1, 2, or 0 for automatic")->capture_default_str();
        app->add_option("--eps-base", eps_base, "fine RK4 step")->capture_default_str();
    }

    void run(const Context& ctx) const {
        const SystemSpec spec = sys.resolve();
        const auto [fdu, fdv] = feat.resolve(spec.kind());
        const auto grid = eps_grid.empty() ? kDefaultEpsGrid : io::parse_doubles(eps_grid, "--eps-grid");
        ctx.begin();
        const auto sweep = epsilon_sweep(spec, dom.resolve(spec), n, sigma, seed, fdu, fdv, grid,
                                         SampleOptions{eps_base, NoiseMode::IndependentEndpoints});
        auto series = coefficient_series(sweep);
        fit_series(series, degree);
        const RecoveredDE de = recover_de(series, spec);
        write_file(ctx.dir() / "sweep.csv", [&](std::ostream& os) { write_sweep_csv(os, series); });
        write_file(ctx.dir() / "summary.csv", [&](std::ostream& os) { write_summary_csv(os, de); });
        ctx.manifest("sweep", {"sweep.csv", "summary.csv"});
        write_summary_csv(std::cout, de);
    }
};

struct ParamDepCmd {
    SystemFlags sys;
    FeatureFlags feat;
    std::string param;
    std::string grid;
    std::string eps_grid;
    int poly_degree = 2;
    std::size_t n = 2000;
    double sigma = 0.0;
    std::uint64_t seed = 0;

    void add(CLI::App* app) {
        sys.add(app);
        feat.add(app);
        app->add_option("--param", param, "parameter to sweep, e.g. omega0")->required();
        app->add_option("--grid", grid, "comma-separated parameter values")->required();
        app->add_option("--eps-grid", eps_grid, "comma-separated eps values");
        app->add_option("--poly-degree", poly_degree, "polynomial degree in the parameter")->capture_default_str();
        app->add_option("--n", n, "records per dataset")->capture_default_str();
        app->add_option("--sigma", sigma, "noise scale")->capture_default_str();
        app->add_option("--seed", seed, "master seed")->capture_default_str();
    }

    void run(const Context& ctx) const {
        ParamDepOptions o;
        o.param = param;
        o.param_grid = io::parse_doubles(grid, "--grid");
        // The swept parameter's own flag may be omitted.
        SystemFlags filled = sys;
        const std::pair<const char*, std::optional<double>*> slots[] = {
            {"omega0", &filled.omega0}, {"gamma", &filled.gamma}, {"alpha", &filled.alpha},
            {"beta", &filled.beta},     {"A", &filled.A},         {"Omega", &filled.Omega}};
        for (const auto& [name, slot] : slots) {
            if (param == name && !slot->has_value()) *slot = o.param_grid.front();
        }
        const SystemSpec base = filled.resolve();
        std::tie(o.features_du, o.features_dv) = feat.resolve(base.kind());
        if (!eps_grid.empty()) o.eps_grid = io::parse_doubles(eps_grid, "--eps-grid");
        o.poly_degree = poly_degree;
        o.n = n;
        o.sigma = sigma;
        o.seed = seed;
        ctx.begin();
        const auto deps = parameter_dependence(base, o);
        write_file(ctx.dir() / "paramdep.csv", [&](std::ostream& os) { write_paramdep_csv(os, deps); });
        write_file(ctx.dir() / "paramdep_summary.csv",
                   [&](std::ostream& os) { write_paramdep_summary_csv(os, deps); });
        ctx.manifest("paramdep", {"paramdep.csv", "paramdep_summary.csv"});
        write_paramdep_summary_csv(std::cout, deps);
    }
};

struct GenerateCmd {
    SystemFlags sys;
    std::string model;
    std::string scheme;
    std::string init = "1,0";
    double t0 = 0.0;
    long steps = 0;
    double eps = 0.0;
    bool error_curve_flag = false;
    double eps_base = kDefaultEpsBase;

    void add(CLI::App* app) {
        sys.add(app);
        auto* m = app->add_option("--model", model, "model file to iterate");
        auto* s = app->add_option("--scheme", scheme, "exact | fine | euler | rk2 | rk4 (needs the system flags)");
        m->excludes(s);
        app->add_option("--init", init, "initial state u,v")->capture_default_str();
        app->add_option("--t0", t0, "initial time")->capture_default_str();
        app->add_option("--steps", steps, "number of steps")->required();
        app->add_option("--eps", eps, "step for --scheme (a model carries its own)");
        app->add_flag("--error-curve", error_curve_flag, "also write errors against the reference solution");
        app->add_option("--eps-base", eps_base, "fine RK4 step of the reference")->capture_default_str();
    }

    void run(const Context& ctx) const {
        const State s0 = parse_state(init, "--init");
        std::optional<SystemSpec> spec;
        if (sys.given()) spec = sys.resolve();
        Trajectory traj;
        if (!model.empty()) {
            const FJetModel m = load_model(model);
            if (!spec) spec = m.system;
            traj = generate(m, s0, t0, steps, model_forcing(m, sys));
        } else {
            if (scheme.empty()) throw ConfigError("give --model or --scheme");
            if (!spec) throw ConfigError("--scheme needs --system and its parameters");
            if (!(eps > 0.0)) throw ConfigError("--scheme needs --eps > 0");
            if (scheme == "exact" || scheme == "fine") {
                traj = reference_trajectory(*spec, s0, t0, steps, eps, eps_base);
                if (scheme == "exact" && traj.source != "exact") {
                    throw UnsupportedCase("no closed form for this system; use --scheme fine");
                }
            } else {
                traj = integrate_trajectory(parse_scheme(scheme), *spec, s0, t0, steps, eps);
            }
        }
        ctx.begin();
        write_file(ctx.dir() / "trajectory.csv", [&](std::ostream& os) { write_trajectory_csv(os, traj); });
        std::vector<std::string> outputs = {"trajectory.csv"};
        if (error_curve_flag) {
            if (!spec) throw ConfigError("--error-curve needs the generating system");
            const Trajectory ref = reference_trajectory(*spec, s0, t0, steps, traj.eps, eps_base);
            write_file(ctx.dir() / "errors.csv",
                       [&](std::ostream& os) { write_error_csv(os, error_curve(traj, ref, *spec)); });
            outputs.push_back("errors.csv");
        }
        ctx.manifest("generate", outputs);
        std::cout << "wrote " << traj.size() << " points" << (traj.truncated ? " (truncated: diverged)" : "")
                  << '\n';
    }
};

struct StabilityCmd {
    SystemFlags sys;
    std::string scheme = "rk2";
    std::string model;
    long steps = 10000;
    double eps = 0.1;
    std::string init = "1,0";
    std::size_t n = 2000;
    std::uint64_t seed = 0;

    void add(CLI::App* app) {
        sys.add(app);
        app->add_option("--scheme", scheme, "euler | rk2 | rk4 | fjet0 | model")->capture_default_str();
        app->add_option("--model", model, "model file for --scheme model");
        app->add_option("--steps", steps, "number of steps")->capture_default_str();
        app->add_option("--eps", eps, "step size")->capture_default_str();
        app->add_option("--init", init, "initial state u,v")->capture_default_str();
        app->add_option("--n", n, "records for the fjet0 fit")->capture_default_str();
        app->add_option("--seed", seed, "seed for the fjet0 fit")->capture_default_str();
    }

    void run(const Context& ctx) const {
        const SystemSpec spec = sys.given() ? sys.resolve() : harmonic_oscillator(1.0, 0.0);
        const State s0 = parse_state(init, "--init");
        StabilityReport r;
        if (scheme == "model") {
            if (model.empty()) throw ConfigError("--scheme model needs --model");
            r = stability_lambda(spec, load_model(model), s0, steps);
        } else if (scheme == "fjet0") {
            const Dataset ds = sample_dataset(spec, default_domains(spec), n, eps, 0.0, seed);
            const FJetModel m = fit(ds, default_features(spec.kind(), Response::Du),
                                    default_features(spec.kind(), Response::Dv));
            r = stability_lambda(spec, m, s0, steps);
        } else {
            r = stability_lambda(spec, parse_scheme(scheme), s0, steps, eps);
        }
        ctx.begin();
        write_file(ctx.dir() / "stability.txt", [&](std::ostream& os) { write_stability_report(os, r); });
        ctx.manifest("stability", {"stability.txt"});
        write_stability_report(std::cout, r);
    }
};

struct ResidualsCmd {
    std::string data;
    std::string model;
    bool rk2 = false;

    void add(CLI::App* app) {
        app->add_option("--data", data, "dataset CSV")->required();
        auto* m = app->add_option("--model", model, "model file");
        auto* r = app->add_flag("--rk2-expansion", rk2, "use the expanded RK2 step for the dataset's system");
        m->excludes(r);
    }

    void run(const Context& ctx) const {
        const Dataset ds = load_dataset(data);
        FJetModel m;
        if (rk2) {
            m = rk2_expansion_model(ds.system, ds.eps);
        } else {
            if (model.empty()) throw ConfigError("give --model or --rk2-expansion");
            m = load_model(model);
        }
        const ResidualSummary r = residual_map(m, ds);
        ctx.begin();
        write_file(ctx.dir() / "residuals.csv", [&](std::ostream& os) { write_residual_map_csv(os, r); });
        const std::string summary =
            "max_abs_du = " + io::fmt17(r.max_abs_du) + "\nmax_abs_dv = " + io::fmt17(r.max_abs_dv) + "\n";
        io::write_text(ctx.dir() / "residual_summary.txt", summary);
        ctx.manifest("residuals", {"residuals.csv", "residual_summary.txt"});
        std::cout << summary;
    }
};

struct RefineCmd {
    SystemFlags sys;
    std::string model;
    std::string orbit;
    long orbit_steps = 100;
    std::string init = "1,0";
    double t0 = 0.0;
    RefineConfig cfg;
    int restarts = 1;

    void add(CLI::App* app) {
        sys.add(app);
        app->add_option("--model", model, "model file to refine")->required();
        app->add_option("--orbit", orbit, "observed orbit CSV with columns t,u,v");
        app->add_option("--orbit-steps", orbit_steps, "without --orbit: reference orbit length in model steps")
            ->capture_default_str();
        app->add_option("--init", init, "initial state u,v")->capture_default_str();
        app->add_option("--t0", t0, "initial time")->capture_default_str();
        app->add_option("--cost-alpha", cfg.alpha, "velocity weight in the cost (alpha of the orbit cost)")->capture_default_str();
        app->add_option("--iterations", cfg.iterations, "proposals per restart")->capture_default_str();
        app->add_option("--init-scale", cfg.init_scale, "initial relative perturbation")->capture_default_str();
        app->add_option("--decay", cfg.decay, "scale factor after a run of rejections")->capture_default_str();
        app->add_option("--patience", cfg.patience, "rejections before decaying")->capture_default_str();
        app->add_option("--seed", cfg.seed, "first refinement seed")->capture_default_str();
        app->add_option("--restarts", restarts, "independent restarts (seeds seed, seed+1, ...)")
            ->capture_default_str();
    }

    void run(const Context& ctx) const {
        const FJetModel m = load_model(model);
        const State s0 = parse_state(init, "--init");
        const auto forcing = model_forcing(m, sys);
        std::optional<OrbitData> data;
        if (!orbit.empty()) {
            const auto table = io::read_csv(orbit);
            const std::size_t ct = table.column("t"), cu = table.column("u"), cv = table.column("v");
            std::vector<OrbitPoint> pts;
            for (const auto& row : table.rows) pts.push_back({row[ct], row[cu], row[cv]});
            data.emplace(std::move(pts));
        } else {
            std::optional<SystemSpec> spec = m.system;
            if (sys.given()) spec = sys.resolve();
            if (!spec) throw ConfigError("without --orbit the system must be known (model or --system)");
            data = OrbitData::from_trajectory(reference_trajectory(*spec, s0, t0, orbit_steps, m.eps));
        }
        if (restarts < 1) throw ConfigError("--restarts must be >= 1");
        std::vector<std::uint64_t> seeds;
        for (int i = 0; i < restarts; ++i) seeds.push_back(cfg.seed + static_cast<std::uint64_t>(i));
        ctx.begin();
        const RefineResult r = refine_best_of(m, *data, s0, t0, cfg, seeds, forcing);
        save_model(ctx.dir() / "refined_model.json", r.model);
        write_file(ctx.dir() / "history.csv", [&](std::ostream& os) { write_history_csv(os, r.history); });
        ctx.manifest("refine", {"refined_model.json", "history.csv"});
        std::cout << "cost " << io::fmt17(r.history.front()) << " -> " << io::fmt17(r.history.back()) << " ("
                  << r.accepted << " accepted)\n";
    }
};

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"Fits phase-space update maps, recovers ODEs by eps -> 0 extrapolation, and compares "
                 "generated orbits with Runge-Kutta integrators.",
                 "fjet"};
    app.set_version_flag("--version", kVersion);
    app.set_config("--config", "", "TOML file with flag values, e.g. the config.toml of an earlier run");
    app.require_subcommand(1);

    Context ctx;
    ctx.argv = args;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--out", ctx.out, "output directory")->capture_default_str();
        sub->add_option("--threads", ctx.threads, "worker cap (default: FJET_THREADS or all cores)");
    };

    SynthCmd synth;
    FitCmd fitc;
    SweepCmd sweep;
    ParamDepCmd paramdep;
    GenerateCmd gen;
    StabilityCmd stab;
    ResidualsCmd resid;
    RefineCmd refine;
    std::vector<std::pair<CLI::App*, std::function<void()>>> cmds;
    auto reg = [&](const char* name, const char* help, auto& cmd) {
        CLI::App* sub = app.add_subcommand(name, help);
        cmd.add(sub);
        common(sub);
        cmds.emplace_back(sub, [&cmd, &ctx, sub] {
            ctx.sub = sub;
            cmd.run(ctx);
        });
    };
    reg("synth", "sample a dataset of updates", synth);
    reg("fit", "fit a feature model to a dataset", fitc);
    reg("sweep", "fit across an eps grid and extrapolate coefficients to eps = 0", sweep);
    reg("paramdep", "coefficient dependence on a physical parameter", paramdep);
    reg("generate", "iterate a model or integrator from an initial state", gen);
    reg("stability", "energy growth exponent on the undamped oscillator", stab);
    reg("residuals", "per-record residuals of a model on a dataset", resid);
    reg("refine", "tune a model's coefficients against one orbit", refine);

    try {
        std::vector<std::string> reversed(args.begin() + (args.empty() ? 0 : 1), args.end());
        std::reverse(reversed.begin(), reversed.end());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        for (auto& [sub, fn] : cmds) {
            if (sub->parsed()) fn();
        }
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const UnsupportedCase& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

int run(int argc, char** argv) { return run(std::vector<std::string>(argv, argv + argc)); }

}  // namespace fjet::cli
