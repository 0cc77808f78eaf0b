#include "fjet/recover.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>

#include "fjet/error.hpp"
#include "fjet/io.hpp"
#include "fjet/rng.hpp"

namespace fjet {

double error_measure(double p, double p_ref) {
    const double d = std::fabs(p - p_ref);
    if (d == 0.0) return kErrorFloor;
    return std::max(kErrorFloor, std::log10(d));
}

std::uint64_t sweep_seed(std::uint64_t master, std::size_t k) {
    return mix_seed(master, 0x5745455000000000ULL + k);
}

std::vector<SweepPoint> epsilon_sweep(const SystemSpec& spec, const Domains& domains, std::size_t n,
                                      double sigma, std::uint64_t seed, const FeatureSet& features_du,
                                      const FeatureSet& features_dv, const std::vector<double>& eps_grid,
                                      const SampleOptions& options) {
    if (eps_grid.empty()) throw ConfigError("eps grid is empty");
    std::vector<SweepPoint> out;
    out.reserve(eps_grid.size());
    for (std::size_t k = 0; k < eps_grid.size(); ++k) {
        const double eps = eps_grid[k];
        const std::string where = "at eps=" + io::fmt17(eps) + ": ";
        try {
            const Dataset ds = sample_dataset(spec, domains, n, eps, sigma, sweep_seed(seed, k), options);
            out.push_back({eps, fit(ds, features_du, features_dv)});
        } catch (const RankDeficientError& e) {
            throw RankDeficientError(where + e.what(), e.dependent());
        } catch (const ConfigError& e) {
            throw ConfigError(where + e.what());
        } catch (const NumericError& e) {
            throw NumericError(where + e.what());
        }
    }
    return out;
}

double PolyFit::at(double x) const {
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
}

PolyFit poly_fit(const std::vector<double>& x, const std::vector<double>& y, int degree) {
    if (degree < 0) throw ConfigError("polynomial degree must be non-negative");
    if (x.size() != y.size()) throw ConfigError("poly_fit: x and y differ in length");
    const std::set<double> distinct(x.begin(), x.end());
    if (distinct.size() < static_cast<std::size_t>(degree) + 2) {
        throw ConfigError("degree-" + std::to_string(degree) + " fit needs at least " +
                          std::to_string(degree + 2) + " distinct points, got " +
                          std::to_string(distinct.size()));
    }
    const auto n = static_cast<Eigen::Index>(x.size());
    Eigen::MatrixXd a(n, degree + 1);
    Eigen::VectorXd b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double p = 1.0;
        for (int j = 0; j <= degree; ++j) {
            a(i, j) = p;
            p *= x[static_cast<std::size_t>(i)];
        }
        b(i) = y[static_cast<std::size_t>(i)];
    }
    const Eigen::VectorXd c = a.colPivHouseholderQr().solve(b);
    PolyFit out;
    out.coeffs.assign(c.data(), c.data() + c.size());
    out.residual = (a * c - b).norm();
    return out;
}

std::vector<CoefficientSeries> coefficient_series(const std::vector<SweepPoint>& sweep) {
    if (sweep.empty()) throw ConfigError("empty sweep");
    const FJetModel& first = sweep.front().model;
    for (const auto& p : sweep) {
        if (p.model.features_du != first.features_du || p.model.features_dv != first.features_dv) {
            throw ConfigError("sweep models use different feature sets");
        }
    }
    std::vector<CoefficientSeries> out;
    for (Response r : {Response::Du, Response::Dv}) {
        const FeatureSet& fs = first.features(r);
        for (std::size_t j = 0; j < fs.size(); ++j) {
            CoefficientSeries s;
            s.label = (r == Response::Du ? "a" : "b") + std::to_string(j + 1);
            s.response = r;
            s.feature = fs[j];
            for (const auto& p : sweep) s.points.push_back({p.eps, p.model.coeffs(r)[j] / p.model.eps});
            std::stable_sort(s.points.begin(), s.points.end(),
                             [](const SeriesPoint& a, const SeriesPoint& b) { return a.eps < b.eps; });
            out.push_back(std::move(s));
        }
    }
    return out;
}

PolyFit extrapolate_to_zero(const CoefficientSeries& series, int degree) {
    if (degree < 0 || degree > 2) throw ConfigError("extrapolation degree must be 0 (auto), 1 or 2");
    std::vector<double> x, y;
    for (const auto& p : series.points) {
        x.push_back(p.eps);
        y.push_back(p.value);
    }
    if (degree != 0) return poly_fit(x, y, degree);
    const PolyFit linear = poly_fit(x, y, 1);
    const std::set<double> distinct(x.begin(), x.end());
    if (distinct.size() < 4) return linear;
    PolyFit quadratic = poly_fit(x, y, 2);
    return linear.residual > 3.0 * quadratic.residual ? quadratic : linear;
}

void fit_series(std::vector<CoefficientSeries>& series, int degree) {
    for (auto& s : series) s.fit = extrapolate_to_zero(s, degree);
}

double reference_coefficient(const SystemSpec& spec, Response r, const FeatureExpr& f) {
    const auto U = FeatureExpr::atom(Atom::U);
    const auto V = FeatureExpr::atom(Atom::V);
    if (r == Response::Du) return f == V ? 1.0 : 0.0;
    const double gamma = spec.param("gamma");
    if (f == V) return -2.0 * gamma;
    switch (spec.kind()) {
        case SystemKind::HarmonicOscillator:
            if (f == U) return -spec.param("omega0") * spec.param("omega0");
            return 0.0;
        case SystemKind::Pendulum:
            if (f == FeatureExpr::atom(Atom::SinU)) return -spec.param("omega0") * spec.param("omega0");
            return 0.0;
        case SystemKind::Duffing:
            if (f == U) return -spec.param("alpha");
            if (f == FeatureExpr::atom(Atom::U, 3)) return -spec.param("beta");
            if (f == FeatureExpr::atom(Atom::P)) return 1.0;
            return 0.0;
    }
    return 0.0;
}

std::optional<double> RecoveredTerm::error() const {
    if (!truth) return std::nullopt;
    return error_measure(intercept(), *truth);
}

const RecoveredTerm& RecoveredDE::term(Response r, const FeatureExpr& f) const {
    for (const auto& t : terms) {
        if (t.response == r && t.feature == f) return t;
    }
    throw ConfigError("no recovered term for " + std::string(to_string(r)) + " feature " + f.to_string());
}

const RecoveredTerm& RecoveredDE::term(const std::string& label) const {
    for (const auto& t : terms) {
        if (t.label == label) return t;
    }
    throw ConfigError("no recovered term labelled " + label);
}

bool RecoveredDE::contact_condition(double tol) const {
    const auto V = FeatureExpr::atom(Atom::V);
    bool has_v = false;
    for (const auto& t : terms) {
        if (t.response != Response::Du) continue;
        const double target = t.feature == V ? 1.0 : 0.0;
        has_v = has_v || t.feature == V;
        if (std::fabs(t.intercept() - target) >= tol) return false;
    }
    return has_v;
}

RecoveredDE recover_de(const std::vector<CoefficientSeries>& series, const std::optional<SystemSpec>& truth) {
    RecoveredDE de;
    for (const auto& s : series) {
        if (s.fit.coeffs.empty()) throw ConfigError("series " + s.label + " has not been fitted");
        RecoveredTerm t{s.label, s.response, s.feature, s.fit, std::nullopt};
        if (truth) t.truth = reference_coefficient(*truth, s.response, s.feature);
        de.terms.push_back(std::move(t));
    }
    return de;
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find(',') == std::string::npos) return s;
    return '"' + s + '"';
}

}  // namespace

void write_sweep_csv(std::ostream& os, const std::vector<CoefficientSeries>& series) {
    os << "label,response,feature,eps,coeff_normalized\n";
    for (const auto& s : series) {
        for (const auto& p : s.points) {
            os << s.label << ',' << to_string(s.response) << ',' << csv_field(s.feature.to_string()) << ','
               << io::fmt17(p.eps) << ',' << io::fmt17(p.value) << '\n';
        }
    }
}

void write_summary_csv(std::ostream& os, const RecoveredDE& de) {
    os << "label,feature,intercept,slope,quad,fit_residual,E_sigma_vs_truth\n";
    for (const auto& t : de.terms) {
        os << t.label << ',' << csv_field(t.feature.to_string()) << ',' << io::fmt17(t.intercept()) << ','
           << io::fmt17(t.slope()) << ',' << io::fmt17(t.quad()) << ',' << io::fmt17(t.fit.residual) << ',';
        if (const auto e = t.error()) os << io::fmt17(*e);
        os << '\n';
    }
}

std::vector<double> ParamDependence::limit() const {
    std::vector<double> out;
    for (const auto& s : per_power) out.push_back(s.fit.coeffs.at(0));
    return out;
}

std::size_t ParamDependence::dominant() const {
    const auto l = limit();
    std::size_t best = 0;
    for (std::size_t j = 1; j < l.size(); ++j) {
        if (std::fabs(l[j]) > std::fabs(l[best])) best = j;
    }
    return best;
}

std::vector<ParamDependence> parameter_dependence(const SystemSpec& base, const ParamDepOptions& options) {
    if (!base.params().contains(options.param)) {
        throw ConfigError("system " + std::string(to_string(base.kind())) + " has no parameter '" +
                          options.param + "'");
    }
    if (options.poly_degree < 0) throw ConfigError("polynomial degree must be non-negative");
    if (options.param_grid.size() < static_cast<std::size_t>(options.poly_degree) + 2) {
        throw ConfigError("parameter grid needs at least poly_degree + 2 values");
    }

    // series[i][c]: coefficient c across eps at parameter value i.
    std::vector<std::vector<CoefficientSeries>> series;
    for (std::size_t i = 0; i < options.param_grid.size(); ++i) {
        auto params = base.params();
        params[options.param] = options.param_grid[i];
        const SystemSpec spec(base.kind(), params);
        const Domains domains = options.domains.value_or(default_domains(spec));
        const auto sweep = epsilon_sweep(spec, domains, options.n, options.sigma,
                                         mix_seed(options.seed, 0x5041524100000000ULL + i),
                                         options.features_du, options.features_dv, options.eps_grid,
                                         options.sample);
        series.push_back(coefficient_series(sweep));
    }

    std::vector<ParamDependence> out;
    const std::size_t ncoef = series.front().size();
    const std::size_t neps = series.front().front().points.size();
    for (std::size_t c = 0; c < ncoef; ++c) {
        const CoefficientSeries& proto = series.front()[c];
        ParamDependence dep{proto.label, proto.response, proto.feature, {}};
        dep.per_power.resize(static_cast<std::size_t>(options.poly_degree) + 1);
        for (std::size_t j = 0; j < dep.per_power.size(); ++j) {
            auto& s = dep.per_power[j];
            s.label = proto.label + "_q" + std::to_string(j);
            s.response = proto.response;
            s.feature = proto.feature;
        }
        for (std::size_t k = 0; k < neps; ++k) {
            std::vector<double> y;
            for (const auto& per_param : series) y.push_back(per_param[c].points[k].value);
            const PolyFit pf = poly_fit(options.param_grid, y, options.poly_degree);
            for (std::size_t j = 0; j < dep.per_power.size(); ++j) {
                dep.per_power[j].points.push_back({proto.points[k].eps, pf.coeffs[j]});
            }
        }
        fit_series(dep.per_power);
        out.push_back(std::move(dep));
    }
    return out;
}

void write_paramdep_csv(std::ostream& os, const std::vector<ParamDependence>& deps) {
    os << "label,response,feature,power,eps,value\n";
    for (const auto& d : deps) {
        for (std::size_t j = 0; j < d.per_power.size(); ++j) {
            for (const auto& p : d.per_power[j].points) {
                os << d.label << ',' << to_string(d.response) << ',' << csv_field(d.feature.to_string()) << ','
                   << j << ',' << io::fmt17(p.eps) << ',' << io::fmt17(p.value) << '\n';
            }
        }
    }
}

void write_paramdep_summary_csv(std::ostream& os, const std::vector<ParamDependence>& deps) {
    os << "label,response,feature,power,limit,slope,quad,fit_residual\n";
    for (const auto& d : deps) {
        for (std::size_t j = 0; j < d.per_power.size(); ++j) {
            const PolyFit& f = d.per_power[j].fit;
            os << d.label << ',' << to_string(d.response) << ',' << csv_field(d.feature.to_string()) << ','
               << j << ',' << io::fmt17(f.coeffs.at(0)) << ','
               << io::fmt17(f.coeffs.size() > 1 ? f.coeffs[1] : 0.0) << ','
               << io::fmt17(f.coeffs.size() > 2 ? f.coeffs[2] : 0.0) << ',' << io::fmt17(f.residual) << '\n';
        }
    }
}

FeatureSet default_features(SystemKind kind, Response r) {
    switch (kind) {
        case SystemKind::HarmonicOscillator:
            return FeatureSet::parse("u,v");
        case SystemKind::Pendulum:
            return FeatureSet::parse("v,sin(u),v*cos(u)");
        case SystemKind::Duffing:
            return r == Response::Du ? FeatureSet::parse("u,v,u^3,p")
                                     : FeatureSet::parse("u,v,u^3,u^2*v,u*v^2,v^3,p,pdot");
    }
    throw ConfigError("unknown system kind");
}

}  // namespace fjet
