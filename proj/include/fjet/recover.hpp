#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fjet/datagen.hpp"
#include "fjet/features.hpp"
#include "fjet/regress.hpp"

namespace fjet {

inline const std::vector<double> kDefaultEpsGrid = {0.001, 0.002, 0.004, 0.007, 0.01,
                                                    0.02,  0.04,  0.06,  0.08,  0.1};

/// log10|p − p_ref|, floored at −18 (which is also returned for p == p_ref).
double error_measure(double p, double p_ref);
inline constexpr double kErrorFloor = -18.0;

/// Seed of the k-th grid point of a sweep with master seed `master`.
std::uint64_t sweep_seed(std::uint64_t master, std::size_t k);

struct SweepPoint {
    double eps;
    FJetModel model;
};

/// One dataset and fit per eps, in grid order. Fit and sampling errors are
/// rethrown with the offending eps in the message.
std::vector<SweepPoint> epsilon_sweep(const SystemSpec& spec, const Domains& domains, std::size_t n,
                                      double sigma, std::uint64_t seed, const FeatureSet& features_du,
                                      const FeatureSet& features_dv,
                                      const std::vector<double>& eps_grid = kDefaultEpsGrid,
                                      const SampleOptions& options = {});

struct SeriesPoint {
    double eps;
    double value;
};

struct PolyFit {
    /// Intercept first.
    std::vector<double> coeffs;
    /// Root of the sum of squared residuals.
    double residual = 0.0;

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    double at(double x) const;
};

/// Unweighted least-squares polynomial; needs at least degree + 2 distinct x.
PolyFit poly_fit(const std::vector<double>& x, const std::vector<double>& y, int degree);

/// A coefficient's normalized values (raw / eps) across a sweep.
struct CoefficientSeries {
    std::string label;
    Response response = Response::Du;
    FeatureExpr feature;
    std::vector<SeriesPoint> points;
    PolyFit fit;
};

/// Builds one series per coefficient: a1, a2, ... for the du features and
/// b1, b2, ... for the dv features, in feature order. All models must share
/// their feature sets.
std::vector<CoefficientSeries> coefficient_series(const std::vector<SweepPoint>& sweep);

/// degree 1 or 2, or 0 for automatic: quadratic when at least four points are
/// available and the linear residual exceeds three times the quadratic one.
PolyFit extrapolate_to_zero(const CoefficientSeries& series, int degree = 0);
/// extrapolate_to_zero applied to every series, stored in series.fit.
void fit_series(std::vector<CoefficientSeries>& series, int degree = 0);

/// Coefficient of `f` in the first-order form of the generating ODE:
/// du/dt = v and dv/dt = G. Features absent from the equation give 0.
double reference_coefficient(const SystemSpec& spec, Response r, const FeatureExpr& f);

struct RecoveredTerm {
    std::string label;
    Response response;
    FeatureExpr feature;
    PolyFit fit;
    std::optional<double> truth;

    double intercept() const { return fit.coeffs.at(0); }
    double slope() const { return fit.coeffs.size() > 1 ? fit.coeffs[1] : 0.0; }
    double quad() const { return fit.coeffs.size() > 2 ? fit.coeffs[2] : 0.0; }
    std::optional<double> error() const;
};

struct RecoveredDE {
    std::vector<RecoveredTerm> terms;

    /// Throws ConfigError if no such term exists.
    const RecoveredTerm& term(Response r, const FeatureExpr& f) const;
    const RecoveredTerm& term(const std::string& label) const;
    /// Contact condition: du-row coefficient of v within tol of 1, others within tol of 0.
    bool contact_condition(double tol) const;
};

/// Series must already be fitted. `truth` fills the reference columns.
RecoveredDE recover_de(const std::vector<CoefficientSeries>& series,
                       const std::optional<SystemSpec>& truth = std::nullopt);

/// `label,response,feature,eps,coeff_normalized`
void write_sweep_csv(std::ostream& os, const std::vector<CoefficientSeries>& series);
/// `label,feature,intercept,slope,quad,fit_residual,E_sigma_vs_truth`; the
/// last column is empty without a reference.
void write_summary_csv(std::ostream& os, const RecoveredDE& de);

struct ParamDepOptions {
    std::string param;
    std::vector<double> param_grid;
    std::vector<double> eps_grid = kDefaultEpsGrid;
    int poly_degree = 2;
    std::size_t n = 2000;
    double sigma = 0.0;
    std::uint64_t seed = 0;
    FeatureSet features_du;
    FeatureSet features_dv;
    /// Sampling box; default_domains() of each swept system when unset.
    std::optional<Domains> domains;
    SampleOptions sample;
};

/// Dependence of one coefficient on the swept parameter q: at each eps the
/// normalized coefficient is fitted as Σ_j c_j(eps) q^j, then each c_j is
/// extrapolated to eps = 0.
struct ParamDependence {
    std::string label;
    Response response;
    FeatureExpr feature;
    /// per_power[j] is the series c_j(eps) with its eps → 0 fit.
    std::vector<CoefficientSeries> per_power;

    /// c_j(0) for j = 0..degree.
    std::vector<double> limit() const;
    /// Index of the largest |c_j(0)|.
    std::size_t dominant() const;
};

std::vector<ParamDependence> parameter_dependence(const SystemSpec& base, const ParamDepOptions& options);

/// `label,response,feature,power,eps,value` rows followed by nothing else;
/// limits go in write_paramdep_summary_csv.
void write_paramdep_csv(std::ostream& os, const std::vector<ParamDependence>& deps);
/// `label,response,feature,power,limit,slope,quad,fit_residual`
void write_paramdep_summary_csv(std::ostream& os, const std::vector<ParamDependence>& deps);

/// Default feature sets: HO {u, v}; pendulum {v, sin(u), v*cos(u)};
/// Duffing du {u, v, u^3, p} and dv {u, v, u^3, u^2*v, u*v^2, v^3, p, pdot}.
FeatureSet default_features(SystemKind kind, Response r);

}  // namespace fjet
