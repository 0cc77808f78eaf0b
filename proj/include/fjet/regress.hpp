#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fjet/datagen.hpp"
#include "fjet/features.hpp"

namespace fjet {

enum class Response { Du, Dv };

std::string_view to_string(Response r);

/// Feature-regression update map at a fixed step eps:
///   Δu = Σ coeffs_du[i] · features_du[i],  Δu̇ = Σ coeffs_dv[i] · features_dv[i].
/// Coefficients are raw multipliers of each feature in the update; the
/// normalized value (raw / eps) is what tends to the ODE coefficient as eps → 0.
struct FJetModel {
    double eps = 0.0;
    double sigma = 0.0;
    FeatureSet features_du;
    std::vector<double> coeffs_du;
    FeatureSet features_dv;
    std::vector<double> coeffs_dv;
    std::optional<SystemSpec> system;
    std::uint64_t seed = 0;
    std::string refined_from;

    const FeatureSet& features(Response r) const { return r == Response::Du ? features_du : features_dv; }
    const std::vector<double>& coeffs(Response r) const { return r == Response::Du ? coeffs_du : coeffs_dv; }
    std::vector<double>& coeffs(Response r) { return r == Response::Du ? coeffs_du : coeffs_dv; }

    /// Raw coefficient of f in response r, or 0 if f is not used there.
    double raw(Response r, const FeatureExpr& f) const;
    double normalized(Response r, const FeatureExpr& f) const { return raw(r, f) / eps; }

    bool uses_forcing() const;
    /// Throws NumericError on size mismatch or non-finite coefficients.
    void validate() const;
};

struct FitOptions {
    /// Diagnostic: append a constant feature to both responses.
    bool add_intercept = false;
};

/// Ordinary least squares per response through a column-pivoted Householder QR
/// (no regularization). Throws RankDeficientError naming the dependent features.
FJetModel fit(const Dataset& ds, const FeatureSet& features_du, const FeatureSet& features_dv,
              const FitOptions& options = {});

struct Prediction {
    double du;
    double dv;
};

Prediction predict(const FJetModel& m, const UpdateRecord& rec);
/// Batched predict over all records (SIMD accumulation, bit-identical to predict()).
std::vector<Prediction> predict_all(const FJetModel& m, std::span<const UpdateRecord> records);

struct ResidualRecord {
    double u;
    double v;
    double res_du;
    double res_dv;
};

struct ResidualSummary {
    std::vector<ResidualRecord> records;
    double max_abs_du = 0.0;
    double max_abs_dv = 0.0;
};

/// res = prediction − data for every record.
ResidualSummary residuals(const FJetModel& m, const Dataset& ds);

/// `u,v,res_du,res_dv`
void write_residual_csv(std::ostream& os, const ResidualSummary& r);

/// Bootstrap score |coef| / std over resamples, same shape as the model's
/// coefficients. A pruning aid; values below ~2 suggest an irrelevant feature.
struct CoefficientScores {
    std::vector<double> du;
    std::vector<double> dv;
};
CoefficientScores bootstrap_scores(const Dataset& ds, const FeatureSet& features_du,
                                   const FeatureSet& features_dv, int resamples, std::uint64_t seed);

/// Model file: JSON with fields version, system, eps, sigma, seed,
/// features_du[], coeffs_du[], features_dv[], coeffs_dv[] (and refined_from
/// when set); numbers are written with 17 significant digits.
std::string model_to_string(const FJetModel& m);
FJetModel model_from_string(const std::string& text);
void save_model(const std::filesystem::path& path, const FJetModel& m);
FJetModel load_model(const std::filesystem::path& path);

}  // namespace fjet
