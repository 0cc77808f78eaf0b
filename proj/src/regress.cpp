#include "fjet/regress.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "fjet/rng.hpp"

#include "fjet/error.hpp"
#include "fjet/io.hpp"
#include "fjet/kernels.hpp"
#include "serialize.hpp"

namespace fjet {

std::string_view to_string(Response r) { return r == Response::Du ? "du" : "dv"; }

double FJetModel::raw(Response r, const FeatureExpr& f) const {
    const auto i = features(r).index_of(f);
    return i < 0 ? 0.0 : coeffs(r)[static_cast<std::size_t>(i)];
}

bool FJetModel::uses_forcing() const {
    for (const auto* fs : {&features_du, &features_dv}) {
        for (const auto& f : *fs) {
            if (f.uses(Atom::P) || f.uses(Atom::Pdot)) return true;
        }
    }
    return false;
}

void FJetModel::validate() const {
    if (coeffs_du.size() != features_du.size() || coeffs_dv.size() != features_dv.size()) {
        throw NumericError("model coefficient count does not match its feature count");
    }
    for (const auto* cs : {&coeffs_du, &coeffs_dv}) {
        for (double c : *cs) {
            if (!std::isfinite(c)) throw NumericError("model has a non-finite coefficient");
        }
    }
    if (!(eps > 0.0)) throw NumericError("model eps must be positive");
}

namespace {

Eigen::MatrixXd design_matrix(const FeatureSet& fs, std::span<const UpdateRecord> records) {
    const auto cols = evaluate_columns(fs.items(), records);
    Eigen::MatrixXd x(static_cast<Eigen::Index>(records.size()), static_cast<Eigen::Index>(fs.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) {
        x.col(static_cast<Eigen::Index>(j)) =
            Eigen::Map<const Eigen::VectorXd>(cols[j].data(), static_cast<Eigen::Index>(cols[j].size()));
    }
    return x;
}

std::vector<double> solve_ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const FeatureSet& fs,
                              Response r) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    qr.setThreshold(1e-12);
    if (qr.rank() < x.cols()) {
        std::vector<std::string> dependent;
        const auto& perm = qr.colsPermutation().indices();
        for (Eigen::Index k = qr.rank(); k < x.cols(); ++k) {
            dependent.push_back(fs[static_cast<std::size_t>(perm(k))].to_string());
        }
        std::string names;
        for (const auto& d : dependent) names += (names.empty() ? "" : ", ") + d;
        throw RankDeficientError("design matrix for " + std::string(to_string(r)) +
                                     " is rank deficient; dependent features: " + names,
                                 dependent);
    }
    const Eigen::VectorXd beta = qr.solve(y);
    return {beta.data(), beta.data() + beta.size()};
}

}  // namespace

FJetModel fit(const Dataset& ds, const FeatureSet& features_du, const FeatureSet& features_dv,
              const FitOptions& options) {
    FeatureSet fdu = features_du;
    FeatureSet fdv = features_dv;
    if (options.add_intercept) {
        fdu.add(FeatureExpr{});
        fdv.add(FeatureExpr{});
    }
    if (fdu.empty() || fdv.empty()) throw ConfigError("each response needs at least one feature");
    const std::size_t n = ds.records.size();
    if (n <= std::max(fdu.size(), fdv.size())) {
        throw ConfigError("dataset has " + std::to_string(n) + " records; need more than the " +
                          std::to_string(std::max(fdu.size(), fdv.size())) + " features");
    }
    Eigen::VectorXd ydu(static_cast<Eigen::Index>(n));
    Eigen::VectorXd ydv(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        ydu(static_cast<Eigen::Index>(i)) = ds.records[i].du;
        ydv(static_cast<Eigen::Index>(i)) = ds.records[i].dv;
    }

    FJetModel m;
    m.eps = ds.eps;
    m.sigma = ds.sigma;
    m.system = ds.system;
    m.seed = ds.seed;
    m.features_du = fdu;
    m.features_dv = fdv;
    m.coeffs_du = solve_ols(design_matrix(fdu, ds.records), ydu, fdu, Response::Du);
    m.coeffs_dv = solve_ols(design_matrix(fdv, ds.records), ydv, fdv, Response::Dv);
    m.validate();
    return m;
}

Prediction predict(const FJetModel& m, const UpdateRecord& rec) {
    auto row = [&](const FeatureSet& fs, const std::vector<double>& cs) {
        double acc = 0.0;
        for (std::size_t j = 0; j < fs.size(); ++j) acc = acc + cs[j] * evaluate(fs[j], rec);
        return acc;
    };
    return {row(m.features_du, m.coeffs_du), row(m.features_dv, m.coeffs_dv)};
}

std::vector<Prediction> predict_all(const FJetModel& m, std::span<const UpdateRecord> records) {
    const auto& k = kernels::active();
    auto row = [&](const FeatureSet& fs, const std::vector<double>& cs) {
        std::vector<double> acc(records.size(), 0.0);
        const auto cols = evaluate_columns(fs.items(), records);
        for (std::size_t j = 0; j < fs.size(); ++j) k.axpy(acc.data(), cs[j], cols[j].data(), acc.size());
        return acc;
    };
    const auto du = row(m.features_du, m.coeffs_du);
    const auto dv = row(m.features_dv, m.coeffs_dv);
    std::vector<Prediction> out(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) out[i] = {du[i], dv[i]};
    return out;
}

ResidualSummary residuals(const FJetModel& m, const Dataset& ds) {
    if (std::fabs(m.eps - ds.eps) > 1e-12) {
        throw ConfigError("model eps " + io::fmt17(m.eps) + " does not match dataset eps " +
                          io::fmt17(ds.eps));
    }
    const auto pred = predict_all(m, ds.records);
    const std::size_t n = ds.records.size();
    std::vector<double> pdu(n), pdv(n), ddu(n), ddv(n);
    ResidualSummary out;
    out.records.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& r = ds.records[i];
        pdu[i] = pred[i].du;
        pdv[i] = pred[i].dv;
        ddu[i] = r.du;
        ddv[i] = r.dv;
        out.records[i] = {r.u, r.v, pred[i].du - r.du, pred[i].dv - r.dv};
    }
    const auto& k = kernels::active();
    out.max_abs_du = k.max_abs_diff(pdu.data(), ddu.data(), n);
    out.max_abs_dv = k.max_abs_diff(pdv.data(), ddv.data(), n);
    return out;
}

void write_residual_csv(std::ostream& os, const ResidualSummary& r) {
    os << "u,v,res_du,res_dv\n";
    for (const auto& x : r.records) {
        os << io::fmt17(x.u) << ',' << io::fmt17(x.v) << ',' << io::fmt17(x.res_du) << ','
           << io::fmt17(x.res_dv) << '\n';
    }
}

CoefficientScores bootstrap_scores(const Dataset& ds, const FeatureSet& features_du,
                                   const FeatureSet& features_dv, int resamples, std::uint64_t seed) {
    if (resamples < 2) throw ConfigError("bootstrap needs at least two resamples");
    const FJetModel base = fit(ds, features_du, features_dv);
    std::vector<double> sum_du(base.coeffs_du.size()), sq_du(base.coeffs_du.size());
    std::vector<double> sum_dv(base.coeffs_dv.size()), sq_dv(base.coeffs_dv.size());
    Rng rng(seed);
    for (int b = 0; b < resamples; ++b) {
        Dataset sample = ds;
        for (auto& rec : sample.records) {
            rec = ds.records[static_cast<std::size_t>(rng.uniform() * static_cast<double>(ds.records.size()))];
        }
        const FJetModel m = fit(sample, features_du, features_dv);
        for (std::size_t j = 0; j < m.coeffs_du.size(); ++j) {
            sum_du[j] += m.coeffs_du[j];
            sq_du[j] += m.coeffs_du[j] * m.coeffs_du[j];
        }
        for (std::size_t j = 0; j < m.coeffs_dv.size(); ++j) {
            sum_dv[j] += m.coeffs_dv[j];
            sq_dv[j] += m.coeffs_dv[j] * m.coeffs_dv[j];
        }
    }
    auto score = [&](const std::vector<double>& coef, const std::vector<double>& s,
                     const std::vector<double>& sq) {
        std::vector<double> out(coef.size());
        const double nb = resamples;
        for (std::size_t j = 0; j < coef.size(); ++j) {
            const double var = std::max(0.0, (sq[j] - s[j] * s[j] / nb) / (nb - 1.0));
            out[j] = var > 0.0 ? std::fabs(coef[j]) / std::sqrt(var) : INFINITY;
        }
        return out;
    };
    return {score(base.coeffs_du, sum_du, sq_du), score(base.coeffs_dv, sum_dv, sq_dv)};
}

// --- model files --------------------------------------------------------------

std::string model_to_string(const FJetModel& m) {
    auto quote = [](const std::string& s) { return nlohmann::json(s).dump(); };
    auto names = [&](const FeatureSet& fs) {
        std::string out = "[";
        for (std::size_t i = 0; i < fs.size(); ++i) out += (i ? ", " : "") + quote(fs[i].to_string());
        return out + "]";
    };
    auto numbers = [](const std::vector<double>& xs) {
        std::string out = "[";
        for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + io::fmt17(xs[i]);
        return out + "]";
    };
    std::ostringstream os;
    os << "{\n";
    os << "  \"version\": 1,\n";
    os << "  \"system\": "
       << (m.system ? serialize::system_to_json(*m.system).dump() : std::string("null")) << ",\n";
    os << "  \"eps\": " << io::fmt17(m.eps) << ",\n";
    os << "  \"sigma\": " << io::fmt17(m.sigma) << ",\n";
    os << "  \"seed\": " << m.seed << ",\n";
    if (!m.refined_from.empty()) os << "  \"refined_from\": " << quote(m.refined_from) << ",\n";
    os << "  \"features_du\": " << names(m.features_du) << ",\n";
    os << "  \"coeffs_du\": " << numbers(m.coeffs_du) << ",\n";
    os << "  \"features_dv\": " << names(m.features_dv) << ",\n";
    os << "  \"coeffs_dv\": " << numbers(m.coeffs_dv) << "\n";
    os << "}\n";
    return os.str();
}

FJetModel model_from_string(const std::string& text) {
    try {
        const auto j = nlohmann::json::parse(text);
        if (j.at("version").get<int>() != 1) throw ConfigError("unsupported model file version");
        FJetModel m;
        if (!j.at("system").is_null()) m.system = serialize::system_from_json(j.at("system"));
        m.eps = j.at("eps").get<double>();
        m.sigma = j.at("sigma").get<double>();
        m.seed = j.at("seed").get<std::uint64_t>();
        m.refined_from = j.value("refined_from", std::string());
        auto features = [&](const char* key) {
            std::vector<FeatureExpr> fs;
            for (const auto& s : j.at(key)) fs.push_back(FeatureExpr::parse(s.get<std::string>()));
            return FeatureSet(std::move(fs));
        };
        m.features_du = features("features_du");
        m.features_dv = features("features_dv");
        m.coeffs_du = j.at("coeffs_du").get<std::vector<double>>();
        m.coeffs_dv = j.at("coeffs_dv").get<std::vector<double>>();
        m.validate();
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed model file: ") + e.what());
    } catch (const NumericError& e) {
        throw ConfigError(std::string("malformed model file: ") + e.what());
    }
}

void save_model(const std::filesystem::path& path, const FJetModel& m) {
    io::write_text(path, model_to_string(m));
}

FJetModel load_model(const std::filesystem::path& path) { return model_from_string(io::read_text(path)); }

}  // namespace fjet
