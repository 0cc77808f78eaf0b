#include "fjet/datagen.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "fjet/error.hpp"
#include "fjet/io.hpp"
#include "fjet/kernels.hpp"
#include "fjet/parallel.hpp"
#include "serialize.hpp"

namespace fjet {

Domains default_domains(const SystemSpec& spec) {
    constexpr double pi = std::numbers::pi;
    switch (spec.kind()) {
        case SystemKind::HarmonicOscillator: {
            const double period = 2.0 * pi / spec.param("omega0");
            return {{0.0, 2.0 * period}, {-2.0, 2.0}, {-2.0, 2.0}};
        }
        case SystemKind::Pendulum: {
            const double period = 2.0 * pi / spec.param("omega0");
            return {{0.0, 2.0 * period}, {-pi, pi}, {-pi, pi}};
        }
        case SystemKind::Duffing:
            return {{0.0, 4.0 * pi / spec.param("Omega")}, {-3.0, 3.0}, {-3.0, 3.0}};
    }
    throw ConfigError("unknown system kind");
}

UpdateRecord apply_noise(const UpdateRecord& rec, double sigma, double eps, Rng& rng,
                         NoiseMode mode) {
    if (!(sigma >= 0.0)) throw ConfigError("sigma must be non-negative");
    if (sigma == 0.0) return rec;
    const double scale = sigma * eps;
    const double u_end = rec.u + rec.du;
    const double v_end = rec.v + rec.dv;
    const double nu_u = rng.normal();
    const double nu_v = rng.normal();
    UpdateRecord out = rec;
    out.u = rec.u + scale * nu_u;
    out.v = rec.v + scale * nu_v;
    double u_end_noisy;
    double v_end_noisy;
    if (mode == NoiseMode::SharedDraw) {
        u_end_noisy = u_end + scale * nu_u;
        v_end_noisy = v_end + scale * nu_v;
    } else {
        u_end_noisy = u_end + scale * rng.normal();
        v_end_noisy = v_end + scale * rng.normal();
    }
    out.du = u_end_noisy - out.u;
    out.dv = v_end_noisy - out.v;
    return out;
}

namespace {

void check_interval(const Interval& iv, const char* name) {
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || !(iv.hi > iv.lo)) {
        throw ConfigError(std::string("sampling interval for ") + name + " must satisfy lo < hi");
    }
}

}  // namespace

Dataset sample_dataset(const SystemSpec& spec, const Domains& domains, std::size_t n, double eps,
                       double sigma, std::uint64_t seed, const SampleOptions& options) {
    check_interval(domains.t, "t");
    check_interval(domains.u, "u");
    check_interval(domains.v, "v");
    if (n == 0) throw ConfigError("sample count must be positive");
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ConfigError("sigma must be >= 0");
    const long steps = substep_count(eps, options.eps_base);

    std::vector<double> t(n);
    std::vector<double> u0(n);
    std::vector<double> v0(n);
    for (std::size_t i = 0; i < n; ++i) {
        Rng rng = Rng::substream(seed, 2 * i);
        t[i] = rng.uniform(domains.t.lo, domains.t.hi);
        u0[i] = rng.uniform(domains.u.lo, domains.u.hi);
        v0[i] = rng.uniform(domains.v.lo, domains.v.hi);
    }

    std::vector<double> u1 = u0;
    std::vector<double> v1 = v0;
    const auto coeffs = detail::rhs_coeffs(spec);
    const auto& kernels = kernels::active();
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
        kernels.rk4_propagate(coeffs, t.data() + begin, u1.data() + begin, v1.data() + begin,
                              end - begin, options.eps_base, steps);
    });

    const auto forcing = spec.forcing();
    Dataset ds{{}, eps, sigma, seed, spec, domains, options.eps_base, options.noise_mode};
    ds.records.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(u1[i]) || !std::isfinite(v1[i])) {
            throw NumericError("fine propagation diverged for record " + std::to_string(i));
        }
        UpdateRecord rec;
        rec.t = t[i];
        rec.u = u0[i];
        rec.v = v0[i];
        rec.du = u1[i] - u0[i];
        rec.dv = v1[i] - v0[i];
        if (forcing) {
            rec.p = forcing->p(t[i]);
            rec.pdot = forcing->pdot(t[i]);
        }
        if (sigma > 0.0) {
            Rng noise = Rng::substream(seed, 2 * i + 1);
            rec = apply_noise(rec, sigma, eps, noise, options.noise_mode);
        }
        ds.records[i] = rec;
    }
    return ds;
}

void write_dataset_csv(std::ostream& os, const Dataset& ds) {
    os << "t,u,v,p,pdot,du,dv\n";
    for (const auto& r : ds.records) {
        os << io::fmt17(r.t) << ',' << io::fmt17(r.u) << ',' << io::fmt17(r.v) << ','
           << io::fmt17(r.p) << ',' << io::fmt17(r.pdot) << ',' << io::fmt17(r.du) << ','
           << io::fmt17(r.dv) << '\n';
    }
}

std::filesystem::path dataset_meta_path(const std::filesystem::path& csv_path) {
    return std::filesystem::path(csv_path.string() + ".meta.json");
}

void save_dataset(const std::filesystem::path& path, const Dataset& ds) {
    std::ostringstream csv;
    write_dataset_csv(csv, ds);
    io::write_text(path, csv.str());

    nlohmann::json meta{
        {"eps", ds.eps},
        {"sigma", ds.sigma},
        {"seed", ds.seed},
        {"n", ds.records.size()},
        {"eps_base", ds.eps_base},
        {"noise_mode", ds.noise_mode == NoiseMode::SharedDraw ? "shared" : "independent"},
        {"system", serialize::system_to_json(ds.system)},
        {"domains", serialize::domains_to_json(ds.domains)},
    };
    io::write_text(dataset_meta_path(path), meta.dump(2) + "\n");
}

Dataset load_dataset(const std::filesystem::path& path) {
    nlohmann::json meta;
    try {
        meta = nlohmann::json::parse(io::read_text(dataset_meta_path(path)));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("malformed dataset metadata: " + std::string(e.what()));
    }
    const auto table = io::read_csv(path);
    const std::size_t ct = table.column("t"), cu = table.column("u"), cv = table.column("v"),
                      cp = table.column("p"), cpd = table.column("pdot"), cdu = table.column("du"),
                      cdv = table.column("dv");
    try {
        Dataset ds{{},
                   meta.at("eps").get<double>(),
                   meta.at("sigma").get<double>(),
                   meta.at("seed").get<std::uint64_t>(),
                   serialize::system_from_json(meta.at("system")),
                   serialize::domains_from_json(meta.at("domains")),
                   meta.value("eps_base", kDefaultEpsBase),
                   meta.value("noise_mode", std::string("independent")) == "shared"
                       ? NoiseMode::SharedDraw
                       : NoiseMode::IndependentEndpoints};
        ds.records.reserve(table.rows.size());
        for (const auto& row : table.rows) {
            ds.records.push_back({row[ct], row[cu], row[cv], row[cp], row[cpd], row[cdu], row[cdv]});
        }
        return ds;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("malformed dataset metadata: " + std::string(e.what()));
    }
}

}  // namespace fjet
