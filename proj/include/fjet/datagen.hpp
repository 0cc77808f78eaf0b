#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "fjet/integrate.hpp"
#include "fjet/rng.hpp"
#include "fjet/systems.hpp"

namespace fjet {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Rectangular sampling box over (t, u, u̇).
struct Domains {
    Interval t;
    Interval u;
    Interval v;
    friend bool operator==(const Domains&, const Domains&) = default;
};

/// HO: u, u̇ ∈ (−2, 2), t ∈ (0, 2T) with T = 2π/ω0. Pendulum: u, u̇ ∈ (−π, π).
/// Duffing: u, u̇ ∈ (−3, 3), t ∈ (0, 4π/Ω).
Domains default_domains(const SystemSpec& spec);

/// One training sample: start point in jet space and the observed update.
/// p and pdot are zero for autonomous systems.
struct UpdateRecord {
    double t = 0.0;
    double u = 0.0;
    double v = 0.0;
    double p = 0.0;
    double pdot = 0.0;
    double du = 0.0;
    double dv = 0.0;
    friend bool operator==(const UpdateRecord&, const UpdateRecord&) = default;
};

enum class NoiseMode {
    /// Fresh draws at the start and at the end point (default).
    IndependentEndpoints,
    /// One draw per coordinate shared by both endpoints; leaves du, dv unchanged.
    SharedDraw,
};

struct SampleOptions {
    double eps_base = kDefaultEpsBase;
    NoiseMode noise_mode = NoiseMode::IndependentEndpoints;
};

struct Dataset {
    std::vector<UpdateRecord> records;
    double eps = 0.0;
    double sigma = 0.0;
    std::uint64_t seed = 0;
    SystemSpec system;
    Domains domains;
    double eps_base = kDefaultEpsBase;
    NoiseMode noise_mode = NoiseMode::IndependentEndpoints;
};

/// Perturbs both endpoints of `rec` with N(0, (σε)²) measurement noise and
/// recomputes du, dv from the perturbed endpoints. sigma == 0 returns `rec`.
UpdateRecord apply_noise(const UpdateRecord& rec, double sigma, double eps, Rng& rng,
                         NoiseMode mode = NoiseMode::IndependentEndpoints);

/// Draws n start points uniformly from `domains`, propagates each by eps with
/// fine RK4 sub-steps, and records the updates. Record i uses the substreams
/// (seed, 2i) for sampling and (seed, 2i+1) for noise, so the output depends
/// only on the arguments, not on thread count or kernel variant.
Dataset sample_dataset(const SystemSpec& spec, const Domains& domains, std::size_t n, double eps,
                       double sigma, std::uint64_t seed, const SampleOptions& options = {});

/// `t,u,v,p,pdot,du,dv` with 17 significant digits.
void write_dataset_csv(std::ostream& os, const Dataset& ds);
/// Writes <path> and the metadata sidecar <path>.meta.json.
void save_dataset(const std::filesystem::path& path, const Dataset& ds);
Dataset load_dataset(const std::filesystem::path& path);

std::filesystem::path dataset_meta_path(const std::filesystem::path& csv_path);

}  // namespace fjet
