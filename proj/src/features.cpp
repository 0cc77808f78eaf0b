#include "fjet/features.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "fjet/error.hpp"
#include "fjet/io.hpp"
#include "fjet/kernels.hpp"

namespace fjet {
namespace {

constexpr std::array<std::string_view, kAtomCount> kAtomNames{"u", "v", "t", "p", "pdot",
                                                               "sin(u)", "cos(u)"};

std::size_t idx(Atom a) { return static_cast<std::size_t>(a); }

double atom_value(Atom a, const UpdateRecord& r) {
    switch (a) {
        case Atom::U: return r.u;
        case Atom::V: return r.v;
        case Atom::T: return r.t;
        case Atom::P: return r.p;
        case Atom::Pdot: return r.pdot;
        case Atom::SinU: return std::sin(r.u);
        case Atom::CosU: return std::cos(r.u);
    }
    return 0.0;
}

Atom atom_for(Var var) {
    switch (var) {
        case Var::U: return Atom::U;
        case Var::V: return Atom::V;
        case Var::T: return Atom::T;
        case Var::P: return Atom::P;
        case Var::Pdot: return Atom::Pdot;
    }
    return Atom::U;
}

}  // namespace

FeatureExpr FeatureExpr::atom(Atom a, int power) {
    if (power < 0) throw ConfigError("feature powers must be non-negative");
    FeatureExpr f;
    f.powers_[idx(a)] = power;
    return f;
}

bool FeatureExpr::is_constant() const {
    return std::all_of(powers_.begin(), powers_.end(), [](int p) { return p == 0; });
}

int FeatureExpr::degree() const {
    return power(Atom::U) + power(Atom::V) + power(Atom::T) + power(Atom::P) + power(Atom::Pdot);
}

int FeatureExpr::order() const {
    int n = 0;
    for (int p : powers_) n += p;
    return n;
}

FeatureExpr FeatureExpr::operator*(const FeatureExpr& other) const {
    FeatureExpr out;
    for (std::size_t i = 0; i < kAtomCount; ++i) out.powers_[i] = powers_[i] + other.powers_[i];
    return out;
}

std::string FeatureExpr::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < kAtomCount; ++i) {
        if (powers_[i] == 0) continue;
        if (!out.empty()) out += '*';
        out += kAtomNames[i];
        if (powers_[i] > 1) out += '^' + std::to_string(powers_[i]);
    }
    return out.empty() ? "1" : out;
}

FeatureExpr FeatureExpr::parse(std::string_view text) {
    std::string compact;
    for (char ch : text) {
        if (ch != ' ' && ch != '\t') compact.push_back(ch);
    }
    if (compact.empty()) throw ConfigError("empty feature string");
    if (compact == "1") return FeatureExpr{};
    FeatureExpr f;
    for (const auto& factor : io::split(compact, '*')) {
        std::string name = factor;
        int power = 1;
        if (const auto caret = factor.find('^'); caret != std::string::npos) {
            name = factor.substr(0, caret);
            const std::string exp = factor.substr(caret + 1);
            if (exp.empty() || !std::all_of(exp.begin(), exp.end(), ::isdigit)) {
                throw ConfigError("bad exponent in feature '" + std::string(text) + "'");
            }
            power = std::stoi(exp);
        }
        if (name == "udot") name = "v";
        const auto it = std::find(kAtomNames.begin(), kAtomNames.end(), name);
        if (it == kAtomNames.end()) {
            throw ConfigError("unknown factor '" + name + "' in feature '" + std::string(text) + "'");
        }
        f.powers_[static_cast<std::size_t>(it - kAtomNames.begin())] += power;
    }
    return f;
}

LinearCombination normalize(LinearCombination terms) {
    std::map<FeatureExpr, double> merged;
    for (const auto& t : terms) merged[t.feature] += t.coeff;
    LinearCombination out;
    for (const auto& [f, c] : merged) {
        if (c != 0.0) out.push_back({c, f});
    }
    return out;
}

double evaluate(const FeatureExpr& f, const UpdateRecord& rec) {
    double r = 1.0;
    for (std::size_t i = 0; i < kAtomCount; ++i) {
        const int p = f.power(static_cast<Atom>(i));
        if (p == 0) continue;
        const double x = atom_value(static_cast<Atom>(i), rec);
        for (int k = 0; k < p; ++k) r *= x;
    }
    return r;
}

LinearCombination differentiate(const FeatureExpr& f, Var var) {
    LinearCombination out;
    const Atom a = atom_for(var);
    if (const int p = f.power(a); p > 0) {
        FeatureExpr lowered;
        for (std::size_t i = 0; i < kAtomCount; ++i) {
            const Atom ai = static_cast<Atom>(i);
            lowered = lowered * FeatureExpr::atom(ai, f.power(ai) - (ai == a ? 1 : 0));
        }
        out.push_back({static_cast<double>(p), lowered});
    }
    if (var == Var::U) {
        auto rebuild = [&](int dsin, int dcos) {
            FeatureExpr g;
            for (std::size_t i = 0; i < kAtomCount; ++i) {
                const Atom ai = static_cast<Atom>(i);
                int pi = f.power(ai);
                if (ai == Atom::SinU) pi += dsin;
                if (ai == Atom::CosU) pi += dcos;
                g = g * FeatureExpr::atom(ai, pi);
            }
            return g;
        };
        // d(sin^k)/du = k sin^{k-1} cos
        if (const int k = f.power(Atom::SinU); k > 0) out.push_back({double(k), rebuild(-1, +1)});
        // d(cos^k)/du = -k cos^{k-1} sin
        if (const int k = f.power(Atom::CosU); k > 0) out.push_back({-double(k), rebuild(+1, -1)});
    }
    return normalize(std::move(out));
}

LinearCombination eliminate_cos_squared(const FeatureExpr& f) {
    const int k = f.power(Atom::CosU);
    if (k < 2) return {{1.0, f}};
    FeatureExpr reduced;
    for (std::size_t i = 0; i < kAtomCount; ++i) {
        const Atom ai = static_cast<Atom>(i);
        reduced = reduced * FeatureExpr::atom(ai, f.power(ai) - (ai == Atom::CosU ? 2 : 0));
    }
    LinearCombination out;
    for (const auto& t : eliminate_cos_squared(reduced)) out.push_back(t);
    for (const auto& t : eliminate_cos_squared(reduced * FeatureExpr::atom(Atom::SinU, 2))) {
        out.push_back({-t.coeff, t.feature});
    }
    return normalize(std::move(out));
}

// --- FeatureSet -----------------------------------------------------------

FeatureSet::FeatureSet(std::vector<FeatureExpr> features) {
    for (const auto& f : features) {
        if (!add(f)) throw ConfigError("duplicate feature '" + f.to_string() + "'");
    }
}

FeatureSet FeatureSet::parse(std::string_view text) {
    std::vector<FeatureExpr> fs;
    for (const auto& piece : io::split(std::string(text), ',')) {
        fs.push_back(FeatureExpr::parse(io::trim(piece)));
    }
    return FeatureSet(std::move(fs));
}

bool FeatureSet::add(const FeatureExpr& f) {
    if (contains(f)) return false;
    features_.push_back(f);
    return true;
}

bool FeatureSet::contains(const FeatureExpr& f) const { return index_of(f) >= 0; }

std::ptrdiff_t FeatureSet::index_of(const FeatureExpr& f) const {
    const auto it = std::find(features_.begin(), features_.end(), f);
    return it == features_.end() ? -1 : it - features_.begin();
}

std::vector<std::string> FeatureSet::names() const {
    std::vector<std::string> out;
    for (const auto& f : features_) out.push_back(f.to_string());
    return out;
}

std::string FeatureSet::to_string() const {
    std::string out;
    for (const auto& f : features_) {
        if (!out.empty()) out += ',';
        out += f.to_string();
    }
    return out;
}

bool is_subset(const FeatureSet& a, const FeatureSet& b) {
    return std::all_of(a.begin(), a.end(), [&](const FeatureExpr& f) { return b.contains(f); });
}

// --- superset ---------------------------------------------------------------

FeatureSet superset(const FeatureSet& base, int max_n, int max_degree,
                    const SupersetOptions& options) {
    if (base.empty()) throw ConfigError("superset needs a non-empty base");
    if (max_n < 1 || max_degree < 1) throw ConfigError("max_n and max_degree must be positive");

    auto collect = [&](const LinearCombination& lc, std::set<FeatureExpr>& into) {
        for (const auto& t : lc) {
            if (options.eliminate_cos_squared) {
                for (const auto& r : eliminate_cos_squared(t.feature)) into.insert(r.feature);
            } else {
                into.insert(t.feature);
            }
        }
    };

    // F + ∂F + ∂∂F
    std::set<FeatureExpr> closure;
    std::set<FeatureExpr> first;
    for (const auto& f : base) collect({{1.0, f}}, closure);
    constexpr std::array<Var, 5> vars{Var::U, Var::V, Var::T, Var::P, Var::Pdot};
    for (const auto& f : base) {
        for (Var x : vars) collect(differentiate(f, x), first);
    }
    std::set<FeatureExpr> second;
    for (const auto& g : first) {
        for (Var x : vars) collect(differentiate(g, x), second);
    }
    closure.insert(first.begin(), first.end());
    closure.insert(second.begin(), second.end());
    std::vector<FeatureExpr> generators;
    for (const auto& f : closure) {
        if (!f.is_constant()) generators.push_back(f);
    }

    // Products of up to max_n generators (multisets), pruned on degree.
    std::set<FeatureExpr> products;
    auto add_product = [&](const FeatureExpr& f) {
        collect({{1.0, f}}, products);
        if (products.size() > options.max_features * 4) {
            throw ConfigError("feature superset exceeds " + std::to_string(options.max_features) +
                              " features; lower max_n or max_degree");
        }
    };
    auto expand = [&](auto&& self, std::size_t start, int depth, const FeatureExpr& acc) -> void {
        for (std::size_t i = start; i < generators.size(); ++i) {
            const FeatureExpr next = acc * generators[i];
            if (next.degree() > max_degree) continue;
            add_product(next);
            if (depth + 1 < max_n) self(self, i, depth + 1, next);
        }
    };
    expand(expand, 0, 0, FeatureExpr{});

    std::vector<FeatureExpr> extra;
    for (const auto& f : products) {
        if (f.is_constant() || f.degree() > max_degree) continue;
        extra.push_back(f);
    }
    std::sort(extra.begin(), extra.end(), [](const FeatureExpr& a, const FeatureExpr& b) {
        if (a.order() != b.order()) return a.order() < b.order();
        return a.to_string() < b.to_string();
    });

    FeatureSet out;
    for (const auto& f : base) {
        if (f.degree() <= max_degree && products.contains(f)) out.add(f);
    }
    for (const auto& f : extra) out.add(f);
    if (out.size() > options.max_features) {
        throw ConfigError("feature superset has " + std::to_string(out.size()) +
                          " features, above the limit of " +
                          std::to_string(options.max_features));
    }
    return out;
}

// --- evaluation over datasets ----------------------------------------------

namespace {

struct AtomColumns {
    std::array<std::vector<double>, kAtomCount> cols;
    std::array<bool, kAtomCount> ready{};
    std::span<const UpdateRecord> records;

    const std::vector<double>& get(Atom a) {
        const std::size_t i = idx(a);
        if (!ready[i]) {
            cols[i].resize(records.size());
            for (std::size_t r = 0; r < records.size(); ++r) cols[i][r] = atom_value(a, records[r]);
            ready[i] = true;
        }
        return cols[i];
    }
};

std::vector<double> column_from_atoms(const FeatureExpr& f, AtomColumns& atoms) {
    const auto& k = kernels::active();
    std::vector<double> col(atoms.records.size(), 1.0);
    for (std::size_t i = 0; i < kAtomCount; ++i) {
        const Atom a = static_cast<Atom>(i);
        const int p = f.power(a);
        if (p == 0) continue;
        const auto& x = atoms.get(a);
        for (int rep = 0; rep < p; ++rep) k.multiply(col.data(), x.data(), col.size());
    }
    return col;
}

}  // namespace

std::vector<double> evaluate_column(const FeatureExpr& f, std::span<const UpdateRecord> records) {
    AtomColumns atoms{{}, {}, records};
    return column_from_atoms(f, atoms);
}

std::vector<std::vector<double>> evaluate_columns(std::span<const FeatureExpr> fs,
                                                  std::span<const UpdateRecord> records) {
    AtomColumns atoms{{}, {}, records};
    std::vector<std::vector<double>> out;
    out.reserve(fs.size());
    for (const auto& f : fs) out.push_back(column_from_atoms(f, atoms));
    return out;
}

CollinearSplit dedupe_collinear(std::span<const FeatureExpr> candidates, const Dataset& ds,
                                double tol) {
    CollinearSplit out;
    std::vector<std::vector<double>> basis;  // orthonormal columns of kept features
    const auto columns = evaluate_columns(candidates, ds.records);
    auto dot = [](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
        return s;
    };
    for (std::size_t j = 0; j < candidates.size(); ++j) {
        const auto& f = candidates[j];
        if (out.kept.contains(f)) {
            out.dropped.push_back(f);
            continue;
        }
        std::vector<double> r = columns[j];
        const double norm0 = std::sqrt(dot(r, r));
        // Two Gram-Schmidt passes keep the residual orthogonal to working precision.
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& q : basis) {
                const double c = dot(q, r);
                for (std::size_t i = 0; i < r.size(); ++i) r[i] -= c * q[i];
            }
        }
        const double norm = std::sqrt(dot(r, r));
        if (norm0 == 0.0 || !(norm >= tol * norm0)) {
            out.dropped.push_back(f);
            continue;
        }
        for (double& x : r) x /= norm;
        basis.push_back(std::move(r));
        out.kept.add(f);
    }
    return out;
}

}  // namespace fjet
