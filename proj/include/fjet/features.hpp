#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fjet/datagen.hpp"

namespace fjet {

/// Factors a feature may contain. The enumerator order is the canonical
/// factor order used in printing.
enum class Atom : std::uint8_t { U, V, T, P, Pdot, SinU, CosU };
inline constexpr std::size_t kAtomCount = 7;

/// Variables a feature can be differentiated with respect to. p and ṗ are
/// independent atoms: ∂/∂t touches only an explicit t factor.
enum class Var : std::uint8_t { U, V, T, P, Pdot };

/// A product of atoms raised to non-negative integer powers. The exponent
/// vector is the canonical form, so equality is structural.
///
/// Printed as factors joined by '*', e.g. `v*cos(u)`, `u^2*v`, `v*sin(u)^2`;
/// the empty product prints as `1`.
class FeatureExpr {
public:
    FeatureExpr() = default;

    static FeatureExpr atom(Atom a, int power = 1);
    /// Inverse of to_string(). Also accepts `udot` for v and whitespace.
    static FeatureExpr parse(std::string_view text);

    int power(Atom a) const { return powers_[static_cast<std::size_t>(a)]; }
    bool uses(Atom a) const { return power(a) > 0; }
    bool is_constant() const;
    /// Total power of the polynomial atoms (u, v, t, p, ṗ); trig factors count 0.
    int degree() const;
    /// Total number of factors including trig ones.
    int order() const;

    FeatureExpr operator*(const FeatureExpr& other) const;
    std::string to_string() const;

    auto operator<=>(const FeatureExpr&) const = default;

private:
    std::array<int, kAtomCount> powers_{};
};

struct Term {
    double coeff;
    FeatureExpr feature;
};

/// Sum of terms with like features merged and zero coefficients dropped.
using LinearCombination = std::vector<Term>;

LinearCombination normalize(LinearCombination terms);

double evaluate(const FeatureExpr& f, const UpdateRecord& rec);
LinearCombination differentiate(const FeatureExpr& f, Var var);
/// Rewrites cos²u as 1 − sin²u until every cos power is at most 1.
LinearCombination eliminate_cos_squared(const FeatureExpr& f);

/// Ordered, duplicate-free feature list; positions are coefficient indices.
class FeatureSet {
public:
    FeatureSet() = default;
    /// Throws ConfigError on duplicates.
    explicit FeatureSet(std::vector<FeatureExpr> features);

    /// Comma-separated canonical strings, e.g. "u,v,u^3,p".
    static FeatureSet parse(std::string_view text);

    /// Appends unless already present; returns whether it was appended.
    bool add(const FeatureExpr& f);
    bool contains(const FeatureExpr& f) const;
    std::ptrdiff_t index_of(const FeatureExpr& f) const;

    std::size_t size() const { return features_.size(); }
    bool empty() const { return features_.empty(); }
    const FeatureExpr& operator[](std::size_t i) const { return features_[i]; }
    auto begin() const { return features_.begin(); }
    auto end() const { return features_.end(); }
    const std::vector<FeatureExpr>& items() const { return features_; }

    std::vector<std::string> names() const;
    std::string to_string() const;

    friend bool operator==(const FeatureSet&, const FeatureSet&) = default;

private:
    std::vector<FeatureExpr> features_;
};

/// True if every feature of `a` is in `b`.
bool is_subset(const FeatureSet& a, const FeatureSet& b);

struct SupersetOptions {
    /// Rewrite cos² factors before collecting terms.
    bool eliminate_cos_squared = true;
    std::size_t max_features = 512;
};

/// Terms of Σ_{k=1}^{max_n} (F + ∂F + ∂∂F)^k for base set F, keeping
/// non-constant canonical products with degree() ≤ max_degree. The base comes
/// first (where it survives the degree cut), then new features ordered by
/// factor count and name.
FeatureSet superset(const FeatureSet& base, int max_n, int max_degree,
                    const SupersetOptions& options = {});

/// One column of the design matrix: f evaluated at every record.
std::vector<double> evaluate_column(const FeatureExpr& f, std::span<const UpdateRecord> records);
/// All columns for `fs`, sharing the atom evaluations.
std::vector<std::vector<double>> evaluate_columns(std::span<const FeatureExpr> fs,
                                                  std::span<const UpdateRecord> records);

struct CollinearSplit {
    FeatureSet kept;
    std::vector<FeatureExpr> dropped;
};

/// Greedy pass in list order: a candidate is dropped when the part of its
/// column orthogonal to the kept columns has norm below tol times its own norm
/// (or the column is identically zero).
CollinearSplit dedupe_collinear(std::span<const FeatureExpr> candidates, const Dataset& ds,
                                double tol = 1e-8);

}  // namespace fjet
