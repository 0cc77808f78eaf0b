#include <gtest/gtest.h>

#include <cmath>

#include "fjet/error.hpp"
#include "fjet/features.hpp"
#include "support/oracles.hpp"
#include "support/properties.hpp"

using namespace fjet;

namespace {

FeatureExpr F(const char* s) { return FeatureExpr::parse(s); }

UpdateRecord rec(double t, double u, double v, double p = 0.0, double pdot = 0.0) {
    return {t, u, v, p, pdot, 0.0, 0.0};
}

}  // namespace

TEST(FeatureExpr, EvaluateExamples) {
    EXPECT_EQ(evaluate(F("v*cos(u)"), rec(0, 0, 2)), 2.0);
    EXPECT_EQ(evaluate(F("u^3"), rec(0, -2, 0)), -8.0);
    EXPECT_EQ(evaluate(F("u*v^2"), rec(0, 3, -2)), 12.0);
    EXPECT_EQ(evaluate(F("p"), rec(0, 1, 1, 0.28)), 0.28);
    EXPECT_EQ(evaluate(F("1"), rec(0, 5, 5)), 1.0);
    EXPECT_NEAR(evaluate(F("v*sin(u)^2"), rec(0, 0.5, 3)), 3.0 * std::sin(0.5) * std::sin(0.5), 1e-15);
}

TEST(FeatureExpr, ParseAndPrintRoundTrip) {
    for (const char* s : {"u", "v", "u^2*v", "v*cos(u)", "v*sin(u)^2", "sin(u)*cos(u)", "t*p", "pdot",
                          "u^3", "v^3*cos(u)", "1"}) {
        EXPECT_EQ(F(s).to_string(), s);
        EXPECT_EQ(F(F(s).to_string().c_str()), F(s));
    }
    EXPECT_EQ(F("cos(u) * v"), F("v*cos(u)"));
    EXPECT_EQ(F("udot"), F("v"));
    EXPECT_EQ(F("u*u"), F("u^2"));
    EXPECT_THROW(F("w"), ConfigError);
    EXPECT_THROW(F("u^"), ConfigError);
    EXPECT_THROW(F("tan(u)"), ConfigError);
    EXPECT_THROW(F(""), ConfigError);
}

TEST(FeatureExpr, DegreeAndOrder) {
    EXPECT_EQ(F("v^3*cos(u)").degree(), 3);
    EXPECT_EQ(F("v^3*cos(u)").order(), 4);
    EXPECT_EQ(F("sin(u)*cos(u)").degree(), 0);
    EXPECT_TRUE(F("1").is_constant());
}

TEST(Differentiate, Examples) {
    const auto d = differentiate(F("v*sin(u)"), Var::U);
    ASSERT_EQ(d.size(), 1u);
    EXPECT_EQ(d[0].coeff, 1.0);
    EXPECT_EQ(d[0].feature, F("v*cos(u)"));

    const auto c = differentiate(F("cos(u)"), Var::U);
    ASSERT_EQ(c.size(), 1u);
    EXPECT_EQ(c[0].coeff, -1.0);
    EXPECT_EQ(c[0].feature, F("sin(u)"));

    const auto u3 = differentiate(F("u^3*v"), Var::U);
    ASSERT_EQ(u3.size(), 1u);
    EXPECT_EQ(u3[0].coeff, 3.0);
    EXPECT_EQ(u3[0].feature, F("u^2*v"));

    EXPECT_TRUE(differentiate(F("u^2"), Var::V).empty());
    EXPECT_TRUE(differentiate(F("p"), Var::T).empty());
    EXPECT_EQ(differentiate(F("t^2"), Var::T)[0].feature, F("t"));
}

TEST(Differentiate, AgreesWithFiniteDifferences) {
    const auto r = fjet::testing::check_feature_derivatives(123, 300);
    EXPECT_TRUE(r.pass) << r.detail;
}

TEST(EliminateCosSquared, Rewrites) {
    const auto lc = eliminate_cos_squared(F("v*cos(u)^2"));
    const UpdateRecord x = rec(0, 0.7, 1.3);
    EXPECT_NEAR(fjet::testing::evaluate(lc, x), evaluate(F("v*cos(u)^2"), x), 1e-15);
    for (const auto& t : lc) EXPECT_LE(t.feature.power(Atom::CosU), 1);
}

TEST(FeatureSet, ParseDuplicatesAndIndex) {
    const auto fs = FeatureSet::parse("u,v,u^3,p");
    EXPECT_EQ(fs.size(), 4u);
    EXPECT_EQ(fs.index_of(F("u^3")), 2);
    EXPECT_EQ(fs.index_of(F("v^3")), -1);
    EXPECT_EQ(fs.to_string(), "u,v,u^3,p");
    EXPECT_THROW(FeatureSet::parse("u,v,u"), ConfigError);
    FeatureSet g;
    EXPECT_TRUE(g.add(F("v")));
    EXPECT_FALSE(g.add(F("v")));
}

TEST(Superset, OscillatorLinearBase) {
    const auto base = FeatureSet::parse("u,v");
    EXPECT_EQ(superset(base, 1, 1), base);
    // Products of the linear generators never leave degree 1 closure at max_degree 1.
    EXPECT_EQ(superset(base, 4, 1), base);
}

TEST(Superset, PendulumContainsRk4Set) {
    const auto r = fjet::testing::check_superset_nesting();
    EXPECT_TRUE(r.pass) << r.detail;
    const auto s = superset(FeatureSet::parse("v,sin(u)"), 4, 3);
    for (const auto& f : s) {
        EXPECT_LE(f.degree(), 3);
        EXPECT_LE(f.power(Atom::CosU), 1);
        EXPECT_FALSE(f.is_constant());
    }
    EXPECT_EQ(s[0], F("v"));
    EXPECT_EQ(s[1], F("sin(u)"));
}

TEST(Superset, RespectsFeatureCap) {
    SupersetOptions opt;
    opt.max_features = 3;
    EXPECT_THROW(superset(FeatureSet::parse("v,sin(u)"), 4, 3, opt), ConfigError);
}

TEST(Columns, MatchPerFeatureEvaluation) {
    std::vector<UpdateRecord> rs;
    for (int i = 0; i < 13; ++i) rs.push_back(rec(0.1 * i, 0.3 * i - 1.0, 1.0 - 0.2 * i, 0.5, -0.1 * i));
    const std::vector<FeatureExpr> fs = {F("u"), F("v*cos(u)"), F("u^2*v"), F("pdot"), F("v*sin(u)^2")};
    const auto cols = evaluate_columns(fs, rs);
    for (std::size_t j = 0; j < fs.size(); ++j) {
        EXPECT_EQ(cols[j], evaluate_column(fs[j], rs));
        for (std::size_t i = 0; i < rs.size(); ++i) EXPECT_EQ(cols[j][i], evaluate(fs[j], rs[i]));
    }
}

TEST(DedupeCollinear, Cases) {
    const auto r = fjet::testing::check_trig_collinearity_drop();
    EXPECT_TRUE(r.pass) << r.detail;

    const auto ho = harmonic_oscillator(1.0, 0.0);
    const auto ds = sample_dataset(ho, default_domains(ho), 100, 0.1, 0.0, 1);
    const std::vector<FeatureExpr> indep = {F("u"), F("v"), F("u^2")};
    EXPECT_TRUE(dedupe_collinear(indep, ds).dropped.empty());
    // sin² + cos² = 1: the constant comes last and is the one dropped.
    const std::vector<FeatureExpr> dup = {F("u"), F("sin(u)^2"), F("cos(u)^2"), F("1")};
    const auto split = dedupe_collinear(dup, ds);
    EXPECT_EQ(split.kept.size(), 3u);
    ASSERT_EQ(split.dropped.size(), 1u);
    EXPECT_EQ(split.dropped[0], F("1"));
}
