#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <thread>

#include "qtop/kaul.hpp"
#include "qtop/oracle.hpp"
#include "qtop/verify.hpp"

using namespace qtop;

namespace {

PlatBraid half_plat(const std::string& word, int strands) {
    return PlatBraid{parse_braid(word, strands), std::vector<Spin>(strands, Spin(1)), {}};
}

cplx normalized(const std::string& word, int strands, const RepContext& rep) {
    const PlatBraid p = half_plat(word, strands);
    return ambient_normalize(colored_polynomial(p, rep), writhe(p), rep.ctx());
}

StateVector random_state(std::mt19937_64& rng, const std::vector<Spin>& colors, const QContext& ctx) {
    StateVector st = basis_state(colors, 0, ctx);
    std::normal_distribution<double> g;
    double n = 0;
    for (auto& a : st.amps) {
        a = {g(rng), g(rng)};
        n += std::norm(a);
    }
    for (auto& a : st.amps) a /= std::sqrt(n);
    return st;
}

}  // namespace

TEST(Eigenvalue, Examples) {
    const QContext ctx(3);
    const cplx q34 = q_power(Rational(3, 4), ctx);
    EXPECT_NEAR(std::abs(braiding_eigenvalue(Spin(1), Spin(1), Spin(0), 1, ctx) + q34), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(braiding_eigenvalue(Spin(1), Spin(1), Spin(0), 1, ctx, EigenvalueSign::AbsDifference) - q34), 0.0, 1e-14);
    EXPECT_THROW(braiding_eigenvalue(Spin(1), Spin(1), Spin(1), 1, ctx), DomainError);
}

TEST(Eigenvalue, UnimodularAndHandsCancel) {
    for (int k = 1; k <= 8; ++k) {
        const QContext ctx(k);
        for (int a = 0; a <= k; ++a)
            for (int b = 0; b <= k; ++b)
                for (Spin c : fusion_channels(Spin(a), Spin(b), ctx))
                    for (auto rule : {EigenvalueSign::Sum, EigenvalueSign::AbsDifference}) {
                        const cplx up = braiding_eigenvalue(Spin(a), Spin(b), c, 1, ctx, rule);
                        const cplx down = braiding_eigenvalue(Spin(a), Spin(b), c, -1, ctx, rule);
                        EXPECT_NEAR(std::abs(up), 1.0, 1e-14);
                        EXPECT_NEAR(std::abs(up * down - 1.0), 0.0, 1e-13);
                    }
    }
}

TEST(Eigenvalue, ChannelRatioIsConventionFree) {
    // lambda_1 / lambda_0 = -q for spin 1/2 on a positive letter, under either sign rule
    for (int k = 2; k <= 8; ++k) {
        const QContext ctx(k);
        for (auto rule : {EigenvalueSign::Sum, EigenvalueSign::AbsDifference}) {
            const RepContext rep(ctx, Convention{rule, -1});
            const cplx r = rep.eigenvalue(Spin(1), Spin(1), Spin(2), 1) / rep.eigenvalue(Spin(1), Spin(1), Spin(0), 1);
            EXPECT_NEAR(std::abs(r + ctx.q()), 0.0, 1e-13);
        }
    }
}

TEST(RepContext, Validation) {
    EXPECT_THROW(RepContext(QContext(65)), DomainError);
    EXPECT_THROW(RepContext(QContext(3), Convention{EigenvalueSign::Sum, 0}), DomainError);
    const RepContext rep(QContext(3));
    EXPECT_EQ(rep.convention().sign, EigenvalueSign::Sum);
    EXPECT_EQ(rep.convention().positive_hand, -1);
    EXPECT_FALSE(describe(rep.convention()).empty());
}

TEST(Evolution, IdentityAndInverse) {
    std::mt19937_64 rng(1);
    const QContext ctx(4);
    const RepContext rep(ctx);
    const std::vector<Spin> c{Spin(1), Spin(2), Spin(2), Spin(1), Spin(3), Spin(3)};
    const StateVector st = random_state(rng, c, ctx);
    const StateVector same = evolve(st, BraidWord{6, {}}, rep);
    for (std::size_t i = 0; i < st.amps.size(); ++i) EXPECT_EQ(same.amps[i], st.amps[i]);
    for (int i = 1; i < 6; ++i) {
        const StateVector back = evolve(st, BraidWord{6, {{i, 1}, {i, -1}}}, rep);
        EXPECT_EQ(back.colors, st.colors);
        for (std::size_t j = 0; j < st.amps.size(); ++j) EXPECT_NEAR(std::abs(back.amps[j] - st.amps[j]), 0.0, 1e-12);
    }
}

TEST(Evolution, BraidRelationOnRandomStates) {
    std::mt19937_64 rng(2);
    for (int k = 1; k <= 6; ++k) {
        const QContext ctx(k);
        const RepContext rep(ctx);
        const std::vector<Spin> c(6, Spin(1));
        const StateVector st = random_state(rng, c, ctx);
        for (int i = 1; i + 1 < 6; ++i) {
            const auto a = evolve(st, BraidWord{6, {{i, 1}, {i + 1, 1}, {i, 1}}}, rep);
            const auto b = evolve(st, BraidWord{6, {{i + 1, 1}, {i, 1}, {i + 1, 1}}}, rep);
            for (std::size_t j = 0; j < a.amps.size(); ++j) EXPECT_NEAR(std::abs(a.amps[j] - b.amps[j]), 0.0, 1e-9);
        }
    }
}

TEST(Evolution, NormPreserved) {
    std::mt19937_64 rng(3);
    const QContext ctx(5);
    const RepContext rep(ctx);
    const std::vector<Spin> c{Spin(2), Spin(2), Spin(1), Spin(1), Spin(3), Spin(3), Spin(1), Spin(1)};
    StateVector st = random_state(rng, c, ctx);
    for (int t = 0; t < 30; ++t) st = apply_generator(st, {1 + static_cast<int>(rng() % 7), (rng() & 1) ? 1 : -1}, rep);
    EXPECT_NEAR(st.norm(), 1.0, 1e-12);
}

TEST(Representation, SuitesPass) {
    SuiteOptions opt;
    opt.k = 6;
    opt.samples = 40;
    const SuiteResult u = verify_unitarity(opt);
    EXPECT_TRUE(u.passed) << u.max_residual;
    const SuiteResult b = verify_braid_relations(opt);
    EXPECT_TRUE(b.passed) << b.max_residual;
}

TEST(ColoredPolynomial, UnknotIsQuantumDimension) {
    for (int k = 1; k <= 8; ++k) {
        const QContext ctx(k);
        const RepContext rep(ctx);
        for (int j = 0; j <= k; ++j) {
            const cplx v = colored_polynomial(PlatBraid{BraidWord{2, {}}, {Spin(j), Spin(j)}, {}}, rep);
            EXPECT_NEAR(std::abs(v - q_dimension(Spin(j), ctx)), 0.0, 1e-12);
        }
    }
}

TEST(ColoredPolynomial, SplitUnionMultiplies) {
    const QContext ctx(5);
    const RepContext rep(ctx);
    const cplx t = colored_polynomial(half_plat("2 2 2", 4), rep);
    const cplx u = colored_polynomial(half_plat("2 2 2", 6), rep);
    EXPECT_NEAR(std::abs(u - t * q_dimension(Spin(1), ctx)), 0.0, 1e-10);
}

TEST(ColoredPolynomial, TrefoilMatchesOracleAfterUnknotPhase) {
    for (int k : {3, 5, 8}) {
        const OracleComparison c = compare_with_oracle("trefoil", k);
        EXPECT_LT(c.residual, 1e-9) << k;
        EXPECT_NEAR(std::abs(c.phase), 1 / std::abs(q_power(Rational(1, 2), QContext(k)) - q_power(Rational(-1, 2), QContext(k))) *
                                           std::abs(oracle::loop_value(QContext(k))), 1e-9);
    }
}

TEST(ColoredPolynomial, OracleMagnitudesAgreeEverywhere) {
    for (int k : {2, 3, 5, 8})
        for (const auto& e : builtin_catalog()) {
            const OracleComparison c = compare_with_oracle(e.name, k);
            EXPECT_NEAR(std::abs(c.engine), std::abs(c.phase * c.oracle), 1e-9) << e.name << " k=" << k;
        }
}

TEST(ColoredPolynomial, HopfAndFigureEightCarryTheSpinHalfSign) {
    // the engine and the bracket differ by (-1) per extra component and per odd generator;
    // no single global phase removes it
    for (int k : {3, 5}) {
        for (const char* name : {"hopf", "figure_eight"}) {
            const OracleComparison c = compare_with_oracle(name, k);
            ASSERT_GT(std::abs(c.oracle), 1e-6);
            EXPECT_NEAR(std::abs(c.engine / (c.phase * c.oracle) + 1.0), 0.0, 1e-9) << name << " k=" << k;
        }
    }
}

TEST(AmbientNormalize, Examples) {
    const QContext ctx(3);
    const cplx v(0.3, -1.2);
    EXPECT_NEAR(std::abs(ambient_normalize(v, 0, ctx) - v / (q_power(Rational(1, 2), ctx) - q_power(Rational(-1, 2), ctx))), 0.0,
                1e-14);
    for (int k : {2, 3, 5, 8}) {
        const RepContext rep{QContext(k)};
        EXPECT_NEAR(std::abs(normalized("2 2 2", 4, rep) - normalized("2 2 2 4", 6, rep)), 0.0, 1e-9);
        EXPECT_NEAR(std::abs(normalized("2", 4, rep) - normalized("", 2, rep)), 0.0, 1e-9);
        EXPECT_NEAR(std::abs(normalized("2 -4", 6, rep) - normalized("", 2, rep)), 0.0, 1e-9);
    }
}

TEST(AmbientNormalize, OddKinkDependsOnSignRule) {
    for (int k : {2, 3, 5}) {
        const QContext ctx(k);
        // with (-1)^{|j-j'|-l} the odd kink removes cleanly
        const RepContext abs_rep(ctx, Convention{EigenvalueSign::AbsDifference, -1});
        EXPECT_NEAR(std::abs(normalized("1", 2, abs_rep) - normalized("", 2, abs_rep)), 0.0, 1e-9);
        // with (-1)^{j+j'-l} it picks up (-1)^{2j}
        const RepContext sum_rep(ctx, Convention{EigenvalueSign::Sum, -1});
        EXPECT_NEAR(std::abs(normalized("1", 2, sum_rep) + normalized("", 2, sum_rep)), 0.0, 1e-9);
    }
}

TEST(AcceptProbability, Examples) {
    const RepContext rep{QContext(3)};
    EXPECT_NEAR(accept_probability(BraidWord{4, {}}, rep), 1.0, 1e-14);
    const PlatBraid t = half_plat("2 2 2", 4);
    const double d = q_dimension(Spin(1), rep.ctx());
    EXPECT_NEAR(accept_probability(t.word, rep), std::norm(colored_polynomial(t, rep) / (d * d)), 1e-12);
    std::mt19937_64 rng(4);
    for (int s = 0; s < 50; ++s) {
        BraidWord w{6, {}};
        for (int i = 0; i < 8; ++i) w.letters.push_back({1 + static_cast<int>(rng() % 5), (rng() & 1) ? 1 : -1});
        const double p = accept_probability(w, rep);
        EXPECT_GE(p, 0.0);
        EXPECT_LE(p, 1.0 + 1e-12);
    }
}

TEST(AcceptProbability, MatchesBracketOracle) {
    SuiteOptions opt;
    opt.k = 5;
    opt.samples = 50;
    const SuiteResult r = verify_recognizer(opt);
    EXPECT_TRUE(r.passed) << r.max_residual;
}

TEST(Complexity, StepCounts) {
    EXPECT_EQ(step_count(BraidWord{6, {}}, 3), 0);
    EXPECT_EQ(step_count(parse_braid("1 3 5 -1 3", 6), 3), 5);
    const BraidWord mixed = parse_braid("1 2 3 4 5 -2", 6);
    EXPECT_EQ(step_count(mixed, 3), 3 + 3 * 7);
    const ComplexityReport r = complexity_audit(mixed, 3);
    EXPECT_TRUE(r.within_bound);
    EXPECT_LE(r.steps, r.kappa * r.per_letter_bound);

    const RepContext rep{QContext(3)};
    StepCounter steps;
    (void)vacuum_amplitude(PlatBraid{mixed, std::vector<Spin>(6, Spin(1)), {}}, rep, &steps);
    EXPECT_EQ(steps.total(), r.steps);
    EXPECT_EQ(steps.diagonal, mixed.length());
}

TEST(Complexity, LinearInWordLength) {
    std::mt19937_64 rng(6);
    std::vector<double> xs, ys;
    for (int kappa : {10, 20, 40, 80, 160}) {
        BraidWord w{6, {}};
        for (int i = 0; i < kappa; ++i) w.letters.push_back({1 + static_cast<int>(rng() % 5), 1});
        xs.push_back(kappa);
        ys.push_back(static_cast<double>(step_count(w, 3)));
    }
    EXPECT_GE(linear_fit_r2(xs, ys), 0.98);
}

TEST(TransitionPositivity, ReportsZeroEntries) {
    const RepContext rep{QContext(3)};
    const PositivityReport r = transition_positivity(std::vector<Spin>(6, Spin(1)), rep);
    EXPECT_GT(r.entries, 0);
    // odd generators are diagonal, so off-diagonal zeros are expected
    EXPECT_GT(r.zero_entries, 0);
    EXPECT_LT(r.zero_fraction(), 1.0);
}

TEST(RepContext, ConcurrentEvolutionIsDeterministic) {
    const RepContext rep{QContext(5)};
    const PlatBraid p = half_plat("2 4 -3 2 1 4 -2 3", 6);
    const cplx expect = vacuum_amplitude(p, RepContext{QContext(5)});
    std::vector<cplx> got(8);
    {
        std::vector<std::jthread> pool;
        for (int t = 0; t < 8; ++t) pool.emplace_back([&, t] { got[t] = vacuum_amplitude(p, rep); });
    }
    for (const cplx& g : got) EXPECT_EQ(g, expect);
}
