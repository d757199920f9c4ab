#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qtop/qcircuit.hpp"
#include "qtop/verify.hpp"

using namespace qtop;

namespace {

std::vector<std::uint64_t> odd_indices(const RegisterLayout& lay, const std::vector<Spin>& colors, const QContext& ctx) {
    std::vector<std::uint64_t> out;
    for (const auto& s : enumerate_odd_basis(colors, ctx)) out.push_back(lay.encode(colors, s));
    return out;
}

}  // namespace

TEST(Layout, QubitCounts) {
    EXPECT_EQ(RegisterLayout(2, 3).total_qubits(), 10);
    EXPECT_EQ(RegisterLayout(2, 3).bits_per_label(), 2);
    EXPECT_EQ(RegisterLayout(1, 1).total_qubits(), 2);
    EXPECT_EQ(RegisterLayout(3, 3).field_count(), 9);
    EXPECT_EQ(RegisterLayout(4, 3).field_count(), 13);
    EXPECT_EQ(RegisterLayout(3, 8).bits_per_label(), 4);
    EXPECT_EQ(RegisterLayout(3, 7).bits_per_label(), 3);
    EXPECT_EQ(RegisterLayout(4, 2).fields()[12].name(), "r1");
    EXPECT_THROW(RegisterLayout(0, 3), DomainError);
}

TEST(Layout, EncodeDecodeRoundTrip) {
    for (int k = 1; k <= 4; ++k) {
        const QContext ctx(k);
        for (int n = 1; n <= 4; ++n) {
            const RegisterLayout lay(n, k);
            const std::vector<Spin> c(2 * n, Spin(1));
            EXPECT_EQ(lay.encode(std::vector<Spin>(2 * n, Spin(0)), OddBasisState{std::vector<Spin>(n, Spin(0)),
                                                                                  std::vector<Spin>(std::max(0, n - 3), Spin(0))}),
                      0u);
            for (const auto& s : enumerate_odd_basis(c, ctx)) {
                const auto [colors, st] = lay.decode(lay.encode(c, s));
                EXPECT_EQ(colors, c);
                EXPECT_EQ(st, s);
            }
        }
    }
}

TEST(Layout, EncodeRejectsBadStates) {
    const RegisterLayout lay(2, 3);
    const std::vector<Spin> c(4, Spin(1));
    EXPECT_THROW(lay.encode(c, OddBasisState{{Spin(0), Spin(2)}, {}}), EncodingError);
    EXPECT_THROW(lay.encode(std::vector<Spin>(4, Spin(5)), OddBasisState{{Spin(0), Spin(0)}, {}}), EncodingError);
    EXPECT_THROW(lay.encode(c, OddBasisState{{Spin(0)}, {}}), EncodingError);
    EXPECT_THROW(RegisterLayout(1, 3).encode({Spin(1), Spin(1)}, OddBasisState{{Spin(2)}, {}}), EncodingError);
}

TEST(CompileOdd, Shape) {
    const RepContext rep{QContext(3)};
    const Circuit c = compile_odd({1, 1}, RegisterLayout(1, 3), rep);
    EXPECT_EQ(c.gates.size(), 2u);
    EXPECT_EQ(c.count(GateKind::Phase), 1u);
    EXPECT_EQ(c.count(GateKind::Swap), 1u);
    EXPECT_TRUE(compile_braid(BraidWord{6, {}}, RegisterLayout(3, 3), rep).gates.empty());
    EXPECT_THROW(compile_odd({2, 1}, RegisterLayout(2, 3), rep), DomainError);
}

TEST(CompileBraid, LettersMatchEngineMatrices) {
    for (int k = 1; k <= 3; ++k) {
        const QContext ctx(k);
        const RepContext rep(ctx);
        for (int n = 1; n <= 3; ++n) {
            const RegisterLayout lay(n, k);
            for (int color = 1; color <= k; ++color) {
                const std::vector<Spin> c(2 * n, Spin(color));
                const auto idx = odd_indices(lay, c, ctx);
                if (idx.empty()) continue;
                for (int i = 1; i < 2 * n; ++i)
                    for (int sign : {1, -1}) {
                        const BraidWord w{2 * n, {{i, sign}}};
                        const ComplexMatrix m = word_matrix(c, w, rep);
                        const auto cm = restricted_matrix(compile_braid(w, lay, rep), idx, idx);
                        for (int r = 0; r < m.rows; ++r)
                            for (int s = 0; s < m.cols; ++s)
                                EXPECT_NEAR(std::abs(m(r, s) - cm[r * m.cols + s]), 0.0, 1e-12)
                                    << "k=" << k << " n=" << n << " letter " << sign * i;
                    }
            }
        }
    }
}

TEST(CompileBraid, MixedColorsMatchEngine) {
    const QContext ctx(3);
    const RepContext rep(ctx);
    const RegisterLayout lay(3, 3);
    const std::vector<Spin> c{Spin(1), Spin(2), Spin(2), Spin(1), Spin(3), Spin(1)};
    const BraidWord w = parse_braid("2 -3 4 1 -2 5", 6);
    const auto basis_in = enumerate_odd_basis(c, ctx);
    ASSERT_FALSE(basis_in.empty());
    const Circuit circ = compile_braid(w, lay, rep);
    for (std::size_t col = 0; col < basis_in.size(); ++col) {
        const StateVector out = evolve(basis_state(c, static_cast<int>(col), ctx), w, rep);
        const Statevector sim = simulate(circ, lay.encode(c, basis_in[col]));
        for (std::size_t r = 0; r < out.basis.size(); ++r)
            EXPECT_NEAR(std::abs(sim.amps[lay.encode(out.colors, out.basis[r])] - out.amps[r]), 0.0, 1e-12);
    }
}

TEST(CompileDuality, MatchesDualityMatrix) {
    for (int k = 1; k <= 3; ++k) {
        const QContext ctx(k);
        const RepContext rep(ctx);
        for (int n = 2; n <= 3; ++n) {
            const RegisterLayout lay(n, k);
            const Circuit fwd = compile_duality(DualityDirection::OddToEven, lay, rep);
            const Circuit bwd = compile_duality(DualityDirection::EvenToOdd, lay, rep);
            EXPECT_EQ(fwd.count(GateKind::Multiplexor), static_cast<std::size_t>(2 * n - 3));
            if (n == 2) EXPECT_EQ(fwd.count(GateKind::Swap), 0u);
            for (int color = 1; color <= k; ++color) {
                const std::vector<Spin> c(2 * n, Spin(color));
                const DualityMatrix d = duality_matrix(c, ctx);
                if (d.odd.empty()) continue;
                std::vector<std::uint64_t> ei, oi;
                for (const auto& e : d.even) ei.push_back(lay.encode_even(c, e));
                for (const auto& o : d.odd) oi.push_back(lay.encode(c, o));
                const auto f = restricted_matrix(fwd, ei, oi);
                const auto b = restricted_matrix(bwd, oi, ei);
                for (int r = 0; r < d.entries.rows; ++r)
                    for (int s = 0; s < d.entries.cols; ++s) {
                        EXPECT_NEAR(std::abs(f[r * d.entries.cols + s] - d.entries(r, s)), 0.0, 1e-9);
                        EXPECT_NEAR(std::abs(b[s * d.entries.rows + r] - d.entries(r, s)), 0.0, 1e-9);
                    }
            }
        }
    }
}

TEST(CompileDuality, WholeRegisterUnitary) {
    // every basis column maps to a unit vector and columns stay orthogonal
    const RepContext rep{QContext(1)};
    const RegisterLayout lay(2, 1);
    const Circuit c = compile_duality(DualityDirection::OddToEven, lay, rep);
    const int dim = 1 << lay.total_qubits();
    std::vector<Statevector> cols;
    for (int x = 0; x < dim; ++x) cols.push_back(simulate(c, static_cast<std::uint64_t>(x)));
    double worst = 0;
    for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b) {
            cplx dot{};
            for (int r = 0; r < dim; ++r) dot += std::conj(cols[a].amps[r]) * cols[b].amps[r];
            worst = std::max(worst, std::abs(dot - (a == b ? 1.0 : 0.0)));
        }
    EXPECT_LT(worst, 1e-9);
}

TEST(CompileBraid, EvenLetterGateCounts) {
    const RepContext rep{QContext(3)};
    for (int n = 2; n <= 4; ++n) {
        const Circuit c = compile_braid(BraidWord{2 * n, {{2, 1}}}, RegisterLayout(n, 3), rep);
        EXPECT_EQ(c.count(GateKind::Multiplexor), static_cast<std::size_t>(2 * (2 * n - 3)));
        EXPECT_EQ(c.count(GateKind::Phase), 1u);
        EXPECT_GE(c.count(GateKind::Swap), 1u);
    }
}

TEST(CompileBraid, GateCountLinearInLength) {
    const RepContext rep{QContext(2)};
    const RegisterLayout lay(3, 2);
    const BraidWord unit = parse_braid("1 2 -3 4 5", 6);
    const std::size_t per = compile_braid(unit, lay, rep).gates.size();
    std::vector<double> xs, ys;
    for (int reps : {1, 2, 4, 8}) {
        BraidWord w{6, {}};
        for (int r = 0; r < reps; ++r) w = concatenate(w, unit);
        const std::size_t gates = compile_braid(w, lay, rep).gates.size();
        EXPECT_EQ(gates, per * reps);
        xs.push_back(w.length());
        ys.push_back(static_cast<double>(gates));
    }
    EXPECT_GE(linear_fit_r2(xs, ys), 0.98);
}

TEST(Superposition, KEqualsOneAmplitudes) {
    const QContext ctx(1);
    const RegisterLayout lay(1, 1);
    const Superposition s = prepare_superposition({{0, 1}}, ctx, lay);
    const Statevector st = simulate(s.circuit, std::uint64_t{0});
    const double m0 = mu(Spin(0), ctx), m1 = mu(Spin(1), ctx);
    EXPECT_NEAR(s.norm, m0 + m1, 1e-14);
    EXPECT_NEAR(std::abs(st.amps[0] - std::sqrt(m0 / (m0 + m1))), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(st.amps[3] - std::sqrt(m1 / (m0 + m1))), 0.0, 1e-12);
    EXPECT_NEAR(st.norm(), 1.0, 1e-12);
}

TEST(Superposition, ComponentsAreTensorProducts) {
    const QContext ctx(3);
    const RegisterLayout lay(2, 3);
    const Superposition one = prepare_superposition({{0, 1}}, ctx, lay);
    const Superposition two = prepare_superposition({{0, 1}, {2, 3}}, ctx, lay);
    const Statevector a = simulate(one.circuit, std::uint64_t{0});
    const Statevector b = simulate(two.circuit, std::uint64_t{0});
    EXPECT_NEAR(b.norm(), 1.0, 1e-12);
    EXPECT_NEAR(two.norm, one.norm * one.norm, 1e-12);
    for (int x = 0; x < 16; ++x)
        for (int y = 0; y < 16; ++y) EXPECT_NEAR(std::abs(b.amps[x | (y << 4)] - a.amps[x] * a.amps[y]), 0.0, 1e-12);
}

TEST(Simulate, Basics) {
    const RegisterLayout lay(1, 3);
    Circuit empty(lay);
    EXPECT_NEAR(std::abs(expectation(empty, 5, 5) - 1.0), 0.0, 1e-15);
    Circuit sw(lay);
    sw.gates.push_back(swap_gate(0, 1));
    // field 0 = 1, field 1 = 2  ->  field 0 = 2, field 1 = 1
    const std::uint64_t in = 1 | (2 << 2), out = 2 | (1 << 2);
    EXPECT_NEAR(std::abs(expectation(sw, out, in) - 1.0), 0.0, 1e-15);
    EXPECT_FALSE(sw.dump().empty());
    EXPECT_THROW(simulate(Circuit(RegisterLayout(3, 4)), std::uint64_t{0}), QubitBudgetError);
}

TEST(Simulate, CatalogVacuumAmplitudes) {
    for (int k = 1; k <= 3; ++k) {
        const QContext ctx(k);
        const RepContext rep(ctx);
        for (const auto& e : builtin_catalog()) {
            const BraidWord w = e.braid();
            if (w.strands > 6) continue;
            const RegisterLayout lay(w.strands / 2, k);
            const int components = plat_components(PlatBraid{w, {}, {}}).components;
            for (int color = 1; color <= k; ++color) {
                const auto colors = colors_from_components(w, std::vector<Spin>(components, Spin(color)));
                const std::uint64_t zero = lay.encode(colors, zero_state(colors, ctx).basis[0]);
                Circuit c = compile_braid(w, lay, rep);
                c.append(compile_color_restore(w, lay));
                EXPECT_NEAR(std::abs(expectation(c, zero, zero) - vacuum_amplitude(PlatBraid{w, colors, {}}, rep)), 0.0, 1e-7)
                    << e.name << " k=" << k;
            }
        }
    }
}

TEST(Hadamard, ShotsAndEta) {
    EXPECT_EQ(hoeffding_shots(0.1), 416);
    EXPECT_NEAR(hoeffding_eta(416), 0.1, 1e-3);
    EXPECT_THROW(hoeffding_shots(0.0), DomainError);
    EXPECT_THROW(hoeffding_eta(0), DomainError);
}

TEST(Hadamard, IdentityConverges) {
    const Circuit id(RegisterLayout(1, 1));
    EXPECT_NEAR(hadamard_test(id, std::uint64_t{0}, 1000, EstimatePart::Real, 1).estimate, 1.0, 1e-15);
    EXPECT_NEAR(hadamard_test(id, std::uint64_t{0}, 20000, EstimatePart::Imag, 1).estimate, 0.0, 0.03);
}

TEST(Hadamard, UnbiasedAndSeeded) {
    const RepContext rep{QContext(3)};
    const RegisterLayout lay(2, 3);
    const Circuit c = compile_braid(parse_braid("2 2 2", 4), lay, rep);
    const std::uint64_t zero = 0;
    const HadamardEstimate a = hadamard_test(c, zero, 416, EstimatePart::Real, 42);
    const HadamardEstimate b = hadamard_test(c, zero, 416, EstimatePart::Real, 42);
    EXPECT_EQ(a.estimate, b.estimate);
    double mean = 0;
    const int trials = 400;
    for (int t = 0; t < trials; ++t) mean += hadamard_test(c, zero, 416, EstimatePart::Imag, 1000 + t).estimate;
    mean /= trials;
    const double exact = expectation(c, zero, zero).imag();
    // standard error of the mean is below 0.05 / sqrt(400)
    EXPECT_NEAR(mean, exact, 0.01);
}

TEST(CircuitInvariant, MatchesExactPipeline) {
    EXPECT_NEAR(std::abs(circuit_invariant(empty_link(), RepContext{QContext(3)}, 10, 1).value - 1.0), 0.0, 1e-15);
    for (int k : {1, 2, 3}) {
        const RepContext rep{QContext(k)};
        for (const auto& e : builtin_catalog()) {
            const BraidWord w = e.braid();
            if (RegisterLayout(w.strands / 2, k).total_qubits() > 20) continue;
            const int components = plat_components(PlatBraid{w, {}, {}}).components;
            const FramedLink l = make_framed_link(w, std::vector<int>(components, 1), {}, e.name);
            const InvariantEstimate est = circuit_invariant(l, rep, 100, 3);
            EXPECT_NEAR(std::abs(est.exact - manifold_invariant(l, rep).value), 0.0, 1e-9) << e.name << " k=" << k;
        }
    }
}

TEST(CircuitInvariant, UnknotAtLevelOne) {
    const InvariantEstimate est = circuit_invariant(framed_unknot(0), RepContext{QContext(1)}, 100000, 5);
    EXPECT_NEAR(std::abs(est.value - std::sqrt(2.0)), 0.0, 0.05);
    EXPECT_EQ(est.shots, 100000);
    const std::string json = est.to_json();
    for (const char* key : {"value_re", "value_im", "shots", "eta", "seed"}) EXPECT_NE(json.find(key), std::string::npos);
}

TEST(CircuitInvariant, HopfAtLevelOneWithinEta) {
    const RepContext rep{QContext(1)};
    const FramedLink hopf = make_framed_link(parse_braid("2 2", 4), {0, 0});
    const cplx exact = manifold_invariant(hopf, rep).value;
    int hits = 0;
    for (int t = 0; t < 40; ++t) {
        const InvariantEstimate est = circuit_invariant(hopf, rep, 416, 100 + t);
        hits += std::abs(est.value.real() - exact.real()) <= est.eta;
    }
    EXPECT_GE(hits, 30);
}

TEST(CircuitInvariant, BudgetOverflow) {
    const FramedLink big = make_framed_link(parse_braid("2 2", 6), {0, 0, 0});
    EXPECT_THROW(circuit_invariant(big, RepContext{QContext(4)}, 10, 1), QubitBudgetError);
}
