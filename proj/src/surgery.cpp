#include "qtop/surgery.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <thread>

namespace qtop {

FramedLink make_framed_link(BraidWord word, std::vector<int> framings, std::vector<int> orientations,
                            std::string name) {
    FramedLink link{PlatBraid{std::move(word), {}, std::move(orientations)}, std::move(framings), std::move(name)};
    const int s = link.components();
    if (static_cast<int>(link.framings.size()) != s)
        throw DomainError("expected " + std::to_string(s) + " framings, got " + std::to_string(link.framings.size()));
    return link;
}

FramedLink empty_link() { return FramedLink{PlatBraid{BraidWord{0, {}}, {}, {}}, {}, "empty"}; }

FramedLink framed_unknot(int framing) {
    return FramedLink{PlatBraid{BraidWord{2, {}}, {}, {}}, {framing}, "unknot"};
}

FramedLink split_union(const FramedLink& a, const FramedLink& b) {
    if (a.plat.word.strands == 0) return b;
    if (b.plat.word.strands == 0) return a;
    FramedLink out;
    out.plat.word = juxtapose(a.plat.word, b.plat.word);
    if (!a.plat.orientations.empty() || !b.plat.orientations.empty()) {
        auto fill = [](const FramedLink& l) {
            return l.plat.orientations.empty() ? std::vector<int>(l.framings.size(), 1) : l.plat.orientations;
        };
        out.plat.orientations = fill(a);
        const auto rest = fill(b);
        out.plat.orientations.insert(out.plat.orientations.end(), rest.begin(), rest.end());
    }
    out.framings = a.framings;
    out.framings.insert(out.framings.end(), b.framings.begin(), b.framings.end());
    out.name = a.name + "+" + b.name;
    return out;
}

FramedLink mirror(const FramedLink& link) {
    FramedLink out = link;
    for (Letter& l : out.plat.word.letters) l.sign = -l.sign;
    for (int& f : out.framings) f = -f;
    out.name = link.name.empty() ? "" : "mirror(" + link.name + ")";
    return out;
}

LinkingMatrix linking_matrix(const FramedLink& link) {
    LinkingMatrix m;
    m.size = link.components();
    m.entries.assign(static_cast<std::size_t>(m.size) * m.size, 0);
    if (m.size == 0) return m;
    const LinkStructure ls = link.structure();
    for (int s = 0; s < m.size; ++s)
        for (int t = 0; t < m.size; ++t)
            m.entries[static_cast<std::size_t>(s) * m.size + t] = s == t ? link.framings[s] : ls.crossings_between[s][t] / 2;
    return m;
}

int signature(const LinkingMatrix& m) {
    if (m.size == 0) return 0;
    Eigen::MatrixXd a(m.size, m.size);
    for (int s = 0; s < m.size; ++s)
        for (int t = 0; t < m.size; ++t) a(s, t) = m(s, t);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::EigenvaluesOnly);
    int sig = 0;
    for (double ev : solver.eigenvalues())
        if (std::abs(ev) >= 1e-9) sig += ev > 0 ? 1 : -1;
    return sig;
}

cplx framing_correction(Spin j, int n_twists, const QContext& ctx) {
    ctx.require_allowed(j);
    return q_power(Rational(n_twists) * casimir(j), ctx);
}

cplx framed_polynomial(const FramedLink& link, const std::vector<Spin>& component_colors, const RepContext& rep) {
    if (link.plat.word.strands == 0) return 1.0;
    const LinkStructure ls = link.structure();
    PlatBraid colored = link.plat;
    colored.colors = colors_from_components(link.plat.word, component_colors);
    cplx value = colored_polynomial(colored, rep);
    // the diagram carries its blackboard framing (the self-writhe); shift each component to f_s
    for (int s = 0; s < ls.components; ++s)
        value *= framing_correction(component_colors[s], link.framings[s] - ls.crossings_between[s][s], rep.ctx());
    return value;
}

namespace {

cplx color_sum(const FramedLink& link, const RepContext& rep, int workers, long long* used) {
    const int s = link.components();
    if (s == 0) {
        if (used) *used = 0;
        return 1.0;
    }
    const QContext& ctx = rep.ctx();
    const int per = ctx.k() + 1;  // twice-values 0..k
    long long total = 1;
    for (int i = 0; i < s; ++i) total *= per;

    workers = std::clamp(workers, 1, 64);
    std::vector<cplx> partial(workers);
    std::vector<long long> counts(workers, 0);
    std::vector<std::exception_ptr> errors(workers);
    auto run = [&](int w) {
        try {
            std::vector<Spin> colors(s, Spin(0));
            for (long long idx = w; idx < total; idx += workers) {
                long long rest = idx;
                double weight = 1.0;
                for (int c = 0; c < s; ++c) {
                    colors[c] = Spin(static_cast<int>(rest % per));
                    rest /= per;
                    weight *= mu(colors[c], ctx);
                }
                PlatBraid probe = link.plat;
                probe.colors = colors_from_components(link.plat.word, colors);
                // colorings with no singlet sector contribute nothing
                if (enumerate_odd_basis(probe.colors, ctx).empty()) continue;
                partial[w] += weight * framed_polynomial(link, colors, rep);
                ++counts[w];
            }
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(run, w);
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    cplx sum{};
    long long n = 0;
    for (int w = 0; w < workers; ++w) {
        sum += partial[w];
        n += counts[w];
    }
    if (used) *used = n;
    return sum;
}

}  // namespace

ManifoldInvariant manifold_invariant(const FramedLink& link, const RepContext& rep, int workers) {
    ManifoldInvariant out;
    const QContext& ctx = rep.ctx();
    out.signature = signature(linking_matrix(link));
    out.value = std::pow(alpha(ctx), -out.signature) * color_sum(link, rep, workers, &out.colorings);
    const FramedLink ref = framed_unknot(1);
    out.s3_reference = std::pow(alpha(ctx), -1) * color_sum(ref, rep, 1, nullptr);
    out.normalized = out.value / out.s3_reference;
    return out;
}

ManifoldInvariant manifold_invariant(const FramedLink& link, const QContext& ctx, int workers) {
    return manifold_invariant(link, RepContext(ctx), workers);
}

bool kirby_move_check(const FramedLink& link, KirbyMove move, const RepContext& rep, double rel_tol) {
    if (move != KirbyMove::II && move != KirbyMove::IV)
        throw DomainError("only moves II and IV act on disjoint unknots; use twist_framings for I and III");
    const FramedLink grown = split_union(link, framed_unknot(move == KirbyMove::II ? -1 : 1));
    const cplx before = manifold_invariant(link, rep).value;
    const cplx after = manifold_invariant(grown, rep).value;
    // invariants that vanish identically have no relative scale; fall back to unit scale
    return std::abs(after - before) <= rel_tol * std::max(std::abs(before), 1.0);
}

std::vector<int> twist_framings(const std::vector<int>& framings, const std::vector<int>& linking_with_unknot,
                                KirbyMove move) {
    if (framings.size() != linking_with_unknot.size()) throw DomainError("one linking number per component");
    if (move != KirbyMove::I && move != KirbyMove::III) throw DomainError("moves II and IV leave framings alone");
    const int dir = move == KirbyMove::I ? -1 : 1;
    std::vector<int> out(framings);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += dir * linking_with_unknot[i] * linking_with_unknot[i];
    return out;
}

}  // namespace qtop
