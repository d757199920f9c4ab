#include "qtop/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "qtop/oracle.hpp"
#include "qtop/recoupling.hpp"
#include "qtop/surgery.hpp"

namespace qtop {

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {"pentagon", "unitarity", "braid-relations", "kirby",
                                                   "oracle",   "classical-limit", "recognizer"};
    return names;
}

bool is_suite(const std::string& name) {
    const auto& n = suite_names();
    return std::find(n.begin(), n.end(), name) != n.end();
}

namespace {

using Rng = std::mt19937_64;

int pick(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

Spin pick_channel(Rng& rng, Spin a, Spin b, const QContext& ctx) {
    const auto ch = fusion_channels(a, b, ctx);
    if (ch.empty()) return Spin(-1);
    return ch[pick(rng, 0, static_cast<int>(ch.size()) - 1)];
}

/// Random colors on 2n strands with colors[2i] == colors[2i+1] and a nonempty singlet sector.
std::vector<Spin> random_plat_colors(Rng& rng, int n, const QContext& ctx) {
    for (;;) {
        std::vector<Spin> c(2 * n);
        for (int i = 0; i < n; ++i) c[2 * i] = c[2 * i + 1] = Spin(pick(rng, 1, ctx.k()));
        if (!enumerate_odd_basis(c, ctx).empty()) return c;
    }
}

/// Random colors on 2n strands, any assignment with a nonempty singlet sector.
std::vector<Spin> random_colors(Rng& rng, int n, const QContext& ctx) {
    for (int attempt = 0;; ++attempt) {
        std::vector<Spin> c(2 * n);
        for (auto& s : c) s = Spin(pick(rng, 1, ctx.k()));
        if (!enumerate_odd_basis(c, ctx).empty()) return c;
        if (attempt > 50) return random_plat_colors(rng, n, ctx);
    }
}

ComplexMatrix product_matrix(const std::vector<Spin>& colors, int strands, std::vector<Letter> letters,
                             const RepContext& rep) {
    return word_matrix(colors, BraidWord{strands, std::move(letters)}, rep);
}

SuiteResult finish(SuiteResult r, double tol) {
    r.passed = r.max_residual < tol;
    return r;
}

}  // namespace

SuiteResult verify_pentagon(const SuiteOptions& opt) {
    SuiteResult r;
    r.suite = "pentagon";
    Rng rng(opt.seed);
    for (int s = 0; s < opt.samples; ++s) {
        const QContext ctx(pick(rng, 1, opt.k));
        const auto F = [&](Spin j1, Spin j2, Spin j3, Spin j, Spin j12, Spin j23) {
            return elementary_duality(j1, j2, j3, j, j12, j23, ctx);
        };
        // (((ab)_x c)_y d)_e against (a (b (cd)_z)_w)_e, two ways
        Spin a, b, c, d, x, y, e, z, w;
        for (;;) {
            a = Spin(pick(rng, 0, ctx.k()));
            b = Spin(pick(rng, 0, ctx.k()));
            c = Spin(pick(rng, 0, ctx.k()));
            d = Spin(pick(rng, 0, ctx.k()));
            x = pick_channel(rng, a, b, ctx);
            if (x.twice < 0) continue;
            y = pick_channel(rng, x, c, ctx);
            if (y.twice < 0) continue;
            e = pick_channel(rng, y, d, ctx);
            if (e.twice < 0) continue;
            z = pick_channel(rng, c, d, ctx);
            if (z.twice < 0 || !is_admissible(x, z, e, ctx)) continue;
            w = pick_channel(rng, b, z, ctx);
            if (w.twice < 0 || !is_admissible(a, w, e, ctx)) continue;
            break;
        }
        const double lhs = F(x, c, d, e, y, z) * F(a, b, z, e, x, w);
        double rhs = 0.0;
        for (Spin u : fusion_channels(b, c, ctx)) rhs += F(a, b, c, y, x, u) * F(a, u, d, e, y, w) * F(b, c, d, w, u, z);
        r.max_residual = std::max(r.max_residual, std::abs(lhs - rhs));
        ++r.checks;
    }
    return finish(r, opt.tol);
}

SuiteResult verify_orthogonality(const SuiteOptions& opt) {
    SuiteResult r;
    r.suite = "orthogonality";
    Rng rng(opt.seed);
    for (int s = 0; s < opt.samples; ++s) {
        const QContext ctx(pick(rng, 1, opt.k));
        const auto colors = random_colors(rng, pick(rng, 2, 3), ctx);
        const DualityMatrix m = duality_matrix(colors, ctx);
        if (m.entries.rows != m.entries.cols) {
            r.max_residual = std::max(r.max_residual, 1.0);
            r.note = "odd and even sectors differ in size";
        } else {
            r.max_residual = std::max(r.max_residual, orthogonality_residual(m.entries));
        }
        ++r.checks;
    }
    return finish(r, opt.tol);
}

SuiteResult verify_unitarity(const SuiteOptions& opt) {
    SuiteResult r;
    r.suite = "unitarity";
    Rng rng(opt.seed);
    for (int s = 0; s < opt.samples; ++s) {
        const QContext ctx(pick(rng, 1, opt.k));
        const RepContext rep(ctx);
        const int n = pick(rng, 1, 4);
        const auto colors = random_colors(rng, n, ctx);
        for (int i = 1; i < 2 * n; ++i)
            for (int sign : {1, -1}) {
                r.max_residual = std::max(r.max_residual, unitarity_residual(product_matrix(colors, 2 * n, {{i, sign}}, rep)));
                ++r.checks;
            }
    }
    return finish(r, opt.tol);
}

SuiteResult verify_braid_relations(const SuiteOptions& opt) {
    SuiteResult r;
    r.suite = "braid-relations";
    Rng rng(opt.seed);
    for (int s = 0; s < opt.samples; ++s) {
        const QContext ctx(pick(rng, 1, opt.k));
        const RepContext rep(ctx);
        const int n = pick(rng, 2, 4);
        const int m = 2 * n;
        const auto colors = random_colors(rng, n, ctx);
        const auto check = [&](std::vector<Letter> lhs, std::vector<Letter> rhs) {
            r.max_residual = std::max(r.max_residual, max_difference(product_matrix(colors, m, std::move(lhs), rep),
                                                                     product_matrix(colors, m, std::move(rhs), rep)));
            ++r.checks;
        };
        for (int i = 1; i < m; ++i) {
            check({{i, 1}, {i, -1}}, {});
            if (i + 1 < m) check({{i, 1}, {i + 1, 1}, {i, 1}}, {{i + 1, 1}, {i, 1}, {i + 1, 1}});
            for (int j = i + 2; j < m; ++j) check({{i, 1}, {j, 1}}, {{j, 1}, {i, 1}});
        }
    }
    return finish(r, opt.tol);
}

SuiteResult verify_kirby(const SuiteOptions& opt) {
    SuiteResult r;
    r.suite = "kirby";
    const QContext ctx(opt.k);
    const RepContext rep(ctx);
    for (const CatalogEntry& entry : builtin_catalog()) {
        const BraidWord word = entry.braid();
        const int components = plat_components(PlatBraid{word, {}, {}}).components;
        for (int f : {0, 1}) {
            const FramedLink link = make_framed_link(word, std::vector<int>(components, f), {}, entry.name);
            const cplx before = manifold_invariant(link, rep, opt.workers).value;
            for (int extra : {-1, 1}) {
                const cplx after = manifold_invariant(split_union(link, framed_unknot(extra)), rep, opt.workers).value;
                r.max_residual = std::max(r.max_residual, std::abs(after - before) / std::max(std::abs(before), 1.0));
                ++r.checks;
            }
        }
    }
    return finish(r, std::max(opt.tol, 1e-8));
}

SuiteResult verify_classical_limit(const SuiteOptions&) {
    SuiteResult r;
    r.suite = "classical-limit";
    const QContext ctx(2000);
    for (int a = 0; a <= 4; ++a)
        for (int b = 0; b <= 4; ++b)
            for (int c = 0; c <= 4; ++c)
                for (int d = 0; d <= 4; ++d)
                    for (int e = 0; e <= 4; ++e)
                        for (int f = 0; f <= 4; ++f) {
                            const Spin s[6] = {Spin(a), Spin(b), Spin(c), Spin(d), Spin(e), Spin(f)};
                            const double quantum = q6j(s[0], s[1], s[2], s[3], s[4], s[5], ctx);
                            const double classical = oracle::classical_6j(s[0], s[1], s[2], s[3], s[4], s[5]);
                            if (quantum == 0.0 && classical == 0.0) continue;
                            r.max_residual = std::max(r.max_residual, std::abs(quantum - classical));
                            ++r.checks;
                        }
    return finish(r, 1e-4);
}

SuiteResult verify_recognizer(const SuiteOptions& opt) {
    SuiteResult r;
    r.suite = "recognizer";
    Rng rng(opt.seed);
    for (int s = 0; s < opt.samples; ++s) {
        const QContext ctx(pick(rng, 1, opt.k));
        const RepContext rep(ctx);
        const int n = pick(rng, 1, 3);
        BraidWord word{2 * n, {}};
        const int length = pick(rng, 0, 10);
        for (int i = 0; i < length; ++i) word.letters.push_back({pick(rng, 1, 2 * n - 1), pick(rng, 0, 1) ? 1 : -1});
        const double p = accept_probability(word, rep);
        const auto bracket = oracle::kauffman_bracket(PlatBraid{word, std::vector<Spin>(2 * n, Spin(1)), {}}, ctx);
        const double expected = std::norm(bracket.bracket / std::pow(oracle::loop_value(ctx), n));
        r.max_residual = std::max(r.max_residual, std::abs(p - expected));
        ++r.checks;
    }
    return finish(r, std::min(opt.tol, 1e-12));
}

OracleComparison compare_with_oracle(const std::string& catalog_name, int k) {
    const QContext ctx(k);
    const RepContext rep(ctx);
    const auto engine_value = [&](const BraidWord& word) {
        const PlatBraid plat{word, std::vector<Spin>(word.strands, Spin(1)), {}};
        return ambient_normalize(colored_polynomial(plat, rep), writhe(plat), ctx);
    };
    const auto oracle_value = [&](BraidWord word) {
        for (Letter& l : word.letters) l.sign = -l.sign;
        return oracle::kauffman_bracket(PlatBraid{word, std::vector<Spin>(word.strands, Spin(1)), {}}, ctx).jones /
               oracle::loop_value(ctx);
    };
    const auto entry = find_catalog_entry(catalog_name);
    if (!entry) throw DomainError("no catalog entry named " + catalog_name);
    const BraidWord unknot = find_catalog_entry("unknot")->braid();
    const BraidWord word = entry->braid();
    OracleComparison out;
    out.name = catalog_name;
    out.k = k;
    out.phase = engine_value(unknot) / oracle_value(unknot);
    out.engine = engine_value(word);
    out.oracle = oracle_value(word);
    out.residual = std::abs(out.engine - out.phase * out.oracle);
    return out;
}

SuiteResult verify_oracle(const SuiteOptions& opt) {
    SuiteResult r;
    r.suite = "oracle";
    for (const char* name : {"unknot", "hopf", "trefoil", "figure_eight"}) {
        const OracleComparison c = compare_with_oracle(name, opt.k);
        if (c.residual >= opt.tol) r.note += (r.note.empty() ? "mismatch:" : "") + std::string(" ") + name;
        r.max_residual = std::max(r.max_residual, c.residual);
        ++r.checks;
    }
    return finish(r, opt.tol);
}

BraidWord benchmark_word(int n, int kappa, std::mt19937_64& rng) {
    if (n < 1 || kappa < 0) throw DomainError("benchmark_word: need n >= 1 and kappa >= 0");
    BraidWord word{2 * n, {}};
    std::vector<int> block(2 * n - 1);
    while (static_cast<int>(word.letters.size()) < kappa) {
        std::iota(block.begin(), block.end(), 1);
        std::shuffle(block.begin(), block.end(), rng);
        for (int g : block) {
            if (static_cast<int>(word.letters.size()) == kappa) break;
            word.letters.push_back({g, (rng() & 1) ? 1 : -1});
        }
    }
    return word;
}

double linear_fit_r2(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw DomainError("a line fit needs at least two points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) sx += x[i], sy += y[i];
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (syy == 0.0) return 1.0;
    if (sxx == 0.0) return 0.0;
    return sxy * sxy / (sxx * syy);
}

SuiteResult run_suite(const std::string& name, const SuiteOptions& opt) {
    if (name == "pentagon") {
        SuiteResult p = verify_pentagon(opt);
        const SuiteResult o = verify_orthogonality(opt);
        p.checks += o.checks;
        p.max_residual = std::max(p.max_residual, o.max_residual);
        p.passed = p.passed && o.passed;
        p.note = o.note;
        return p;
    }
    if (name == "unitarity") return verify_unitarity(opt);
    if (name == "braid-relations") return verify_braid_relations(opt);
    if (name == "kirby") return verify_kirby(opt);
    if (name == "oracle") return verify_oracle(opt);
    if (name == "classical-limit") return verify_classical_limit(opt);
    if (name == "recognizer") return verify_recognizer(opt);
    throw std::out_of_range("unknown suite: " + name);
}

}  // namespace qtop
