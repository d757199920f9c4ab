#include "qtop/recoupling.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <unordered_map>

namespace qtop {

namespace {

struct SixJKey {
    std::array<int, 7> v;
    friend bool operator==(const SixJKey&, const SixJKey&) = default;
};

struct SixJKeyHash {
    std::size_t operator()(const SixJKey& key) const {
        std::size_t h = 0;
        for (int x : key.v) h = h * 1000003u + std::hash<int>{}(x);
        return h;
    }
};

// Shared by all threads; readers take the shared lock.
class SixJMemo {
  public:
    template <class F>
    double get(const SixJKey& key, F&& compute) {
        {
            std::shared_lock lock(mutex_);
            if (auto it = table_.find(key); it != table_.end()) return it->second;
        }
        const double value = compute();
        std::unique_lock lock(mutex_);
        table_.emplace(key, value);
        return value;
    }

  private:
    std::shared_mutex mutex_;
    std::unordered_map<SixJKey, double, SixJKeyHash> table_;
};

SixJMemo& memo() {
    static SixJMemo instance;
    return instance;
}

double q6j_uncached(int a, int b, int e, int c, int d, int f, const QContext& ctx) {
    // twice-values: {a b e; c d f}, triangles (a,b,e) (c,d,e) (a,d,f) (b,c,f)
    const int t1 = (a + b + e) / 2;
    const int t2 = (c + d + e) / 2;
    const int t3 = (a + d + f) / 2;
    const int t4 = (b + c + f) / 2;
    const int u1 = (a + b + c + d) / 2;
    const int u2 = (a + c + e + f) / 2;
    const int u3 = (b + d + e + f) / 2;
    const int zmin = std::max({t1, t2, t3, t4});
    const int zmax = std::min({u1, u2, u3});
    double sum = 0.0;
    for (int z = zmin; z <= zmax; ++z) {
        const double numer = q_factorial(z + 1, ctx);
        const double denom = q_factorial(z - t1, ctx) * q_factorial(z - t2, ctx) * q_factorial(z - t3, ctx) *
                             q_factorial(z - t4, ctx) * q_factorial(u1 - z, ctx) * q_factorial(u2 - z, ctx) *
                             q_factorial(u3 - z, ctx);
        sum += sign_power(z) * numer / denom;
    }
    const Spin A(a), B(b), C(c), D(d), E(e), F(f);
    return delta_factor(A, B, E, ctx) * delta_factor(C, D, E, ctx) * delta_factor(A, D, F, ctx) *
           delta_factor(B, C, F, ctx) * sum;
}

}  // namespace

bool is_admissible(Spin a, Spin b, Spin c, const QContext& ctx) {
    const int A = a.twice, B = b.twice, C = c.twice;
    if (A < 0 || B < 0 || C < 0) return false;
    if (C < std::abs(A - B) || C > A + B) return false;
    if ((A + B + C) % 2 != 0) return false;
    return (A + B + C) / 2 <= ctx.k();
}

std::vector<Spin> fusion_channels(Spin a, Spin b, const QContext& ctx) {
    std::vector<Spin> out;
    for (int c = std::abs(a.twice - b.twice); c <= a.twice + b.twice; c += 2)
        if (is_admissible(a, b, Spin(c), ctx)) out.push_back(Spin(c));
    return out;
}

double delta_factor(Spin a, Spin b, Spin c, const QContext& ctx) {
    if (!is_admissible(a, b, c, ctx)) throw DomainError("delta_factor: inadmissible triple");
    const int A = a.twice, B = b.twice, C = c.twice;
    const double num = q_factorial((-A + B + C) / 2, ctx) * q_factorial((A - B + C) / 2, ctx) *
                       q_factorial((A + B - C) / 2, ctx);
    return std::sqrt(num / q_factorial((A + B + C) / 2 + 1, ctx));
}

double q6j(Spin j1, Spin j2, Spin j12, Spin j3, Spin j, Spin j23, const QContext& ctx) {
    if (!is_admissible(j1, j2, j12, ctx) || !is_admissible(j3, j, j12, ctx) || !is_admissible(j1, j, j23, ctx) ||
        !is_admissible(j2, j3, j23, ctx))
        return 0.0;
    const SixJKey key{{ctx.k(), j1.twice, j2.twice, j12.twice, j3.twice, j.twice, j23.twice}};
    return memo().get(key, [&] { return q6j_uncached(j1.twice, j2.twice, j12.twice, j3.twice, j.twice, j23.twice, ctx); });
}

double elementary_duality(Spin j1, Spin j2, Spin j3, Spin j, Spin j12, Spin j23, const QContext& ctx) {
    const double symbol = q6j(j1, j2, j12, j3, j, j23, ctx);
    if (symbol == 0.0) return 0.0;
    const int twice_exponent = j1.twice + j2.twice + j3.twice + j.twice;
    // admissibility of the four triangles forces an integer exponent
    if (twice_exponent % 2 != 0) throw DomainError("elementary_duality: half-integer phase exponent");
    return sign_power(twice_exponent / 2) * std::sqrt(q_integer(j12.twice + 1, ctx) * q_integer(j23.twice + 1, ctx)) *
           symbol;
}

Spin odd_chain_label(const OddBasisState& st, int i) {
    const int n = static_cast<int>(st.p.size());
    if (i == 0) return st.p[0];
    if (i == n - 1) return Spin(0);
    if (i == n - 2) return st.p[n - 1];
    return st.r[i - 1];
}

Spin even_chain_label(const EvenBasisState& st, std::span<const Spin> colors, int i) {
    const int n = static_cast<int>(colors.size()) / 2;
    if (i == 0) return colors.front();
    if (i == n - 1) return colors.back();
    return st.s[i - 1];
}

namespace {

void check_colors(std::span<const Spin> colors, const QContext& ctx) {
    if (colors.size() < 2 || colors.size() % 2 != 0) throw DomainError("basis needs an even, nonzero strand count");
    for (Spin c : colors) ctx.require_allowed(c);
}

}  // namespace

namespace {

template <class State>
void keep(std::vector<State>& out, const State& st) {
    if (static_cast<int>(out.size()) >= kMaxBasisDimension)
        throw DomainError("basis dimension exceeds " + std::to_string(kMaxBasisDimension));
    out.push_back(st);
}

}  // namespace

std::vector<OddBasisState> enumerate_odd_basis(std::span<const Spin> colors, const QContext& ctx) {
    check_colors(colors, ctx);
    const int n = static_cast<int>(colors.size()) / 2;
    std::vector<std::vector<Spin>> pair_channels(n);
    for (int l = 0; l < n; ++l) pair_channels[l] = fusion_channels(colors[2 * l], colors[2 * l + 1], ctx);

    std::vector<OddBasisState> out;
    OddBasisState cur;
    cur.p.resize(n);
    if (n >= 3) cur.r.resize(n - 3);

    // chain: r_0 = p_0, r_i in r_{i-1} x p_i, r_{n-2} = p_{n-1}
    std::function<void(int)> walk_r = [&](int i) {
        if (i == n - 2) {
            const Spin prev = odd_chain_label(cur, n - 3);
            if (is_admissible(prev, cur.p[n - 2], cur.p[n - 1], ctx)) keep(out, cur);
            return;
        }
        const Spin prev = odd_chain_label(cur, i - 1);
        for (Spin r : fusion_channels(prev, cur.p[i], ctx)) {
            cur.r[i - 1] = r;
            walk_r(i + 1);
        }
    };
    std::function<void(int)> walk_p = [&](int l) {
        if (l == n) {
            if (n == 1) {
                if (cur.p[0] == Spin(0)) out.push_back(cur);
            } else if (n == 2) {
                if (cur.p[0] == cur.p[1]) out.push_back(cur);
            } else {
                walk_r(1);
            }
            return;
        }
        for (Spin p : pair_channels[l]) {
            cur.p[l] = p;
            walk_p(l + 1);
        }
    };
    walk_p(0);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<EvenBasisState> enumerate_even_basis(std::span<const Spin> colors, const QContext& ctx) {
    check_colors(colors, ctx);
    const int n = static_cast<int>(colors.size()) / 2;
    std::vector<EvenBasisState> out;
    if (n == 1) {
        if (colors[0] == colors[1]) out.push_back({});
        return out;
    }
    EvenBasisState cur;
    cur.q.resize(n - 1);
    cur.s.resize(n - 2);
    // q_i (i = 1..n-1) fuses strands 2i, 2i+1 (1-based); s_i in s_{i-1} x q_i
    std::function<void(int)> walk = [&](int i) {
        const Spin prev = even_chain_label(cur, colors, i - 1);
        for (Spin q : fusion_channels(colors[2 * i - 1], colors[2 * i], ctx)) {
            cur.q[i - 1] = q;
            if (i == n - 1) {
                if (is_admissible(prev, q, colors.back(), ctx)) keep(out, cur);
                continue;
            }
            for (Spin s : fusion_channels(prev, q, ctx)) {
                cur.s[i - 1] = s;
                walk(i + 1);
            }
        }
    };
    walk(1);
    std::sort(out.begin(), out.end());
    return out;
}

double duality_element(std::span<const Spin> colors, const OddBasisState& odd, const EvenBasisState& even,
                       const QContext& ctx) {
    const int n = static_cast<int>(colors.size()) / 2;
    if (n == 1) return 1.0;
    // Both trees are recoupled into the left comb ((..((j1 j2) j3)..) j_2n)_0, whose
    // even-position labels come from the odd chain and odd-position labels from the even chain.
    double value = 1.0;
    for (int i = 1; i <= n - 1 && value != 0.0; ++i) {
        const Spin r_prev = odd_chain_label(odd, i - 1);
        const Spin r_i = odd_chain_label(odd, i);
        const Spin s_prev = even_chain_label(even, colors, i - 1);
        const Spin s_i = even_chain_label(even, colors, i);
        value *= elementary_duality(r_prev, colors[2 * i], colors[2 * i + 1], r_i, s_i, odd.p[i], ctx);
        value *= elementary_duality(s_prev, colors[2 * i - 1], colors[2 * i], s_i, r_prev, even.q[i - 1], ctx);
    }
    return value;
}

DualityMatrix duality_matrix(std::span<const Spin> colors, const QContext& ctx) {
    DualityMatrix out;
    out.colors.assign(colors.begin(), colors.end());
    out.odd = enumerate_odd_basis(colors, ctx);
    out.even = enumerate_even_basis(colors, ctx);
    const int n = static_cast<int>(colors.size()) / 2;
    out.elementary_factors = n >= 2 ? 2 * n - 3 : 0;
    out.entries = RealMatrix(static_cast<int>(out.even.size()), static_cast<int>(out.odd.size()));
    for (int e = 0; e < out.entries.rows; ++e)
        for (int o = 0; o < out.entries.cols; ++o)
            out.entries(e, o) = duality_element(colors, out.odd[o], out.even[e], ctx);
    return out;
}

double orthogonality_residual(const RealMatrix& a) {
    double worst = 0.0;
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.rows; ++j) {
            double dot = 0.0;
            for (int c = 0; c < a.cols; ++c) dot += a(i, c) * a(j, c);
            worst = std::max(worst, std::abs(dot - (i == j ? 1.0 : 0.0)));
        }
    if (a.rows != a.cols) worst = std::max(worst, 1.0);
    return worst;
}

}  // namespace qtop
