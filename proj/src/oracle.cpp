#include "qtop/oracle.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace qtop::oracle {
namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void join(int a, int b) { parent[find(a)] = find(b); }
    int classes() {
        int c = 0;
        for (int i = 0; i < static_cast<int>(parent.size()); ++i) c += find(i) == i;
        return c;
    }
};

void check_shape(const PlatBraid& plat) {
    const int m = plat.word.strands;
    if (m < 2 || m % 2) throw DomainError("oracle: plat closure needs an even, positive strand count");
    for (const Letter& l : plat.word.letters)
        if (l.index < 1 || l.index >= m || (l.sign != 1 && l.sign != -1)) throw DomainError("oracle: bad letter");
}

}  // namespace

cplx bracket_variable(const QContext& ctx) { return q_power(Rational(-1, 4), ctx); }

cplx loop_value(const QContext& ctx) {
    const cplx a = bracket_variable(ctx);
    return -a * a - 1.0 / (a * a);
}

int oracle_writhe(const PlatBraid& plat) {
    check_shape(plat);
    const int m = plat.word.strands;
    const auto& letters = plat.word.letters;
    // thread x starts at top position x; follow it to the bottom
    std::vector<int> at(m);  // at[position] = thread
    std::iota(at.begin(), at.end(), 0);
    for (const Letter& l : letters) std::swap(at[l.index - 1], at[l.index]);
    std::vector<int> bottom_thread = at;  // thread ending at bottom position b
    std::vector<int> bottom_of(m);
    for (int b = 0; b < m; ++b) bottom_of[bottom_thread[b]] = b;

    std::vector<int> dir(m, 0), comp(m, -1);
    int ncomp = 0;
    for (int start = 0; start < m; ++start) {
        if (comp[start] >= 0) continue;
        int thread = start;
        int d = 1;
        while (comp[thread] < 0) {
            comp[thread] = ncomp;
            dir[thread] = d;
            if (d == 1) {
                thread = bottom_thread[bottom_of[thread] ^ 1];
                d = -1;
            } else {
                thread = thread ^ 1;
                d = 1;
            }
        }
        ++ncomp;
    }
    if (!plat.orientations.empty()) {
        if (static_cast<int>(plat.orientations.size()) != ncomp) throw DomainError("oracle: orientation count mismatch");
        for (int t = 0; t < m; ++t) dir[t] *= plat.orientations[comp[t]];
    }
    int w = 0;
    std::iota(at.begin(), at.end(), 0);
    for (const Letter& l : letters) {
        w += l.sign * dir[at[l.index - 1]] * dir[at[l.index]];
        std::swap(at[l.index - 1], at[l.index]);
    }
    return w;
}

BracketResult kauffman_bracket(const PlatBraid& plat, const QContext& ctx) {
    check_shape(plat);
    for (const Spin& c : plat.colors)
        if (c.twice != 1) throw DomainError("oracle: Kauffman bracket needs every strand colored 1/2");
    const int kappa = static_cast<int>(plat.word.letters.size());
    if (kappa > kMaxCrossings) throw DomainError("oracle: more than 16 crossings");
    const int m = plat.word.strands;
    const auto node = [m](int level, int x) { return level * m + x; };

    // histogram of (A-power, loop count); the bracket is then an integer Laurent polynomial in A
    std::map<std::pair<int, int>, long long> states;
    for (unsigned long mask = 0; mask < (1UL << kappa); ++mask) {
        UnionFind uf((kappa + 1) * m);
        for (int x = 0; x < m; x += 2) {
            uf.join(node(0, x), node(0, x + 1));
            uf.join(node(kappa, x), node(kappa, x + 1));
        }
        int a_power = 0;
        for (int t = 0; t < kappa; ++t) {
            const Letter& l = plat.word.letters[t];
            const int lo = l.index - 1;
            const bool horizontal = (mask >> t) & 1UL;
            for (int x = 0; x < m; ++x)
                if (x != lo && x != lo + 1) uf.join(node(t, x), node(t + 1, x));
            if (horizontal) {
                uf.join(node(t, lo), node(t, lo + 1));
                uf.join(node(t + 1, lo), node(t + 1, lo + 1));
                a_power -= l.sign;
            } else {
                uf.join(node(t, lo), node(t + 1, lo));
                uf.join(node(t, lo + 1), node(t + 1, lo + 1));
                a_power += l.sign;
            }
        }
        ++states[{a_power, uf.classes()}];
    }
    // d^L = (-1)^L sum_i C(L, i) A^{4i - 2L}
    std::map<int, long long> poly;
    for (const auto& [key, count] : states) {
        const auto [a_power, loops] = key;
        long long binom = 1;
        for (int i = 0; i <= loops; ++i) {
            poly[a_power + 4 * i - 2 * loops] += (loops % 2 ? -1 : 1) * count * binom;
            binom = binom * (loops - i) / (i + 1);
        }
    }
    const long double theta = -std::numbers::pi_v<long double> / (2.0L * ctx.level());
    std::complex<long double> acc{};
    for (const auto& [power, coeff] : poly)
        acc += static_cast<long double>(coeff) * std::polar(1.0L, theta * power);
    const cplx total(static_cast<double>(acc.real()), static_cast<double>(acc.imag()));
    const cplx a = bracket_variable(ctx);
    BracketResult r;
    r.bracket = total;
    r.writhe = oracle_writhe(plat);
    r.jones = std::pow(-a * a * a, -r.writhe) * total;
    return r;
}

double classical_6j(Spin j1, Spin j2, Spin j12, Spin j3, Spin j, Spin j23) {
    // twice-values throughout; (x)! means lgamma(x/2 + 1)
    const auto tri = [](int a, int b, int c) {
        return a >= 0 && b >= 0 && c >= 0 && (a + b + c) % 2 == 0 && c <= a + b && a <= b + c && b <= a + c;
    };
    const int a = j1.twice, b = j2.twice, c = j12.twice, d = j3.twice, e = j.twice, f = j23.twice;
    if (!tri(a, b, c) || !tri(a, e, f) || !tri(d, b, f) || !tri(d, e, c)) return 0.0;
    const auto lf = [](int twice) { return std::lgamma(twice / 2.0 + 1.0); };
    const auto ldelta = [&](int x, int y, int z) {
        return 0.5 * (lf(x + y - z) + lf(x - y + z) + lf(-x + y + z) - lf(x + y + z + 2));
    };
    const double pre = ldelta(a, b, c) + ldelta(a, e, f) + ldelta(d, b, f) + ldelta(d, e, c);
    const int lo = std::max({a + b + c, a + e + f, d + b + f, d + e + c});
    const int hi = std::min({a + b + d + e, a + c + d + f, b + c + e + f});
    double sum = 0.0;
    for (int z = lo; z <= hi; z += 2) {
        const double l = lf(z + 2) - lf(z - a - b - c) - lf(z - a - e - f) - lf(z - d - b - f) - lf(z - d - e - c) -
                         lf(a + b + d + e - z) - lf(a + c + d + f - z) - lf(b + c + e + f - z);
        sum += ((z / 2) % 2 ? -1.0 : 1.0) * std::exp(l + pre);
    }
    return sum;
}

double kashaev_41(int n) {
    if (n < 2) throw DomainError("kashaev_41 needs N >= 2");
    double total = 0.0, term = 1.0;
    for (int m = 0; m < n; ++m) {
        if (m > 0) term *= std::norm(1.0 - std::polar(1.0, 2.0 * std::numbers::pi * m / n));
        total += term;
    }
    return total;
}

double lobachevsky(double theta) {
    // Lambda(theta) = Cl2(2 theta)/2; the Clausen function is summed through its
    // Bernoulli expansion around 0, which converges like (x / 2 pi)^{2k}
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double x = std::remainder(2.0 * theta, two_pi);
    if (x == 0.0) return 0.0;
    const double ax = std::abs(x);
    double cl = ax - ax * std::log(ax);
    const auto zeta = [](int s) {
        constexpr int cut = 200;
        double z = 0.0;
        for (int i = cut; i >= 1; --i) z += std::pow(i, -s);
        return z + std::pow(cut, 1 - s) / (s - 1) - 0.5 * std::pow(cut, -s) + s * std::pow(cut, -s - 1) / 12.0;
    };
    double ratio = 1.0;
    for (int k = 1; k < 200; ++k) {
        ratio *= (ax / two_pi) * (ax / two_pi);
        const double term = 2.0 * zeta(2 * k) * ratio * ax / (2.0 * k * (2.0 * k + 1.0));
        cl += term;
        if (term < 1e-17) break;
    }
    return 0.5 * (x < 0 ? -cl : cl);
}

double figure_eight_volume() { return 6.0 * lobachevsky(std::numbers::pi / 3.0); }

}  // namespace qtop::oracle
