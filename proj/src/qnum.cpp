#include "qtop/qnum.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

namespace qtop {

Rational::Rational(std::int64_t n, std::int64_t d) {
    if (d == 0) throw DomainError("rational with zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    const std::int64_t g = std::gcd(n < 0 ? -n : n, d);
    num = g ? n / g : 0;
    den = g ? d / g : 1;
}

Rational operator+(Rational a, Rational b) { return {a.num * b.den + b.num * a.den, a.den * b.den}; }
Rational operator-(Rational a, Rational b) { return {a.num * b.den - b.num * a.den, a.den * b.den}; }
Rational operator*(Rational a, Rational b) { return {a.num * b.num, a.den * b.den}; }

Spin parse_spin(const std::string& text) {
    const auto slash = text.find('/');
    try {
        std::size_t used = 0;
        if (slash == std::string::npos) {
            const int v = std::stoi(text, &used);
            if (used != text.size() || v < 0) throw DomainError("bad spin: " + text);
            return Spin(2 * v);
        }
        const int n = std::stoi(text.substr(0, slash), &used);
        if (used != slash) throw DomainError("bad spin: " + text);
        const std::string tail = text.substr(slash + 1);
        const int d = std::stoi(tail, &used);
        if (used != tail.size() || n < 0) throw DomainError("bad spin: " + text);
        if (d == 1) return Spin(2 * n);
        if (d == 2) return Spin(n);
        throw DomainError("spin denominator must be 1 or 2: " + text);
    } catch (const std::logic_error&) {
        throw DomainError("bad spin: " + text);
    }
}

std::string to_string(Spin s) {
    if (s.twice % 2 == 0) return std::to_string(s.twice / 2);
    return std::to_string(s.twice) + "/2";
}

QContext::QContext(int k, double tol) : k_(k), tol_(tol) {
    if (k < kMinLevel || k > kMaxLevel)
        throw DomainError("level k must lie in [1, 4096], got " + std::to_string(k));
    if (!(tol > 0)) throw DomainError("tolerance must be positive");
}

double QContext::q_phase() const { return 2.0 * std::numbers::pi / level(); }

cplx QContext::q() const { return std::polar(1.0, q_phase()); }

void QContext::require_allowed(Spin j) const {
    if (!allowed(j))
        throw ColorRangeError("color " + to_string(j) + " outside {0,...,k/2} for k=" + std::to_string(k_));
}

void QContext::require_engine_level() const {
    if (k_ > kMaxEngineLevel)
        throw DomainError("basis and circuit engines support k <= 64, got " + std::to_string(k_));
}

double q_integer(int x, const QContext& ctx) {
    const double t = std::numbers::pi / ctx.level();
    // sin(pi*x/(k+2)) is exactly zero at multiples of k+2; avoid a 1e-16 residue there.
    if (x % ctx.level() == 0) return 0.0;
    return std::sin(t * x) / std::sin(t);
}

double q_factorial(int x, const QContext& ctx) {
    if (x < 0) throw DomainError("q_factorial of negative argument");
    double out = 1.0;
    for (int i = 2; i <= x; ++i) out *= q_integer(i, ctx);
    return out;
}

double q_dimension(Spin j, const QContext& ctx) {
    ctx.require_allowed(j);
    return q_integer(j.twice + 1, ctx);
}

double mu(Spin j, const QContext& ctx) {
    ctx.require_allowed(j);
    const double l = ctx.level();
    return std::sqrt(2.0 / l) * std::sin(std::numbers::pi * (j.twice + 1) / l);
}

cplx alpha(const QContext& ctx) {
    return std::polar(1.0, 3.0 * std::numbers::pi * ctx.k() / (4.0 * ctx.level()));
}

Rational casimir(Spin j) { return Rational(j.twice * (j.twice + 2), 4); }

cplx q_power(Rational r, const QContext& ctx) {
    // exp(2 pi i r / l) only depends on r mod l
    const std::int64_t period = r.den * ctx.level();
    std::int64_t n = r.num % period;
    if (n < 0) n += period;
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(n) / static_cast<double>(period);
    return std::polar(1.0, angle);
}

}  // namespace qtop
