#pragma once

// Deformed arithmetic at the root of unity q = exp(2*pi*i/(k+2)).

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace qtop {

using cplx = std::complex<double>;

class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Raised when a spin label exceeds the level cap k/2.
class ColorRangeError : public std::out_of_range {
  public:
    using std::out_of_range::out_of_range;
};

/// Exact rational number, always stored in lowest terms with a positive denominator.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n, std::int64_t d = 1);

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    friend Rational operator+(Rational a, Rational b);
    friend Rational operator-(Rational a, Rational b);
    friend Rational operator*(Rational a, Rational b);
    friend Rational operator-(Rational a) { return {-a.num, a.den}; }
    friend bool operator==(const Rational&, const Rational&) = default;
};

/// Half-integer spin held as its twice-value.
struct Spin {
    int twice = 0;

    constexpr Spin() = default;
    constexpr explicit Spin(int twice_value) : twice(twice_value) {}

    static constexpr Spin half(int twice_value) { return Spin(twice_value); }

    double value() const { return twice / 2.0; }
    friend constexpr bool operator==(Spin, Spin) = default;
    friend constexpr auto operator<=>(Spin, Spin) = default;
};

/// Parses "1/2", "3/2", "1" or "0" into a Spin.
Spin parse_spin(const std::string& text);
std::string to_string(Spin s);

/// Level-k context. Every numeric routine is evaluated against one of these.
class QContext {
  public:
    static constexpr int kMinLevel = 1;
    /// Arithmetic accepts large k so recoupling symbols can be compared with their classical limit.
    static constexpr int kMaxLevel = 4096;
    /// Cap for anything that enumerates bases or builds circuits.
    static constexpr int kMaxEngineLevel = 64;

    explicit QContext(int k, double tol = 1e-9);

    int k() const { return k_; }
    /// k + 2, the denominator of the root-of-unity phase.
    int level() const { return k_ + 2; }
    double q_phase() const;
    double tol() const { return tol_; }

    cplx q() const;
    bool allowed(Spin j) const { return j.twice >= 0 && j.twice <= k_; }
    void require_allowed(Spin j) const;
    void require_engine_level() const;

  private:
    int k_;
    double tol_;
};

double q_integer(int x, const QContext& ctx);
double q_factorial(int x, const QContext& ctx);
double q_dimension(Spin j, const QContext& ctx);

/// Entry S_{0j} of the modular S-matrix.
double mu(Spin j, const QContext& ctx);
/// exp(3*pi*i*k / (4(k+2))).
cplx alpha(const QContext& ctx);
/// j(j+1), exact.
Rational casimir(Spin j);
/// q^r = exp(2*pi*i*r/(k+2)); r is reduced modulo k+2 exactly before evaluation.
cplx q_power(Rational r, const QContext& ctx);

/// (-1)^x for integer x.
inline int sign_power(int x) { return (x % 2 == 0) ? 1 : -1; }

}  // namespace qtop
