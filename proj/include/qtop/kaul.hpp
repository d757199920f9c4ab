#pragma once

// Unitary braid representation on odd-coupled conformal blocks and the
// colored link polynomial of a plat closure.

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "qtop/braid.hpp"
#include "qtop/recoupling.hpp"

namespace qtop {

/// Sign factor in front of the braiding eigenvalue.
enum class EigenvalueSign {
    /// (-1)^{|j - j'| - l}
    AbsDifference,
    /// (-1)^{j + j' - l}
    Sum,
};

struct Convention {
    EigenvalueSign sign = EigenvalueSign::Sum;
    /// Exponent sign used for a positive letter; the inverse letter uses the opposite.
    int positive_hand = -1;
};

std::string describe(const Convention& conv);

cplx braiding_eigenvalue(Spin j, Spin jp, Spin channel, int hand, const QContext& ctx,
                         EigenvalueSign rule = EigenvalueSign::Sum);

/// Shared, read-mostly data for evolving states at one level: conventions plus a
/// cache of duality matrices keyed by the current color string.
class RepContext {
  public:
    explicit RepContext(const QContext& ctx, Convention conv = {});

    const QContext& ctx() const { return ctx_; }
    const Convention& convention() const { return conv_; }

    std::shared_ptr<const DualityMatrix> duality(const std::vector<Spin>& colors) const;
    cplx eigenvalue(Spin j, Spin jp, Spin channel, int letter_sign) const;

  private:
    QContext ctx_;
    Convention conv_;
    mutable std::mutex mutex_;
    mutable std::map<std::vector<Spin>, std::shared_ptr<const DualityMatrix>> cache_;
};

struct StateVector {
    std::vector<Spin> colors;
    std::vector<OddBasisState> basis;
    std::vector<cplx> amps;

    double norm() const;
    /// Index of the all-zero internal labelling, or -1.
    int zero_index() const;
};

/// The all-zero odd state |0;0> for the given colors.
StateVector zero_state(const std::vector<Spin>& colors, const QContext& ctx);
StateVector basis_state(const std::vector<Spin>& colors, int index, const QContext& ctx);

/// Elementary operations spent by the evolution so far.
struct StepCounter {
    long long diagonal = 0;
    long long duality = 0;
    long long total() const { return diagonal + duality; }
};

StateVector apply_generator(const StateVector& state, Letter letter, const RepContext& rep,
                            StepCounter* steps = nullptr);
StateVector evolve(StateVector state, const BraidWord& word, const RepContext& rep, StepCounter* steps = nullptr);

/// Dense matrix of U(word) from the odd basis of `colors` to the odd basis of the permuted colors.
struct ComplexMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<cplx> data;
    ComplexMatrix() = default;
    ComplexMatrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c) {}
    cplx& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
    cplx operator()(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }
};

ComplexMatrix word_matrix(const std::vector<Spin>& colors, const BraidWord& word, const RepContext& rep);
double unitarity_residual(const ComplexMatrix& m);
double max_difference(const ComplexMatrix& a, const ComplexMatrix& b);

/// <0;0| U(word) |0;0>, the singlet-sector matrix element.
cplx vacuum_amplitude(const PlatBraid& plat, const RepContext& rep, StepCounter* steps = nullptr);

/// J = prod over caps of [2j+1]_q times <0;0|U|0;0>.
cplx colored_polynomial(const PlatBraid& plat, const RepContext& rep, StepCounter* steps = nullptr);
cplx colored_polynomial(const PlatBraid& plat, const QContext& ctx);

/// value * q^{-3w/4} / (q^{1/2} - q^{-1/2})
cplx ambient_normalize(cplx value, int writhe, const QContext& ctx);

/// |<0;0| U(w) |0;0>|^2 with all strands colored 1/2 unless rep colors are given.
double accept_probability(const BraidWord& word, const RepContext& rep);
double accept_probability(const BraidWord& word, const std::vector<Spin>& colors, const RepContext& rep);

/// Elementary operations the engine performs on `word`: one per odd letter,
/// 2(2n-3)+1 per even letter.
long long step_count(const BraidWord& word, int n);

struct ComplexityReport {
    long long steps = 0;
    int kappa = 0;
    int n = 0;
    double n_tilde_log = 0.0;  ///< (2n-1) ln(2n-1), floored at 1
    double constant = 1.0;     ///< C in steps <= C * kappa * n_tilde_log
    long long per_letter_bound = 0;  ///< 2(2n-3)+1
    bool within_bound = false;
};

ComplexityReport complexity_audit(const BraidWord& word, int n);

/// Fraction of exactly-zero entries among the generator matrices of one color string.
struct PositivityReport {
    long long entries = 0;
    long long zero_entries = 0;
    double zero_fraction() const { return entries ? static_cast<double>(zero_entries) / entries : 0.0; }
};

PositivityReport transition_positivity(const std::vector<Spin>& colors, const RepContext& rep);

}  // namespace qtop
