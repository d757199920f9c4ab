#pragma once

// Qubit-register compilation of the braid representation and a dense
// statevector simulator for it.

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "qtop/kaul.hpp"
#include "qtop/surgery.hpp"

namespace qtop {

class EncodingError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class QubitBudgetError : public std::length_error {
  public:
    using std::length_error::length_error;
};

inline constexpr int kMaxSimulatedQubits = 26;

enum class FieldKind { Color, Channel, Chain };

struct Field {
    FieldKind kind;
    int label;  ///< strand index (0-based), p index or r index
    std::string name() const;
};

/// Fields j_1..j_2n, then p_0..p_{n-1}, then the free chain labels r_1..r_{n-3}.
/// For n = 2 only p_0 is stored (p_1 = p_0), for n = 1 no internal field is.
/// Each field holds 2j little-endian in bits_per_label qubits.
class RegisterLayout {
  public:
    RegisterLayout(int n, int k);

    int n() const { return n_; }
    int k() const { return k_; }
    int bits_per_label() const { return bits_; }
    int field_count() const { return static_cast<int>(fields_.size()); }
    int total_qubits() const { return field_count() * bits_; }
    const std::vector<Field>& fields() const { return fields_; }

    int color_field(int strand) const;
    /// -1 when p_l is not stored (n = 1)
    int channel_field(int l) const;
    /// field holding r_i for 1 <= i <= n-3
    int chain_field(int i) const;
    /// internal slots in physical order: p_0.. then r_1..
    int internal_field(int slot) const { return 2 * n_ + slot; }
    int internal_slots() const { return field_count() - 2 * n_; }

    std::uint64_t encode(const std::vector<Spin>& colors, const OddBasisState& state) const;
    /// Even states occupy the internal slots as q_1..q_{n-1}, s_1..s_{n-2}.
    std::uint64_t encode_even(const std::vector<Spin>& colors, const EvenBasisState& state) const;
    std::pair<std::vector<Spin>, OddBasisState> decode(std::uint64_t bits) const;

    int field_value(std::uint64_t bits, int field) const {
        return static_cast<int>((bits >> (field * bits_)) & ((1ULL << bits_) - 1));
    }

  private:
    std::uint64_t put(std::uint64_t bits, int field, Spin value) const;

    int n_;
    int k_;
    int bits_;
    std::vector<Field> fields_;
};

enum class GateKind { Swap, Phase, Multiplexor, Copy };

/// Controls and targets are field indices. Phase gates are diagonal in the
/// joint value of their controls; a multiplexor applies a dense unitary on its
/// single target field, selected by the joint control value (no controls means
/// one unconditional block).
struct Gate {
    GateKind kind = GateKind::Swap;
    std::vector<int> controls;
    std::vector<int> targets;
    std::string label;

    // phase: table over the joint control value, 1 where unset
    std::shared_ptr<const std::vector<cplx>> phases;
    // multiplexor: block id per joint control value (-1 = identity) and the blocks,
    // each a (2^b x 2^b) row-major matrix
    std::shared_ptr<const std::vector<int>> block_of;
    std::shared_ptr<const std::vector<std::vector<cplx>>> blocks;
};

Gate swap_gate(int field_a, int field_b);
Gate copy_gate(int source, int target);

struct Circuit {
    RegisterLayout layout;
    std::vector<Gate> gates;

    explicit Circuit(RegisterLayout l) : layout(std::move(l)) {}
    void append(const Circuit& other);
    std::size_t count(GateKind kind) const;
    /// One gate per line: KIND qubits data
    std::string dump() const;
};

Circuit compile_odd(Letter letter, const RegisterLayout& layout, const RepContext& rep);

enum class DualityDirection { OddToEven, EvenToOdd };

/// 2n-3 multiplexors followed by the slot reordering swaps; the inverse
/// direction is the reversed adjoint sequence.
Circuit compile_duality(DualityDirection direction, const RegisterLayout& layout, const RepContext& rep);

Circuit compile_braid(const BraidWord& word, const RegisterLayout& layout, const RepContext& rep);

/// SWAP network undoing the strand permutation of `word` on the color fields.
Circuit compile_color_restore(const BraidWord& word, const RegisterLayout& layout);

struct Superposition {
    Circuit circuit;
    /// product over components of the summed weights that were divided out
    double norm = 1.0;
};

/// prod_s sum_j sqrt(mu_j / sum mu) |j> on the first field of each component,
/// copied to the component's other fields.
Superposition prepare_superposition(const std::vector<std::vector<int>>& component_fields, const QContext& ctx,
                                    const RegisterLayout& layout);

/// Same shape with arbitrary positive weights: weights[s][2j] for component s.
Superposition prepare_weighted_superposition(const std::vector<std::vector<int>>& component_fields,
                                             const std::vector<std::vector<double>>& weights,
                                             const RegisterLayout& layout);

struct Statevector {
    int qubits = 0;
    std::vector<cplx> amps;
    double norm() const;
};

Statevector basis_statevector(int qubits, std::uint64_t bits);
Statevector simulate(const Circuit& circuit, Statevector state);
Statevector simulate(const Circuit& circuit, std::uint64_t input);
/// <bra| U |ket>
cplx expectation(const Circuit& circuit, std::uint64_t bra, std::uint64_t ket);
cplx expectation(const Circuit& circuit, const Statevector& state);

/// Dense unitary of a circuit restricted to the listed basis columns: out(r, c) = <rows[r]|U|cols[c]>.
std::vector<cplx> restricted_matrix(const Circuit& circuit, const std::vector<std::uint64_t>& rows,
                                    const std::vector<std::uint64_t>& cols);

enum class EstimatePart { Real, Imag };

struct HadamardEstimate {
    double estimate = 0.0;
    long long shots = 0;
    double eta = 0.0;  ///< Hoeffding half-width at confidence 3/4
    std::uint64_t seed = 0;
    double exact = 0.0;
};

/// shots needed for half-width eta at confidence 3/4
long long hoeffding_shots(double eta);
double hoeffding_eta(long long shots);

HadamardEstimate hadamard_test(const Circuit& circuit, const Statevector& ket, long long shots, EstimatePart part,
                               std::uint64_t seed);
HadamardEstimate hadamard_test(const Circuit& circuit, std::uint64_t ket, long long shots, EstimatePart part,
                               std::uint64_t seed);

struct InvariantEstimate {
    cplx value;   ///< estimate of the surgery invariant
    cplx exact;   ///< the same bookkeeping applied to the exact expectation
    long long shots = 0;  ///< per part
    double eta = 0.0;     ///< half-width on the invariant scale, per part
    std::uint64_t seed = 0;
    int qubits = 0;
    std::string to_json() const;
};

InvariantEstimate circuit_invariant(const FramedLink& link, const RepContext& rep, long long shots,
                                    std::uint64_t seed);

}  // namespace qtop
