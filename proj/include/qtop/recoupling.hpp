#pragma once

// Fusion rules, q-6j symbols and the odd/even conformal-block bases.

#include <span>
#include <vector>

#include "qtop/qnum.hpp"

namespace qtop {

bool is_admissible(Spin a, Spin b, Spin c, const QContext& ctx);

/// All c with (a, b, c) admissible, ascending.
std::vector<Spin> fusion_channels(Spin a, Spin b, const QContext& ctx);

double delta_factor(Spin a, Spin b, Spin c, const QContext& ctx);

/// The q-6j symbol {j1 j2 j12; j3 j j23}_q. Returns 0 when any of the four
/// triangles (j1,j2,j12) (j3,j,j12) (j1,j,j23) (j2,j3,j23) is inadmissible.
double q6j(Spin j1, Spin j2, Spin j12, Spin j3, Spin j, Spin j23, const QContext& ctx);

/// Recoupling coefficient <((j1 j2)_{j12} j3)_j | (j1 (j2 j3)_{j23})_j>.
double elementary_duality(Spin j1, Spin j2, Spin j3, Spin j, Spin j12, Spin j23, const QContext& ctx);

/// Odd-coupled conformal block on 2n strands. Strands (2l+1, 2l+2) fuse to p_l;
/// p_0 (x) p_1 -> r_1, r_{i-1} (x) p_i -> r_i, and the chain closes on p_{n-1}
/// so only r_1..r_{n-3} are free and stored.
struct OddBasisState {
    std::vector<Spin> p;
    std::vector<Spin> r;
    friend bool operator==(const OddBasisState&, const OddBasisState&) = default;
    friend auto operator<=>(const OddBasisState&, const OddBasisState&) = default;
};

/// Even-coupled conformal block. Strands (2l, 2l+1) fuse to q_l (l = 1..n-1),
/// j_1 (x) q_1 -> s_1, s_{i-1} (x) q_i -> s_i, closing on s_{n-1} = j_{2n}.
/// Stored: q holds q_1..q_{n-1}, s holds s_1..s_{n-2}.
struct EvenBasisState {
    std::vector<Spin> q;
    std::vector<Spin> s;
    friend bool operator==(const EvenBasisState&, const EvenBasisState&) = default;
    friend auto operator<=>(const EvenBasisState&, const EvenBasisState&) = default;
};

/// Label r_i of the odd chain with r_0 = p_0, r_{n-2} = p_{n-1}, r_{n-1} = 0.
Spin odd_chain_label(const OddBasisState& st, int i);
/// Label s_i of the even chain with s_0 = j_1, s_{n-1} = j_{2n}.
Spin even_chain_label(const EvenBasisState& st, std::span<const Spin> colors, int i);

// Dense duality matrices are D x D; past this the engine refuses rather than exhausting memory.
inline constexpr int kMaxBasisDimension = 2048;

std::vector<OddBasisState> enumerate_odd_basis(std::span<const Spin> colors, const QContext& ctx);
std::vector<EvenBasisState> enumerate_even_basis(std::span<const Spin> colors, const QContext& ctx);

/// Dense real matrix, row-major.
struct RealMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    RealMatrix() = default;
    RealMatrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}
    double& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }
};

/// Change of basis from the odd to the even blocks: entries(e, o) = <even_e | odd_o>.
struct DualityMatrix {
    std::vector<Spin> colors;
    std::vector<OddBasisState> odd;
    std::vector<EvenBasisState> even;
    RealMatrix entries;
    /// Number of elementary (q-6j) factors per matrix element: 2n-3 for n >= 2.
    int elementary_factors = 0;
};

/// One entry <even | odd>, a product of elementary recoupling coefficients with no free sum.
double duality_element(std::span<const Spin> colors, const OddBasisState& odd, const EvenBasisState& even,
                       const QContext& ctx);

DualityMatrix duality_matrix(std::span<const Spin> colors, const QContext& ctx);

/// max |A A^T - I| over the matrix.
double orthogonality_residual(const RealMatrix& a);

}  // namespace qtop
