#pragma once

// Brute-force reference computations. Nothing here calls the braid
// representation or recoupling code; only qnum arithmetic and plain data types.

#include <vector>

#include "qtop/braid.hpp"
#include "qtop/qnum.hpp"

namespace qtop::oracle {

inline constexpr int kMaxCrossings = 16;

struct BracketResult {
    cplx bracket;   ///< unnormalized <L>, unknot = loop value
    int writhe = 0;
    cplx jones;     ///< (-A^3)^{-w} <L>
};

/// State sum over all 2^kappa smoothings of the plat closure, A = q^{-1/4}.
BracketResult kauffman_bracket(const PlatBraid& plat, const QContext& ctx);

/// A = q^{-1/4} and the loop value -A^2 - A^{-2}.
cplx bracket_variable(const QContext& ctx);
cplx loop_value(const QContext& ctx);

/// Writhe of the plat closure, traced independently of the braid module.
int oracle_writhe(const PlatBraid& plat);

/// Classical SU(2) Racah-Wigner 6j symbol {j1 j2 j12; j3 j j23}; zero when inadmissible.
double classical_6j(Spin j1, Spin j2, Spin j12, Spin j3, Spin j, Spin j23);

/// Kashaev's closed form for |J_N(4_1)| at q = exp(2 pi i / N).
double kashaev_41(int n);

/// Lobachevsky function as sum_m sin(2 m theta) / (2 m^2).
double lobachevsky(double theta);

/// 6 Lambda(pi/3), the hyperbolic volume of the figure-eight complement.
double figure_eight_volume();

}  // namespace qtop::oracle
