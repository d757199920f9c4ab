#pragma once

// Framed links, linking matrices and the surgery invariant of closed 3-manifolds.

#include <string>
#include <vector>

#include "qtop/braid.hpp"
#include "qtop/kaul.hpp"

namespace qtop {

/// A plat-presented link with one framing per component. Colors are summed
/// over, so the plat's colors stay empty until a coloring is chosen.
struct FramedLink {
    PlatBraid plat;
    std::vector<int> framings;
    std::string name;

    LinkStructure structure() const { return plat_components(plat); }
    int components() const { return plat.word.strands == 0 ? 0 : structure().components; }
};

/// Checks the plat shape and that there is one framing per component.
FramedLink make_framed_link(BraidWord word, std::vector<int> framings, std::vector<int> orientations = {},
                            std::string name = {});

/// The 0-strand link; surgery on it yields S^3.
FramedLink empty_link();
FramedLink framed_unknot(int framing);

/// Side-by-side plats; components of `b` follow those of `a`.
FramedLink split_union(const FramedLink& a, const FramedLink& b);
FramedLink mirror(const FramedLink& link);

struct LinkingMatrix {
    int size = 0;
    std::vector<int> entries;
    int operator()(int s, int t) const { return entries[static_cast<std::size_t>(s) * size + t]; }
};

LinkingMatrix linking_matrix(const FramedLink& link);

/// Positive minus negative eigenvalues; |lambda| < 1e-9 counts as zero.
int signature(const LinkingMatrix& m);

/// q^{n c_j}
cplx framing_correction(Spin j, int n_twists, const QContext& ctx);

/// J[L; f, j]: the plat polynomial with component colors, moved from the
/// blackboard framing of the diagram to the requested framings.
cplx framed_polynomial(const FramedLink& link, const std::vector<Spin>& component_colors, const RepContext& rep);

struct ManifoldInvariant {
    cplx value;           ///< alpha^{-sigma} sum_j mu_j... J[L; f, j], empty link = 1
    cplx s3_reference;    ///< the same sum for the +1-framed unknot at this level
    cplx normalized;      ///< value / s3_reference
    int signature = 0;
    long long colorings = 0;  ///< admissible color assignments that contributed
};

/// Sum over all (k+1)^S colorings, split across `workers` threads.
ManifoldInvariant manifold_invariant(const FramedLink& link, const RepContext& rep, int workers = 1);
ManifoldInvariant manifold_invariant(const FramedLink& link, const QContext& ctx, int workers = 1);

enum class KirbyMove { I, II, III, IV };

/// II adds a disjoint -1-framed unknot, IV a +1-framed one; true when the
/// invariant is unchanged to relative 1e-8.
bool kirby_move_check(const FramedLink& link, KirbyMove move, const RepContext& rep, double rel_tol = 1e-8);

/// Framing arithmetic of moves I and III: f_i -> f_i -/+ lk(K_i, U)^2.
std::vector<int> twist_framings(const std::vector<int>& framings, const std::vector<int>& linking_with_unknot,
                                KirbyMove move);

}  // namespace qtop
