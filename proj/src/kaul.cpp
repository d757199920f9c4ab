#include "qtop/kaul.hpp"

#include <algorithm>
#include <cmath>

namespace qtop {

std::string describe(const Convention& conv) {
    std::string s = conv.sign == EigenvalueSign::AbsDifference ? "sign=(-1)^{|j-j'|-l}" : "sign=(-1)^{j+j'-l}";
    s += conv.positive_hand > 0 ? ", positive letter -> q^{+(cj+cj'-cl)/2}" : ", positive letter -> q^{-(cj+cj'-cl)/2}";
    return s;
}

cplx braiding_eigenvalue(Spin j, Spin jp, Spin channel, int hand, const QContext& ctx, EigenvalueSign rule) {
    if (!is_admissible(j, jp, channel, ctx)) throw DomainError("braiding_eigenvalue: inadmissible channel");
    const int twice_exp = rule == EigenvalueSign::AbsDifference ? std::abs(j.twice - jp.twice) - channel.twice
                                                                : j.twice + jp.twice - channel.twice;
    const Rational exponent = Rational(hand) * (casimir(j) + casimir(jp) - casimir(channel)) * Rational(1, 2);
    return static_cast<double>(sign_power(twice_exp / 2)) * q_power(exponent, ctx);
}

RepContext::RepContext(const QContext& ctx, Convention conv) : ctx_(ctx), conv_(conv) {
    ctx_.require_engine_level();
    if (conv.positive_hand != 1 && conv.positive_hand != -1) throw DomainError("positive_hand must be +1 or -1");
}

std::shared_ptr<const DualityMatrix> RepContext::duality(const std::vector<Spin>& colors) const {
    {
        std::lock_guard lock(mutex_);
        if (auto it = cache_.find(colors); it != cache_.end()) return it->second;
    }
    auto built = std::make_shared<const DualityMatrix>(duality_matrix(colors, ctx_));
    std::lock_guard lock(mutex_);
    return cache_.emplace(colors, std::move(built)).first->second;
}

cplx RepContext::eigenvalue(Spin j, Spin jp, Spin channel, int letter_sign) const {
    return braiding_eigenvalue(j, jp, channel, letter_sign * conv_.positive_hand, ctx_, conv_.sign);
}

double StateVector::norm() const {
    double s = 0.0;
    for (const cplx& a : amps) s += std::norm(a);
    return std::sqrt(s);
}

int StateVector::zero_index() const {
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const auto& b = basis[i];
        const bool zero = std::all_of(b.p.begin(), b.p.end(), [](Spin s) { return s.twice == 0; }) &&
                          std::all_of(b.r.begin(), b.r.end(), [](Spin s) { return s.twice == 0; });
        if (zero) return static_cast<int>(i);
    }
    return -1;
}

StateVector basis_state(const std::vector<Spin>& colors, int index, const QContext& ctx) {
    StateVector st;
    st.colors = colors;
    st.basis = enumerate_odd_basis(colors, ctx);
    if (index < 0 || index >= static_cast<int>(st.basis.size())) throw DomainError("basis index out of range");
    st.amps.assign(st.basis.size(), cplx{});
    st.amps[index] = 1.0;
    return st;
}

StateVector zero_state(const std::vector<Spin>& colors, const QContext& ctx) {
    StateVector st;
    st.colors = colors;
    st.basis = enumerate_odd_basis(colors, ctx);
    const int z = st.zero_index();
    if (z < 0) throw DomainError("no singlet sector: |0;0> is not an admissible state for these colors");
    st.amps.assign(st.basis.size(), cplx{});
    st.amps[z] = 1.0;
    return st;
}

StateVector apply_generator(const StateVector& state, Letter letter, const RepContext& rep, StepCounter* steps) {
    const int strands = static_cast<int>(state.colors.size());
    if (letter.index < 1 || letter.index >= strands) throw DomainError("generator index out of range");
    const int left = letter.index - 1;  // 0-based positions left, left+1
    StateVector out = state;
    std::swap(out.colors[left], out.colors[left + 1]);

    if (letter.index % 2 == 1) {
        const int l = left / 2;
        for (std::size_t b = 0; b < state.basis.size(); ++b)
            out.amps[b] *= rep.eigenvalue(state.colors[left], state.colors[left + 1], state.basis[b].p[l], letter.sign);
        if (steps) ++steps->diagonal;
        return out;
    }

    // even letter: rotate into the even-coupled frame, apply the diagonal braiding, rotate back
    const auto before = rep.duality(state.colors);
    const auto after = rep.duality(out.colors);
    const RealMatrix& a = before->entries;
    const RealMatrix& b = after->entries;
    const int dim = a.rows;
    out.basis = after->odd;
    std::vector<cplx> even(dim, cplx{});
    for (int e = 0; e < dim; ++e) {
        cplx acc{};
        for (int o = 0; o < a.cols; ++o) acc += a(e, o) * state.amps[o];
        even[e] = acc * rep.eigenvalue(state.colors[left], state.colors[left + 1],
                                       before->even[e].q[letter.index / 2 - 1], letter.sign);
    }
    for (int o = 0; o < b.cols; ++o) {
        cplx acc{};
        for (int e = 0; e < dim; ++e) acc += b(e, o) * even[e];
        out.amps[o] = acc;
    }
    if (steps) {
        steps->duality += 2LL * before->elementary_factors;
        ++steps->diagonal;
    }
    return out;
}

StateVector evolve(StateVector state, const BraidWord& word, const RepContext& rep, StepCounter* steps) {
    if (word.strands != static_cast<int>(state.colors.size())) throw DomainError("word and state strand counts differ");
    for (const Letter& l : word.letters) state = apply_generator(state, l, rep, steps);
    return state;
}

ComplexMatrix word_matrix(const std::vector<Spin>& colors, const BraidWord& word, const RepContext& rep) {
    const auto basis = enumerate_odd_basis(colors, rep.ctx());
    const int dim = static_cast<int>(basis.size());
    ComplexMatrix m(dim, dim);
    for (int c = 0; c < dim; ++c) {
        const StateVector out = evolve(basis_state(colors, c, rep.ctx()), word, rep);
        for (int r = 0; r < dim; ++r) m(r, c) = out.amps[r];
    }
    return m;
}

double unitarity_residual(const ComplexMatrix& m) {
    double worst = 0.0;
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.rows; ++j) {
            cplx dot{};
            for (int c = 0; c < m.cols; ++c) dot += m(i, c) * std::conj(m(j, c));
            worst = std::max(worst, std::abs(dot - (i == j ? 1.0 : 0.0)));
        }
    return worst;
}

double max_difference(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows != b.rows || a.cols != b.cols) return INFINITY;
    double worst = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) worst = std::max(worst, std::abs(a.data[i] - b.data[i]));
    return worst;
}

cplx vacuum_amplitude(const PlatBraid& plat, const RepContext& rep, StepCounter* steps) {
    validate_plat(plat);
    if (plat.colors.empty()) throw DomainError("colored plat required");
    const StateVector out = evolve(zero_state(plat.colors, rep.ctx()), plat.word, rep, steps);
    const int z = out.zero_index();
    if (z < 0) throw DomainError("no singlet sector at the bottom of the braid");
    return out.amps[z];
}

cplx colored_polynomial(const PlatBraid& plat, const RepContext& rep, StepCounter* steps) {
    const cplx amp = vacuum_amplitude(plat, rep, steps);
    double dims = 1.0;
    for (int i = 0; i < plat.caps(); ++i) dims *= q_dimension(plat.colors[2 * i], rep.ctx());
    return dims * amp;
}

cplx colored_polynomial(const PlatBraid& plat, const QContext& ctx) { return colored_polynomial(plat, RepContext(ctx)); }

cplx ambient_normalize(cplx value, int writhe, const QContext& ctx) {
    const cplx half = q_power(Rational(1, 2), ctx);
    return value * q_power(Rational(-3 * writhe, 4), ctx) / (half - 1.0 / half);
}

double accept_probability(const BraidWord& word, const std::vector<Spin>& colors, const RepContext& rep) {
    const StateVector out = evolve(zero_state(colors, rep.ctx()), word, rep);
    const int z = out.zero_index();
    return z < 0 ? 0.0 : std::norm(out.amps[z]);
}

double accept_probability(const BraidWord& word, const RepContext& rep) {
    return accept_probability(word, std::vector<Spin>(word.strands, Spin(1)), rep);
}

long long step_count(const BraidWord& word, int n) {
    long long steps = 0;
    for (const Letter& l : word.letters) steps += (l.index % 2 == 1) ? 1 : 2LL * (2 * n - 3) + 1;
    return steps;
}

ComplexityReport complexity_audit(const BraidWord& word, int n) {
    ComplexityReport r;
    r.steps = step_count(word, n);
    r.kappa = word.length();
    r.n = n;
    const double nt = 2.0 * n - 1.0;
    r.n_tilde_log = std::max(1.0, nt * std::log(nt));
    r.per_letter_bound = n >= 2 ? 2LL * (2 * n - 3) + 1 : 1;
    r.within_bound = r.steps <= r.constant * r.kappa * r.n_tilde_log + 1e-9 && r.steps <= r.kappa * r.per_letter_bound;
    return r;
}

PositivityReport transition_positivity(const std::vector<Spin>& colors, const RepContext& rep) {
    PositivityReport rep_out;
    const int strands = static_cast<int>(colors.size());
    for (int i = 1; i < strands; ++i) {
        const ComplexMatrix m = word_matrix(colors, BraidWord{strands, {{i, 1}}}, rep);
        for (const cplx& v : m.data) {
            ++rep_out.entries;
            if (std::abs(v) < 1e-14) ++rep_out.zero_entries;
        }
    }
    return rep_out;
}

}  // namespace qtop
