#include "qtop/qcircuit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include <json.hpp>

namespace qtop {

std::string Field::name() const {
    switch (kind) {
        case FieldKind::Color: return "j" + std::to_string(label + 1);
        case FieldKind::Channel: return "p" + std::to_string(label);
        case FieldKind::Chain: return "r" + std::to_string(label);
    }
    return "?";
}

RegisterLayout::RegisterLayout(int n, int k) : n_(n), k_(k) {
    if (n < 1) throw DomainError("register layout needs n >= 1");
    if (k < 1) throw DomainError("register layout needs k >= 1");
    bits_ = 0;
    while ((1 << bits_) < k + 1) ++bits_;
    for (int s = 0; s < 2 * n; ++s) fields_.push_back({FieldKind::Color, s});
    if (n == 2) fields_.push_back({FieldKind::Channel, 0});
    if (n >= 3) {
        for (int l = 0; l < n; ++l) fields_.push_back({FieldKind::Channel, l});
        for (int i = 1; i <= n - 3; ++i) fields_.push_back({FieldKind::Chain, i});
    }
}

int RegisterLayout::color_field(int strand) const {
    if (strand < 0 || strand >= 2 * n_) throw DomainError("strand index out of range");
    return strand;
}

int RegisterLayout::channel_field(int l) const {
    if (l < 0 || l >= n_) throw DomainError("channel index out of range");
    if (n_ == 1) return -1;
    if (n_ == 2) return 2 * n_;
    return 2 * n_ + l;
}

int RegisterLayout::chain_field(int i) const {
    if (i < 1 || i > n_ - 3) throw DomainError("only r_1..r_{n-3} are stored");
    return 3 * n_ + i - 1;
}

std::uint64_t RegisterLayout::put(std::uint64_t bits, int field, Spin value) const {
    if (value.twice < 0 || value.twice > k_) throw EncodingError("label " + to_string(value) + " exceeds the level");
    return bits | (static_cast<std::uint64_t>(value.twice) << (field * bits_));
}

std::uint64_t RegisterLayout::encode(const std::vector<Spin>& colors, const OddBasisState& st) const {
    if (static_cast<int>(colors.size()) != 2 * n_) throw EncodingError("expected one color per strand");
    if (static_cast<int>(st.p.size()) != n_) throw EncodingError("expected n channel labels");
    if (static_cast<int>(st.r.size()) != std::max(0, n_ - 3)) throw EncodingError("expected n-3 free chain labels");
    std::uint64_t bits = 0;
    for (int s = 0; s < 2 * n_; ++s) bits = put(bits, color_field(s), colors[s]);
    if (n_ == 1) {
        if (st.p[0].twice != 0) throw EncodingError("a single cap carries channel 0");
        return bits;
    }
    if (n_ == 2) {
        if (st.p[0] != st.p[1]) throw EncodingError("two caps need p_0 = p_1");
        return put(bits, channel_field(0), st.p[0]);
    }
    for (int l = 0; l < n_; ++l) bits = put(bits, channel_field(l), st.p[l]);
    for (int i = 1; i <= n_ - 3; ++i) bits = put(bits, chain_field(i), st.r[i - 1]);
    return bits;
}

std::uint64_t RegisterLayout::encode_even(const std::vector<Spin>& colors, const EvenBasisState& st) const {
    if (static_cast<int>(colors.size()) != 2 * n_) throw EncodingError("expected one color per strand");
    if (n_ < 2) throw EncodingError("even states need n >= 2");
    if (static_cast<int>(st.q.size()) != n_ - 1 || static_cast<int>(st.s.size()) != n_ - 2)
        throw EncodingError("expected n-1 even channels and n-2 chain labels");
    std::uint64_t bits = 0;
    for (int s = 0; s < 2 * n_; ++s) bits = put(bits, color_field(s), colors[s]);
    for (int t = 0; t < n_ - 1; ++t) bits = put(bits, internal_field(t), st.q[t]);
    for (int u = 0; u < n_ - 2; ++u) bits = put(bits, internal_field(n_ - 1 + u), st.s[u]);
    return bits;
}

std::pair<std::vector<Spin>, OddBasisState> RegisterLayout::decode(std::uint64_t bits) const {
    std::vector<Spin> colors;
    for (int s = 0; s < 2 * n_; ++s) colors.emplace_back(field_value(bits, color_field(s)));
    OddBasisState st;
    if (n_ == 1) {
        st.p = {Spin(0)};
    } else if (n_ == 2) {
        const Spin p(field_value(bits, channel_field(0)));
        st.p = {p, p};
    } else {
        for (int l = 0; l < n_; ++l) st.p.emplace_back(field_value(bits, channel_field(l)));
        for (int i = 1; i <= n_ - 3; ++i) st.r.emplace_back(field_value(bits, chain_field(i)));
    }
    return {colors, st};
}

Gate swap_gate(int field_a, int field_b) {
    Gate g;
    g.kind = GateKind::Swap;
    g.targets = {field_a, field_b};
    return g;
}

Gate copy_gate(int source, int target) {
    Gate g;
    g.kind = GateKind::Copy;
    g.controls = {source};
    g.targets = {target};
    return g;
}

void Circuit::append(const Circuit& other) {
    if (other.layout.total_qubits() != layout.total_qubits() || other.layout.n() != layout.n())
        throw DomainError("cannot append circuits on different registers");
    gates.insert(gates.end(), other.gates.begin(), other.gates.end());
}

std::size_t Circuit::count(GateKind kind) const {
    return static_cast<std::size_t>(std::count_if(gates.begin(), gates.end(), [kind](const Gate& g) { return g.kind == kind; }));
}

std::string Circuit::dump() const {
    std::ostringstream out;
    const int b = layout.bits_per_label();
    auto qubits = [&](const std::vector<int>& fields) {
        std::string s;
        for (int f : fields)
            for (int bit = 0; bit < b; ++bit) s += (s.empty() ? "" : ",") + std::to_string(f * b + bit);
        return s;
    };
    auto names = [&](const std::vector<int>& fields) {
        std::string s;
        for (int f : fields) s += (s.empty() ? "" : ":") + layout.fields()[f].name();
        return s;
    };
    for (const Gate& g : gates) {
        switch (g.kind) {
            case GateKind::Swap: out << "SWAP " << qubits(g.targets) << " fields=" << names(g.targets); break;
            case GateKind::Copy:
                out << "COPY " << qubits(g.targets) << " from=" << names(g.controls) << " to=" << names(g.targets);
                break;
            case GateKind::Phase: {
                const auto nontrivial = std::count_if(g.phases->begin(), g.phases->end(),
                                                      [](cplx z) { return std::abs(z - 1.0) > 1e-15; });
                out << "PHASE " << qubits(g.controls) << " on=" << names(g.controls) << " entries=" << nontrivial;
                break;
            }
            case GateKind::Multiplexor: {
                out << "MUX " << qubits(g.targets) << " target=" << names(g.targets);
                if (!g.controls.empty()) out << " controls=" << names(g.controls);
                out << " blocks=" << g.blocks->size();
                break;
            }
        }
        if (!g.label.empty()) out << " label=" << g.label;
        out << '\n';
    }
    return out.str();
}

namespace {

int joint_size(const RegisterLayout& layout, std::size_t controls) {
    return 1 << (layout.bits_per_label() * static_cast<int>(controls));
}

std::vector<int> split_key(int key, std::size_t controls, int bits) {
    std::vector<int> v(controls);
    for (std::size_t c = 0; c < controls; ++c) v[c] = (key >> (bits * static_cast<int>(c))) & ((1 << bits) - 1);
    return v;
}

Gate make_phase(const RegisterLayout& layout, std::vector<int> controls, std::string label,
                const std::function<cplx(const std::vector<int>&)>& value) {
    Gate g;
    g.kind = GateKind::Phase;
    g.controls = std::move(controls);
    g.label = std::move(label);
    const int size = joint_size(layout, g.controls.size());
    auto table = std::make_shared<std::vector<cplx>>(size, cplx(1.0));
    for (int key = 0; key < size; ++key) {
        const auto v = split_key(key, g.controls.size(), layout.bits_per_label());
        if (std::any_of(v.begin(), v.end(), [&](int x) { return x > layout.k(); })) continue;
        (*table)[key] = value(v);
    }
    g.phases = std::move(table);
    return g;
}

/// A recoupling step for one control pattern: inputs and outputs are target
/// values, matrix(o, i) the amplitude from inputs[i] to outputs[o].
struct Block {
    std::vector<int> inputs;
    std::vector<int> outputs;
    std::vector<std::vector<double>> matrix;
};

// Each block stays a dense controlled unitary; a two-qubit-gate decomposition would replace this builder.
Gate make_mux(const RegisterLayout& layout, std::vector<int> controls, int target, std::string label,
              const std::function<std::optional<Block>(const std::vector<int>&)>& build) {
    Gate g;
    g.kind = GateKind::Multiplexor;
    g.controls = std::move(controls);
    g.targets = {target};
    g.label = std::move(label);
    const int d = 1 << layout.bits_per_label();
    const int size = joint_size(layout, g.controls.size());
    auto block_of = std::make_shared<std::vector<int>>(size, -1);
    auto blocks = std::make_shared<std::vector<std::vector<cplx>>>();
    for (int key = 0; key < size; ++key) {
        const auto v = split_key(key, g.controls.size(), layout.bits_per_label());
        if (std::any_of(v.begin(), v.end(), [&](int x) { return x > layout.k(); })) continue;
        const auto blk = build(v);
        if (!blk || blk->inputs.empty()) continue;
        if (blk->inputs.size() != blk->outputs.size()) throw DomainError("recoupling block is not square");
        std::vector<cplx> m(static_cast<std::size_t>(d) * d, cplx{});
        std::vector<bool> in_set(d, false), out_set(d, false);
        for (int x : blk->inputs) in_set[x] = true;
        for (int x : blk->outputs) out_set[x] = true;
        for (std::size_t c = 0; c < blk->inputs.size(); ++c)
            for (std::size_t r = 0; r < blk->outputs.size(); ++r)
                m[static_cast<std::size_t>(blk->outputs[r]) * d + blk->inputs[c]] = blk->matrix[r][c];
        // patterns outside inputs U outputs stay put; the leftovers of the union pair up in order
        std::vector<int> free_in, free_out;
        for (int x = 0; x < d; ++x) {
            if (!in_set[x] && !out_set[x]) m[static_cast<std::size_t>(x) * d + x] = 1.0;
            if (!in_set[x] && out_set[x]) free_in.push_back(x);
            if (in_set[x] && !out_set[x]) free_out.push_back(x);
        }
        for (std::size_t i = 0; i < free_in.size(); ++i)
            m[static_cast<std::size_t>(free_out[i]) * d + free_in[i]] = 1.0;
        (*block_of)[key] = static_cast<int>(blocks->size());
        blocks->push_back(std::move(m));
    }
    g.block_of = std::move(block_of);
    g.blocks = std::move(blocks);
    return g;
}

Gate adjoint(const Gate& g, int d) {
    Gate out = g;
    if (g.kind == GateKind::Phase) {
        auto t = std::make_shared<std::vector<cplx>>(*g.phases);
        for (cplx& z : *t) z = std::conj(z);
        out.phases = std::move(t);
    } else if (g.kind == GateKind::Multiplexor) {
        auto bl = std::make_shared<std::vector<std::vector<cplx>>>(*g.blocks);
        for (auto& m : *bl) {
            std::vector<cplx> t(m.size());
            for (int r = 0; r < d; ++r)
                for (int c = 0; c < d; ++c) t[static_cast<std::size_t>(c) * d + r] = std::conj(m[static_cast<std::size_t>(r) * d + c]);
            m = std::move(t);
        }
        out.blocks = std::move(bl);
        if (!out.label.empty()) out.label += "^-1";
    }
    return out;
}

bool adm(int a, int b, int c, const QContext& ctx) { return is_admissible(Spin(a), Spin(b), Spin(c), ctx); }

std::vector<int> labels_where(int k, const std::function<bool(int)>& pred) {
    std::vector<int> out;
    for (int x = 0; x <= k; ++x)
        if (pred(x)) out.push_back(x);
    return out;
}

}  // namespace

Circuit compile_odd(Letter letter, const RegisterLayout& layout, const RepContext& rep) {
    const int strands = 2 * layout.n();
    if (letter.index < 1 || letter.index >= strands || letter.index % 2 == 0)
        throw DomainError("compile_odd needs an odd generator on this register");
    const int l = (letter.index - 1) / 2;
    const int a = layout.color_field(letter.index - 1);
    const int b = layout.color_field(letter.index);
    const int ch = layout.channel_field(l);
    std::vector<int> controls = {a, b};
    if (ch >= 0) controls.push_back(ch);
    const QContext& ctx = rep.ctx();
    Circuit c(layout);
    c.gates.push_back(make_phase(layout, controls, "sigma" + std::to_string(letter.sign * letter.index),
                                 [&](const std::vector<int>& v) {
                                     const int channel = v.size() > 2 ? v[2] : 0;
                                     if (!adm(v[0], v[1], channel, ctx)) return cplx(1.0);
                                     return rep.eigenvalue(Spin(v[0]), Spin(v[1]), Spin(channel), letter.sign);
                                 }));
    c.gates.push_back(swap_gate(a, b));
    return c;
}

Circuit compile_duality(DualityDirection direction, const RegisterLayout& layout, const RepContext& rep) {
    Circuit c(layout);
    const int n = layout.n();
    if (n < 2) return c;
    const QContext& ctx = rep.ctx();
    const int k = layout.k();
    const auto ed = [&](int j1, int j2, int j3, int j, int j12, int j23) {
        return elementary_duality(Spin(j1), Spin(j2), Spin(j3), Spin(j), Spin(j12), Spin(j23), ctx);
    };

    // odd tree -> left comb: p_i becomes s_i for i = 1..n-2
    for (int i = 1; i <= n - 2; ++i) {
        const int r_prev = i == 1 ? layout.channel_field(0) : layout.chain_field(i - 1);
        const int r_next = i <= n - 3 ? layout.chain_field(i) : layout.channel_field(n - 1);
        const std::vector<int> controls = {r_prev, r_next, layout.color_field(2 * i), layout.color_field(2 * i + 1)};
        c.gates.push_back(make_mux(layout, controls, layout.channel_field(i), "odd-comb" + std::to_string(i),
                                   [&](const std::vector<int>& v) -> std::optional<Block> {
                                       const int rp = v[0], rn = v[1], ja = v[2], jb = v[3];
                                       Block blk;
                                       blk.inputs = labels_where(k, [&](int p) { return adm(ja, jb, p, ctx) && adm(rp, p, rn, ctx); });
                                       blk.outputs = labels_where(k, [&](int s) { return adm(rp, ja, s, ctx) && adm(s, jb, rn, ctx); });
                                       for (int s : blk.outputs) {
                                           std::vector<double> row;
                                           for (int p : blk.inputs) row.push_back(ed(rp, ja, jb, rn, s, p));
                                           blk.matrix.push_back(std::move(row));
                                       }
                                       return blk;
                                   }));
    }
    // left comb -> even tree: a_{2i} becomes q_i for i = 1..n-1; the closing sign
    // of the odd tree rides on the last step
    for (int i = 1; i <= n - 1; ++i) {
        const int target = i == 1 ? layout.channel_field(0) : (i <= n - 2 ? layout.chain_field(i - 1) : layout.channel_field(n - 1));
        const int s_prev = i == 1 ? layout.color_field(0) : layout.channel_field(i - 1);
        const int s_next = i <= n - 2 ? layout.channel_field(i) : layout.color_field(2 * n - 1);
        const std::vector<int> controls = {s_prev, s_next, layout.color_field(2 * i - 1), layout.color_field(2 * i)};
        const bool last = i == n - 1;
        c.gates.push_back(make_mux(layout, controls, target, "comb-even" + std::to_string(i),
                                   [&, last](const std::vector<int>& v) -> std::optional<Block> {
                                       const int sp = v[0], sn = v[1], ja = v[2], jb = v[3];
                                       Block blk;
                                       blk.inputs = labels_where(k, [&](int a) { return adm(sp, ja, a, ctx) && adm(a, jb, sn, ctx); });
                                       blk.outputs = labels_where(k, [&](int q) { return adm(ja, jb, q, ctx) && adm(sp, q, sn, ctx); });
                                       for (int q : blk.outputs) {
                                           std::vector<double> row;
                                           for (int a : blk.inputs)
                                               row.push_back(ed(sp, ja, jb, sn, a, q) * (last ? ed(a, jb, sn, 0, sn, a) : 1.0));
                                           blk.matrix.push_back(std::move(row));
                                       }
                                       return blk;
                                   }));
    }
    // slots now hold q_1, s_1..s_{n-2}, q_{n-1}, q_2..q_{n-2}; sort into q_1..q_{n-1}, s_1..s_{n-2}
    if (n >= 3) {
        const int slots = layout.internal_slots();
        std::vector<int> cur(slots);  // q_i -> i, s_i -> -i
        cur[0] = 1;
        for (int i = 1; i <= n - 2; ++i) cur[i] = -i;
        cur[n - 1] = n - 1;
        for (int m = 1; m <= n - 3; ++m) cur[n - 1 + m] = m + 1;
        std::vector<int> want(slots);
        for (int t = 0; t < n - 1; ++t) want[t] = t + 1;
        for (int u = 0; u < n - 2; ++u) want[n - 1 + u] = -(u + 1);
        for (int t = 0; t < slots; ++t) {
            if (cur[t] == want[t]) continue;
            const int u = static_cast<int>(std::find(cur.begin() + t + 1, cur.end(), want[t]) - cur.begin());
            c.gates.push_back(swap_gate(layout.internal_field(t), layout.internal_field(u)));
            std::swap(cur[t], cur[u]);
        }
    }
    if (direction == DualityDirection::EvenToOdd) {
        std::reverse(c.gates.begin(), c.gates.end());
        for (Gate& g : c.gates) g = adjoint(g, 1 << layout.bits_per_label());
    }
    return c;
}

Circuit compile_braid(const BraidWord& word, const RegisterLayout& layout, const RepContext& rep) {
    if (word.strands != 2 * layout.n()) throw DomainError("word and register strand counts differ");
    Circuit c(layout);
    if (word.letters.empty()) return c;
    const bool any_even = std::any_of(word.letters.begin(), word.letters.end(), [](const Letter& l) { return l.index % 2 == 0; });
    Circuit forward(layout), backward(layout);
    if (any_even) {
        forward = compile_duality(DualityDirection::OddToEven, layout, rep);
        backward = compile_duality(DualityDirection::EvenToOdd, layout, rep);
    }
    const QContext& ctx = rep.ctx();
    for (const Letter& l : word.letters) {
        if (l.index % 2 == 1) {
            c.append(compile_odd(l, layout, rep));
            continue;
        }
        const int half = l.index / 2;
        const int a = layout.color_field(l.index - 1);
        const int b = layout.color_field(l.index);
        c.append(forward);
        c.gates.push_back(make_phase(layout, {a, b, layout.internal_field(half - 1)},
                                     "sigma" + std::to_string(l.sign * l.index), [&](const std::vector<int>& v) {
                                         if (!adm(v[0], v[1], v[2], ctx)) return cplx(1.0);
                                         return rep.eigenvalue(Spin(v[0]), Spin(v[1]), Spin(v[2]), l.sign);
                                     }));
        c.gates.push_back(swap_gate(a, b));
        c.append(backward);
    }
    return c;
}

Circuit compile_color_restore(const BraidWord& word, const RegisterLayout& layout) {
    if (word.strands != 2 * layout.n()) throw DomainError("word and register strand counts differ");
    const auto perm = strand_permutation(word);
    std::vector<int> at(word.strands);  // strand whose color sits at each position
    for (int s = 0; s < word.strands; ++s) at[perm[s]] = s;
    Circuit c(layout);
    for (int t = 0; t < word.strands; ++t) {
        if (at[t] == t) continue;
        const int u = static_cast<int>(std::find(at.begin() + t + 1, at.end(), t) - at.begin());
        c.gates.push_back(swap_gate(layout.color_field(t), layout.color_field(u)));
        std::swap(at[t], at[u]);
    }
    return c;
}

Superposition prepare_weighted_superposition(const std::vector<std::vector<int>>& component_fields,
                                             const std::vector<std::vector<double>>& weights,
                                             const RegisterLayout& layout) {
    if (component_fields.size() != weights.size()) throw DomainError("one weight list per component");
    Superposition out{Circuit(layout), 1.0};
    const int d = 1 << layout.bits_per_label();
    for (std::size_t s = 0; s < component_fields.size(); ++s) {
        const auto& fields = component_fields[s];
        if (fields.empty()) throw DomainError("component without fields");
        double total = 0.0;
        std::vector<double> amp(d, 0.0);
        for (int v = 0; v <= layout.k() && v < static_cast<int>(weights[s].size()); ++v) {
            if (weights[s][v] < 0) throw DomainError("superposition weights must be nonnegative");
            total += weights[s][v];
        }
        if (total <= 0) throw DomainError("superposition weights sum to zero");
        for (int v = 0; v <= layout.k() && v < static_cast<int>(weights[s].size()); ++v) amp[v] = std::sqrt(weights[s][v] / total);
        out.norm *= total;
        // Householder reflection taking |0> to the amplitude vector
        std::vector<double> u(amp);
        u[0] -= 1.0;
        double uu = 0.0;
        for (double x : u) uu += x * x;
        std::vector<cplx> m(static_cast<std::size_t>(d) * d, cplx{});
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c)
                m[static_cast<std::size_t>(r) * d + c] = (r == c ? 1.0 : 0.0) - (uu > 1e-30 ? 2.0 * u[r] * u[c] / uu : 0.0);
        Gate g;
        g.kind = GateKind::Multiplexor;
        g.targets = {fields[0]};
        g.label = "prepare" + std::to_string(s);
        g.block_of = std::make_shared<std::vector<int>>(1, 0);
        g.blocks = std::make_shared<std::vector<std::vector<cplx>>>(1, std::move(m));
        out.circuit.gates.push_back(std::move(g));
        for (std::size_t f = 1; f < fields.size(); ++f) out.circuit.gates.push_back(copy_gate(fields[0], fields[f]));
    }
    return out;
}

Superposition prepare_superposition(const std::vector<std::vector<int>>& component_fields, const QContext& ctx,
                                    const RegisterLayout& layout) {
    std::vector<double> w(layout.k() + 1);
    for (int v = 0; v <= layout.k(); ++v) w[v] = mu(Spin(v), ctx);
    return prepare_weighted_superposition(component_fields, std::vector<std::vector<double>>(component_fields.size(), w),
                                          layout);
}

double Statevector::norm() const {
    double s = 0.0;
    for (const cplx& a : amps) s += std::norm(a);
    return std::sqrt(s);
}

Statevector basis_statevector(int qubits, std::uint64_t bits) {
    if (qubits > kMaxSimulatedQubits)
        throw QubitBudgetError(std::to_string(qubits) + " qubits exceed the simulator budget of " +
                               std::to_string(kMaxSimulatedQubits));
    Statevector st;
    st.qubits = qubits;
    st.amps.assign(std::size_t{1} << qubits, cplx{});
    if (bits >= st.amps.size()) throw EncodingError("basis index outside the register");
    st.amps[bits] = 1.0;
    return st;
}

namespace {

void apply(const Gate& g, Statevector& st, const RegisterLayout& layout) {
    const int b = layout.bits_per_label();
    const std::uint64_t mask = (1ULL << b) - 1;
    const std::size_t size = st.amps.size();
    const auto val = [&](std::uint64_t idx, int f) { return (idx >> (f * b)) & mask; };
    const auto key_of = [&](std::uint64_t idx) {
        std::uint64_t key = 0;
        for (std::size_t c = 0; c < g.controls.size(); ++c) key |= val(idx, g.controls[c]) << (b * c);
        return key;
    };
    switch (g.kind) {
        case GateKind::Swap: {
            const int fa = g.targets[0], fb = g.targets[1];
            for (std::uint64_t idx = 0; idx < size; ++idx) {
                const auto va = val(idx, fa), vb = val(idx, fb);
                if (va >= vb) continue;
                const std::uint64_t other = (idx & ~(mask << (fa * b)) & ~(mask << (fb * b))) | (vb << (fa * b)) | (va << (fb * b));
                std::swap(st.amps[idx], st.amps[other]);
            }
            break;
        }
        case GateKind::Copy: {
            const int src = g.controls[0], dst = g.targets[0];
            for (std::uint64_t idx = 0; idx < size; ++idx) {
                const std::uint64_t other = idx ^ (val(idx, src) << (dst * b));
                if (idx < other) std::swap(st.amps[idx], st.amps[other]);
            }
            break;
        }
        case GateKind::Phase:
            for (std::uint64_t idx = 0; idx < size; ++idx) st.amps[idx] *= (*g.phases)[key_of(idx)];
            break;
        case GateKind::Multiplexor: {
            const int t = g.targets[0];
            const int d = 1 << b;
            std::vector<cplx> in(d), out(d);
            for (std::uint64_t idx = 0; idx < size; ++idx) {
                if (val(idx, t) != 0) continue;
                const int blk = (*g.block_of)[g.controls.empty() ? 0 : key_of(idx)];
                if (blk < 0) continue;
                const auto& m = (*g.blocks)[blk];
                for (int v = 0; v < d; ++v) in[v] = st.amps[idx | (static_cast<std::uint64_t>(v) << (t * b))];
                for (int r = 0; r < d; ++r) {
                    cplx acc{};
                    for (int c = 0; c < d; ++c) acc += m[static_cast<std::size_t>(r) * d + c] * in[c];
                    out[r] = acc;
                }
                for (int v = 0; v < d; ++v) st.amps[idx | (static_cast<std::uint64_t>(v) << (t * b))] = out[v];
            }
            break;
        }
    }
}

}  // namespace

Statevector simulate(const Circuit& circuit, Statevector state) {
    if (circuit.layout.total_qubits() > kMaxSimulatedQubits)
        throw QubitBudgetError(std::to_string(circuit.layout.total_qubits()) + " qubits exceed the simulator budget of " +
                               std::to_string(kMaxSimulatedQubits));
    if (state.qubits != circuit.layout.total_qubits()) throw DomainError("statevector does not match the register");
    for (const Gate& g : circuit.gates) apply(g, state, circuit.layout);
    return state;
}

Statevector simulate(const Circuit& circuit, std::uint64_t input) {
    return simulate(circuit, basis_statevector(circuit.layout.total_qubits(), input));
}

cplx expectation(const Circuit& circuit, std::uint64_t bra, std::uint64_t ket) {
    const Statevector out = simulate(circuit, ket);
    if (bra >= out.amps.size()) throw EncodingError("basis index outside the register");
    return out.amps[bra];
}

cplx expectation(const Circuit& circuit, const Statevector& state) {
    const Statevector out = simulate(circuit, state);
    cplx z{};
    for (std::size_t i = 0; i < out.amps.size(); ++i) z += std::conj(state.amps[i]) * out.amps[i];
    return z;
}

std::vector<cplx> restricted_matrix(const Circuit& circuit, const std::vector<std::uint64_t>& rows,
                                    const std::vector<std::uint64_t>& cols) {
    std::vector<cplx> m(rows.size() * cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) {
        const Statevector out = simulate(circuit, cols[c]);
        for (std::size_t r = 0; r < rows.size(); ++r) m[r * cols.size() + c] = out.amps[rows[r]];
    }
    return m;
}

long long hoeffding_shots(double eta) {
    if (!(eta > 0)) throw DomainError("eta must be positive");
    return static_cast<long long>(std::ceil(2.0 * std::log(8.0) / (eta * eta)));
}

double hoeffding_eta(long long shots) {
    if (shots < 1) throw DomainError("shots must be >= 1");
    return std::sqrt(2.0 * std::log(8.0) / static_cast<double>(shots));
}

HadamardEstimate hadamard_test(const Circuit& circuit, const Statevector& ket, long long shots, EstimatePart part,
                               std::uint64_t seed) {
    if (shots < 1) throw DomainError("shots must be >= 1");
    const cplx z = expectation(circuit, ket);
    const double exact = part == EstimatePart::Real ? z.real() : z.imag();
    // ancilla reads 0 with probability (1 + Re z)/2, or (1 + Im z)/2 after the quarter phase
    const double p0 = std::clamp(0.5 * (1.0 + exact), 0.0, 1.0);
    std::mt19937_64 rng(seed);
    long long zeros = 0;
    for (long long s = 0; s < shots; ++s) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        zeros += u < p0;
    }
    HadamardEstimate est;
    est.estimate = (2.0 * static_cast<double>(zeros) - static_cast<double>(shots)) / static_cast<double>(shots);
    est.shots = shots;
    est.eta = hoeffding_eta(shots);
    est.seed = seed;
    est.exact = exact;
    return est;
}

HadamardEstimate hadamard_test(const Circuit& circuit, std::uint64_t ket, long long shots, EstimatePart part,
                               std::uint64_t seed) {
    return hadamard_test(circuit, basis_statevector(circuit.layout.total_qubits(), ket), shots, part, seed);
}

std::string InvariantEstimate::to_json() const {
    nlohmann::json j = {{"value_re", value.real()}, {"value_im", value.imag()}, {"shots", shots}, {"eta", eta}, {"seed", seed}};
    return j.dump();
}

InvariantEstimate circuit_invariant(const FramedLink& link, const RepContext& rep, long long shots, std::uint64_t seed) {
    InvariantEstimate out;
    out.shots = shots;
    out.seed = seed;
    const int components = link.components();
    if (components == 0) {
        out.value = out.exact = 1.0;
        return out;
    }
    const QContext& ctx = rep.ctx();
    const RegisterLayout layout(link.plat.word.strands / 2, ctx.k());
    out.qubits = layout.total_qubits();
    if (out.qubits > kMaxSimulatedQubits)
        throw QubitBudgetError(std::to_string(out.qubits) + " qubits exceed the simulator budget of " +
                               std::to_string(kMaxSimulatedQubits));
    const LinkStructure ls = link.structure();

    std::vector<std::vector<int>> fields(components);
    for (int s = 0; s < link.plat.word.strands; ++s) fields[ls.strand_to_component[s]].push_back(layout.color_field(s));
    std::vector<int> caps(components, 0);
    for (int c = 0; c < link.plat.word.strands / 2; ++c) ++caps[ls.strand_to_component[2 * c]];
    // weights mu_j [2j+1]^caps absorb the quantum dimensions of the plat closure
    std::vector<std::vector<double>> weights(components, std::vector<double>(ctx.k() + 1));
    for (int s = 0; s < components; ++s)
        for (int v = 0; v <= ctx.k(); ++v) weights[s][v] = mu(Spin(v), ctx) * std::pow(q_dimension(Spin(v), ctx), caps[s]);
    const Superposition prep = prepare_weighted_superposition(fields, weights, layout);

    Circuit body(layout);
    std::vector<int> reps;
    for (const auto& f : fields) reps.push_back(f[0]);
    body.gates.push_back(make_phase(layout, reps, "framing", [&](const std::vector<int>& v) {
        cplx z = 1.0;
        for (int s = 0; s < components; ++s)
            z *= framing_correction(Spin(v[s]), link.framings[s] - ls.crossings_between[s][s], ctx);
        return z;
    }));
    body.append(compile_braid(link.plat.word, layout, rep));
    body.append(compile_color_restore(link.plat.word, layout));

    const Statevector psi = simulate(prep.circuit, std::uint64_t{0});
    const HadamardEstimate re = hadamard_test(body, psi, shots, EstimatePart::Real, seed);
    const HadamardEstimate im = hadamard_test(body, psi, shots, EstimatePart::Imag, seed + 1);
    const int sigma = signature(linking_matrix(link));
    const cplx scale = std::pow(alpha(ctx), -sigma) * prep.norm;
    out.value = scale * cplx(re.estimate, im.estimate);
    out.exact = scale * cplx(re.exact, im.exact);
    out.eta = std::abs(scale) * re.eta;
    return out;
}

}  // namespace qtop
