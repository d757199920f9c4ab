#include "qtop/braid.hpp"

#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace qtop {

BraidWord parse_braid(const std::string& text, int strands) {
    if (strands < 2) throw ParseError("braid needs at least 2 strands");
    BraidWord word{strands, {}};
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(tok, &used);
        } catch (const std::logic_error&) {
            throw ParseError("not an integer: '" + tok + "'");
        }
        if (used != tok.size()) throw ParseError("not an integer: '" + tok + "'");
        if (v == 0) throw ParseError("generator index 0 is not allowed");
        const int index = v < 0 ? -v : v;
        if (index > strands - 1)
            throw ParseError("generator " + std::to_string(index) + " out of range for " + std::to_string(strands) +
                             " strands");
        word.letters.push_back({index, v < 0 ? -1 : 1});
    }
    return word;
}

std::string format_braid(const BraidWord& word) {
    std::string out;
    for (const Letter& l : word.letters) {
        if (!out.empty()) out += ' ';
        out += std::to_string(l.sign * l.index);
    }
    return out;
}

BraidWord inverse(const BraidWord& word) {
    BraidWord out{word.strands, {}};
    for (auto it = word.letters.rbegin(); it != word.letters.rend(); ++it) out.letters.push_back({it->index, -it->sign});
    return out;
}

BraidWord concatenate(const BraidWord& a, const BraidWord& b) {
    if (a.strands != b.strands) throw ParseError("concatenating braids with different strand counts");
    BraidWord out = a;
    out.letters.insert(out.letters.end(), b.letters.begin(), b.letters.end());
    return out;
}

BraidWord juxtapose(const BraidWord& a, const BraidWord& b) {
    BraidWord out{a.strands + b.strands, a.letters};
    for (Letter l : b.letters) out.letters.push_back({l.index + a.strands, l.sign});
    return out;
}

std::vector<int> strand_permutation(const BraidWord& word) {
    std::vector<int> at(word.strands);  // at[position] = strand
    std::iota(at.begin(), at.end(), 0);
    for (const Letter& l : word.letters) std::swap(at[l.index - 1], at[l.index]);
    std::vector<int> perm(word.strands);
    for (int pos = 0; pos < word.strands; ++pos) perm[at[pos]] = pos;
    return perm;
}

namespace {

void validate_word(const BraidWord& word) {
    for (const Letter& l : word.letters) {
        if (l.index < 1 || l.index > word.strands - 1) throw ParseError("generator index out of range");
        if (l.sign != 1 && l.sign != -1) throw ParseError("letter sign must be +1 or -1");
    }
}

}  // namespace

void validate_plat(const PlatBraid& plat) {
    const int strands = plat.word.strands;
    if (strands < 2 || strands % 2 != 0) throw ParseError("plat closure needs an even number of strands");
    validate_word(plat.word);
    if (plat.colors.empty()) return;
    if (static_cast<int>(plat.colors.size()) != strands) throw ParseError("one color per strand required");
    for (int i = 0; i < strands; i += 2)
        if (plat.colors[i] != plat.colors[i + 1]) throw DomainError("capped strands must share a color");
    const auto perm = strand_permutation(plat.word);
    std::vector<Spin> bottom(strands);
    for (int s = 0; s < strands; ++s) bottom[perm[s]] = plat.colors[s];
    for (int i = 0; i < strands; i += 2)
        if (bottom[i] != bottom[i + 1]) throw DomainError("cupped strands must share a color");
}

LinkStructure plat_components(const PlatBraid& plat) {
    validate_plat(plat);
    const int strands = plat.word.strands;
    const auto perm = strand_permutation(plat.word);
    std::vector<int> at_bottom(strands);
    for (int s = 0; s < strands; ++s) at_bottom[perm[s]] = s;

    LinkStructure out;
    out.strand_to_component.assign(strands, -1);
    out.strand_direction.assign(strands, 0);
    for (int start = 0; start < strands; ++start) {
        if (out.strand_to_component[start] >= 0) continue;
        const int comp = out.components++;
        // walk down strand, across the bottom cup, up the partner, across the top cap, ...
        int s = start;
        while (out.strand_to_component[s] < 0) {
            out.strand_to_component[s] = comp;
            out.strand_direction[s] = 1;
            const int partner = at_bottom[perm[s] ^ 1];
            out.strand_to_component[partner] = comp;
            out.strand_direction[partner] = -1;
            s = partner ^ 1;
        }
    }
    if (!plat.orientations.empty()) {
        if (static_cast<int>(plat.orientations.size()) != out.components)
            throw ParseError("orientations must list one entry per component");
        for (int s = 0; s < strands; ++s) out.strand_direction[s] *= plat.orientations[out.strand_to_component[s]];
    }

    out.crossings_between.assign(out.components, std::vector<int>(out.components, 0));
    std::vector<int> at(strands);
    std::iota(at.begin(), at.end(), 0);
    for (const Letter& l : plat.word.letters) {
        const int left = at[l.index - 1];
        const int right = at[l.index];
        const int eps = l.sign * out.strand_direction[left] * out.strand_direction[right];
        const int a = out.strand_to_component[left];
        const int b = out.strand_to_component[right];
        out.crossings_between[a][b] += eps;
        if (a != b) out.crossings_between[b][a] += eps;
        out.writhe += eps;
        std::swap(at[l.index - 1], at[l.index]);
    }
    return out;
}

int writhe(const PlatBraid& plat) { return plat_components(plat).writhe; }

int linking_number(const PlatBraid& plat, int s, int t) {
    if (s == t) throw DomainError("linking number of a component with itself is framing data");
    const LinkStructure ls = plat_components(plat);
    if (s < 0 || t < 0 || s >= ls.components || t >= ls.components) throw DomainError("component index out of range");
    return ls.crossings_between[s][t] / 2;
}

std::vector<Spin> colors_from_components(const BraidWord& word, const std::vector<Spin>& component_colors) {
    PlatBraid bare{word, {}, {}};
    const LinkStructure ls = plat_components(bare);
    if (static_cast<int>(component_colors.size()) != ls.components)
        throw DomainError("expected " + std::to_string(ls.components) + " component colors");
    std::vector<Spin> out(word.strands);
    for (int s = 0; s < word.strands; ++s) out[s] = component_colors[ls.strand_to_component[s]];
    return out;
}

const std::vector<CatalogEntry>& builtin_catalog() {
    static const std::vector<CatalogEntry> entries = {
        {"unknot", 2, "", "0 crossings"},
        {"unknot4", 4, "2", "unknot with one kink, 4-plat"},
        {"unlink2", 4, "", "two split unknots"},
        {"hopf", 4, "2 2", "Hopf link"},
        {"trefoil", 4, "2 2 2", "right-handed trefoil as the 4-plat of sigma_2^3"},
        {"trefoil6", 6, "2 2 2 4", "trefoil stabilised onto 6 strands, writhe differs by one"},
        {"figure_eight", 4, "2 2 -1 2", "figure-eight knot, 4-plat of the rational tangle 5/2"},
        {"hopf_unknot", 6, "2 2", "Hopf link split with an unknot"},
    };
    return entries;
}

std::optional<CatalogEntry> find_catalog_entry(const std::string& name) {
    for (const auto& e : builtin_catalog())
        if (e.name == name) return e;
    return std::nullopt;
}

std::vector<CatalogEntry> load_catalog(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open catalog " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("catalog is not valid JSON: ") + e.what());
    }
    std::vector<CatalogEntry> out;
    const auto& list = doc.is_array() ? doc : doc.at("links");
    for (const auto& item : list) {
        CatalogEntry e;
        e.name = item.at("name").get<std::string>();
        e.strands = item.at("strands").get<int>();
        e.word = item.value("word", std::string{});
        e.notes = item.value("notes", std::string{});
        e.braid();  // validates
        out.push_back(std::move(e));
    }
    return out;
}

std::string catalog_to_json(const std::vector<CatalogEntry>& entries) {
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& e : entries)
        doc.push_back({{"name", e.name}, {"strands", e.strands}, {"word", e.word}, {"notes", e.notes}});
    return doc.dump(2);
}

}  // namespace qtop
