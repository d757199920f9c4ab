#pragma once

// Braid words, plat closures and diagram data (components, writhe, linking).

#include <optional>
#include <string>
#include <vector>

#include "qtop/qnum.hpp"

namespace qtop {

class ParseError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// sigma_index^sign; index is 1-based.
struct Letter {
    int index = 1;
    int sign = 1;
    friend bool operator==(const Letter&, const Letter&) = default;
};

struct BraidWord {
    int strands = 0;
    std::vector<Letter> letters;

    int length() const { return static_cast<int>(letters.size()); }
    friend bool operator==(const BraidWord&, const BraidWord&) = default;
};

/// Whitespace-separated signed generator indices, e.g. "2 -1 3".
BraidWord parse_braid(const std::string& text, int strands);
std::string format_braid(const BraidWord& word);
BraidWord inverse(const BraidWord& word);
BraidWord concatenate(const BraidWord& a, const BraidWord& b);
/// Places b to the right of a on a.strands + b.strands strands.
BraidWord juxtapose(const BraidWord& a, const BraidWord& b);

/// Position each top strand occupies at the bottom of the braid.
std::vector<int> strand_permutation(const BraidWord& word);

/// Component structure of the plat closure (caps join (1,2),(3,4),... at top and bottom).
struct LinkStructure {
    int components = 0;
    /// component of the strand starting at each top position
    std::vector<int> strand_to_component;
    /// +1 if the strand starting at top position i runs downward under the default orientation
    std::vector<int> strand_direction;
    /// crossings_between[s][t]: signed crossing count between components s and t (diagonal: self-writhe)
    std::vector<std::vector<int>> crossings_between;
    int writhe = 0;
};

struct PlatBraid {
    BraidWord word;
    /// one color per top strand; colors[2i] == colors[2i+1]
    std::vector<Spin> colors;
    /// optional per-component orientation flips (+1 keeps the default, -1 reverses)
    std::vector<int> orientations;

    int caps() const { return word.strands / 2; }
};

/// Validates the plat shape and the pairwise color pattern at the top.
void validate_plat(const PlatBraid& plat);

LinkStructure plat_components(const PlatBraid& plat);
int writhe(const PlatBraid& plat);
int linking_number(const PlatBraid& plat, int s, int t);

/// Colors the strands of a plat from per-component colors.
std::vector<Spin> colors_from_components(const BraidWord& word, const std::vector<Spin>& component_colors);

struct CatalogEntry {
    std::string name;
    int strands = 0;
    std::string word;
    std::string notes;

    BraidWord braid() const { return parse_braid(word, strands); }
};

/// Bundled plats: unknot, unknot4, hopf, trefoil, figure_eight, ...
const std::vector<CatalogEntry>& builtin_catalog();
std::optional<CatalogEntry> find_catalog_entry(const std::string& name);
std::vector<CatalogEntry> load_catalog(const std::string& path);
std::string catalog_to_json(const std::vector<CatalogEntry>& entries);

}  // namespace qtop
