// qtop: command-line driver for colored link polynomials, surgery invariants and the circuit model.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "qtop/braid.hpp"
#include "qtop/kaul.hpp"
#include "qtop/oracle.hpp"
#include "qtop/qcircuit.hpp"
#include "qtop/surgery.hpp"
#include "qtop/verify.hpp"

using namespace qtop;
using nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kFailed = 1, kParse = 2, kAdmissibility = 3, kBudget = 4 };

/// Input could not be understood (bad braid text, bad JSON, unknown names).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// 12 significant digits; magnitudes below 1e-12 are floating-point residue and print as 0.
double round12(double x) {
    if (std::abs(x) < 1e-12) return 0.0;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    const double r = std::strtod(buf, nullptr);
    return r == 0.0 ? 0.0 : r;
}

std::string csv_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", round12(x));
    return buf;
}

double default_tolerance() {
    if (const char* env = std::getenv("QTOP_TOL")) {
        char* end = nullptr;
        const double v = std::strtod(env, &end);
        if (end == env || *end != '\0' || !(v > 0)) throw UsageError(std::string("QTOP_TOL is not a positive number: ") + env);
        return v;
    }
    return 1e-9;
}

int default_workers() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

Spin parse_color(const std::string& text, bool twice) {
    try {
        if (!twice) return parse_spin(text);
        std::size_t used = 0;
        const int v = std::stoi(text, &used);
        if (used != text.size() || v < 0) throw UsageError("bad twice-color: " + text);
        return Spin(v);
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception&) {
        throw UsageError("bad color: " + text);
    }
}

BraidWord word_from(const std::string& catalog, const std::string& braid, int strands, std::string* name) {
    if (!catalog.empty()) {
        const auto entry = find_catalog_entry(catalog);
        if (!entry) throw UsageError("no catalog entry named " + catalog);
        if (name) *name = entry->name;
        return entry->braid();
    }
    if (strands < 1) throw UsageError("--braid needs --strands");
    if (name) *name = "braid";
    return parse_braid(braid, strands);
}

FramedLink link_from_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
        const int strands = j.at("strands").get<int>();
        const std::string word = j.value("word", std::string());
        const auto framings = j.value("framings", std::vector<int>{});
        const auto orientations = j.value("orientations", std::vector<int>{});
        const std::string name = j.value("name", std::string());
        if (strands == 0) {
            if (!word.empty() || !framings.empty()) throw UsageError("a 0-strand link has no word and no framings");
            FramedLink e = empty_link();
            e.name = name;
            return e;
        }
        return make_framed_link(parse_braid(word, strands), framings, orientations, name);
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("bad framed-link JSON: ") + e.what());
    }
}

void print_json(const ordered_json& j) { std::cout << j.dump() << '\n'; }

// ---------------------------------------------------------------- poly

struct PolyArgs {
    std::string catalog, braid;
    int strands = 0;
    int k = 0;
    std::vector<std::string> colors{"1/2"};
    bool twice = false;
    bool normalize = false;
};

int run_poly(const PolyArgs& a) {
    std::string name;
    const BraidWord word = word_from(a.catalog, a.braid, a.strands, &name);
    if (word.strands % 2 != 0) throw UsageError("plat closures need an even strand count");
    std::vector<Spin> comp_colors;
    for (const auto& c : a.colors) comp_colors.push_back(parse_color(c, a.twice));

    const QContext ctx(a.k, default_tolerance());
    const RepContext rep(ctx);
    for (Spin c : comp_colors) ctx.require_allowed(c);
    const int components = plat_components(PlatBraid{word, {}, {}}).components;
    if (comp_colors.size() == 1) comp_colors.assign(components, comp_colors[0]);
    if (static_cast<int>(comp_colors.size()) != components)
        throw UsageError("give one color, or one per component (" + std::to_string(components) + ")");
    const PlatBraid plat{word, colors_from_components(word, comp_colors), {}};

    StepCounter steps;
    cplx value = colored_polynomial(plat, rep, &steps);
    const int w = writhe(plat);
    if (a.normalize) value = ambient_normalize(value, w, ctx);
    ordered_json out;
    out["value_re"] = round12(value.real());
    out["value_im"] = round12(value.imag());
    out["writhe"] = w;
    out["basis_dim"] = enumerate_odd_basis(plat.colors, ctx).size();
    out["steps"] = steps.total();
    print_json(out);
    return kOk;
}

// ---------------------------------------------------------------- invariant

struct InvariantArgs {
    std::string link, catalog;
    std::vector<int> framings;
    int k = 0;
    bool circuit = false;
    long long shots = 0;
    double eta = 0.1;
    std::uint64_t seed = 1;
    int workers = 0;
};

int run_invariant(const InvariantArgs& a) {
    FramedLink link;
    if (!a.link.empty()) {
        link = link_from_json(a.link);
    } else if (!a.catalog.empty()) {
        std::string name;
        const BraidWord word = word_from(a.catalog, "", 0, &name);
        const int components = plat_components(PlatBraid{word, {}, {}}).components;
        auto framings = a.framings;
        if (framings.empty()) framings.assign(components, 0);
        link = make_framed_link(word, framings, {}, name);
    } else {
        throw UsageError("invariant needs --link or --catalog");
    }
    const QContext ctx(a.k, default_tolerance());
    const RepContext rep(ctx);
    ordered_json out;
    if (a.circuit) {
        const long long shots = a.shots > 0 ? a.shots : hoeffding_shots(a.eta);
        const InvariantEstimate est = circuit_invariant(link, rep, shots, a.seed);
        out["value_re"] = round12(est.value.real());
        out["value_im"] = round12(est.value.imag());
        out["shots"] = est.shots;
        out["eta"] = round12(est.eta);
        out["seed"] = est.seed;
    } else {
        const ManifoldInvariant inv = manifold_invariant(link, rep, a.workers > 0 ? a.workers : default_workers());
        out["value_re"] = round12(inv.value.real());
        out["value_im"] = round12(inv.value.imag());
        out["normalized_re"] = round12(inv.normalized.real());
        out["normalized_im"] = round12(inv.normalized.imag());
        out["signature"] = inv.signature;
        out["colorings"] = inv.colorings;
    }
    print_json(out);
    return kOk;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
    std::string suite;
    int k = 3;
    int samples = 100;
    std::uint64_t seed = 1;
    int workers = 0;
};

int run_verify(const VerifyArgs& a) {
    std::vector<std::string> suites;
    if (a.suite == "all") suites = suite_names();
    else if (is_suite(a.suite)) suites = {a.suite};
    else throw UsageError("unknown suite '" + a.suite + "'");
    SuiteOptions opt;
    opt.k = a.k;
    opt.tol = default_tolerance();
    opt.seed = a.seed;
    opt.samples = a.samples;
    opt.workers = a.workers > 0 ? a.workers : default_workers();
    QContext(a.k).require_engine_level();
    bool all = true;
    for (const auto& s : suites) {
        const SuiteResult r = run_suite(s, opt);
        ordered_json out;
        out["suite"] = r.suite;
        out["k"] = a.k;
        out["passed"] = r.passed;
        out["max_residual"] = round12(r.max_residual);
        out["checks"] = r.checks;
        if (!r.note.empty()) out["note"] = r.note;
        print_json(out);
        all = all && r.passed;
    }
    return all ? kOk : kFailed;
}

// ---------------------------------------------------------------- volume-scan

int run_volume_scan(int nmax) {
    if (nmax < 2) throw DomainError("volume-scan needs Nmax >= 2");
    const double target = oracle::figure_eight_volume();
    std::cout << "N,value,target,increasing\n";
    const int first = nmax == 2 ? 2 : 3;
    double prev = 0.0;
    for (int n = first; n <= nmax; ++n) {
        const double v = 2.0 * std::numbers::pi * std::log(oracle::kashaev_41(n)) / n;
        std::cout << n << ',' << csv_number(v) << ',' << csv_number(target) << ',';
        if (n > first) std::cout << (v > prev ? "true" : "false");
        std::cout << '\n';
        prev = v;
    }
    return kOk;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
    int n = 3;
    int k = 3;
    std::vector<int> kappas;
    std::uint64_t seed = 1;
    bool timing = false;
};

int run_bench(const BenchArgs& a) {
    const QContext ctx(a.k, default_tolerance());
    const RepContext rep(ctx);
    std::cout << "kappa,steps,audit_steps,bound" << (a.timing ? ",wall_ms" : "") << '\n';
    std::mt19937_64 rng(a.seed);
    std::vector<double> xs, ys;
    bool consistent = true;
    for (int kappa : a.kappas) {
        if (kappa < 0) throw UsageError("kappa must be nonnegative");
        const BraidWord word = benchmark_word(a.n, kappa, rng);
        StepCounter steps;
        const auto t0 = std::chrono::steady_clock::now();
        (void)vacuum_amplitude(PlatBraid{word, std::vector<Spin>(2 * a.n, Spin(1)), {}}, rep, &steps);
        const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        const ComplexityReport audit = complexity_audit(word, a.n);
        consistent = consistent && audit.steps == steps.total() && audit.steps <= audit.kappa * audit.per_letter_bound;
        std::cout << kappa << ',' << steps.total() << ',' << audit.steps << ',' << audit.kappa * audit.per_letter_bound;
        if (a.timing) std::cout << ',' << csv_number(ms);
        std::cout << '\n';
        xs.push_back(kappa);
        ys.push_back(static_cast<double>(steps.total()));
    }
    if (xs.size() >= 3) {
        const double r2 = linear_fit_r2(xs, ys);
        std::cerr << "r2=" << csv_number(r2) << '\n';
        if (r2 < 0.98) consistent = false;
    }
    return consistent ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Colored link polynomials, surgery invariants of 3-manifolds, and their circuit model"};
    app.require_subcommand(1);

    PolyArgs poly;
    auto* cmd_poly = app.add_subcommand("poly", "colored polynomial of a plat closure");
    cmd_poly->add_option("--catalog", poly.catalog, "catalog entry name");
    cmd_poly->add_option("--braid", poly.braid, "signed generator indices, e.g. \"2 2 -1 2\"");
    cmd_poly->add_option("--strands", poly.strands, "strand count for --braid");
    cmd_poly->add_option("--k", poly.k, "level")->required();
    cmd_poly->add_option("--color", poly.colors, "one color, or one per component");
    cmd_poly->add_flag("--twice", poly.twice, "colors are given as twice-values");
    cmd_poly->add_flag("--normalize", poly.normalize, "apply the writhe/unknot normalization");

    InvariantArgs inv;
    auto* cmd_inv = app.add_subcommand("invariant", "surgery invariant of a framed link");
    cmd_inv->add_option("--link", inv.link, "framed-link JSON file");
    cmd_inv->add_option("--catalog", inv.catalog, "catalog entry name");
    cmd_inv->add_option("--framing", inv.framings, "framings for --catalog (default 0)");
    cmd_inv->add_option("--k", inv.k, "level")->required();
    cmd_inv->add_flag("--circuit", inv.circuit, "estimate with the Hadamard test on the compiled circuit");
    cmd_inv->add_option("--shots", inv.shots, "shots per part (default from --eta)");
    cmd_inv->add_option("--eta", inv.eta, "target additive error per part");
    cmd_inv->add_option("--seed", inv.seed, "sampling seed");
    cmd_inv->add_option("--workers", inv.workers, "threads for the color sum");

    VerifyArgs ver;
    auto* cmd_ver = app.add_subcommand("verify", "run a property suite");
    cmd_ver->add_option("suite", ver.suite, "pentagon, unitarity, braid-relations, kirby, oracle, classical-limit, recognizer, all")
        ->required();
    cmd_ver->add_option("--k", ver.k, "highest level sampled");
    cmd_ver->add_option("--samples", ver.samples, "random samples");
    cmd_ver->add_option("--seed", ver.seed, "sampling seed");
    cmd_ver->add_option("--workers", ver.workers, "threads for color sums");

    int nmax = 10;
    auto* cmd_vol = app.add_subcommand("volume-scan", "2 pi ln|J_N(4_1)|/N against the hyperbolic volume");
    cmd_vol->add_option("Nmax", nmax, "largest N")->required();

    BenchArgs bench;
    auto* cmd_bench = app.add_subcommand("bench", "elementary-step counts against word length");
    cmd_bench->add_option("--n", bench.n, "caps (2n strands)");
    cmd_bench->add_option("--k", bench.k, "level");
    cmd_bench->add_option("--kappa", bench.kappas, "word lengths");
    cmd_bench->add_option("--seed", bench.seed, "word seed");
    cmd_bench->add_flag("--timing", bench.timing, "add a wall-time column");

    std::string catalog_file;
    auto* cmd_cat = app.add_subcommand("catalog", "print the bundled (or a given) catalog as JSON");
    cmd_cat->add_option("--file", catalog_file, "catalog JSON to load and re-emit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kParse;
    }

    try {
        if (*cmd_poly) return run_poly(poly);
        if (*cmd_inv) return run_invariant(inv);
        if (*cmd_ver) return run_verify(ver);
        if (*cmd_vol) return run_volume_scan(nmax);
        if (*cmd_bench) {
            if (bench.n < 1) throw DomainError("--n must be >= 1");
            return run_bench(bench);
        }
        if (*cmd_cat) {
            std::cout << catalog_to_json(catalog_file.empty() ? builtin_catalog() : load_catalog(catalog_file)) << '\n';
            return kOk;
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kParse;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kParse;
    } catch (const QubitBudgetError& e) {
        std::cerr << "qubit budget: " << e.what() << '\n';
        return kBudget;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kAdmissibility;
    }
    return kOk;
}
