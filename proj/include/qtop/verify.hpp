#pragma once

// Property suites shared by the command line and the acceptance driver.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qtop/kaul.hpp"

namespace qtop {

struct SuiteOptions {
    int k = 3;
    double tol = 1e-9;
    std::uint64_t seed = 1;
    int samples = 100;
    int workers = 1;
};

struct SuiteResult {
    std::string suite;
    bool passed = false;
    double max_residual = 0.0;
    long long checks = 0;
    std::string note;
};

const std::vector<std::string>& suite_names();
bool is_suite(const std::string& name);
/// Throws std::out_of_range for an unknown suite.
SuiteResult run_suite(const std::string& name, const SuiteOptions& opt);

/// Biedenharn-Elliott identity in recoupling form over random admissible spins, levels 1..opt.k.
SuiteResult verify_pentagon(const SuiteOptions& opt);
/// Orthogonality of random duality matrices, n <= 3, levels 1..opt.k.
SuiteResult verify_orthogonality(const SuiteOptions& opt);
/// Unitarity of every single-letter matrix, n <= 4, random colors, levels 1..opt.k.
SuiteResult verify_unitarity(const SuiteOptions& opt);
/// Braid, far-commutation and inverse relations, same sampling as unitarity.
SuiteResult verify_braid_relations(const SuiteOptions& opt);
/// Moves II and IV on every catalog link at level opt.k, framings 0 and 1.
SuiteResult verify_kirby(const SuiteOptions& opt);
/// q6j at k = 2000 against the classical 6j for spins <= 2; tolerance 1e-4.
SuiteResult verify_classical_limit(const SuiteOptions& opt);
/// accept_probability against |bracket / d^n|^2 from the state-sum oracle.
SuiteResult verify_recognizer(const SuiteOptions& opt);
/// Normalized color-1/2 values against the bracket oracle after one unknot phase fix.
SuiteResult verify_oracle(const SuiteOptions& opt);

struct OracleComparison {
    std::string name;
    int k = 0;
    cplx engine;      ///< ambient-normalized engine value
    cplx oracle;      ///< oracle Jones value of the mirror diagram, unknot = 1
    cplx phase;       ///< engine(unknot) / oracle(unknot)
    double residual;  ///< |engine - phase * oracle|
};

/// Compares one catalog entry at level k; the oracle runs on the mirror word
/// because positive letters carry q^{-1/4}-type phases here.
OracleComparison compare_with_oracle(const std::string& catalog_name, int k);

/// Length-kappa word on 2n strands built from shuffled blocks that use every
/// generator once with random signs, so the letter mix does not drift with kappa.
BraidWord benchmark_word(int n, int kappa, std::mt19937_64& rng);

/// Coefficient of determination of the least-squares line through (x, y).
double linear_fit_r2(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace qtop
