#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "lolab/char_bounds.hpp"
#include "lolab/gap.hpp"
#include "lolab/walks.hpp"

namespace lolab::inverse {

struct FitConfig {
    int r_max = 4;
    // rank-r volume budget: accept a rank-r fit when vol <= K_fit * k^-r * |kX|
    double K_fit = 8.0;
    unsigned long enum_cap = 4'000'000;
    int cand_small = 10;    // smallest difference values kept as generator candidates
    int cand_frequent = 16; // most frequent difference values kept
    long rep_cap = 4096;    // per-element representation cap
};

// Long-range fit: a proper symmetric GAP containing X, searched rank by rank
// (gcd/span at rank 1, generator candidates from differences above), each
// rank accepted only within its volume budget. Throws FitFailed /
// GrowthHypothesisFailed.
gap::Gap gap_fit(const std::set<long>& X, long k, double gamma, const FitConfig& cfg = {});

// Same over Z^d (d <= 4), used by the continuous pipeline. Ranks d and d+1
// are searched.
gap::Gap gap_fit_vec(const std::set<std::vector<long>>& X, int d, long k, double gamma,
                     const FitConfig& cfg = {});

struct Options {
    charsum::Config charcfg;
    FitConfig fitcfg;
    long p_cap = 10'000'000;
    std::uint64_t sumset_cap = 400'000'000ULL;
    double budget_eps = 0.1; // configured lower exponent for n' in budget mode
    std::optional<mpq_class> rho_supplied;
    walks::Budget walk_budget;
};

struct StructureReport {
    walks::StepMultiset V;
    mpq_class rho;
    bool rho_supplied = false;
    mpq_class epsilon;  // epsilon mode
    long n_prime = 0;   // budget mode (0 = epsilon mode)

    gap::Gap Q;
    int rank = 0;
    mpz_class Q_size;     // exact when enumerable
    bool Q_enumerated = false;
    std::vector<long> covered;     // multiset, elements of V inside Q
    std::vector<long> exceptional; // multiset, descending level-sum order

    double target = 0; // rho^-1 n^{-r/2} (or n'^{-r/2})
    double ratio = 0;  // |Q| / target

    // pipeline trace
    charsum::LevelSetReport trace;
    long scan_prime = 0;
    mpz_class freiman_prime; // reference full-order embedding prime
    long k = 0;
    double gamma = 0;
    std::size_t X_size = 0, kX_size = 0;
    std::string notes;
};

// Main inverse pipeline: embed -> heavy level -> core(eps) -> growth ->
// long-range fit -> coverage report.
StructureReport invert(const walks::StepMultiset& V, const mpq_class& epsilon, double C,
                       const Options& opt = {});

// Budgeted variant with exceptional budget n' and k = c1 sqrt(n'/m).
StructureReport invert_budget(const walks::StepMultiset& V, long n_prime, double C,
                              const Options& opt = {});

struct CertResult {
    std::string name;
    bool pass;
    std::string detail;
};

// Independent re-check of everything the report claims.
std::vector<CertResult> verify_report(const StructureReport& report,
                                      unsigned long enum_cap = 4'000'000);

// --- planted-instance corpus (shared by tests, calibration and the CLI) ---

struct PlantedInstance {
    walks::StepMultiset V;
    gap::Gap planted;
    int rank;
};

// Samples n elements (with repetition) from a random proper symmetric GAP of
// rank r and volume ~ n^{C - r/2}.
PlantedInstance make_planted(int rank, std::size_t n, double C, std::uint64_t seed);

} // namespace lolab::inverse
