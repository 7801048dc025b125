#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace lolab::walks {

// Multiset of integer steps, canonicalized as a sorted list (duplicates kept).
struct StepMultiset {
    std::vector<long> values; // sorted ascending

    StepMultiset() = default;
    explicit StepMultiset(std::vector<long> v);

    std::size_t n() const { return values.size(); }
    std::map<long, std::size_t> multiplicities() const;
};

// Finite-atom step distribution eta.
struct EtaSpec {
    struct Atom {
        long value;
        mpq_class prob;
    };
    std::vector<Atom> atoms;
    std::string label; // "bernoulli" | "lazy" | "custom"

    static EtaSpec bernoulli();
    static EtaSpec lazy(const mpq_class& mu);
    static EtaSpec custom(std::vector<Atom> atoms);

    // true when prob(a) == prob(-a) for every atom value
    bool symmetric() const;
    void validate() const; // probabilities positive, sum exactly 1
};

// Distribution of sum v_i * eta_i, kept as exact integer counts over a
// common denominator denom_base^n. Probabilities are exact rationals.
struct WalkDistribution {
    std::vector<mpz_class> counts; // index x - lo
    long lo = 0;                   // value of counts[0]
    mpz_class denom;               // denom_base^n
    std::size_t n = 0;

    mpq_class prob_at(long x) const;
    std::map<long, mpq_class> pmf() const; // nonzero masses only
    mpq_class total_mass() const;          // always exactly 1
};

struct Budget {
    // max DP cells (support width summed over steps)
    std::uint64_t max_cells = 8'000'000'000ULL;
    std::uint64_t max_width = 40'000'000ULL;
};

WalkDistribution exact_distribution(const StepMultiset& V, const EtaSpec& eta,
                                    const Budget& budget = {});

struct RhoResult {
    mpq_class rho;
    long argmax = 0; // smallest maximizing value on ties
};

RhoResult rho(const StepMultiset& V, const EtaSpec& eta, const Budget& budget = {});

// Independent oracle: full enumeration over atom assignments.
// Requires (#atoms)^n <= 1e7.
mpq_class rho_bruteforce(const StepMultiset& V, const EtaSpec& eta);

// C(n, floor(n/2)) / 2^n
mpq_class erdos_bound(unsigned n);

struct StanleyResult {
    StepMultiset V0;
    mpq_class rho0;
};

// V0 = {-floor(n/2), ..., floor(n/2)} for odd n, with its exact rho.
StanleyResult stanley_reference(unsigned n, const Budget& budget = {});

struct HalaszResult {
    mpz_class Rl;    // ordered solutions of sum_{l} v_i = sum_{l} v_j
    double bound;    // n^{-2l-1/2} * Rl (raw expression, no hidden constant)
};

HalaszResult halasz_count(const StepMultiset& V, unsigned l);

} // namespace lolab::walks
