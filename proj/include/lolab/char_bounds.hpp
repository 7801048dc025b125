#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <gmpxx.h>

#include "lolab/walks.hpp"

namespace lolab::charsum {

// Pinned constants of the finite-field pipeline. The 200 is the literal
// dual-set constant; c1 is calibrated so the dual-set inclusion premise
// k^2 eps^-1 m/n <= 1/200 tends to hold at desk scale.
struct Config {
    double m_range_A = 10.0;  // level sets scanned for m <= ceil(A log n)
    double c1 = 0.25;         // k = c1 sqrt(n/m)
    double dual_constant = 200.0;
    double slack = 1e-9;      // float slack on certificate comparisons
    long p_cap = 10'000'000;
};

struct LevelSetReport {
    long p = 0;
    std::vector<long> values; // V_p residues, multiplicity kept
    mpq_class rho;            // concentration probability used for certificates

    // level-set stage
    int m = 0;
    std::vector<long> Sm;
    bool heavy_cert = false; // |S_m| exp(-m+2) >= rho p

    // core stage
    mpq_class epsilon;
    long budget_n_prime = 0; // 0 = epsilon mode, else threshold (m/n')|S_m|
    std::vector<std::size_t> core_idx;
    std::vector<long> core;        // V'
    std::vector<long> exceptional; // V \ V', descending level-sum order

    // dual stage
    bool dual_computed = false;
    std::vector<long> dual; // S_m*
    bool dual_card_cert = false;
    bool dual_Ta_cert = false;

    // growth stage
    long k = 0;
    std::vector<long> growth; // k V'' over F_p
    double growth_ratio = 0;  // |kV''| / (rho^-1 exp(-m+2))
    bool premise_holds = false;
    bool inclusion_checked = false;
    bool inclusion_holds = false;

    Config config;
};

struct ConditionResult {
    bool holds = false;
    long worst_t = 0;    // t minimizing rhs - lhs
    double min_slack = 0;
    bool mu_bounded = false; // condition |E e_p(eta x)| <= (1-mu)+mu cos(2pi x/p), all x
};

// Verifies prod_i |E e_p(eta_i v_i t)| <= exp(-c sum_i ||v_i t / p||^2) over
// all t in F_p. etas of size 1 is broadcast to all steps. If mu is given,
// additionally checks the mu-bounded condition per variable.
ConditionResult condition_check(const std::vector<walks::EtaSpec>& etas, long p,
                                const std::vector<long>& Vp, double c,
                                std::optional<double> mu = std::nullopt);

struct CharBound {
    double product_bound; // (1/p) sum_xi prod_i |cos(pi v_i xi / p)|
    double exp_bound;     // (1/p) sum_xi exp(-2 sum_i ||v_i xi / p||^2)
};

CharBound char_bound(const std::vector<long>& Vp, long p, const Config& cfg = {});

// Smallest m <= ceil(A log n) with |S_m| exp(-m+2) >= rho p; throws
// NoHeavyLevel when the supplied rho exceeds the true concentration.
LevelSetReport heavy_level(const std::vector<long>& Vp, long p, const mpq_class& rho,
                           const Config& cfg = {});

// V' = {v : sum_{xi in S_m} ||v xi / p||^2 <= eps^-1 (m/n) |S_m|}; exact
// integer comparisons. budget_n_prime > 0 switches to threshold (m/n')|S_m|.
void core_select(LevelSetReport& report, const mpq_class& epsilon, long budget_n_prime = 0);

// Full a-scan for S_m* = {a : sum_{xi in S_m} ||a xi/p||^2 <= |S_m|/200},
// with the cardinality certificate |S_m*| <= 8p/|S_m| and the T_a checks.
void dual_set(LevelSetReport& report, long p_scan_cap);

// kV'' as an explicit iterated sumset over F_p; checks the triangle
// inequality premise on sampled elements of lV' and (when the dual set is
// available) the inclusion of all lV' in S_m*.
void growth_set(LevelSetReport& report, long k, std::uint64_t cap);

// Exact level sum: sum_i ||v_i a / p||^2 in units of p^2 (numerator only).
unsigned long long level_sum_num(const std::vector<long>& Vp, long p, long a);

} // namespace lolab::charsum
