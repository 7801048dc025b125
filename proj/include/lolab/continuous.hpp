#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "lolab/gap.hpp"
#include "lolab/inverse.hpp"
#include "lolab/rng.hpp"

namespace lolab::continuous {

// Multiset of vectors in R^d with sum of squared norms exactly 1 (tolerance
// 1e-12 at construction).
struct VectorMultiset {
    int d = 1;
    std::vector<std::vector<double>> vecs;

    VectorMultiset() = default;
    VectorMultiset(int d, std::vector<std::vector<double>> v);

    // rescales to unit energy
    static VectorMultiset normalized(int d, std::vector<std::vector<double>> v);

    std::size_t n() const { return vecs.size(); }
    double energy() const; // sum ||v_i||^2
};

// Real step distribution z. Atom lists are exact; the gaussian kind is
// sampled.
struct RealEta {
    enum class Kind { atoms, gaussian };
    struct Atom {
        double value;
        double prob;
    };
    Kind kind = Kind::atoms;
    std::vector<Atom> atoms;
    double sigma = 1.0; // gaussian kind
    std::optional<double> cz; // cached window constant

    static RealEta bernoulli();
    static RealEta gaussian(double sigma = 1.0);
    static RealEta make_atoms(std::vector<Atom> atoms);

    bool exact() const { return kind == Kind::atoms; }
    double sample(Rng& rng) const;
};

struct MCEstimate {
    double value = 0;
    double sigma = 0; // 0 for exact evaluations
    std::uint64_t trials = 0;
    bool exact = false;
};

// ||w||_z = (E ||w (z1 - z2)||^2_{R/Z})^{1/2}; closed form for atom lists.
MCEstimate z_norm(double w, const RealEta& z, std::uint64_t trials = 10'000,
                  std::uint64_t seed = 1);
double z_norm_sq_exact(double w, const RealEta& z); // atoms only

// Smallest C with P(1 <= |z1 - z2| <= C) >= 1/2; exact on atom lists, grid
// search with an MC panel otherwise. Throws NoWindow.
double cz_window(const RealEta& z, std::uint64_t trials = 1'000'000, std::uint64_t seed = 1,
                 double budget = 64.0);

// Lower estimate of sup_x P(sum z_i v_i in B(x, beta)) over a finite
// candidate-center set (empirical modes plus the supplied list plus 0).
MCEstimate small_ball_mc(const VectorMultiset& V, double beta, const RealEta& z,
                         std::uint64_t trials, const std::vector<std::vector<double>>& centers = {},
                         std::uint64_t seed = 1);

// exp(pi r^2) E_xi exp(-sum ||<v_i, xi>||_z^2 / 2) with xi drawn from the
// density exp(-pi ||xi||^2).
MCEstimate small_ball_bound(const VectorMultiset& V, double r, const RealEta& z,
                            std::uint64_t mc_points = 20'000, std::uint64_t seed = 1);

struct ContOptions {
    double A = 10.0;          // level range M = 2 A log n
    std::uint64_t trials = 50'000;
    std::uint64_t seed = 1;
    bool refine = false;      // divisible-sublattice reduction when rank == d
    long grid_density = 64;   // grid resolution target (prime N >= this)
    double level_threshold = 16.0; // S = {s : sum ||<u_i,s>||_z^2 <= thr * m}
    int y0_points = 64;
    inverse::FitConfig fitcfg;
};

struct ContinuousReport {
    double beta = 0;
    MCEstimate rho_hat;
    double C_z = 0;

    int m = 0;
    long grid_prime = 0;
    std::size_t grid_size = 0, S_size = 0;
    double y0 = 0;
    long k = 0, D = 0;
    std::vector<std::size_t> bad; // indices of dropped vectors

    std::vector<std::vector<long>> A_beta; // rounded survivors, order kept
    double magnitude_sum = 0;              // sum ||a||^2, vs k^2 beta^-2

    gap::Gap P; // integer GAP, Q = scale * P
    int rank = 0;
    mpz_class P_size;
    double scale = 0; // beta / (D k)
    double gamma = 0;

    // refine path (rank == d)
    bool refined = false;
    std::vector<std::vector<long>> P_prime;
    mpz_class P_prime_size;

    // bullet audit
    bool full_dimension = false;
    std::size_t approx_close = 0;
    double approx_tol = 0; // beta / k
    double card_target = 0, card_ratio = 0;
    long gen_denominator = 0; // p = D k
    bool small_generators = false;
    double k_window_lo = 0, k_window_hi = 0; // Dk / sqrt(n'/log n), Dk / sqrt(n')
    std::string notes;
};

// Discretized continuous inverse pipeline: level grid -> y0 -> bad-vector
// filter -> rounding to (Z/Dk)^d -> integer GAP fit plus the unit cube ->
// Q = (beta/Dk) P, with the four-bullet audit.
ContinuousReport continuous_invert(const VectorMultiset& V, double beta, const RealEta& z,
                                   long n_prime, double C, const ContOptions& opt = {});

struct NetCounts {
    mpq_class gap_family;  // (beta^-1 n')^c1 * (rho^-2 / n') ^ c2
    mpq_class exceptional; // sum_{i<=n'} (c3 beta^-1)^i
    mpq_class subset_term; // (rho^-1 / sqrt(n'))^n, the dominating subset count
    mpq_class dominating;  // closed form (rho^-1 n^{-(1/2-eps)})^n, when exact
    bool dominating_exact = false; // n^{1/2-eps} was an exact integer
    mpq_class total;       // gap_family * (subset_term + 1) * exceptional
    unsigned long n_prime = 0;
};

struct NetConfig {
    unsigned long c1 = 1, c2 = 1, c3 = 1;
    double C = 10.0; // rho >= n^-C hypothesis
};

// Exact big-rational evaluation of the net-counting expressions; requires
// the fractional powers of n to be exact integers.
NetCounts net_count(unsigned long n, const mpq_class& beta, const mpq_class& rho,
                    const mpq_class& epsilon, const NetConfig& cfg = {});

// Minimal volume 2M+1 of a rank-1 progression {a x : |x| <= M} covering at
// least frac * |points| of the multiset; generators 1..a_max scanned.
long min_rank1_cover_volume(const std::vector<long>& points, double frac, long a_max = 64);

// --- planted corpus for the continuous pipeline ---

struct PlantedContinuous {
    VectorMultiset V;
    double beta = 0;
    gap::Gap planted; // integer lattice generators (pre-scaling)
    int rank = 0;
};

// Integer lattice GAP of rank d in Z^d, coefficients sampled uniformly, then
// normalized to unit energy; beta = the normalization scale.
PlantedContinuous make_planted_continuous(int d, std::size_t n, long vol_target,
                                          std::uint64_t seed);

} // namespace lolab::continuous
