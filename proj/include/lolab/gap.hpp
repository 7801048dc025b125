#pragma once

#include <optional>
#include <set>
#include <vector>

#include <gmpxx.h>

#include "lolab/walks.hpp"

namespace lolab::gap {

// Group element: integer vector of the ambient dimension (length 1 for Z
// and F_p). Residues mod p are stored as integers in [0, p-1].
using Elem = std::vector<mpz_class>;

struct Ambient {
    int dim = 1;
    mpz_class modulus = 0; // 0 = torsion-free (Z or Z^d); >0 = F_p, dim must be 1

    bool operator==(const Ambient&) const = default;
};

// Generalized arithmetic progression: image of the integer coefficient box
// {x : lower_i <= x_i <= upper_i} under x -> offset + sum x_i * gens_i.
struct Gap {
    Ambient amb;
    Elem offset;
    std::vector<Elem> gens;
    std::vector<long> lower, upper;

    int rank() const { return static_cast<int>(gens.size()); }
    bool symmetric() const;
    mpz_class volume() const; // prod (upper_i - lower_i + 1)
    void validate() const;

    // rank-1..r symmetric GAP over Z (dim 1) from scalar generators and
    // half-widths: {sum x_i g_i : |x_i| <= h_i}
    static Gap symmetric_z(const std::vector<long>& gens, const std::vector<long>& halfwidths);
    // same over Z^d
    static Gap symmetric_zd(int dim, const std::vector<std::vector<long>>& gens,
                            const std::vector<long>& halfwidths);
};

// Applies the defining map to a coefficient tuple (reduces mod p if needed).
Elem map_coeffs(const Gap& Q, const std::vector<long>& coeffs);

struct EnumerationResult {
    mpz_class volume;
    std::set<Elem> elements;
};

// Explicit image of the coefficient box. Throws CapExceeded if Vol(Q) > cap.
EnumerationResult volume_and_enumerate(const Gap& Q, unsigned long cap);

// t-properness: the map on the t-dilated box is injective. t=1 is plain
// properness. Explicit enumeration with a hash of images; refuses beyond cap.
bool is_proper(const Gap& Q, long t, unsigned long cap);

// Generators scaled by scale_c, bounds scaled by dilate_l.
Gap transform(const Gap& Q, long dilate_l, long scale_c);

// Sarkozy shrink Q_l: generators l*a_i, half-bounds floor(M_i / l^2).
// Only for symmetric Q.
Gap sarkozy_shrink(const Gap& Q, long l);

// Membership with witness coefficients. Exhaustive over the coefficient box
// with range pruning; rank must be <= max_rank (default 4).
bool contains(const Gap& Q, const Elem& x, std::vector<long>* witness = nullptr,
              int max_rank = 4);

struct EmbeddingCertificate {
    mpz_class p;
    std::vector<mpz_class> Vp; // V mod p, residues in [0, p-1]
    unsigned order;            // certified Freiman-isomorphism order
};

// Embeds an integer multiset into F_p with the smallest prime
// p >= 2^n (sum |v_i| + 1). The certificate order is k.
EmbeddingCertificate freiman_embed(const walks::StepMultiset& V, unsigned k);

// Brute-force check that rho over Z equals rho over F_p after embedding.
// Requires 2^n within budget (n <= ~23).
bool verify_rho_preserved(const EmbeddingCertificate& cert, const walks::StepMultiset& V);

// Pipeline-scale embedding: smallest prime p > max(2 sum|v_i|, 2k max|v_i|).
// Preserves rho and all sums of up to k elements (so it is a Freiman
// embedding of order k), while keeping p small enough for full F_p scans.
long embed_for_scan(const walks::StepMultiset& V, long k, long p_cap);

// Iterated sumset kX over Z (scalars).
std::set<mpz_class> iterated_sumset(const std::set<mpz_class>& X, long k);
// and over Z^d
std::set<Elem> iterated_sumset_vec(const std::set<Elem>& X, long k);

// Dividing sumsets: given 0 in X, P symmetric 2-proper, kX subset P,
// returns Q' with half-bounds floor(2 N_i / k); asserts X subset Q'.
Gap divide_containment(const std::set<mpz_class>& X, long k, const Gap& P,
                       unsigned long cap = 2'000'000);

struct SarkozyCoverResult {
    long m, l;
};

// Sarkozy-type covering: smallest (m, l) in scan order (m ascending, then l)
// with Q_l subset 2mA. Desk scale only.
SarkozyCoverResult sarkozy_cover(const std::set<mpz_class>& A, const Gap& Q,
                                 const mpq_class& delta, long m_budget = 8, long l_budget = 8,
                                 unsigned long cap = 2'000'000);

} // namespace lolab::gap
