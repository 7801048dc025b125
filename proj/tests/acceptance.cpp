// Acceptance gate: one pass/fail line per criterion, nonzero exit when any
// criterion fails. All tolerances and corpus seeds are pinned here.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lolab/calibration.hpp"
#include "lolab/char_bounds.hpp"
#include "lolab/continuous.hpp"
#include "lolab/errors.hpp"
#include "lolab/gap.hpp"
#include "lolab/inverse.hpp"
#include "lolab/rng.hpp"
#include "lolab/walks.hpp"

using namespace lolab;
using walks::EtaSpec;
using walks::StepMultiset;

namespace {

struct Criterion {
    std::string name;
    bool pass = false;
    std::string detail;
};

StepMultiset random_multiset(Rng& rng, std::size_t n, long maxabs, bool nonzero) {
    std::vector<long> vals;
    for (std::size_t i = 0; i < n; ++i) {
        long v = static_cast<long>(rng.next_below(2 * maxabs + 1)) - maxabs;
        if (nonzero && v == 0) v = 1;
        vals.push_back(v);
    }
    return StepMultiset(vals);
}

// ---- 1: the DP matches full enumeration on 500 random instances ----
Criterion c_oracle() {
    Criterion c{"oracle-equivalence"};
    Rng rng(0xACE1);
    std::vector<EtaSpec> etas = {EtaSpec::bernoulli(), EtaSpec::lazy(mpq_class(1, 4)),
                                 EtaSpec::lazy(mpq_class(3, 4))};
    int bad = 0;
    for (int t = 0; t < 500; ++t) {
        auto V = random_multiset(rng, 1 + rng.next_below(14), 10, false);
        const auto& eta = etas[rng.next_below(3)];
        if (walks::rho(V, eta).rho != walks::rho_bruteforce(V, eta)) bad++;
    }
    c.pass = bad == 0;
    c.detail = std::to_string(500 - bad) + "/500 exact matches";
    return c;
}

// ---- 2: binomial bound is sharp on all-ones and valid on random steps ----
Criterion c_erdos() {
    Criterion c{"erdos-binomial-bound"};
    int bad = 0;
    for (unsigned n = 1; n <= 30; ++n) {
        auto r = walks::rho(StepMultiset(std::vector<long>(n, 1)), EtaSpec::bernoulli());
        if (r.rho != walks::erdos_bound(n)) bad++;
    }
    Rng rng(0xE2D05);
    for (int t = 0; t < 500; ++t) {
        std::size_t n = 1 + rng.next_below(12);
        auto V = random_multiset(rng, n, 10, true);
        auto r = walks::rho(V, EtaSpec::bernoulli());
        if (r.rho > walks::erdos_bound(static_cast<unsigned>(n))) bad++;
    }
    c.pass = bad == 0;
    c.detail = "30 sharp + 500 random, " + std::to_string(bad) + " violations";
    return c;
}

// ---- 3: the centered window maximizes rho over all distinct subsets ----
Criterion c_stanley_exhaustive() {
    Criterion c{"stanley-exhaustive"};
    int bad = 0;
    long total = 0;
    for (unsigned n : {3u, 5u, 7u}) {
        auto ref = walks::stanley_reference(n);
        std::vector<long> range;
        for (long v = -6; v <= 6; ++v) range.push_back(v);
        std::vector<std::size_t> idx(n);
        for (std::size_t i = 0; i < n; ++i) idx[i] = i;
        while (true) {
            std::vector<long> vals;
            for (auto i : idx) vals.push_back(range[i]);
            auto r = walks::rho(StepMultiset(vals), EtaSpec::bernoulli());
            total++;
            if (r.rho > ref.rho0) bad++;
            long pos = static_cast<long>(n) - 1;
            while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == range.size() - n + static_cast<std::size_t>(pos)) pos--;
            if (pos < 0) break;
            idx[static_cast<std::size_t>(pos)]++;
            for (std::size_t q = static_cast<std::size_t>(pos) + 1; q < n; ++q) idx[q] = idx[q - 1] + 1;
        }
    }
    c.pass = bad == 0;
    c.detail = std::to_string(total) + " subsets, " + std::to_string(bad) + " violations";
    return c;
}

// ---- 4: n^{3/2} rho(V0) near sqrt(24/pi) at n = 2001 ----
Criterion c_stanley_constant() {
    Criterion c{"stanley-constant"};
    auto s = walks::stanley_reference(2001);
    double v = s.rho0.get_d() * std::pow(2001.0, 1.5);
    double target = std::sqrt(24.0 / 3.1415926535897932385);
    double ratio = v / target;
    c.pass = ratio >= 0.95 && ratio <= 1.05;
    std::ostringstream os;
    os.precision(6);
    os << "n^{3/2} rho0 = " << v << ", ratio to sqrt(24/pi) = " << ratio;
    c.detail = os.str();
    return c;
}

// exact concentration of the signed-sum walk over F_p by full enumeration
mpq_class rho_mod_p(const std::vector<long>& Vp, long p) {
    std::size_t n = Vp.size();
    std::vector<long> counts(static_cast<std::size_t>(p), 0);
    for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
        long s = 0;
        for (std::size_t i = 0; i < n; ++i) {
            s += (mask >> i) & 1 ? Vp[i] : p - Vp[i];
            s %= p;
        }
        counts[static_cast<std::size_t>(s)]++;
    }
    long best = *std::max_element(counts.begin(), counts.end());
    return mpq_class(best) / mpq_class(mpz_class(1) << n);
}

// ---- 5: exact rho <= product bound <= exponential bound over F_p ----
Criterion c_fourier() {
    Criterion c{"fourier-dominance"};
    Rng rng(0xF0F0);
    int bad = 0;
    for (int t = 0; t < 200; ++t) {
        std::size_t n = 2 + rng.next_below(11); // <= 12
        auto V = random_multiset(rng, n, 10, true);
        long p = gap::embed_for_scan(V, 2, 997);
        if (p > 997) { t--; continue; }
        std::vector<long> Vp;
        for (long v : V.values) Vp.push_back(((v % p) + p) % p);
        auto cb = charsum::char_bound(Vp, p);
        mpq_class rho = rho_mod_p(Vp, p);
        if (rho.get_d() > cb.product_bound + 1e-9) bad++;
        if (cb.product_bound > cb.exp_bound + 1e-9) bad++;
    }
    c.pass = bad == 0;
    c.detail = "200 instances, " + std::to_string(bad) + " chain violations";
    return c;
}

// ---- 6: dual-set cardinality certificate from full scans ----
Criterion c_dual() {
    Criterion c{"dual-certificate"};
    Rng rng(0xD0A1);
    int pass = 0, tried = 0;
    while (tried < 50) {
        std::size_t n = 8 + rng.next_below(8);
        long g = 1 + static_cast<long>(rng.next_below(6));
        std::vector<long> vals;
        for (std::size_t i = 0; i < n; ++i)
            vals.push_back(g * (1 + static_cast<long>(rng.next_below(4))));
        StepMultiset V(vals);
        long p = gap::embed_for_scan(V, 2, 499);
        if (p > 499) continue;
        std::vector<long> Vp;
        for (long v : vals) Vp.push_back(((v % p) + p) % p);
        auto rho = walks::rho(V, EtaSpec::bernoulli()).rho;
        tried++;
        try {
            auto rep = charsum::heavy_level(Vp, p, rho);
            charsum::dual_set(rep, 499);
            if (rep.dual_card_cert) pass++;
        } catch (const Error&) {
        }
    }
    c.pass = pass == 50;
    c.detail = std::to_string(pass) + "/50 certified |dual| <= 8p/|S_m|";
    return c;
}

// ---- 7: planted recovery with eps = 0.1 ----
Criterion c_inverse() {
    Criterion c{"inverse-recovery"};
    Rng rng(12345); // same corpus as `lolab calibrate --seed 12345`
    int cover_ok = 0, ratio_ok = 0, rank_ok = 0;
    for (int i = 0; i < 50; ++i) {
        int rank = 1 + i % 2;
        std::size_t n = 100 + rng.next_below(301);
        double C = rank == 1 ? 1.5 : 2.0;
        auto inst = inverse::make_planted(rank, n, C, rng.next_u64());
        auto rep = inverse::invert(inst.V, mpq_class(1, 10), C + 1);
        if (rep.covered.size() * 10 >= 9 * n) cover_ok++;
        if (rep.ratio <= calib::K_discrete * 1.2) ratio_ok++;
        if (rep.rank <= rank + 1) rank_ok++;
    }
    c.pass = cover_ok == 50 && ratio_ok == 50 && rank_ok >= 45;
    c.detail = "cover " + std::to_string(cover_ok) + "/50, size " + std::to_string(ratio_ok) +
               "/50 within K=" + std::to_string(calib::K_discrete) + "*1.2, rank " +
               std::to_string(rank_ok) + "/50";
    return c;
}

// ---- 8: budget variant with n' = n/10 ----
Criterion c_budget() {
    Criterion c{"inverse-budget"};
    Rng rng(12345);
    int exc_ok = 0, ratio_ok = 0;
    for (int i = 0; i < 50; ++i) {
        int rank = 1 + i % 2;
        std::size_t n = 100 + rng.next_below(301);
        double C = rank == 1 ? 1.5 : 2.0;
        auto inst = inverse::make_planted(rank, n, C, rng.next_u64());
        long np = std::max<long>(1, static_cast<long>(n) / 10);
        auto rep = inverse::invert_budget(inst.V, np, C + 1);
        if (static_cast<long>(rep.exceptional.size()) <= np) exc_ok++;
        if (rep.ratio <= calib::K_budget * 1.2) ratio_ok++;
    }
    c.pass = exc_ok == 50 && ratio_ok == 50;
    c.detail = "exceptional " + std::to_string(exc_ok) + "/50 within n', size " +
               std::to_string(ratio_ok) + "/50 within K=" + std::to_string(calib::K_budget) + "*1.2";
    return c;
}

// ---- 9: dividing sumsets and covering, randomized with checked premises ----
Criterion c_sumsets() {
    Criterion c{"sumset-structure"};
    Rng rng(0x5E75);
    int div_bad = 0, cov_bad = 0, cov_done = 0;
    for (int t = 0; t < 500; ++t) {
        long g = 1 + static_cast<long>(rng.next_below(5));
        long M = 4 + static_cast<long>(rng.next_below(20));
        long k = 2 + static_cast<long>(rng.next_below(3));
        gap::Gap P = gap::Gap::symmetric_z({g}, {M});
        std::set<mpz_class> X = {0};
        long h = M / k;
        if (h == 0) { t--; continue; }
        for (int i = 0; i < 5; ++i) {
            long coeff = static_cast<long>(rng.next_below(2 * h + 1)) - h;
            X.insert(mpz_class(coeff * g));
        }
        try {
            auto Q = gap::divide_containment(X, k, P);
            for (const auto& x : X)
                if (!gap::contains(Q, {x})) div_bad++;
        } catch (const Error&) {
            div_bad++; // premises were satisfied by construction
        }
    }
    while (cov_done < 500) {
        long M = 5 + static_cast<long>(rng.next_below(8));
        gap::Gap Q = gap::Gap::symmetric_z({1}, {M});
        std::set<mpz_class> A = {mpz_class(0)};
        for (long x = 1; x <= M; ++x)
            if (rng.next_below(2)) {
                A.insert(mpz_class(x));
                A.insert(mpz_class(-x));
            }
        if (static_cast<long>(A.size()) * 8 < 2 * M + 1) continue; // density premise
        gap::SarkozyCoverResult r;
        try {
            r = gap::sarkozy_cover(A, Q, mpq_class(1, 8), 6, 6);
        } catch (const SearchBudgetExceeded&) {
            continue;
        }
        cov_done++;
        // independent re-check: every element of Q_l is a sum of 2m elements of A
        auto ql = gap::volume_and_enumerate(gap::sarkozy_shrink(Q, r.l), 100'000).elements;
        std::set<mpz_class> S = {mpz_class(0)};
        for (long i = 0; i < 2 * r.m; ++i) {
            std::set<mpz_class> next;
            for (const auto& s : S)
                for (const auto& a : A) next.insert(s + a);
            S = next;
        }
        for (const auto& e : ql)
            if (S.count(e[0]) == 0) cov_bad++;
    }
    c.pass = div_bad == 0 && cov_bad == 0;
    c.detail = "500 dividing (" + std::to_string(div_bad) + " bad), 500 covering (" +
               std::to_string(cov_bad) + " bad)";
    return c;
}

// ---- 10: small-ball estimates against exact collapse and the integral bound ----
Criterion c_smallball() {
    Criterion c{"small-ball"};
    Rng rng(0x5BA1);
    int collapse_ok = 0;
    for (int t = 0; t < 20; ++t) {
        std::size_t n = 8 + rng.next_below(5);
        std::vector<long> ints;
        for (std::size_t i = 0; i < n; ++i) ints.push_back(1 + static_cast<long>(rng.next_below(6)));
        double energy = 0;
        for (long v : ints) energy += static_cast<double>(v) * static_cast<double>(v);
        double s = 1.0 / std::sqrt(energy);
        std::vector<std::vector<double>> vecs;
        for (long v : ints) vecs.push_back({v * s});
        continuous::VectorMultiset V(1, vecs);
        // radius below half the lattice gap: the ball catches one walk value
        double beta = 0.4 * s;
        auto exact = walks::rho(StepMultiset(ints), EtaSpec::bernoulli()).rho;
        auto est = continuous::small_ball_mc(V, beta, continuous::RealEta::bernoulli(), 100'000, {},
                                             rng.next_u64());
        if (std::fabs(est.value - exact.get_d()) <= 3 * est.sigma + 1e-9) collapse_ok++;
    }
    int bound_ok = 0;
    for (int t = 0; t < 50; ++t) {
        auto inst = continuous::make_planted_continuous(1 + t % 2, 60, 25, rng.next_u64());
        auto est = continuous::small_ball_mc(inst.V, inst.beta, continuous::RealEta::bernoulli(),
                                             60'000, {}, rng.next_u64());
        auto bnd = continuous::small_ball_bound(inst.V, inst.beta, continuous::RealEta::bernoulli(),
                                                20'000, rng.next_u64());
        if (bnd.value >= est.value - 3 * (est.sigma + bnd.sigma)) bound_ok++;
    }
    c.pass = collapse_ok == 20 && bound_ok == 50;
    c.detail = "collapse " + std::to_string(collapse_ok) + "/20 within 3 sigma, bound " +
               std::to_string(bound_ok) + "/50 dominating";
    return c;
}

// ---- 11: continuous recovery, four structural bullets per seed ----
Criterion c_continuous() {
    Criterion c{"continuous-recovery"};
    Rng rng(2468);
    int pass = 0;
    for (int t = 0; t < 20; ++t) {
        int d = 1 + t % 2;
        auto inst = continuous::make_planted_continuous(d, 100, d == 1 ? 41 : 49, rng.next_u64());
        continuous::ContOptions copt;
        copt.seed = rng.next_u64();
        try {
            auto rep = continuous::continuous_invert(inst.V, inst.beta,
                                                     continuous::RealEta::bernoulli(), 10, 10.0, copt);
            bool full_dim = rep.full_dimension;
            bool approx = rep.approx_close + 10 >= inst.V.n();
            // rank window: fitted lattice rank plus the appended unit box
            bool rank_card = rep.rank >= d && rep.rank <= 2 * d + 1 &&
                             rep.card_ratio <= calib::K_continuous * 1.2;
            bool gens = rep.small_generators;
            if (full_dim && approx && rank_card && gens) pass++;
        } catch (const Error&) {
        }
    }
    c.pass = pass >= 18;
    c.detail = std::to_string(pass) + "/20 seeds with all four bullets";
    return c;
}

// ---- 12: statistical optimality floor for spread samples ----
Criterion c_optimality() {
    Criterion c{"rank1-optimality"};
    Rng rng(0x0B7A);
    const long n = 200;
    double floor = calib::c_cover * std::pow(static_cast<double>(n), 1.3);
    int pass = 0;
    for (int s = 0; s < 20; ++s) {
        std::vector<long> pts;
        for (long i = 0; i < n; ++i) {
            long v = n + static_cast<long>(rng.next_below(n + 1));
            if (rng.next_below(2)) v = -v;
            pts.push_back(v);
        }
        long vol = continuous::min_rank1_cover_volume(pts, 0.9);
        if (static_cast<double>(vol) > floor) pass++;
    }
    c.pass = pass >= 18;
    std::ostringstream os;
    os << pass << "/20 above " << floor;
    c.detail = os.str();
    return c;
}

// ---- 13: dominating net count equals the closed form, exactly ----
Criterion c_netcount() {
    Criterion c{"net-counting"};
    struct Tuple {
        unsigned long n;
        mpq_class beta, rho, eps;
    };
    std::vector<Tuple> tuples = {
        {64, {1, 2}, {1, 2}, {1, 3}},   {64, {1, 3}, {1, 4}, {1, 3}},
        {64, {1, 2}, {1, 8}, {1, 3}},   {4096, {1, 2}, {1, 2}, {1, 3}},
        {4096, {1, 2}, {1, 8}, {1, 3}}, {256, {1, 2}, {1, 2}, {1, 4}},
        {256, {1, 3}, {1, 4}, {1, 4}},  {65536, {1, 2}, {1, 2}, {1, 4}},
        {4096, {1, 2}, {1, 2}, {1, 6}}, {4096, {1, 2}, {1, 4}, {1, 6}},
    };
    int ok = 0;
    for (const auto& t : tuples) {
        try {
            auto counts = continuous::net_count(t.n, t.beta, t.rho, t.eps);
            if (!counts.dominating_exact) continue;
            // independent closed-form evaluation through the base-2 factorization:
            // n = 2^a, so n^{n(1/2-eps)} = 2^{a n (1/2-eps)} with integer exponent
            unsigned long a = 0;
            while ((1UL << a) < t.n) a++;
            mpq_class exp_q = mpq_class(static_cast<long>(a * t.n)) * (mpq_class(1, 2) - t.eps);
            if (exp_q.get_den() != 1) continue;
            mpz_class denom_pow;
            mpz_pow_ui(denom_pow.get_mpz_t(), mpz_class(2).get_mpz_t(), exp_q.get_num().get_ui());
            mpq_class inv_rho_n;
            mpz_pow_ui(inv_rho_n.get_num_mpz_t(), t.rho.get_den().get_mpz_t(), t.n);
            mpz_pow_ui(inv_rho_n.get_den_mpz_t(), t.rho.get_num().get_mpz_t(), t.n);
            inv_rho_n.canonicalize();
            mpq_class closed = inv_rho_n / denom_pow;
            if (counts.dominating == closed) ok++;
        } catch (const Error&) {
        }
    }
    c.pass = ok == static_cast<int>(tuples.size());
    c.detail = std::to_string(ok) + "/" + std::to_string(tuples.size()) + " exact matches";
    return c;
}

} // namespace

int main() {
    std::vector<std::pair<std::string, std::function<Criterion()>>> criteria = {
        {"oracle-equivalence", c_oracle},
        {"erdos-binomial-bound", c_erdos},
        {"stanley-exhaustive", c_stanley_exhaustive},
        {"stanley-constant", c_stanley_constant},
        {"fourier-dominance", c_fourier},
        {"dual-certificate", c_dual},
        {"inverse-recovery", c_inverse},
        {"inverse-budget", c_budget},
        {"sumset-structure", c_sumsets},
        {"small-ball", c_smallball},
        {"continuous-recovery", c_continuous},
        {"rank1-optimality", c_optimality},
        {"net-counting", c_netcount},
    };
    int failures = 0;
    for (auto& [name, f] : criteria) {
        Criterion c;
        try {
            c = f();
        } catch (const std::exception& e) {
            c.pass = false;
            c.detail = std::string("unexpected exception: ") + e.what();
        }
        c.name = name;
        if (!c.pass) failures++;
        std::printf("%s %-20s %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
