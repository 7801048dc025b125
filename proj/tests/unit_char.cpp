#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "lolab/char_bounds.hpp"
#include "lolab/errors.hpp"
#include "lolab/gap.hpp"
#include "lolab/rng.hpp"
#include "lolab/walks.hpp"

using namespace lolab;
using charsum::Config;
using walks::EtaSpec;

TEST_CASE("mu condition for lazy steps") {
    // lazy(1/2): |E e_p(eta x)| = |1/2 + 1/2 cos + i/2 sin| -> cos^2(pi x/p)
    long p = 101;
    std::vector<long> Vp = {1, 5, 17};
    auto res = charsum::condition_check({EtaSpec::lazy(mpq_class(1, 2))}, p, Vp, 2.0, 0.5);
    CHECK(res.holds);
    CHECK(res.mu_bounded);
    CHECK(res.min_slack >= 0.0);
}

TEST_CASE("plain sign steps fail the damping condition") {
    // |E e_p(eta x)| = |cos(2pi x/p)| hits 1 at x = p/2, so no exponential
    // damping is possible without laziness; the checker must say so
    long p = 59;
    std::vector<long> Vp = {1, 2, 3};
    auto res = charsum::condition_check({EtaSpec::bernoulli()}, p, Vp, 2.0, 1.0);
    CHECK_FALSE(res.holds);
    CHECK_FALSE(res.mu_bounded);

    // a lazy version of the same steps passes
    auto lazy = charsum::condition_check({EtaSpec::lazy(mpq_class(1, 2))}, p, Vp, 2.0, 0.5);
    CHECK(lazy.holds);
    CHECK(lazy.mu_bounded);
}

TEST_CASE("character product bound, p = 5") {
    auto cb = charsum::char_bound({1}, 5);
    // (1 + 2 cos(pi/5) + 2 cos(2pi/5)) / 5
    double expect = (1.0 + 2.0 * std::cos(M_PI / 5) + 2.0 * std::cos(2 * M_PI / 5)) / 5.0;
    CHECK(cb.product_bound == doctest::Approx(expect).epsilon(1e-12));
    CHECK(cb.product_bound == doctest::Approx(0.64721).epsilon(1e-4));
    CHECK(cb.exp_bound >= cb.product_bound - 1e-12);
}

TEST_CASE("character bound with all-zero steps") {
    auto cb = charsum::char_bound({0, 0, 0}, 7);
    CHECK(cb.product_bound == doctest::Approx(1.0));
    CHECK(cb.exp_bound == doctest::Approx(1.0));
}

TEST_CASE("character bound dominates exact concentration") {
    // product bound >= rho for bernoulli signs (Esseen/orthogonality route)
    Rng rng(0xc0ffee);
    for (int t = 0; t < 40; ++t) {
        std::size_t n = 2 + rng.next_below(6);
        std::vector<long> vals;
        for (std::size_t i = 0; i < n; ++i)
            vals.push_back(1 + static_cast<long>(rng.next_below(9)));
        walks::StepMultiset V(vals);
        long p = gap::embed_for_scan(V, 2, 10'000'000);
        std::vector<long> Vp;
        for (long v : V.values) Vp.push_back(((v % p) + p) % p);
        auto cb = charsum::char_bound(Vp, p);
        auto r = walks::rho(V, EtaSpec::bernoulli());
        CHECK(cb.product_bound + 1e-12 >= r.rho.get_d());
        CHECK(cb.exp_bound + 1e-12 >= cb.product_bound);
    }
}

TEST_CASE("char bound example p = 59") {
    auto cb = charsum::char_bound({1, 2, 3}, 59);
    CHECK(cb.product_bound >= 0.25 - 1e-12);
}

TEST_CASE("heavy level and core selection") {
    walks::StepMultiset V({1, 2, 3});
    long p = 59;
    std::vector<long> Vp = {1, 2, 3};
    auto rho = walks::rho(V, EtaSpec::bernoulli()).rho; // 1/4
    auto rep = charsum::heavy_level(Vp, p, rho);
    CHECK(rep.m >= 1);
    CHECK(rep.heavy_cert);
    CHECK(!rep.Sm.empty());
    // S_m contains 0 always (level sum zero)
    CHECK(std::find(rep.Sm.begin(), rep.Sm.end(), 0L) != rep.Sm.end());

    charsum::core_select(rep, mpq_class(1, 10));
    CHECK(rep.core.size() + rep.exceptional.size() == Vp.size());
    // exceptional multiset is at most eps * n
    CHECK(rep.exceptional.size() <= (Vp.size() + 9) / 10);
}

TEST_CASE("no heavy level when rho is inflated") {
    // 30 spread residues at p = 1009: typical level sums are ~2.5, so no
    // m can make |S_m| exp(-m+2) reach 0.99 p
    std::vector<long> Vp;
    for (long v = 1; v <= 30; ++v) Vp.push_back(v);
    CHECK_THROWS_AS(charsum::heavy_level(Vp, 1009, mpq_class(99, 100)), NoHeavyLevel);
}

TEST_CASE("level sum numerator is exact and symmetric") {
    Rng rng(0x1a2b);
    for (int t = 0; t < 30; ++t) {
        long p = 101;
        std::vector<long> Vp;
        for (int i = 0; i < 6; ++i) Vp.push_back(static_cast<long>(rng.next_below(p)));
        long a = 1 + static_cast<long>(rng.next_below(p - 1));
        auto s1 = charsum::level_sum_num(Vp, p, a);
        auto s2 = charsum::level_sum_num(Vp, p, p - a);
        CHECK(s1 == s2); // ||x|| = ||-x||
        // cross-check against direct computation
        unsigned long long direct = 0;
        for (long v : Vp) {
            long r = (v % p) * (a % p) % p;
            long d = std::min(r, p - r);
            direct += static_cast<unsigned long long>(d) * static_cast<unsigned long long>(d);
        }
        CHECK(s1 == direct);
    }
}

TEST_CASE("dual set certificates at small primes") {
    Rng rng(0x3c3c);
    for (int t = 0; t < 15; ++t) {
        long p = 199;
        std::vector<long> Vp;
        std::size_t n = 6 + rng.next_below(5);
        long base = 1 + static_cast<long>(rng.next_below(10));
        for (std::size_t i = 0; i < n; ++i) Vp.push_back(base); // concentrated instance
        walks::StepMultiset V(std::vector<long>(Vp.begin(), Vp.end()));
        auto rho = walks::rho(V, EtaSpec::bernoulli()).rho;
        charsum::LevelSetReport rep;
        try {
            rep = charsum::heavy_level(Vp, p, rho);
        } catch (const NoHeavyLevel&) {
            continue;
        }
        charsum::dual_set(rep, p);
        CHECK(rep.dual_computed);
        // dual set always contains 0
        CHECK(std::find(rep.dual.begin(), rep.dual.end(), 0L) != rep.dual.end());
        if (rep.dual_card_cert)
            CHECK(static_cast<double>(rep.dual.size()) * rep.Sm.size() <= 8.0 * p + 1e-9);
    }
}

TEST_CASE("growth set matches direct sumset") {
    std::vector<long> core = {0, 1};
    long p = 101;
    // 3 * {0,1} = {0,1,2,3}
    charsum::LevelSetReport rep;
    rep.p = p;
    rep.values = core;
    rep.rho = mpq_class(1, 2);
    rep.m = 1;
    rep.Sm = {0};
    rep.core = core;
    charsum::growth_set(rep, 3, 1'000'000);
    CHECK(rep.growth.size() == 4);
    std::set<long> got(rep.growth.begin(), rep.growth.end());
    CHECK(got == std::set<long>({0, 1, 2, 3}));
}

TEST_CASE("growth set second example") {
    std::vector<long> core = {0, 3, 10};
    charsum::LevelSetReport rep;
    rep.p = 101;
    rep.values = core;
    rep.rho = mpq_class(1, 2);
    rep.m = 1;
    rep.Sm = {0};
    rep.core = core;
    charsum::growth_set(rep, 2, 1'000'000);
    std::set<long> got(rep.growth.begin(), rep.growth.end());
    CHECK(got == std::set<long>({0, 3, 6, 10, 13, 20}));
}

TEST_CASE("budget-mode core selection threshold") {
    std::vector<long> Vp = {1, 1, 1, 1, 50, 1, 1, 1};
    long p = 211;
    walks::StepMultiset V(std::vector<long>(Vp.begin(), Vp.end()));
    auto rho = walks::rho(V, EtaSpec::bernoulli()).rho;
    charsum::LevelSetReport rep;
    try {
        rep = charsum::heavy_level(Vp, p, rho);
    } catch (const NoHeavyLevel&) {
        return;
    }
    charsum::core_select(rep, mpq_class(1), 4);
    CHECK(rep.budget_n_prime == 4);
    CHECK(rep.core.size() + rep.exceptional.size() == Vp.size());
    // exceptional list is sorted by descending level sum over S_m
    auto level_over_Sm = [&](long v) {
        unsigned long long s = 0;
        for (long xi : rep.Sm) {
            long r = (v % p) * (xi % p) % p;
            long d = std::min(r, p - r);
            s += static_cast<unsigned long long>(d) * static_cast<unsigned long long>(d);
        }
        return s;
    };
    for (std::size_t i = 1; i < rep.exceptional.size(); ++i)
        CHECK(level_over_Sm(rep.exceptional[i - 1]) >= level_over_Sm(rep.exceptional[i]));
}
