#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "lolab/errors.hpp"
#include "lolab/gap.hpp"
#include "lolab/rng.hpp"

using namespace lolab;
using gap::Elem;
using gap::Gap;

namespace {

std::set<long> as_longs(const std::set<Elem>& s) {
    std::set<long> out;
    for (const auto& e : s) {
        REQUIRE(e.size() == 1);
        out.insert(e[0].get_si());
    }
    return out;
}

std::set<mpz_class> zset(std::initializer_list<long> xs) {
    std::set<mpz_class> s;
    for (long x : xs) s.insert(mpz_class(x));
    return s;
}

} // namespace

TEST_CASE("enumerate rank-2 symmetric progression") {
    Gap Q = Gap::symmetric_z({3, 10}, {2, 1});
    auto res = gap::volume_and_enumerate(Q, 1000);
    CHECK(res.volume == 15);
    std::set<long> expect = {-16, -13, -10, -7, -6, -4, -3, 0, 3, 4, 6, 7, 10, 13, 16};
    CHECK(as_longs(res.elements) == expect);
    CHECK(res.elements.size() == 15); // distinct images: proper
    CHECK(gap::is_proper(Q, 1, 1000));
    CHECK(Q.symmetric());
}

TEST_CASE("improper progression detected") {
    Gap Q = Gap::symmetric_z({1, 2}, {2, 1});
    CHECK_FALSE(gap::is_proper(Q, 1, 1000));
    auto res = gap::volume_and_enumerate(Q, 1000);
    CHECK(res.volume == 15);
    CHECK(res.elements.size() < 15);
}

TEST_CASE("zero generator collapses image but not volume") {
    Gap Q = Gap::symmetric_z({0}, {5});
    auto res = gap::volume_and_enumerate(Q, 1000);
    CHECK(res.volume == 11);
    CHECK(as_longs(res.elements) == std::set<long>({0}));
    CHECK_FALSE(gap::is_proper(Q, 1, 1000));
}

TEST_CASE("rank-0 progression is a single point") {
    Gap Q;
    Q.amb.dim = 1;
    Q.offset = {mpz_class(7)};
    Q.validate();
    CHECK(Q.rank() == 0);
    CHECK(Q.volume() == 1);
    auto res = gap::volume_and_enumerate(Q, 10);
    CHECK(as_longs(res.elements) == std::set<long>({7}));
    CHECK(gap::is_proper(Q, 1, 10));
    CHECK_FALSE(Q.symmetric()); // offset nonzero
}

TEST_CASE("sarkozy shrink") {
    Gap Q = Gap::symmetric_z({1}, {9});
    Gap Q2 = gap::sarkozy_shrink(Q, 2);
    REQUIRE(Q2.rank() == 1);
    CHECK(Q2.gens[0][0] == 2);
    CHECK(Q2.upper[0] == 2);
    CHECK(Q2.lower[0] == -2);
    auto res = gap::volume_and_enumerate(Q2, 100);
    CHECK(as_longs(res.elements) == std::set<long>({-4, -2, 0, 2, 4}));
    // shrink of a symmetric progression stays inside the original
    for (const auto& e : res.elements) CHECK(gap::contains(Q, e));
}

TEST_CASE("containment with witness") {
    Gap Q = Gap::symmetric_z({3, 10}, {2, 1});
    std::vector<long> w;
    Elem x = {mpz_class(13)};
    CHECK(gap::contains(Q, x, &w));
    REQUIRE(w.size() == 2);
    CHECK(w[0] == 1);
    CHECK(w[1] == 1);
    CHECK(3 * w[0] + 10 * w[1] == 13);

    Elem y = {mpz_class(5)};
    CHECK_FALSE(gap::contains(Q, y));
}

TEST_CASE("embedding certificate small examples") {
    auto c1 = gap::freiman_embed(walks::StepMultiset({1, 2}), 2);
    CHECK(c1.p == 17);
    CHECK(gap::verify_rho_preserved(c1, walks::StepMultiset({1, 2})));

    auto c2 = gap::freiman_embed(walks::StepMultiset({0}), 2);
    CHECK(c2.p == 2);

    auto c3 = gap::freiman_embed(walks::StepMultiset({1, 2, 3}), 2);
    CHECK(c3.p == 59);
    CHECK(gap::verify_rho_preserved(c3, walks::StepMultiset({1, 2, 3})));
}

TEST_CASE("embedding preserves rho on random multisets") {
    Rng rng(0x1123);
    for (int t = 0; t < 20; ++t) {
        std::vector<long> vals;
        std::size_t n = 1 + rng.next_below(8);
        for (std::size_t i = 0; i < n; ++i)
            vals.push_back(static_cast<long>(rng.next_below(21)) - 10);
        walks::StepMultiset V(vals);
        auto cert = gap::freiman_embed(V, 2);
        CHECK(gap::verify_rho_preserved(cert, V));
    }
}

TEST_CASE("scan embedding keeps primes small and sums faithful") {
    walks::StepMultiset V({1, 2, 3, 4, 5, 6, 7, 8});
    long p = gap::embed_for_scan(V, 4, 10'000'000);
    long sum_abs = 36;
    CHECK(p > 2 * sum_abs);
    // all 4-fold signed sums stay in (-p/2, p/2): injective on such sums
    CHECK(p > 2 * 4 * 8);
}

TEST_CASE("iterated sumset") {
    auto X = zset({0, 1});
    auto kX = gap::iterated_sumset(X, 3);
    CHECK(kX == zset({0, 1, 2, 3}));

    auto Y = zset({0, 3, 10});
    auto kY = gap::iterated_sumset(Y, 2);
    CHECK(kY == zset({0, 3, 6, 10, 13, 20}));
    CHECK(kY.size() == 6);
}

TEST_CASE("iterated sumset over vectors") {
    std::set<Elem> X;
    X.insert(Elem{mpz_class(0), mpz_class(0)});
    X.insert(Elem{mpz_class(1), mpz_class(0)});
    X.insert(Elem{mpz_class(0), mpz_class(1)});
    auto kX = gap::iterated_sumset_vec(X, 2);
    CHECK(kX.size() == 6); // {00,10,01,20,11,02}
    CHECK(kX.count(Elem{mpz_class(1), mpz_class(1)}) == 1);
}

TEST_CASE("dividing sumsets") {
    Gap P = Gap::symmetric_z({1}, {10});
    auto Q1 = gap::divide_containment(zset({0, 1, 2, 3}), 2, P);
    REQUIRE(Q1.rank() == 1);
    CHECK(Q1.gens[0][0] == 1);
    CHECK(Q1.upper[0] == 10); // floor(2*10/2)

    Gap P5 = Gap::symmetric_z({5}, {4});
    auto Q2 = gap::divide_containment(zset({0, 5}), 4, P5);
    REQUIRE(Q2.rank() == 1);
    CHECK(Q2.gens[0][0] == 5);
    CHECK(Q2.upper[0] == 2); // floor(2*4/4)
}

TEST_CASE("dividing sumsets randomized containment") {
    Rng rng(0x77aa);
    for (int t = 0; t < 50; ++t) {
        long g = 1 + static_cast<long>(rng.next_below(5));
        long M = 4 + static_cast<long>(rng.next_below(20));
        long k = 2 + static_cast<long>(rng.next_below(3));
        Gap P = Gap::symmetric_z({g}, {M});
        // sample X with 0, k-fold sums staying inside P
        std::set<mpz_class> X;
        X.insert(0);
        long h = M / k;
        if (h == 0) continue;
        for (int i = 0; i < 4; ++i) {
            long c = static_cast<long>(rng.next_below(2 * h + 1)) - h;
            X.insert(mpz_class(c * g));
        }
        auto Q = gap::divide_containment(X, k, P);
        for (const auto& x : X) CHECK(gap::contains(Q, Elem{x}));
    }
}

TEST_CASE("covering by sums of a dense set") {
    // A = Q = {x : |x| <= 10}
    std::set<mpz_class> A;
    for (long x = -10; x <= 10; ++x) A.insert(mpz_class(x));
    Gap Q = Gap::symmetric_z({1}, {10});
    auto r1 = gap::sarkozy_cover(A, Q, 1);
    CHECK(r1.m == 1);
    CHECK(r1.l == 1);

    // arithmetic progression of step 3 inside {|x| <= 9}
    std::set<mpz_class> A3;
    for (long x = -9; x <= 9; x += 3) A3.insert(mpz_class(x));
    Gap Q9 = Gap::symmetric_z({1}, {9});
    auto r2 = gap::sarkozy_cover(A3, Q9, mpq_class(1, 3));
    // Q_l for l=3 has generator 3 and half-bound 1: contained in 2*1*A3
    CHECK(r2.l == 3);
    CHECK(r2.m == 1);
}

TEST_CASE("covering result certified by enumeration") {
    Rng rng(0xbead);
    for (int t = 0; t < 20; ++t) {
        long M = 5 + static_cast<long>(rng.next_below(8));
        Gap Q = Gap::symmetric_z({1}, {M});
        std::set<mpz_class> A;
        A.insert(0);
        for (long x = 1; x <= M; ++x)
            if (rng.next_below(2)) {
                A.insert(mpz_class(x));
                A.insert(mpz_class(-x));
            }
        gap::SarkozyCoverResult r;
        try {
            r = gap::sarkozy_cover(A, Q, mpq_class(1, 8), 6, 6);
        } catch (const SearchBudgetExceeded&) {
            continue;
        } catch (const PreconditionFailed&) {
            continue; // sampled A too sparse for the density hypothesis
        }
        // check Q_l subset 2mA directly
        Gap Ql = gap::sarkozy_shrink(Q, r.l);
        auto ql = gap::volume_and_enumerate(Ql, 100'000).elements;
        std::set<mpz_class> S = {mpz_class(0)};
        for (long i = 0; i < 2 * r.m; ++i) {
            std::set<mpz_class> next;
            for (const auto& s : S)
                for (const auto& a : A) next.insert(s + a);
            S = next;
        }
        for (const auto& e : ql) CHECK(S.count(e[0]) == 1);
    }
}

TEST_CASE("transform scales generators and bounds") {
    Gap Q = Gap::symmetric_z({3}, {4});
    Gap T = gap::transform(Q, 2, 5);
    CHECK(T.gens[0][0] == 15);
    CHECK(T.upper[0] == 8);
    CHECK(T.lower[0] == -8);
}

TEST_CASE("enumeration cap is enforced") {
    Gap Q = Gap::symmetric_z({1, 1000, 1000000}, {100, 100, 100});
    CHECK_THROWS_AS(gap::volume_and_enumerate(Q, 1000), CapExceeded);
    CHECK_THROWS_AS(gap::is_proper(Q, 2, 1000), CapExceeded);
}

TEST_CASE("properness is monotone under sub-boxes") {
    Rng rng(0x4242);
    for (int t = 0; t < 30; ++t) {
        long a = 1 + static_cast<long>(rng.next_below(8));
        long b = 1 + static_cast<long>(rng.next_below(30));
        Gap Q = Gap::symmetric_z({a, b}, {1 + static_cast<long>(rng.next_below(4)),
                                          1 + static_cast<long>(rng.next_below(4))});
        if (!gap::is_proper(Q, 1, 100'000)) continue;
        Gap sub = Q;
        sub.upper[0] = std::max(0L, sub.upper[0] - 1);
        sub.lower[0] = -sub.upper[0];
        CHECK(gap::is_proper(sub, 1, 100'000));
    }
}
