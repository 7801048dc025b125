#include "lolab/gap.hpp"

#include <algorithm>
#include <cstdlib>

#include "lolab/errors.hpp"

namespace lolab::gap {

bool Gap::symmetric() const {
    for (const auto& c : offset)
        if (c != 0) return false;
    for (std::size_t i = 0; i < gens.size(); ++i)
        if (lower[i] != -upper[i]) return false;
    return true;
}

mpz_class Gap::volume() const {
    mpz_class v = 1;
    for (std::size_t i = 0; i < gens.size(); ++i) v *= mpz_class(upper[i] - lower[i] + 1);
    return v;
}

void Gap::validate() const {
    if (amb.dim < 1) throw PreconditionFailed("Gap: dim >= 1");
    if (amb.modulus > 0 && amb.dim != 1) throw PreconditionFailed("Gap: F_p ambient is one-dimensional");
    if (static_cast<int>(offset.size()) != amb.dim) throw PreconditionFailed("Gap: offset dimension mismatch");
    if (gens.size() != lower.size() || gens.size() != upper.size())
        throw PreconditionFailed("Gap: rank mismatch between generators and bounds");
    for (std::size_t i = 0; i < gens.size(); ++i) {
        if (static_cast<int>(gens[i].size()) != amb.dim)
            throw PreconditionFailed("Gap: generator dimension mismatch");
        if (lower[i] > upper[i]) throw PreconditionFailed("Gap: lower bound exceeds upper bound");
    }
}

Gap Gap::symmetric_z(const std::vector<long>& gens, const std::vector<long>& halfwidths) {
    Gap Q;
    Q.amb = Ambient{1, 0};
    Q.offset = {mpz_class(0)};
    for (std::size_t i = 0; i < gens.size(); ++i) {
        Q.gens.push_back({mpz_class(gens[i])});
        Q.lower.push_back(-halfwidths[i]);
        Q.upper.push_back(halfwidths[i]);
    }
    Q.validate();
    return Q;
}

Gap Gap::symmetric_zd(int dim, const std::vector<std::vector<long>>& gens,
                      const std::vector<long>& halfwidths) {
    Gap Q;
    Q.amb = Ambient{dim, 0};
    Q.offset.assign(dim, mpz_class(0));
    for (std::size_t i = 0; i < gens.size(); ++i) {
        Elem g;
        for (long c : gens[i]) g.push_back(mpz_class(c));
        Q.gens.push_back(std::move(g));
        Q.lower.push_back(-halfwidths[i]);
        Q.upper.push_back(halfwidths[i]);
    }
    Q.validate();
    return Q;
}

namespace {

void reduce_mod(Elem& e, const mpz_class& p) {
    if (p <= 0) return;
    for (auto& c : e) {
        c %= p;
        if (c < 0) c += p;
    }
}

// Exact rank over Q of the generator matrix; full column rank means the
// box-to-group map is injective for every dilate.
bool full_column_rank(const Gap& Q) {
    if (Q.amb.modulus > 0) return false;
    std::size_t r = Q.gens.size(), d = static_cast<std::size_t>(Q.amb.dim);
    if (r > d) return false;
    std::vector<std::vector<mpq_class>> m(d, std::vector<mpq_class>(r));
    for (std::size_t j = 0; j < r; ++j)
        for (std::size_t i = 0; i < d; ++i) m[i][j] = mpq_class(Q.gens[j][i]);
    std::size_t row = 0;
    for (std::size_t col = 0; col < r; ++col) {
        std::size_t piv = row;
        while (piv < d && m[piv][col] == 0) ++piv;
        if (piv == d) return false;
        std::swap(m[piv], m[row]);
        for (std::size_t i = row + 1; i < d; ++i) {
            if (m[i][col] == 0) continue;
            mpq_class f = m[i][col] / m[row][col];
            for (std::size_t j = col; j < r; ++j) m[i][j] -= f * m[row][j];
        }
        ++row;
    }
    return true;
}

} // namespace

Elem map_coeffs(const Gap& Q, const std::vector<long>& coeffs) {
    Elem res = Q.offset;
    for (std::size_t i = 0; i < Q.gens.size(); ++i)
        for (int c = 0; c < Q.amb.dim; ++c) res[c] += mpz_class(coeffs[i]) * Q.gens[i][c];
    reduce_mod(res, Q.amb.modulus);
    return res;
}

namespace {

template <typename Fn>
void for_each_coeff(const Gap& Q, Fn&& fn) {
    std::size_t r = Q.gens.size();
    std::vector<long> coeffs(r);
    for (std::size_t i = 0; i < r; ++i) coeffs[i] = Q.lower[i];
    while (true) {
        fn(coeffs);
        std::size_t pos = 0;
        while (pos < r && ++coeffs[pos] > Q.upper[pos]) coeffs[pos] = Q.lower[pos], ++pos;
        if (pos == r) break;
    }
}

} // namespace

EnumerationResult volume_and_enumerate(const Gap& Q, unsigned long cap) {
    Q.validate();
    EnumerationResult res;
    res.volume = Q.volume();
    if (res.volume > cap)
        throw CapExceeded("volume_and_enumerate: Vol(Q) = " + res.volume.get_str() + " exceeds cap");
    for_each_coeff(Q, [&](const std::vector<long>& c) { res.elements.insert(map_coeffs(Q, c)); });
    return res;
}

bool is_proper(const Gap& Q, long t, unsigned long cap) {
    Q.validate();
    if (t < 1) throw PreconditionFailed("is_proper: t >= 1");
    if (full_column_rank(Q)) return true;
    Gap D = transform(Q, t, 1);
    mpz_class vol = D.volume();
    if (vol > cap) throw CapExceeded("is_proper: Vol(t*Q) = " + vol.get_str() + " exceeds cap");
    std::set<Elem> seen;
    bool proper = true;
    for_each_coeff(D, [&](const std::vector<long>& c) {
        if (!proper) return;
        if (!seen.insert(map_coeffs(D, c)).second) proper = false;
    });
    return proper;
}

Gap transform(const Gap& Q, long dilate_l, long scale_c) {
    if (dilate_l < 1) throw PreconditionFailed("transform: dilate_l >= 1");
    if (scale_c == 0) throw PreconditionFailed("transform: scale_c must be nonzero");
    Gap R = Q;
    for (std::size_t i = 0; i < R.gens.size(); ++i) {
        for (auto& c : R.gens[i]) c *= scale_c;
        reduce_mod(R.gens[i], R.amb.modulus);
        R.lower[i] *= dilate_l;
        R.upper[i] *= dilate_l;
    }
    return R;
}

Gap sarkozy_shrink(const Gap& Q, long l) {
    if (!Q.symmetric()) throw PreconditionFailed("sarkozy_shrink: Q must be symmetric");
    if (l < 1) throw PreconditionFailed("sarkozy_shrink: l >= 1");
    Gap R = Q;
    for (std::size_t i = 0; i < R.gens.size(); ++i) {
        for (auto& c : R.gens[i]) c *= l;
        reduce_mod(R.gens[i], R.amb.modulus);
        long h = Q.upper[i] / (l * l);
        R.lower[i] = -h;
        R.upper[i] = h;
    }
    return R;
}

namespace {

// DFS over coefficients, outermost generator first, pruned by the reachable
// range of the remaining prefix (torsion-free ambients only).
bool contains_dfs(const Gap& Q, const std::vector<Elem>& lo_reach, const std::vector<Elem>& hi_reach,
                  Elem residual, std::size_t level, std::vector<long>& coeffs) {
    if (level == 0) {
        for (const auto& c : residual)
            if (c != 0) return false;
        return true;
    }
    std::size_t i = level - 1;
    for (long x = Q.lower[i]; x <= Q.upper[i]; ++x) {
        Elem rem = residual;
        bool ok = true;
        for (int c = 0; c < Q.amb.dim; ++c) {
            rem[c] -= mpz_class(x) * Q.gens[i][c];
            if (rem[c] < lo_reach[i][c] || rem[c] > hi_reach[i][c]) ok = false;
        }
        if (!ok) continue;
        coeffs[i] = x;
        if (contains_dfs(Q, lo_reach, hi_reach, std::move(rem), i, coeffs)) return true;
    }
    return false;
}

} // namespace

bool contains(const Gap& Q, const Elem& x, std::vector<long>* witness, int max_rank) {
    Q.validate();
    if (Q.rank() > max_rank)
        throw RankTooLarge("contains: rank " + std::to_string(Q.rank()) + " exceeds configured bound " +
                           std::to_string(max_rank));
    if (static_cast<int>(x.size()) != Q.amb.dim) throw PreconditionFailed("contains: dimension mismatch");

    if (Q.amb.modulus > 0) {
        // F_p: no range pruning, plain enumeration under an internal cap
        if (Q.volume() > 10'000'000) throw CapExceeded("contains: F_p membership beyond enumeration cap");
        Elem target = x;
        reduce_mod(target, Q.amb.modulus);
        bool found = false;
        std::vector<long> w;
        for_each_coeff(Q, [&](const std::vector<long>& c) {
            if (found) return;
            if (map_coeffs(Q, c) == target) {
                found = true;
                w = c;
            }
        });
        if (found && witness) *witness = w;
        return found;
    }

    std::size_t r = Q.gens.size();
    // reach[i] = range achievable by generators 0..i-1
    std::vector<Elem> lo_reach(r + 1, Elem(Q.amb.dim, mpz_class(0)));
    std::vector<Elem> hi_reach(r + 1, Elem(Q.amb.dim, mpz_class(0)));
    for (std::size_t i = 0; i < r; ++i)
        for (int c = 0; c < Q.amb.dim; ++c) {
            mpz_class a = mpz_class(Q.lower[i]) * Q.gens[i][c];
            mpz_class b = mpz_class(Q.upper[i]) * Q.gens[i][c];
            lo_reach[i + 1][c] = lo_reach[i][c] + std::min(a, b);
            hi_reach[i + 1][c] = hi_reach[i][c] + std::max(a, b);
        }

    Elem residual(Q.amb.dim);
    for (int c = 0; c < Q.amb.dim; ++c) residual[c] = x[c] - Q.offset[c];
    for (int c = 0; c < Q.amb.dim; ++c)
        if (residual[c] < lo_reach[r][c] || residual[c] > hi_reach[r][c]) return false;

    std::vector<long> coeffs(r, 0);
    bool found = contains_dfs(Q, lo_reach, hi_reach, residual, r, coeffs);
    if (found && witness) *witness = coeffs;
    return found;
}

EmbeddingCertificate freiman_embed(const walks::StepMultiset& V, unsigned k) {
    std::size_t n = V.n();
    mpz_class abssum = 0;
    for (long v : V.values) abssum += std::labs(v);
    mpz_class bound = (mpz_class(1) << n) * (abssum + 1);
    EmbeddingCertificate cert;
    if (bound <= 2) {
        cert.p = 2;
    } else {
        mpz_class below = bound - 1;
        mpz_nextprime(cert.p.get_mpz_t(), below.get_mpz_t());
    }
    for (long v : V.values) {
        mpz_class r = mpz_class(v) % cert.p;
        if (r < 0) r += cert.p;
        cert.Vp.push_back(r);
    }
    cert.order = k;
    return cert;
}

bool verify_rho_preserved(const EmbeddingCertificate& cert, const walks::StepMultiset& V) {
    std::size_t n = V.n();
    if (n > 23) throw BudgetExceeded("verify_rho_preserved: 2^n beyond brute-force cap");
    std::map<mpz_class, unsigned long> cz, cp;
    for (unsigned long mask = 0; mask < (1UL << n); ++mask) {
        mpz_class sz = 0, sp = 0;
        for (std::size_t i = 0; i < n; ++i) {
            long sgn = (mask >> i) & 1 ? 1 : -1;
            sz += sgn * mpz_class(V.values[i]);
            sp += sgn * cert.Vp[i];
        }
        sp %= cert.p;
        if (sp < 0) sp += cert.p;
        cz[sz]++;
        cp[sp]++;
    }
    unsigned long mz = 0, mp = 0;
    for (const auto& [v, c] : cz) mz = std::max(mz, c);
    for (const auto& [v, c] : cp) mp = std::max(mp, c);
    return mz == mp;
}

long embed_for_scan(const walks::StepMultiset& V, long k, long p_cap) {
    long maxabs = 0;
    long long abssum = 0;
    for (long v : V.values) {
        maxabs = std::max(maxabs, std::labs(v));
        abssum += std::labs(v);
    }
    long long bound = std::max(2 * abssum, 2 * static_cast<long long>(k) * maxabs) + 1;
    mpz_class below = static_cast<long>(bound - 1);
    if (below < 1) below = 1;
    mpz_class p;
    mpz_nextprime(p.get_mpz_t(), below.get_mpz_t());
    if (p > p_cap)
        throw BudgetExceeded("embed_for_scan: required prime " + p.get_str() + " exceeds cap " +
                             std::to_string(p_cap));
    return p.get_si();
}

std::set<mpz_class> iterated_sumset(const std::set<mpz_class>& X, long k) {
    std::set<mpz_class> S = X;
    for (long i = 1; i < k; ++i) {
        std::set<mpz_class> next;
        for (const auto& a : S)
            for (const auto& b : X) next.insert(a + b);
        S = std::move(next);
    }
    return S;
}

std::set<Elem> iterated_sumset_vec(const std::set<Elem>& X, long k) {
    std::set<Elem> S = X;
    for (long i = 1; i < k; ++i) {
        std::set<Elem> next;
        for (const auto& a : S)
            for (const auto& b : X) {
                Elem e(a.size());
                for (std::size_t c = 0; c < a.size(); ++c) e[c] = a[c] + b[c];
                next.insert(std::move(e));
            }
        S = std::move(next);
    }
    return S;
}

Gap divide_containment(const std::set<mpz_class>& X, long k, const Gap& P, unsigned long cap) {
    P.validate();
    if (!X.count(0)) throw PreconditionFailed("divide_containment: hypothesis 0 in X failed");
    if (!P.symmetric()) throw PreconditionFailed("divide_containment: hypothesis P symmetric failed");
    if (!is_proper(P, 2, cap)) throw PreconditionFailed("divide_containment: hypothesis P 2-proper failed");

    auto kX = iterated_sumset(X, k);
    auto Penum = volume_and_enumerate(P, cap);
    for (const auto& s : kX)
        if (!Penum.elements.count({s}))
            throw PreconditionFailed("divide_containment: hypothesis kX subset P failed at " + s.get_str());

    Gap Qp = P;
    for (std::size_t i = 0; i < Qp.gens.size(); ++i) {
        long h = 2 * P.upper[i] / k;
        Qp.lower[i] = -h;
        Qp.upper[i] = h;
    }
    for (const auto& x : X)
        if (!contains(Qp, {x}))
            throw Error("divide_containment: conclusion violated at " + x.get_str());
    return Qp;
}

SarkozyCoverResult sarkozy_cover(const std::set<mpz_class>& A, const Gap& Q, const mpq_class& delta,
                                 long m_budget, long l_budget, unsigned long cap) {
    Q.validate();
    for (const auto& a : A)
        if (!A.count(-a)) throw PreconditionFailed("sarkozy_cover: A must be symmetric");
    if (!is_proper(Q, 1, cap)) throw PreconditionFailed("sarkozy_cover: Q must be proper");
    auto Qenum = volume_and_enumerate(Q, cap);
    for (const auto& a : A)
        if (!Qenum.elements.count({a})) throw PreconditionFailed("sarkozy_cover: A must be a subset of Q");
    if (mpq_class(static_cast<unsigned long>(A.size())) < delta * mpq_class(Qenum.volume))
        throw PreconditionFailed("sarkozy_cover: |A| < delta |Q|");

    std::set<mpz_class> twoA = iterated_sumset(A, 2);
    std::set<mpz_class> sum = twoA; // 2mA
    for (long m = 1; m <= m_budget; ++m) {
        for (long l = 1; l <= l_budget; ++l) {
            auto Qlenum = volume_and_enumerate(sarkozy_shrink(Q, l), cap);
            bool ok = true;
            for (const auto& e : Qlenum.elements)
                if (!sum.count(e[0])) {
                    ok = false;
                    break;
                }
            if (ok) return {m, l};
        }
        if (m < m_budget) {
            std::set<mpz_class> next;
            for (const auto& a : sum)
                for (const auto& b : twoA) next.insert(a + b);
            sum = std::move(next);
        }
    }
    throw SearchBudgetExceeded("sarkozy_cover: no (m,l) within budget (instance beyond desk scale)");
}

} // namespace lolab::gap
