#include "lolab/char_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "lolab/errors.hpp"
#include "lolab/rng.hpp"

namespace lolab::charsum {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kPi = 3.1415926535897932384626433832795;

long norm_res(long v, long p) {
    long r = v % p;
    return r < 0 ? r + p : r;
}

// ||x/p|| in units of 1/p: min(r, p-r)
inline long toral_dist(long r, long p) { return std::min(r, p - r); }

// multiplicity map of residues
std::map<long, long> residue_mult(const std::vector<long>& Vp, long p) {
    std::map<long, long> m;
    for (long v : Vp) m[norm_res(v, p)]++;
    return m;
}

// level sums sum_i ||v_i xi / p||^2 * p^2 for all xi, one incremental pass
// per distinct step value
std::vector<unsigned long long> all_level_sums(const std::vector<long>& Vp, long p) {
    std::vector<unsigned long long> num(static_cast<std::size_t>(p), 0);
    for (const auto& [v, mult] : residue_mult(Vp, p)) {
        long r = 0;
        for (long xi = 0; xi < p; ++xi) {
            long d = toral_dist(r, p);
            num[static_cast<std::size_t>(xi)] +=
                static_cast<unsigned long long>(mult) * static_cast<unsigned long long>(d) * static_cast<unsigned long long>(d);
            r += v;
            if (r >= p) r -= p;
        }
    }
    return num;
}

} // namespace

unsigned long long level_sum_num(const std::vector<long>& Vp, long p, long a) {
    unsigned long long s = 0;
    long ar = norm_res(a, p);
    for (long v : Vp) {
        long r = static_cast<long>((static_cast<unsigned long long>(norm_res(v, p)) * static_cast<unsigned long long>(ar)) % static_cast<unsigned long long>(p));
        long d = toral_dist(r, p);
        s += static_cast<unsigned long long>(d) * static_cast<unsigned long long>(d);
    }
    return s;
}

ConditionResult condition_check(const std::vector<walks::EtaSpec>& etas, long p,
                                const std::vector<long>& Vp, double c, std::optional<double> mu) {
    if (etas.empty()) throw PreconditionFailed("condition_check: no eta given");
    std::size_t n = Vp.size();
    if (static_cast<double>(p) * static_cast<double>(n) > 2e8)
        throw BudgetExceeded("condition_check: p*n beyond scan budget");

    auto eta_at = [&](std::size_t i) -> const walks::EtaSpec& {
        return etas.size() == 1 ? etas[0] : etas.at(i);
    };

    ConditionResult res;
    res.holds = true;
    res.min_slack = 1e300;
    double pp = static_cast<double>(p) * static_cast<double>(p);
    for (long t = 0; t < p; ++t) {
        double lhs = 1.0;
        for (std::size_t i = 0; i < n && lhs > 0; ++i) {
            long x = static_cast<long>((static_cast<unsigned long long>(norm_res(Vp[i], p)) * static_cast<unsigned long long>(t)) % static_cast<unsigned long long>(p));
            double re = 0, im = 0;
            for (const auto& atom : eta_at(i).atoms) {
                double ang = kTwoPi * static_cast<double>(norm_res(atom.value * x, p)) / static_cast<double>(p);
                double q = atom.prob.get_d();
                re += q * std::cos(ang);
                im += q * std::sin(ang);
            }
            lhs *= std::sqrt(re * re + im * im);
        }
        double rhs = std::exp(-c * static_cast<double>(level_sum_num(Vp, p, t)) / pp);
        double slack = rhs - lhs;
        if (slack < res.min_slack) {
            res.min_slack = slack;
            res.worst_t = t;
        }
        if (lhs > rhs + 1e-9) res.holds = false;
    }

    if (mu) {
        res.mu_bounded = true;
        for (std::size_t i = 0; i < (etas.size() == 1 ? 1 : n) && res.mu_bounded; ++i) {
            for (long x = 0; x < p; ++x) {
                double re = 0, im = 0;
                for (const auto& atom : eta_at(i).atoms) {
                    double ang = kTwoPi * static_cast<double>(norm_res(atom.value * x, p)) / static_cast<double>(p);
                    double q = atom.prob.get_d();
                    re += q * std::cos(ang);
                    im += q * std::sin(ang);
                }
                double lhs = std::sqrt(re * re + im * im);
                double rhs = (1.0 - *mu) + *mu * std::cos(kTwoPi * static_cast<double>(x) / static_cast<double>(p));
                if (lhs > rhs + 1e-9) {
                    res.mu_bounded = false;
                    break;
                }
            }
        }
    }
    return res;
}

CharBound char_bound(const std::vector<long>& Vp, long p, const Config& cfg) {
    if (p > cfg.p_cap) throw BudgetExceeded("char_bound: p exceeds cap");
    auto mult = residue_mult(Vp, p);
    if (static_cast<double>(p) * static_cast<double>(mult.size()) > 2e9)
        throw BudgetExceeded("char_bound: p * distinct exceeds budget");

    double pp = static_cast<double>(p) * static_cast<double>(p);
    double prod_sum = 0, exp_sum = 0;
    for (long xi = 0; xi < p; ++xi) {
        double prod = 1.0;
        unsigned long long num = 0;
        for (const auto& [v, m] : mult) {
            long r = static_cast<long>((static_cast<unsigned long long>(v) * static_cast<unsigned long long>(xi)) % static_cast<unsigned long long>(p));
            long d = toral_dist(r, p);
            num += static_cast<unsigned long long>(m) * static_cast<unsigned long long>(d) * static_cast<unsigned long long>(d);
            double f = std::fabs(std::cos(kPi * static_cast<double>(r) / static_cast<double>(p)));
            prod *= std::pow(f, static_cast<double>(m));
        }
        prod_sum += prod;
        exp_sum += std::exp(-2.0 * static_cast<double>(num) / pp);
    }
    return {prod_sum / static_cast<double>(p), exp_sum / static_cast<double>(p)};
}

LevelSetReport heavy_level(const std::vector<long>& Vp, long p, const mpq_class& rho, const Config& cfg) {
    if (p > cfg.p_cap) throw BudgetExceeded("heavy_level: p exceeds cap");
    std::size_t n = Vp.size();
    if (n == 0) throw PreconditionFailed("heavy_level: empty multiset");

    LevelSetReport rep;
    rep.config = cfg;
    rep.p = p;
    rep.values.reserve(n);
    for (long v : Vp) rep.values.push_back(norm_res(v, p));
    rep.rho = rho;

    int m_max = static_cast<int>(std::ceil(cfg.m_range_A * std::log(std::max<double>(2.0, static_cast<double>(n)))));
    auto num = all_level_sums(rep.values, p);
    unsigned long long pp = static_cast<unsigned long long>(p) * static_cast<unsigned long long>(p);

    // histogram of the smallest level containing each xi
    std::vector<long> hist(static_cast<std::size_t>(m_max) + 2, 0);
    for (auto s : num) {
        unsigned long long mmin = (s + pp - 1) / pp; // ceil
        if (mmin < 1) mmin = 1;
        if (mmin <= static_cast<unsigned long long>(m_max)) hist[static_cast<std::size_t>(mmin)]++;
    }
    double rho_d = rho.get_d();
    long cum = 0;
    int chosen = 0;
    for (int m = 1; m <= m_max; ++m) {
        cum += hist[static_cast<std::size_t>(m)];
        if (static_cast<double>(cum) * std::exp(static_cast<double>(-m + 2)) >=
            rho_d * static_cast<double>(p) - cfg.slack) {
            chosen = m;
            break;
        }
    }
    if (chosen == 0)
        throw NoHeavyLevel("heavy_level: no level m <= " + std::to_string(m_max) +
                           " satisfies |S_m| exp(-m+2) >= rho p (is the supplied rho too large?)");

    rep.m = chosen;
    unsigned long long bound = static_cast<unsigned long long>(chosen) * pp;
    for (long xi = 0; xi < p; ++xi)
        if (num[static_cast<std::size_t>(xi)] <= bound) rep.Sm.push_back(xi);
    rep.heavy_cert = true;
    return rep;
}

void core_select(LevelSetReport& rep, const mpq_class& epsilon, long budget_n_prime) {
    if (rep.Sm.empty()) throw PreconditionFailed("core_select: run heavy_level first");
    std::size_t n = rep.values.size();
    long p = rep.p;
    rep.epsilon = epsilon;
    rep.budget_n_prime = budget_n_prime;

    // per distinct value: s(v) = sum_{xi in S_m} ||v xi / p||^2 * p^2
    std::map<long, unsigned long long> sums;
    for (const auto& [v, mult] : residue_mult(rep.values, p)) {
        unsigned long long s = 0;
        for (long xi : rep.Sm) {
            long r = static_cast<long>((static_cast<unsigned long long>(v) * static_cast<unsigned long long>(xi)) % static_cast<unsigned long long>(p));
            long d = toral_dist(r, p);
            s += static_cast<unsigned long long>(d) * static_cast<unsigned long long>(d);
        }
        sums[v] = s;
    }

    // threshold: s <= eps^-1 (m/n) |S_m| p^2, or (m/n') |S_m| p^2 in budget mode
    mpz_class pp = mpz_class(p) * mpz_class(p);
    mpz_class rhs = mpz_class(rep.m) * mpz_class(static_cast<unsigned long>(rep.Sm.size())) * pp;
    rep.core_idx.clear();
    rep.core.clear();
    rep.exceptional.clear();
    std::vector<std::pair<unsigned long long, long>> exc; // (level sum, value)
    for (std::size_t i = 0; i < n; ++i) {
        unsigned long long s = sums[rep.values[i]];
        mpz_class lhs;
        bool in_core;
        if (budget_n_prime > 0) {
            lhs = mpz_class(static_cast<unsigned long>(s)) * budget_n_prime;
            in_core = lhs <= rhs;
        } else {
            lhs = mpz_class(static_cast<unsigned long>(s)) * static_cast<unsigned long>(n) * epsilon.get_num();
            in_core = lhs <= rhs * epsilon.get_den();
        }
        if (in_core) {
            rep.core_idx.push_back(i);
            rep.core.push_back(rep.values[i]);
        } else {
            exc.push_back({s, rep.values[i]});
        }
    }
    std::sort(exc.begin(), exc.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    for (const auto& [s, v] : exc) rep.exceptional.push_back(v);
}

void dual_set(LevelSetReport& rep, long p_scan_cap) {
    if (rep.Sm.empty()) throw PreconditionFailed("dual_set: run heavy_level first");
    long p = rep.p;
    if (p > p_scan_cap) throw BudgetExceeded("dual_set: p exceeds full-scan cap");
    if (static_cast<double>(p) * static_cast<double>(rep.Sm.size()) > 2e9)
        throw BudgetExceeded("dual_set: p * |S_m| beyond budget");

    unsigned long long pp = static_cast<unsigned long long>(p) * static_cast<unsigned long long>(p);
    unsigned __int128 rhs = static_cast<unsigned __int128>(rep.Sm.size()) * pp;
    rep.dual.clear();
    double sum_Ta2 = 0;
    bool ta_ok = true;
    for (long a = 0; a < p; ++a) {
        unsigned __int128 s = 0;
        double Ta = 0;
        for (long xi : rep.Sm) {
            long r = static_cast<long>((static_cast<unsigned long long>(a) * static_cast<unsigned long long>(xi)) % static_cast<unsigned long long>(p));
            long d = toral_dist(r, p);
            s += static_cast<unsigned long long>(d) * static_cast<unsigned long long>(d);
            Ta += std::cos(kTwoPi * static_cast<double>(r) / static_cast<double>(p));
        }
        sum_Ta2 += Ta * Ta;
        if (static_cast<unsigned __int128>(rep.config.dual_constant) * s <= rhs) {
            rep.dual.push_back(a);
            if (Ta < 0.5 * static_cast<double>(rep.Sm.size()) - rep.config.slack) ta_ok = false;
        }
    }
    rep.dual_computed = true;
    rep.dual_card_cert = static_cast<double>(rep.dual.size()) * static_cast<double>(rep.Sm.size()) <=
                         8.0 * static_cast<double>(p) + rep.config.slack;
    rep.dual_Ta_cert = ta_ok && sum_Ta2 <= 2.0 * static_cast<double>(p) * static_cast<double>(rep.Sm.size()) *
                                               (1.0 + 1e-12) + rep.config.slack;
}

void growth_set(LevelSetReport& rep, long k, std::uint64_t cap) {
    if (rep.core.empty() && rep.core_idx.empty())
        throw PreconditionFailed("growth_set: run core_select first");
    if (k < 1) throw PreconditionFailed("growth_set: k >= 1");
    long p = rep.p;
    rep.k = k;

    std::vector<long> base; // V'' = distinct(V') + {0}
    {
        std::vector<char> mark(static_cast<std::size_t>(p), 0);
        mark[0] = 1;
        for (long v : rep.core) mark[static_cast<std::size_t>(v)] = 1;
        for (long i = 0; i < p; ++i)
            if (mark[static_cast<std::size_t>(i)]) base.push_back(i);
    }

    // premise check (triangle inequality bound) on sampled elements of the
    // partial sumsets, and the explicit iterated sumset
    std::size_t n = rep.values.size();
    mpz_class pp = mpz_class(p) * mpz_class(p);
    mpz_class prem_rhs = mpz_class(k) * mpz_class(k) * mpz_class(rep.m) *
                         mpz_class(static_cast<unsigned long>(rep.Sm.size())) * pp;
    // eps^-1 factor (or n/n' in budget mode)
    bool premise = true;

    std::vector<long> cur = base;
    std::vector<char> dual_mark;
    if (rep.dual_computed) {
        dual_mark.assign(static_cast<std::size_t>(p), 0);
        for (long a : rep.dual) dual_mark[static_cast<std::size_t>(a)] = 1;
    }
    bool inclusion = true;

    Rng rng(0x10c5ULL); // fixed: sampling is part of the report contract
    for (long l = 1; l <= k; ++l) {
        // sample up to 100 elements of the l-fold sumset
        std::size_t samples = std::min<std::size_t>(100, cur.size());
        for (std::size_t t = 0; t < samples; ++t) {
            long a = cur[rng.next_below(cur.size())];
            unsigned long long s = 0;
            for (long xi : rep.Sm) {
                long r = static_cast<long>((static_cast<unsigned long long>(a) * static_cast<unsigned long long>(xi)) % static_cast<unsigned long long>(p));
                long d = toral_dist(r, p);
                s += static_cast<unsigned long long>(d) * static_cast<unsigned long long>(d);
            }
            mpz_class lhs;
            if (rep.budget_n_prime > 0)
                lhs = mpz_class(static_cast<unsigned long>(s)) * rep.budget_n_prime;
            else
                lhs = mpz_class(static_cast<unsigned long>(s)) * static_cast<unsigned long>(n) * rep.epsilon.get_num();
            mpz_class rhs = rep.budget_n_prime > 0 ? prem_rhs : prem_rhs * rep.epsilon.get_den();
            if (lhs > rhs) premise = false;
        }
        if (rep.dual_computed)
            for (long a : cur)
                if (!dual_mark[static_cast<std::size_t>(a)]) {
                    inclusion = false;
                    break;
                }
        if (l == k) break;
        // next sumset layer
        std::vector<char> mark(static_cast<std::size_t>(p), 0);
        std::uint64_t ops = static_cast<std::uint64_t>(cur.size()) * base.size();
        if (ops > cap) throw BudgetExceeded("growth_set: sumset layer exceeds cap");
        for (long a : cur)
            for (long b : base) {
                long s = a + b;
                if (s >= p) s -= p;
                mark[static_cast<std::size_t>(s)] = 1;
            }
        cur.clear();
        for (long i = 0; i < p; ++i)
            if (mark[static_cast<std::size_t>(i)]) cur.push_back(i);
    }

    rep.growth = cur;
    rep.premise_holds = premise;
    if (rep.dual_computed) {
        rep.inclusion_checked = true;
        rep.inclusion_holds = inclusion;
    }
    double target = (1.0 / rep.rho.get_d()) * std::exp(static_cast<double>(-rep.m + 2));
    rep.growth_ratio = static_cast<double>(rep.growth.size()) / target;
}

} // namespace lolab::charsum
