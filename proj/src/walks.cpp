#include "lolab/walks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <unordered_map>

#include "lolab/errors.hpp"

namespace lolab::walks {

StepMultiset::StepMultiset(std::vector<long> v) : values(std::move(v)) {
    if (values.empty()) throw PreconditionFailed("StepMultiset: n must be >= 1");
    std::sort(values.begin(), values.end());
}

std::map<long, std::size_t> StepMultiset::multiplicities() const {
    std::map<long, std::size_t> m;
    for (long v : values) m[v]++;
    return m;
}

EtaSpec EtaSpec::bernoulli() {
    EtaSpec e;
    e.atoms = {{1, mpq_class(1, 2)}, {-1, mpq_class(1, 2)}};
    e.label = "bernoulli";
    e.validate();
    return e;
}

EtaSpec EtaSpec::lazy(const mpq_class& mu) {
    if (mu <= 0 || mu > 1) throw PreconditionFailed("lazy(mu): need 0 < mu <= 1");
    EtaSpec e;
    mpq_class half = mu / 2;
    half.canonicalize();
    mpq_class rest = 1 - mu;
    rest.canonicalize();
    e.atoms = {{1, half}, {-1, half}};
    if (rest != 0) e.atoms.push_back({0, rest});
    e.label = "lazy";
    e.validate();
    return e;
}

EtaSpec EtaSpec::custom(std::vector<Atom> atoms) {
    EtaSpec e;
    e.atoms = std::move(atoms);
    e.label = "custom";
    e.validate();
    return e;
}

bool EtaSpec::symmetric() const {
    std::map<long, mpq_class> m;
    for (const auto& a : atoms) m[a.value] += a.prob;
    for (const auto& [v, p] : m) {
        auto it = m.find(-v);
        if (it == m.end() || it->second != p) return false;
    }
    return true;
}

void EtaSpec::validate() const {
    if (atoms.empty()) throw PreconditionFailed("EtaSpec: no atoms");
    mpq_class sum = 0;
    std::map<long, bool> seen;
    for (const auto& a : atoms) {
        if (a.prob <= 0) throw PreconditionFailed("EtaSpec: atom probability must be positive");
        if (seen.count(a.value)) throw PreconditionFailed("EtaSpec: duplicate atom value");
        seen[a.value] = true;
        sum += a.prob;
    }
    if (sum != 1) throw PreconditionFailed("EtaSpec: probabilities must sum to 1");
}

mpq_class WalkDistribution::prob_at(long x) const {
    if (x < lo || x - lo >= static_cast<long>(counts.size())) return mpq_class(0);
    mpq_class q(counts[static_cast<std::size_t>(x - lo)], denom);
    q.canonicalize();
    return q;
}

std::map<long, mpq_class> WalkDistribution::pmf() const {
    std::map<long, mpq_class> m;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] != 0) {
            mpq_class q(counts[i], denom);
            q.canonicalize();
            m[lo + static_cast<long>(i)] = q;
        }
    }
    return m;
}

mpq_class WalkDistribution::total_mass() const {
    mpz_class s = 0;
    for (const auto& c : counts) s += c;
    mpq_class q(s, denom);
    q.canonicalize();
    return q;
}

namespace {

struct ScaledEta {
    std::vector<long> values;
    std::vector<unsigned long> weights; // prob * denom_base
    mpz_class denom_base;               // lcm of atom denominators
};

ScaledEta scale_eta(const EtaSpec& eta) {
    ScaledEta s;
    mpz_class d = 1;
    for (const auto& a : eta.atoms) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), a.prob.get_den().get_mpz_t());
    s.denom_base = d;
    for (const auto& a : eta.atoms) {
        mpz_class w = a.prob.get_num() * (d / a.prob.get_den());
        if (!w.fits_ulong_p()) throw BudgetExceeded("EtaSpec: atom weight too large");
        s.values.push_back(a.value);
        s.weights.push_back(w.get_ui());
    }
    return s;
}

// Dense DP over the full support range.
WalkDistribution convolve_full(const StepMultiset& V, const ScaledEta& eta,
                               const Budget& budget, std::size_t n) {
    long amin = *std::min_element(eta.values.begin(), eta.values.end());
    long amax = *std::max_element(eta.values.begin(), eta.values.end());

    // steps sorted by |v| ascending keeps the intermediate support minimal
    std::vector<long> steps = V.values;
    std::sort(steps.begin(), steps.end(), [](long a, long b) { return std::llabs(a) < std::llabs(b); });

    // budget projection
    {
        unsigned long long cells = 0, width = 1;
        long lo = 0, hi = 0;
        for (long v : steps) {
            long d1 = v * amin, d2 = v * amax;
            lo += std::min(d1, d2);
            hi += std::max(d1, d2);
            width = static_cast<unsigned long long>(hi - lo) + 1;
            cells += width;
            if (width > budget.max_width || cells > budget.max_cells)
                throw BudgetExceeded("exact_distribution: projected table of " + std::to_string(cells) + " cells exceeds budget");
        }
    }

    std::vector<mpz_class> cur(1, mpz_class(1));
    long cur_lo = 0;
    for (long v : steps) {
        long d1 = v * amin, d2 = v * amax;
        long add_lo = std::min(d1, d2), add_hi = std::max(d1, d2);
        long new_lo = cur_lo + add_lo;
        std::size_t new_size = cur.size() + static_cast<std::size_t>(add_hi - add_lo);
        std::vector<mpz_class> next(new_size);
        for (std::size_t i = 0; i < cur.size(); ++i) {
            if (cur[i] == 0) continue;
            long x = cur_lo + static_cast<long>(i);
            for (std::size_t j = 0; j < eta.values.size(); ++j) {
                long y = x + v * eta.values[j];
                mpz_addmul_ui(next[static_cast<std::size_t>(y - new_lo)].get_mpz_t(),
                              cur[i].get_mpz_t(), eta.weights[j]);
            }
        }
        cur = std::move(next);
        cur_lo = new_lo;
    }

    WalkDistribution dist;
    dist.counts = std::move(cur);
    dist.lo = cur_lo;
    dist.n = n;
    mpz_pow_ui(dist.denom.get_mpz_t(), eta.denom_base.get_mpz_t(), static_cast<unsigned long>(n));
    return dist;
}

// Symmetric eta: the distribution stays symmetric about 0 after every step,
// so only the x >= 0 half is stored during the DP. Halves time and memory,
// which matters for the large reference instances.
WalkDistribution convolve_symmetric(const StepMultiset& V, const ScaledEta& eta,
                                    const Budget& budget, std::size_t n) {
    long amax = 0;
    for (long a : eta.values) amax = std::max(amax, std::labs(a));

    std::vector<long> steps = V.values;
    std::sort(steps.begin(), steps.end(), [](long a, long b) { return std::llabs(a) < std::llabs(b); });

    {
        unsigned long long cells = 0, hi = 0;
        for (long v : steps) {
            hi += static_cast<unsigned long long>(std::llabs(v)) * static_cast<unsigned long long>(amax);
            cells += hi + 1;
            if (2 * hi + 1 > budget.max_width || 2 * cells > budget.max_cells)
                throw BudgetExceeded("exact_distribution: projected table of " + std::to_string(2 * cells) + " cells exceeds budget");
        }
    }

    std::vector<mpz_class> cur(1, mpz_class(1)); // index = x >= 0
    for (long v : steps) {
        long av = std::labs(v);
        if (av == 0 || amax == 0) {
            // identity convolution up to total weight
            unsigned long total = 0;
            for (unsigned long w : eta.weights) total += w;
            for (auto& c : cur) c *= total;
            continue;
        }
        long add = av * amax;
        std::size_t new_size = cur.size() + static_cast<std::size_t>(add);
        std::vector<mpz_class> next(new_size);
        for (std::size_t i = 0; i < cur.size(); ++i) {
            if (cur[i] == 0) continue;
            long x = static_cast<long>(i);
            for (std::size_t j = 0; j < eta.values.size(); ++j) {
                long y = std::labs(x + v * eta.values[j]);
                mpz_addmul_ui(next[static_cast<std::size_t>(y)].get_mpz_t(),
                              cur[i].get_mpz_t(), eta.weights[j]);
            }
        }
        cur = std::move(next);
    }

    // expand the half table into the full symmetric support; cur[x] holds the
    // combined count of +x and -x, which split evenly by symmetry
    long hi = static_cast<long>(cur.size()) - 1;
    WalkDistribution dist;
    dist.lo = -hi;
    dist.counts.resize(static_cast<std::size_t>(2 * hi + 1));
    for (long x = 1; x <= hi; ++x) {
        mpz_class half = cur[static_cast<std::size_t>(x)] / 2;
        dist.counts[static_cast<std::size_t>(hi - x)] = half;
        dist.counts[static_cast<std::size_t>(hi + x)] = std::move(half);
    }
    dist.counts[static_cast<std::size_t>(hi)] = std::move(cur[0]);
    dist.n = n;
    mpz_pow_ui(dist.denom.get_mpz_t(), eta.denom_base.get_mpz_t(), static_cast<unsigned long>(n));
    return dist;
}

} // namespace

WalkDistribution exact_distribution(const StepMultiset& V, const EtaSpec& eta, const Budget& budget) {
    if (V.values.empty()) throw PreconditionFailed("exact_distribution: empty multiset");
    eta.validate();
    ScaledEta scaled = scale_eta(eta);
    if (eta.symmetric()) return convolve_symmetric(V, scaled, budget, V.n());
    return convolve_full(V, scaled, budget, V.n());
}

RhoResult rho(const StepMultiset& V, const EtaSpec& eta, const Budget& budget) {
    WalkDistribution d = exact_distribution(V, eta, budget);
    std::size_t best = 0;
    for (std::size_t i = 1; i < d.counts.size(); ++i)
        if (d.counts[i] > d.counts[best]) best = i;
    RhoResult r;
    r.rho = mpq_class(d.counts[best], d.denom);
    r.rho.canonicalize();
    r.argmax = d.lo + static_cast<long>(best);
    return r;
}

mpq_class rho_bruteforce(const StepMultiset& V, const EtaSpec& eta) {
    eta.validate();
    ScaledEta scaled = scale_eta(eta);
    std::size_t n = V.n(), k = scaled.values.size();
    double projected = std::pow(static_cast<double>(k), static_cast<double>(n));
    if (projected > 1e7) throw BudgetExceeded("rho_bruteforce: atoms^n exceeds 1e7");

    std::unordered_map<long, mpz_class> acc;
    std::vector<std::size_t> idx(n, 0);
    while (true) {
        long sum = 0;
        unsigned long long w = 1;
        for (std::size_t i = 0; i < n; ++i) {
            sum += V.values[i] * scaled.values[idx[i]];
            w *= scaled.weights[idx[i]];
        }
        acc[sum] += static_cast<unsigned long>(w);
        // odometer
        std::size_t pos = 0;
        while (pos < n && ++idx[pos] == k) idx[pos++] = 0;
        if (pos == n) break;
    }
    mpz_class best = 0;
    for (const auto& [v, c] : acc)
        if (c > best) best = c;
    mpz_class denom;
    mpz_pow_ui(denom.get_mpz_t(), scaled.denom_base.get_mpz_t(), static_cast<unsigned long>(n));
    mpq_class r(best, denom);
    r.canonicalize();
    return r;
}

mpq_class erdos_bound(unsigned n) {
    if (n == 0) throw PreconditionFailed("erdos_bound: n >= 1");
    mpz_class num;
    mpz_bin_uiui(num.get_mpz_t(), n, n / 2);
    mpz_class den = 1;
    den <<= n;
    mpq_class r(num, den);
    r.canonicalize();
    return r;
}

StanleyResult stanley_reference(unsigned n, const Budget& budget) {
    if (n % 2 == 0) throw PreconditionFailed("stanley_reference: n must be odd");
    long h = static_cast<long>(n / 2);
    std::vector<long> vals;
    for (long x = -h; x <= h; ++x) vals.push_back(x);
    StanleyResult res;
    res.V0 = StepMultiset(vals);
    res.rho0 = rho(res.V0, EtaSpec::bernoulli(), budget).rho;
    return res;
}

HalaszResult halasz_count(const StepMultiset& V, unsigned l) {
    if (l == 0) throw PreconditionFailed("halasz_count: l >= 1");
    std::size_t n = V.n();
    double projected = std::pow(static_cast<double>(n), 2.0 * l);
    if (projected > 1e8) throw BudgetExceeded("halasz_count: n^(2l) exceeds 1e8");

    // meet in the middle: tally all ordered l-tuple sums, then sum squares
    std::unordered_map<long, unsigned long long> sums;
    std::vector<std::size_t> idx(l, 0);
    while (true) {
        long s = 0;
        for (std::size_t i = 0; i < l; ++i) s += V.values[idx[i]];
        sums[s]++;
        std::size_t pos = 0;
        while (pos < l && ++idx[pos] == n) idx[pos++] = 0;
        if (pos == l) break;
    }
    HalaszResult r;
    r.Rl = 0;
    for (const auto& [s, c] : sums) r.Rl += mpz_class(static_cast<unsigned long>(c)) * mpz_class(static_cast<unsigned long>(c));
    r.bound = r.Rl.get_d() * std::pow(static_cast<double>(n), -2.0 * l - 0.5);
    return r;
}

} // namespace lolab::walks
