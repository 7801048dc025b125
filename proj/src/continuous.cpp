#include "lolab/continuous.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "lolab/errors.hpp"

namespace lolab::continuous {

namespace {

double toral(double x) { return std::fabs(x - std::nearbyint(x)); }

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

} // namespace

VectorMultiset::VectorMultiset(int dim, std::vector<std::vector<double>> v) : d(dim), vecs(std::move(v)) {
    if (d < 1 || d > 4) throw PreconditionFailed("VectorMultiset: d in [1, 4]");
    for (const auto& x : vecs)
        if (static_cast<int>(x.size()) != d)
            throw PreconditionFailed("VectorMultiset: vector dimension mismatch");
    if (std::fabs(energy() - 1.0) > 1e-12)
        throw PreconditionFailed("VectorMultiset: sum ||v_i||^2 must be 1");
}

VectorMultiset VectorMultiset::normalized(int dim, std::vector<std::vector<double>> v) {
    double e = 0;
    for (const auto& x : v)
        for (double c : x) e += c * c;
    if (e <= 0) throw PreconditionFailed("VectorMultiset: zero energy");
    double s = 1.0 / std::sqrt(e);
    for (auto& x : v)
        for (double& c : x) c *= s;
    return VectorMultiset(dim, std::move(v));
}

double VectorMultiset::energy() const {
    double e = 0;
    for (const auto& x : vecs)
        for (double c : x) e += c * c;
    return e;
}

RealEta RealEta::bernoulli() {
    RealEta z;
    z.kind = Kind::atoms;
    z.atoms = {{-1.0, 0.5}, {1.0, 0.5}};
    z.cz = 2.0;
    return z;
}

RealEta RealEta::gaussian(double sigma) {
    RealEta z;
    z.kind = Kind::gaussian;
    z.sigma = sigma;
    return z;
}

RealEta RealEta::make_atoms(std::vector<Atom> atoms) {
    RealEta z;
    z.kind = Kind::atoms;
    z.atoms = std::move(atoms);
    double s = 0;
    for (const auto& a : z.atoms) {
        if (a.prob <= 0) throw PreconditionFailed("RealEta: atom probabilities positive");
        s += a.prob;
    }
    if (std::fabs(s - 1.0) > 1e-12) throw PreconditionFailed("RealEta: probabilities must sum to 1");
    return z;
}

double RealEta::sample(Rng& rng) const {
    if (kind == Kind::gaussian) return sigma * rng.gaussian();
    double u = rng.next_double();
    for (const auto& a : atoms) {
        if (u < a.prob) return a.value;
        u -= a.prob;
    }
    return atoms.back().value;
}

double z_norm_sq_exact(double w, const RealEta& z) {
    if (!z.exact()) throw PreconditionFailed("z_norm_sq_exact: atom list required");
    double s = 0;
    for (const auto& a : z.atoms)
        for (const auto& b : z.atoms) {
            double t = toral(w * (a.value - b.value));
            s += a.prob * b.prob * t * t;
        }
    return s;
}

MCEstimate z_norm(double w, const RealEta& z, std::uint64_t trials, std::uint64_t seed) {
    if (z.exact()) return {std::sqrt(z_norm_sq_exact(w, z)), 0, 0, true};
    if (trials < 10'000) throw PreconditionFailed("z_norm: trials >= 1e4 for sampled z");
    Rng rng(seed);
    double s = 0, s2 = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        double y = z.sample(rng) - z.sample(rng);
        double v = toral(w * y);
        s += v * v;
        s2 += v * v * v * v;
    }
    double mean = s / trials;
    double var = std::max(0.0, s2 / trials - mean * mean);
    double norm = std::sqrt(mean);
    // delta method for the sqrt
    double sig = norm > 0 ? std::sqrt(var / trials) / (2 * norm) : std::sqrt(std::sqrt(var / trials));
    return {norm, sig, trials, false};
}

double cz_window(const RealEta& z, std::uint64_t trials, std::uint64_t seed, double budget) {
    if (z.exact()) {
        std::map<double, double> mass; // |z1 - z2| -> prob
        for (const auto& a : z.atoms)
            for (const auto& b : z.atoms) mass[std::fabs(a.value - b.value)] += a.prob * b.prob;
        double acc = 0;
        for (const auto& [d, p] : mass) {
            if (d < 1.0 - 1e-12) continue;
            acc += p;
            if (acc >= 0.5 - 1e-12) return d;
        }
        throw NoWindow("cz_window: P(1 <= |z1-z2|) < 1/2");
    }
    Rng rng(seed);
    std::vector<double> ys(trials);
    for (auto& y : ys) y = std::fabs(z.sample(rng) - z.sample(rng));
    std::sort(ys.begin(), ys.end());
    auto lo = std::lower_bound(ys.begin(), ys.end(), 1.0);
    for (double C = 1.0; C <= budget + 1e-9; C += 0.05) {
        auto hi = std::upper_bound(ys.begin(), ys.end(), C);
        if (hi - lo >= static_cast<long>(trials + 1) / 2) return C;
    }
    throw NoWindow("cz_window: no C <= budget with P(1 <= |z1-z2| <= C) >= 1/2");
}

MCEstimate small_ball_mc(const VectorMultiset& V, double beta, const RealEta& z,
                         std::uint64_t trials, const std::vector<std::vector<double>>& centers,
                         std::uint64_t seed) {
    if (trials < 10'000) throw PreconditionFailed("small_ball_mc: trials >= 1e4");
    int d = V.d;
    Rng rng(seed);
    std::vector<double> pts(trials * d);
    for (std::uint64_t t = 0; t < trials; ++t) {
        std::vector<double> s(d, 0.0);
        for (const auto& v : V.vecs) {
            double zi = z.sample(rng);
            for (int c = 0; c < d; ++c) s[c] += zi * v[c];
        }
        for (int c = 0; c < d; ++c) pts[t * d + c] = s[c];
    }

    // mode seeking: beta-sided boxes, top cells become candidate centers
    std::map<std::vector<long>, std::uint64_t> cells;
    for (std::uint64_t t = 0; t < trials; ++t) {
        std::vector<long> key(d);
        for (int c = 0; c < d; ++c)
            key[c] = static_cast<long>(std::floor(pts[t * d + c] / beta));
        cells[key]++;
    }
    std::vector<std::pair<std::uint64_t, std::vector<long>>> ranked;
    for (const auto& [key, cnt] : cells) ranked.push_back({cnt, key});
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    std::vector<std::vector<double>> cand = centers;
    cand.push_back(std::vector<double>(d, 0.0));
    for (std::size_t i = 0; i < ranked.size() && i < 64; ++i) {
        std::vector<double> x(d);
        for (int c = 0; c < d; ++c) x[c] = (ranked[i].second[c] + 0.5) * beta;
        cand.push_back(x);
    }

    std::uint64_t best = 0;
    double b2 = beta * beta * (1 + 1e-9);
    for (const auto& x : cand) {
        std::uint64_t cnt = 0;
        for (std::uint64_t t = 0; t < trials; ++t) {
            double s = 0;
            for (int c = 0; c < d; ++c) {
                double diff = pts[t * d + c] - x[c];
                s += diff * diff;
            }
            if (s <= b2) cnt++;
        }
        best = std::max(best, cnt);
    }
    double est = static_cast<double>(best) / trials;
    double sig = std::sqrt(std::max(est * (1 - est), 0.25 / trials) / trials);
    return {est, sig, trials, false};
}

MCEstimate small_ball_bound(const VectorMultiset& V, double r, const RealEta& z,
                            std::uint64_t mc_points, std::uint64_t seed) {
    int d = V.d;
    Rng rng(seed);
    std::vector<double> panel;
    if (!z.exact()) {
        panel.resize(256);
        for (auto& y : panel) y = z.sample(rng) - z.sample(rng);
    }
    auto znormsq = [&](double w) {
        if (z.exact()) return z_norm_sq_exact(w, z);
        double s = 0;
        for (double y : panel) {
            double t = toral(w * y);
            s += t * t;
        }
        return s / panel.size();
    };
    const double inv_sqrt2pi = 1.0 / std::sqrt(2.0 * M_PI);
    double s = 0, s2 = 0;
    for (std::uint64_t t = 0; t < mc_points; ++t) {
        std::vector<double> xi(d);
        for (int c = 0; c < d; ++c) xi[c] = rng.gaussian() * inv_sqrt2pi;
        double e = 0;
        for (const auto& v : V.vecs) e += znormsq(dot(v, xi)) / 2;
        double val = std::exp(-e);
        s += val;
        s2 += val * val;
    }
    double mean = s / mc_points;
    double var = std::max(0.0, s2 / mc_points - mean * mean);
    double scale = std::exp(M_PI * r * r);
    return {scale * mean, scale * std::sqrt(var / mc_points), mc_points, false};
}

namespace {

long next_prime_at_least(long n) {
    mpz_class p = n - 1;
    mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
    return p.get_si();
}

} // namespace

ContinuousReport continuous_invert(const VectorMultiset& V, double beta, const RealEta& z,
                                   long n_prime, double C, const ContOptions& opt) {
    std::size_t n = V.n();
    int d = V.d;
    if (n == 0) throw PreconditionFailed("continuous_invert: empty V");
    if (n_prime < 1 || n_prime > static_cast<long>(n))
        throw PreconditionFailed("continuous_invert: n' in [1, n]");
    if (beta <= 0) throw PreconditionFailed("continuous_invert: beta > 0");

    ContinuousReport rep;
    rep.beta = beta;
    rep.rho_hat = small_ball_mc(V, beta, z, opt.trials, {}, opt.seed);
    double thr = std::pow(static_cast<double>(n), -C);
    if (rep.rho_hat.value - 3 * rep.rho_hat.sigma < thr) {
        if (rep.rho_hat.value + 3 * rep.rho_hat.sigma < thr)
            throw PreconditionFailed("continuous_invert: rho_hat < n^-C");
        throw MCTooNoisy("continuous_invert: rho_hat CI straddles n^-C");
    }
    double rho = rep.rho_hat.value;
    rep.C_z = z.cz ? *z.cz : cz_window(z, std::max<std::uint64_t>(opt.trials, 100'000), opt.seed ^ 0x9e3779b97f4a7c15ULL);

    std::vector<std::vector<double>> u(n);
    for (std::size_t i = 0; i < n; ++i) {
        u[i].resize(d);
        for (int c = 0; c < d; ++c) u[i][c] = V.vecs[i][c] / beta;
    }

    // z-norm evaluator; the sampled kind gets a fixed seeded panel
    Rng prng(opt.seed ^ 0xd1342543de82ef95ULL);
    std::vector<double> panel;
    if (!z.exact()) {
        panel.resize(256);
        for (auto& y : panel) y = z.sample(prng) - z.sample(prng);
    }
    auto znormsq = [&](double w) {
        if (z.exact()) return z_norm_sq_exact(w, z);
        double s = 0;
        for (double y : panel) {
            double t = toral(w * y);
            s += t * t;
        }
        return s / panel.size();
    };

    // unit-ball grid at resolution 1/N
    long N = next_prime_at_least(d <= 2 ? opt.grid_density : 8);
    rep.grid_prime = N;
    std::vector<std::vector<long>> grid;
    {
        std::vector<long> j(d, -N);
        while (true) {
            long nrm2 = 0;
            for (long c : j) nrm2 += c * c;
            if (nrm2 <= N * N) grid.push_back(j);
            int c = 0;
            while (c < d && ++j[c] > N) j[c++] = -N;
            if (c == d) break;
        }
    }
    rep.grid_size = grid.size();

    // level-set stats are monotone in m: compute once, then pick the
    // smallest heavy level
    std::vector<double> stat(grid.size(), 0.0);
    for (std::size_t g = 0; g < grid.size(); ++g) {
        for (std::size_t i = 0; i < n; ++i) {
            double w = 0;
            for (int c = 0; c < d; ++c) w += u[i][c] * grid[g][c];
            stat[g] += znormsq(w / N);
        }
    }
    int M = std::max(1, static_cast<int>(std::ceil(2 * opt.A * std::log(static_cast<double>(n)))));
    std::vector<std::size_t> S;
    for (int m = 1; m <= M; ++m) {
        S.clear();
        for (std::size_t g = 0; g < grid.size(); ++g)
            if (stat[g] <= opt.level_threshold * m) S.push_back(g);
        if (static_cast<double>(S.size()) * std::exp(-m + 2) >= rho * static_cast<double>(grid.size())) {
            rep.m = m;
            break;
        }
    }
    if (rep.m == 0) throw NoHeavyLevel("continuous_invert: no heavy level m <= " + std::to_string(M));
    rep.S_size = S.size();

    // y0 grid over [1, C_z], pick the fewest bad vectors
    std::vector<double> y0s;
    if (rep.C_z <= 1.0 + 1e-12)
        y0s.push_back(1.0);
    else
        for (int t = 0; t < opt.y0_points; ++t)
            y0s.push_back(1.0 + (rep.C_z - 1.0) * t / (opt.y0_points - 1));
    double bad_thr_scale = 32.0 * rep.m * static_cast<double>(S.size()) / n_prime;
    std::vector<std::size_t> best_bad;
    double best_y0 = y0s.front();
    for (double y0 : y0s) {
        std::vector<std::size_t> bad;
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0;
            for (std::size_t g : S) {
                double w = 0;
                for (int c = 0; c < d; ++c) w += u[i][c] * grid[g][c];
                double t = toral(y0 * w / N);
                s += t * t;
            }
            if (s >= bad_thr_scale) bad.push_back(i);
        }
        if (y0 == y0s.front() || bad.size() < best_bad.size()) {
            best_bad = bad;
            best_y0 = y0;
        }
    }
    if (best_bad.size() > static_cast<std::size_t>(n_prime))
        throw Error("continuous_invert: bad-vector stage left " + std::to_string(best_bad.size()) +
                    " > n' = " + std::to_string(n_prime));
    rep.y0 = best_y0;
    rep.bad = best_bad;

    rep.k = std::max<long>(2, std::lround(std::sqrt(n_prime / (64.0 * M_PI * M_PI * rep.m))));
    rep.D = static_cast<long>(std::ceil(1024.0 * d * rep.y0));
    double Dk = static_cast<double>(rep.D) * rep.k;

    // round survivors to (Z/Dk)^d
    std::vector<bool> is_bad(n, false);
    for (auto i : best_bad) is_bad[i] = true;
    for (std::size_t i = 0; i < n; ++i) {
        if (is_bad[i]) continue;
        std::vector<long> a(d);
        for (int c = 0; c < d; ++c) a[c] = std::lround(Dk * u[i][c]);
        for (long c : a) rep.magnitude_sum += static_cast<double>(c) * c;
        rep.A_beta.push_back(a);
    }

    std::set<std::vector<long>> X(rep.A_beta.begin(), rep.A_beta.end());
    X.insert(std::vector<long>(d, 0));
    {
        std::set<std::vector<long>> kX = X;
        for (long t = 1; t < rep.k; ++t) {
            std::set<std::vector<long>> next;
            for (const auto& a : kX)
                for (const auto& b : X) {
                    std::vector<long> s(d);
                    for (int c = 0; c < d; ++c) s[c] = a[c] + b[c];
                    next.insert(s);
                }
            kX = std::move(next);
        }
        rep.gamma = std::log(static_cast<double>(kX.size()) / static_cast<double>(X.size())) /
                        std::log(static_cast<double>(rep.k)) +
                    1e-9;
    }

    gap::Gap P0 = inverse::gap_fit_vec(X, d, rep.k, rep.gamma, opt.fitcfg);

    // carry the discrete unit cube exactly: P = P0 + C_0(0, 1)
    rep.P = P0;
    for (int c = 0; c < d; ++c) {
        gap::Elem e(static_cast<std::size_t>(d), mpz_class(0));
        e[c] = 1;
        rep.P.gens.push_back(e);
        rep.P.lower.push_back(-1);
        rep.P.upper.push_back(1);
    }
    rep.P.validate();
    if (!gap::is_proper(rep.P, 1, opt.fitcfg.enum_cap))
        throw FitFailed("continuous_invert: cube extension is not proper");
    rep.rank = rep.P.rank();
    rep.P_size = rep.P.volume();
    rep.scale = beta / Dk;

    // bullet audit
    rep.full_dimension = true;
    {
        std::vector<long> corner(d, 0);
        while (true) {
            gap::Elem x;
            for (long c : corner) x.push_back(mpz_class(c));
            if (!gap::contains(rep.P, x, nullptr, 6)) rep.full_dimension = false;
            int c = 0;
            while (c < d && ++corner[c] > 1) corner[c++] = 0;
            if (c == d) break;
        }
    }
    rep.approx_tol = beta / rep.k;
    {
        std::size_t ai = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (is_bad[i]) continue;
            double err2 = 0;
            for (int c = 0; c < d; ++c) {
                double diff = V.vecs[i][c] - rep.scale * rep.A_beta[ai][c];
                err2 += diff * diff;
            }
            if (std::sqrt(err2) <= rep.approx_tol) rep.approx_close++;
            ai++;
        }
    }
    rep.card_target = (1.0 / rho) * std::pow(static_cast<double>(n_prime),
                                             (static_cast<double>(d) - rep.rank) / 2.0);
    rep.card_ratio = rep.P_size.get_d() / rep.card_target;
    rep.gen_denominator = rep.D * rep.k;
    {
        double cp = 2048.0 * d * rep.C_z;
        bool ok = static_cast<double>(rep.gen_denominator) <= cp * std::sqrt(static_cast<double>(n_prime));
        double pij_cap = cp * std::sqrt(static_cast<double>(n_prime)) / beta;
        for (const auto& g : rep.P.gens)
            for (const auto& c : g)
                if (std::fabs(c.get_d()) > pij_cap) ok = false;
        rep.small_generators = ok;
    }
    rep.k_window_lo = Dk / std::sqrt(n_prime / std::log(static_cast<double>(n)));
    rep.k_window_hi = Dk / std::sqrt(static_cast<double>(n_prime));

    if (opt.refine) {
        if (rep.rank >= d + 1) {
            rep.notes += "refine: rank >= d+1, Q returned directly; ";
        } else {
            auto en = gap::volume_and_enumerate(rep.P, opt.fitcfg.enum_cap);
            for (const auto& x : en.elements) {
                bool div = true;
                for (const auto& c : x)
                    if (c % rep.k != 0) div = false;
                if (!div) continue;
                std::vector<long> y;
                for (const auto& c : x) y.push_back(mpz_class(c / rep.k).get_si());
                rep.P_prime.push_back(y);
            }
            rep.refined = true;
            rep.P_prime_size = static_cast<unsigned long>(rep.P_prime.size());
        }
    }
    return rep;
}

namespace {

// n^(a/b) as an exact integer; throws when the root is not exact
mpz_class exact_pow(unsigned long n, const mpq_class& e) {
    mpq_class er = e;
    er.canonicalize();
    if (er < 0) throw PreconditionFailed("exact_pow: negative exponent");
    mpz_class base(n);
    mpz_class num = er.get_num(), den = er.get_den();
    mpz_class t;
    mpz_pow_ui(t.get_mpz_t(), base.get_mpz_t(), num.get_ui());
    mpz_class r;
    int isexact = mpz_root(r.get_mpz_t(), t.get_mpz_t(), den.get_ui());
    if (!isexact)
        throw PreconditionFailed("net_count: n^(" + er.get_str() + ") is not an integer");
    return r;
}

mpq_class mpq_pow(const mpq_class& q, unsigned long e) {
    mpq_class r;
    mpz_pow_ui(r.get_num_mpz_t(), q.get_num_mpz_t(), e);
    mpz_pow_ui(r.get_den_mpz_t(), q.get_den_mpz_t(), e);
    r.canonicalize();
    return r;
}

} // namespace

NetCounts net_count(unsigned long n, const mpq_class& beta, const mpq_class& rho,
                    const mpq_class& epsilon, const NetConfig& cfg) {
    if (n < 1) throw PreconditionFailed("net_count: n >= 1");
    if (rho > 1 || rho <= 0) throw HypothesisViolated("net_count: rho must be in (0, 1]");
    if (epsilon > mpq_class(1, 3) || epsilon <= 0)
        throw HypothesisViolated("net_count: epsilon in (0, 1/3]");
    double nd = static_cast<double>(n);
    if (rho.get_d() < std::pow(nd, -cfg.C) * (1 - 1e-12))
        throw HypothesisViolated("net_count: rho < n^-C");
    if (beta.get_d() < std::exp(-std::pow(nd, epsilon.get_d())) * (1 - 1e-12))
        throw HypothesisViolated("net_count: beta < exp(-n^eps)");

    NetCounts out;
    mpz_class np = exact_pow(n, 1 - 3 * epsilon / 2);
    out.n_prime = np.get_ui();
    mpq_class inv_rho = 1 / rho;
    mpq_class inv_beta = 1 / beta;

    // (rho^-1 / sqrt(n'))^n as the exact square root of (rho^-2 / n')^n;
    // exact whenever n is even, and for odd n when the root happens to exist
    {
        mpq_class sq = mpq_pow(inv_rho * inv_rho / np, n);
        mpz_class num, den;
        int e1 = mpz_root(num.get_mpz_t(), sq.get_num_mpz_t(), 2);
        int e2 = mpz_root(den.get_mpz_t(), sq.get_den_mpz_t(), 2);
        if (!e1 || !e2)
            throw PreconditionFailed("net_count: (rho^-1/sqrt(n'))^n is not rational");
        out.subset_term = mpq_class(num) / mpq_class(den);
    }
    // closed form with exponent 1/2 - eps; reported when n^(1/2-eps) is exact
    try {
        mpz_class half_pow = exact_pow(n, mpq_class(1, 2) - epsilon);
        out.dominating = mpq_pow(inv_rho / half_pow, n);
        out.dominating_exact = true;
    } catch (const PreconditionFailed&) {
        out.dominating = 0;
        out.dominating_exact = false;
    }
    out.gap_family = mpq_pow(inv_beta * np, cfg.c1) * mpq_pow(inv_rho * inv_rho / np, cfg.c2);
    out.exceptional = 0;
    mpq_class term = 1, ratio = cfg.c3 * inv_beta;
    for (unsigned long i = 0; i <= out.n_prime; ++i) {
        out.exceptional += term;
        term *= ratio;
    }
    out.total = out.gap_family * (out.subset_term + 1) * out.exceptional;
    return out;
}

long min_rank1_cover_volume(const std::vector<long>& points, double frac, long a_max) {
    if (points.empty()) throw PreconditionFailed("min_rank1_cover_volume: empty input");
    std::size_t need = static_cast<std::size_t>(std::ceil(frac * points.size() - 1e-9));
    long best = -1;
    for (long a = 1; a <= a_max; ++a) {
        std::vector<long> coeffs;
        for (long x : points)
            if (x % a == 0) coeffs.push_back(std::labs(x / a));
        if (coeffs.size() < need) continue;
        std::sort(coeffs.begin(), coeffs.end());
        long M = need == 0 ? 0 : coeffs[need - 1];
        long vol = 2 * M + 1;
        if (best < 0 || vol < best) best = vol;
    }
    if (best < 0)
        throw FitFailed("min_rank1_cover_volume: no generator <= " + std::to_string(a_max) +
                        " covers the requested fraction");
    return best;
}

PlantedContinuous make_planted_continuous(int d, std::size_t n, long vol_target,
                                          std::uint64_t seed) {
    if (d < 1 || d > 3) throw PreconditionFailed("make_planted_continuous: d in [1, 3]");
    Rng rng(seed);
    PlantedContinuous out;
    out.rank = d;

    std::vector<std::vector<long>> gens;
    std::vector<long> halfw;
    if (d == 1) {
        long a = 3 + 2 * static_cast<long>(rng.next_below(5));
        gens = {{a}};
        halfw = {std::max<long>(2, (vol_target - 1) / 2)};
    } else {
        long side = std::max<long>(2, std::lround((std::sqrt(static_cast<double>(vol_target)) - 1) / 2));
        for (int c = 0; c < d; ++c) {
            std::vector<long> g(d, 0);
            g[c] = 3 + static_cast<long>(rng.next_below(5));
            for (int cc = 0; cc < c; ++cc) g[cc] = static_cast<long>(rng.next_below(3));
            gens.push_back(g);
            halfw.push_back(side);
        }
    }
    out.planted = gap::Gap::symmetric_zd(d, gens, halfw);

    std::vector<std::vector<double>> w(n, std::vector<double>(d, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (int g = 0; g < d; ++g) {
            long c = static_cast<long>(rng.next_below(static_cast<std::uint64_t>(2 * halfw[g] + 1))) -
                     halfw[g];
            if (i == 0 && g == 0 && c == 0) c = 1; // keep the energy nonzero
            for (int cc = 0; cc < d; ++cc) w[i][cc] += static_cast<double>(c) * gens[g][cc];
        }
    }
    double e = 0;
    for (const auto& x : w)
        for (double c : x) e += c * c;
    out.beta = 1.0 / std::sqrt(e);
    for (auto& x : w)
        for (double& c : x) c *= out.beta;
    out.V = VectorMultiset(d, std::move(w));
    return out;
}

} // namespace lolab::continuous
