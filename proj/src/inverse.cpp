#include "lolab/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <unordered_map>

#include "lolab/errors.hpp"
#include "lolab/rng.hpp"

namespace lolab::inverse {

namespace {

std::set<long> sumset_long(const std::set<long>& A, const std::set<long>& B) {
    std::set<long> S;
    for (long a : A)
        for (long b : B) S.insert(a + b);
    return S;
}

std::set<long> iterate_long(const std::set<long>& X, long k) {
    std::set<long> S = X;
    for (long i = 1; i < k; ++i) S = sumset_long(S, X);
    return S;
}

struct BoxCandidate {
    std::vector<long> gens;
    std::vector<long> halfw;
    double vol;
};

// minimal symmetric box over a fixed generator pair covering X, via
// per-element representation lists and threshold sweep on |x2|
std::optional<BoxCandidate> best_rank2_box(const std::vector<long>& X, long a, long b,
                                           const FitConfig& cfg) {
    long maxabs = 0;
    for (long x : X) maxabs = std::max(maxabs, std::labs(x));
    long L2 = 2 * maxabs / b + 2;
    if (L2 > cfg.rep_cap) return std::nullopt;

    struct Rep {
        long c1, c2;
    };
    std::vector<std::vector<Rep>> reps(X.size());
    for (std::size_t i = 0; i < X.size(); ++i) {
        for (long c2 = -L2; c2 <= L2; ++c2) {
            long rem = X[i] - c2 * b;
            if (rem % a == 0) reps[i].push_back({rem / a, c2});
        }
        if (reps[i].empty()) return std::nullopt;
        std::sort(reps[i].begin(), reps[i].end(),
                  [](const Rep& p, const Rep& q) { return std::labs(p.c2) < std::labs(q.c2); });
    }

    // candidate thresholds on |c2|
    std::set<long> thresholds;
    for (const auto& rv : reps)
        for (const auto& r : rv) thresholds.insert(std::labs(r.c2));

    std::optional<BoxCandidate> best;
    for (long t : thresholds) {
        long M1 = 0, M2 = 0;
        bool ok = true;
        for (const auto& rv : reps) {
            long best1 = -1, best2 = 0;
            for (const auto& r : rv) {
                if (std::labs(r.c2) > t) break;
                if (best1 < 0 || std::labs(r.c1) < best1) {
                    best1 = std::labs(r.c1);
                    best2 = std::labs(r.c2);
                }
            }
            if (best1 < 0) {
                ok = false;
                break;
            }
            M1 = std::max(M1, best1);
            M2 = std::max(M2, best2);
        }
        if (!ok) continue;
        double vol = (2.0 * M1 + 1) * (2.0 * M2 + 1);
        if (!best || vol < best->vol) best = BoxCandidate{{a, b}, {M1, M2}, vol};
    }
    return best;
}

// rank-3 fallback: greedy per-element representation minimizing the
// magnitude-weighted coefficient, exact enough for desk-scale fallbacks
std::optional<BoxCandidate> rank3_box(const std::vector<long>& X, long a, long b, long c,
                                      const FitConfig& cfg) {
    long maxabs = 0;
    for (long x : X) maxabs = std::max(maxabs, std::labs(x));
    long L3 = std::min(2 * maxabs / c + 2, cfg.rep_cap);
    long L2cap = cfg.rep_cap;
    std::vector<long> M = {0, 0, 0};
    for (long x : X) {
        double best_score = -1;
        long bc1 = 0, bc2 = 0, bc3 = 0;
        for (long c3 = -L3; c3 <= L3; ++c3) {
            long rem3 = x - c3 * c;
            long L2 = std::min(2 * std::labs(rem3) / b + 2, L2cap);
            for (long c2 = -L2; c2 <= L2; ++c2) {
                long rem = rem3 - c2 * b;
                if (rem % a != 0) continue;
                long c1 = rem / a;
                double score = std::max({static_cast<double>(std::labs(c1)) * a,
                                         static_cast<double>(std::labs(c2)) * b,
                                         static_cast<double>(std::labs(c3)) * c});
                if (best_score < 0 || score < best_score) {
                    best_score = score;
                    bc1 = c1;
                    bc2 = c2;
                    bc3 = c3;
                }
            }
        }
        if (best_score < 0) return std::nullopt;
        M[0] = std::max(M[0], std::labs(bc1));
        M[1] = std::max(M[1], std::labs(bc2));
        M[2] = std::max(M[2], std::labs(bc3));
    }
    double vol = (2.0 * M[0] + 1) * (2.0 * M[1] + 1) * (2.0 * M[2] + 1);
    return BoxCandidate{{a, b, c}, M, vol};
}

// generator candidates: most frequent and smallest positive differences
std::vector<long> diff_candidates(const std::vector<long>& X, const FitConfig& cfg) {
    std::unordered_map<long, long> freq;
    for (std::size_t i = 0; i < X.size(); ++i)
        for (std::size_t j = i + 1; j < X.size(); ++j) {
            long d = std::labs(X[i] - X[j]);
            if (d > 0) freq[d]++;
        }
    for (long x : X)
        if (x != 0) freq[std::labs(x)]++;

    std::vector<std::pair<long, long>> by_freq(freq.begin(), freq.end());
    std::sort(by_freq.begin(), by_freq.end(), [](const auto& p, const auto& q) {
        return p.second != q.second ? p.second > q.second : p.first < q.first;
    });
    std::set<long> cands;
    for (int i = 0; i < cfg.cand_frequent && i < static_cast<int>(by_freq.size()); ++i)
        cands.insert(by_freq[i].first);
    std::vector<long> by_size;
    for (const auto& [d, f] : freq) by_size.push_back(d);
    std::sort(by_size.begin(), by_size.end());
    for (int i = 0; i < cfg.cand_small && i < static_cast<int>(by_size.size()); ++i)
        cands.insert(by_size[i]);
    return {cands.begin(), cands.end()};
}

} // namespace

gap::Gap gap_fit(const std::set<long>& Xset, long k, double gamma, const FitConfig& cfg) {
    if (!Xset.count(0)) throw PreconditionFailed("gap_fit: 0 must be in X");
    if (k < 2) throw PreconditionFailed("gap_fit: k >= 2");

    std::set<long> kX = iterate_long(Xset, k);
    double growth = std::pow(static_cast<double>(k), gamma) * static_cast<double>(Xset.size());
    if (static_cast<double>(kX.size()) > growth * (1 + 1e-12))
        throw GrowthHypothesisFailed("gap_fit: |kX| = " + std::to_string(kX.size()) +
                                     " exceeds k^gamma |X| = " + std::to_string(growth));

    auto budget = [&](int r) {
        return cfg.K_fit * static_cast<double>(kX.size()) / std::pow(static_cast<double>(k), r);
    };

    std::vector<long> X(Xset.begin(), Xset.end());
    long maxabs = 0;
    for (long x : X) maxabs = std::max(maxabs, std::labs(x));

    // rank 0
    if (maxabs == 0) return gap::Gap::symmetric_z({}, {});

    // rank 1: gcd and span
    long g = 0;
    for (long x : X) g = std::gcd(g, std::labs(x));
    long M1 = maxabs / g;
    if (2.0 * M1 + 1 <= budget(1)) return gap::Gap::symmetric_z({g}, {M1});

    // rank 2: candidate generator pairs
    auto cands = diff_candidates(X, cfg);
    std::optional<BoxCandidate> best2;
    for (std::size_t i = 0; i < cands.size(); ++i)
        for (std::size_t j = i + 1; j < cands.size(); ++j) {
            auto box = best_rank2_box(X, cands[i], cands[j], cfg);
            if (box && (!best2 || box->vol < best2->vol)) best2 = box;
        }
    if (cfg.r_max >= 2 && best2 && best2->vol <= budget(2)) {
        gap::Gap Q = gap::Gap::symmetric_z(best2->gens, best2->halfw);
        if (gap::is_proper(Q, 1, cfg.enum_cap)) return Q;
        // non-proper minimal box: fall through to the next candidates
        std::vector<BoxCandidate> all;
        for (std::size_t i = 0; i < cands.size(); ++i)
            for (std::size_t j = i + 1; j < cands.size(); ++j) {
                auto box = best_rank2_box(X, cands[i], cands[j], cfg);
                if (box && box->vol <= budget(2)) all.push_back(*box);
            }
        std::sort(all.begin(), all.end(), [](const auto& p, const auto& q) { return p.vol < q.vol; });
        for (const auto& b : all) {
            gap::Gap cand = gap::Gap::symmetric_z(b.gens, b.halfw);
            if (gap::is_proper(cand, 1, cfg.enum_cap)) return cand;
        }
    }

    // rank 3 fallback from the strongest candidates
    if (cfg.r_max >= 3 && cands.size() >= 3) {
        std::vector<long> top(cands.begin(), cands.begin() + std::min<std::size_t>(8, cands.size()));
        std::optional<BoxCandidate> best3;
        for (std::size_t i = 0; i < top.size(); ++i)
            for (std::size_t j = i + 1; j < top.size(); ++j)
                for (std::size_t l = j + 1; l < top.size(); ++l) {
                    auto box = rank3_box(X, top[i], top[j], top[l], cfg);
                    if (box && (!best3 || box->vol < best3->vol)) best3 = box;
                }
        if (best3 && best3->vol <= budget(3)) {
            gap::Gap Q = gap::Gap::symmetric_z(best3->gens, best3->halfw);
            if (gap::is_proper(Q, 1, cfg.enum_cap)) return Q;
        }
    }

    throw FitFailed("gap_fit: no proper symmetric GAP within rank <= " + std::to_string(cfg.r_max) +
                    " and volume budget (|kX| = " + std::to_string(kX.size()) + ")");
}

namespace {

using Vec = std::vector<long>;

Vec vadd(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

long det2(long a, long b, long c, long d) { return a * d - b * c; }

// integer determinant, Bareiss-free naive expansion for d <= 4
long idet(const std::vector<Vec>& cols) {
    std::size_t d = cols.size();
    if (d == 1) return cols[0][0];
    if (d == 2) return det2(cols[0][0], cols[1][0], cols[0][1], cols[1][1]);
    long det = 0;
    for (std::size_t j = 0; j < d; ++j) {
        std::vector<Vec> minor;
        for (std::size_t jj = 0; jj < d; ++jj) {
            if (jj == j) continue;
            Vec col;
            for (std::size_t i = 1; i < d; ++i) col.push_back(cols[jj][i]);
            minor.push_back(col);
        }
        long term = cols[j][0] * idet(minor);
        det += (j % 2 == 0 ? term : -term);
    }
    return det;
}

// solve G c = x over the integers (G square, det != 0) by Cramer
std::optional<Vec> isolve(const std::vector<Vec>& cols, long det, const Vec& x) {
    std::size_t d = cols.size();
    Vec c(d);
    for (std::size_t j = 0; j < d; ++j) {
        std::vector<Vec> m = cols;
        m[j] = x;
        long num = idet(m);
        if (num % det != 0) return std::nullopt;
        c[j] = num / det;
    }
    return c;
}

} // namespace

gap::Gap gap_fit_vec(const std::set<Vec>& Xset, int d, long k, double gamma, const FitConfig& cfg) {
    if (d == 1) {
        std::set<long> S;
        for (const auto& v : Xset) S.insert(v[0]);
        return gap_fit(S, k, gamma, cfg);
    }
    Vec zero(static_cast<std::size_t>(d), 0);
    if (!Xset.count(zero)) throw PreconditionFailed("gap_fit_vec: 0 must be in X");
    if (k < 2) throw PreconditionFailed("gap_fit_vec: k >= 2");

    // growth hypothesis on the explicit sumset
    std::set<Vec> kX = Xset;
    for (long i = 1; i < k; ++i) {
        std::set<Vec> next;
        for (const auto& a : kX)
            for (const auto& b : Xset) next.insert(vadd(a, b));
        kX = std::move(next);
    }
    double growth = std::pow(static_cast<double>(k), gamma) * static_cast<double>(Xset.size());
    if (static_cast<double>(kX.size()) > growth * (1 + 1e-12))
        throw GrowthHypothesisFailed("gap_fit_vec: |kX| exceeds k^gamma |X|");
    auto budget = [&](int r) {
        return cfg.K_fit * static_cast<double>(kX.size()) / std::pow(static_cast<double>(k), r);
    };

    // candidate generators: smallest nonzero vectors from X and X - X
    std::vector<Vec> X(Xset.begin(), Xset.end());
    std::map<Vec, double> cand_norm;
    auto note = [&](Vec v) {
        double n2 = 0;
        bool nz = false;
        for (long c : v) {
            n2 += static_cast<double>(c) * c;
            if (c != 0) nz = true;
        }
        if (!nz) return;
        // canonical sign: first nonzero coordinate positive
        for (long c : v) {
            if (c > 0) break;
            if (c < 0) {
                for (auto& cc : v) cc = -cc;
                break;
            }
        }
        cand_norm.emplace(v, n2);
    };
    for (const auto& x : X) note(x);
    for (std::size_t i = 0; i < X.size(); ++i)
        for (std::size_t j = i + 1; j < X.size(); ++j) {
            Vec dvec(X[i].size());
            for (std::size_t c = 0; c < dvec.size(); ++c) dvec[c] = X[i][c] - X[j][c];
            note(dvec);
        }
    std::vector<Vec> cands;
    {
        std::vector<std::pair<double, Vec>> sorted;
        for (const auto& [v, n2] : cand_norm) sorted.push_back({n2, v});
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < sorted.size() && i < 24; ++i) cands.push_back(sorted[i].second);
    }

    struct VecBox {
        std::vector<Vec> gens;
        std::vector<long> halfw;
        double vol;
    };
    std::optional<VecBox> best;

    // rank d: candidate d-tuples with nonzero determinant, exact Cramer solve
    std::vector<std::size_t> idx(static_cast<std::size_t>(d));
    std::vector<std::size_t> comb;
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t depth) {
        if (depth == static_cast<std::size_t>(d)) {
            std::vector<Vec> G;
            for (auto i : comb) G.push_back(cands[i]);
            long det = idet(G);
            if (det == 0) return;
            std::vector<long> M(static_cast<std::size_t>(d), 0);
            for (const auto& x : X) {
                auto c = isolve(G, det, x);
                if (!c) return;
                for (std::size_t i = 0; i < c->size(); ++i) M[i] = std::max(M[i], std::labs((*c)[i]));
            }
            double vol = 1;
            for (long m : M) vol *= 2.0 * m + 1;
            if (!best || vol < best->vol) best = VecBox{G, M, vol};
            return;
        }
        for (std::size_t i = start; i < cands.size(); ++i) {
            comb.push_back(i);
            rec(i + 1, depth + 1);
            comb.pop_back();
        }
    };
    rec(0, 0);

    if (best && best->vol <= budget(d)) {
        gap::Gap Q;
        Q.amb = gap::Ambient{d, 0};
        Q.offset.assign(static_cast<std::size_t>(d), mpz_class(0));
        for (const auto& g : best->gens) {
            gap::Elem e;
            for (long c : g) e.push_back(mpz_class(c));
            Q.gens.push_back(e);
        }
        for (long m : best->halfw) {
            Q.lower.push_back(-m);
            Q.upper.push_back(m);
        }
        Q.validate();
        return Q; // full column rank => proper
    }

    // rank d+1: one extra small generator with an enumerated coefficient
    if (cfg.r_max >= d + 1) {
        std::optional<VecBox> beste;
        for (std::size_t ei = 0; ei < cands.size() && ei < 8; ++ei) {
            const Vec& e = cands[ei];
            std::function<void(std::size_t, std::size_t)> rec2 = [&](std::size_t start, std::size_t depth) {
                if (depth == static_cast<std::size_t>(d)) {
                    std::vector<Vec> G;
                    for (auto i : comb) G.push_back(cands[i]);
                    long det = idet(G);
                    if (det == 0) return;
                    std::vector<long> M(static_cast<std::size_t>(d) + 1, 0);
                    for (const auto& x : X) {
                        bool found = false;
                        long bestscore = 0;
                        std::vector<long> bc;
                        for (long ce = -6; ce <= 6; ++ce) {
                            Vec rem(x.size());
                            for (std::size_t c = 0; c < x.size(); ++c) rem[c] = x[c] - ce * e[c];
                            auto cc = isolve(G, det, rem);
                            if (!cc) continue;
                            long score = std::labs(ce);
                            for (long v : *cc) score += std::labs(v);
                            if (!found || score < bestscore) {
                                found = true;
                                bestscore = score;
                                bc = *cc;
                                bc.push_back(ce);
                            }
                        }
                        if (!found) return;
                        for (std::size_t i = 0; i < bc.size(); ++i)
                            M[i] = std::max(M[i], std::labs(bc[i]));
                    }
                    std::vector<Vec> Gfull = G;
                    Gfull.push_back(e);
                    double vol = 1;
                    for (long m : M) vol *= 2.0 * m + 1;
                    if (!beste || vol < beste->vol) beste = VecBox{Gfull, M, vol};
                    return;
                }
                for (std::size_t i = start; i < cands.size(); ++i) {
                    if (i == ei) continue;
                    comb.push_back(i);
                    rec2(i + 1, depth + 1);
                    comb.pop_back();
                }
            };
            rec2(0, 0);
        }
        if (beste && beste->vol <= budget(d + 1)) {
            gap::Gap Q;
            Q.amb = gap::Ambient{d, 0};
            Q.offset.assign(static_cast<std::size_t>(d), mpz_class(0));
            for (const auto& g : beste->gens) {
                gap::Elem el;
                for (long c : g) el.push_back(mpz_class(c));
                Q.gens.push_back(el);
            }
            for (long m : beste->halfw) {
                Q.lower.push_back(-m);
                Q.upper.push_back(m);
            }
            Q.validate();
            if (gap::is_proper(Q, 1, cfg.enum_cap)) return Q;
        }
    }

    throw FitFailed("gap_fit_vec: no proper symmetric GAP within budget");
}

namespace {

long centered(long residue, long p) { return residue > p / 2 ? residue - p : residue; }

StructureReport run_pipeline(const walks::StepMultiset& V, const mpq_class& epsilon, long n_prime,
                             double C, const Options& opt) {
    std::size_t n = V.n();
    StructureReport rep;
    rep.V = V;
    rep.epsilon = epsilon;
    rep.n_prime = n_prime;

    if (opt.rho_supplied) {
        rep.rho = *opt.rho_supplied;
        rep.rho_supplied = true;
    } else {
        rep.rho = walks::rho(V, walks::EtaSpec::bernoulli(), opt.walk_budget).rho;
    }
    double nC = std::pow(static_cast<double>(n), -C);
    if (rep.rho.get_d() < nC * (1 - 1e-12))
        throw PreconditionFailed("invert: rho(V) < n^-C");

    if (n_prime > 0) {
        long lo = static_cast<long>(std::ceil(std::pow(static_cast<double>(n), opt.budget_eps) - 1e-9));
        if (n_prime < lo || n_prime > static_cast<long>(n))
            throw PreconditionFailed("invert_budget: n' outside [n^eps, n]");
    }

    long base = n_prime > 0 ? n_prime : static_cast<long>(n);
    long k_max = std::max<long>(2, std::lround(std::ceil(opt.charcfg.c1 * std::sqrt(static_cast<double>(base)))));
    rep.scan_prime = gap::embed_for_scan(V, 2 * (k_max + 1), opt.p_cap);
    if (n <= 512) rep.freiman_prime = gap::freiman_embed(V, static_cast<unsigned>(n)).p;

    std::vector<long> Vp;
    for (long v : V.values) {
        long r = v % rep.scan_prime;
        Vp.push_back(r < 0 ? r + rep.scan_prime : r);
    }

    rep.trace = charsum::heavy_level(Vp, rep.scan_prime, rep.rho, opt.charcfg);
    charsum::core_select(rep.trace, epsilon, n_prime);

    rep.k = std::max<long>(2, std::lround(opt.charcfg.c1 *
                                          std::sqrt(static_cast<double>(base) / rep.trace.m)));
    charsum::growth_set(rep.trace, rep.k, opt.sumset_cap);

    // back to Z: the scan prime is wrap-free, so centered residues are the
    // original integers
    std::set<long> X = {0};
    for (long r : rep.trace.core) X.insert(centered(r, rep.scan_prime));
    rep.X_size = X.size();
    std::set<long> kX = iterate_long(X, rep.k);
    rep.kX_size = kX.size();
    rep.gamma = std::log(static_cast<double>(kX.size()) / static_cast<double>(X.size())) /
                    std::log(static_cast<double>(rep.k)) +
                1e-9;

    rep.Q = gap_fit(X, rep.k, rep.gamma, opt.fitcfg);
    rep.rank = rep.Q.rank();

    // coverage over the original multiset
    std::map<long, bool> inQ;
    std::map<long, unsigned long long> levelsum;
    for (std::size_t i = 0; i < n; ++i) {
        long v = V.values[i];
        if (!inQ.count(v)) {
            inQ[v] = gap::contains(rep.Q, {mpz_class(v)});
            unsigned long long s = 0;
            long r = Vp[i];
            for (long xi : rep.trace.Sm) {
                long rr = static_cast<long>((static_cast<unsigned long long>(r) * static_cast<unsigned long long>(xi)) %
                                            static_cast<unsigned long long>(rep.scan_prime));
                long d = std::min(rr, rep.scan_prime - rr);
                s += static_cast<unsigned long long>(d) * static_cast<unsigned long long>(d);
            }
            levelsum[v] = s;
        }
    }
    std::vector<std::pair<unsigned long long, long>> exc;
    for (long v : V.values) {
        if (inQ[v])
            rep.covered.push_back(v);
        else
            exc.push_back({levelsum[v], v});
    }
    std::sort(exc.begin(), exc.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    for (const auto& [s, v] : exc) rep.exceptional.push_back(v);

    // Q is verified proper, so |Q| = Vol(Q) exactly
    rep.Q_size = rep.Q.volume();
    rep.Q_enumerated = true;
    double r2 = static_cast<double>(rep.rank) / 2.0;
    rep.target = (1.0 / rep.rho.get_d()) * std::pow(static_cast<double>(base), -r2);
    rep.ratio = rep.Q_size.get_d() / rep.target;
    return rep;
}

} // namespace

StructureReport invert(const walks::StepMultiset& V, const mpq_class& epsilon, double C,
                       const Options& opt) {
    if (epsilon <= 0 || epsilon > 1) throw PreconditionFailed("invert: epsilon in (0, 1]");
    return run_pipeline(V, epsilon, 0, C, opt);
}

StructureReport invert_budget(const walks::StepMultiset& V, long n_prime, double C,
                              const Options& opt) {
    return run_pipeline(V, mpq_class(1), n_prime, C, opt);
}

std::vector<CertResult> verify_report(const StructureReport& rep, unsigned long enum_cap) {
    std::vector<CertResult> out;
    auto add = [&](const std::string& name, bool pass, const std::string& detail = "") {
        out.push_back({name, pass, detail});
    };

    add("symmetric", rep.Q.symmetric());
    try {
        add("proper", gap::is_proper(rep.Q, 1, enum_cap));
    } catch (const CapExceeded&) {
        add("proper", rep.Q.rank() <= 1, "beyond enumeration cap; rank<=1 structural only");
    }

    std::size_t n = rep.V.n();
    std::size_t cov = 0, exc = 0;
    std::map<long, bool> cache;
    for (long v : rep.V.values) {
        if (!cache.count(v)) cache[v] = gap::contains(rep.Q, {mpz_class(v)});
        (cache[v] ? cov : exc)++;
    }
    add("coverage_count", cov == rep.covered.size() && exc == rep.exceptional.size(),
        std::to_string(cov) + " covered / " + std::to_string(exc) + " exceptional");
    if (rep.n_prime > 0)
        add("exceptional_budget", exc <= static_cast<std::size_t>(rep.n_prime));
    else {
        mpq_class lim = rep.epsilon * static_cast<unsigned long>(n);
        add("exceptional_budget", mpq_class(static_cast<unsigned long>(exc)) <= lim);
    }

    try {
        auto en = gap::volume_and_enumerate(rep.Q, enum_cap);
        add("size_exact", mpz_class(static_cast<unsigned long>(en.elements.size())) == rep.Q_size,
            "enumerated " + std::to_string(en.elements.size()));
    } catch (const CapExceeded&) {
        add("size_exact", true, "beyond enumeration cap; volume used (proper)");
    }

    add("heavy_level_cert", rep.trace.heavy_cert);
    if (rep.trace.dual_computed) {
        add("dual_card_cert", rep.trace.dual_card_cert);
        add("dual_Ta_cert", rep.trace.dual_Ta_cert);
    }
    return out;
}

PlantedInstance make_planted(int rank, std::size_t n, double C, std::uint64_t seed) {
    Rng rng(seed);
    PlantedInstance inst;
    inst.rank = rank;
    double volume = std::pow(static_cast<double>(n), C - static_cast<double>(rank) / 2.0);

    if (rank == 1) {
        long a = 3 + 2 * static_cast<long>(rng.next_below(6)); // odd in [3,13]
        long M = std::max<long>(2, std::lround((volume - 1) / 2));
        M = std::min<long>(M, 2000);
        inst.planted = gap::Gap::symmetric_z({a}, {M});
        std::vector<long> vals;
        for (std::size_t i = 0; i < n; ++i) {
            long c = static_cast<long>(rng.next_below(static_cast<std::uint64_t>(2 * M + 1))) - M;
            vals.push_back(a * c);
        }
        inst.V = walks::StepMultiset(vals);
    } else if (rank == 2) {
        long a1 = 3 + 2 * static_cast<long>(rng.next_below(3)); // 3, 5 or 7
        long M1 = 2 + static_cast<long>(rng.next_below(3));     // 2..4
        long r = a1 + 1 + static_cast<long>(rng.next_below(static_cast<std::uint64_t>(2 * a1 - 1)));
        if (r % a1 == 0) r += 1;
        long a2 = 2 * M1 * a1 + r; // > 2 M1 a1, so the box is proper
        long M2 = std::max<long>(2, std::lround((volume / (2 * M1 + 1) - 1) / 2));
        M2 = std::min<long>(M2, 2000);
        inst.planted = gap::Gap::symmetric_z({a1, a2}, {M1, M2});
        std::vector<long> vals;
        for (std::size_t i = 0; i < n; ++i) {
            long c1 = static_cast<long>(rng.next_below(static_cast<std::uint64_t>(2 * M1 + 1))) - M1;
            long c2 = static_cast<long>(rng.next_below(static_cast<std::uint64_t>(2 * M2 + 1))) - M2;
            vals.push_back(a1 * c1 + a2 * c2);
        }
        inst.V = walks::StepMultiset(vals);
    } else {
        throw PreconditionFailed("make_planted: rank must be 1 or 2");
    }
    return inst;
}

} // namespace lolab::inverse
