#include "compsys.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "error.hpp"
#include "stats.hpp"

namespace zeroone {

void System::validate() const {
    if (m < 1 || n < 1) throw InvalidArgumentError("system: need m, n >= 1");
    if (funcs.empty()) throw InvalidArgumentError("system: empty family");
    for (const auto& f : funcs) {
        if (int(f.size()) != m) throw InvalidArgumentError("system: function arity mismatch");
        std::set<int> seen;
        for (int v : f) {
            if (v < 0 || v >= n) throw InvalidArgumentError("system: image outside range");
            if (!seen.insert(v).second)
                throw InvalidArgumentError("system: function not injective");
        }
    }
    if (subsets.empty()) throw InvalidArgumentError("system: empty subset family");
    if (class_of.size() != subsets.size())
        throw InvalidArgumentError("system: class map size mismatch");
    std::set<ElemSet> distinct;
    for (size_t i = 0; i < subsets.size(); ++i) {
        if (subsets[i].empty()) throw InvalidArgumentError("system: empty subset in P");
        for (int v : subsets[i])
            if (v < 0 || v >= m) throw InvalidArgumentError("system: subset outside domain");
        if (!distinct.insert(subsets[i]).second)
            throw InvalidArgumentError("system: duplicate subset in P");
        int c = class_of[i];
        if (c < 0 || c >= class_count())
            throw InvalidArgumentError("system: class id out of range");
    }
    for (double p : probs)
        if (!(p > 0.0 && p < 1.0))
            throw InvalidArgumentError("system: probabilities must lie in (0,1)");
}

std::vector<ElemSet> System::class_image_sets(int cls) const {
    std::set<ElemSet> out;
    for (size_t u = 0; u < subsets.size(); ++u) {
        if (class_of[u] != cls) continue;
        for (const auto& f : funcs) {
            ElemSet img;
            for (int v : subsets[u]) img.push_back(f[size_t(v)]);
            out.insert(make_set(std::move(img)));
        }
    }
    return {out.begin(), out.end()};
}

const char* separativity_name(SeparativityLevel s) {
    switch (s) {
        case SeparativityLevel::Separative: return "separative";
        case SeparativityLevel::SemiSeparative: return "semi_separative";
        case SeparativityLevel::WeaklySeparative: return "weakly_separative";
        case SeparativityLevel::None: return "none";
    }
    return "?";
}

bool family_separative(const std::vector<std::vector<int>>& funcs) {
    // point -> the unique coordinate allowed to hit it
    std::map<int, int> coord;
    for (const auto& f : funcs)
        for (size_t l = 0; l < f.size(); ++l) {
            auto [it, fresh] = coord.emplace(f[l], int(l));
            if (!fresh && it->second != int(l)) return false;
        }
    return true;
}

namespace {

struct UnionFind {
    std::vector<int> up;
    explicit UnionFind(int n) : up(size_t(n)) { std::iota(up.begin(), up.end(), 0); }
    int find(int x) { return up[size_t(x)] == x ? x : up[size_t(x)] = find(up[size_t(x)]); }
    void unite(int a, int b) { up[size_t(find(a))] = find(b); }
};

} // namespace

SeparativityLevel separativity_level(const System& sys) {
    sys.validate();
    if (family_separative(sys.funcs)) return SeparativityLevel::Separative;

    // forced e*: coordinates identified whenever two functions share a point
    UnionFind uf(sys.m);
    {
        std::map<int, int> first_coord;
        for (const auto& f : sys.funcs)
            for (int l = 0; l < sys.m; ++l) {
                auto [it, fresh] = first_coord.emplace(f[size_t(l)], l);
                if (!fresh) uf.unite(l, it->second);
            }
    }
    // clause (i): no subset holds two e*-equivalent coordinates
    for (const ElemSet& u : sys.subsets)
        for (size_t i = 0; i < u.size(); ++i)
            for (size_t j = i + 1; j < u.size(); ++j)
                if (uf.find(u[i]) == uf.find(u[j])) return SeparativityLevel::None;
    // clause (ii): subsets meeting the same e*-classes must share an e-class
    {
        std::map<ElemSet, int> pattern_class;
        for (size_t i = 0; i < sys.subsets.size(); ++i) {
            ElemSet pattern;
            for (int v : sys.subsets[i]) pattern.push_back(uf.find(v));
            pattern = make_set(std::move(pattern));
            auto [it, fresh] = pattern_class.emplace(pattern, sys.class_of[i]);
            if (!fresh && it->second != sys.class_of[i]) return SeparativityLevel::None;
        }
    }
    // clause (iv): equal image sets force equal subsets and equal restrictions
    bool semi = true;
    for (size_t u1 = 0; u1 < sys.subsets.size() && semi; ++u1)
        for (size_t u2 = 0; u2 < sys.subsets.size() && semi; ++u2)
            for (size_t f1 = 0; f1 < sys.funcs.size() && semi; ++f1)
                for (size_t f2 = 0; f2 < sys.funcs.size() && semi; ++f2) {
                    if (f1 == f2 && u1 == u2) continue;
                    ElemSet img1, img2;
                    for (int v : sys.subsets[u1]) img1.push_back(sys.funcs[f1][size_t(v)]);
                    for (int v : sys.subsets[u2]) img2.push_back(sys.funcs[f2][size_t(v)]);
                    if (make_set(std::move(img1)) != make_set(std::move(img2))) continue;
                    if (sys.subsets[u1] != sys.subsets[u2]) { semi = false; break; }
                    for (int v : sys.subsets[u1])
                        if (sys.funcs[f1][size_t(v)] != sys.funcs[f2][size_t(v)]) {
                            semi = false;
                            break;
                        }
                }
    return semi ? SeparativityLevel::SemiSeparative : SeparativityLevel::WeaklySeparative;
}

bool DrawnModel::is_chosen(int cls, const ElemSet& image) const {
    const auto& sets = image_sets[size_t(cls)];
    auto it = std::lower_bound(sets.begin(), sets.end(), image);
    if (it == sets.end() || *it != image) return false;
    return chosen[size_t(cls)][size_t(it - sets.begin())] != 0;
}

DrawnModel draw_model(const System& sys, Rng& rng) {
    DrawnModel out;
    out.sys = &sys;
    out.image_sets.resize(size_t(sys.class_count()));
    out.chosen.resize(size_t(sys.class_count()));
    for (int c = 0; c < sys.class_count(); ++c) {
        out.image_sets[size_t(c)] = sys.class_image_sets(c);
        auto& ch = out.chosen[size_t(c)];
        ch.resize(out.image_sets[size_t(c)].size());
        for (size_t i = 0; i < ch.size(); ++i)
            ch[i] = rng.bernoulli(sys.probs[size_t(c)]) ? 1 : 0;
    }
    return out;
}

namespace {

// Canonical key of a component: lexicographically minimal, over orderings of
// the member functions, of the concatenated coordinate-equality patterns.
// DFS with prefix pruning; exact for every size below the cap.
class ComponentCanon {
public:
    ComponentCanon(const std::vector<std::vector<int>>& funcs, std::vector<int> members)
        : funcs_(funcs), members_(std::move(members)) {}

    std::string run() {
        size_t r = members_.size();
        if (r == 1) return "1:";
        best_.clear();
        std::vector<int> order;
        std::vector<bool> used(r, false);
        std::string prefix;
        dfs(order, used, prefix);
        return std::to_string(r) + ":" + best_;
    }

private:
    std::string pair_pattern(int fi, int fj) const {
        const auto& f = funcs_[size_t(members_[size_t(fi)])];
        const auto& g = funcs_[size_t(members_[size_t(fj)])];
        std::string s;
        s.reserve(f.size() * g.size());
        for (size_t a = 0; a < f.size(); ++a)
            for (size_t b = 0; b < g.size(); ++b) s += f[a] == g[b] ? '1' : '0';
        return s;
    }

    // prefix stays lexicographically comparable because every completed key
    // has the same length
    void dfs(std::vector<int>& order, std::vector<bool>& used, std::string& prefix) {
        size_t r = members_.size();
        if (order.size() == r) {
            if (best_.empty() || prefix < best_) best_ = prefix;
            return;
        }
        for (size_t c = 0; c < r; ++c) {
            if (used[c]) continue;
            size_t saved = prefix.size();
            for (size_t i = 0; i < order.size(); ++i)
                prefix += pair_pattern(order[i], int(c));
            bool viable = best_.empty() ||
                          prefix.compare(0, prefix.size(), best_, 0, prefix.size()) <= 0;
            if (viable) {
                order.push_back(int(c));
                used[c] = true;
                dfs(order, used, prefix);
                used[c] = false;
                order.pop_back();
            }
            prefix.resize(saved);
        }
    }

    const std::vector<std::vector<int>>& funcs_;
    std::vector<int> members_;
    std::string best_;
};

} // namespace

std::string singleton_type_key() { return "1:"; }

long Census::singles() const {
    auto it = counts.find(singleton_type_key());
    return it == counts.end() ? 0 : it->second;
}

long Census::weighted_total() const {
    long total = overflow_members;
    for (const auto& [key, cnt] : counts) {
        size_t colon = key.find(':');
        total += std::stol(key.substr(0, colon)) * cnt;
    }
    return total;
}

Census census(const DrawnModel& model, int component_cap) {
    const System& sys = *model.sys;
    Census out;
    out.component_cap = component_cap;

    std::vector<int> winners;
    for (size_t fi = 0; fi < sys.funcs.size(); ++fi) {
        bool ok = true;
        for (size_t u = 0; u < sys.subsets.size() && ok; ++u) {
            ElemSet img;
            for (int v : sys.subsets[u]) img.push_back(sys.funcs[fi][size_t(v)]);
            if (!model.is_chosen(sys.class_of[u], make_set(std::move(img)))) ok = false;
        }
        if (ok) winners.push_back(int(fi));
    }
    out.members = long(winners.size());

    UnionFind uf(int(winners.size()));
    std::vector<ElemSet> ranges(winners.size());
    for (size_t i = 0; i < winners.size(); ++i)
        ranges[i] = make_set(std::vector<int>(sys.funcs[size_t(winners[i])]));
    for (size_t i = 0; i < winners.size(); ++i)
        for (size_t j = i + 1; j < winners.size(); ++j)
            if (!set_intersect(ranges[i], ranges[j]).empty()) uf.unite(int(i), int(j));

    std::map<int, std::vector<int>> comps;
    for (size_t i = 0; i < winners.size(); ++i)
        comps[uf.find(int(i))].push_back(winners[i]);

    for (auto& [root, members] : comps) {
        if (int(members.size()) > component_cap) {
            ++out.overflow_components;
            out.overflow_members += long(members.size());
            continue;
        }
        ComponentCanon canon(sys.funcs, members);
        ++out.counts[canon.run()];
    }
    return out;
}

double q_weight(const System& sys, const std::vector<int>& x) {
    std::set<int> chosen(x.begin(), x.end());
    for (int u : x)
        if (u < 0 || u >= int(sys.subsets.size()))
            throw InvalidArgumentError("q_weight: subset index out of range");
    double q = 1.0;
    for (size_t u = 0; u < sys.subsets.size(); ++u) {
        double p = sys.probs[size_t(sys.class_of[u])];
        q *= chosen.count(int(u)) ? p : (1.0 - p);
    }
    return q;
}

double q_all(const System& sys) {
    std::vector<int> all(sys.subsets.size());
    std::iota(all.begin(), all.end(), 0);
    return q_weight(sys, all);
}

double q_none(const System& sys) { return q_weight(sys, {}); }

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

namespace {

void require_weakly_separative(const System& sys, const char* claim) {
    if (separativity_level(sys) == SeparativityLevel::None)
        throw HypothesisError(std::string(claim) +
                              ": system is not weakly separative (clause (i) or (ii) fails)");
}

bool census_is_singles_only(const Census& c, long singles) {
    if (c.overflow_components != 0) return false;
    if (c.singles() != singles) return false;
    for (const auto& [key, cnt] : c.counts)
        if (key != singleton_type_key() && cnt != 0) return false;
    return true;
}

} // namespace

CensusVerifyReport verify_step_inequality(const System& sys, long l1, long trials,
                                          uint64_t seed) {
    require_weakly_separative(sys, "step inequality");
    if (l1 < 0 || trials < 1)
        throw InvalidArgumentError("step inequality: need L1 >= 0 and trials >= 1");
    CensusVerifyReport rep;
    rep.claim = "census_step";
    rep.trials = trials;
    for (long t = 0; t < trials; ++t) {
        Rng rng = Rng::substream(seed, uint64_t(t));
        DrawnModel model = draw_model(sys, rng);
        Census c = census(model);
        if (census_is_singles_only(c, l1)) ++rep.matches1;
        if (census_is_singles_only(c, l1 + 1)) ++rep.matches2;
        rep.per_trial_singles.emplace_back(int(t), c.singles());
    }
    auto [p1lo, p1hi] = wilson_interval(rep.matches1, trials);
    auto [p2lo, p2hi] = wilson_interval(rep.matches2, trials);
    rep.p1_lo = p1lo; rep.p1_hi = p1hi; rep.p2_lo = p2lo; rep.p2_hi = p2hi;
    rep.rhs_factor = q_none(sys) * double(l1 + 1) / (q_all(sys) * double(sys.funcs.size()));
    if (p1lo >= rep.rhs_factor * p2hi)
        rep.verdict = Verdict::Pass;
    else if (p1hi < rep.rhs_factor * p2lo)
        rep.verdict = Verdict::Fail;
    else
        rep.verdict = Verdict::Inconclusive;
    return rep;
}

CensusVerifyReport verify_tail_bound(const System& sys, long lstar, long trials,
                                     uint64_t seed) {
    require_weakly_separative(sys, "tail bound");
    double mean = q_all(sys) * double(sys.funcs.size()) / q_none(sys);
    long l0 = (long)std::ceil(mean);
    if (lstar < l0)
        throw InvalidArgumentError("tail bound: L* must be at least ceil(qP|F|/q0)");
    CensusVerifyReport rep;
    rep.claim = "census_tail";
    rep.trials = trials;
    double bound = 1.0;
    for (long j = l0 + 1; j <= lstar; ++j) bound *= std::min(1.0, mean / double(j));
    rep.bound = bound;
    for (long t = 0; t < trials; ++t) {
        Rng rng = Rng::substream(seed, uint64_t(t));
        Census c = census(draw_model(sys, rng));
        if (c.singles() == lstar) ++rep.matches1;
        rep.per_trial_singles.emplace_back(int(t), c.singles());
    }
    auto [plo, phi] = wilson_interval(rep.matches1, trials);
    rep.p1_lo = plo;
    rep.p1_hi = phi;
    if (phi <= bound)
        rep.verdict = Verdict::Pass;
    else if (plo > bound)
        rep.verdict = Verdict::Fail;
    else
        rep.verdict = Verdict::Inconclusive;
    return rep;
}

namespace {

// F_*: total failures that no other function blocks from being flipped into
// an isolated success.
long count_flippable(const System& sys, const DrawnModel& model) {
    long count = 0;
    for (size_t fi = 0; fi < sys.funcs.size(); ++fi) {
        const auto& f = sys.funcs[fi];
        bool all_unchosen = true;
        for (size_t u = 0; u < sys.subsets.size() && all_unchosen; ++u) {
            ElemSet img;
            for (int v : sys.subsets[u]) img.push_back(f[size_t(v)]);
            if (model.is_chosen(sys.class_of[u], make_set(std::move(img))))
                all_unchosen = false;
        }
        if (!all_unchosen) continue;
        ElemSet frange = make_set(std::vector<int>(f));
        bool blocked = false;
        for (size_t gj = 0; gj < sys.funcs.size() && !blocked; ++gj) {
            if (gj == fi) continue;
            bool would_win = true;
            for (size_t u = 0; u < sys.subsets.size() && would_win; ++u) {
                ElemSet img;
                for (int v : sys.subsets[u]) img.push_back(sys.funcs[gj][size_t(v)]);
                img = make_set(std::move(img));
                if (set_subset(img, frange)) continue;  // flipped along with f
                if (!model.is_chosen(sys.class_of[u], img)) would_win = false;
            }
            if (would_win) blocked = true;
        }
        if (!blocked) ++count;
    }
    return count;
}

} // namespace

CensusVerifyReport verify_lower_deviation(const System& sys, long l1, double alpha,
                                          long trials, uint64_t seed) {
    require_weakly_separative(sys, "lower deviation");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw InvalidArgumentError("lower deviation: alpha must lie in (0,1)");
    CensusVerifyReport rep;
    rep.claim = "census_lower";
    rep.trials = trials;
    long m1_marg = 0, m2_marg = 0, zeta_marg = 0;
    for (long t = 0; t < trials; ++t) {
        Rng rng = Rng::substream(seed, uint64_t(t));
        DrawnModel model = draw_model(sys, rng);
        Census c = census(model);
        bool full1 = census_is_singles_only(c, l1);
        bool small_fstar = false;
        if (full1 || c.singles() == l1) {
            long fstar = count_flippable(sys, model);
            small_fstar = double(fstar) < alpha * double(sys.funcs.size());
        }
        if (full1) {
            ++rep.matches1;
            if (small_fstar) ++rep.zeta_count;
        }
        if (census_is_singles_only(c, l1 + 1)) ++rep.matches2;
        if (c.singles() == l1) {
            ++m1_marg;
            if (small_fstar) ++zeta_marg;
        }
        if (c.singles() == l1 + 1) ++m2_marg;
        rep.per_trial_singles.emplace_back(int(t), c.singles());
    }
    double factor =
        q_none(sys) * double(l1 + 1) / (q_all(sys) * alpha * double(sys.funcs.size()));
    rep.rhs_factor = factor;

    auto judge = [&](long m1, long m2, long z) {
        auto [p1lo, p1hi] = wilson_interval(m1, trials);
        auto [p2lo, p2hi] = wilson_interval(m2, trials);
        auto [zlo, zhi] = wilson_interval(z, trials);
        if (p1hi <= factor * p2lo + zlo) return Verdict::Pass;
        if (p1lo > factor * p2hi + zhi) return Verdict::Fail;
        return Verdict::Inconclusive;
    };
    rep.verdict = judge(rep.matches1, rep.matches2, rep.zeta_count);
    rep.verdict_marginal = judge(m1_marg, m2_marg, zeta_marg);
    auto [p1lo, p1hi] = wilson_interval(rep.matches1, trials);
    auto [p2lo, p2hi] = wilson_interval(rep.matches2, trials);
    auto [zlo, zhi] = wilson_interval(rep.zeta_count, trials);
    rep.p1_lo = p1lo; rep.p1_hi = p1hi; rep.p2_lo = p2lo; rep.p2_hi = p2hi;
    rep.zeta_lo = zlo; rep.zeta_hi = zhi;
    return rep;
}

SplitResult separation_split(const std::vector<std::vector<int>>& funcs, int n) {
    if (n < 2) throw InvalidArgumentError("separation_split: need n >= 2");
    int bits = 1;
    while ((1 << bits) < n) ++bits;
    size_t dom = funcs.empty() ? 0 : funcs[0].size();
    for (const auto& f : funcs)
        if (f.size() != dom)
            throw InvalidArgumentError("separation_split: ragged family");

    auto code_bit = [&](int value, int i) { return (value >> (bits - 1 - i)) & 1; };

    std::map<std::string, std::vector<int>> cells;
    for (size_t gi = 0; gi < funcs.size(); ++gi) {
        const auto& g = funcs[gi];
        std::set<int> w;
        for (size_t a = 0; a < g.size(); ++a)
            for (size_t b = a + 1; b < g.size(); ++b) {
                for (int i = 0; i < bits; ++i)
                    if (code_bit(g[a], i) != code_bit(g[b], i)) {
                        w.insert(i);
                        break;
                    }
            }
        std::ostringstream key;
        key << "w";
        for (int i : w) key << ' ' << i;
        key << ";v";
        for (size_t c = 0; c < g.size(); ++c)
            for (int i : w) key << ' ' << code_bit(g[c], i);
        cells[key.str()].push_back(int(gi));
    }
    SplitResult out;
    for (auto& [key, members] : cells) out.cells.push_back(std::move(members));
    double bound = std::pow(double(bits), double(dom) + 1.0);
    out.cell_bound = bound > 9e18 ? (long long)9e18 : (long long)std::llround(bound);
    return out;
}

} // namespace zeroone
