#include "weights.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

#include "smallgen.hpp"

namespace zeroone {

BaseContext::BaseContext(VocabPtr vocab, std::vector<double> alpha,
                         std::vector<double> coeff, double ecap)
    : vocab_(std::move(vocab)), alpha_(std::move(alpha)), coeff_(std::move(coeff)),
      ecap_(ecap) {
    if (!vocab_) throw InvalidArgumentError("context: null vocabulary");
    if (alpha_.size() != size_t(vocab_->size()) || coeff_.size() != size_t(vocab_->size()))
        throw InvalidArgumentError("context: alpha/coeff count must match vocabulary");
    for (int r = 0; r < vocab_->size(); ++r) {
        if (!(alpha_[size_t(r)] > 0.0 && alpha_[size_t(r)] < 1.0))
            throw InvalidArgumentError("context: alpha for " + vocab_->rel(r).name +
                                       " must lie in (0,1)");
        if (!(coeff_[size_t(r)] > 0.0 && coeff_[size_t(r)] <= 1.0))
            throw InvalidArgumentError("context: coeff for " + vocab_->rel(r).name +
                                       " must lie in (0,1]");
    }
    if (!(ecap_ > 0.0 && ecap_ < 1.0))
        throw InvalidArgumentError("context: error exponent cap must lie in (0,1)");
}

const char* pair_kind_name(PairKind k) {
    switch (k) {
        case PairKind::Equal: return "equal";
        case PairKind::AlgebraicI: return "algebraic_i";
        case PairKind::StrongS: return "strong_s";
        case PairKind::PrimitivePr: return "primitive_pr";
        case PairKind::Mixed: return "mixed";
    }
    return "?";
}

ElemSet mask_to_set(Mask m) {
    ElemSet out;
    for (int v = 0; m; ++v, m >>= 1)
        if (m & 1) out.push_back(v);
    return out;
}

Mask set_to_mask(const ElemSet& s) {
    Mask m = 0;
    for (ElemId v : s) m |= Mask(1) << v;
    return m;
}

namespace {

constexpr int kMaskLimit = 25;

std::string set_text(const ElemSet& s) {
    std::ostringstream os;
    os << '{';
    for (size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
    os << '}';
    return os.str();
}

MaskCalc make_calc(const RelStructure& s, const BaseContext& ctx) {
    if (s.size() > kMaskLimit)
        throw InvalidArgumentError("pair calculus limited to structures with <= 25 elements");
    std::vector<std::pair<Mask, double>> wt;
    for (int r = 0; r < s.vocab().size(); ++r) {
        double a = ctx.alpha(r);
        for (const Tuple& t : s.tuples(r)) {
            Mask m = 0;
            for (ElemId v : t) m |= Mask(1) << v;
            wt.emplace_back(m, a);
        }
    }
    return MaskCalc(s.size(), std::move(wt));
}

void require_same_vocab(const RelStructure& s, const BaseContext& ctx,
                        const char* where) {
    if (!(s.vocab() == ctx.vocab()))
        throw InvalidArgumentError(std::string(where) + ": structure/context vocabulary mismatch");
}

// Throwing sign tests over one MaskCalc.
struct SignCalc {
    const MaskCalc& calc;

    double checked_w(Mask a, Mask b) const {
        double w = calc.w(a, b);
        if (std::fabs(w) <= kWeightTol)
            throw DegenerateContextError("zero weight on sub-pair (" +
                                         set_text(mask_to_set(a)) + ", " +
                                         set_text(mask_to_set(b)) + ")");
        return w;
    }

    bool algebraic(Mask a, Mask b) const { // every a ⊆ c ⊊ b has w(c,b) < 0
        if (a == b) return true;
        Mask d = b & ~a;
        for (Mask s = (d - 1) & d;; s = (s - 1) & d) {
            if (checked_w(a | s, b) >= 0.0) return false;
            if (s == 0) break;
        }
        return true;
    }

    bool strong(Mask a, Mask b) const { // every a ⊊ c ⊆ b has w(a,c) > 0
        if (a == b) return true;
        Mask d = b & ~a;
        for (Mask s = d;; s = (s - 1) & d) {
            if (s != 0 && checked_w(a, a | s) <= 0.0) return false;
            if (s == 0) break;
        }
        return true;
    }

    bool primitive(Mask a, Mask b) const { // strict strong step
        if (a == b) return false;
        if (!strong(a, b)) return false;
        Mask d = b & ~a;
        for (Mask s = (d - 1) & d; s != 0; s = (s - 1) & d)
            if (strong(a, a | s) && strong(a | s, b)) return false;
        return true;
    }
};

} // namespace

double weight(const SubPair& p, const BaseContext& ctx) {
    require_same_vocab(p.big, ctx, "weight");
    double w = double(p.big.size() - int(p.small.size()));
    for (int r = 0; r < p.big.vocab().size(); ++r) {
        long outside = 0;
        for (const Tuple& t : p.big.tuples(r)) {
            bool inside = true;
            for (ElemId v : t)
                if (!set_contains(p.small, v)) { inside = false; break; }
            if (!inside) ++outside;
        }
        w -= ctx.alpha(r) * double(outside);
    }
    return w;
}

double weight_sets(const RelStructure& m, const ElemSet& a, const ElemSet& b,
                   const BaseContext& ctx) {
    require_same_vocab(m, ctx, "weight_sets");
    if (!set_subset(a, b)) throw InvalidArgumentError("weight_sets: A must be inside B");
    double w = double(b.size() - a.size());
    for (int r = 0; r < m.vocab().size(); ++r) {
        long fresh = 0;
        for (const Tuple& t : m.tuples(r)) {
            bool in_b = true, in_a = true;
            for (ElemId v : t) {
                if (!set_contains(b, v)) { in_b = false; break; }
                if (!set_contains(a, v)) in_a = false;
            }
            if (in_b && !in_a) ++fresh;
        }
        w -= ctx.alpha(r) * double(fresh);
    }
    return w;
}

PairKind classify(const SubPair& p, const BaseContext& ctx) {
    require_same_vocab(p.big, ctx, "classify");
    MaskCalc calc = make_calc(p.big, ctx);
    SignCalc sc{calc};
    Mask a = set_to_mask(p.small), b = calc.full();
    if (a == b) return PairKind::Equal;
    if (sc.algebraic(a, b)) return PairKind::AlgebraicI;
    if (sc.strong(a, b)) return sc.primitive(a, b) ? PairKind::PrimitivePr : PairKind::StrongS;
    return PairKind::Mixed;
}

namespace {

std::vector<Mask> decompose_masks(const MaskCalc& calc, Mask a, Mask b) {
    SignCalc sc{calc};
    if (!sc.strong(a, b))
        throw InvalidArgumentError("decompose: pair is not strong");
    std::vector<Mask> chain{a};
    Mask cur = a;
    while (cur != b) {
        Mask d = b & ~cur;
        std::vector<Mask> strong_exts;
        for (Mask s = d; s != 0; s = (s - 1) & d)
            if (sc.strong(cur, cur | s)) strong_exts.push_back(cur | s);
        // inclusion-minimal strong extensions, then least by (size, lex)
        std::optional<Mask> best;
        ElemSet best_set;
        for (Mask c : strong_exts) {
            bool minimal = true;
            for (Mask other : strong_exts)
                if (other != c && (other & c) == other) { minimal = false; break; }
            if (!minimal) continue;
            ElemSet cs = mask_to_set(Mask(c & ~a));
            if (!best || cs.size() < best_set.size() ||
                (cs.size() == best_set.size() && set_lex_less(cs, best_set))) {
                best = c;
                best_set = std::move(cs);
            }
        }
        if (!best) throw InternalError("decompose: no strong extension step found");
        Mask next = *best;
        if (!sc.primitive(cur, next))
            throw InternalError("decompose: chosen step is not primitive");
        if (next != b && !sc.strong(next, b))
            throw InternalError("decompose: remainder above chosen step is not strong");
        chain.push_back(next);
        cur = next;
    }
    return chain;
}

} // namespace

std::vector<ElemSet> decompose(const SubPair& p, const BaseContext& ctx) {
    require_same_vocab(p.big, ctx, "decompose");
    MaskCalc calc = make_calc(p.big, ctx);
    auto masks = decompose_masks(calc, set_to_mask(p.small), calc.full());
    std::vector<ElemSet> chain;
    chain.reserve(masks.size());
    for (Mask m : masks) chain.push_back(mask_to_set(m));
    return chain;
}

double alpha_strong(const SubPair& p, const BaseContext& ctx) {
    require_same_vocab(p.big, ctx, "alpha_strong");
    MaskCalc calc = make_calc(p.big, ctx);
    Mask a = set_to_mask(p.small), b = calc.full();
    auto masks = decompose_masks(calc, a, b);
    double sum = 0.0;
    for (size_t i = 0; i + 1 < masks.size(); ++i) sum += calc.w(masks[i], masks[i + 1]);
    double direct = calc.w(a, b);
    if (std::fabs(sum - direct) > 1e-9)
        throw InternalError("alpha_strong: step sum does not match direct weight");
    return sum;
}

WeightedPair analyze_pair(const SubPair& p, const BaseContext& ctx) {
    WeightedPair out;
    out.pair = p;
    out.weight = weight(p, ctx);
    out.kind = classify(p, ctx);
    if (out.kind == PairKind::StrongS || out.kind == PairKind::PrimitivePr ||
        out.kind == PairKind::Equal)
        out.decomposition = decompose(p, ctx);
    return out;
}

namespace {

// True when no pattern on <= k elements can reach negative weight over the
// empty set; lets closures skip the base-independent witness scan.
bool no_ambient_possible(const BaseContext& ctx, int k) {
    for (int j = 1; j <= k; ++j) {
        double max_drop = 0.0;
        for (int r = 0; r < ctx.vocab().size(); ++r) {
            const RelationDecl& d = ctx.vocab().rel(r);
            if (d.arity > j) continue;
            double cnt = 1.0;
            for (int i = 0; i < d.arity; ++i) cnt *= double(j - i);
            if (d.symmetric) {
                for (int i = 2; i <= d.arity; ++i) cnt /= double(i);
            }
            max_drop += ctx.alpha(r) * cnt;
        }
        if (double(j) - max_drop < 0.0) return false;
    }
    return true;
}

// Scratch buffers reused across candidate tests within one closure call.
struct ClosureScratch {
    std::vector<int> local;   // ambient id -> position in candidate, or -1
    explicit ClosureScratch(int n) : local(size_t(n), -1) {}
};

// Local algebraicity test for a candidate witness set: tuples are gathered
// from the ambient structure, so no induced copy is materialized.
bool algebraic_over(const GaifmanIndex& idx, const ElemSet& b, const ElemSet& base,
                    const BaseContext& ctx, ClosureScratch& scratch) {
    auto& local = scratch.local;
    for (size_t i = 0; i < b.size(); ++i) local[size_t(b[i])] = int(i);
    std::vector<std::pair<Mask, double>> wt;
    std::vector<int> seen;
    for (ElemId v : b)
        for (int ti : idx.incident(v)) {
            const auto& ft = idx.flat()[size_t(ti)];
            bool inside = true;
            Mask tm = 0;
            for (ElemId u : ft.t) {
                if (local[size_t(u)] < 0) { inside = false; break; }
                tm |= Mask(1) << local[size_t(u)];
            }
            if (!inside) continue;
            if (std::find(seen.begin(), seen.end(), ti) != seen.end()) continue;
            seen.push_back(ti);
            wt.emplace_back(tm, ctx.alpha(ft.rel));
        }
    Mask amask = 0;
    for (size_t i = 0; i < b.size(); ++i)
        if (set_contains(base, b[i])) amask |= Mask(1) << i;
    for (ElemId v : b) local[size_t(v)] = -1;
    MaskCalc calc(int(b.size()), std::move(wt));
    SignCalc sc{calc};
    return amask != calc.full() && sc.algebraic(amask, calc.full());
}

// Enumerate connected element sets of size <= cap extending the seed.
// visit(set) is called for every generated set (sorted). Duplicate-free: at
// each branch a candidate is either taken now or banned for the remaining
// branches of this level; bans are undone exactly where they were made.
void grow_connected(const GaifmanIndex& idx, ElemSet& current,
                    const std::vector<ElemId>& frontier, std::vector<bool>& banned,
                    std::vector<bool>& in_set, size_t cap,
                    const std::function<void(const ElemSet&)>& visit,
                    const std::function<bool(ElemId)>& allowed) {
    if (current.size() >= cap) return;
    std::vector<ElemId> banned_here;
    for (size_t fi = 0; fi < frontier.size(); ++fi) {
        ElemId x = frontier[fi];
        if (banned[size_t(x)] || in_set[size_t(x)]) continue;
        in_set[size_t(x)] = true;
        ElemSet next = current;
        next.insert(std::lower_bound(next.begin(), next.end(), x), x);
        std::vector<ElemId> extended = frontier;
        for (ElemId y : idx.neighbors(x))
            if (!in_set[size_t(y)] && !banned[size_t(y)] && allowed(y))
                extended.push_back(y);
        visit(next);
        ElemSet saved = std::move(current);
        current = std::move(next);
        grow_connected(idx, current, extended, banned, in_set, cap, visit, allowed);
        current = std::move(saved);
        in_set[size_t(x)] = false;
        banned[size_t(x)] = true;
        banned_here.push_back(x);
    }
    for (ElemId x : banned_here) banned[size_t(x)] = false;
}

} // namespace

ClosureWorkspace::ClosureWorkspace(const RelStructure& m, const BaseContext& ctx, int k)
    : m_(&m), ctx_(&ctx), k_(k), idx_(m) {
    require_same_vocab(m, ctx, "closure");
    if (k < 1) throw InvalidArgumentError("closure: k must be >= 1");
    if (no_ambient_possible(ctx, k)) return;
    // connected sets algebraic over the empty set, enumerated once
    ClosureScratch scratch(m.size());
    std::vector<bool> banned(size_t(m.size()), false), in_set(size_t(m.size()), false);
    for (ElemId v = 0; v < m.size(); ++v) {
        ElemSet current{v};
        in_set[size_t(v)] = true;
        std::vector<ElemId> frontier;
        for (ElemId y : idx_.neighbors(v))
            if (y > v) frontier.push_back(y);
        auto allowed = [&](ElemId y) { return y > v; };
        auto visit = [&](const ElemSet& b) {
            if (algebraic_over(idx_, b, {}, ctx, scratch)) ambient_.push_back(b);
        };
        visit(current);
        grow_connected(idx_, current, frontier, banned, in_set, size_t(k), visit, allowed);
        in_set[size_t(v)] = false;
    }
    std::sort(ambient_.begin(), ambient_.end(), set_lex_less);
}

ClosureResult closure(const ElemSet& a, const ClosureWorkspace& ws) {
    const RelStructure& m = ws.structure();
    const BaseContext& ctx = ws.context();
    const GaifmanIndex& idx = ws.gaifman();
    int k = ws.k();
    for (ElemId v : a)
        if (v < 0 || v >= m.size())
            throw InvalidArgumentError("closure: base element outside universe");

    ClosureResult out;
    out.base = a;
    out.k = k;
    out.result = a;

    // witnesses meeting A: S = B∩A ranges over subsets of A's boundary (a
    // base element with no tuple into the new part is droppable, and the new
    // part must grow connected to S through tuples inside B)
    ElemSet boundary;
    for (ElemId v : a)
        for (ElemId y : idx.neighbors(v))
            if (!set_contains(a, y)) { boundary.push_back(v); break; }
    std::vector<ElemSet> subsets{{}};
    for (ElemId v : boundary) {
        size_t cnt = subsets.size();
        for (size_t i = 0; i < cnt; ++i) {
            if (int(subsets[i].size()) >= k - 1) continue;
            ElemSet s = subsets[i];
            s.push_back(v);
            subsets.push_back(std::move(s));
        }
    }
    ClosureScratch scratch(m.size());
    std::vector<bool> banned(size_t(m.size()), false), in_set(size_t(m.size()), false);
    for (const ElemSet& s : subsets) {
        if (s.empty()) continue;
        for (ElemId v : s) in_set[size_t(v)] = true;
        std::vector<ElemId> frontier;
        for (ElemId v : s)
            for (ElemId y : idx.neighbors(v))
                if (!set_contains(a, y) && !in_set[size_t(y)]) frontier.push_back(y);
        std::sort(frontier.begin(), frontier.end());
        frontier.erase(std::unique(frontier.begin(), frontier.end()), frontier.end());
        auto allowed = [&](ElemId y) { return !set_contains(a, y); };
        ElemSet current = s;
        auto visit = [&](const ElemSet& b) {
            if (algebraic_over(idx, b, a, ctx, scratch)) {
                out.certificate.push_back(b);
                out.result = set_union(out.result, b);
            }
        };
        grow_connected(idx, current, frontier, banned, in_set, size_t(k), visit, allowed);
        for (ElemId v : s) in_set[size_t(v)] = false;
    }

    // witnesses disjoint from A (already algebraic over the empty set)
    for (const ElemSet& b : ws.ambient_witnesses())
        if (set_intersect(b, a).empty()) {
            out.certificate.push_back(b);
            out.result = set_union(out.result, b);
        }

    std::sort(out.certificate.begin(), out.certificate.end(), set_lex_less);
    out.certificate.erase(std::unique(out.certificate.begin(), out.certificate.end()),
                          out.certificate.end());
    return out;
}

ClosureResult closure(const ElemSet& a, const RelStructure& m, int k,
                      const BaseContext& ctx) {
    ClosureWorkspace ws(m, ctx, k);
    return closure(a, ws);
}

ElemSet closure_iter(const ElemSet& a, const RelStructure& m, int k, int iters,
                     const BaseContext& ctx) {
    if (iters < 0 && iters != kToFixpoint)
        throw InvalidArgumentError("closure_iter: iteration count must be >= 0");
    ClosureWorkspace ws(m, ctx, k);
    ElemSet cur = a;
    int done = 0;
    while (iters == kToFixpoint || done < iters) {
        ElemSet next = closure(cur, ws).result;
        ++done;
        if (next == cur) break;
        cur = std::move(next);
    }
    return cur;
}

ClosureBound closure_bound(int k, int ell, const BaseContext& ctx, long long search_cap) {
    if (k < 1 || ell < 0) throw InvalidArgumentError("closure_bound: need k >= 1, l >= 0");
    if (search_cap <= 0) throw InvalidArgumentError("closure_bound: positive cap required");
    ClosureBound out;
    out.bound = ell;

    // per base size s: the worst base shape's total of fan-size * new-elements
    std::vector<double> per_size(size_t(std::min(k, ell)) + 1, 0.0);
    bool enum_overflow = false;
    enumerate_structures(ctx.vocab_ptr(), k, SmallGenCaps{}, [&](const RelStructure& c2) {
        // admissible: every pattern nonnegative over the empty set
        MaskCalc calc = make_calc(c2, ctx);
        Mask full = calc.full();
        for (Mask y = full;; y = (y - 1) & full) {
            if (calc.w(0, y) < -kWeightTol) return;
            if (y == 0) break;
        }
        SignCalc sc{calc};
        // every base subset shape, deduplicated up to isomorphism over C1
        std::set<std::string> local_types;
        for (Mask c1 = (full - 1) & full;; c1 = (c1 - 1) & full) {
            int s = mask_popcount(c1);
            if (s <= std::min(k, ell)) {
                bool alg = false;
                try {
                    alg = sc.algebraic(c1, full);
                } catch (const DegenerateContextError&) {
                    alg = false; // zero-weight patterns are the screen's business
                }
                if (alg) {
                    ElemSet c1set = mask_to_set(c1);
                    if (local_types
                            .insert(c2.canonical_key_pointed(Tuple(c1set.begin(), c1set.end())))
                            .second) {
                        double wneg = -calc.w(c1, full);
                        double wbase = calc.w(0, c1);
                        double fan = std::floor(wbase / wneg + kWeightTol);
                        int d = mask_popcount(full & ~c1);
                        double mult = fan;
                        if (d > 1) {
                            double f = 1.0;
                            for (int i = 2; i <= d; ++i) f *= double(i);
                            mult = f * std::pow(fan + 1.0, double(d));
                        }
                        per_size[size_t(s)] += mult * double(d);
                        ++out.type_count;
                    }
                }
            }
            if (c1 == 0) break;
        }
    }, &enum_overflow);
    if (enum_overflow) {
        out.overflow = true;
        return out;
    }

    double total = double(ell);
    double choices = 1.0;
    for (int s = 0; s <= std::min(k, ell); ++s) {
        if (s > 0) choices = choices * double(ell - s + 1) / double(s);
        total += choices * per_size[size_t(s)];
        if (total > double(search_cap)) {
            out.overflow = true;
            return out;
        }
    }
    out.bound = (long long)(std::ceil(total - kWeightTol));
    return out;
}

SmallPairTables::SmallPairTables(const RelStructure& s, const BaseContext& ctx)
    : n_(s.size()), calc_(make_calc(s, ctx)) {
    if (n_ > 11) throw InvalidArgumentError("pair tables limited to <= 11 elements");
    size_t m = size_t(1) << n_;
    alg_.assign(m * m, 0);
    strong_.assign(m * m, 0);
    for (Mask b = 0; b < (Mask(1) << n_); ++b) {
        for (Mask s0 = b;; s0 = (s0 - 1) & b) {
            Mask a = s0;
            bool alg = true, str = true;
            Mask d = b & ~a;
            if (d) {
                for (Mask t = (d - 1) & d;; t = (t - 1) & d) {
                    double w = calc_.w(a | t, b);
                    if (std::fabs(w) <= kWeightTol) zero_seen_ = true;
                    if (w >= 0.0) { alg = false; }
                    if (t == 0) break;
                }
                for (Mask t = d;; t = (t - 1) & d) {
                    if (t != 0) {
                        double w = calc_.w(a, a | t);
                        if (std::fabs(w) <= kWeightTol) zero_seen_ = true;
                        if (w <= 0.0) { str = false; }
                    }
                    if (t == 0) break;
                }
            }
            alg_[(size_t(a) << n_) | b] = alg ? 1 : 0;
            strong_[(size_t(a) << n_) | b] = str ? 1 : 0;
            if (s0 == 0) break;
        }
    }
}

bool SmallPairTables::algebraic(Mask a, Mask b) const {
    return alg_[(size_t(a) << n_) | b] != 0;
}

bool SmallPairTables::strong(Mask a, Mask b) const {
    return strong_[(size_t(a) << n_) | b] != 0;
}

bool SmallPairTables::primitive(Mask a, Mask b) const {
    if (a == b || !strong(a, b)) return false;
    Mask d = b & ~a;
    for (Mask s = (d - 1) & d; s != 0; s = (s - 1) & d)
        if (strong(a, a | s) && strong(a | s, b)) return false;
    return true;
}

} // namespace zeroone
