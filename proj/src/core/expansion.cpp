#include "expansion.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "smallgen.hpp"

namespace zeroone {

ExpansionContext::ExpansionContext(BaseContext base, std::vector<NewRelation> extra,
                                   double bracket_widen)
    : base_(std::move(base)), extra_(std::move(extra)), widen_(bracket_widen) {
    std::vector<RelationDecl> rels = base_.vocab().relations();
    for (const NewRelation& nr : extra_) {
        if (nr.beta > 0.0)
            throw InvalidArgumentError("expansion: beta for " + nr.decl.name +
                                       " must be <= 0");
        if (!(nr.coeff > 0.0 && nr.coeff < 1.0))
            throw InvalidArgumentError("expansion: coeff for " + nr.decl.name +
                                       " must lie in (0,1)");
        rels.push_back(nr.decl);
    }
    if (widen_ < 1.0) throw InvalidArgumentError("expansion: bracket widening must be >= 1");
    vocab_ = std::make_shared<Vocabulary>(std::move(rels));
}

double ExpansionContext::atom_beta(int rel, const std::vector<int>& pattern) const {
    for (const Refinement& r : refinements_)
        if (r.rel == rel && r.pattern == pattern) return r.beta;
    return extra_[size_t(rel - base_rel_count())].beta;
}

double ExpansionContext::atom_coeff(int rel, const std::vector<int>& pattern) const {
    for (const Refinement& r : refinements_)
        if (r.rel == rel && r.pattern == pattern) return r.coeff;
    return extra_[size_t(rel - base_rel_count())].coeff;
}

void ExpansionContext::add_refinement(int rel, std::vector<int> pattern, double beta,
                                      double coeff) {
    if (!is_new(rel)) throw InvalidArgumentError("refinement: not a new relation");
    if (beta > 0.0 || !(coeff > 0.0 && coeff < 1.0))
        throw InvalidArgumentError("refinement: invalid beta/coeff");
    refinements_.push_back({rel, std::move(pattern), beta, coeff});
}

RelStructure ExpansionContext::reduct(const RelStructure& plus) const {
    if (!(plus.vocab() == *vocab_))
        throw InvalidArgumentError("reduct: structure is not over the expanded vocabulary");
    std::vector<std::vector<Tuple>> tuples;
    for (int r = 0; r < base_rel_count(); ++r) tuples.push_back(plus.tuples(r));
    return RelStructure(base_.vocab_ptr(), plus.size(), std::move(tuples));
}

RelStructure ExpansionContext::lift(const RelStructure& base_structure) const {
    if (!(base_structure.vocab() == base_.vocab()))
        throw InvalidArgumentError("lift: structure is not over the base vocabulary");
    std::vector<std::vector<Tuple>> tuples;
    for (int r = 0; r < base_rel_count(); ++r) tuples.push_back(base_structure.tuples(r));
    tuples.resize(size_t(vocab_->size()));
    return RelStructure(vocab_, base_structure.size(), std::move(tuples));
}

const char* plus_kind_name(PlusKind k) {
    switch (k) {
        case PlusKind::B: return "b";
        case PlusKind::J: return "j";
        case PlusKind::T: return "t";
        case PlusKind::Qr: return "qr";
        case PlusKind::None: return "none";
    }
    return "?";
}

namespace {

std::vector<int> pattern_of(const RelStructure& plus, int base_rels, const Tuple& atom) {
    ElemSet support = make_set(Tuple(atom));
    std::vector<int> pattern(size_t(base_rels), 0);
    for (int r = 0; r < base_rels; ++r)
        for (const Tuple& t : plus.tuples(r)) {
            bool inside = true;
            for (ElemId v : t)
                if (!set_contains(support, v)) { inside = false; break; }
            if (inside) ++pattern[size_t(r)];
        }
    return pattern;
}

} // namespace

std::vector<int> atom_pattern(const RelStructure& plus, const ExpansionContext& ctx,
                              const Tuple& atom) {
    return pattern_of(plus, ctx.base_rel_count(), atom);
}

ExpandedTables::ExpandedTables(const RelStructure& plus, const ExpansionContext& ctx)
    : n_(plus.size()), base_(ctx.reduct(plus), ctx.base()),
      atom_sum_() {
    std::vector<std::pair<Mask, double>> atoms;
    for (int r = ctx.base_rel_count(); r < plus.vocab().size(); ++r)
        for (const Tuple& t : plus.tuples(r)) {
            Mask m = 0;
            for (ElemId v : t) m |= Mask(1) << v;
            atoms.emplace_back(m, -ctx.atom_beta(r, pattern_of(plus, ctx.base_rel_count(), t)));
        }
    atom_sum_ = MaskCalc(n_, std::move(atoms));

    size_t cells = size_t(1) << (2 * n_);
    tb_.assign(cells, 0);
    tj_.assign(cells, 0);
    tt_.assign(cells, 0);
    Mask full_mask = full();

    // negb[a1 | b]: some a2 with a1 ⊊ a2 ⊆ b has reduct-strong and beta < 0
    std::vector<uint8_t> negb(cells, 0);
    std::vector<Mask> by_count;
    for (Mask b = 0; b <= full_mask; ++b) by_count.push_back(b);
    std::stable_sort(by_count.begin(), by_count.end(),
                     [](Mask x, Mask y) { return mask_popcount(x) < mask_popcount(y); });
    for (Mask a1 = 0; a1 <= full_mask; ++a1) {
        for (Mask b : by_count) {
            if ((a1 & b) != a1 || b == a1) continue;
            bool hit = base_.strong(a1, b) && beta(a1, b) < 0.0;
            if (!hit) {
                Mask d = b & ~a1;
                for (Mask bit = d; bit; bit &= bit - 1) {
                    Mask x = bit & (~bit + 1);
                    if (negb[idx(a1, b ^ x)]) { hit = true; break; }
                }
            }
            negb[idx(a1, b)] = hit ? 1 : 0;
        }
    }

    // b: witness a1 in [a,b] with reduct algebraic then strong, plus the
    // strictness-or-negative-step clause
    for (Mask b = 0; b <= full_mask; ++b) {
        for (Mask s = b;; s = (s - 1) & b) {
            Mask a = s;
            bool found = false;
            Mask d = b & ~a;
            for (Mask w = d;; w = (w - 1) & d) {
                Mask a1 = a | w;
                if (base_.algebraic(a, a1) && base_.strong(a1, b) &&
                    (a1 != a || negb[idx(a1, b)])) {
                    found = true;
                    break;
                }
                if (w == 0) break;
            }
            tb_[idx(a, b)] = found ? 1 : 0;
            if (s == 0) break;
        }
    }

    // j: every intermediate (including a itself) reaches b by a b-step
    for (Mask b = 0; b <= full_mask; ++b) {
        std::vector<Mask> subs;
        for (Mask s = b;; s = (s - 1) & b) {
            subs.push_back(s);
            if (s == 0) break;
        }
        std::stable_sort(subs.begin(), subs.end(), [](Mask x, Mask y) {
            return mask_popcount(x) > mask_popcount(y);
        });
        for (Mask a : subs) {
            if (a == b) { tj_[idx(a, b)] = 1; continue; }
            bool ok = tb_[idx(a, b)] != 0;
            if (ok) {
                Mask d = b & ~a;
                for (Mask bit = d; bit && ok; bit &= bit - 1) {
                    Mask x = bit & (~bit + 1);
                    if (!tj_[idx(a | x, b)]) ok = false;
                }
            }
            tj_[idx(a, b)] = ok ? 1 : 0;
        }
    }

    // t: no strictly larger j-extension inside b
    std::vector<uint8_t> bad(cells, 0);
    for (Mask a = 0; a <= full_mask; ++a) {
        for (Mask b : by_count) {
            if ((a & b) != a) continue;
            if (b == a) { tt_[idx(a, b)] = 1; continue; }
            bool has = tj_[idx(a, b)] != 0;
            if (!has) {
                Mask d = b & ~a;
                for (Mask bit = d; bit; bit &= bit - 1) {
                    Mask x = bit & (~bit + 1);
                    if (bad[idx(a, b ^ x)]) { has = true; break; }
                }
            }
            bad[idx(a, b)] = has ? 1 : 0;
            tt_[idx(a, b)] = has ? 0 : 1;
        }
    }
}

double ExpandedTables::beta(Mask a, Mask b) const {
    return base_.w(a, b) - (atom_sum_.sum_inside(b) - atom_sum_.sum_inside(a));
}

bool ExpandedTables::qr(Mask a, Mask b) const {
    if (a == b || !t(a, b)) return false;
    Mask d = b & ~a;
    for (Mask s = (d - 1) & d; s != 0; s = (s - 1) & d)
        if (t(a, a | s) && t(a | s, b)) return false;
    return true;
}

namespace {

void check_plus_pair(const SubPair& p, const ExpansionContext& ctx, const char* where) {
    if (!(p.big.vocab() == *ctx.expanded_vocab()))
        throw InvalidArgumentError(std::string(where) +
                                   ": pair is not over the expanded vocabulary");
}

} // namespace

double beta_pair(const SubPair& p, const ExpansionContext& ctx) {
    check_plus_pair(p, ctx, "beta_pair");
    RelStructure base_big = ctx.reduct(p.big);
    SubPair reduct_pair(base_big, p.small);
    PairKind kind = classify(reduct_pair, ctx.base());
    if (kind == PairKind::Equal) {
        // no new elements; only atoms sticking out of A would count, and an
        // induced pair has none
        return 0.0;
    }
    if (kind != PairKind::StrongS && kind != PairKind::PrimitivePr)
        throw InvalidArgumentError("beta_pair: reduct pair is not strong");
    double b = alpha_strong(reduct_pair, ctx.base());
    for (int r = ctx.base_rel_count(); r < p.big.vocab().size(); ++r)
        for (const Tuple& t : p.big.tuples(r)) {
            bool inside_a = true;
            for (ElemId v : t)
                if (!set_contains(p.small, v)) { inside_a = false; break; }
            if (!inside_a)
                b += ctx.atom_beta(r, pattern_of(p.big, ctx.base_rel_count(), t));
        }
    return b;
}

double beta_additivity_check(const SubPair& inner, const ElemSet& mid,
                             const ExpansionContext& ctx) {
    check_plus_pair(inner, ctx, "beta_additivity_check");
    if (!set_subset(inner.small, mid))
        throw InvalidArgumentError("beta_additivity_check: A must lie inside B");
    ElemSet all(static_cast<size_t>(inner.big.size()));
    for (int i = 0; i < inner.big.size(); ++i) all[size_t(i)] = i;
    if (!set_subset(mid, all))
        throw InvalidArgumentError("beta_additivity_check: B outside universe");

    RelStructure mid_struct = inner.big.induced(mid);
    // relabel A into mid's coordinates
    ElemSet a_in_mid;
    for (size_t i = 0; i < mid.size(); ++i)
        if (set_contains(inner.small, mid[i])) a_in_mid.push_back(ElemId(i));

    double ab = beta_pair(SubPair(mid_struct, a_in_mid), ctx);
    double bc = beta_pair(SubPair(inner.big, mid), ctx);
    double ac = beta_pair(inner, ctx);
    return ab + bc - ac;
}

PlusKind classify_plus(const SubPair& p, const ExpansionContext& ctx) {
    check_plus_pair(p, ctx, "classify_plus");
    if (p.big.size() > 7)
        throw InvalidArgumentError("classify_plus: exhaustive enumeration limited to 7 elements");
    ExpandedTables tab(p.big, ctx);
    Mask a = set_to_mask(p.small), b = tab.full();

    // the irrationality condition backs every dichotomy below
    for (Mask x = b;; x = (x - 1) & b) {
        if ((x & a) == a) {
            Mask d = b & ~x;
            for (Mask w = d;; w = (w - 1) & d) {
                Mask y = x | w;
                if (y != x && tab.reduct_strong(x, y) && tab.qr(x, y) &&
                    std::fabs(tab.beta(x, y)) <= kWeightTol)
                    throw DegenerateContextError(
                        "irrationality violation: qr sub-pair with zero beta");
                if (w == 0) break;
            }
        }
        if (x == 0) break;
    }

    if (tab.qr(a, b)) return PlusKind::Qr;
    if (tab.t(a, b)) return PlusKind::T;
    if (tab.j(a, b)) return PlusKind::J;
    if (tab.b(a, b)) return PlusKind::B;
    return PlusKind::None;
}

ExpandedPair analyze_plus(const SubPair& p, const ExpansionContext& ctx) {
    ExpandedPair out;
    out.pair = p;
    out.kind = classify_plus(p, ctx);
    RelStructure base_big = ctx.reduct(p.big);
    PairKind rk = classify(SubPair(base_big, p.small), ctx.base());
    out.beta = (rk == PairKind::StrongS || rk == PairKind::PrimitivePr ||
                rk == PairKind::Equal)
                   ? beta_pair(p, ctx)
                   : 0.0;
    return out;
}

std::vector<ScreenViolation> irrationality_screen(const ExpansionContext& ctx,
                                                  int size_bound,
                                                  const SmallGenCaps& caps) {
    if (size_bound < 1 || size_bound > 7)
        throw InvalidArgumentError("screen: size bound must lie in 1..7");
    std::vector<ScreenViolation> out;
    std::set<std::string> seen;

    auto scan_expanded = [&](const RelStructure& plus) {
        ExpandedTables tab(plus, ctx);
        Mask full = tab.full();
        for (Mask b = 0; b <= full; ++b) {
            for (Mask s = (b - 1) & b;; s = (s - 1) & b) {
                Mask a = s;
                if (tab.reduct_strong(a, b) && a != b && tab.qr(a, b)) {
                    double beta = tab.beta(a, b);
                    if (std::fabs(beta) <= kWeightTol) {
                        ElemSet bset = mask_to_set(b), aset = mask_to_set(a);
                        RelStructure ind = plus.induced(bset);
                        Tuple pinned;
                        for (size_t i = 0; i < bset.size(); ++i)
                            if (set_contains(aset, bset[i])) pinned.push_back(ElemId(i));
                        std::string key = "qr:" + ind.canonical_key_pointed(pinned);
                        if (seen.insert(key).second)
                            out.push_back({"qr_zero_beta", key, int(bset.size()), beta});
                    }
                }
                if (s == 0) break;
            }
        }
    };

    auto scan_base = [&](const RelStructure& base_struct) {
        SmallPairTables tab(base_struct, ctx.base());
        Mask full = tab.full();
        for (Mask b = 0; b <= full; ++b) {
            for (Mask s = (b - 1) & b;; s = (s - 1) & b) {
                Mask a = s;
                if (a != b) {
                    double w = tab.w(a, b);
                    if (std::fabs(w) <= kWeightTol) {
                        ElemSet bset = mask_to_set(b), aset = mask_to_set(a);
                        RelStructure ind = base_struct.induced(bset);
                        Tuple pinned;
                        for (size_t i = 0; i < bset.size(); ++i)
                            if (set_contains(aset, bset[i])) pinned.push_back(ElemId(i));
                        std::string key = "w:" + ind.canonical_key_pointed(pinned);
                        if (seen.insert(key).second)
                            out.push_back({"base_zero_weight", key, int(bset.size()), w});
                    }
                }
                if (s == 0) break;
            }
        }
    };

    bool overflow = false;
    enumerate_structures(ctx.base().vocab_ptr(), size_bound, caps,
                         [&](const RelStructure& base_struct) {
                             scan_base(base_struct);
                             if (ctx.new_rel_count() > 0) {
                                 bool ovf = false;
                                 enumerate_expansions(ctx.lift(base_struct),
                                                      ctx.expanded_vocab(),
                                                      ctx.base_rel_count(), caps,
                                                      scan_expanded, &ovf);
                                 overflow = overflow || ovf;
                             }
                         },
                         &overflow);
    (void)overflow; // caps bound the space; a truncated scan still reports
    return out;
}

DerivedExponent derived_exponent(const SubPair& p, const ExpansionContext& ctx) {
    PlusKind kind = classify_plus(p, ctx);
    if (kind != PlusKind::Qr)
        throw InvalidArgumentError("derived_exponent: pair is not qr");
    DerivedExponent out;
    out.exponent = beta_pair(p, ctx);
    double c = 1.0;
    for (int r = ctx.base_rel_count(); r < p.big.vocab().size(); ++r)
        for (const Tuple& t : p.big.tuples(r)) {
            bool inside_a = true;
            for (ElemId v : t)
                if (!set_contains(p.small, v)) { inside_a = false; break; }
            if (!inside_a) c *= ctx.atom_coeff(r, pattern_of(p.big, ctx.base_rel_count(), t));
        }
    out.coeff_lo = c / ctx.bracket_widen();
    out.coeff_hi = c * ctx.bracket_widen();
    return out;
}

} // namespace zeroone
