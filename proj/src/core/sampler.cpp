#include "sampler.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>

#include "parallel.hpp"

namespace zeroone {

void SampleConfig::validate() const {
    if (n < 2) throw InvalidArgumentError("sample config: universe size must be >= 2");
    if (trials < 1) throw InvalidArgumentError("sample config: trials must be >= 1");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw InvalidArgumentError("sample config: epsilon must lie in (0,1)");
    if (embed_cap < 1) throw InvalidArgumentError("sample config: embed cap must be >= 1");
}

namespace {

// Iterate the tuple slots of one relation over [0,n) in lexicographic order
// without materializing them.
void for_each_slot(const RelationDecl& rel, int n,
                   const std::function<void(const Tuple&)>& visit) {
    Tuple t;
    std::function<void()> rec = [&]() {
        if (int(t.size()) == rel.arity) {
            visit(t);
            return;
        }
        ElemId start = rel.symmetric && !t.empty() ? t.back() + 1 : 0;
        for (ElemId v = start; v < n; ++v) {
            if (!rel.symmetric && std::find(t.begin(), t.end(), v) != t.end()) continue;
            t.push_back(v);
            rec();
            t.pop_back();
        }
    };
    if (rel.arity <= n) rec();
}

double slot_count(const RelationDecl& rel, int n) {
    double c = 1;
    for (int i = 0; i < rel.arity; ++i) c *= double(n - i);
    if (rel.symmetric)
        for (int i = 2; i <= rel.arity; ++i) c /= double(i);
    return c;
}

} // namespace

RelStructure draw_base(const BaseContext& ctx, int n, Rng& rng) {
    if (n < 2) throw InvalidArgumentError("draw_base: universe size must be >= 2");
    std::vector<std::vector<Tuple>> tuples(size_t(ctx.vocab().size()));
    for (int r = 0; r < ctx.vocab().size(); ++r) {
        double p = ctx.coeff(r) * std::pow(double(n), -ctx.alpha(r));
        p = std::clamp(p, 0.0, 1.0);
        for_each_slot(ctx.vocab().rel(r), n, [&](const Tuple& t) {
            if (rng.bernoulli(p)) tuples[size_t(r)].push_back(t);
        });
    }
    return RelStructure(ctx.vocab_ptr(), n, std::move(tuples));
}

RelStructure draw_expansion(const RelStructure& base, const ExpansionContext& ctx,
                            Rng& rng) {
    if (!(base.vocab() == ctx.base().vocab()))
        throw InvalidArgumentError("draw_expansion: structure is not over the base vocabulary");
    int n = base.size();
    std::vector<std::vector<Tuple>> tuples(size_t(ctx.expanded_vocab()->size()));
    for (int r = 0; r < ctx.base_rel_count(); ++r) tuples[size_t(r)] = base.tuples(r);

    int max_arity = 0;
    for (int i = 0; i < ctx.new_rel_count(); ++i)
        max_arity = std::max(max_arity, ctx.new_rel(i).decl.arity);

    bool refined = ctx.has_refinements();
    std::vector<int> no_pattern;
    for (int arity = 1; arity <= max_arity; ++arity) {
        for (int i = 0; i < ctx.new_rel_count(); ++i) {
            const auto& nr = ctx.new_rel(i);
            if (nr.decl.arity != arity) continue;
            int rel = ctx.base_rel_count() + i;
            for_each_slot(nr.decl, n, [&](const Tuple& t) {
                double beta = nr.beta, coeff = nr.coeff;
                if (refined) {
                    std::vector<int> pattern(size_t(ctx.base_rel_count()), 0);
                    // base tuples within the atom's support
                    ElemSet support = make_set(Tuple(t));
                    for (int br = 0; br < ctx.base_rel_count(); ++br) {
                        const RelationDecl& bd = base.vocab().rel(br);
                        if (bd.arity > int(support.size())) continue;
                        std::vector<Tuple> inner = tuple_universe(bd, int(support.size()));
                        for (Tuple& it : inner) {
                            Tuple mapped(it.size());
                            for (size_t q = 0; q < it.size(); ++q)
                                mapped[q] = support[size_t(it[q])];
                            if (base.has_tuple(br, mapped)) ++pattern[size_t(br)];
                        }
                    }
                    beta = ctx.atom_beta(rel, pattern);
                    coeff = ctx.atom_coeff(rel, pattern);
                }
                double p = std::clamp(coeff * std::pow(double(n), beta), 0.0, 1.0);
                if (rng.bernoulli(p)) tuples[size_t(rel)].push_back(t);
            });
        }
    }
    return RelStructure(ctx.expanded_vocab(), n, std::move(tuples));
}

double expected_base_tuples(const BaseContext& ctx, int rel, int n) {
    double p = std::clamp(ctx.coeff(rel) * std::pow(double(n), -ctx.alpha(rel)), 0.0, 1.0);
    return slot_count(ctx.vocab().rel(rel), n) * p;
}

double expected_expansion_atoms(const ExpansionContext& ctx, int new_rel, int n) {
    const auto& nr = ctx.new_rel(new_rel);
    double p = std::clamp(nr.coeff * std::pow(double(n), nr.beta), 0.0, 1.0);
    return slot_count(nr.decl, n) * p;
}

namespace {

// Sampled embeddings of `a` into `m`: uniform injective tuples filtered by
// the embedding condition, deduplicated, capped. Rejection keeps the draw
// uniform over valid embeddings.
std::vector<std::vector<ElemId>> sample_embeddings(const RelStructure& a,
                                                   const RelStructure& m, int cap,
                                                   Rng& rng) {
    std::vector<std::vector<ElemId>> out;
    std::set<std::vector<ElemId>> seen;
    int sz = a.size();
    long attempts = 0;
    long max_attempts = long(cap) * 400;
    while (int(out.size()) < cap && attempts < max_attempts) {
        ++attempts;
        std::vector<ElemId> map;
        map.reserve(size_t(sz));
        bool ok = true;
        for (int i = 0; i < sz && ok; ++i) {
            ElemId v = ElemId(rng.next_below(uint64_t(m.size())));
            if (std::find(map.begin(), map.end(), v) != map.end()) ok = false;
            map.push_back(v);
        }
        if (!ok) continue;
        if (seen.count(map)) continue;
        if (!is_embedding(a, m, map)) continue;
        seen.insert(map);
        out.push_back(std::move(map));
    }
    return out;
}

struct ExpandedCount {
    const RelStructure* plus = nullptr;          // drawn expanded structure
    const RelStructure* pair_plus = nullptr;     // B+ of the pair
    const ExpansionContext* ctx = nullptr;
};

// Extensions of f whose every new atom of the image is present in M+.
long nu_plus(const RelStructure& m_base, const SubPair& reduct_pair,
             const std::vector<ElemId>& f, const ExpandedCount& ec) {
    auto exts = extensions(m_base, reduct_pair, f);
    long count = 0;
    for (const auto& g : exts) {
        bool ok = true;
        for (int r = ec.ctx->base_rel_count(); r < ec.pair_plus->vocab().size() && ok; ++r)
            for (const Tuple& t : ec.pair_plus->tuples(r)) {
                Tuple img(t.size());
                for (size_t i = 0; i < t.size(); ++i) img[i] = g[size_t(t[i])];
                if (!ec.plus->has_tuple(r, img)) { ok = false; break; }
            }
        if (ok) ++count;
    }
    return count;
}

} // namespace

BracketReport bracket_experiment(const SubPair& pair, const SampleConfig& cfg) {
    cfg.validate();
    BracketReport rep;

    bool expanded = cfg.ctx_plus && pair.big.vocab() == *cfg.ctx_plus->expanded_vocab();
    if (!expanded && !(pair.big.vocab() == cfg.ctx.vocab()))
        throw InvalidArgumentError("bracket: pair vocabulary matches neither context");

    double exponent = 0.0;
    RelStructure base_big = expanded ? cfg.ctx_plus->reduct(pair.big) : pair.big;
    SubPair reduct_pair(base_big, pair.small);
    RelStructure base_a = base_big.induced(pair.small);

    if (expanded) {
        DerivedExponent de = derived_exponent(pair, *cfg.ctx_plus);
        exponent = de.exponent;
        if (exponent <= 0.0)
            throw InvalidArgumentError("bracket: predicted exponent must be positive");
        rep.mode = "bracket";
    } else {
        PairKind kind = classify(pair, cfg.ctx);
        switch (kind) {
            case PairKind::Equal:
                rep.mode = "equal";
                break;
            case PairKind::AlgebraicI:
                rep.mode = "max_nu";
                break;
            case PairKind::StrongS:
            case PairKind::PrimitivePr:
                rep.mode = "bracket";
                exponent = alpha_strong(pair, cfg.ctx);
                if (exponent <= 0.0)
                    throw InvalidArgumentError("bracket: predicted exponent must be positive");
                break;
            case PairKind::Mixed:
                throw InvalidArgumentError("bracket: mixed pairs have no count prediction");
        }
    }

    rep.exponent = exponent;
    double slack = cfg.bracket_log_slack ? std::max(std::log(double(cfg.n)), 1.0) : 1.0;
    rep.lo = std::pow(double(cfg.n), exponent - cfg.epsilon) / slack;
    rep.hi = std::pow(double(cfg.n), exponent + cfg.epsilon) * slack;

    // A+ may carry atoms; qualifying embeddings must realize them exactly
    std::optional<RelStructure> a_plus;
    if (expanded) a_plus = pair.big.induced(pair.small);

    std::vector<BracketTrial> slots(static_cast<size_t>(cfg.trials));
    parallel_trials(cfg.trials, [&](int t) {
        Rng rng = Rng::substream(cfg.seed, uint64_t(t));
        RelStructure m = draw_base(cfg.ctx, cfg.n, rng);
        std::optional<RelStructure> m_plus;
        if (expanded) m_plus = draw_expansion(m, *cfg.ctx_plus, rng);

        BracketTrial trial;
        trial.trial = t;
        std::vector<std::vector<ElemId>> fs;
        if (expanded) {
            fs = sample_embeddings(*a_plus, *m_plus, cfg.embed_cap, rng);
        } else {
            fs = sample_embeddings(base_a, m, cfg.embed_cap, rng);
        }
        double nu_sum = 0;
        for (const auto& f : fs) {
            long cnt;
            if (expanded) {
                ExpandedCount ec{&*m_plus, &pair.big, &*cfg.ctx_plus};
                cnt = nu_plus(m, reduct_pair, f, ec);
            } else {
                cnt = nu(m, pair, f);
            }
            ++trial.embeddings;
            nu_sum += double(cnt);
            trial.nu_min = trial.embeddings == 1 ? cnt : std::min(trial.nu_min, cnt);
            trial.nu_max = std::max(trial.nu_max, cnt);
            if (double(cnt) >= rep.lo - 1e-12 && double(cnt) <= rep.hi + 1e-12)
                ++trial.inside;
        }
        trial.nu_mean = trial.embeddings ? nu_sum / double(trial.embeddings) : 0.0;
        slots[size_t(t)] = trial;
    });
    for (const BracketTrial& trial : slots) {
        rep.embeddings += trial.embeddings;
        rep.inside += trial.inside;
        if (trial.embeddings > 0) rep.max_nu = std::max(rep.max_nu, trial.nu_max);
        rep.trials.push_back(trial);
    }
    if (rep.embeddings == 0) {
        rep.inconclusive = true;
        rep.pass_fraction = 0.0;
    } else {
        rep.pass_fraction = double(rep.inside) / double(rep.embeddings);
    }
    return rep;
}

WeaklyNiceReport weakly_nice_experiment(const SubPair& pair, int want,
                                        const SampleConfig& cfg) {
    cfg.validate();
    if (want < 0) throw InvalidArgumentError("weakly_nice: negative extension count");
    PairKind kind = classify(pair, cfg.ctx);
    if (kind != PairKind::PrimitivePr)
        throw InvalidArgumentError("weakly_nice: pair must be primitive");
    WeaklyNiceReport rep;
    rep.want = want;
    RelStructure base_a = pair.big.induced(pair.small);
    std::vector<WeaklyNiceTrial> slots(static_cast<size_t>(cfg.trials));
    parallel_trials(cfg.trials, [&](int t) {
        Rng rng = Rng::substream(cfg.seed, uint64_t(t));
        RelStructure m = draw_base(cfg.ctx, cfg.n, rng);
        WeaklyNiceTrial trial;
        trial.trial = t;
        for (const auto& f : sample_embeddings(base_a, m, cfg.embed_cap, rng)) {
            ++trial.embeddings;
            if (disjoint_family(m, pair, f, want)) ++trial.passed;
        }
        slots[size_t(t)] = trial;
    });
    for (const WeaklyNiceTrial& trial : slots) {
        rep.embeddings += trial.embeddings;
        rep.passed += trial.passed;
        rep.trials.push_back(trial);
    }
    if (rep.embeddings == 0)
        rep.inconclusive = true;
    else
        rep.pass_fraction = double(rep.passed) / double(rep.embeddings);
    return rep;
}

ClosureExperimentReport closure_experiment(int k, int ell, int samples_per_trial,
                                           long long search_cap, const SampleConfig& cfg) {
    cfg.validate();
    if (samples_per_trial < 1)
        throw InvalidArgumentError("closure experiment: samples per trial must be >= 1");
    ClosureExperimentReport rep;
    rep.bound = closure_bound(k, ell, cfg.ctx, search_cap);
    if (rep.bound.overflow) {
        rep.skipped = true;
        return rep;
    }
    std::vector<ClosureTrial> slots(static_cast<size_t>(cfg.trials));
    parallel_trials(cfg.trials, [&](int t) {
        Rng rng = Rng::substream(cfg.seed, uint64_t(t));
        RelStructure m = draw_base(cfg.ctx, cfg.n, rng);
        ClosureWorkspace ws(m, cfg.ctx, k);
        ClosureTrial trial;
        trial.trial = t;
        for (int s = 0; s < samples_per_trial; ++s) {
            ElemSet a = rng.sample_without_replacement(cfg.n, ell);
            int size = int(closure(a, ws).result.size());
            trial.max_size = std::max(trial.max_size, size);
            if (long(size) > rep.bound.bound) ++trial.violations;
        }
        slots[size_t(t)] = trial;
    });
    for (const ClosureTrial& trial : slots) {
        rep.samples += samples_per_trial;
        rep.max_observed = std::max(rep.max_observed, trial.max_size);
        rep.violations += trial.violations;
        rep.trials.push_back(trial);
    }
    return rep;
}

SemiGoodReport semi_good_experiment(const SemiGoodQuad& quad, int k,
                                    const SampleConfig& cfg) {
    cfg.validate();
    if (!(quad.d.vocab() == cfg.ctx.vocab()))
        throw InvalidArgumentError("semi_good: quad vocabulary mismatch");
    if (quad.r < 1 || k < 1) throw InvalidArgumentError("semi_good: need k, r >= 1");
    for (ElemId v : set_union(quad.a, quad.b))
        if (v < 0 || v >= quad.d.size())
            throw InvalidArgumentError("semi_good: designated sets outside D");
    SemiGoodReport rep;
    RelStructure a_struct = quad.d.induced(quad.a);
    // closure of B inside D, fixed once
    ElemSet cl_b_in_d = closure(quad.b, quad.d, k, cfg.ctx).result;

    std::vector<SemiGoodTrial> slots(static_cast<size_t>(cfg.trials));
    parallel_trials(cfg.trials, [&](int t) {
        Rng rng = Rng::substream(cfg.seed, uint64_t(t));
        RelStructure m = draw_base(cfg.ctx, cfg.n, rng);
        ClosureWorkspace ws_r(m, cfg.ctx, quad.r);
        ClosureWorkspace ws_k(m, cfg.ctx, k);
        SemiGoodTrial trial;
        trial.trial = t;
        for (const auto& f : sample_embeddings(a_struct, m, cfg.embed_cap, rng)) {
            ElemSet image = make_set(std::vector<ElemId>(f));
            if (closure(image, ws_r).result != image) continue; // f does not qualify
            ++trial.qualifying;
            bool passed = false;
            for (const auto& g : extensions(m, SubPair(quad.d, quad.a), f)) {
                ElemSet gb;
                for (ElemId v : quad.b) gb.push_back(g[size_t(v)]);
                gb = make_set(std::move(gb));
                ElemSet lhs = closure(gb, ws_k).result;
                ElemSet rhs;
                for (ElemId v : cl_b_in_d) rhs.push_back(g[size_t(v)]);
                rhs = make_set(std::move(rhs));
                if (lhs == rhs) { passed = true; break; }
            }
            if (passed) ++trial.passed;
        }
        slots[size_t(t)] = trial;
    });
    for (const SemiGoodTrial& trial : slots) {
        if (trial.qualifying == 0) ++rep.skipped_trials;
        rep.qualifying += trial.qualifying;
        rep.passed += trial.passed;
        rep.trials.push_back(trial);
    }
    rep.pass_fraction = rep.qualifying ? double(rep.passed) / double(rep.qualifying) : 0.0;
    return rep;
}

bool eval_formula(const Formula& f, const RelStructure& m, const GaifmanIndex& idx,
                  const Tuple& args) {
    if (int(args.size()) != f.params)
        throw InvalidArgumentError("eval_formula: wrong parameter count");
    std::vector<ElemId> assign(size_t(f.params + f.exists), -1);
    for (int i = 0; i < f.params; ++i) assign[size_t(i)] = args[size_t(i)];

    // check the atoms that are fully assigned at level `var`
    auto atoms_ok = [&](int var) {
        for (const auto& [rel, vars] : f.atoms) {
            bool full = true, uses = false;
            for (int v : vars) {
                if (v == var) uses = true;
                if (assign[size_t(v)] < 0) { full = false; break; }
            }
            if (!full || !(uses || var < 0)) continue;
            Tuple img(vars.size());
            bool distinct = true;
            for (size_t i = 0; i < vars.size(); ++i) {
                img[i] = assign[size_t(vars[size_t(i)])];
                for (size_t j = 0; j < i; ++j)
                    if (img[j] == img[i]) distinct = false;
            }
            if (!distinct || !m.has_tuple(rel, img)) return false;
        }
        return true;
    };
    if (!atoms_ok(-1)) return false;

    std::function<bool(int)> rec = [&](int var) -> bool {
        if (var == f.params + f.exists) return true;
        // candidates: adjacency of an assigned variable sharing an atom,
        // otherwise the whole universe
        const std::vector<ElemId>* candidates = nullptr;
        for (const auto& [rel, vars] : f.atoms) {
            (void)rel;
            bool uses = false;
            ElemId anchor = -1;
            for (int v : vars) {
                if (v == var) uses = true;
                else if (v < var && assign[size_t(v)] >= 0) anchor = assign[size_t(v)];
            }
            if (uses && anchor >= 0) { candidates = &idx.neighbors(anchor); break; }
        }
        if (candidates) {
            for (ElemId c : *candidates) {
                assign[size_t(var)] = c;
                if (atoms_ok(var) && rec(var + 1)) return true;
            }
        } else {
            for (ElemId c = 0; c < m.size(); ++c) {
                assign[size_t(var)] = c;
                if (atoms_ok(var) && rec(var + 1)) return true;
            }
        }
        assign[size_t(var)] = -1;
        return false;
    };
    return rec(f.params);
}

std::vector<Formula> default_formula_catalog(const BaseContext& ctx) {
    int edge = -1;
    for (int r = 0; r < ctx.vocab().size(); ++r)
        if (ctx.vocab().rel(r).arity == 2) { edge = r; break; }
    if (edge < 0)
        throw InvalidArgumentError("formula catalog: context has no binary relation");
    std::vector<Formula> out;
    out.push_back({"edge", 2, 0, {{edge, {0, 1}}}});
    out.push_back({"has_neighbor", 1, 1, {{edge, {0, 1}}}});
    out.push_back({"in_triangle", 1, 2, {{edge, {0, 1}}, {edge, {0, 2}}, {edge, {1, 2}}}});
    out.push_back({"path2_from", 1, 2, {{edge, {0, 1}}, {edge, {1, 2}}}});
    out.push_back({"both_nonisolated", 2, 2, {{edge, {0, 2}}, {edge, {1, 3}}}});
    return out;
}

QeReport qe_determinism_experiment(const std::vector<Formula>& catalog, int k,
                                   int tuples_per_trial, const SampleConfig& cfg) {
    cfg.validate();
    if (tuples_per_trial < 1)
        throw InvalidArgumentError("qe experiment: tuples per trial must be >= 1");
    for (const Formula& f : catalog) {
        if (f.params < 1 || f.params > 2 || f.exists < 0 || f.exists > 2)
            throw InvalidArgumentError("qe experiment: formula " + f.name +
                                       " outside the depth/arity limits");
    }
    QeReport rep;
    using GroupMap = std::map<std::pair<std::string, std::string>, std::pair<long, long>>;
    std::vector<GroupMap> slot_groups(static_cast<size_t>(cfg.trials));
    std::vector<long> slot_instances(size_t(cfg.trials), 0);
    parallel_trials(cfg.trials, [&](int t) {
        Rng rng = Rng::substream(cfg.seed, uint64_t(t));
        RelStructure m = draw_base(cfg.ctx, cfg.n, rng);
        GaifmanIndex idx(m);
        ClosureWorkspace ws(m, cfg.ctx, k);
        GroupMap& groups = slot_groups[size_t(t)];
        for (int s = 0; s < tuples_per_trial; ++s) {
            for (const Formula& f : catalog) {
                // ordered tuple of distinct elements
                Tuple args;
                while (int(args.size()) < f.params) {
                    ElemId v = ElemId(rng.next_below(uint64_t(cfg.n)));
                    if (std::find(args.begin(), args.end(), v) == args.end())
                        args.push_back(v);
                }
                bool truth = eval_formula(f, m, idx, args);
                ElemSet base = make_set(Tuple(args));
                ElemSet cl = closure(base, ws).result;
                RelStructure neigh = m.induced(cl);
                Tuple local(args.size());
                for (size_t i = 0; i < args.size(); ++i)
                    local[i] = ElemId(std::lower_bound(cl.begin(), cl.end(), args[i]) -
                                      cl.begin());
                std::string key = neigh.canonical_key_pointed(local);
                auto& g = groups[{f.name, key}];
                if (truth) ++g.first; else ++g.second;
                ++slot_instances[size_t(t)];
            }
        }
    });
    GroupMap groups;
    for (int t = 0; t < cfg.trials; ++t) {
        for (const auto& [fk, counts] : slot_groups[size_t(t)]) {
            auto& g = groups[fk];
            g.first += counts.first;
            g.second += counts.second;
        }
        rep.instances += slot_instances[size_t(t)];
        rep.per_trial_instances.emplace_back(t, slot_instances[size_t(t)]);
    }
    for (const auto& [fk, counts] : groups) {
        ++rep.groups;
        if (counts.first > 0 && counts.second > 0) {
            ++rep.colliding_groups;
            rep.collision_instances += counts.first + counts.second;
            rep.collisions.push_back({fk.first, fk.second, counts.first, counts.second});
        }
    }
    rep.collision_fraction =
        rep.instances ? double(rep.collision_instances) / double(rep.instances) : 0.0;
    return rep;
}

} // namespace zeroone
