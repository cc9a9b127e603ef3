#include "structures.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace zeroone {

ElemSet make_set(std::vector<ElemId> ids) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

bool set_contains(const ElemSet& s, ElemId x) {
    return std::binary_search(s.begin(), s.end(), x);
}

ElemSet set_union(const ElemSet& a, const ElemSet& b) {
    ElemSet out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

ElemSet set_intersect(const ElemSet& a, const ElemSet& b) {
    ElemSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

ElemSet set_diff(const ElemSet& a, const ElemSet& b) {
    ElemSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool set_subset(const ElemSet& a, const ElemSet& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

bool set_lex_less(const ElemSet& a, const ElemSet& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

Vocabulary::Vocabulary(std::vector<RelationDecl> rels) : rels_(std::move(rels)) {
    for (size_t i = 0; i < rels_.size(); ++i) {
        if (rels_[i].arity < 1)
            throw InvalidArgumentError("relation " + rels_[i].name + ": arity must be >= 1");
        for (size_t j = 0; j < i; ++j)
            if (rels_[j].name == rels_[i].name)
                throw InvalidArgumentError("duplicate relation name " + rels_[i].name);
    }
}

int Vocabulary::index_of(const std::string& name) const {
    for (size_t i = 0; i < rels_.size(); ++i)
        if (rels_[i].name == name) return int(i);
    return -1;
}

namespace {

Tuple canon_tuple(const RelationDecl& rel, Tuple t) {
    if (rel.symmetric) std::sort(t.begin(), t.end());
    return t;
}

} // namespace

RelStructure::RelStructure(VocabPtr vocab, int n, std::vector<std::vector<Tuple>> tuples)
    : vocab_(std::move(vocab)), n_(n), tuples_(std::move(tuples)) {
    if (!vocab_) throw InvalidArgumentError("structure: null vocabulary");
    if (n_ < 0) throw InvalidArgumentError("structure: negative universe size");
    tuples_.resize(size_t(vocab_->size()));
    for (int r = 0; r < vocab_->size(); ++r) {
        const RelationDecl& decl = vocab_->rel(r);
        for (Tuple& t : tuples_[size_t(r)]) {
            if (int(t.size()) != decl.arity)
                throw InvalidArgumentError("tuple arity mismatch for " + decl.name);
            for (ElemId v : t)
                if (v < 0 || v >= n_)
                    throw InvalidArgumentError("tuple element outside universe in " + decl.name);
            Tuple sorted = t;
            std::sort(sorted.begin(), sorted.end());
            if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
                throw InvalidArgumentError("repeated element in tuple of " + decl.name);
            t = canon_tuple(decl, std::move(t));
        }
        auto& ts = tuples_[size_t(r)];
        std::sort(ts.begin(), ts.end());
        ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    }
}

bool RelStructure::has_tuple(int rel, const Tuple& t) const {
    Tuple c = canon_tuple(vocab_->rel(rel), t);
    const auto& ts = tuples_[size_t(rel)];
    return std::binary_search(ts.begin(), ts.end(), c);
}

long RelStructure::total_tuples() const {
    long total = 0;
    for (const auto& ts : tuples_) total += long(ts.size());
    return total;
}

RelStructure RelStructure::induced(const ElemSet& x) const {
    for (ElemId v : x)
        if (v < 0 || v >= n_)
            throw InvalidArgumentError("induced: element outside universe");
    std::vector<ElemId> newid(size_t(n_), -1);
    for (size_t i = 0; i < x.size(); ++i) newid[size_t(x[i])] = int(i);
    std::vector<std::vector<Tuple>> out(tuples_.size());
    for (size_t r = 0; r < tuples_.size(); ++r) {
        for (const Tuple& t : tuples_[r]) {
            bool inside = true;
            for (ElemId v : t)
                if (newid[size_t(v)] < 0) { inside = false; break; }
            if (!inside) continue;
            Tuple mapped(t.size());
            for (size_t i = 0; i < t.size(); ++i) mapped[i] = newid[size_t(t[i])];
            out[r].push_back(std::move(mapped));
        }
    }
    return RelStructure(vocab_, int(x.size()), std::move(out));
}

RelStructure RelStructure::relabeled(const std::vector<ElemId>& perm) const {
    std::vector<std::vector<Tuple>> out(tuples_.size());
    for (size_t r = 0; r < tuples_.size(); ++r) {
        out[r].reserve(tuples_[r].size());
        for (const Tuple& t : tuples_[r]) {
            Tuple mapped(t.size());
            for (size_t i = 0; i < t.size(); ++i) mapped[i] = perm[size_t(t[i])];
            out[r].push_back(std::move(mapped));
        }
    }
    return RelStructure(vocab_, n_, std::move(out));
}

bool RelStructure::operator==(const RelStructure& o) const {
    return n_ == o.n_ && *vocab_ == *o.vocab_ && tuples_ == o.tuples_;
}

namespace {

std::string encode(const RelStructure& s) {
    std::ostringstream os;
    os << s.size() << ';';
    for (int r = 0; r < s.vocab().size(); ++r) {
        os << '|';
        for (const Tuple& t : s.tuples(r)) {
            for (ElemId v : t) os << char('0' + v) ;
            os << ',';
        }
    }
    return os.str();
}

constexpr int kCanonicalCap = 10;

} // namespace

std::string RelStructure::canonical_key() const {
    if (n_ > kCanonicalCap)
        throw InvalidArgumentError("canonical_key: universe too large for brute force");
    std::vector<ElemId> perm(static_cast<size_t>(n_));
    std::iota(perm.begin(), perm.end(), 0);
    std::string best;
    do {
        std::string enc = encode(relabeled(perm));
        if (best.empty() || enc < best) best = std::move(enc);
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (best.empty()) best = encode(*this);
    return best;
}

std::string RelStructure::canonical_key_pointed(const Tuple& pinned) const {
    if (n_ > kCanonicalCap)
        throw InvalidArgumentError("canonical_key_pointed: universe too large");
    // Distinct pinned elements are forced onto 0..t-1 in order of first
    // occurrence; only the rest may be permuted.
    std::vector<ElemId> forced(size_t(n_), -1);
    int next = 0;
    std::string pat = "p";
    for (ElemId v : pinned) {
        if (v < 0 || v >= n_) throw InvalidArgumentError("pointed key: element outside universe");
        if (forced[size_t(v)] < 0) forced[size_t(v)] = next++;
        pat += char('0' + forced[size_t(v)]);
    }
    std::vector<ElemId> rest;
    for (ElemId v = 0; v < n_; ++v)
        if (forced[size_t(v)] < 0) rest.push_back(v);
    std::vector<ElemId> target(rest.size());
    std::iota(target.begin(), target.end(), next);
    std::string best;
    do {
        std::vector<ElemId> perm = forced;
        for (size_t i = 0; i < rest.size(); ++i) perm[size_t(rest[i])] = target[i];
        std::string enc = encode(relabeled(perm));
        if (best.empty() || enc < best) best = std::move(enc);
    } while (std::next_permutation(target.begin(), target.end()));
    if (best.empty()) best = encode(*this);
    return pat + ';' + best;
}

SubPair::SubPair(RelStructure b, ElemSet s) : big(std::move(b)), small(std::move(s)) {
    for (ElemId v : small)
        if (v < 0 || v >= big.size())
            throw InvalidArgumentError("sub-pair: small set outside universe");
}

GaifmanIndex::GaifmanIndex(const RelStructure& m) {
    adj_.resize(size_t(m.size()));
    inc_.resize(size_t(m.size()));
    for (int r = 0; r < m.vocab().size(); ++r)
        for (const Tuple& t : m.tuples(r)) {
            int id = int(flat_.size());
            flat_.push_back({r, t});
            for (ElemId v : t) {
                inc_[size_t(v)].push_back(id);
                for (ElemId w : t)
                    if (w != v) adj_[size_t(v)].push_back(w);
            }
        }
    for (auto& a : adj_) {
        std::sort(a.begin(), a.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
    }
}

namespace {

// Backtracking embedding search shared by embeddings_of / extensions / nu.
// Elements of `order` are assigned images in increasing id order; at each
// assignment every tuple pattern over already-mapped elements that involves
// the new element is checked in both directions (induced embedding).
class EmbedSearch {
public:
    EmbedSearch(const RelStructure& src, const RelStructure& dst)
        : src_(src), dst_(dst) {}

    // map: src id -> dst id or -1. order: unmapped ids to assign.
    // visit() is called with the completed map; return false to stop.
    template <typename Visit>
    void run(std::vector<ElemId>& map, const std::vector<ElemId>& order, Visit&& visit) {
        used_.assign(size_t(dst_.size()), false);
        for (ElemId v : map)
            if (v >= 0) used_[size_t(v)] = true;
        mapped_.clear();
        for (ElemId s = 0; s < src_.size(); ++s)
            if (map[size_t(s)] >= 0) mapped_.push_back(s);
        stop_ = false;
        dfs(map, order, 0, visit);
    }

private:
    template <typename Visit>
    void dfs(std::vector<ElemId>& map, const std::vector<ElemId>& order, size_t depth,
             Visit&& visit) {
        if (stop_) return;
        if (depth == order.size()) {
            if (!visit(map)) stop_ = true;
            return;
        }
        ElemId s = order[depth];
        for (ElemId img = 0; img < dst_.size(); ++img) {
            if (used_[size_t(img)]) continue;
            map[size_t(s)] = img;
            used_[size_t(img)] = true;
            mapped_.push_back(s);
            if (consistent(map, s)) dfs(map, order, depth + 1, visit);
            mapped_.pop_back();
            used_[size_t(img)] = false;
            map[size_t(s)] = -1;
            if (stop_) return;
        }
    }

    bool consistent(const std::vector<ElemId>& map, ElemId fresh) {
        for (int r = 0; r < src_.vocab().size(); ++r) {
            int arity = src_.vocab().rel(r).arity;
            if (arity > int(mapped_.size())) continue;
            Tuple t(static_cast<size_t>(arity), 0);
            if (!patterns(map, r, t, 0, fresh, false)) return false;
        }
        return true;
    }

    // Enumerate arity-length sequences of mapped elements containing `fresh`
    // (no repeats) and compare membership on both sides.
    bool patterns(const std::vector<ElemId>& map, int rel, Tuple& t, size_t pos,
                  ElemId fresh, bool has_fresh) {
        if (pos == t.size()) {
            if (!has_fresh) return true;
            Tuple img(t.size());
            for (size_t i = 0; i < t.size(); ++i) img[i] = map[size_t(t[i])];
            return src_.has_tuple(rel, t) == dst_.has_tuple(rel, img);
        }
        for (ElemId s : mapped_) {
            bool dup = false;
            for (size_t i = 0; i < pos; ++i)
                if (t[i] == s) { dup = true; break; }
            if (dup) continue;
            t[pos] = s;
            if (!patterns(map, rel, t, pos + 1, fresh, has_fresh || s == fresh)) return false;
        }
        return true;
    }

    const RelStructure& src_;
    const RelStructure& dst_;
    std::vector<bool> used_;
    std::vector<ElemId> mapped_;
    bool stop_ = false;
};

std::vector<ElemId> extension_order(const RelStructure& big, const ElemSet& small) {
    std::vector<ElemId> order;
    for (ElemId v = 0; v < big.size(); ++v)
        if (!set_contains(small, v)) order.push_back(v);
    return order;
}

void check_partial(const RelStructure& m, const SubPair& b,
                   const std::vector<ElemId>& f_on_small) {
    if (f_on_small.size() != b.small.size())
        throw InvalidArgumentError("partial map size does not match small set");
    RelStructure a = b.big.induced(b.small);
    if (!is_embedding(a, m, f_on_small))
        throw InvalidArgumentError("f is not an embedding of the base into the target");
}

} // namespace

bool is_embedding(const RelStructure& a, const RelStructure& m,
                  const std::vector<ElemId>& map) {
    if (&a.vocab() != &m.vocab() && !(a.vocab() == m.vocab())) return false;
    if (int(map.size()) != a.size()) return false;
    std::vector<bool> used(size_t(m.size()), false);
    for (ElemId v : map) {
        if (v < 0 || v >= m.size() || used[size_t(v)]) return false;
        used[size_t(v)] = true;
    }
    // Positive direction plus negative direction over all patterns.
    for (int r = 0; r < a.vocab().size(); ++r) {
        int arity = a.vocab().rel(r).arity;
        if (arity > a.size()) continue;
        Tuple t(static_cast<size_t>(arity), 0);
        // iterate all arity-sequences without repetition over a's universe
        std::vector<ElemId> elems(static_cast<size_t>(a.size()));
        std::iota(elems.begin(), elems.end(), 0);
        std::vector<bool> taken(size_t(a.size()), false);
        std::function<bool(size_t)> rec = [&](size_t pos) -> bool {
            if (pos == t.size()) {
                Tuple img(t.size());
                for (size_t i = 0; i < t.size(); ++i) img[i] = map[size_t(t[i])];
                return a.has_tuple(r, t) == m.has_tuple(r, img);
            }
            for (ElemId e : elems) {
                if (taken[size_t(e)]) continue;
                taken[size_t(e)] = true;
                t[pos] = e;
                bool ok = rec(pos + 1);
                taken[size_t(e)] = false;
                if (!ok) return false;
            }
            return true;
        };
        if (!rec(0)) return false;
    }
    return true;
}

std::vector<std::vector<ElemId>> embeddings_of(const RelStructure& a,
                                               const RelStructure& m, long cap) {
    std::vector<std::vector<ElemId>> out;
    std::vector<ElemId> map(size_t(a.size()), -1);
    std::vector<ElemId> order(static_cast<size_t>(a.size()));
    std::iota(order.begin(), order.end(), 0);
    EmbedSearch search(a, m);
    search.run(map, order, [&](const std::vector<ElemId>& full) {
        out.push_back(full);
        return cap < 0 || long(out.size()) < cap;
    });
    return out;
}

std::vector<std::vector<ElemId>> extensions(const RelStructure& m, const SubPair& b,
                                            const std::vector<ElemId>& f_on_small) {
    check_partial(m, b, f_on_small);
    std::vector<ElemId> map(size_t(b.big.size()), -1);
    for (size_t i = 0; i < b.small.size(); ++i) map[size_t(b.small[i])] = f_on_small[i];
    std::vector<std::vector<ElemId>> out;
    EmbedSearch search(b.big, m);
    search.run(map, extension_order(b.big, b.small), [&](const std::vector<ElemId>& full) {
        out.push_back(full);
        return true;
    });
    return out;
}

long nu(const RelStructure& m, const SubPair& b, const std::vector<ElemId>& f_on_small) {
    check_partial(m, b, f_on_small);
    std::vector<ElemId> map(size_t(b.big.size()), -1);
    for (size_t i = 0; i < b.small.size(); ++i) map[size_t(b.small[i])] = f_on_small[i];
    long count = 0;
    EmbedSearch search(b.big, m);
    search.run(map, extension_order(b.big, b.small), [&](const std::vector<ElemId>&) {
        ++count;
        return true;
    });
    return count;
}

std::optional<std::vector<std::vector<ElemId>>> disjoint_family(
    const RelStructure& m, const SubPair& b, const std::vector<ElemId>& f_on_small,
    int want) {
    if (want < 0) throw InvalidArgumentError("disjoint_family: negative count");
    if (want == 0) return std::vector<std::vector<ElemId>>{};
    auto exts = extensions(m, b, f_on_small);
    std::vector<ElemSet> fresh(exts.size());
    std::vector<ElemId> new_elems = extension_order(b.big, b.small);
    for (size_t i = 0; i < exts.size(); ++i) {
        ElemSet f;
        for (ElemId s : new_elems) f.push_back(exts[i][size_t(s)]);
        std::sort(f.begin(), f.end());
        fresh[i] = std::move(f);
    }
    std::vector<size_t> picked;
    std::function<bool(size_t)> rec = [&](size_t from) -> bool {
        if (int(picked.size()) == want) return true;
        for (size_t i = from; i < exts.size(); ++i) {
            bool ok = true;
            for (size_t j : picked)
                if (!set_intersect(fresh[i], fresh[j]).empty()) { ok = false; break; }
            if (!ok) continue;
            picked.push_back(i);
            if (rec(i + 1)) return true;
            picked.pop_back();
        }
        return false;
    };
    if (!rec(0)) return std::nullopt;
    std::vector<std::vector<ElemId>> out;
    for (size_t i : picked) out.push_back(exts[i]);
    return out;
}

bool is_free_amalgam(const RelStructure& m, const ElemSet& a, const ElemSet& c,
                     const ElemSet& b, std::string* diag) {
    auto fail = [&](const std::string& why) {
        if (diag) *diag = why;
        return false;
    };
    if (!set_subset(b, a)) return fail("B is not a subset of A");
    if (!set_subset(b, c)) return fail("B is not a subset of C");
    if (set_intersect(a, c) != b) return fail("A and C do not intersect exactly in B");
    for (ElemId v : set_union(a, c))
        if (v < 0 || v >= m.size()) return fail("set outside universe");
    ElemSet ac = set_union(a, c);
    for (int r = 0; r < m.vocab().size(); ++r)
        for (const Tuple& t : m.tuples(r)) {
            bool inside = true, meets_a = false, meets_c = false;
            for (ElemId v : t) {
                if (!set_contains(ac, v)) { inside = false; break; }
                if (set_contains(a, v) && !set_contains(b, v)) meets_a = true;
                if (set_contains(c, v) && !set_contains(b, v)) meets_c = true;
            }
            if (inside && meets_a && meets_c) {
                if (diag) *diag = "crossing tuple in relation " + m.vocab().rel(r).name;
                return false;
            }
        }
    if (diag) diag->clear();
    return true;
}

} // namespace zeroone
