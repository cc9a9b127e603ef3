#include "smallgen.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

#include "error.hpp"

namespace zeroone {

std::vector<Tuple> tuple_universe(const RelationDecl& rel, int n) {
    std::vector<Tuple> out;
    Tuple t;
    std::function<void()> rec = [&]() {
        if (int(t.size()) == rel.arity) {
            out.push_back(t);
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
    return out;
}

std::vector<uint64_t> fast_canonical(const RelStructure& s) {
    int n = s.size();
    if (n > 10) throw InvalidArgumentError("fast_canonical: universe too large");
    // per tuple: rel << 40 | digits base-16
    struct Raw {
        int rel;
        Tuple t;
        bool symmetric;
    };
    std::vector<Raw> raws;
    for (int r = 0; r < s.vocab().size(); ++r)
        for (const Tuple& t : s.tuples(r))
            raws.push_back({r, t, s.vocab().rel(r).symmetric});

    std::vector<ElemId> perm(static_cast<size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<uint64_t> best;
    std::vector<uint64_t> cur;
    do {
        cur.clear();
        cur.reserve(raws.size());
        for (const Raw& raw : raws) {
            Tuple m(raw.t.size());
            for (size_t i = 0; i < raw.t.size(); ++i) m[i] = perm[size_t(raw.t[i])];
            if (raw.symmetric) std::sort(m.begin(), m.end());
            uint64_t code = uint64_t(raw.rel) << 40;
            for (ElemId v : m) code = (code << 4) | uint64_t(v);
            cur.push_back(code);
        }
        std::sort(cur.begin(), cur.end());
        if (best.empty() && raws.empty()) best = cur;
        if (best.empty() || cur < best) best = cur;
    } while (std::next_permutation(perm.begin(), perm.end()));
    best.insert(best.begin(), uint64_t(n));
    return best;
}

namespace {

int default_cap(size_t universe_size) {
    return universe_size <= 16 ? -1 : 2;
}

// Subsets of `universe`: all of them when cap < 0, else those of size <= cap.
void for_each_subset(const std::vector<Tuple>& universe, int cap,
                     const std::function<void(const std::vector<Tuple>&)>& visit) {
    std::vector<Tuple> chosen;
    std::function<void(size_t)> rec = [&](size_t i) {
        if (i == universe.size()) {
            visit(chosen);
            return;
        }
        rec(i + 1);
        if (cap < 0 || int(chosen.size()) < cap) {
            chosen.push_back(universe[i]);
            rec(i + 1);
            chosen.pop_back();
        }
    };
    rec(0);
}

double subset_count(size_t universe_size, int cap) {
    if (cap < 0) {
        if (universe_size >= 63) return 1e30;
        return double(uint64_t(1) << universe_size);
    }
    double total = 0, c = 1;
    for (int i = 0; i <= cap && size_t(i) <= universe_size; ++i) {
        total += c;
        c = c * double(universe_size - size_t(i)) / double(i + 1);
    }
    return total;
}

} // namespace

void enumerate_structures(const VocabPtr& vocab, int max_size, const SmallGenCaps& caps,
                          const std::function<void(const RelStructure&)>& visit,
                          bool* overflow) {
    if (overflow) *overflow = false;
    std::set<std::vector<uint64_t>> seen;
    for (int n = 1; n <= max_size; ++n) {
        std::vector<std::vector<Tuple>> universes;
        double labeled = 1;
        for (int r = 0; r < vocab->size(); ++r) {
            universes.push_back(tuple_universe(vocab->rel(r), n));
            int cap = r < int(caps.max_atoms.size()) ? caps.max_atoms[size_t(r)]
                                                     : default_cap(universes.back().size());
            labeled *= subset_count(universes.back().size(), cap);
        }
        if (labeled > double(caps.labeled_limit)) {
            if (overflow) *overflow = true;
            return;
        }
        std::vector<std::vector<Tuple>> config(static_cast<size_t>(vocab->size()));
        std::function<void(int)> rec = [&](int r) {
            if (r == vocab->size()) {
                RelStructure s(vocab, n, config);
                auto key = fast_canonical(s);
                if (seen.insert(std::move(key)).second) visit(s);
                return;
            }
            int cap = r < int(caps.max_atoms.size()) ? caps.max_atoms[size_t(r)]
                                                     : default_cap(universes[size_t(r)].size());
            for_each_subset(universes[size_t(r)], cap, [&](const std::vector<Tuple>& sel) {
                config[size_t(r)] = sel;
                rec(r + 1);
            });
        };
        rec(0);
    }
}

void enumerate_expansions(const RelStructure& base, const VocabPtr& expanded_vocab,
                          int first_new_rel, const SmallGenCaps& caps,
                          const std::function<void(const RelStructure&)>& visit,
                          bool* overflow) {
    if (overflow) *overflow = false;
    int n = base.size();
    std::vector<std::vector<Tuple>> config(static_cast<size_t>(expanded_vocab->size()));
    for (int r = 0; r < first_new_rel; ++r) config[size_t(r)] = base.tuples(r);

    std::vector<std::vector<Tuple>> universes;
    double labeled = 1;
    for (int r = first_new_rel; r < expanded_vocab->size(); ++r) {
        universes.push_back(tuple_universe(expanded_vocab->rel(r), n));
        int cap = r < int(caps.max_atoms.size()) ? caps.max_atoms[size_t(r)]
                                                 : default_cap(universes.back().size());
        labeled *= subset_count(universes.back().size(), cap);
    }
    if (labeled > double(caps.labeled_limit)) {
        if (overflow) *overflow = true;
        return;
    }
    std::set<std::vector<uint64_t>> seen;
    std::function<void(int)> rec = [&](int r) {
        if (r == expanded_vocab->size()) {
            RelStructure s(expanded_vocab, n, config);
            auto key = fast_canonical(s);
            if (seen.insert(std::move(key)).second) visit(s);
            return;
        }
        int cap = r < int(caps.max_atoms.size())
                      ? caps.max_atoms[size_t(r)]
                      : default_cap(universes[size_t(r - first_new_rel)].size());
        for_each_subset(universes[size_t(r - first_new_rel)], cap,
                        [&](const std::vector<Tuple>& sel) {
                            config[size_t(r)] = sel;
                            rec(r + 1);
                        });
    };
    rec(first_new_rel);
}

} // namespace zeroone
