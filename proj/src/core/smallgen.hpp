#ifndef ZEROONE_SMALLGEN_HPP
#define ZEROONE_SMALLGEN_HPP

#include <functional>
#include <vector>

#include "structures.hpp"

namespace zeroone {

struct SmallGenCaps {
    // Per-relation cap on the number of tuples; -1 means exhaustive (all
    // subsets of the tuple universe). Empty vector: exhaustive when the
    // tuple universe has <= 16 slots, otherwise capped at 2.
    std::vector<int> max_atoms;
    long long labeled_limit = 20'000'000;
};

// Every structure over `vocab` with 1..max_size elements, one canonical
// representative per isomorphism class, in a deterministic order.
// Sets *overflow when the labeled space exceeds caps.labeled_limit (nothing
// is enumerated past that point).
void enumerate_structures(const VocabPtr& vocab, int max_size, const SmallGenCaps& caps,
                          const std::function<void(const RelStructure&)>& visit,
                          bool* overflow = nullptr);

// Configurations of the relations in [first_new_rel, vocab size) over a
// fixed reduct, deduplicated up to isomorphism (of the whole expanded
// structure). The base tuples stay untouched.
void enumerate_expansions(const RelStructure& base, const VocabPtr& expanded_vocab,
                          int first_new_rel, const SmallGenCaps& caps,
                          const std::function<void(const RelStructure&)>& visit,
                          bool* overflow = nullptr);

// All tuple slots of one relation over n elements (ascending): combinations
// for symmetric relations, arrangements otherwise.
std::vector<Tuple> tuple_universe(const RelationDecl& rel, int n);

// Cheap exact isomorphism key for structures with <= 10 elements; packed
// integer form of the minimum-permutation encoding.
std::vector<uint64_t> fast_canonical(const RelStructure& s);

} // namespace zeroone

#endif
