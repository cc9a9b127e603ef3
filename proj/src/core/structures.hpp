#ifndef ZEROONE_STRUCTURES_HPP
#define ZEROONE_STRUCTURES_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "error.hpp"

namespace zeroone {

using ElemId = int;
using ElemSet = std::vector<ElemId>; // sorted, no duplicates
using Tuple = std::vector<ElemId>;   // no repeated entries (irreflexive)

ElemSet make_set(std::vector<ElemId> ids);
bool set_contains(const ElemSet& s, ElemId x);
ElemSet set_union(const ElemSet& a, const ElemSet& b);
ElemSet set_intersect(const ElemSet& a, const ElemSet& b);
ElemSet set_diff(const ElemSet& a, const ElemSet& b);
bool set_subset(const ElemSet& a, const ElemSet& b); // a subseteq b
// Order used for deterministic tie-breaking: lexicographic on the sorted
// element sequence ({1} < {1,2} < {2}).
bool set_lex_less(const ElemSet& a, const ElemSet& b);

struct RelationDecl {
    std::string name;
    int arity = 0;
    // Symmetric relations hold unordered tuples; stored sorted ascending.
    bool symmetric = false;

    bool operator==(const RelationDecl&) const = default;
};

class Vocabulary {
public:
    Vocabulary() = default;
    explicit Vocabulary(std::vector<RelationDecl> rels);

    int size() const { return int(rels_.size()); }
    const RelationDecl& rel(int i) const { return rels_[size_t(i)]; }
    const std::vector<RelationDecl>& relations() const { return rels_; }
    int index_of(const std::string& name) const; // -1 when absent

    bool operator==(const Vocabulary&) const = default;

private:
    std::vector<RelationDecl> rels_;
};

using VocabPtr = std::shared_ptr<const Vocabulary>;

// Finite relational structure: universe 0..n-1, per-relation sorted tuple
// sets. Immutable after construction; cheap to copy, safe to share.
class RelStructure {
public:
    RelStructure() = default;
    // Tuples are validated (range, irreflexivity), canonicalized (symmetric
    // relations sorted), sorted and deduplicated.
    RelStructure(VocabPtr vocab, int n, std::vector<std::vector<Tuple>> tuples);

    int size() const { return n_; }
    const Vocabulary& vocab() const { return *vocab_; }
    const VocabPtr& vocab_ptr() const { return vocab_; }
    const std::vector<Tuple>& tuples(int rel) const { return tuples_[size_t(rel)]; }
    bool has_tuple(int rel, const Tuple& t) const;
    long total_tuples() const;

    // Restriction to X, relabeled order-preserving onto 0..|X|-1.
    RelStructure induced(const ElemSet& x) const;
    RelStructure relabeled(const std::vector<ElemId>& perm) const; // perm[old] = new

    bool operator==(const RelStructure&) const;

    // Minimum lexicographic encoding over all permutations; exact
    // isomorphism key for desk-scale structures (|U| <= 10).
    std::string canonical_key() const;
    // Same, with the given elements pinned pointwise (isomorphisms must fix
    // them); used to key closure neighborhoods around a parameter tuple.
    std::string canonical_key_pointed(const Tuple& pinned) const;

private:
    VocabPtr vocab_;
    int n_ = 0;
    std::vector<std::vector<Tuple>> tuples_;
};

// A <= B presented inside B: `small` is a subset of big's universe.
struct SubPair {
    RelStructure big;
    ElemSet small;

    SubPair() = default;
    SubPair(RelStructure b, ElemSet s);
};

// Element-wise adjacency and incidence index for one structure.
class GaifmanIndex {
public:
    struct FlatTuple {
        int rel;
        Tuple t;
    };

    explicit GaifmanIndex(const RelStructure& m);

    const std::vector<ElemId>& neighbors(ElemId v) const { return adj_[size_t(v)]; }
    const std::vector<int>& incident(ElemId v) const { return inc_[size_t(v)]; }
    const std::vector<FlatTuple>& flat() const { return flat_; }

private:
    std::vector<std::vector<ElemId>> adj_;
    std::vector<std::vector<int>> inc_;
    std::vector<FlatTuple> flat_;
};

// All embeddings of A into M, as image vectors indexed by A's ids,
// lexicographic on the image sequence. cap < 0 means unbounded.
std::vector<std::vector<ElemId>> embeddings_of(const RelStructure& a,
                                               const RelStructure& m,
                                               long cap = -1);

bool is_embedding(const RelStructure& a, const RelStructure& m,
                  const std::vector<ElemId>& map);

// Extensions of f to full embeddings of B.big into M, where f is given on
// B.small (f_on_small[i] is the image of B.small[i]). Deterministic order:
// lexicographic on the images of the new elements taken in increasing id
// order. Throws InvalidArgumentError when f is not an embedding of the
// induced substructure on B.small.
std::vector<std::vector<ElemId>> extensions(const RelStructure& m, const SubPair& b,
                                            const std::vector<ElemId>& f_on_small);

// |extensions(...)| without materializing.
long nu(const RelStructure& m, const SubPair& b, const std::vector<ElemId>& f_on_small);

// m extensions pairwise intersecting only in Rang(f), if they exist.
std::optional<std::vector<std::vector<ElemId>>> disjoint_family(
    const RelStructure& m, const SubPair& b, const std::vector<ElemId>& f_on_small,
    int want);

// True iff no tuple of M lies inside A∪C while meeting both A∖B and C∖B.
// Set-precondition violations (B ⊆ A, B ⊆ C, A∩C = B) yield false and, when
// diag is non-null, a note saying which precondition failed.
bool is_free_amalgam(const RelStructure& m, const ElemSet& a, const ElemSet& c,
                     const ElemSet& b, std::string* diag = nullptr);

} // namespace zeroone

#endif
