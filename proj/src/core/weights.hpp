#ifndef ZEROONE_WEIGHTS_HPP
#define ZEROONE_WEIGHTS_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "maskcalc.hpp"
#include "structures.hpp"

namespace zeroone {

// Sampling law and weight function for the base vocabulary: relation R is
// drawn with probability c_R * n^(-alpha_R) per tuple, and a pair A <= B
// gets weight |B\A| - sum alpha_R * (R-tuples of B not inside A).
class BaseContext {
public:
    BaseContext() = default;
    BaseContext(VocabPtr vocab, std::vector<double> alpha, std::vector<double> coeff,
                double ecap = 0.2);

    const Vocabulary& vocab() const { return *vocab_; }
    const VocabPtr& vocab_ptr() const { return vocab_; }
    double alpha(int rel) const { return alpha_[size_t(rel)]; }
    double coeff(int rel) const { return coeff_[size_t(rel)]; }
    double ecap() const { return ecap_; }

    bool operator==(const BaseContext& o) const {
        return *vocab_ == *o.vocab_ && alpha_ == o.alpha_ && coeff_ == o.coeff_ &&
               ecap_ == o.ecap_;
    }

private:
    VocabPtr vocab_;
    std::vector<double> alpha_;
    std::vector<double> coeff_;
    double ecap_ = 0.2;
};

enum class PairKind { Equal, AlgebraicI, StrongS, PrimitivePr, Mixed };

const char* pair_kind_name(PairKind k);

// Sign tolerance of the calculus; anything within this of zero is degenerate.
inline constexpr double kWeightTol = 1e-9;

struct WeightedPair {
    SubPair pair;
    double weight = 0.0;
    PairKind kind = PairKind::Equal;
    std::optional<std::vector<ElemSet>> decomposition;
};

// w(A,B) where A = p.small and B = p.big's whole universe.
double weight(const SubPair& p, const BaseContext& ctx);
// w(A,B) for A ⊆ B ⊆ universe(M); counts tuples of M inside B only.
double weight_sets(const RelStructure& m, const ElemSet& a, const ElemSet& b,
                   const BaseContext& ctx);

// Sign-criterion classification:
//   algebraic_i  iff w(C,B) < 0 for every A ⊆ C ⊊ B      ("rigid")
//   strong_s     iff w(A,C) > 0 for every A ⊊ C ⊆ B      ("safe")
//   primitive_pr iff strong with no strong-strong factorization
// Throws DegenerateContextError when a tested sub-pair has |w| <= 1e-9.
PairKind classify(const SubPair& p, const BaseContext& ctx);

// Chain A = A_0 ⊂ ... ⊂ A_k = B with every step primitive; deterministic
// (each step takes the lexicographically least inclusion-minimal strong
// intermediate). Requires an equal/strong/primitive pair.
std::vector<ElemSet> decompose(const SubPair& p, const BaseContext& ctx);

// Sum of step weights along decompose(); asserted equal to weight() within
// 1e-9 (internal-consistency error otherwise).
double alpha_strong(const SubPair& p, const BaseContext& ctx);

WeightedPair analyze_pair(const SubPair& p, const BaseContext& ctx);

struct ClosureResult {
    ElemSet base;
    int k = 0;
    ElemSet result;
    std::vector<ElemSet> certificate; // witness sets B with B∩A ≤_i B
};

// Reusable state for repeated closures over the same (M, ctx, k):
// Gaifman adjacency plus the base-independent witnesses (connected sets
// algebraic over the empty set).
class ClosureWorkspace {
public:
    ClosureWorkspace(const RelStructure& m, const BaseContext& ctx, int k);

    const RelStructure& structure() const { return *m_; }
    const BaseContext& context() const { return *ctx_; }
    int k() const { return k_; }
    const GaifmanIndex& gaifman() const { return idx_; }
    const std::vector<ElemSet>& ambient_witnesses() const { return ambient_; }

private:
    const RelStructure* m_;
    const BaseContext* ctx_;
    int k_;
    GaifmanIndex idx_;
    std::vector<ElemSet> ambient_;
};

// cl^k(A,M): union of all B ⊆ M with |B| <= k and B∩A ≤_i B. Candidate
// enumeration is restricted to sets connected after contracting B∩A; a
// witness with a floating component splits into witnesses of both families,
// so nothing is lost.
ClosureResult closure(const ElemSet& a, const RelStructure& m, int k,
                      const BaseContext& ctx);
ClosureResult closure(const ElemSet& a, const ClosureWorkspace& ws);

inline constexpr int kToFixpoint = -1;

// m-fold iterate of cl^k; m = kToFixpoint iterates to the fixpoint.
ElemSet closure_iter(const ElemSet& a, const RelStructure& m, int k, int iters,
                     const BaseContext& ctx);

struct ClosureBound {
    long long bound = 0;
    bool overflow = false;
    long long type_count = 0; // algebraic (C1,C2) types that contributed
};

// Upper bound m(k,l) on |cl^k(A,M)| over structures M whose every pattern
// has nonnegative weight over the empty set and |A| <= l. Single-pass
// fan-out count over algebraic extension types; multiplicities from the
// disjoint-fan count (exact for one new element, sunflower-capped beyond).
ClosureBound closure_bound(int k, int ell, const BaseContext& ctx, long long search_cap);

// Classification tables for every sub-pair of one small structure (used by
// the exhaustive invariant suites). Masks index subsets of the universe.
class SmallPairTables {
public:
    SmallPairTables(const RelStructure& s, const BaseContext& ctx);

    int size() const { return n_; }
    double w(Mask a, Mask b) const { return calc_.w(a, b); }
    bool algebraic(Mask a, Mask b) const;  // includes a == b
    bool strong(Mask a, Mask b) const;     // includes a == b
    bool primitive(Mask a, Mask b) const;  // strict
    bool zero_seen() const { return zero_seen_; }
    Mask full() const { return calc_.full(); }
    const MaskCalc& calc() const { return calc_; }

private:
    int n_;
    MaskCalc calc_;
    std::vector<uint8_t> alg_, strong_;
    bool zero_seen_ = false;
};

ElemSet mask_to_set(Mask m);
Mask set_to_mask(const ElemSet& s);

} // namespace zeroone

#endif
