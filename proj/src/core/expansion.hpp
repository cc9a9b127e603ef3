#ifndef ZEROONE_EXPANSION_HPP
#define ZEROONE_EXPANSION_HPP

#include <string>
#include <vector>

#include "smallgen.hpp"
#include "weights.hpp"

namespace zeroone {

// Redrawing law for the extended vocabulary: relations beyond the base are
// drawn per tuple with probability clamp(c * n^beta, [0,1]); beta <= 0 keeps
// the per-atom probability below a constant. The atom-type key carries the
// within-atom base incidence pattern so refined exponents can be attached;
// by default one (beta, coeff) per new relation applies to all its types.
class ExpansionContext {
public:
    struct NewRelation {
        RelationDecl decl;
        double beta = 0.0;   // <= 0
        double coeff = 0.5;  // in (0,1)
    };

    ExpansionContext() = default;
    ExpansionContext(BaseContext base, std::vector<NewRelation> extra,
                     double bracket_widen = 1.0);

    const BaseContext& base() const { return base_; }
    const VocabPtr& expanded_vocab() const { return vocab_; }
    int base_rel_count() const { return base_.vocab().size(); }
    int new_rel_count() const { return int(extra_.size()); }
    const NewRelation& new_rel(int i) const { return extra_[size_t(i)]; }
    bool is_new(int rel) const { return rel >= base_rel_count(); }
    double bracket_widen() const { return widen_; }

    // Per-atom exponent/coefficient; `pattern` (counts of base tuples inside
    // the atom's support, per base relation) selects a refined entry when one
    // was registered.
    double atom_beta(int rel, const std::vector<int>& pattern) const;
    double atom_coeff(int rel, const std::vector<int>& pattern) const;
    void add_refinement(int rel, std::vector<int> pattern, double beta, double coeff);
    bool has_refinements() const { return !refinements_.empty(); }

    // τ-reduct of an expanded structure.
    RelStructure reduct(const RelStructure& plus) const;
    // Lift a base structure to the expanded vocabulary with no new atoms.
    RelStructure lift(const RelStructure& base_structure) const;

private:
    struct Refinement {
        int rel;
        std::vector<int> pattern;
        double beta, coeff;
    };

    BaseContext base_;
    std::vector<NewRelation> extra_;
    VocabPtr vocab_;
    std::vector<Refinement> refinements_;
    double widen_ = 1.0;
};

enum class PlusKind { B, J, T, Qr, None };

const char* plus_kind_name(PlusKind k);

struct ExpandedPair {
    SubPair pair;   // over the expanded vocabulary
    double beta = 0.0;
    PlusKind kind = PlusKind::None;
};

// Incidence pattern of one atom: per base relation, how many base tuples lie
// inside the atom's support set.
std::vector<int> atom_pattern(const RelStructure& plus, const ExpansionContext& ctx,
                              const Tuple& atom);

// beta(A+,B+) = alpha of the reduct pair + sum of atom exponents over the
// new-relation atoms of B+ not inside A+. Requires the reduct pair strong
// (equal pairs give 0).
double beta_pair(const SubPair& p, const ExpansionContext& ctx);

// beta(A,B) + beta(B,C) - beta(A,C); both consecutive reduct pairs must be
// strong. Contract: |residual| <= 1e-9.
double beta_additivity_check(const SubPair& inner, const ElemSet& mid,
                             const ExpansionContext& ctx);

// Derived classification of an expanded pair by exhaustive enumeration of
// intermediate element sets. Most specific of qr > t > j > b; an equal pair
// reports t (the relation is reflexive, qr requires strictness).
// Throws on a qr-pair whose beta vanishes (irrationality violation).
PlusKind classify_plus(const SubPair& p, const ExpansionContext& ctx);

ExpandedPair analyze_plus(const SubPair& p, const ExpansionContext& ctx);

struct ScreenViolation {
    std::string kind;      // "base_zero_weight" | "qr_zero_beta"
    std::string pair_key;  // canonical key of (B, A pinned)
    int size = 0;
    double value = 0.0;
};

// Enumerates structures over the expanded vocabulary up to size_bound (atom
// caps keep the space finite) and reports every base sub-pair with |w| <=
// 1e-9 and every qr-pair with |beta| <= 1e-9. A report, never an exception.
std::vector<ScreenViolation> irrationality_screen(const ExpansionContext& ctx,
                                                  int size_bound,
                                                  const SmallGenCaps& caps = {});

struct DerivedExponent {
    double exponent = 0.0;    // beta(A+,B+), the predicted count exponent
    double coeff_lo = 1.0;    // product of atom coefficients, widened
    double coeff_hi = 1.0;
};

// The (+h) prediction for a qr pair: exponent beta(A+,B+) and the product of
// the atom coefficients of B+ \ A+ as bracket constants.
DerivedExponent derived_exponent(const SubPair& p, const ExpansionContext& ctx);

// Per-pair classification tables over one small expanded structure.
class ExpandedTables {
public:
    ExpandedTables(const RelStructure& plus, const ExpansionContext& ctx);

    int size() const { return n_; }
    double beta(Mask a, Mask b) const;        // requires reduct-strong(a,b)
    bool reduct_strong(Mask a, Mask b) const { return base_.strong(a, b); }
    bool reduct_algebraic(Mask a, Mask b) const { return base_.algebraic(a, b); }
    bool b(Mask a, Mask b) const { return tb_[idx(a, b)] != 0; }
    bool j(Mask a, Mask b) const { return tj_[idx(a, b)] != 0; }
    bool t(Mask a, Mask b) const { return tt_[idx(a, b)] != 0; }
    bool qr(Mask a, Mask b) const;
    Mask full() const { return n_ >= 32 ? ~Mask(0) : (Mask(1) << n_) - 1; }
    double base_w(Mask a, Mask b) const { return base_.w(a, b); }

private:
    size_t idx(Mask a, Mask b) const { return (size_t(a) << n_) | b; }

    int n_;
    SmallPairTables base_;
    MaskCalc atom_sum_; // tuple weights = atom betas; w() unused, sums used
    std::vector<uint8_t> tb_, tj_, tt_;
};

} // namespace zeroone

#endif
