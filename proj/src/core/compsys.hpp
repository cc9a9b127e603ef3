#ifndef ZEROONE_COMPSYS_HPP
#define ZEROONE_COMPSYS_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rng.hpp"
#include "structures.hpp"

namespace zeroone {

// A family of injections [m] -> [n] with independently drawn relation atoms
// on prescribed image sets. `subsets` is the family P of nonempty subsets of
// [m]; e-classes share one probability.
struct System {
    int m = 0;
    int n = 0;
    std::vector<std::vector<int>> funcs;  // each of size m, injective into [n]
    std::vector<ElemSet> subsets;         // P, sorted members
    std::vector<int> class_of;            // per subset, its e-class id
    std::vector<double> probs;            // per class, in (0,1)

    int class_count() const { return int(probs.size()); }
    void validate() const;

    // R_{u/e}: the distinct image sets of one class, sorted.
    std::vector<ElemSet> class_image_sets(int cls) const;
};

enum class SeparativityLevel { Separative, SemiSeparative, WeaklySeparative, None };

const char* separativity_name(SeparativityLevel s);

// Strongest level satisfied. The witness partition on [m] is forced: the
// transitive closure of coordinate identifications across the family; the
// induced partition on [n] then realizes the bi-implication clause by
// construction, so only the per-subset clauses decide the level.
SeparativityLevel separativity_level(const System& sys);

// f1(l1) = f2(l2) => l1 = l2 over a plain family of injections.
bool family_separative(const std::vector<std::vector<int>>& funcs);

struct DrawnModel {
    const System* sys = nullptr;
    // per class, aligned with class_image_sets(cls)
    std::vector<std::vector<ElemSet>> image_sets;
    std::vector<std::vector<uint8_t>> chosen;

    bool is_chosen(int cls, const ElemSet& image) const;
};

DrawnModel draw_model(const System& sys, Rng& rng);

struct Census {
    std::map<std::string, long> counts;  // component type key -> count
    long overflow_components = 0;        // components above the size cap
    long overflow_members = 0;
    long members = 0;                    // |F[M*]|
    int component_cap = 12;

    long singles() const;  // L_{t*}
    long weighted_total() const;  // sum |t| * L_t + overflow members

    bool operator==(const Census& o) const {
        return counts == o.counts && overflow_components == o.overflow_components &&
               overflow_members == o.overflow_members && members == o.members;
    }
};

// Key of the singleton component type t*.
std::string singleton_type_key();

// Successful functions, range-overlap components, canonical type counts.
Census census(const DrawnModel& model, int component_cap = 12);

// q_X = prod_{u in X} p_u * prod_{u in P\X} (1 - p_u); X holds indices into
// sys.subsets.
double q_weight(const System& sys, const std::vector<int>& x);
double q_all(const System& sys);
double q_none(const System& sys);

enum class Verdict { Pass, Fail, Inconclusive };

const char* verdict_name(Verdict v);

struct CensusVerifyReport {
    Verdict verdict = Verdict::Inconclusive;
    std::string claim;
    long trials = 0;
    long matches1 = 0, matches2 = 0;
    double p1_lo = 0, p1_hi = 0, p2_lo = 0, p2_hi = 0;
    double rhs_factor = 0;   // the claim's multiplicative constant
    double zeta_lo = 0, zeta_hi = 0;   // deviation-claim extra term
    long zeta_count = 0;
    std::optional<Verdict> verdict_marginal; // per-coordinate variant
    double bound = 0;        // tail claim product bound
    std::vector<std::string> notes;
    std::vector<std::pair<int, long>> per_trial_singles;
};

// Step-down inequality for the full census vector (target: L1 singletons and
// nothing else): Prob(census = L1) >= q_none * L2/(q_all |F|) * Prob(= L2).
CensusVerifyReport verify_step_inequality(const System& sys, long l1, long trials,
                                          uint64_t seed);

// Tail bound for L_{t*} = L*: the iterated step-down product.
CensusVerifyReport verify_tail_bound(const System& sys, long lstar, long trials,
                                     uint64_t seed);

// Deviation form with the empirically estimated zeta term; also reports the
// per-coordinate (marginal) variant.
CensusVerifyReport verify_lower_deviation(const System& sys, long l1, double alpha,
                                          long trials, uint64_t seed);

// Binary-code separation splitter: partitions a family of injections that
// share a common restriction (already removed from the inputs) into cells
// keyed by (first-difference positions, code bits), each cell separative.
struct SplitResult {
    std::vector<std::vector<int>> cells;  // indices into the family
    long long cell_bound = 0;             // (ceil log2 n)^(dom+1)
};

SplitResult separation_split(const std::vector<std::vector<int>>& funcs, int n);

} // namespace zeroone

#endif
