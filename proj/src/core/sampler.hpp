#ifndef ZEROONE_SAMPLER_HPP
#define ZEROONE_SAMPLER_HPP

#include <optional>
#include <string>
#include <vector>

#include "expansion.hpp"
#include "rng.hpp"
#include "weights.hpp"

namespace zeroone {

struct SampleConfig {
    int n = 1000;
    uint64_t seed = 0;
    int trials = 1;
    BaseContext ctx;
    std::optional<ExpansionContext> ctx_plus;
    double epsilon = 0.15;  // bracket slack exponent
    int embed_cap = 200;    // sampled embeddings per trial, without replacement
    bool bracket_log_slack = false;

    void validate() const;
};

// Independent-tuple draw: every potential tuple of R (unordered slots for
// symmetric relations) is included with probability c_R * n^(-alpha_R).
// Iteration order is fixed, so a seed pins the structure bit for bit.
RelStructure draw_base(const BaseContext& ctx, int n, Rng& rng);

// Stage-by-stage redraw over the extended vocabulary: new relations grouped
// by arity ascending, each atom drawn independently with probability
// clamp(c * n^beta, [0,1]). The reduct equals the input exactly.
RelStructure draw_expansion(const RelStructure& base, const ExpansionContext& ctx,
                            Rng& rng);

// Closed-form expected tuple counts under the two laws (test oracles).
double expected_base_tuples(const BaseContext& ctx, int rel, int n);
double expected_expansion_atoms(const ExpansionContext& ctx, int new_rel, int n);

struct BracketTrial {
    int trial = 0;
    long embeddings = 0;
    long inside = 0;
    long nu_min = 0;
    long nu_max = 0;
    double nu_mean = 0.0;
};

struct BracketReport {
    std::string mode;  // "bracket" | "max_nu" | "equal"
    double exponent = 0.0;
    double lo = 0.0, hi = 0.0;
    long embeddings = 0;
    long inside = 0;
    long max_nu = 0;
    double pass_fraction = 0.0;
    bool inconclusive = false;  // no embedding of the base was found
    std::vector<BracketTrial> trials;
};

// Extension-count bracket experiment. Strong base pairs and qr expanded
// pairs are checked against [n^(w-eps), n^(w+eps)] (optionally widened by
// the log-slack factor); algebraic base pairs report max nu instead.
// Expanded pairs require cfg.ctx_plus; extensions count when every new atom
// of the image is present.
BracketReport bracket_experiment(const SubPair& pair, const SampleConfig& cfg);

struct WeaklyNiceTrial {
    int trial = 0;
    long embeddings = 0;
    long passed = 0;
};

struct WeaklyNiceReport {
    int want = 0;
    long embeddings = 0;
    long passed = 0;
    double pass_fraction = 0.0;
    bool inconclusive = false;
    std::vector<WeaklyNiceTrial> trials;
};

// Fraction of sampled embeddings of A admitting `want` pairwise-disjoint
// extensions to B. The pair must be primitive.
WeaklyNiceReport weakly_nice_experiment(const SubPair& pair, int want,
                                        const SampleConfig& cfg);

struct ClosureTrial {
    int trial = 0;
    int max_size = 0;
    long violations = 0;
};

struct ClosureExperimentReport {
    ClosureBound bound;
    int max_observed = 0;
    long violations = 0;
    long samples = 0;
    bool skipped = false;  // bound overflowed the search cap
    std::vector<ClosureTrial> trials;
};

ClosureExperimentReport closure_experiment(int k, int ell, int samples_per_trial,
                                           long long search_cap, const SampleConfig& cfg);

struct SemiGoodQuad {
    RelStructure d;
    ElemSet a;
    ElemSet b;
    int r = 1;
};

struct SemiGoodTrial {
    int trial = 0;
    long qualifying = 0;
    long passed = 0;
};

struct SemiGoodReport {
    long qualifying = 0;
    long passed = 0;
    long skipped_trials = 0;  // trials with no qualifying embedding
    double pass_fraction = 0.0;
    std::vector<SemiGoodTrial> trials;
};

// Over sampled structures and embeddings f of A whose r-closure stays inside
// the image, the fraction admitting an extension g embedding D with
// cl^k(g(B), M) = g(cl^k(B, D)).
SemiGoodReport semi_good_experiment(const SemiGoodQuad& quad, int k,
                                    const SampleConfig& cfg);

// Positive existential formula: one block of existential variables over a
// conjunction of atoms. Variables 0..params-1 are free.
struct Formula {
    std::string name;
    int params = 1;
    int exists = 0;
    std::vector<std::pair<int, Tuple>> atoms;  // (relation, variable indices)
};

bool eval_formula(const Formula& f, const RelStructure& m, const GaifmanIndex& idx,
                  const Tuple& args);

// The shipped catalog for a single symmetric binary relation.
std::vector<Formula> default_formula_catalog(const BaseContext& ctx);

struct QeGroup {
    std::string formula;
    std::string type_key;
    long count_true = 0;
    long count_false = 0;
};

struct QeReport {
    long instances = 0;
    long collision_instances = 0;
    double collision_fraction = 0.0;
    long groups = 0;
    long colliding_groups = 0;
    std::vector<QeGroup> collisions; // the offending groups only
    std::vector<std::pair<int, long>> per_trial_instances;
};

// Groups sampled parameter tuples by the pointed isomorphism type of their
// k-closure neighborhood and reports the groups seen with both truth values.
QeReport qe_determinism_experiment(const std::vector<Formula>& catalog, int k,
                                   int tuples_per_trial, const SampleConfig& cfg);

} // namespace zeroone

#endif
