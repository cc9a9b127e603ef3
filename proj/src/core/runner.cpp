#include "runner.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "catalog.hpp"

namespace zeroone {

using nlohmann::json;

int RunResult::failed() const {
    int count = 0;
    for (const CheckResult& c : checks)
        if (c.status == "fail") ++count;
    return count;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgumentError("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

namespace {

// Key-value access over the [experiment] section with strict key checking.
class Params {
public:
    Params(const std::vector<RawLine>& lines, std::set<std::string> allowed)
        : allowed_(std::move(allowed)) {
        allowed_.insert("kind");
        for (const RawLine& l : lines) {
            if (!allowed_.count(l.words[0]))
                throw ParseError(l.line_no, "unknown experiment key '" + l.words[0] + "'");
            if (l.words.size() < 2)
                throw ParseError(l.line_no, "key '" + l.words[0] + "' needs a value");
            if (map_.count(l.words[0]))
                throw ParseError(l.line_no, "duplicate key '" + l.words[0] + "'");
            map_[l.words[0]] = l;
        }
    }

    bool has(const std::string& key) const { return map_.count(key) != 0; }

    std::string str(const std::string& key, const std::string& dflt = "") const {
        auto it = map_.find(key);
        return it == map_.end() ? dflt : it->second.words[1];
    }

    long num(const std::string& key, long dflt) const {
        auto it = map_.find(key);
        return it == map_.end() ? dflt : to_long(it->second.words[1], it->second.line_no);
    }

    double real(const std::string& key, double dflt) const {
        auto it = map_.find(key);
        return it == map_.end() ? dflt : to_double(it->second.words[1], it->second.line_no);
    }

    long require_num(const std::string& key) const {
        auto it = map_.find(key);
        if (it == map_.end()) throw ParseError(1, "missing required key '" + key + "'");
        return to_long(it->second.words[1], it->second.line_no);
    }

private:
    std::set<std::string> allowed_;
    std::map<std::string, RawLine> map_;
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

struct OutputBuilder {
    std::vector<json> records;
    std::vector<CheckResult> checks;
    std::ostringstream report;

    void add_record(json j) {
        j["schema"] = 1;
        records.push_back(std::move(j));
    }

    void check(const std::string& name, const std::string& status, double value,
               double threshold, const std::string& detail) {
        checks.push_back({name, status, value, threshold, detail});
        report << '[' << status << "] " << name << ": " << fmt(value);
        if (status == "pass" || status == "fail") report << " vs " << fmt(threshold);
        if (!detail.empty()) report << "  (" << detail << ')';
        report << '\n';
    }

    void info(const std::string& name, double value, const std::string& detail) {
        check(name, "info", value, 0.0, detail);
    }

    RunResult finish(const std::string& kind) {
        RunResult out;
        out.kind = kind;
        std::ostringstream js;
        for (const json& r : records) js << r.dump() << '\n';
        out.jsonl = js.str();
        std::ostringstream cs;
        cs << "name,status,value,threshold,detail\n";
        for (const CheckResult& c : checks) {
            std::string detail = c.detail;
            std::replace(detail.begin(), detail.end(), ',', ';');
            cs << c.name << ',' << c.status << ',' << fmt(c.value) << ','
               << fmt(c.threshold) << ',' << detail << '\n';
        }
        out.csv = cs.str();
        out.report = "experiment: " + kind + "\n" + report.str();
        out.checks = std::move(checks);
        return out;
    }
};

ParsedContext spec_context(const RawSpec& raw) {
    std::string text = raw.section_text("context");
    std::string expansion = raw.section_text("expansion");
    if (text.empty() && expansion.empty())
        throw ParseError(1, "missing [context] section");
    return parse_context(text + expansion);
}

SubPair spec_pair(const RawSpec& raw, const Params& p, const ParsedContext& ctx) {
    if (p.has("pair")) return builtin_pair(p.str("pair"), ctx);
    const auto* lines = raw.section("pair");
    if (!lines) throw ParseError(1, "experiment needs `pair <name>` or a [pair] section");
    std::ostringstream struct_text;
    ElemSet small;
    bool have_small = false;
    for (const RawLine& l : *lines) {
        if (l.words[0] == "small") {
            for (size_t i = 1; i < l.words.size(); ++i)
                small.push_back(int(to_long(l.words[i], l.line_no)));
            have_small = true;
            continue;
        }
        for (size_t i = 0; i < l.words.size(); ++i)
            struct_text << (i ? " " : "") << l.words[i];
        struct_text << '\n';
    }
    if (!have_small) throw ParseError(1, "[pair] section needs a `small` line");
    return SubPair(parse_structure(struct_text.str()), make_set(std::move(small)));
}

SemiGoodQuad spec_quad(const RawSpec& raw, const Params& p, const ParsedContext& ctx) {
    if (p.has("quad")) {
        SemiGoodQuad q = builtin_quad(p.str("quad"), ctx);
        q.r = int(p.num("r", q.r));
        return q;
    }
    const auto* lines = raw.section("quad");
    if (!lines) throw ParseError(1, "experiment needs `quad <name>` or a [quad] section");
    std::ostringstream struct_text;
    SemiGoodQuad q;
    ElemSet a, b;
    for (const RawLine& l : *lines) {
        if (l.words[0] == "a" || l.words[0] == "b") {
            ElemSet& target = l.words[0] == "a" ? a : b;
            for (size_t i = 1; i < l.words.size(); ++i)
                target.push_back(int(to_long(l.words[i], l.line_no)));
            continue;
        }
        if (l.words[0] == "r") {
            q.r = int(to_long(l.words[1], l.line_no));
            continue;
        }
        for (size_t i = 0; i < l.words.size(); ++i)
            struct_text << (i ? " " : "") << l.words[i];
        struct_text << '\n';
    }
    q.d = parse_structure(struct_text.str());
    q.a = make_set(std::move(a));
    q.b = make_set(std::move(b));
    q.r = int(p.num("r", q.r));
    return q;
}

System spec_system(const RawSpec& raw, const Params& p) {
    if (p.has("system")) return builtin_system(p.str("system"));
    std::string text = raw.section_text("system");
    if (text.empty())
        throw ParseError(1, "experiment needs `system <name>` or a [system] section");
    return parse_system(text);
}

SampleConfig make_sample_config(const Params& p, const ParsedContext& ctx,
                                const SpecOverrides& ov) {
    SampleConfig cfg;
    cfg.ctx = ctx.base;
    cfg.ctx_plus = ctx.expansion;
    cfg.n = int(ov.n ? *ov.n : p.num("n", 1000));
    cfg.seed = ov.seed ? *ov.seed : uint64_t(p.num("seed", 0));
    cfg.trials = int(ov.trials ? *ov.trials : p.num("trials", 20));
    cfg.epsilon = p.real("epsilon", 0.15);
    cfg.embed_cap = int(p.num("embed_cap", 200));
    cfg.bracket_log_slack = p.num("log_slack", 0) != 0;
    cfg.validate();
    return cfg;
}

json cfg_json(const SampleConfig& cfg) {
    return json{{"n", cfg.n},
                {"seed", cfg.seed},
                {"trials", cfg.trials},
                {"epsilon", cfg.epsilon},
                {"embed_cap", cfg.embed_cap}};
}

RunResult run_bracket(const RawSpec& raw, const Params& p, const SpecOverrides& ov) {
    ParsedContext ctx = spec_context(raw);
    SampleConfig cfg = make_sample_config(p, ctx, ov);
    SubPair pair = spec_pair(raw, p, ctx);
    BracketReport rep = bracket_experiment(pair, cfg);

    OutputBuilder out;
    for (const BracketTrial& t : rep.trials)
        out.add_record(json{{"trial", t.trial},
                            {"embeddings", t.embeddings},
                            {"inside", t.inside},
                            {"nu_min", t.nu_min},
                            {"nu_max", t.nu_max},
                            {"nu_mean", t.nu_mean}});
    out.info("exponent", rep.exponent, "mode " + rep.mode);
    out.info("bracket_lo", rep.lo, "");
    out.info("bracket_hi", rep.hi, "");
    out.info("embeddings", double(rep.embeddings), "");
    if (rep.inconclusive) {
        out.check("bracket", "inconclusive", 0, 0, "no embedding of the base found");
    } else if (rep.mode == "max_nu") {
        double cap = p.real("max_nu", 5);
        out.check("max_nu", double(rep.max_nu) <= cap ? "pass" : "fail",
                  double(rep.max_nu), cap, "algebraic pair: extension count stays bounded");
    } else {
        double need = p.real("min_pass_fraction", 0.9);
        out.check("bracket_fraction", rep.pass_fraction >= need ? "pass" : "fail",
                  rep.pass_fraction, need, "fraction of embeddings inside the bracket");
    }
    return out.finish("bracket");
}

RunResult run_weakly_nice(const RawSpec& raw, const Params& p, const SpecOverrides& ov) {
    ParsedContext ctx = spec_context(raw);
    SampleConfig cfg = make_sample_config(p, ctx, ov);
    SubPair pair = spec_pair(raw, p, ctx);
    int want = int(p.require_num("m"));
    WeaklyNiceReport rep = weakly_nice_experiment(pair, want, cfg);

    OutputBuilder out;
    for (const WeaklyNiceTrial& t : rep.trials)
        out.add_record(json{{"trial", t.trial},
                            {"embeddings", t.embeddings},
                            {"passed", t.passed}});
    out.info("embeddings", double(rep.embeddings), "");
    if (rep.inconclusive) {
        out.check("weakly_nice", "inconclusive", 0, 0, "no embedding of the base found");
    } else {
        double need = p.real("min_pass_fraction", 0.99);
        out.check("weakly_nice_fraction", rep.pass_fraction >= need ? "pass" : "fail",
                  rep.pass_fraction, need,
                  std::to_string(want) + " disjoint extensions per embedding");
    }
    return out.finish("weakly_nice");
}

RunResult run_closure(const RawSpec& raw, const Params& p, const SpecOverrides& ov) {
    ParsedContext ctx = spec_context(raw);
    SampleConfig cfg = make_sample_config(p, ctx, ov);
    int k = int(p.require_num("k"));
    int ell = int(p.require_num("ell"));
    int samples = int(p.num("samples", 20));
    long long cap = p.num("search_cap", 1000000000000L);
    ClosureExperimentReport rep = closure_experiment(k, ell, samples, cap, cfg);

    OutputBuilder out;
    for (const ClosureTrial& t : rep.trials)
        out.add_record(json{{"trial", t.trial},
                            {"max_size", t.max_size},
                            {"violations", t.violations}});
    if (rep.skipped) {
        out.check("closure_bound", "skipped", 0, 0, "bound overflowed the search cap");
        return out.finish("closure");
    }
    out.info("bound", double(rep.bound.bound),
             "derived from " + std::to_string(rep.bound.type_count) + " algebraic types");
    out.info("max_observed", double(rep.max_observed), "");
    out.check("closure_violations", rep.violations == 0 ? "pass" : "fail",
              double(rep.violations), 0, "closures above the bound");
    return out.finish("closure");
}

RunResult run_semi_good(const RawSpec& raw, const Params& p, const SpecOverrides& ov) {
    ParsedContext ctx = spec_context(raw);
    SampleConfig cfg = make_sample_config(p, ctx, ov);
    SemiGoodQuad quad = spec_quad(raw, p, ctx);
    int k = int(p.num("k", quad.r));
    SemiGoodReport rep = semi_good_experiment(quad, k, cfg);

    OutputBuilder out;
    for (const SemiGoodTrial& t : rep.trials)
        out.add_record(json{{"trial", t.trial},
                            {"qualifying", t.qualifying},
                            {"passed", t.passed}});
    out.info("qualifying", double(rep.qualifying),
             std::to_string(rep.skipped_trials) + " trials skipped");
    if (rep.qualifying == 0) {
        out.check("semi_good", "inconclusive", 0, 0, "no qualifying embedding");
    } else if (p.has("min_pass_fraction")) {
        double need = p.real("min_pass_fraction", 0.95);
        out.check("semi_good_fraction", rep.pass_fraction >= need ? "pass" : "fail",
                  rep.pass_fraction, need, "closure-controlled extensions found");
    } else {
        out.info("semi_good_fraction", rep.pass_fraction, "no threshold configured");
    }
    return out.finish("semi_good");
}

RunResult run_qe(const RawSpec& raw, const Params& p, const SpecOverrides& ov) {
    ParsedContext ctx = spec_context(raw);
    SampleConfig cfg = make_sample_config(p, ctx, ov);
    int k = int(p.require_num("k"));
    int tuples = int(p.num("tuples", 100));
    QeReport rep = qe_determinism_experiment(default_formula_catalog(ctx.base), k, tuples, cfg);

    OutputBuilder out;
    for (const auto& [trial, instances] : rep.per_trial_instances)
        out.add_record(json{{"trial", trial}, {"instances", instances}});
    out.info("instances", double(rep.instances), "");
    out.info("groups", double(rep.groups), "");
    double cap = p.real("max_collision_fraction", 0.01);
    out.check("qe_collision_fraction", rep.collision_fraction <= cap ? "pass" : "fail",
              rep.collision_fraction, cap,
              std::to_string(rep.colliding_groups) + " colliding closure-type groups");
    return out.finish("qe_determinism");
}

RunResult run_screen(const RawSpec& raw, const Params& p, const SpecOverrides& ov) {
    (void)ov;
    ParsedContext ctx = spec_context(raw);
    int size_bound = int(p.num("size_bound", 5));
    ExpansionContext xc = ctx.expansion ? *ctx.expansion : ExpansionContext(ctx.base, {});
    auto violations = irrationality_screen(xc, size_bound);

    OutputBuilder out;
    for (const ScreenViolation& v : violations)
        out.add_record(json{{"kind", v.kind},
                            {"pair", v.pair_key},
                            {"size", v.size},
                            {"value", v.value}});
    out.info("violations", double(violations.size()),
             "zero-weight pairs up to size " + std::to_string(size_bound));
    if (p.has("expect_min"))
        out.check("screen_expect_min",
                  double(violations.size()) >= double(p.num("expect_min", 0)) ? "pass"
                                                                              : "fail",
                  double(violations.size()), double(p.num("expect_min", 0)),
                  "required minimum number of violations");
    if (p.has("expect_max"))
        out.check("screen_expect_max",
                  double(violations.size()) <= double(p.num("expect_max", 0)) ? "pass"
                                                                              : "fail",
                  double(violations.size()), double(p.num("expect_max", 0)),
                  "allowed maximum number of violations");
    return out.finish("screen");
}

void emit_census_common(OutputBuilder& out, const CensusVerifyReport& rep) {
    for (const auto& [trial, singles] : rep.per_trial_singles)
        out.add_record(json{{"trial", trial}, {"singles", singles}});
    out.info("matches1", double(rep.matches1), "");
    out.info("matches2", double(rep.matches2), "");
}

RunResult run_census_step(const RawSpec& raw, const Params& p, const SpecOverrides& ov) {
    System sys = spec_system(raw, p);
    long l1 = p.require_num("L1");
    long trials = ov.trials ? *ov.trials : p.num("trials", 100000);
    uint64_t seed = ov.seed ? *ov.seed : uint64_t(p.num("seed", 0));
    CensusVerifyReport rep = verify_step_inequality(sys, l1, trials, seed);
    OutputBuilder out;
    emit_census_common(out, rep);
    out.info("rhs_factor", rep.rhs_factor, "");
    out.check("census_step", verdict_name(rep.verdict),
              rep.p1_lo, rep.rhs_factor * rep.p2_hi,
              "step-down inequality at L1=" + std::to_string(l1));
    return out.finish("census_step");
}

RunResult run_census_tail(const RawSpec& raw, const Params& p, const SpecOverrides& ov) {
    System sys = spec_system(raw, p);
    long lstar = p.require_num("Lstar");
    long trials = ov.trials ? *ov.trials : p.num("trials", 100000);
    uint64_t seed = ov.seed ? *ov.seed : uint64_t(p.num("seed", 0));
    CensusVerifyReport rep = verify_tail_bound(sys, lstar, trials, seed);
    OutputBuilder out;
    emit_census_common(out, rep);
    out.info("bound", rep.bound, "iterated step-down product");
    out.check("census_tail", verdict_name(rep.verdict), rep.p1_hi, rep.bound,
              "tail probability against the product bound");
    return out.finish("census_tail");
}

RunResult run_census_lower(const RawSpec& raw, const Params& p, const SpecOverrides& ov) {
    System sys = spec_system(raw, p);
    long l1 = p.require_num("L1");
    double alpha = p.real("alpha", 0.9);
    long trials = ov.trials ? *ov.trials : p.num("trials", 100000);
    uint64_t seed = ov.seed ? *ov.seed : uint64_t(p.num("seed", 0));
    CensusVerifyReport rep = verify_lower_deviation(sys, l1, alpha, trials, seed);
    OutputBuilder out;
    emit_census_common(out, rep);
    out.info("zeta_hi", rep.zeta_hi, "flippable-shortage frequency");
    out.check("census_lower", verdict_name(rep.verdict), rep.p1_hi,
              rep.rhs_factor * rep.p2_lo + rep.zeta_lo,
              "deviation inequality at alpha=" + fmt(alpha));
    if (rep.verdict_marginal)
        out.check("census_lower_marginal", verdict_name(*rep.verdict_marginal), 0, 0,
                  "per-coordinate variant");
    return out.finish("census_lower");
}

} // namespace

RunResult run_spec_text(const std::string& text, const SpecOverrides& ov) {
    RawSpec raw = parse_rawspec(text);
    for (const RawLine& l : raw.top) {
        if (l.words[0] == "schema") {
            if (to_long(l.words[1], l.line_no) != 1)
                throw ParseError(l.line_no, "unsupported schema version");
        } else {
            throw ParseError(l.line_no, "unexpected top-level directive '" + l.words[0] + "'");
        }
    }
    const auto* exp = raw.section("experiment");
    if (!exp) throw ParseError(1, "missing [experiment] section");
    std::string kind;
    for (const RawLine& l : *exp)
        if (l.words[0] == "kind") kind = l.words[1];
    if (kind.empty()) throw ParseError(1, "missing experiment kind");

    auto params = [&](std::set<std::string> keys) { return Params(*exp, std::move(keys)); };

    if (kind == "bracket")
        return run_bracket(raw, params({"pair", "n", "trials", "seed", "epsilon",
                                        "embed_cap", "min_pass_fraction", "max_nu",
                                        "log_slack"}),
                           ov);
    if (kind == "weakly_nice")
        return run_weakly_nice(
            raw, params({"pair", "n", "trials", "seed", "m", "embed_cap",
                         "min_pass_fraction"}),
            ov);
    if (kind == "closure")
        return run_closure(
            raw, params({"n", "trials", "seed", "k", "ell", "samples", "search_cap"}), ov);
    if (kind == "semi_good")
        return run_semi_good(raw, params({"quad", "n", "trials", "seed", "k", "r",
                                          "embed_cap", "min_pass_fraction"}),
                             ov);
    if (kind == "qe_determinism")
        return run_qe(raw,
                      params({"n", "trials", "seed", "k", "tuples",
                              "max_collision_fraction"}),
                      ov);
    if (kind == "screen")
        return run_screen(raw, params({"size_bound", "expect_min", "expect_max"}), ov);
    if (kind == "census_step")
        return run_census_step(raw, params({"system", "L1", "trials", "seed"}), ov);
    if (kind == "census_tail")
        return run_census_tail(raw, params({"system", "Lstar", "trials", "seed"}), ov);
    if (kind == "census_lower")
        return run_census_lower(raw, params({"system", "L1", "alpha", "trials", "seed"}),
                                ov);
    throw ParseError(1, "unknown experiment kind '" + kind + "'");
}

RunResult run_spec_file(const std::string& path, const SpecOverrides& ov) {
    return run_spec_text(read_file(path), ov);
}

void write_outputs(const RunResult& r, const std::string& dir) {
    std::filesystem::create_directories(dir);
    auto write = [&](const std::string& name, const std::string& content) {
        std::ofstream out(dir + "/" + name, std::ios::binary);
        if (!out) throw InvalidArgumentError("cannot write " + dir + "/" + name);
        out << content;
    };
    write("trials.jsonl", r.jsonl);
    write("summary.csv", r.csv);
    write("report.txt", r.report);
}

std::string catalog_text(const std::string& kind) {
    std::ostringstream os;
    auto print = [&](const char* header,
                     const std::vector<std::pair<std::string, std::string>>& items) {
        os << header << '\n';
        for (const auto& [name, desc] : items) os << "  " << name << " - " << desc << '\n';
    };
    if (kind == "contexts" || kind == "all") print("contexts:", catalog_contexts());
    if (kind == "pairs" || kind == "all") print("pairs:", catalog_pairs());
    if (kind == "systems" || kind == "all") print("systems:", catalog_systems());
    if (kind == "quads" || kind == "all") print("quads:", catalog_quads());
    if (os.str().empty())
        throw InvalidArgumentError("unknown catalog kind '" + kind +
                                   "' (contexts|pairs|systems|quads|all)");
    return os.str();
}

} // namespace zeroone
