#include "catalog.hpp"

#include <cmath>

namespace zeroone {

namespace {

ParsedContext graph_context(double alpha) {
    ParsedContext out;
    auto vocab = std::make_shared<Vocabulary>(
        std::vector<RelationDecl>{{"edge", 2, true}});
    out.base = BaseContext(vocab, {alpha}, {1.0});
    return out;
}

int first_binary(const BaseContext& ctx) {
    for (int r = 0; r < ctx.vocab().size(); ++r)
        if (ctx.vocab().rel(r).arity == 2) return r;
    throw InvalidArgumentError("builtin pair needs a binary base relation");
}

int first_unary_new(const ExpansionContext& ctx) {
    for (int i = 0; i < ctx.new_rel_count(); ++i)
        if (ctx.new_rel(i).decl.arity == 1) return ctx.base_rel_count() + i;
    throw InvalidArgumentError("builtin pair needs a unary new relation");
}

RelStructure graph(const VocabPtr& vocab, int rel, int n, std::vector<Tuple> edges) {
    std::vector<std::vector<Tuple>> tuples(size_t(vocab->size()));
    tuples[size_t(rel)] = std::move(edges);
    return RelStructure(vocab, n, std::move(tuples));
}

} // namespace

std::vector<std::pair<std::string, std::string>> catalog_contexts() {
    return {
        {"sparse-graph-045", "one symmetric edge relation, alpha 0.45, coeff 1"},
        {"sparse-graph-06", "one symmetric edge relation, alpha 0.6, coeff 1"},
        {"sparse-graph-irr", "alpha sqrt(2)/4; no small pattern weight can vanish"},
        {"degenerate-half", "alpha 0.5; zero-weight pairs everywhere (screen demo)"},
        {"colored-sparse", "alpha 0.45 plus unary color P (beta -0.2, coeff 0.9)"},
        {"screen-zero-demo", "alpha 0.5 plus binary S (beta -0.5, coeff 0.8)"},
    };
}

std::vector<std::pair<std::string, std::string>> catalog_pairs() {
    return {
        {"pendant", "vertex inside vertex+neighbor; primitive, weight 1-alpha"},
        {"common-neighbor", "nonadjacent pair inside pair+joint neighbor; algebraic below alpha 1/2"},
        {"triangle-over-edge", "edge inside triangle; primitive for alpha < 1/2, algebraic above"},
        {"two-pendant-path", "vertex inside a hanging 2-path; strong, decomposes into two pendant steps"},
        {"colored-pendant", "vertex inside vertex+P-colored neighbor over the expanded vocabulary"},
    };
}

std::vector<std::pair<std::string, std::string>> catalog_systems() {
    return {
        {"disjoint-binomial", "20 pair-functions with disjoint ranges, one class p=0.3; singles are Binomial(20, 0.3)"},
        {"overlap-2", "10 couples sharing their first point, p=0.3; separative with overlapping ranges"},
    };
}

std::vector<std::pair<std::string, std::string>> catalog_quads() {
    return {
        {"trivial-quad", "D = B = A = one vertex; the closure equation is vacuous"},
        {"pendant-ext", "D adds one neighbor to A = B = a vertex"},
        {"rigid-ext", "D adds a joint neighbor to A = B = a vertex pair (negative weight at alpha > 1/2)"},
    };
}

ParsedContext builtin_context(const std::string& name) {
    if (name == "sparse-graph-045") return graph_context(0.45);
    if (name == "sparse-graph-06") return graph_context(0.6);
    if (name == "sparse-graph-irr") return graph_context(std::sqrt(2.0) / 4.0);
    if (name == "degenerate-half") return graph_context(0.5);
    if (name == "colored-sparse") {
        ParsedContext out = graph_context(0.45);
        out.expansion = ExpansionContext(
            out.base, {{RelationDecl{"P", 1, false}, -0.2, 0.9}});
        return out;
    }
    if (name == "screen-zero-demo") {
        ParsedContext out = graph_context(0.5);
        out.expansion = ExpansionContext(
            out.base, {{RelationDecl{"S", 2, false}, -0.5, 0.8}});
        return out;
    }
    throw InvalidArgumentError("unknown builtin context '" + name + "'");
}

SubPair builtin_pair(const std::string& name, const ParsedContext& ctx) {
    int e = first_binary(ctx.base);
    const VocabPtr& bv = ctx.base.vocab_ptr();
    if (name == "pendant") return SubPair(graph(bv, e, 2, {{0, 1}}), {0});
    if (name == "common-neighbor")
        return SubPair(graph(bv, e, 3, {{0, 2}, {1, 2}}), {0, 1});
    if (name == "triangle-over-edge")
        return SubPair(graph(bv, e, 3, {{0, 1}, {0, 2}, {1, 2}}), {0, 1});
    if (name == "two-pendant-path")
        return SubPair(graph(bv, e, 3, {{0, 1}, {1, 2}}), {0});
    if (name == "colored-pendant") {
        const ExpansionContext& xc = ctx.require_expansion();
        int p = first_unary_new(xc);
        std::vector<std::vector<Tuple>> tuples(size_t(xc.expanded_vocab()->size()));
        tuples[size_t(e)] = {{0, 1}};
        tuples[size_t(p)] = {{1}};
        return SubPair(RelStructure(xc.expanded_vocab(), 2, std::move(tuples)), {0});
    }
    throw InvalidArgumentError("unknown builtin pair '" + name + "'");
}

System builtin_system(const std::string& name) {
    System sys;
    sys.m = 2;
    sys.n = 40;
    sys.subsets = {{0, 1}};
    sys.class_of = {0};
    sys.probs = {0.3};
    if (name == "disjoint-binomial") {
        for (int i = 0; i < 20; ++i) sys.funcs.push_back({2 * i, 2 * i + 1});
        sys.validate();
        return sys;
    }
    if (name == "overlap-2") {
        // couples share their first point, so a doubly-successful couple
        // forms one two-element component
        for (int i = 0; i < 10; ++i) {
            sys.funcs.push_back({3 * i, 3 * i + 1});
            sys.funcs.push_back({3 * i, 3 * i + 2});
        }
        sys.validate();
        return sys;
    }
    throw InvalidArgumentError("unknown builtin system '" + name + "'");
}

SemiGoodQuad builtin_quad(const std::string& name, const ParsedContext& ctx) {
    int e = first_binary(ctx.base);
    const VocabPtr& bv = ctx.base.vocab_ptr();
    if (name == "trivial-quad") return {graph(bv, e, 1, {}), {0}, {0}, 1};
    if (name == "pendant-ext") return {graph(bv, e, 2, {{0, 1}}), {0}, {0}, 2};
    if (name == "rigid-ext")
        return {graph(bv, e, 3, {{0, 2}, {1, 2}}), {0, 1}, {0, 1}, 2};
    throw InvalidArgumentError("unknown builtin quad '" + name + "'");
}

} // namespace zeroone
