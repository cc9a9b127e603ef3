#include "textio.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace zeroone {

std::vector<std::string> split_words(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string w;
    while (is >> w) {
        if (w[0] == '#') break;
        out.push_back(w);
    }
    return out;
}

double to_double(const std::string& word, int line_no) {
    try {
        size_t pos = 0;
        double v = std::stod(word, &pos);
        if (pos != word.size()) throw std::invalid_argument(word);
        return v;
    } catch (const std::exception&) {
        throw ParseError(line_no, "expected a number, got '" + word + "'");
    }
}

long to_long(const std::string& word, int line_no) {
    try {
        size_t pos = 0;
        long v = std::stol(word, &pos);
        if (pos != word.size()) throw std::invalid_argument(word);
        return v;
    } catch (const std::exception&) {
        throw ParseError(line_no, "expected an integer, got '" + word + "'");
    }
}

namespace {

std::vector<RawLine> raw_lines(const std::string& text) {
    std::vector<RawLine> out;
    std::istringstream is(text);
    std::string line;
    int no = 0;
    while (std::getline(is, line)) {
        ++no;
        auto words = split_words(line);
        if (!words.empty()) out.push_back({no, std::move(words)});
    }
    return out;
}

RelationDecl parse_rel_decl(const std::string& word, int line_no) {
    size_t slash = word.find('/');
    if (slash == std::string::npos || slash == 0 || slash + 1 >= word.size())
        throw ParseError(line_no, "relation must look like name/arity, got '" + word + "'");
    RelationDecl decl;
    decl.name = word.substr(0, slash);
    std::string ar = word.substr(slash + 1);
    if (!ar.empty() && ar.back() == 's') {
        decl.symmetric = true;
        ar.pop_back();
    }
    decl.arity = int(to_long(ar, line_no));
    if (decl.arity < 1) throw ParseError(line_no, "arity must be >= 1");
    if (decl.symmetric && decl.arity < 2)
        throw ParseError(line_no, "symmetric marker needs arity >= 2");
    return decl;
}

std::string format_rel_decl(const RelationDecl& d) {
    return d.name + "/" + std::to_string(d.arity) + (d.symmetric ? "s" : "");
}

std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

RelStructure parse_structure(const std::string& text) {
    auto lines = raw_lines(text);
    VocabPtr vocab;
    int n = -1;
    std::vector<std::vector<Tuple>> tuples;
    for (const RawLine& l : lines) {
        const auto& w = l.words;
        if (w[0] == "vocab") {
            std::vector<RelationDecl> rels;
            for (size_t i = 1; i < w.size(); ++i) rels.push_back(parse_rel_decl(w[i], l.line_no));
            try {
                vocab = std::make_shared<Vocabulary>(std::move(rels));
            } catch (const Error& e) {
                throw ParseError(l.line_no, e.what());
            }
            tuples.assign(size_t(vocab->size()), {});
        } else if (w[0] == "n") {
            if (w.size() != 2) throw ParseError(l.line_no, "n expects one value");
            n = int(to_long(w[1], l.line_no));
        } else {
            if (!vocab) throw ParseError(l.line_no, "tuple before vocab line");
            int r = vocab->index_of(w[0]);
            if (r < 0) throw ParseError(l.line_no, "unknown relation '" + w[0] + "'");
            if (int(w.size()) - 1 != vocab->rel(r).arity)
                throw ParseError(l.line_no, "wrong tuple arity for " + w[0]);
            Tuple t;
            for (size_t i = 1; i < w.size(); ++i) t.push_back(int(to_long(w[i], l.line_no)));
            tuples[size_t(r)].push_back(std::move(t));
        }
    }
    if (!vocab) throw ParseError(1, "missing vocab line");
    if (n < 0) throw ParseError(1, "missing n line");
    try {
        return RelStructure(vocab, n, std::move(tuples));
    } catch (const Error& e) {
        throw ParseError(1, e.what());
    }
}

std::string format_structure(const RelStructure& s) {
    std::ostringstream os;
    os << "vocab";
    for (const RelationDecl& d : s.vocab().relations()) os << ' ' << format_rel_decl(d);
    os << "\nn " << s.size() << '\n';
    for (int r = 0; r < s.vocab().size(); ++r)
        for (const Tuple& t : s.tuples(r)) {
            os << s.vocab().rel(r).name;
            for (ElemId v : t) os << ' ' << v;
            os << '\n';
        }
    return os.str();
}

const ExpansionContext& ParsedContext::require_expansion() const {
    if (!expansion)
        throw InvalidArgumentError("this experiment needs an expansion context (newrel lines)");
    return *expansion;
}

ParsedContext parse_context(const std::string& text) {
    auto lines = raw_lines(text);
    std::vector<RelationDecl> rels;
    bool have_vocab = false;
    std::map<std::string, double> alpha, coeff;
    double ecap = 0.2, widen = 1.0;
    std::vector<ExpansionContext::NewRelation> extra;

    for (const RawLine& l : lines) {
        const auto& w = l.words;
        if (w[0] == "vocab") {
            for (size_t i = 1; i < w.size(); ++i) rels.push_back(parse_rel_decl(w[i], l.line_no));
            have_vocab = true;
        } else if (w[0] == "alpha" || w[0] == "coeff") {
            if (w.size() != 3) throw ParseError(l.line_no, w[0] + " expects: relation value");
            (w[0] == "alpha" ? alpha : coeff)[w[1]] = to_double(w[2], l.line_no);
        } else if (w[0] == "ecap") {
            if (w.size() != 2) throw ParseError(l.line_no, "ecap expects one value");
            ecap = to_double(w[1], l.line_no);
        } else if (w[0] == "widen") {
            if (w.size() != 2) throw ParseError(l.line_no, "widen expects one value");
            widen = to_double(w[1], l.line_no);
        } else if (w[0] == "newrel") {
            // newrel S/2 beta -0.5 coeff 0.8
            if (w.size() != 6 || w[2] != "beta" || w[4] != "coeff")
                throw ParseError(l.line_no, "newrel expects: name/arity beta x coeff y");
            ExpansionContext::NewRelation nr;
            nr.decl = parse_rel_decl(w[1], l.line_no);
            nr.beta = to_double(w[3], l.line_no);
            nr.coeff = to_double(w[5], l.line_no);
            extra.push_back(std::move(nr));
        } else {
            throw ParseError(l.line_no, "unknown directive '" + w[0] + "'");
        }
    }
    if (!have_vocab) throw ParseError(1, "missing vocab line");

    std::vector<double> alphas, coeffs;
    for (const RelationDecl& d : rels) {
        auto it = alpha.find(d.name);
        if (it == alpha.end())
            throw ParseError(1, "missing alpha for relation " + d.name);
        alphas.push_back(it->second);
        auto jt = coeff.find(d.name);
        coeffs.push_back(jt == coeff.end() ? 1.0 : jt->second);
    }
    ParsedContext out;
    try {
        out.base = BaseContext(std::make_shared<Vocabulary>(rels), alphas, coeffs, ecap);
        if (!extra.empty())
            out.expansion = ExpansionContext(out.base, std::move(extra), widen);
    } catch (const Error& e) {
        throw ParseError(1, e.what());
    }
    return out;
}

std::string format_context(const ParsedContext& ctx) {
    std::ostringstream os;
    os << "vocab";
    for (const RelationDecl& d : ctx.base.vocab().relations()) os << ' ' << format_rel_decl(d);
    os << '\n';
    for (int r = 0; r < ctx.base.vocab().size(); ++r) {
        const std::string& name = ctx.base.vocab().rel(r).name;
        os << "alpha " << name << ' ' << fmt_num(ctx.base.alpha(r)) << '\n';
        os << "coeff " << name << ' ' << fmt_num(ctx.base.coeff(r)) << '\n';
    }
    os << "ecap " << fmt_num(ctx.base.ecap()) << '\n';
    if (ctx.expansion) {
        for (int i = 0; i < ctx.expansion->new_rel_count(); ++i) {
            const auto& nr = ctx.expansion->new_rel(i);
            os << "newrel " << format_rel_decl(nr.decl) << " beta " << fmt_num(nr.beta)
               << " coeff " << fmt_num(nr.coeff) << '\n';
        }
        if (ctx.expansion->bracket_widen() != 1.0)
            os << "widen " << fmt_num(ctx.expansion->bracket_widen()) << '\n';
    }
    return os.str();
}

System parse_system(const std::string& text) {
    auto lines = raw_lines(text);
    System sys;
    bool have_m = false, have_n = false;
    for (const RawLine& l : lines) {
        const auto& w = l.words;
        if (w[0] == "m") {
            if (w.size() != 2) throw ParseError(l.line_no, "m expects one value");
            sys.m = int(to_long(w[1], l.line_no));
            have_m = true;
        } else if (w[0] == "n") {
            if (w.size() != 2) throw ParseError(l.line_no, "n expects one value");
            sys.n = int(to_long(w[1], l.line_no));
            have_n = true;
        } else if (w[0] == "f") {
            std::vector<int> f;
            for (size_t i = 1; i < w.size(); ++i) f.push_back(int(to_long(w[i], l.line_no)));
            sys.funcs.push_back(std::move(f));
        } else if (w[0] == "class") {
            if (w.size() != 3) throw ParseError(l.line_no, "class expects: subsets probability");
            int cls = sys.class_count();
            std::istringstream subs(w[1]);
            std::string sub;
            while (std::getline(subs, sub, ';')) {
                ElemSet members;
                std::istringstream ms(sub);
                std::string tok;
                while (std::getline(ms, tok, ','))
                    members.push_back(int(to_long(tok, l.line_no)));
                sys.subsets.push_back(make_set(std::move(members)));
                sys.class_of.push_back(cls);
            }
            sys.probs.push_back(to_double(w[2], l.line_no));
        } else {
            throw ParseError(l.line_no, "unknown directive '" + w[0] + "'");
        }
    }
    if (!have_m || !have_n) throw ParseError(1, "missing m or n line");
    try {
        sys.validate();
    } catch (const Error& e) {
        throw ParseError(1, e.what());
    }
    return sys;
}

std::string format_system(const System& sys) {
    std::ostringstream os;
    os << "m " << sys.m << "\nn " << sys.n << '\n';
    for (const auto& f : sys.funcs) {
        os << "f";
        for (int v : f) os << ' ' << v;
        os << '\n';
    }
    for (int c = 0; c < sys.class_count(); ++c) {
        os << "class ";
        bool first_sub = true;
        for (size_t u = 0; u < sys.subsets.size(); ++u) {
            if (sys.class_of[u] != c) continue;
            if (!first_sub) os << ';';
            first_sub = false;
            for (size_t i = 0; i < sys.subsets[u].size(); ++i)
                os << (i ? "," : "") << sys.subsets[u][i];
        }
        os << ' ' << fmt_num(sys.probs[size_t(c)]) << '\n';
    }
    return os.str();
}

const std::vector<RawLine>* RawSpec::section(const std::string& name) const {
    for (const auto& [sec, lines] : sections)
        if (sec == name) return &lines;
    return nullptr;
}

std::string RawSpec::section_text(const std::string& name) const {
    const auto* lines = section(name);
    if (!lines) return {};
    std::ostringstream os;
    for (const RawLine& l : *lines) {
        for (size_t i = 0; i < l.words.size(); ++i) os << (i ? " " : "") << l.words[i];
        os << '\n';
    }
    return os.str();
}

RawSpec parse_rawspec(const std::string& text) {
    RawSpec out;
    std::istringstream is(text);
    std::string line;
    int no = 0;
    std::vector<RawLine>* target = &out.top;
    while (std::getline(is, line)) {
        ++no;
        std::string trimmed = line;
        trimmed.erase(0, trimmed.find_first_not_of(" \t"));
        if (!trimmed.empty() && trimmed[0] == '[') {
            size_t close = trimmed.find(']');
            if (close == std::string::npos) throw ParseError(no, "unterminated section header");
            out.sections.emplace_back(trimmed.substr(1, close - 1), std::vector<RawLine>{});
            target = &out.sections.back().second;
            continue;
        }
        auto words = split_words(line);
        if (!words.empty()) target->push_back({no, std::move(words)});
    }
    return out;
}

} // namespace zeroone
