#include "zeroone.h"

#include <cstring>
#include <string>

#include <json.hpp>

#include "../core/catalog.hpp"
#include "../core/expansion.hpp"
#include "../core/runner.hpp"
#include "../core/textio.hpp"

using namespace zeroone;

struct zo_structure {
    RelStructure value;
};
struct zo_context {
    ParsedContext value;
};
struct zo_system {
    System value;
};
struct zo_spec {
    std::string text;
    SpecOverrides overrides;
};
struct zo_result {
    RunResult value;
};

namespace {

thread_local std::string g_last_error = "";

zo_status fail(zo_status code, const std::string& msg) {
    g_last_error = msg;
    return code;
}

zo_status from_exception() {
    try {
        throw;
    } catch (const Error& e) {
        return fail(zo_status(int(e.code())), e.what());
    } catch (const std::exception& e) {
        return fail(ZO_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(ZO_ERR_INTERNAL, "unknown error");
    }
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

zo_status require(bool cond, const char* what) {
    if (cond) return ZO_OK;
    return fail(ZO_ERR_INVALID_ARGUMENT, std::string("null argument: ") + what);
}

} // namespace

extern "C" {

const char* zo_version(void) { return "zeroone 1.0.0"; }

const char* zo_last_error(void) { return g_last_error.c_str(); }

void zo_string_free(char* s) { delete[] s; }

/* ---- structures ---- */

zo_status zo_structure_parse(const char* text, zo_structure** out) {
    if (require(text && out, "text/out")) return ZO_ERR_INVALID_ARGUMENT;
    try {
        *out = new zo_structure{parse_structure(text)};
        return ZO_OK;
    } catch (...) {
        return from_exception();
    }
}

zo_status zo_structure_parse_file(const char* path, zo_structure** out) {
    if (require(path && out, "path/out")) return ZO_ERR_INVALID_ARGUMENT;
    try {
        *out = new zo_structure{parse_structure(read_file(path))};
        return ZO_OK;
    } catch (...) {
        return from_exception();
    }
}

zo_status zo_structure_format(const zo_structure* s, char** out) {
    if (require(s && out, "s/out")) return ZO_ERR_INVALID_ARGUMENT;
    try {
        *out = dup_string(format_structure(s->value));
        return ZO_OK;
    } catch (...) {
        return from_exception();
    }
}

zo_status zo_structure_size(const zo_structure* s, int* out) {
    if (require(s && out, "s/out")) return ZO_ERR_INVALID_ARGUMENT;
    *out = s->value.size();
    return ZO_OK;
}

void zo_structure_free(zo_structure* s) { delete s; }

/* ---- contexts ---- */

zo_status zo_context_parse(const char* text, zo_context** out) {
    if (require(text && out, "text/out")) return ZO_ERR_INVALID_ARGUMENT;
    try {
        *out = new zo_context{parse_context(text)};
        return ZO_OK;
    } catch (...) {
        return from_exception();
    }
}

zo_status zo_context_parse_file(const char* path, zo_context** out) {
    if (require(path && out, "path/out")) return ZO_ERR_INVALID_ARGUMENT;
    try {
        *out = new zo_context{parse_context(read_file(path))};
        return ZO_OK;
    } catch (...) {
        return from_exception();
    }
}

zo_status zo_context_format(const zo_context* c, char** out) {
    if (require(c && out, "c/out")) return ZO_ERR_INVALID_ARGUMENT;
    try {
        *out = dup_string(format_context(c->value));
        return ZO_OK;
    } catch (...) {
        return from_exception();
    }
}

zo_status zo_context_builtin(const char* name, zo_context** out) {
    if (require(name && out, "name/out")) return ZO_ERR_INVALID_ARGUMENT;
    try {
        *out = new zo_context{builtin_context(name)};
        return ZO_OK;
    } catch (...) {
        return from_exception();
    }
}

void zo_context_free(zo_context* c) { delete c; }

zo_status zo_pair_weight(const zo_context* c, const zo_structure* big, const int* small,
                         int small_len, double* out) {
    if (require(c && big && out && (small || small_len == 0), "pair"))
        return ZO_ERR_INVALID_ARGUMENT;
    try {
        ElemSet s(small, small + small_len);
        *out = weight(SubPair(big->value, make_set(std::move(s))), c->value.base);
        return ZO_OK;
    } catch (...) {
        return from_exception();
    }
}

zo_status zo_pair_classify(const zo_context* c, const zo_structure* big, const int* small,
                           int small_len, char** out) {
    if (require(c && big && out && (small || small_len == 0), "pair"))
        return ZO_ERR_INVALID_ARGUMENT;
    try {
        ElemSet s(small, small + small_len);
        SubPair pair(big->value, make_set(std::move(s)));
        if (big->value.vocab() == c->value.base.vocab()) {
            *out = dup_string(pair_kind_name(classify(pair, c->value.base)));
        } else {
            *out = dup_string(
                plus_kind_name(classify_plus(pair, c->value.require_expansion())));
        }
        return ZO_OK;
    } catch (...) {
        return from_exception();
    }
}

zo_status zo_screen(const zo_context* c, int size_bound, char** report_json) {
    if (require(c && report_json, "c/report")) return ZO_ERR_INVALID_ARGUMENT;
    try {
        ExpansionContext xc = c->value.expansion ? *c->value.expansion
                                                 : ExpansionContext(c->value.base, {});
        auto violations = irrationality_screen(xc, size_bound);
        nlohmann::json arr = nlohmann::json::array();
        for (const ScreenViolation& v : violations)
            arr.push_back({{"kind", v.kind},
                           {"pair", v.pair_key},
                           {"size", v.size},
                           {"value", v.value}});
        *report_json = dup_string(arr.dump());
        return ZO_OK;
    } catch (...) {
        return from_exception();
    }
}

/* ---- systems ---- */

zo_status zo_system_parse(const char* text, zo_system** out) {
    if (require(text && out, "text/out")) return ZO_ERR_INVALID_ARGUMENT;
    try {
        *out = new zo_system{parse_system(text)};
        return ZO_OK;
    } catch (...) {
        return from_exception();
    }
}

zo_status zo_system_parse_file(const char* path, zo_system** out) {
    if (require(path && out, "path/out")) return ZO_ERR_INVALID_ARGUMENT;
    try {
        *out = new zo_system{parse_system(read_file(path))};
        return ZO_OK;
    } catch (...) {
        return from_exception();
    }
}

zo_status zo_system_format(const zo_system* s, char** out) {
    if (require(s && out, "s/out")) return ZO_ERR_INVALID_ARGUMENT;
    try {
        *out = dup_string(format_system(s->value));
        return ZO_OK;
    } catch (...) {
        return from_exception();
    }
}

zo_status zo_system_builtin(const char* name, zo_system** out) {
    if (require(name && out, "name/out")) return ZO_ERR_INVALID_ARGUMENT;
    try {
        *out = new zo_system{builtin_system(name)};
        return ZO_OK;
    } catch (...) {
        return from_exception();
    }
}

zo_status zo_system_separativity(const zo_system* s, char** out) {
    if (require(s && out, "s/out")) return ZO_ERR_INVALID_ARGUMENT;
    try {
        *out = dup_string(separativity_name(separativity_level(s->value)));
        return ZO_OK;
    } catch (...) {
        return from_exception();
    }
}

void zo_system_free(zo_system* s) { delete s; }

/* ---- experiments ---- */

zo_status zo_spec_parse(const char* text, zo_spec** out) {
    if (require(text && out, "text/out")) return ZO_ERR_INVALID_ARGUMENT;
    try {
        parse_rawspec(text); // syntax check up front
        *out = new zo_spec{text, {}};
        return ZO_OK;
    } catch (...) {
        return from_exception();
    }
}

zo_status zo_spec_parse_file(const char* path, zo_spec** out) {
    if (require(path && out, "path/out")) return ZO_ERR_INVALID_ARGUMENT;
    try {
        std::string text = read_file(path);
        parse_rawspec(text);
        *out = new zo_spec{std::move(text), {}};
        return ZO_OK;
    } catch (...) {
        return from_exception();
    }
}

zo_status zo_spec_override_seed(zo_spec* s, uint64_t seed) {
    if (require(s, "s")) return ZO_ERR_INVALID_ARGUMENT;
    s->overrides.seed = seed;
    return ZO_OK;
}

zo_status zo_spec_override_trials(zo_spec* s, int trials) {
    if (require(s, "s")) return ZO_ERR_INVALID_ARGUMENT;
    s->overrides.trials = trials;
    return ZO_OK;
}

zo_status zo_spec_override_n(zo_spec* s, int n) {
    if (require(s, "s")) return ZO_ERR_INVALID_ARGUMENT;
    s->overrides.n = n;
    return ZO_OK;
}

void zo_spec_free(zo_spec* s) { delete s; }

zo_status zo_run(const zo_spec* s, zo_result** out) {
    if (require(s && out, "s/out")) return ZO_ERR_INVALID_ARGUMENT;
    try {
        *out = new zo_result{run_spec_text(s->text, s->overrides)};
        return ZO_OK;
    } catch (...) {
        return from_exception();
    }
}

void zo_result_free(zo_result* r) { delete r; }

int zo_result_failed_checks(const zo_result* r) { return r ? r->value.failed() : -1; }

zo_status zo_result_text(const zo_result* r, const char* what, const char** out) {
    if (require(r && what && out, "r/what/out")) return ZO_ERR_INVALID_ARGUMENT;
    std::string w = what;
    if (w == "jsonl") *out = r->value.jsonl.c_str();
    else if (w == "csv") *out = r->value.csv.c_str();
    else if (w == "report") *out = r->value.report.c_str();
    else return fail(ZO_ERR_INVALID_ARGUMENT, "what must be jsonl|csv|report");
    return ZO_OK;
}

zo_status zo_result_write(const zo_result* r, const char* dir) {
    if (require(r && dir, "r/dir")) return ZO_ERR_INVALID_ARGUMENT;
    try {
        write_outputs(r->value, dir);
        return ZO_OK;
    } catch (...) {
        return from_exception();
    }
}

/* ---- misc ---- */

zo_status zo_catalog(const char* kind, char** out) {
    if (require(kind && out, "kind/out")) return ZO_ERR_INVALID_ARGUMENT;
    try {
        *out = dup_string(catalog_text(kind));
        return ZO_OK;
    } catch (...) {
        return from_exception();
    }
}

zo_status zo_validate_file(const char* kind, const char* path, char** normalized) {
    if (require(kind && path && normalized, "kind/path/out"))
        return ZO_ERR_INVALID_ARGUMENT;
    try {
        std::string text = read_file(path);
        std::string k = kind;
        std::string norm;
        if (k == "structure") {
            norm = format_structure(parse_structure(text));
            if (!(parse_structure(norm) == parse_structure(text)))
                return fail(ZO_ERR_INTERNAL, "round-trip mismatch");
        } else if (k == "context") {
            ParsedContext a = parse_context(text);
            norm = format_context(a);
            ParsedContext b = parse_context(norm);
            if (!(a.base == b.base))
                return fail(ZO_ERR_INTERNAL, "round-trip mismatch");
        } else if (k == "system") {
            System a = parse_system(text);
            norm = format_system(a);
            System b = parse_system(norm);
            if (!(a.funcs == b.funcs && a.subsets == b.subsets && a.probs == b.probs))
                return fail(ZO_ERR_INTERNAL, "round-trip mismatch");
        } else if (k == "spec") {
            parse_rawspec(text);
            norm = text;
        } else {
            return fail(ZO_ERR_INVALID_ARGUMENT,
                        "kind must be structure|context|system|spec");
        }
        *normalized = dup_string(norm);
        return ZO_OK;
    } catch (...) {
        return from_exception();
    }
}

} // extern "C"
