#ifndef ZEROONE_TEXTIO_HPP
#define ZEROONE_TEXTIO_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "compsys.hpp"
#include "expansion.hpp"
#include "structures.hpp"

namespace zeroone {

// Structure text: `vocab R/2s S/1`, `n <count>`, one line per tuple
// (`R 0 1`). `/2s` marks a symmetric binary relation. `#` comments.
RelStructure parse_structure(const std::string& text);
std::string format_structure(const RelStructure& s);

// Context text: `vocab ...`, `alpha R x`, `coeff R x`, `ecap x`, plus
// optional expansion lines `newrel S/2 beta -0.5 coeff 0.8` and `widen x`.
struct ParsedContext {
    BaseContext base;
    std::optional<ExpansionContext> expansion;

    const ExpansionContext& require_expansion() const;
};

ParsedContext parse_context(const std::string& text);
std::string format_context(const ParsedContext& ctx);

// System text: `m`, `n`, one `f ...` line per injection (images of 0..m-1),
// one `class` line per e-class: member subsets separated by `;`, elements
// by `,`, then the probability.
System parse_system(const std::string& text);
std::string format_system(const System& sys);

// Raw experiment spec: top-level lines, then [section] blocks.
struct RawLine {
    int line_no = 0;
    std::vector<std::string> words;
};

struct RawSpec {
    std::vector<RawLine> top;
    std::vector<std::pair<std::string, std::vector<RawLine>>> sections;

    const std::vector<RawLine>* section(const std::string& name) const;
    std::string section_text(const std::string& name) const;
};

RawSpec parse_rawspec(const std::string& text);

std::vector<std::string> split_words(const std::string& line);
double to_double(const std::string& word, int line_no);
long to_long(const std::string& word, int line_no);

} // namespace zeroone

#endif
