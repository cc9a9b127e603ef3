#ifndef ZEROONE_CATALOG_HPP
#define ZEROONE_CATALOG_HPP

#include <string>
#include <vector>

#include "compsys.hpp"
#include "sampler.hpp"
#include "textio.hpp"

namespace zeroone {

// Built-in example contexts, pairs, quadruples and systems used by the CLI
// and the test suites. Pairs/quads are built over the vocabulary of the
// context they are asked for, so custom contexts can reuse them.

std::vector<std::pair<std::string, std::string>> catalog_contexts();
std::vector<std::pair<std::string, std::string>> catalog_pairs();
std::vector<std::pair<std::string, std::string>> catalog_systems();
std::vector<std::pair<std::string, std::string>> catalog_quads();

ParsedContext builtin_context(const std::string& name);
SubPair builtin_pair(const std::string& name, const ParsedContext& ctx);
System builtin_system(const std::string& name);
SemiGoodQuad builtin_quad(const std::string& name, const ParsedContext& ctx);

} // namespace zeroone

#endif
