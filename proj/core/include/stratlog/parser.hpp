#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "stratlog/datastore.hpp"
#include "stratlog/model.hpp"

namespace stratlog {

enum class FactFormat { Auto, Triples, Functional };

// One rule terminated by '.'. Conjunction may be written with a wedge,
// a comma, or the keyword `and`; keywords are case-insensitive. An optional
// `id:` prefix (followed by whitespace) names the rule. Unary atoms are
// canonicalized to the binary rdf:type form. Aggregate rules use
//   head :- AGGREGATE(body) ON ?v1 WITH op(?v2) AS ?v3 .
// Throws SyntaxError, SafetyError or AggregateError.
Rule parseRule(std::string_view text);

// One rule per line; blank lines and '#' comments are skipped.
std::vector<Rule> parseRuleFile(std::string_view text);

// Ground facts, one per line: either the triple form `<s> <p> <o> .` or the
// functional form `p(s, o).` / `C(s).`. Errors carry line numbers.
std::vector<Fact> parseFacts(std::string_view text, FactFormat fmt = FactFormat::Auto);

// Picks Triples for `.nt` paths and Functional for `.dl`; Auto otherwise.
FactFormat formatForPath(const std::string& path);

// Query pattern `p(s|?, o|?)` or `C(s|?)`.
Pattern parsePattern(std::string_view text);

// Single ground fact in either surface form.
Fact parseFact(std::string_view text);

}  // namespace stratlog
