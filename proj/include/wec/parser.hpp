#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "wec/logic.hpp"
#include "wec/modes.hpp"

namespace wec {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, int line, int column);
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

/// Parses weighted rules, one per '.'-terminated statement:
///
///     1.283 initiatedAt(move(X,Y),T) :- happensAt(walk(X),T), not close(X,Y,30,T).
///
/// ":-", "<-" and "←" are accepted as the neck; '%' starts a line comment.
/// Rules without a weight prefix get defaultWeight. Ids are assigned from
/// firstId upwards in statement order. Every rule is validated.
std::vector<Rule> parseRules(std::string_view text, double defaultWeight = 0.0, std::int64_t firstId = 1);

/// Parses "modeh(...)" / "modeb(...)" statements; body modes may be negated
/// ("modeb(not close(+person,+person,#dist,+time))").
std::vector<ModeDeclaration> parseModes(std::string_view text);

/// Parses '.'-terminated ground facts. Throws ParseError on non-ground facts.
std::vector<Atom> parseFacts(std::string_view text);

Term parseTerm(std::string_view text);
Atom parseAtom(std::string_view text);

/// Shortest decimal text that reads back to exactly the same double.
std::string formatWeight(double w);

/// "w head :- body." Inverse of parseRules for a single rule.
std::string formatRule(const Rule& r);
std::string formatRules(const std::vector<Rule>& rules);
std::string formatModes(const std::vector<ModeDeclaration>& modes);
std::string formatFact(const Atom& a);

}  // namespace wec
