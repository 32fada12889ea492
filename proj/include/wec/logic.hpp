#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wec {

/// Interned symbol. Equal symbols compare equal as integers; ordering between
/// symbols follows their spelling so printed output is stable across runs.
class Symbol {
public:
    Symbol() = default;
    explicit Symbol(std::string_view name);

    std::string_view name() const;
    std::uint32_t id() const { return id_; }

    friend bool operator==(Symbol a, Symbol b) { return a.id_ == b.id_; }
    friend std::strong_ordering operator<=>(Symbol a, Symbol b);

private:
    std::uint32_t id_ = 0;
};

class Term {
public:
    enum class Kind : std::uint8_t { Constant, Variable, Compound };

    static Term constant(std::string_view name);
    static Term constant(Symbol s);
    static Term integer(std::int64_t value);
    static Term variable(std::string_view name);
    static Term variable(Symbol s);
    static Term compound(std::string_view functor, std::vector<Term> args);
    static Term compound(Symbol functor, std::vector<Term> args);

    Kind kind() const { return kind_; }
    bool isVariable() const { return kind_ == Kind::Variable; }
    bool isConstant() const { return kind_ == Kind::Constant; }
    bool isCompound() const { return kind_ == Kind::Compound; }
    Symbol symbol() const { return symbol_; }
    const std::vector<Term>& args() const { return args_; }

    bool ground() const;
    /// Integer value of a numeric constant, if it is one.
    std::optional<std::int64_t> asInteger() const;

    std::string str() const;

    friend bool operator==(const Term& a, const Term& b);
    friend std::strong_ordering operator<=>(const Term& a, const Term& b);

private:
    Kind kind_ = Kind::Constant;
    Symbol symbol_;
    std::vector<Term> args_;
};

struct Atom {
    Symbol predicate;
    std::vector<Term> args;

    Atom() = default;
    Atom(std::string_view pred, std::vector<Term> a) : predicate(pred), args(std::move(a)) {}
    Atom(Symbol pred, std::vector<Term> a) : predicate(pred), args(std::move(a)) {}

    std::size_t arity() const { return args.size(); }
    bool ground() const;
    std::string str() const;

    friend bool operator==(const Atom&, const Atom&) = default;
    friend std::strong_ordering operator<=>(const Atom& a, const Atom& b);
};

struct Literal {
    Atom atom;
    bool negated = false;

    std::string str() const;

    friend bool operator==(const Literal&, const Literal&) = default;
    friend std::strong_ordering operator<=>(const Literal& a, const Literal& b);
};

/// Learning statistics carried by a rule.
struct RuleStats {
    std::int64_t trueGroundings = 0;   // P: head-consistent groundings
    std::int64_t falseGroundings = 0;  // N: head-inconsistent groundings
    double gradSqSum = 0.0;            // running sum of squared subgradients
    std::int64_t observations = 0;
};

enum class HeadKind : std::uint8_t { Initiation, Termination };

struct Rule {
    std::int64_t id = 0;
    Atom head;
    std::vector<Literal> body;
    double weight = 0.0;
    RuleStats stats;
    std::shared_ptr<const Rule> bottomRule;
    std::optional<std::int64_t> parent;

    HeadKind kind() const;
    /// Fluent term of the head (first head argument).
    const Term& fluent() const { return head.args.front(); }
    /// Time term of the head (last head argument).
    const Term& time() const { return head.args.back(); }
    bool ground() const;

    /// Clause text without weight, e.g. "initiatedAt(a,T) :- happensAt(b,T)".
    std::string clauseStr() const;
};

/// Throws std::invalid_argument if the rule violates the rule invariants or the
/// restricted language (head over initiatedAt/terminatedAt with a variable time
/// argument, body literals sharing that time variable as their last argument,
/// negated literals using only variables of the head fluent or of positive
/// literals, finite weight).
void validateRule(const Rule& r);

// Well-known predicate symbols.
Symbol happensAtSym();
Symbol holdsAtSym();
Symbol initiatedAtSym();
Symbol terminatedAtSym();

/// Variable-to-term bindings, sorted by variable.
class Substitution {
public:
    Substitution() = default;

    const Term* lookup(Symbol var) const;
    /// Adds a binding; returns false if var is already bound to a different term.
    bool bind(Symbol var, const Term& value);
    bool empty() const { return bindings_.empty(); }
    std::size_t size() const { return bindings_.size(); }
    const std::vector<std::pair<Symbol, Term>>& bindings() const { return bindings_; }

    /// Composition: applying the result equals applying *this then other.
    Substitution compose(const Substitution& other) const;

    std::string str() const;

    friend bool operator==(const Substitution&, const Substitution&) = default;
    friend std::strong_ordering operator<=>(const Substitution& a, const Substitution& b);

private:
    std::vector<std::pair<Symbol, Term>> bindings_;
};

Term applySubstitution(const Term& t, const Substitution& theta);
Atom applySubstitution(const Atom& a, const Substitution& theta);
Literal applySubstitution(const Literal& l, const Substitution& theta);
Rule applySubstitution(const Rule& r, const Substitution& theta);

/// One-way matching: extends theta so that pattern*theta == target. Variables
/// of target are treated as constants.
bool matchTerm(const Term& pattern, const Term& target, Substitution& theta);
bool matchAtom(const Atom& pattern, const Atom& target, Substitution& theta);

/// True iff some substitution maps head(general) to head(specific) and
/// body(general) into body(specific).
bool thetaSubsumes(const Rule& general, const Rule& specific);

/// Mutual θ-subsumption.
bool thetaEquivalent(const Rule& a, const Rule& b);

void collectVariables(const Term& t, std::vector<Symbol>& out);
std::vector<Symbol> variablesOf(const Rule& r);

/// Total literal count (head + body), the theory-size statistic.
std::size_t literalCount(const Rule& r);

}  // namespace wec
