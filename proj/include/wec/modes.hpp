#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wec/logic.hpp"

namespace wec {

enum class Placemarker : std::uint8_t { Input, Output, Constant };

/// A leaf or compound position inside a mode template: a plain constant, a
/// typed placemarker (+type, -type, #type) or a compound over further templates.
struct ModeTerm {
    enum class Kind : std::uint8_t { Constant, Placemarker, Compound };

    Kind kind = Kind::Constant;
    Symbol symbol;  // constant name, placemarker type, or functor
    Placemarker role = Placemarker::Input;
    std::vector<ModeTerm> args;

    static ModeTerm constant(std::string_view name);
    static ModeTerm placemarker(Placemarker role, std::string_view type);
    static ModeTerm compound(std::string_view functor, std::vector<ModeTerm> args);

    std::string str() const;
    friend bool operator==(const ModeTerm&, const ModeTerm&) = default;
};

struct ModeDeclaration {
    enum class Kind : std::uint8_t { Head, Body };

    Kind kind = Kind::Body;
    bool negated = false;
    Symbol predicate;
    std::vector<ModeTerm> args;

    /// "modeh(...)" / "modeb(...)" surface form.
    std::string str() const;
    friend bool operator==(const ModeDeclaration&, const ModeDeclaration&) = default;
};

/// A placemarker position resolved against a ground atom.
struct PlacemarkerBinding {
    Placemarker role;
    Symbol type;
    Term value;
};

/// Matches a ground term against a template. On success appends the value at
/// each placemarker leaf, in left-to-right order.
bool matchModeTerm(const ModeTerm& tmpl, const Term& t, std::vector<PlacemarkerBinding>& out);
std::optional<std::vector<PlacemarkerBinding>> matchMode(const ModeDeclaration& mode, const Atom& atom);

/// Rebuilds a term from a template, substituting the given leaf values in order.
Term instantiateModeTerm(const ModeTerm& tmpl, const std::vector<Term>& leaves, std::size_t& next);

/// Replaces constants at +/- placemarker positions with variables (one fresh
/// variable per distinct constant, shared by all literals of this rule) and
/// the time constant with T; #-positions keep their constants. Body literals
/// that match no body mode are dropped with a warning on stderr.
/// Throws std::invalid_argument if the head matches no head mode.
Rule variabilize(const Rule& groundRule, const std::vector<ModeDeclaration>& modes);

/// Name of the i-th generated variable: X, Y, Z, W, V, U, X6, X7, ...
std::string generatedVariableName(std::size_t i);

}  // namespace wec
