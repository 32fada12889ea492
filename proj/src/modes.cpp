#include "wec/modes.hpp"

#include <iostream>
#include <map>
#include <stdexcept>

namespace wec {

ModeTerm ModeTerm::constant(std::string_view name) {
    ModeTerm m;
    m.kind = Kind::Constant;
    m.symbol = Symbol(name);
    return m;
}

ModeTerm ModeTerm::placemarker(Placemarker role, std::string_view type) {
    ModeTerm m;
    m.kind = Kind::Placemarker;
    m.role = role;
    m.symbol = Symbol(type);
    return m;
}

ModeTerm ModeTerm::compound(std::string_view functor, std::vector<ModeTerm> args) {
    ModeTerm m;
    m.kind = Kind::Compound;
    m.symbol = Symbol(functor);
    m.args = std::move(args);
    return m;
}

std::string ModeTerm::str() const {
    switch (kind) {
        case Kind::Constant: return std::string(symbol.name());
        case Kind::Placemarker: {
            char c = role == Placemarker::Input ? '+' : role == Placemarker::Output ? '-' : '#';
            return c + std::string(symbol.name());
        }
        case Kind::Compound: {
            std::string out = std::string(symbol.name()) + "(";
            for (std::size_t i = 0; i < args.size(); ++i) {
                if (i) out += ",";
                out += args[i].str();
            }
            return out + ")";
        }
    }
    return {};
}

std::string ModeDeclaration::str() const {
    std::string out = kind == Kind::Head ? "modeh(" : "modeb(";
    if (negated) out += "not ";
    out += std::string(predicate.name()) + "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) out += ",";
        out += args[i].str();
    }
    return out + "))";
}

bool matchModeTerm(const ModeTerm& tmpl, const Term& t, std::vector<PlacemarkerBinding>& out) {
    switch (tmpl.kind) {
        case ModeTerm::Kind::Constant: return t.isConstant() && t.symbol() == tmpl.symbol;
        case ModeTerm::Kind::Placemarker:
            if (t.isCompound()) return false;
            out.push_back({tmpl.role, tmpl.symbol, t});
            return true;
        case ModeTerm::Kind::Compound:
            if (!t.isCompound() || t.symbol() != tmpl.symbol || t.args().size() != tmpl.args.size()) return false;
            for (std::size_t i = 0; i < tmpl.args.size(); ++i)
                if (!matchModeTerm(tmpl.args[i], t.args()[i], out)) return false;
            return true;
    }
    return false;
}

std::optional<std::vector<PlacemarkerBinding>> matchMode(const ModeDeclaration& mode, const Atom& atom) {
    if (atom.predicate != mode.predicate || atom.arity() != mode.args.size()) return std::nullopt;
    std::vector<PlacemarkerBinding> out;
    for (std::size_t i = 0; i < atom.args.size(); ++i)
        if (!matchModeTerm(mode.args[i], atom.args[i], out)) return std::nullopt;
    return out;
}

Term instantiateModeTerm(const ModeTerm& tmpl, const std::vector<Term>& leaves, std::size_t& next) {
    switch (tmpl.kind) {
        case ModeTerm::Kind::Constant: return Term::constant(tmpl.symbol);
        case ModeTerm::Kind::Placemarker: return leaves.at(next++);
        case ModeTerm::Kind::Compound: {
            std::vector<Term> args;
            for (const auto& a : tmpl.args) args.push_back(instantiateModeTerm(a, leaves, next));
            return Term::compound(tmpl.symbol, std::move(args));
        }
    }
    return {};
}

std::string generatedVariableName(std::size_t i) {
    static constexpr const char* base[] = {"X", "Y", "Z", "W", "V", "U"};
    if (i < 6) return base[i];
    return "X" + std::to_string(i);
}

namespace {

class Variabilizer {
public:
    explicit Variabilizer(const Term& time) : time_(time) {}

    std::optional<Atom> lift(const Atom& a, const std::vector<ModeDeclaration>& modes, ModeDeclaration::Kind kind,
                             bool negated) {
        for (const auto& m : modes) {
            if (m.kind != kind || m.negated != negated) continue;
            auto bindings = matchMode(m, a);
            if (!bindings) continue;
            std::vector<Term> leaves;
            for (std::size_t i = 0; i < bindings->size(); ++i) {
                const auto& b = (*bindings)[i];
                bool isTime = i + 1 == bindings->size() && b.value == time_;
                if (isTime)
                    leaves.push_back(Term::variable("T"));
                else if (b.role == Placemarker::Constant)
                    leaves.push_back(b.value);
                else
                    leaves.push_back(variableFor(b.value));
            }
            Atom out;
            out.predicate = a.predicate;
            std::size_t next = 0;
            for (const auto& t : m.args) out.args.push_back(instantiateModeTerm(t, leaves, next));
            return out;
        }
        return std::nullopt;
    }

private:
    Term variableFor(const Term& constant) {
        if (constant.isVariable()) return constant;
        auto it = vars_.find(constant);
        if (it != vars_.end()) return it->second;
        Term v = Term::variable(generatedVariableName(vars_.size()));
        vars_.emplace(constant, v);
        return v;
    }

    Term time_;
    std::map<Term, Term> vars_;
};

}  // namespace

Rule variabilize(const Rule& groundRule, const std::vector<ModeDeclaration>& modes) {
    Variabilizer v(groundRule.time());
    Rule out = groundRule;
    auto head = v.lift(groundRule.head, modes, ModeDeclaration::Kind::Head, false);
    if (!head) throw std::invalid_argument("head '" + groundRule.head.str() + "' matches no head mode declaration");
    out.head = *head;
    out.body.clear();
    for (const auto& l : groundRule.body) {
        auto lifted = v.lift(l.atom, modes, ModeDeclaration::Kind::Body, l.negated);
        if (!lifted) {
            std::cerr << "warning: literal '" << l.str() << "' matches no body mode; dropped\n";
            continue;
        }
        out.body.push_back({*lifted, l.negated});
    }
    return out;
}

}  // namespace wec
