#include "wec/logic.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <map>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace wec {

namespace {

struct SymbolTable {
    std::mutex mu;
    std::deque<std::string> names{""};
    std::unordered_map<std::string_view, std::uint32_t> ids{{names.front(), 0}};

    static SymbolTable& instance() {
        static SymbolTable table;
        return table;
    }

    std::uint32_t intern(std::string_view name) {
        std::lock_guard lock(mu);
        if (auto it = ids.find(name); it != ids.end()) return it->second;
        names.emplace_back(name);
        auto id = static_cast<std::uint32_t>(names.size() - 1);
        ids.emplace(names.back(), id);
        return id;
    }

    std::string_view lookup(std::uint32_t id) {
        std::lock_guard lock(mu);
        return names[id];
    }
};

std::strong_ordering compareTermVectors(const std::vector<Term>& a, const std::vector<Term>& b) {
    if (auto c = a.size() <=> b.size(); c != 0) return c;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (auto c = a[i] <=> b[i]; c != 0) return c;
    return std::strong_ordering::equal;
}

}  // namespace

Symbol::Symbol(std::string_view name) : id_(SymbolTable::instance().intern(name)) {}

std::string_view Symbol::name() const { return SymbolTable::instance().lookup(id_); }

std::strong_ordering operator<=>(Symbol a, Symbol b) {
    if (a.id_ == b.id_) return std::strong_ordering::equal;
    auto c = a.name().compare(b.name());
    return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
}

// ---------------------------------------------------------------------------
// Term

Term Term::constant(std::string_view name) { return constant(Symbol(name)); }

Term Term::constant(Symbol s) {
    Term t;
    t.kind_ = Kind::Constant;
    t.symbol_ = s;
    return t;
}

Term Term::integer(std::int64_t value) { return constant(std::to_string(value)); }

Term Term::variable(std::string_view name) { return variable(Symbol(name)); }

Term Term::variable(Symbol s) {
    Term t;
    t.kind_ = Kind::Variable;
    t.symbol_ = s;
    return t;
}

Term Term::compound(std::string_view functor, std::vector<Term> args) {
    return compound(Symbol(functor), std::move(args));
}

Term Term::compound(Symbol functor, std::vector<Term> args) {
    if (args.empty()) throw std::invalid_argument("compound term needs at least one argument");
    Term t;
    t.kind_ = Kind::Compound;
    t.symbol_ = functor;
    t.args_ = std::move(args);
    return t;
}

bool Term::ground() const {
    switch (kind_) {
        case Kind::Constant: return true;
        case Kind::Variable: return false;
        case Kind::Compound:
            return std::all_of(args_.begin(), args_.end(), [](const Term& a) { return a.ground(); });
    }
    return false;
}

std::optional<std::int64_t> Term::asInteger() const {
    if (kind_ != Kind::Constant) return std::nullopt;
    auto n = symbol_.name();
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(n.data(), n.data() + n.size(), v);
    if (ec != std::errc() || p != n.data() + n.size()) return std::nullopt;
    return v;
}

std::string Term::str() const {
    std::string out(symbol_.name());
    if (kind_ == Kind::Compound) {
        out += '(';
        for (std::size_t i = 0; i < args_.size(); ++i) {
            if (i) out += ',';
            out += args_[i].str();
        }
        out += ')';
    }
    return out;
}

bool operator==(const Term& a, const Term& b) {
    return a.kind_ == b.kind_ && a.symbol_ == b.symbol_ && a.args_ == b.args_;
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
    if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
    // Numeric constants order numerically so time points sort naturally.
    if (a.kind_ == Term::Kind::Constant && a.symbol_ != b.symbol_) {
        auto x = a.asInteger(), y = b.asInteger();
        if (x && y) return *x <=> *y;
        if (x) return std::strong_ordering::less;
        if (y) return std::strong_ordering::greater;
    }
    if (auto c = a.symbol_ <=> b.symbol_; c != 0) return c;
    return compareTermVectors(a.args_, b.args_);
}

// ---------------------------------------------------------------------------
// Atom / Literal

bool Atom::ground() const {
    return std::all_of(args.begin(), args.end(), [](const Term& t) { return t.ground(); });
}

std::string Atom::str() const {
    std::string out(predicate.name());
    if (!args.empty()) {
        out += '(';
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (i) out += ',';
            out += args[i].str();
        }
        out += ')';
    }
    return out;
}

std::strong_ordering operator<=>(const Atom& a, const Atom& b) {
    if (auto c = a.predicate <=> b.predicate; c != 0) return c;
    return compareTermVectors(a.args, b.args);
}

std::string Literal::str() const { return negated ? "not " + atom.str() : atom.str(); }

std::strong_ordering operator<=>(const Literal& a, const Literal& b) {
    if (auto c = a.negated <=> b.negated; c != 0) return c;
    return a.atom <=> b.atom;
}

// ---------------------------------------------------------------------------
// Rule

Symbol happensAtSym() { static const Symbol s("happensAt"); return s; }
Symbol holdsAtSym() { static const Symbol s("holdsAt"); return s; }
Symbol initiatedAtSym() { static const Symbol s("initiatedAt"); return s; }
Symbol terminatedAtSym() { static const Symbol s("terminatedAt"); return s; }

HeadKind Rule::kind() const {
    return head.predicate == terminatedAtSym() ? HeadKind::Termination : HeadKind::Initiation;
}

bool Rule::ground() const {
    return head.ground() &&
           std::all_of(body.begin(), body.end(), [](const Literal& l) { return l.atom.ground(); });
}

std::string Rule::clauseStr() const {
    std::string out = head.str();
    if (!body.empty()) {
        out += " :- ";
        for (std::size_t i = 0; i < body.size(); ++i) {
            if (i) out += ", ";
            out += body[i].str();
        }
    }
    return out;
}

void collectVariables(const Term& t, std::vector<Symbol>& out) {
    if (t.isVariable()) {
        if (std::find(out.begin(), out.end(), t.symbol()) == out.end()) out.push_back(t.symbol());
    } else {
        for (const auto& a : t.args()) collectVariables(a, out);
    }
}

namespace {

void collectVariables(const Atom& a, std::vector<Symbol>& out) {
    for (const auto& t : a.args) collectVariables(t, out);
}

}  // namespace

std::vector<Symbol> variablesOf(const Rule& r) {
    std::vector<Symbol> vars;
    collectVariables(r.head, vars);
    for (const auto& l : r.body) collectVariables(l.atom, vars);
    return vars;
}

std::size_t literalCount(const Rule& r) { return 1 + r.body.size(); }

void validateRule(const Rule& r) {
    auto fail = [&](const std::string& why) {
        throw std::invalid_argument("invalid rule '" + r.clauseStr() + "': " + why);
    };
    if (!std::isfinite(r.weight)) fail("weight is not finite");
    if (r.head.predicate != initiatedAtSym() && r.head.predicate != terminatedAtSym())
        fail("head predicate must be initiatedAt or terminatedAt");
    if (r.head.arity() != 2) fail("head must have arity 2");
    const Term& time = r.time();
    if (!time.isVariable() && !time.asInteger()) fail("head time argument must be a variable or integer");

    // Head fluent variables range over the fluent domain, so they count as bound.
    std::vector<Symbol> bound;
    if (time.isVariable()) bound.push_back(time.symbol());
    collectVariables(r.fluent(), bound);
    for (const auto& l : r.body) {
        if (l.atom.args.empty()) fail("body literal '" + l.str() + "' has no time argument");
        if (!(l.atom.args.back() == time)) fail("body literal '" + l.str() + "' must use the head time argument");
        if (l.atom.predicate == holdsAtSym() && l.atom.arity() != 2) fail("holdsAt must have arity 2");
        if (!l.negated) collectVariables(l.atom, bound);
    }
    // Negated literals may only use variables bound by the head fluent or a positive literal.
    auto checkBound = [&](const Atom& a, const std::string& where) {
        std::vector<Symbol> vars;
        collectVariables(a, vars);
        for (auto v : vars)
            if (std::find(bound.begin(), bound.end(), v) == bound.end())
                fail("variable " + std::string(v.name()) + " in " + where + " is not bound");
    };
    for (const auto& l : r.body)
        if (l.negated) checkBound(l.atom, "'" + l.str() + "'");
}

// ---------------------------------------------------------------------------
// Substitution

const Term* Substitution::lookup(Symbol var) const {
    auto it = std::lower_bound(bindings_.begin(), bindings_.end(), var,
                               [](const auto& b, Symbol v) { return b.first.id() < v.id(); });
    if (it != bindings_.end() && it->first == var) return &it->second;
    return nullptr;
}

bool Substitution::bind(Symbol var, const Term& value) {
    auto it = std::lower_bound(bindings_.begin(), bindings_.end(), var,
                               [](const auto& b, Symbol v) { return b.first.id() < v.id(); });
    if (it != bindings_.end() && it->first == var) return it->second == value;
    bindings_.insert(it, {var, value});
    return true;
}

Substitution Substitution::compose(const Substitution& other) const {
    Substitution out;
    for (const auto& [v, t] : bindings_) out.bind(v, applySubstitution(t, other));
    for (const auto& [v, t] : other.bindings_)
        if (!lookup(v)) out.bind(v, t);
    return out;
}

std::string Substitution::str() const {
    std::string out = "{";
    for (std::size_t i = 0; i < bindings_.size(); ++i) {
        if (i) out += ", ";
        out += std::string(bindings_[i].first.name()) + "/" + bindings_[i].second.str();
    }
    return out + "}";
}

std::strong_ordering operator<=>(const Substitution& a, const Substitution& b) {
    // Compare by variable spelling so the order does not depend on interning order.
    auto sorted = [](const Substitution& s) {
        auto v = s.bindings_;
        std::sort(v.begin(), v.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
        return v;
    };
    auto x = sorted(a), y = sorted(b);
    if (auto c = x.size() <=> y.size(); c != 0) return c;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (auto c = x[i].first <=> y[i].first; c != 0) return c;
        if (auto c = x[i].second <=> y[i].second; c != 0) return c;
    }
    return std::strong_ordering::equal;
}

Term applySubstitution(const Term& t, const Substitution& theta) {
    switch (t.kind()) {
        case Term::Kind::Constant: return t;
        case Term::Kind::Variable: {
            const Term* v = theta.lookup(t.symbol());
            return v ? *v : t;
        }
        case Term::Kind::Compound: {
            std::vector<Term> args;
            args.reserve(t.args().size());
            for (const auto& a : t.args()) args.push_back(applySubstitution(a, theta));
            return Term::compound(t.symbol(), std::move(args));
        }
    }
    return t;
}

Atom applySubstitution(const Atom& a, const Substitution& theta) {
    Atom out;
    out.predicate = a.predicate;
    out.args.reserve(a.args.size());
    for (const auto& t : a.args) out.args.push_back(applySubstitution(t, theta));
    return out;
}

Literal applySubstitution(const Literal& l, const Substitution& theta) {
    return {applySubstitution(l.atom, theta), l.negated};
}

Rule applySubstitution(const Rule& r, const Substitution& theta) {
    Rule out = r;
    out.head = applySubstitution(r.head, theta);
    for (auto& l : out.body) l = applySubstitution(l, theta);
    return out;
}

bool matchTerm(const Term& pattern, const Term& target, Substitution& theta) {
    switch (pattern.kind()) {
        case Term::Kind::Variable: return theta.bind(pattern.symbol(), target);
        case Term::Kind::Constant: return pattern == target;
        case Term::Kind::Compound: {
            if (!target.isCompound() || target.symbol() != pattern.symbol() ||
                target.args().size() != pattern.args().size())
                return false;
            for (std::size_t i = 0; i < pattern.args().size(); ++i)
                if (!matchTerm(pattern.args()[i], target.args()[i], theta)) return false;
            return true;
        }
    }
    return false;
}

bool matchAtom(const Atom& pattern, const Atom& target, Substitution& theta) {
    if (pattern.predicate != target.predicate || pattern.arity() != target.arity()) return false;
    for (std::size_t i = 0; i < pattern.args.size(); ++i)
        if (!matchTerm(pattern.args[i], target.args[i], theta)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// θ-subsumption

namespace {

bool subsumeBody(const std::vector<const Literal*>& order, std::size_t k, const std::vector<Literal>& target,
                 const Substitution& theta) {
    if (k == order.size()) return true;
    const Literal& lit = *order[k];
    for (const auto& cand : target) {
        if (cand.negated != lit.negated) continue;
        Substitution ext = theta;
        if (matchAtom(lit.atom, cand.atom, ext) && subsumeBody(order, k + 1, target, ext)) return true;
    }
    return false;
}

}  // namespace

bool thetaSubsumes(const Rule& general, const Rule& specific) {
    Substitution theta;
    if (!matchAtom(general.head, specific.head, theta)) return false;
    // Rarest predicate in the specific clause first: fewest candidates to try.
    std::map<std::pair<Symbol, bool>, int> freq;
    for (const auto& l : specific.body) ++freq[{l.atom.predicate, l.negated}];
    std::vector<const Literal*> order;
    for (const auto& l : general.body) {
        if (!freq.count({l.atom.predicate, l.negated})) return false;
        order.push_back(&l);
    }
    std::stable_sort(order.begin(), order.end(), [&](const Literal* a, const Literal* b) {
        return freq[{a->atom.predicate, a->negated}] < freq[{b->atom.predicate, b->negated}];
    });
    return subsumeBody(order, 0, specific.body, theta);
}

bool thetaEquivalent(const Rule& a, const Rule& b) { return thetaSubsumes(a, b) && thetaSubsumes(b, a); }

}  // namespace wec
