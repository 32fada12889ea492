#include "wec/grounding.hpp"

#include <algorithm>

namespace wec {

bool GroundInstance::requirementsHold(const HoldsQuery& state) const {
    for (const auto& h : holds)
        if (state.holds(h.fluent, time) != h.positive) return false;
    return true;
}

std::string GroundInstance::str() const {
    std::string head = kind == HeadKind::Initiation ? "initiatedAt(" : "terminatedAt(";
    return "rule " + std::to_string(ruleId) + ": " + head + fluent.str() + "," + std::to_string(time) + ") " +
           theta.str();
}

namespace {

class RuleGrounder {
public:
    RuleGrounder(const Rule& r, const Interpretation& i, const std::set<Term>& domain)
        : rule_(r), interp_(i), domain_(domain) {
        for (const auto& l : r.body) {
            bool holds = l.atom.predicate == holdsAtSym();
            if (!l.negated && !holds) positives_.push_back(&l);
            else if (!l.negated) holdsPos_.push_back(&l);
            else if (!holds) negatives_.push_back(&l);
            else holdsNeg_.push_back(&l);
        }
    }

    void run(std::vector<GroundInstance>& out) {
        const Term& time = rule_.time();
        if (auto fixed = time.asInteger()) {
            if (*fixed >= interp_.start() && *fixed <= interp_.end()) at(*fixed, Substitution{}, out);
            return;
        }
        for (Time t = interp_.start(); t <= interp_.end(); ++t) {
            Substitution theta;
            theta.bind(time.symbol(), Term::integer(t));
            at(t, theta, out);
        }
    }

private:
    void at(Time t, const Substitution& theta, std::vector<GroundInstance>& out) {
        // Cheap rejection: every positive observation predicate must occur at t.
        const auto& facts = interp_.observationsAt(t);
        for (const auto* l : positives_) {
            auto it = std::lower_bound(facts.begin(), facts.end(), l->atom.predicate,
                                       [](const Atom& a, Symbol p) { return a.predicate < p; });
            if (it == facts.end() || it->predicate != l->atom.predicate) return;
        }
        matchPositives(0, t, theta, out);
    }

    void matchPositives(std::size_t k, Time t, const Substitution& theta, std::vector<GroundInstance>& out) {
        if (k == positives_.size()) {
            bindHolds(0, t, theta, out);
            return;
        }
        const Atom& pattern = positives_[k]->atom;
        const auto& facts = interp_.observationsAt(t);
        auto it = std::lower_bound(facts.begin(), facts.end(), pattern.predicate,
                                   [](const Atom& a, Symbol p) { return a.predicate < p; });
        for (; it != facts.end() && it->predicate == pattern.predicate; ++it) {
            Substitution ext = theta;
            if (matchAtom(pattern, *it, ext)) matchPositives(k + 1, t, ext, out);
        }
    }

    void bindHolds(std::size_t k, Time t, const Substitution& theta, std::vector<GroundInstance>& out) {
        if (k == holdsPos_.size()) {
            bindHead(t, theta, out);
            return;
        }
        const Term pattern = applySubstitution(holdsPos_[k]->atom.args.front(), theta);
        if (pattern.ground()) {
            bindHolds(k + 1, t, theta, out);
            return;
        }
        for (const auto& f : domain_) {
            Substitution ext = theta;
            if (matchTerm(pattern, f, ext)) bindHolds(k + 1, t, ext, out);
        }
    }

    // Head variables no body literal binds range over the fluent domain.
    void bindHead(Time t, const Substitution& theta, std::vector<GroundInstance>& out) {
        const Term pattern = applySubstitution(rule_.fluent(), theta);
        if (pattern.ground()) {
            finish(t, theta, out);
            return;
        }
        for (const auto& f : domain_) {
            Substitution ext = theta;
            if (matchTerm(pattern, f, ext)) finish(t, ext, out);
        }
    }

    void finish(Time t, const Substitution& theta, std::vector<GroundInstance>& out) {
        for (const auto* l : negatives_)
            if (interp_.observed(applySubstitution(l->atom, theta), t)) return;
        GroundInstance g;
        g.ruleId = rule_.id;
        g.theta = theta;
        g.time = t;
        g.kind = rule_.kind();
        g.fluent = applySubstitution(rule_.fluent(), theta);
        for (const auto* l : holdsPos_) g.holds.push_back({applySubstitution(l->atom.args.front(), theta), true});
        for (const auto* l : holdsNeg_) g.holds.push_back({applySubstitution(l->atom.args.front(), theta), false});
        out.push_back(std::move(g));
    }

    const Rule& rule_;
    const Interpretation& interp_;
    const std::set<Term>& domain_;
    std::vector<const Literal*> positives_, holdsPos_, negatives_, holdsNeg_;
};

}  // namespace

std::vector<GroundInstance> groundCandidates(const Rule& r, const Interpretation& i, const std::set<Term>& fluentDomain) {
    std::vector<GroundInstance> out;
    RuleGrounder(r, i, fluentDomain).run(out);
    std::sort(out.begin(), out.end(), [](const GroundInstance& a, const GroundInstance& b) {
        if (a.time != b.time) return a.time < b.time;
        return a.theta < b.theta;
    });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const GroundInstance& a, const GroundInstance& b) {
                              return a.time == b.time && a.theta == b.theta;
                          }),
              out.end());
    return out;
}

bool evaluateBody(const Rule& r, const GroundInstance& g, const Interpretation& i, const HoldsQuery& state) {
    for (const auto& l : r.body) {
        Atom a = applySubstitution(l.atom, g.theta);
        bool value = a.predicate == holdsAtSym() ? state.holds(a.args.front(), g.time) : i.observed(a, g.time);
        if (value == l.negated) return false;
    }
    return true;
}

GroundProgram groundTheory(const std::vector<Rule>& theory, const Interpretation& i, const std::set<Term>& extraFluents) {
    GroundProgram prog;
    prog.fluents = i.initialState;
    prog.fluents.insert(extraFluents.begin(), extraFluents.end());

    // Domain-ranging variables make groundings depend on the fluent set, which
    // the heads extend: iterate to a fixpoint.
    bool open = std::any_of(theory.begin(), theory.end(), [](const Rule& r) {
        std::vector<Symbol> bound, head;
        for (const auto& l : r.body) {
            if (l.atom.predicate == holdsAtSym() && !l.atom.args.front().ground()) return true;
            if (!l.negated) for (const auto& a : l.atom.args) collectVariables(a, bound);
        }
        collectVariables(r.fluent(), head);
        return std::any_of(head.begin(), head.end(),
                           [&](Symbol v) { return std::find(bound.begin(), bound.end(), v) == bound.end(); });
    });
    for (;;) {
        prog.instances.clear();
        for (const auto& r : theory) {
            auto g = groundCandidates(r, i, prog.fluents);
            prog.instances.insert(prog.instances.end(), std::make_move_iterator(g.begin()),
                                  std::make_move_iterator(g.end()));
        }
        std::size_t before = prog.fluents.size();
        for (const auto& g : prog.instances) {
            prog.fluents.insert(g.fluent);
            for (const auto& h : g.holds) prog.fluents.insert(h.fluent);
        }
        if (!open || prog.fluents.size() == before) break;
    }
    std::stable_sort(prog.instances.begin(), prog.instances.end(), [](const GroundInstance& a, const GroundInstance& b) {
        return a.time != b.time ? a.time < b.time : a.ruleId < b.ruleId;
    });
    return prog;
}

}  // namespace wec
