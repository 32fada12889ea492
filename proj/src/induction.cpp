#include "wec/induction.hpp"

#include <algorithm>
#include <iostream>
#include <map>
#include <stdexcept>

#include "wec/grounding.hpp"

namespace wec {

std::vector<Mistake> findMistakes(const Trajectories& inferred, const TrueState& truth) {
    std::set<Term> fluents = truth.fluents();
    for (const auto& [f, _] : inferred.all()) fluents.insert(f);
    for (const auto& h : truth.facts()) fluents.insert(h.fluent);
    std::vector<Mistake> out;
    for (Time t = truth.start() + 1; t <= truth.end() + 1; ++t)
        for (const auto& f : fluents) {
            bool predicted = inferred.holds(f, t), actual = truth.holds(f, t);
            if (predicted != actual)
                out.push_back({{f, t}, predicted ? MistakeKind::FalsePositive : MistakeKind::FalseNegative});
        }
    return out;
}

std::vector<Atom> abduceHeads(const std::vector<Mistake>& mistakes, const TrueState& truth) {
    std::set<Atom> seeds;
    for (const auto& m : mistakes) {
        const Time prev = m.atom.time - 1;
        const bool before = truth.holds(m.atom.fluent, prev);
        if (m.kind == MistakeKind::FalseNegative && !before)
            seeds.insert(Atom(initiatedAtSym(), {m.atom.fluent, Term::integer(prev)}));
        else if (m.kind == MistakeKind::FalsePositive && before)
            seeds.insert(Atom(terminatedAtSym(), {m.atom.fluent, Term::integer(prev)}));
    }
    return {seeds.begin(), seeds.end()};
}

namespace {

struct Leaf {
    Placemarker role;
    Symbol type;
};

void collectLeaves(const ModeTerm& t, std::vector<Leaf>& out) {
    switch (t.kind) {
        case ModeTerm::Kind::Constant: return;
        case ModeTerm::Kind::Placemarker: out.push_back({t.role, t.symbol}); return;
        case ModeTerm::Kind::Compound:
            for (const auto& a : t.args) collectLeaves(a, out);
            return;
    }
}

constexpr std::size_t kMaxNegatedInstances = 100000;

class BottomBuilder {
public:
    BottomBuilder(const Interpretation& i, const std::vector<ModeDeclaration>& modes, const HoldsQuery& state,
                  const std::set<Term>& domain, Time t)
        : i_(i), modes_(modes), state_(state), domain_(domain), t_(t) {
        if (t >= i.start() && t <= i.end()) observed_ = i.observationsAt(t);
        for (const auto& f : domain) {
            Atom a(holdsAtSym(), {f, Term::integer(t)});
            (state.holds(f, t) ? holdsTrue_ : holdsFalse_).push_back(a);
        }
        // Constants per type, for # positions of negated modes.
        for (const auto& m : modes) {
            if (m.kind != ModeDeclaration::Kind::Body) continue;
            auto note = [&](const Atom& a) {
                if (auto b = matchMode(m, a))
                    for (std::size_t k = 0; k + 1 < b->size(); ++k) constants_[(*b)[k].type].insert((*b)[k].value);
            };
            if (m.predicate == holdsAtSym()) {
                for (const auto& a : holdsTrue_) note(a);
                for (const auto& a : holdsFalse_) note(a);
            } else {
                for (Time s = i.start(); s <= i.end(); ++s)
                    for (const auto& a : i.observationsAt(s)) note(a);
            }
        }
    }

    void seedHead(const std::vector<PlacemarkerBinding>& bindings) {
        for (std::size_t k = 0; k + 1 < bindings.size(); ++k) {
            const auto& b = bindings[k];
            constants_[b.type].insert(b.value);
            if (b.role != Placemarker::Constant) reachable_[b.type].insert(b.value);
        }
    }

    std::vector<Literal> run() {
        for (bool changed = true; changed;) {
            changed = false;
            for (const auto& m : modes_) {
                if (m.kind != ModeDeclaration::Kind::Body) continue;
                if (m.negated) changed |= addNegated(m);
                else changed |= addPositive(m);
            }
        }
        return body_;
    }

private:
    bool inputsReachable(const std::vector<PlacemarkerBinding>& b) const {
        if (b.empty() || !(b.back().value == Term::integer(t_))) return false;
        for (std::size_t k = 0; k + 1 < b.size(); ++k) {
            if (b[k].role != Placemarker::Input) continue;
            auto it = reachable_.find(b[k].type);
            if (it == reachable_.end() || !it->second.count(b[k].value)) return false;
        }
        return true;
    }

    bool add(const Literal& l, const std::vector<PlacemarkerBinding>& b) {
        if (!seen_.insert(l).second) return false;
        body_.push_back(l);
        for (std::size_t k = 0; k + 1 < b.size(); ++k)
            if (b[k].role == Placemarker::Output) reachable_[b[k].type].insert(b[k].value);
        return true;
    }

    bool addPositive(const ModeDeclaration& m) {
        bool changed = false;
        const auto& pool = m.predicate == holdsAtSym() ? holdsTrue_ : observed_;
        for (const auto& a : pool) {
            auto b = matchMode(m, a);
            if (b && inputsReachable(*b)) changed |= add({a, false}, *b);
        }
        return changed;
    }

    bool addNegated(const ModeDeclaration& m) {
        std::vector<Leaf> leaves;
        for (const auto& a : m.args) collectLeaves(a, leaves);
        if (leaves.empty()) return false;
        std::vector<std::vector<Term>> options(leaves.size());
        std::size_t total = 1;
        for (std::size_t k = 0; k < leaves.size(); ++k) {
            if (k + 1 == leaves.size()) {
                options[k] = {Term::integer(t_)};
            } else {
                const auto& pool = leaves[k].role == Placemarker::Input ? reachable_ : constants_;
                auto it = pool.find(leaves[k].type);
                if (it != pool.end()) options[k].assign(it->second.begin(), it->second.end());
            }
            total *= options[k].size();
            if (total == 0) return false;
            if (total > kMaxNegatedInstances) {
                std::cerr << "warning: too many instances of " << m.str() << "; skipped\n";
                return false;
            }
        }
        bool changed = false;
        std::vector<std::size_t> pick(leaves.size(), 0);
        for (std::size_t n = 0; n < total; ++n) {
            std::vector<Term> values;
            for (std::size_t k = 0; k < leaves.size(); ++k) values.push_back(options[k][pick[k]]);
            std::size_t next = 0;
            Atom a;
            a.predicate = m.predicate;
            for (const auto& arg : m.args) a.args.push_back(instantiateModeTerm(arg, values, next));
            bool holds = a.predicate == holdsAtSym() ? (domain_.count(a.args.front()) == 0 || state_.holds(a.args.front(), t_))
                                                     : i_.observed(a, t_);
            if (!holds) {
                auto b = matchMode(m, a);
                if (b) changed |= add({a, true}, *b);
            }
            for (std::size_t k = leaves.size(); k-- > 0;) {
                if (++pick[k] < options[k].size()) break;
                pick[k] = 0;
            }
        }
        return changed;
    }

    const Interpretation& i_;
    const std::vector<ModeDeclaration>& modes_;
    const HoldsQuery& state_;
    const std::set<Term>& domain_;
    Time t_;
    std::vector<Atom> observed_, holdsTrue_, holdsFalse_;
    std::map<Symbol, std::set<Term>> reachable_, constants_;
    std::set<Literal> seen_;
    std::vector<Literal> body_;
};

}  // namespace

BottomRule generateBottomRule(const Atom& seed, const Interpretation& i, const std::vector<ModeDeclaration>& modes,
                              const HoldsQuery& state, const std::set<Term>& fluentDomain) {
    if (seed.args.empty() || !seed.args.back().asInteger())
        throw std::invalid_argument("seed without an integer time: " + seed.str());
    const Time t = *seed.args.back().asInteger();
    std::optional<std::vector<PlacemarkerBinding>> head;
    for (const auto& m : modes)
        if (m.kind == ModeDeclaration::Kind::Head && (head = matchMode(m, seed))) break;
    if (!head) throw std::invalid_argument("seed '" + seed.str() + "' matches no head mode declaration");

    BottomBuilder builder(i, modes, state, fluentDomain, t);
    builder.seedHead(*head);
    BottomRule out;
    out.ground.head = seed;
    out.ground.body = builder.run();
    out.lifted = variabilize(out.ground, modes);
    return out;
}

std::vector<BottomRule> compressBottomRules(const std::vector<BottomRule>& bottoms) {
    std::vector<BottomRule> out;
    for (const auto& b : bottoms) {
        bool dup = std::any_of(out.begin(), out.end(),
                               [&](const BottomRule& kept) { return thetaEquivalent(kept.lifted, b.lifted); });
        if (!dup) out.push_back(b);
    }
    return out;
}

std::size_t SelectionAssignment::uses() const {
    std::size_t n = 0;
    for (const auto& r : perRule)
        if (r) n += 1 + r->size();
    return n;
}

std::set<std::pair<std::size_t, std::size_t>> SelectionAssignment::useAtoms() const {
    std::set<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < perRule.size(); ++i) {
        if (!perRule[i]) continue;
        out.insert({i + 1, 0});
        for (auto j : *perRule[i]) out.insert({i + 1, j + 1});
    }
    return out;
}

Rule assembleRule(const BottomRule& bottom, const std::vector<std::size_t>& literals) {
    Rule r;
    r.head = bottom.lifted.head;
    for (auto j : literals) r.body.push_back(bottom.lifted.body.at(j));
    r.bottomRule = std::make_shared<const Rule>(bottom.lifted);
    return r;
}

JointProblem inductionProblem(const std::vector<Rule>& theory, const Interpretation& i, const TrueState& truth,
                              std::int64_t scaleK, const std::set<Term>& extraFluents) {
    ScaledWeights scaled = scaleWeights(theory, scaleK);
    std::set<Term> extra = extraFluents;
    extra.insert(truth.fluents().begin(), truth.fluents().end());
    for (const auto& h : truth.facts()) extra.insert(h.fluent);
    JointProblem p = JointProblem::fromTheory(theory, i, scaled, extra);
    p.target = &truth;
    p.mismatchCost = std::max<std::int64_t>(1, roundHalfAwayFromZero(scaled.factor));
    return p;
}

namespace {

using Choice = std::optional<std::vector<std::size_t>>;

class SelectionSearch {
public:
    SelectionSearch(const JointProblem& base, const std::vector<BottomRule>& bottoms, const Interpretation& i,
                    const InductionConfig& config)
        : base_(base), bottoms_(bottoms), i_(i), config_(config) {}

    std::int64_t evaluations() const { return evaluations_; }
    bool exhausted() const { return evaluations_ >= config_.evaluationBudget || nodes_ >= nodeBudget(); }

    // value - uses for an assignment; nullopt when some selected rule is
    // invalid or too long.
    std::optional<std::int64_t> score(const SelectionAssignment& sel) {
        auto memo = memo_.find(sel.perRule);
        if (memo != memo_.end()) return memo->second;
        std::optional<std::int64_t> result;
        if (feasible(sel)) {
            ++evaluations_;
            JointProblem p = base_;
            for (std::size_t k = 0; k < sel.perRule.size(); ++k) {
                if (!sel.perRule[k]) continue;
                for (const auto& g : groundings(k, *sel.perRule[k])) {
                    p.fluents.insert(g.fluent);
                    for (const auto& h : g.holds) p.fluents.insert(h.fluent);
                    p.instances.push_back(g);
                    p.weights.push_back(0);
                    p.hard.push_back(true);
                }
            }
            result = solveJointValue(p) - static_cast<std::int64_t>(sel.uses());
        }
        memo_.emplace(sel.perRule, result);
        return result;
    }

    void greedy(SelectionAssignment& cur, std::int64_t& curScore) {
        for (;;) {
            std::optional<SelectionAssignment> bestMove;
            std::int64_t best = curScore;
            auto consider = [&](SelectionAssignment cand) {
                if (exhausted()) return;
                auto s = score(cand);
                if (s && *s > best) {
                    best = *s;
                    bestMove = std::move(cand);
                }
            };
            for (std::size_t k = 0; k < bottoms_.size(); ++k) {
                const std::size_t n = bottoms_[k].lifted.body.size();
                if (!cur.perRule[k]) {
                    auto cand = cur;
                    cand.perRule[k] = std::vector<std::size_t>{};
                    consider(cand);
                    for (std::size_t j = 0; j < n; ++j) {
                        cand.perRule[k] = std::vector<std::size_t>{j};
                        consider(cand);
                    }
                    continue;
                }
                for (std::size_t j = 0; j < n; ++j) {
                    auto cand = cur;
                    auto& v = *cand.perRule[k];
                    auto pos = std::lower_bound(v.begin(), v.end(), j);
                    if (pos != v.end() && *pos == j) v.erase(pos);
                    else v.insert(pos, j);
                    consider(cand);
                }
                auto cand = cur;
                cand.perRule[k].reset();
                consider(cand);
            }
            if (!bestMove) return;
            cur = std::move(*bestMove);
            curScore = best;
        }
    }

    void branchAndBound(std::int64_t upper, SelectionAssignment& best, std::int64_t& bestScore) {
        upper_ = upper;
        best_ = &best;
        bestScore_ = &bestScore;
        SelectionAssignment sel;
        sel.perRule.assign(bottoms_.size(), std::nullopt);
        dfs(sel, 0, 0, 0);
    }

private:
    std::int64_t nodeBudget() const { return 64 * config_.evaluationBudget; }

    bool feasible(const SelectionAssignment& sel) {
        for (std::size_t k = 0; k < sel.perRule.size(); ++k) {
            if (!sel.perRule[k]) continue;
            if (sel.perRule[k]->size() > config_.maxBodyLength) return false;
            if (!valid(k, *sel.perRule[k])) return false;
        }
        return true;
    }

    bool valid(std::size_t k, const std::vector<std::size_t>& lits) {
        auto key = std::make_pair(k, lits);
        auto it = valid_.find(key);
        if (it != valid_.end()) return it->second;
        bool ok = true;
        try {
            validateRule(assembleRule(bottoms_[k], lits));
        } catch (const std::invalid_argument&) {
            ok = false;
        }
        valid_.emplace(key, ok);
        return ok;
    }

    const std::vector<GroundInstance>& groundings(std::size_t k, const std::vector<std::size_t>& lits) {
        auto key = std::make_pair(k, lits);
        auto it = ground_.find(key);
        if (it != ground_.end()) return it->second;
        return ground_.emplace(key, groundCandidates(assembleRule(bottoms_[k], lits), i_, base_.fluents))
            .first->second;
    }

    // Decides rule k's head (j = 0) or its (j-1)-th body literal.
    void dfs(SelectionAssignment& sel, std::size_t k, std::size_t j, std::int64_t uses) {
        if (exhausted()) return;
        ++nodes_;
        if (upper_ - uses <= *bestScore_) return;
        if (k == bottoms_.size()) {
            auto s = score(sel);
            if (s && *s > *bestScore_) {
                *bestScore_ = *s;
                *best_ = sel;
            }
            return;
        }
        if (j == 0) {
            dfs(sel, k + 1, 0, uses);
            sel.perRule[k] = std::vector<std::size_t>{};
            dfs(sel, k, 1, uses + 1);
            sel.perRule[k].reset();
            return;
        }
        const std::size_t lit = j - 1;
        if (lit == bottoms_[k].lifted.body.size()) {
            dfs(sel, k + 1, 0, uses);
            return;
        }
        dfs(sel, k, j + 1, uses);
        if (sel.perRule[k]->size() < config_.maxBodyLength) {
            sel.perRule[k]->push_back(lit);
            dfs(sel, k, j + 1, uses + 1);
            sel.perRule[k]->pop_back();
        }
    }

    const JointProblem& base_;
    const std::vector<BottomRule>& bottoms_;
    const Interpretation& i_;
    const InductionConfig& config_;
    std::map<std::vector<Choice>, std::optional<std::int64_t>> memo_;
    std::map<std::pair<std::size_t, std::vector<std::size_t>>, bool> valid_;
    std::map<std::pair<std::size_t, std::vector<std::size_t>>, std::vector<GroundInstance>> ground_;
    std::int64_t evaluations_ = 0;
    std::int64_t nodes_ = 0;
    std::int64_t upper_ = 0;
    SelectionAssignment* best_ = nullptr;
    std::int64_t* bestScore_ = nullptr;
};

}  // namespace

InductionResult induceNewRules(const std::vector<Rule>& theory, const std::vector<BottomRule>& bottoms,
                               const Interpretation& i, const TrueState& truth, const InductionConfig& config,
                               const std::set<Term>& extraFluents) {
    JointProblem base = inductionProblem(theory, i, truth, config.scaleK, extraFluents);
    InductionResult out;
    out.selection.perRule.assign(bottoms.size(), std::nullopt);
    SelectionSearch search(base, bottoms, i, config);
    std::int64_t bestScore = *search.score(out.selection);
    out.emptyCost = -bestScore;
    if (!bottoms.empty()) {
        search.greedy(out.selection, bestScore);
        search.branchAndBound(relaxedUpperBound(base), out.selection, bestScore);
    }
    out.cost = -bestScore;
    out.evaluations = search.evaluations();
    out.truncated = search.exhausted();

    for (std::size_t k = 0; k < bottoms.size(); ++k) {
        if (!out.selection.perRule[k]) continue;
        Rule r = assembleRule(bottoms[k], *out.selection.perRule[k]);
        r.weight = config.newRuleWeight;
        auto same = [&](const Rule& other) { return thetaEquivalent(other, r); };
        if (std::any_of(theory.begin(), theory.end(), same) || std::any_of(out.rules.begin(), out.rules.end(), same))
            continue;
        out.rules.push_back(std::move(r));
    }
    return out;
}

}  // namespace wec
