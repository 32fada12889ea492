#include "wec/crisp.hpp"

#include <map>

#include "wec/grounding.hpp"

namespace wec {

namespace {

class CurrentState : public HoldsQuery {
public:
    explicit CurrentState(const std::map<Term, bool>& values) : values_(values) {}
    bool holds(const Term& fluent, Time) const override {
        auto it = values_.find(fluent);
        return it != values_.end() && it->second;
    }

private:
    const std::map<Term, bool>& values_;
};

}  // namespace

Trajectories crispInfer(const std::vector<Rule>& theory, const Interpretation& i, const std::set<Term>& extraFluents) {
    for (const auto& r : theory) validateRule(r);
    GroundProgram prog = groundTheory(theory, i, extraFluents);

    std::map<Term, bool> state;
    std::map<Term, FluentTrajectory> out;
    for (const auto& f : prog.fluents) {
        bool v = i.initialState.count(f) > 0;
        state[f] = v;
        out[f] = FluentTrajectory{f, i.start(), {v}};
    }

    auto next = prog.instances.begin();
    for (Time t = i.start(); t <= i.end(); ++t) {
        std::map<Term, bool> initiated, terminated;
        CurrentState view(state);
        for (; next != prog.instances.end() && next->time == t; ++next) {
            if (!next->requirementsHold(view)) continue;
            (next->kind == HeadKind::Initiation ? initiated : terminated)[next->fluent] = true;
        }
        for (auto& [f, v] : state) {
            v = initiated.count(f) || (v && !terminated.count(f));
            out[f].values.push_back(v);
        }
    }

    Trajectories result(i.start(), i.end());
    for (auto& [f, tr] : out) result.set(std::move(tr));
    return result;
}

}  // namespace wec
