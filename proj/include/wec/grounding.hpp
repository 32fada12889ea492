#pragma once

#include <set>
#include <vector>

#include "wec/interpretation.hpp"
#include "wec/logic.hpp"

namespace wec {

/// A holdsAt body literal left symbolic by grounding.
struct HoldsRequirement {
    Term fluent;
    bool positive = true;

    friend bool operator==(const HoldsRequirement&, const HoldsRequirement&) = default;
};

/// One grounding of a rule at time t whose observation literals are
/// satisfied; its holdsAt literals are kept as requirements on the state.
struct GroundInstance {
    std::int64_t ruleId = 0;
    Substitution theta;
    Time time = 0;
    HeadKind kind = HeadKind::Initiation;
    Term fluent;  // ground head fluent
    std::vector<HoldsRequirement> holds;

    bool requirementsHold(const HoldsQuery& state) const;
    std::string str() const;
};

/// Groundings of r over the window, sorted by (time, substitution). Variables
/// that occur only in holdsAt literals or the head fluent range over
/// fluentDomain.
std::vector<GroundInstance> groundCandidates(const Rule& r, const Interpretation& i,
                                             const std::set<Term>& fluentDomain = {});

/// Full re-evaluation of the rule body under g's substitution: observation
/// literals against i, holdsAt literals against state.
bool evaluateBody(const Rule& r, const GroundInstance& g, const Interpretation& i, const HoldsQuery& state);

/// All groundings of a theory on one window plus the fluent instances they
/// touch.
struct GroundProgram {
    std::vector<GroundInstance> instances;
    /// Initial-state fluents, extra fluents, heads and holdsAt requirements.
    std::set<Term> fluents;
};

/// Grounds every rule, closing the fluent domain under rule heads so holdsAt
/// variables may range over fluents that some rule can initiate.
GroundProgram groundTheory(const std::vector<Rule>& theory, const Interpretation& i,
                           const std::set<Term>& extraFluents = {});

}  // namespace wec
