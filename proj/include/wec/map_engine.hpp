#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "wec/grounding.hpp"
#include "wec/interpretation.hpp"
#include "wec/logic.hpp"

namespace wec {

/// Integer rule weights for the optimizer: round(w * factor), factor = K / d_min.
struct ScaledWeights {
    double factor = 1.0;
    std::map<std::int64_t, std::int64_t> perRule;

    /// Throws std::out_of_range for an unknown rule id.
    std::int64_t of(std::int64_t ruleId) const;
};

inline constexpr std::int64_t kDefaultScale = 1000;

std::int64_t roundHalfAwayFromZero(double x);

/// d_min is the smallest gap between distinct weight values; with a single
/// distinct value the factor is K. The factor is capped so that no scaled
/// weight exceeds 2^40 in magnitude.
ScaledWeights scaleWeights(const std::vector<Rule>& rules, std::int64_t K = kDefaultScale);

struct MAPResult {
    Trajectories trajectories;
    /// Satisfied ground instances, sorted by (time, rule id, substitution).
    std::vector<GroundInstance> satisfied;
    /// Sum of scaled weights of the satisfied instances.
    std::int64_t objective = 0;
};

/// A ground optimization problem over one window. Weighted instances may be
/// satisfied (earning their weight) when their body holds; hard instances
/// always fire when their body holds and earn nothing. With a target state,
/// every disagreement with it at a scored time (start+1 .. end+1) costs
/// mismatchCost.
struct JointProblem {
    Time start = 0;
    Time end = 0;
    std::set<Term> initialState;
    std::set<Term> fluents;
    std::vector<GroundInstance> instances;
    std::vector<std::int64_t> weights;
    std::vector<bool> hard;
    const HoldsQuery* target = nullptr;
    std::int64_t mismatchCost = 0;

    /// Weighted instances of a theory on i.
    static JointProblem fromTheory(const std::vector<Rule>& theory, const Interpretation& i, const ScaledWeights& scaled,
                                   const std::set<Term>& extraFluents = {});
    /// Appends every grounding of rule as a hard instance.
    void addHardRule(const Rule& rule, const Interpretation& i);
};

struct JointSolution {
    Trajectories trajectories;
    std::vector<std::size_t> satisfied;  // indices into JointProblem::instances
    std::int64_t objective = 0;          // sum of satisfied weights
    std::int64_t mismatches = 0;
    std::int64_t value = 0;  // objective - mismatchCost * mismatches
};

/// Maximum fluents in one dependency group (the DP state is 2^n).
inline constexpr std::size_t kMaxGroupSize = 12;

/// Exact optimum by dynamic programming over the joint state of each group of
/// mutually dependent fluents. Ties prefer fewer true holdsAt values.
JointSolution solveJoint(const JointProblem& problem);

/// Best value only; skips reconstruction.
std::int64_t solveJointValue(const JointProblem& problem);

/// Value of the relaxation in which every fluent may switch freely at every
/// transition (no candidate needed); an upper bound on solveJoint's value for
/// any set of added hard instances.
std::int64_t relaxedUpperBound(const JointProblem& problem);

/// MAP inference: the most probable answer set, i.e. maximal total scaled
/// weight of satisfied groundings.
MAPResult mapInference(const std::vector<Rule>& theory, const Interpretation& i, const ScaledWeights& scaled,
                       const std::set<Term>& extraFluents = {});

/// Checks the MAPResult invariants: satisfied bodies hold under the
/// trajectories, trajectories follow from the satisfied set by the Event
/// Calculus axioms, objective equals the sum of satisfied weights. Returns a
/// description of the first violation.
std::optional<std::string> validateMAPResult(const std::vector<Rule>& theory, const Interpretation& i,
                                             const ScaledWeights& scaled, const MAPResult& result);

namespace detail {

/// Aggregates of the body-true candidates of one fluent at one transition.
struct CandidateSummary {
    bool hasInit = false, hasTerm = false;
    bool hardInit = false, hardTerm = false;
    std::int64_t positiveInit = 0, maxInit = 0;
    std::int64_t positiveTerm = 0, maxTerm = 0;

    void addInit(std::int64_t w, bool hard);
    void addTerm(std::int64_t w, bool hard);
};

struct TransitionChoice {
    bool feasible = false;
    std::int64_t score = 0;
    bool initiates = false;
    bool terminates = false;
};

/// Best weighted choice for moving a fluent from cur to next.
TransitionChoice bestTransition(const CandidateSummary& s, bool cur, bool next);

}  // namespace detail

}  // namespace wec
