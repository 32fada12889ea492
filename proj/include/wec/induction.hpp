#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "wec/interpretation.hpp"
#include "wec/logic.hpp"
#include "wec/map_engine.hpp"
#include "wec/modes.hpp"

namespace wec {

enum class MistakeKind : std::uint8_t { FalsePositive, FalseNegative };

struct Mistake {
    HoldsFact atom;
    MistakeKind kind;

    friend bool operator==(const Mistake&, const Mistake&) = default;
};

/// Symmetric difference between inferred and true values at the scored times
/// start+1 .. end+1, over every fluent either side mentions. Sorted by atom.
std::vector<Mistake> findMistakes(const Trajectories& inferred, const TrueState& truth);

/// Head seeds: a false negative at t whose fluent is false at t-1 in the true
/// state gives initiatedAt(f, t-1); a false positive at t whose fluent is true
/// at t-1 gives terminatedAt(f, t-1). Sorted, without duplicates.
std::vector<Atom> abduceHeads(const std::vector<Mistake>& mistakes, const TrueState& truth);

struct BottomRule {
    Rule ground;
    Rule lifted;
};

/// Builds the most specific rule for a seed: every mode-conformant literal
/// true at the seed's time whose input placemarkers are filled with constants
/// reachable from the head (outputs extend the reachable set, to a fixpoint).
/// holdsAt literals are read from state over fluentDomain; negated modes are
/// instantiated with reachable inputs and the constants seen in the data.
/// Throws std::invalid_argument if the seed matches no head mode.
BottomRule generateBottomRule(const Atom& seed, const Interpretation& i, const std::vector<ModeDeclaration>& modes,
                              const HoldsQuery& state, const std::set<Term>& fluentDomain);

/// Keeps the first bottom rule of every θ-equivalence class of lifted forms.
std::vector<BottomRule> compressBottomRules(const std::vector<BottomRule>& bottoms);

/// Per bottom rule: nothing, or its head plus the chosen body literal indices
/// (0-based, ascending).
struct SelectionAssignment {
    std::vector<std::optional<std::vector<std::size_t>>> perRule;

    std::size_t uses() const;
    /// use(i, j) atoms with 1-based rule ids; j = 0 is the head, j >= 1 the
    /// j-th body literal.
    std::set<std::pair<std::size_t, std::size_t>> useAtoms() const;
};

/// Rule made of the bottom rule's lifted head and the chosen literals.
Rule assembleRule(const BottomRule& bottom, const std::vector<std::size_t>& literals);

struct InductionConfig {
    std::size_t maxBodyLength = 8;
    /// Maximum number of assignments evaluated before the search stops.
    std::int64_t evaluationBudget = 4000;
    double newRuleWeight = 0.01;
    std::int64_t scaleK = kDefaultScale;
};

/// The weighted problem of the theory on i, scored against truth. Every disagreement
/// costs mistakeCost = round(factor * 1.0), the integer equivalent of weight 1.
/// The returned problem points at truth.
JointProblem inductionProblem(const std::vector<Rule>& theory, const Interpretation& i, const TrueState& truth,
                              std::int64_t scaleK, const std::set<Term>& extraFluents = {});

struct InductionResult {
    std::vector<Rule> rules;  // ids 0; weights config.newRuleWeight
    SelectionAssignment selection;
    std::int64_t cost = 0;       // mistakeCost * disagreements - theory objective + uses
    std::int64_t emptyCost = 0;  // the same for the empty assignment
    std::int64_t evaluations = 0;
    bool truncated = false;
};

/// Chooses the assignment of minimal cost, where selected rules are added as
/// hard rules to the weighted problem of the current theory. Greedy descent provides the
/// incumbent; a depth-first branch and bound over use decisions, bounded by
/// the relaxed upper bound of the problem, proves optimality unless the
/// evaluation budget runs out (truncated). Rules θ-equivalent to one in the
/// theory or to an earlier selected rule are not returned.
InductionResult induceNewRules(const std::vector<Rule>& theory, const std::vector<BottomRule>& bottoms,
                               const Interpretation& i, const TrueState& truth, const InductionConfig& config = {},
                               const std::set<Term>& extraFluents = {});

}  // namespace wec
