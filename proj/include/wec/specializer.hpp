#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "wec/interpretation.hpp"
#include "wec/logic.hpp"
#include "wec/weights.hpp"

namespace wec {

/// Accumulated grounding counts of a rule: P head-consistent, N
/// head-inconsistent, both with the body read from the MAP state of the top
/// theory and the head checked against the true state.
struct GainStats {
    std::int64_t P = 0;
    std::int64_t N = 0;
    std::int64_t observations = 0;

    void add(std::int64_t p, std::int64_t n) {
        P += p;
        N += n;
        observations += p + n;
    }
};

/// Normalized information gain of child over parent, natural log:
///   G = P_c (ln(P_c/(P_c+N_c)) - ln(P_p/(P_p+N_p))),  G_max = P_p (-ln(P_p/(P_p+N_p)))
/// Clamped to [0, 1]; 0 when P_c = 0, P_p = 0 or G_max = 0.
double informationGain(const GainStats& child, const GainStats& parent);

/// sqrt(ln(1/delta) / (2n)); +infinity for n = 0.
double hoeffdingEpsilon(double delta, std::int64_t n);

/// The acceptance inequality: best - second > epsilon with best > 0.
bool hoeffdingSeparates(double best, double second, double epsilon);

struct SpecializationCandidate {
    Rule rule;
    GainStats stats;
};

/// The one-literal refinements of a rule drawn from its bottom rule.
struct SpecializationSlot {
    std::int64_t parentId = 0;
    GainStats parentStats;
    std::vector<SpecializationCandidate> children;
};

/// Children are the parent plus one body literal of its bottom rule, skipping
/// literals already present, unsafe results and θ-equivalent duplicates
/// (including of the parent). Children start at weight childWeight; their ids
/// are drawn from nextId. A rule without a bottom rule gets an empty slot.
SpecializationSlot makeSlot(const Rule& parent, double childWeight, std::int64_t& nextId);

/// Adds this batch's counts to the parent and every child.
void updateGainStats(SpecializationSlot& slot, const Rule& parent, const HoldsQuery& mapStateTop,
                     const HoldsQuery& trueState, const Interpretation& i, const std::set<Term>& fluentDomain = {});

/// Weight updates for the children, with the body and MAP head read from the
/// top theory's MAP state.
void updateChildWeights(SpecializationSlot& slot, const HoldsQuery& mapStateTop, const HoldsQuery& trueState,
                        const Interpretation& i, const UpdateContext& ctx, const std::set<Term>& fluentDomain = {});

struct SpecializationDecision {
    std::optional<std::size_t> best;  // index into slot.children when the test passes
    double bestGain = 0.0;
    double secondGain = 0.0;
    double epsilon = 0.0;
};

/// Hoeffding test over the parent's observation count: the best child is
/// accepted when G(best) - G(second) > epsilon and G(best) > 0. With fewer
/// than two children the second gain is 0. Ties between children go to the
/// lexicographically smallest clause.
SpecializationDecision trySpecialize(const SpecializationSlot& slot, double delta);

}  // namespace wec
