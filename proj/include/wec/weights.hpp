#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "wec/interpretation.hpp"
#include "wec/logic.hpp"

namespace wec {

struct UpdateContext {
    double eta = 1.0;
    double lambda = 0.01;
    double delta = 1.0;
};

/// Groundings of r at transition times of i whose body holds under
/// (observations, bodyState), split by whether the head agrees with headState
/// at t+1: an initiation agrees when the fluent holds, a termination when it
/// does not.
struct GroundingCounts {
    std::int64_t consistent = 0;
    std::int64_t inconsistent = 0;
};

GroundingCounts countGroundings(const Rule& r, const HoldsQuery& bodyState, const HoldsQuery& headState,
                                const Interpretation& i, const std::set<Term>& fluentDomain = {});

/// Head-consistent groundings with body and head both read from state.
std::int64_t countTrueGroundings(const Rule& r, const HoldsQuery& state, const Interpretation& i,
                                 const std::set<Term>& fluentDomain = {});

/// One AdaGrad step with composite-mirror regularization:
///   C = delta + sqrt(gradSqSum + dg^2)
///   w' = sign(w - eta*dg/C) * max(0, |w - eta*dg/C| - lambda*eta/C)
/// Updates r.weight and r.stats.gradSqSum; returns the new weight.
double adagradUpdate(Rule& r, double dg, const UpdateContext& ctx);

/// dg = countTrueGroundings(r, mapState) - countTrueGroundings(r, trueState)
/// for every rule, followed by adagradUpdate. Returns dg per rule id.
std::map<std::int64_t, std::int64_t> batchWeightUpdate(std::vector<Rule>& theory, const HoldsQuery& mapState,
                                                       const HoldsQuery& trueState, const Interpretation& i,
                                                       const UpdateContext& ctx,
                                                       const std::set<Term>& fluentDomain = {});

}  // namespace wec
