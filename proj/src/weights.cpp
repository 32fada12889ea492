#include "wec/weights.hpp"

#include <cmath>
#include <stdexcept>

#include "wec/grounding.hpp"

namespace wec {

GroundingCounts countGroundings(const Rule& r, const HoldsQuery& bodyState, const HoldsQuery& headState,
                                const Interpretation& i, const std::set<Term>& fluentDomain) {
    GroundingCounts c;
    for (const auto& g : groundCandidates(r, i, fluentDomain)) {
        if (!g.requirementsHold(bodyState)) continue;
        bool next = headState.holds(g.fluent, g.time + 1);
        bool agrees = g.kind == HeadKind::Initiation ? next : !next;
        ++(agrees ? c.consistent : c.inconsistent);
    }
    return c;
}

std::int64_t countTrueGroundings(const Rule& r, const HoldsQuery& state, const Interpretation& i,
                                 const std::set<Term>& fluentDomain) {
    return countGroundings(r, state, state, i, fluentDomain).consistent;
}

double adagradUpdate(Rule& r, double dg, const UpdateContext& ctx) {
    if (!(ctx.eta > 0) || ctx.lambda < 0 || ctx.delta < 0) throw std::invalid_argument("invalid AdaGrad hyperparameters");
    r.stats.gradSqSum += dg * dg;
    const double C = ctx.delta + std::sqrt(r.stats.gradSqSum);
    if (C == 0.0) return r.weight;  // delta = 0 and no gradient history: no step is defined
    const double step = r.weight - ctx.eta / C * dg;
    const double shrunk = std::max(0.0, std::abs(step) - ctx.lambda * ctx.eta / C);
    r.weight = std::copysign(shrunk, step);
    if (r.weight == 0.0) r.weight = 0.0;  // normalize -0
    return r.weight;
}

std::map<std::int64_t, std::int64_t> batchWeightUpdate(std::vector<Rule>& theory, const HoldsQuery& mapState,
                                                       const HoldsQuery& trueState, const Interpretation& i,
                                                       const UpdateContext& ctx, const std::set<Term>& fluentDomain) {
    std::map<std::int64_t, std::int64_t> deltas;
    for (auto& r : theory) {
        std::int64_t dg = countTrueGroundings(r, mapState, i, fluentDomain) -
                          countTrueGroundings(r, trueState, i, fluentDomain);
        adagradUpdate(r, static_cast<double>(dg), ctx);
        deltas[r.id] = dg;
    }
    return deltas;
}

}  // namespace wec
