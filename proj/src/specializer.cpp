#include "wec/specializer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace wec {

double informationGain(const GainStats& child, const GainStats& parent) {
    if (child.P <= 0 || parent.P <= 0) return 0.0;
    const double pc = static_cast<double>(child.P), nc = static_cast<double>(child.N);
    const double pp = static_cast<double>(parent.P), np = static_cast<double>(parent.N);
    const double parentLog = std::log(pp / (pp + np));
    const double gmax = pp * -parentLog;
    if (gmax <= 0.0) return 0.0;
    const double g = pc * (std::log(pc / (pc + nc)) - parentLog);
    return std::clamp(g / gmax, 0.0, 1.0);
}

double hoeffdingEpsilon(double delta, std::int64_t n) {
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("Hoeffding delta must lie in (0,1)");
    if (n <= 0) return std::numeric_limits<double>::infinity();
    return std::sqrt(std::log(1.0 / delta) / (2.0 * static_cast<double>(n)));
}

bool hoeffdingSeparates(double best, double second, double epsilon) { return best > 0.0 && best - second > epsilon; }

SpecializationSlot makeSlot(const Rule& parent, double childWeight, std::int64_t& nextId) {
    SpecializationSlot slot;
    slot.parentId = parent.id;
    if (!parent.bottomRule) return slot;
    for (const auto& lit : parent.bottomRule->body) {
        if (std::find(parent.body.begin(), parent.body.end(), lit) != parent.body.end()) continue;
        Rule child;
        child.head = parent.head;
        child.body = parent.body;
        child.body.push_back(lit);
        child.weight = childWeight;
        child.bottomRule = parent.bottomRule;
        child.parent = parent.id;
        try {
            validateRule(child);
        } catch (const std::invalid_argument&) {
            continue;
        }
        if (thetaEquivalent(child, parent)) continue;
        bool dup = std::any_of(slot.children.begin(), slot.children.end(),
                               [&](const SpecializationCandidate& c) { return thetaEquivalent(c.rule, child); });
        if (dup) continue;
        child.id = nextId++;
        slot.children.push_back({std::move(child), {}});
    }
    return slot;
}

void updateGainStats(SpecializationSlot& slot, const Rule& parent, const HoldsQuery& mapStateTop,
                     const HoldsQuery& trueState, const Interpretation& i, const std::set<Term>& fluentDomain) {
    auto pc = countGroundings(parent, mapStateTop, trueState, i, fluentDomain);
    slot.parentStats.add(pc.consistent, pc.inconsistent);
    for (auto& c : slot.children) {
        auto cc = countGroundings(c.rule, mapStateTop, trueState, i, fluentDomain);
        c.stats.add(cc.consistent, cc.inconsistent);
    }
}

void updateChildWeights(SpecializationSlot& slot, const HoldsQuery& mapStateTop, const HoldsQuery& trueState,
                        const Interpretation& i, const UpdateContext& ctx, const std::set<Term>& fluentDomain) {
    for (auto& c : slot.children) {
        std::int64_t dg = countTrueGroundings(c.rule, mapStateTop, i, fluentDomain) -
                          countTrueGroundings(c.rule, trueState, i, fluentDomain);
        adagradUpdate(c.rule, static_cast<double>(dg), ctx);
    }
}

SpecializationDecision trySpecialize(const SpecializationSlot& slot, double delta) {
    SpecializationDecision d;
    d.epsilon = hoeffdingEpsilon(delta, slot.parentStats.observations);
    std::vector<std::pair<double, std::size_t>> gains;
    for (std::size_t k = 0; k < slot.children.size(); ++k)
        gains.emplace_back(informationGain(slot.children[k].stats, slot.parentStats), k);
    if (gains.empty()) return d;
    std::sort(gains.begin(), gains.end(), [&](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return slot.children[a.second].rule.clauseStr() < slot.children[b.second].rule.clauseStr();
    });
    d.bestGain = gains[0].first;
    d.secondGain = gains.size() > 1 ? gains[1].first : 0.0;
    if (hoeffdingSeparates(d.bestGain, d.secondGain, d.epsilon)) d.best = gains[0].second;
    return d;
}

}  // namespace wec
