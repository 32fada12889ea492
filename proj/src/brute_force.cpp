#include "wec/brute_force.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace wec {

namespace {

constexpr std::size_t kMaxCandidatesPerStep = 16;
constexpr std::size_t kMaxJointBits = 24;

class FixedState : public HoldsQuery {
public:
    FixedState(const std::vector<Term>& fluents, std::uint32_t bits) : fluents_(fluents), bits_(bits) {}
    bool holds(const Term& fluent, Time) const override {
        auto it = std::lower_bound(fluents_.begin(), fluents_.end(), fluent);
        if (it == fluents_.end() || !(*it == fluent)) return false;
        return (bits_ >> (it - fluents_.begin())) & 1u;
    }

private:
    const std::vector<Term>& fluents_;
    std::uint32_t bits_;
};

struct StepCandidates {
    std::vector<std::size_t> weighted;  // body-true weighted instances
    std::vector<std::size_t> hard;      // body-true hard instances
};

class Enumerator {
public:
    explicit Enumerator(const JointProblem& p)
        : p_(p), fluents_(p.fluents.begin(), p.fluents.end()), length_(static_cast<std::size_t>(p.end - p.start + 1)) {
        if (length_ > kBruteForceMaxWindow)
            throw std::invalid_argument("brute force: window of " + std::to_string(length_) + " exceeds " +
                                        std::to_string(kBruteForceMaxWindow));
        if (fluents_.size() > kBruteForceMaxFluents)
            throw std::invalid_argument("brute force: " + std::to_string(fluents_.size()) + " fluents exceed " +
                                        std::to_string(kBruteForceMaxFluents));
        if (fluents_.size() * length_ > kMaxJointBits)
            throw std::invalid_argument("brute force: trajectory space too large");
        states_ = 1u << fluents_.size();
        initial_ = 0;
        for (std::size_t j = 0; j < fluents_.size(); ++j)
            if (p.initialState.count(fluents_[j])) initial_ |= 1u << j;
    }

    std::uint32_t states() const { return states_; }
    std::uint32_t initial() const { return initial_; }
    std::size_t length() const { return length_; }
    const std::vector<Term>& fluents() const { return fluents_; }

    StepCandidates candidates(std::size_t k, std::uint32_t s) const {
        StepCandidates out;
        FixedState view(fluents_, s);
        Time t = p_.start + static_cast<Time>(k);
        for (std::size_t idx = 0; idx < p_.instances.size(); ++idx) {
            const auto& g = p_.instances[idx];
            if (g.time != t || !g.requirementsHold(view)) continue;
            (p_.hard[idx] ? out.hard : out.weighted).push_back(idx);
        }
        if (out.weighted.size() > kMaxCandidatesPerStep)
            throw std::invalid_argument("brute force: too many candidates at one time point");
        return out;
    }

    // Next state when exactly the chosen weighted candidates (bitmask over
    // c.weighted) plus all hard candidates are satisfied.
    std::uint32_t successor(std::uint32_t s, const StepCandidates& c, std::uint32_t chosen) const {
        std::uint32_t init = 0, term = 0;
        auto mark = [&](std::size_t idx) {
            const auto& g = p_.instances[idx];
            auto bit = 1u << (std::lower_bound(fluents_.begin(), fluents_.end(), g.fluent) - fluents_.begin());
            (g.kind == HeadKind::Initiation ? init : term) |= bit;
        };
        for (std::size_t b = 0; b < c.weighted.size(); ++b)
            if ((chosen >> b) & 1u) mark(c.weighted[b]);
        for (auto idx : c.hard) mark(idx);
        return init | (s & ~term);
    }

    std::int64_t penalty(std::size_t k, std::uint32_t s) const {
        if (!p_.target) return 0;
        std::int64_t cost = 0;
        for (std::size_t j = 0; j < fluents_.size(); ++j)
            if (p_.target->holds(fluents_[j], p_.start + static_cast<Time>(k)) != (((s >> j) & 1u) != 0))
                cost += p_.mismatchCost;
        return cost;
    }

private:
    const JointProblem& p_;
    std::vector<Term> fluents_;
    std::size_t length_;
    std::uint32_t states_ = 1;
    std::uint32_t initial_ = 0;
};

constexpr std::int64_t kInfeasible = std::numeric_limits<std::int64_t>::min();

struct Step {
    std::int64_t score = kInfeasible;
    std::uint32_t chosen = 0;
};

}  // namespace

JointSolution bruteForceJoint(const JointProblem& problem) {
    Enumerator e(problem);
    const auto ns = e.states();
    const auto len = e.length();

    // table[k][s][s2]: best satisfied subset moving s -> s2 at step k.
    std::vector<std::vector<std::vector<Step>>> table(len, std::vector<std::vector<Step>>(ns, std::vector<Step>(ns)));
    std::vector<std::vector<StepCandidates>> cands(len, std::vector<StepCandidates>(ns));
    for (std::size_t k = 0; k < len; ++k)
        for (std::uint32_t s = 0; s < ns; ++s) {
            cands[k][s] = e.candidates(k, s);
            const auto& c = cands[k][s];
            for (std::uint32_t chosen = 0; chosen < (1u << c.weighted.size()); ++chosen) {
                std::int64_t w = 0;
                for (std::size_t b = 0; b < c.weighted.size(); ++b)
                    if ((chosen >> b) & 1u) w += problem.weights[c.weighted[b]];
                auto s2 = e.successor(s, c, chosen);
                auto& cell = table[k][s][s2];
                if (cell.score == kInfeasible || w > cell.score) cell = {w, chosen};
            }
        }

    // Plain depth-first enumeration of every feasible joint trajectory.
    std::vector<std::uint32_t> path(len + 1), bestPath;
    std::int64_t best = kInfeasible;
    path[0] = e.initial();
    auto dfs = [&](auto&& self, std::size_t k, std::int64_t acc) -> void {
        if (k == len) {
            if (best == kInfeasible || acc > best) {
                best = acc;
                bestPath = path;
            }
            return;
        }
        for (std::uint32_t s2 = 0; s2 < ns; ++s2) {
            const auto& cell = table[k][path[k]][s2];
            if (cell.score == kInfeasible) continue;
            path[k + 1] = s2;
            self(self, k + 1, acc + cell.score - e.penalty(k + 1, s2));
        }
    };
    dfs(dfs, 0, 0);

    JointSolution sol;
    sol.trajectories = Trajectories(problem.start, problem.end);
    for (std::size_t j = 0; j < e.fluents().size(); ++j) {
        FluentTrajectory tr{e.fluents()[j], problem.start, {}};
        for (auto s : bestPath) tr.values.push_back((s >> j) & 1u);
        sol.trajectories.set(std::move(tr));
    }
    for (std::size_t k = 0; k < len; ++k) {
        const auto& cell = table[k][bestPath[k]][bestPath[k + 1]];
        const auto& c = cands[k][bestPath[k]];
        for (std::size_t b = 0; b < c.weighted.size(); ++b)
            if ((cell.chosen >> b) & 1u) sol.satisfied.push_back(c.weighted[b]);
        sol.objective += cell.score;
        if (problem.target) sol.mismatches += e.penalty(k + 1, bestPath[k + 1]) / std::max<std::int64_t>(1, problem.mismatchCost);
    }
    sol.value = best;
    return sol;
}

MAPResult bruteForceMAP(const std::vector<Rule>& theory, const Interpretation& i, const ScaledWeights& scaled,
                        const std::set<Term>& extraFluents) {
    JointProblem p = JointProblem::fromTheory(theory, i, scaled, extraFluents);
    JointSolution sol = bruteForceJoint(p);
    MAPResult out;
    out.trajectories = std::move(sol.trajectories);
    out.objective = sol.objective;
    for (auto k : sol.satisfied) out.satisfied.push_back(p.instances[k]);
    std::sort(out.satisfied.begin(), out.satisfied.end(), [](const GroundInstance& a, const GroundInstance& b) {
        if (a.time != b.time) return a.time < b.time;
        if (a.ruleId != b.ruleId) return a.ruleId < b.ruleId;
        return a.theta < b.theta;
    });
    return out;
}

double Distribution::total() const {
    double s = 0.0;
    for (const auto& w : worlds) s += w.probability;
    return s;
}

const World& Distribution::argmax() const {
    if (worlds.empty()) throw std::logic_error("empty distribution");
    const World* best = &worlds.front();
    for (const auto& w : worlds)
        if (w.weightSum > best->weightSum) best = &w;
    return *best;
}

Distribution enumerateDistribution(const std::vector<Rule>& theory, const Interpretation& i,
                                   const std::set<Term>& extraFluents) {
    ScaledWeights unit;
    for (const auto& r : theory) unit.perRule[r.id] = 0;
    JointProblem p = JointProblem::fromTheory(theory, i, unit, extraFluents);
    Enumerator e(p);
    std::map<std::int64_t, double> realWeight;
    for (const auto& r : theory) realWeight[r.id] = r.weight;

    Distribution dist;
    std::vector<std::uint32_t> path(e.length() + 1);
    std::vector<std::size_t> chosenStack;
    path[0] = e.initial();
    auto dfs = [&](auto&& self, std::size_t k, double acc) -> void {
        if (k == e.length()) {
            if (dist.worlds.size() >= kMaxWorlds) throw std::invalid_argument("enumerateDistribution: too many worlds");
            World w;
            for (std::size_t step = 0; step < path.size(); ++step)
                for (std::size_t j = 0; j < e.fluents().size(); ++j)
                    if ((path[step] >> j) & 1u) w.holds.insert({e.fluents()[j], p.start + static_cast<Time>(step)});
            for (auto idx : chosenStack) w.satisfied.push_back(p.instances[idx]);
            w.weightSum = acc;
            dist.worlds.push_back(std::move(w));
            return;
        }
        auto c = e.candidates(k, path[k]);
        for (std::uint32_t chosen = 0; chosen < (1u << c.weighted.size()); ++chosen) {
            double w = 0.0;
            std::size_t pushed = 0;
            for (std::size_t b = 0; b < c.weighted.size(); ++b)
                if ((chosen >> b) & 1u) {
                    w += realWeight.at(p.instances[c.weighted[b]].ruleId);
                    chosenStack.push_back(c.weighted[b]);
                    ++pushed;
                }
            path[k + 1] = e.successor(path[k], c, chosen);
            self(self, k + 1, acc + w);
            chosenStack.resize(chosenStack.size() - pushed);
        }
    };
    dfs(dfs, 0, 0.0);

    double maxLog = -std::numeric_limits<double>::infinity();
    for (const auto& w : dist.worlds) maxLog = std::max(maxLog, w.weightSum);
    double z = 0.0;
    for (const auto& w : dist.worlds) z += std::exp(w.weightSum - maxLog);
    for (auto& w : dist.worlds) w.probability = std::exp(w.weightSum - maxLog) / z;
    return dist;
}

}  // namespace wec
