#include "wec/map_engine.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace wec {

std::int64_t ScaledWeights::of(std::int64_t ruleId) const {
    auto it = perRule.find(ruleId);
    if (it == perRule.end()) throw std::out_of_range("no scaled weight for rule " + std::to_string(ruleId));
    return it->second;
}

std::int64_t roundHalfAwayFromZero(double x) { return static_cast<std::int64_t>(std::round(x)); }

ScaledWeights scaleWeights(const std::vector<Rule>& rules, std::int64_t K) {
    if (K <= 0) throw std::invalid_argument("scale constant K must be positive");
    std::vector<double> ws;
    for (const auto& r : rules) ws.push_back(r.weight);
    std::sort(ws.begin(), ws.end());
    ws.erase(std::unique(ws.begin(), ws.end()), ws.end());

    double dmin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < ws.size(); ++i) dmin = std::min(dmin, ws[i] - ws[i - 1]);

    ScaledWeights out;
    out.factor = std::isfinite(dmin) && dmin > 0 ? static_cast<double>(K) / dmin : static_cast<double>(K);
    double maxAbs = 0.0;
    for (double w : ws) maxAbs = std::max(maxAbs, std::abs(w));
    constexpr double kCap = 1099511627776.0;  // 2^40
    if (maxAbs * out.factor > kCap) out.factor = kCap / maxAbs;
    for (const auto& r : rules) out.perRule[r.id] = roundHalfAwayFromZero(r.weight * out.factor);
    return out;
}

namespace detail {

void CandidateSummary::addInit(std::int64_t w, bool hard) {
    if (hard) {
        hardInit = true;
        return;
    }
    if (w > 0) positiveInit += w;
    maxInit = hasInit ? std::max(maxInit, w) : w;
    hasInit = true;
}

void CandidateSummary::addTerm(std::int64_t w, bool hard) {
    if (hard) {
        hardTerm = true;
        return;
    }
    if (w > 0) positiveTerm += w;
    maxTerm = hasTerm ? std::max(maxTerm, w) : w;
    hasTerm = true;
}

TransitionChoice bestTransition(const CandidateSummary& s, bool cur, bool next) {
    TransitionChoice best;
    for (int occ = 0; occ < 4; ++occ) {
        bool init = occ & 2, term = occ & 1;
        std::int64_t score = 0;
        // An occurrence needs a satisfied candidate or a hard grounding; a
        // non-occurrence is impossible when a hard grounding fires.
        if (init) {
            if (s.hardInit) score += s.positiveInit;
            else if (s.hasInit) score += s.positiveInit > 0 ? s.positiveInit : s.maxInit;
            else continue;
        } else if (s.hardInit) {
            continue;
        }
        if (term) {
            if (s.hardTerm) score += s.positiveTerm;
            else if (s.hasTerm) score += s.positiveTerm > 0 ? s.positiveTerm : s.maxTerm;
            else continue;
        } else if (s.hardTerm) {
            continue;
        }
        if ((init || (cur && !term)) != next) continue;
        if (!best.feasible || score > best.score) best = {true, score, init, term};
    }
    return best;
}

}  // namespace detail

namespace {

using detail::CandidateSummary;
using detail::TransitionChoice;

constexpr std::int64_t kNegInf = std::numeric_limits<std::int64_t>::min() / 4;

struct Value {
    std::int64_t score = kNegInf;
    std::int64_t trues = 0;

    bool valid() const { return score != kNegInf; }
    bool betterThan(const Value& o) const {
        if (!o.valid()) return valid();
        return score > o.score || (score == o.score && trues < o.trues);
    }
};

struct LocalInstance {
    std::size_t index;  // into JointProblem::instances
    int head;           // local fluent position
    std::vector<std::pair<int, bool>> reqs;
};

struct Group {
    std::vector<int> fluents;  // global fluent indices
    std::vector<std::vector<LocalInstance>> byTime;
};

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a), b = find(b);
        if (a != b) parent_[std::max(a, b)] = std::min(a, b);
    }

private:
    std::vector<std::size_t> parent_;
};

class Engine {
public:
    explicit Engine(const JointProblem& p) : p_(p), length_(static_cast<std::size_t>(p.end - p.start + 1)) {
        if (p.end < p.start) throw std::invalid_argument("empty window");
        if (p.weights.size() != p.instances.size() || p.hard.size() != p.instances.size())
            throw std::invalid_argument("JointProblem weights/hard must match instances");
        fluents_.assign(p.fluents.begin(), p.fluents.end());
        auto indexOf = [&](const Term& f) {
            auto it = std::lower_bound(fluents_.begin(), fluents_.end(), f);
            if (it == fluents_.end() || !(*it == f)) throw std::logic_error("fluent missing from problem: " + f.str());
            return static_cast<int>(it - fluents_.begin());
        };
        UnionFind uf(fluents_.size());
        std::vector<int> heads(p.instances.size());
        for (std::size_t k = 0; k < p.instances.size(); ++k) {
            const auto& g = p.instances[k];
            if (g.time < p.start || g.time > p.end) throw std::invalid_argument("instance outside the window");
            heads[k] = indexOf(g.fluent);
            for (const auto& h : g.holds) uf.unite(static_cast<std::size_t>(heads[k]), static_cast<std::size_t>(indexOf(h.fluent)));
        }
        std::vector<int> groupOf(fluents_.size(), -1), localOf(fluents_.size(), -1);
        for (std::size_t f = 0; f < fluents_.size(); ++f) {
            std::size_t root = uf.find(f);
            if (groupOf[root] < 0) {
                groupOf[root] = static_cast<int>(groups_.size());
                groups_.emplace_back();
                groups_.back().byTime.resize(length_);
            }
            int gi = groupOf[root];
            groupOf[f] = gi;
            localOf[f] = static_cast<int>(groups_[gi].fluents.size());
            groups_[gi].fluents.push_back(static_cast<int>(f));
        }
        for (const auto& g : groups_)
            if (g.fluents.size() > kMaxGroupSize)
                throw std::runtime_error("dependency group of " + std::to_string(g.fluents.size()) +
                                         " fluents exceeds the exact-inference limit");
        for (std::size_t k = 0; k < p.instances.size(); ++k) {
            const auto& g = p.instances[k];
            LocalInstance li{k, localOf[heads[k]], {}};
            for (const auto& h : g.holds) li.reqs.emplace_back(localOf[indexOf(h.fluent)], h.positive);
            groups_[groupOf[heads[k]]].byTime[static_cast<std::size_t>(g.time - p.start)].push_back(std::move(li));
        }
    }

    JointSolution solve(bool reconstruct) {
        JointSolution sol;
        sol.trajectories = Trajectories(p_.start, p_.end);
        for (const auto& g : groups_) {
            auto states = runGroup(g, false);
            auto path = backtrack(g, states);
            for (std::size_t j = 0; j < g.fluents.size(); ++j) {
                FluentTrajectory tr{fluents_[g.fluents[j]], p_.start, {}};
                for (auto s : path) tr.values.push_back((s >> j) & 1u);
                if (reconstruct) sol.trajectories.set(std::move(tr));
            }
            sol.value += groupBest_;
            if (reconstruct) collectSatisfied(g, path, sol.satisfied);
            if (reconstruct && p_.target)
                for (std::size_t k = 1; k < path.size(); ++k)
                    for (std::size_t j = 0; j < g.fluents.size(); ++j)
                        if (mismatch(g.fluents[j], k, (path[k] >> j) & 1u)) ++sol.mismatches;
        }
        if (reconstruct) {
            std::sort(sol.satisfied.begin(), sol.satisfied.end(), [&](std::size_t a, std::size_t b) {
                const auto& x = p_.instances[a];
                const auto& y = p_.instances[b];
                if (x.time != y.time) return x.time < y.time;
                if (x.ruleId != y.ruleId) return x.ruleId < y.ruleId;
                return x.theta < y.theta;
            });
            for (auto k : sol.satisfied) sol.objective += p_.weights[k];
        }
        return sol;
    }

    std::int64_t relaxed() {
        std::int64_t total = 0;
        for (const auto& g : groups_) {
            runGroup(g, true);
            total += groupBest_;
        }
        return total;
    }

private:
    // Penalty for fluent f taking value v at window offset k (1..length).
    bool mismatch(int f, std::size_t k, bool v) const {
        return p_.target->holds(fluents_[f], p_.start + static_cast<Time>(k)) != v;
    }

    std::vector<CandidateSummary> summarize(const Group& g, std::size_t k, std::uint32_t state) const {
        std::vector<CandidateSummary> sums(g.fluents.size());
        for (const auto& li : g.byTime[k]) {
            bool ok = std::all_of(li.reqs.begin(), li.reqs.end(),
                                  [&](const auto& r) { return (((state >> r.first) & 1u) != 0) == r.second; });
            if (!ok) continue;
            const auto& inst = p_.instances[li.index];
            auto& s = sums[li.head];
            if (inst.kind == HeadKind::Initiation) s.addInit(p_.weights[li.index], p_.hard[li.index]);
            else s.addTerm(p_.weights[li.index], p_.hard[li.index]);
        }
        return sums;
    }

    // Forward DP; fills back_ and groupBest_, returns the final state values.
    std::vector<Value> runGroup(const Group& g, bool relax) {
        const std::size_t n = g.fluents.size();
        const std::uint32_t ns = 1u << n;
        std::vector<Value> cur(ns), nxt(ns);
        std::uint32_t init = 0;
        for (std::size_t j = 0; j < n; ++j)
            if (p_.initialState.count(fluents_[g.fluents[j]])) init |= 1u << j;
        cur[init] = {0, 0};
        back_.assign(length_, std::vector<std::uint32_t>(ns, 0));

        std::vector<std::array<TransitionChoice, 2>> opts(n);
        for (std::size_t k = 0; k < length_; ++k) {
            std::fill(nxt.begin(), nxt.end(), Value{});
            for (std::uint32_t s = 0; s < ns; ++s) {
                if (!cur[s].valid()) continue;
                auto sums = summarize(g, k, s);
                for (std::size_t j = 0; j < n; ++j) {
                    bool c = (s >> j) & 1u;
                    for (int v = 0; v < 2; ++v) {
                        TransitionChoice tc = detail::bestTransition(sums[j], c, v);
                        if (relax) {
                            // Any added hard grounding may switch the fluent.
                            for (int h = 1; h < 4; ++h) {
                                CandidateSummary alt = sums[j];
                                alt.hardInit |= (h & 2) != 0;
                                alt.hardTerm |= (h & 1) != 0;
                                TransitionChoice a = detail::bestTransition(alt, c, v);
                                if (a.feasible && (!tc.feasible || a.score > tc.score)) tc = a;
                            }
                        }
                        if (tc.feasible && p_.target && mismatch(g.fluents[j], k + 1, v)) tc.score -= p_.mismatchCost;
                        opts[j][v] = tc;
                    }
                }
                for (std::uint32_t s2 = 0; s2 < ns; ++s2) {
                    Value cand = cur[s];
                    bool feasible = true;
                    for (std::size_t j = 0; j < n && feasible; ++j) {
                        const auto& tc = opts[j][(s2 >> j) & 1u];
                        feasible = tc.feasible;
                        cand.score += tc.score;
                    }
                    if (!feasible) continue;
                    cand.trues += std::popcount(s2);
                    if (cand.betterThan(nxt[s2])) {
                        nxt[s2] = cand;
                        back_[k][s2] = s;
                    }
                }
            }
            std::swap(cur, nxt);
        }
        finalState_ = 0;
        Value best;
        for (std::uint32_t s = 0; s < ns; ++s)
            if (cur[s].betterThan(best)) {
                best = cur[s];
                finalState_ = s;
            }
        if (!best.valid()) throw std::logic_error("no feasible trajectory");
        groupBest_ = best.score;
        return cur;
    }

    std::vector<std::uint32_t> backtrack(const Group&, const std::vector<Value>&) const {
        std::vector<std::uint32_t> path(length_ + 1);
        path[length_] = finalState_;
        for (std::size_t k = length_; k-- > 0;) path[k] = back_[k][path[k + 1]];
        return path;
    }

    void collectSatisfied(const Group& g, const std::vector<std::uint32_t>& path, std::vector<std::size_t>& out) const {
        for (std::size_t k = 0; k < length_; ++k) {
            auto sums = summarize(g, k, path[k]);
            for (std::size_t j = 0; j < g.fluents.size(); ++j) {
                bool c = (path[k] >> j) & 1u, v = (path[k + 1] >> j) & 1u;
                TransitionChoice tc = detail::bestTransition(sums[j], c, v);
                if (!tc.feasible) throw std::logic_error("infeasible transition on the optimal path");
                const auto& s = sums[j];
                pick(g, k, path[k], static_cast<int>(j), HeadKind::Initiation, tc.initiates,
                     s.hardInit || s.positiveInit > 0, out);
                pick(g, k, path[k], static_cast<int>(j), HeadKind::Termination, tc.terminates,
                     s.hardTerm || s.positiveTerm > 0, out);
            }
        }
    }

    // Satisfies all positive-weight candidates, or the single best one when an
    // occurrence is required and none is positive.
    void pick(const Group& g, std::size_t k, std::uint32_t state, int local, HeadKind kind, bool occurs,
              bool positivesSuffice, std::vector<std::size_t>& out) const {
        if (!occurs) return;
        std::optional<std::size_t> best;
        for (const auto& li : g.byTime[k]) {
            if (li.head != local || p_.instances[li.index].kind != kind || p_.hard[li.index]) continue;
            bool ok = std::all_of(li.reqs.begin(), li.reqs.end(),
                                  [&](const auto& r) { return (((state >> r.first) & 1u) != 0) == r.second; });
            if (!ok) continue;
            std::int64_t w = p_.weights[li.index];
            if (positivesSuffice) {
                if (w > 0) out.push_back(li.index);
            } else if (!best || w > p_.weights[*best] || (w == p_.weights[*best] && earlier(li.index, *best))) {
                best = li.index;
            }
        }
        if (best) out.push_back(*best);
    }

    bool earlier(std::size_t a, std::size_t b) const {
        const auto& x = p_.instances[a];
        const auto& y = p_.instances[b];
        if (x.ruleId != y.ruleId) return x.ruleId < y.ruleId;
        return x.theta < y.theta;
    }

    const JointProblem& p_;
    std::size_t length_;
    std::vector<Term> fluents_;
    std::vector<Group> groups_;
    std::vector<std::vector<std::uint32_t>> back_;
    std::uint32_t finalState_ = 0;
    std::int64_t groupBest_ = 0;
};

}  // namespace

JointProblem JointProblem::fromTheory(const std::vector<Rule>& theory, const Interpretation& i,
                                      const ScaledWeights& scaled, const std::set<Term>& extraFluents) {
    for (const auto& r : theory) validateRule(r);
    GroundProgram prog = groundTheory(theory, i, extraFluents);
    JointProblem p;
    p.start = i.start();
    p.end = i.end();
    p.initialState = i.initialState;
    p.fluents = std::move(prog.fluents);
    p.instances = std::move(prog.instances);
    for (const auto& g : p.instances) {
        p.weights.push_back(scaled.of(g.ruleId));
        p.hard.push_back(false);
    }
    return p;
}

void JointProblem::addHardRule(const Rule& rule, const Interpretation& i) {
    for (auto& g : groundCandidates(rule, i, fluents)) {
        fluents.insert(g.fluent);
        for (const auto& h : g.holds) fluents.insert(h.fluent);
        instances.push_back(std::move(g));
        weights.push_back(0);
        hard.push_back(true);
    }
}

JointSolution solveJoint(const JointProblem& problem) { return Engine(problem).solve(true); }

std::int64_t solveJointValue(const JointProblem& problem) { return Engine(problem).solve(false).value; }

std::int64_t relaxedUpperBound(const JointProblem& problem) { return Engine(problem).relaxed(); }

MAPResult mapInference(const std::vector<Rule>& theory, const Interpretation& i, const ScaledWeights& scaled,
                       const std::set<Term>& extraFluents) {
    JointProblem p = JointProblem::fromTheory(theory, i, scaled, extraFluents);
    JointSolution sol = solveJoint(p);
    MAPResult out;
    out.trajectories = std::move(sol.trajectories);
    out.objective = sol.objective;
    for (auto k : sol.satisfied) out.satisfied.push_back(p.instances[k]);
    return out;
}

std::optional<std::string> validateMAPResult(const std::vector<Rule>& theory, const Interpretation& i,
                                             const ScaledWeights& scaled, const MAPResult& result) {
    const auto& tr = result.trajectories;
    if (tr.start() != i.start() || tr.end() != i.end()) return "trajectories do not cover the window";

    std::map<std::int64_t, const Rule*> byId;
    for (const auto& r : theory) byId[r.id] = &r;
    std::int64_t objective = 0;
    std::map<std::pair<Term, Time>, std::pair<bool, bool>> fired;  // (initiated, terminated)
    for (const auto& g : result.satisfied) {
        auto it = byId.find(g.ruleId);
        if (it == byId.end()) return "satisfied instance of unknown rule " + std::to_string(g.ruleId);
        if (!evaluateBody(*it->second, g, i, tr)) return "satisfied instance with false body: " + g.str();
        objective += scaled.of(g.ruleId);
        auto& f = fired[{g.fluent, g.time}];
        (g.kind == HeadKind::Initiation ? f.first : f.second) = true;
    }
    if (objective != result.objective)
        return "objective " + std::to_string(result.objective) + " differs from satisfied weight sum " +
               std::to_string(objective);

    for (const auto& [fluent, traj] : tr.all()) {
        if (traj.at(i.start()) != (i.initialState.count(fluent) > 0))
            return "initial value of " + fluent.str() + " differs from the initial state";
        for (Time t = i.start(); t <= i.end(); ++t) {
            auto it = fired.find({fluent, t});
            bool init = it != fired.end() && it->second.first;
            bool term = it != fired.end() && it->second.second;
            bool expect = init || (traj.at(t) && !term);
            if (traj.at(t + 1) != expect)
                return "value of " + fluent.str() + " at " + std::to_string(t + 1) + " does not follow from the axioms";
        }
    }
    for (const auto& [key, _] : fired)
        if (!tr.find(key.first)) return "satisfied instance for fluent without trajectory: " + key.first.str();
    return std::nullopt;
}

}  // namespace wec
