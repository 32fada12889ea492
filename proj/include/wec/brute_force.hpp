#pragma once

#include <vector>

#include "wec/map_engine.hpp"

namespace wec {

inline constexpr std::size_t kBruteForceMaxWindow = 14;
inline constexpr std::size_t kBruteForceMaxFluents = 3;

/// Exhaustive optimum of a JointProblem: enumerates every joint boolean
/// trajectory of all fluents and scores each transition by trying every
/// subset of the body-true weighted candidates against the axioms. Shares no
/// code with the DP engine. Throws std::invalid_argument beyond
/// kBruteForceMaxWindow transitions or kBruteForceMaxFluents fluents.
JointSolution bruteForceJoint(const JointProblem& problem);

/// MAP by exhaustive enumeration (objective and trajectories; satisfied set
/// reconstructed for the optimal trajectory).
MAPResult bruteForceMAP(const std::vector<Rule>& theory, const Interpretation& i, const ScaledWeights& scaled,
                        const std::set<Term>& extraFluents = {});

/// A candidate answer set: fluent values plus the satisfied groundings.
struct World {
    HoldsSet holds;
    std::vector<GroundInstance> satisfied;
    double weightSum = 0.0;  // sum of real rule weights of satisfied groundings
    double probability = 0.0;
};

struct Distribution {
    std::vector<World> worlds;

    double total() const;
    /// Most probable world (first among ties).
    const World& argmax() const;
};

inline constexpr std::size_t kMaxWorlds = std::size_t{1} << 18;

/// Every consistent world with W = exp(sum of real weights of satisfied
/// groundings), normalized. Same bounds as bruteForceMAP, and at most
/// kMaxWorlds worlds.
Distribution enumerateDistribution(const std::vector<Rule>& theory, const Interpretation& i,
                                   const std::set<Term>& extraFluents = {});

}  // namespace wec
