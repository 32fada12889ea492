#pragma once

#include <set>
#include <vector>

#include "wec/interpretation.hpp"
#include "wec/logic.hpp"

namespace wec {

/// Unweighted Event Calculus forward inference over the window: a fluent holds
/// at t+1 iff some grounding initiates it at t, or it holds at t and no
/// grounding terminates it at t. Values at start come from i.initialState.
/// Trajectories are produced for the initial state, extraFluents and every
/// fluent a rule grounding touches.
Trajectories crispInfer(const std::vector<Rule>& theory, const Interpretation& i,
                        const std::set<Term>& extraFluents = {});

}  // namespace wec
