#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wec/induction.hpp"
#include "wec/logic.hpp"
#include "wec/modes.hpp"
#include "wec/specializer.hpp"
#include "wec/stream.hpp"
#include "wec/weights.hpp"

namespace wec {

/// Initial state of batch k+1: the final inferred state of batch k, or the
/// annotation at the batch start.
enum class CarryState : std::uint8_t { Inferred, Annotated };

struct LearnerConfig {
    UpdateContext adagrad;
    double hoeffdingDelta = 0.01;
    std::int64_t scaleK = kDefaultScale;
    InductionConfig induction;
    std::vector<ModeDeclaration> modes;
    CarryState carry = CarryState::Inferred;
    bool learnStructure = true;  // induction and specialization
    /// Remove rules with |w| below this for pruneBatches consecutive batches.
    std::optional<double> pruneThreshold;
    std::size_t pruneBatches = 10;
    std::size_t threads = 1;
};

struct Counts {
    std::int64_t tp = 0, fp = 0, fn = 0;

    Counts& operator+=(const Counts& o) {
        tp += o.tp, fp += o.fp, fn += o.fn;
        return *this;
    }
    friend bool operator==(const Counts&, const Counts&) = default;
};

/// TP/FP/FN of predictions against truth at its scored times, over the
/// fluents either side mentions.
Counts scorePredictions(const Trajectories& predicted, const TrueState& truth);

struct BatchRecord {
    std::size_t batch = 0;
    Time start = 0, end = 0;
    bool annotated = false;
    HoldsSet predictions;  // times start+1 .. end+1
    Counts counts;
    std::int64_t theoryVersion = 0;  // learning updates applied before the prediction
    double inferMs = 0.0, learnMs = 0.0;
    std::size_t theorySize = 0;  // total literal count after learning
    std::size_t newRules = 0, specializations = 0, pruned = 0;
    bool inductionTruncated = false;
};

struct LearnerState {
    std::vector<Rule> theory;
    std::map<std::int64_t, SpecializationSlot> slots;
    std::size_t batchIndex = 0;
    std::optional<std::set<Term>> carry;
    Counts cumulative;
    std::int64_t scoredPoints = 0;
    std::int64_t nextId = 1;
    std::int64_t version = 0;
    /// Batch index of every learning update, in order.
    std::vector<std::size_t> trainedOn;
    std::map<std::int64_t, std::size_t> smallWeightStreak;
};

/// Instrumentation points: before any learning uses a batch, and after each
/// learning update.
struct LearnerHooks {
    std::function<void(const LearnerState&, const BatchRecord&)> onPredict;
    std::function<void(const LearnerState&, std::size_t batch)> onUpdate;
};

LearnerState makeLearner(std::vector<Rule> theory, const LearnerConfig& config);

/// Predict with MAP inference on the current theory, score, then (when the
/// batch is annotated) induce new rules, update weights with the pre-induction
/// MAP state, and try specializations, in that order.
BatchRecord processBatch(LearnerState& state, Batch batch, const LearnerConfig& config,
                         const LearnerHooks& hooks = {});

struct RunResult {
    std::vector<Rule> theory;
    std::vector<BatchRecord> trace;
};

RunResult runStream(const std::vector<Batch>& stream, std::vector<Rule> theory, const LearnerConfig& config,
                    const LearnerHooks& hooks = {});

std::size_t theorySize(const std::vector<Rule>& theory);

}  // namespace wec
