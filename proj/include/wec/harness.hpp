#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wec/learner.hpp"
#include "wec/stream.hpp"

namespace wec {

/// 2TP / (2TP + FP + FN); 0 when the denominator is 0.
double f1Score(std::int64_t tp, std::int64_t fp, std::int64_t fn);

struct EventRate {
    std::string functor;  // happensAt(functor(entity), t)
    double probability = 0.0;
};

struct SyntheticSpec {
    std::vector<Rule> theory;           // ground truth
    std::vector<std::string> entities;  // one target fluent instance per entity and fluent functor
    std::string fluentFunctor = "active";
    std::size_t length = 10000;         // time points 0 .. length-1
    std::vector<EventRate> events;
    double noiseRate = 0.0;
    std::uint64_t seed = 1;
};

struct SyntheticData {
    std::vector<StreamRecord> records;
    std::vector<HoldsFact> annotation;  // noisy labels, true facts only
    std::vector<HoldsFact> clean;       // crisp truth of the ground-truth theory
    std::set<Term> targets;
    std::size_t labels = 0;  // labelled (fluent, time) pairs
    std::size_t flips = 0;
};

/// Three rules over active(X): start initiates, stop terminates, ping with ack
/// initiates; two entities, plus walk/idle distractor events.
SyntheticSpec defaultSyntheticSpec();
std::string defaultSyntheticModes();

/// Events drawn independently per entity and time point; labels from
/// crispInfer over [0, length-1] (times 0..length) with an empty initial
/// state, each (fluent, time) label flipped with probability noiseRate.
SyntheticData generateSynthetic(const SyntheticSpec& spec);

/// Rules MAP inference applies whenever their body holds and nothing else
/// competes: initiations of positive weight, terminations of non-negative
/// weight (a zero-weight termination wins the fewer-true tie-break).
std::vector<Rule> firingRules(const std::vector<Rule>& theory);

/// F1 of crisp inference with firingRules(theory), over the whole stream as
/// one window, against the clean labels.
double crispHoldoutF1(const std::vector<Rule>& theory, const SyntheticData& data);

/// Per-batch counts of stored predictions against each batch's truth.
std::vector<Counts> evaluatePredictions(const std::vector<Batch>& batches, const HoldsSet& predictions);

/// "batch,tp,fp,fn,cum_err,cum_f1,infer_ms,learn_ms,theory_size". cum_err is
/// cumulative (FP + FN) per scored time point, cum_f1 the F1 of the
/// cumulative counts.
std::string traceCsv(const std::vector<BatchRecord>& trace);

/// CLI driver: modes train | infer | eval | synth. Returns the exit code.
int runExperiment(int argc, char** argv);

}  // namespace wec
