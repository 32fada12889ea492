#include "wec/learner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <stdexcept>

#include "wec/map_engine.hpp"

namespace wec {

namespace {

using Clock = std::chrono::steady_clock;

double msSince(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::set<Term> scoredFluents(const Trajectories& predicted, const TrueState& truth) {
    std::set<Term> out = truth.fluents();
    for (const auto& [f, _] : predicted.all()) out.insert(f);
    for (const auto& h : truth.facts()) out.insert(h.fluent);
    return out;
}

std::vector<BottomRule> buildBottoms(const std::vector<Atom>& seeds, const Interpretation& i,
                                     const LearnerConfig& config, const Trajectories& state,
                                     const std::set<Term>& domain) {
    auto one = [&](const Atom& seed) -> std::optional<BottomRule> {
        try {
            return generateBottomRule(seed, i, config.modes, state, domain);
        } catch (const std::invalid_argument&) {
            return std::nullopt;  // no head mode for this fluent
        }
    };
    std::vector<std::optional<BottomRule>> built(seeds.size());
    const std::size_t workers = std::max<std::size_t>(1, std::min(config.threads, seeds.size()));
    if (workers == 1) {
        for (std::size_t k = 0; k < seeds.size(); ++k) built[k] = one(seeds[k]);
    } else {
        std::vector<std::future<void>> jobs;
        for (std::size_t w = 0; w < workers; ++w)
            jobs.push_back(std::async(std::launch::async, [&, w] {
                for (std::size_t k = w; k < seeds.size(); k += workers) built[k] = one(seeds[k]);
            }));
        for (auto& j : jobs) j.get();
    }
    std::vector<BottomRule> out;
    for (auto& b : built)
        if (b) out.push_back(std::move(*b));
    return compressBottomRules(out);
}

}  // namespace

Counts scorePredictions(const Trajectories& predicted, const TrueState& truth) {
    Counts c;
    for (Time t = truth.start() + 1; t <= truth.end() + 1; ++t)
        for (const auto& f : scoredFluents(predicted, truth)) {
            bool p = predicted.holds(f, t), a = truth.holds(f, t);
            if (p && a) ++c.tp;
            else if (p) ++c.fp;
            else if (a) ++c.fn;
        }
    return c;
}

std::size_t theorySize(const std::vector<Rule>& theory) {
    std::size_t n = 0;
    for (const auto& r : theory) n += literalCount(r);
    return n;
}

LearnerState makeLearner(std::vector<Rule> theory, const LearnerConfig& config) {
    LearnerState s;
    for (auto& r : theory) validateRule(r);
    for (const auto& r : theory) s.nextId = std::max(s.nextId, r.id + 1);
    s.theory = std::move(theory);
    for (const auto& r : s.theory)
        s.slots.emplace(r.id, makeSlot(r, config.induction.newRuleWeight, s.nextId));
    return s;
}

BatchRecord processBatch(LearnerState& state, Batch batch, const LearnerConfig& config, const LearnerHooks& hooks) {
    Interpretation& interp = batch.interp;
    if (state.carry) interp.initialState = *state.carry;

    BatchRecord rec;
    rec.batch = state.batchIndex;
    rec.start = interp.start();
    rec.end = interp.end();
    rec.annotated = batch.truth.has_value();
    rec.theoryVersion = state.version;

    auto t0 = Clock::now();
    std::set<Term> extra;
    if (batch.truth) extra = batch.truth->fluents();
    MAPResult map = mapInference(state.theory, interp, scaleWeights(state.theory, config.scaleK), extra);
    rec.predictions = map.trajectories.predicted();
    rec.inferMs = msSince(t0);

    if (batch.truth) {
        rec.counts = scorePredictions(map.trajectories, *batch.truth);
        state.cumulative += rec.counts;
        state.scoredPoints += static_cast<std::int64_t>(interp.length());
    }
    rec.theorySize = theorySize(state.theory);
    if (hooks.onPredict) hooks.onPredict(state, rec);

    if (batch.truth) {
        auto t1 = Clock::now();
        const TrueState& truth = *batch.truth;
        std::set<Term> domain = scoredFluents(map.trajectories, truth);

        if (config.learnStructure && !config.modes.empty()) {
            auto mistakes = findMistakes(map.trajectories, truth);
            if (!mistakes.empty()) {
                auto seeds = abduceHeads(mistakes, truth);
                auto bottoms = buildBottoms(seeds, interp, config, map.trajectories, domain);
                if (!bottoms.empty()) {
                    auto induced = induceNewRules(state.theory, bottoms, interp, truth, config.induction, domain);
                    rec.inductionTruncated = induced.truncated;
                    for (auto& r : induced.rules) {
                        r.id = state.nextId++;
                        state.slots.emplace(r.id, makeSlot(r, config.induction.newRuleWeight, state.nextId));
                        state.theory.push_back(std::move(r));
                        ++rec.newRules;
                    }
                }
            }
        }

        // Existing rules learn from the state they predicted; rules induced on
        // this batch from a MAP state that includes them.
        std::vector<Rule> fresh(state.theory.end() - static_cast<std::ptrdiff_t>(rec.newRules), state.theory.end());
        state.theory.resize(state.theory.size() - rec.newRules);
        batchWeightUpdate(state.theory, map.trajectories, truth, interp, config.adagrad, domain);
        if (!fresh.empty()) {
            std::vector<Rule> extended = state.theory;
            extended.insert(extended.end(), fresh.begin(), fresh.end());
            MAPResult after = mapInference(extended, interp, scaleWeights(extended, config.scaleK), extra);
            batchWeightUpdate(fresh, after.trajectories, truth, interp, config.adagrad, domain);
            state.theory.insert(state.theory.end(), fresh.begin(), fresh.end());
        }

        if (config.learnStructure) {
            std::set<std::int64_t> retired;
            for (auto& r : state.theory) {
                auto it = state.slots.find(r.id);
                if (it == state.slots.end() || it->second.children.empty()) continue;
                auto& slot = it->second;
                updateChildWeights(slot, map.trajectories, truth, interp, config.adagrad, domain);
                updateGainStats(slot, r, map.trajectories, truth, interp, domain);
                auto decision = trySpecialize(slot, config.hoeffdingDelta);
                if (!decision.best) continue;
                Rule child = slot.children[*decision.best].rule;
                bool dup = std::any_of(state.theory.begin(), state.theory.end(),
                                       [&](const Rule& o) { return o.id != r.id && thetaEquivalent(o, child); });
                state.slots.erase(it);
                if (dup) {
                    // Already present: the parent is superseded.
                    retired.insert(r.id);
                    ++rec.specializations;
                    continue;
                }
                state.slots.emplace(child.id, makeSlot(child, config.induction.newRuleWeight, state.nextId));
                r = std::move(child);
                ++rec.specializations;
            }
            std::erase_if(state.theory, [&](const Rule& r) { return retired.count(r.id) > 0; });
        }

        if (config.pruneThreshold) {
            std::vector<Rule> kept;
            for (auto& r : state.theory) {
                auto& streak = state.smallWeightStreak[r.id];
                streak = std::abs(r.weight) < *config.pruneThreshold ? streak + 1 : 0;
                if (streak >= config.pruneBatches) {
                    state.slots.erase(r.id);
                    state.smallWeightStreak.erase(r.id);
                    ++rec.pruned;
                    continue;
                }
                kept.push_back(std::move(r));
            }
            state.theory = std::move(kept);
        }

        ++state.version;
        state.trainedOn.push_back(state.batchIndex);
        rec.learnMs = msSince(t1);
        rec.theorySize = theorySize(state.theory);
        if (hooks.onUpdate) hooks.onUpdate(state, state.batchIndex);
    }

    if (config.carry == CarryState::Annotated && batch.truth) state.carry = batch.truth->valuesAt(interp.end() + 1);
    else state.carry = map.trajectories.valuesAt(interp.end() + 1);
    ++state.batchIndex;
    return rec;
}

RunResult runStream(const std::vector<Batch>& stream, std::vector<Rule> theory, const LearnerConfig& config,
                    const LearnerHooks& hooks) {
    LearnerState state = makeLearner(std::move(theory), config);
    RunResult out;
    for (const auto& b : stream) out.trace.push_back(processBatch(state, b, config, hooks));
    out.theory = std::move(state.theory);
    return out;
}

}  // namespace wec
