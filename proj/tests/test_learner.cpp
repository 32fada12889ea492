#include <algorithm>

#include "doctest.h"
#include "support.hpp"
#include "wec/learner.hpp"
#include "wec/map_engine.hpp"

using namespace wec;
using namespace wec::testing;

namespace {

LearnerConfig syntheticConfig() {
    LearnerConfig c;
    c.modes = parseModes(defaultSyntheticModes());
    return c;
}

std::vector<std::string> clauses(const std::vector<Rule>& theory) {
    std::vector<std::string> out;
    for (const auto& r : theory) out.push_back(r.clauseStr());
    return out;
}

}  // namespace

TEST_CASE("a perfectly predicted batch only shrinks weights") {
    auto data = synthetic(60, 0.0, 5);
    auto batches = batchesOf(data, 60);
    REQUIRE(batches.size() == 1);
    auto theory = defaultSyntheticSpec().theory;
    LearnerState s = makeLearner(theory, syntheticConfig());
    auto rec = processBatch(s, batches[0], syntheticConfig());
    CHECK(rec.counts.fp == 0);
    CHECK(rec.counts.fn == 0);
    CHECK(rec.newRules == 0);
    CHECK(rec.specializations == 0);
    CHECK(clauses(s.theory) == clauses(theory));
    for (std::size_t k = 0; k < theory.size(); ++k) {
        Rule expect = theory[k];
        adagradUpdate(expect, 0, {});
        CHECK(s.theory[k].weight == expect.weight);
    }
}

TEST_CASE("the worked induction example as a batch") {
    auto x = example2();
    LearnerConfig config;
    config.modes = x.modes;
    LearnerState s = makeLearner(x.base.theory, config);
    Batch b{x.base.interp, x.truth};
    auto rec = processBatch(s, b, config);
    CHECK(rec.counts.fn == 5);
    REQUIRE(rec.newRules == 1);
    CHECK(s.theory.back().clauseStr() == "initiatedAt(a',T) :- happensAt(c,T), holdsAt(a,T)");
    // The prediction was made before the new rule existed.
    CHECK(rec.theoryVersion == 0);
    CHECK(s.version == 1);
}

TEST_CASE("a repeated batch is predicted no worse the second time") {
    for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
        auto data = synthetic(100, 0.0, seed);
        auto batches = batchesOf(data, 100);
        REQUIRE(batches.size() == 1);
        LearnerConfig config = syntheticConfig();
        LearnerState s = makeLearner({}, config);
        auto first = processBatch(s, batches[0], config);
        s.carry.reset();  // the second batch starts from the same state as the first
        auto second = processBatch(s, batches[0], config);
        CHECK(second.counts.fp + second.counts.fn <= first.counts.fp + first.counts.fn);
    }
}

TEST_CASE("runStream edge cases") {
    auto theory = defaultSyntheticSpec().theory;
    auto empty = runStream({}, theory, syntheticConfig());
    CHECK(empty.trace.empty());
    CHECK(clauses(empty.theory) == clauses(theory));

    auto batches = batchesOf(synthetic(40, 0.0, 3), 50);
    auto one = runStream(batches, {}, syntheticConfig());
    CHECK(one.trace.size() == 1);
}

TEST_CASE("an unannotated batch is predicted but not learned from") {
    auto data = synthetic(100, 0.0, 7);
    auto batches = makeBatches(data.records, std::nullopt, 50);
    LearnerConfig config = syntheticConfig();
    LearnerState s = makeLearner(defaultSyntheticSpec().theory, config);
    auto rec = processBatch(s, batches[0], config);
    CHECK_FALSE(rec.annotated);
    CHECK(s.version == 0);
    CHECK(s.trainedOn.empty());
    CHECK_FALSE(rec.predictions.empty());
    CHECK(s.theory[0].weight == 1.0);
}

TEST_CASE("every prediction comes from a theory that has not seen its batch") {
    auto batches = batchesOf(synthetic(1000, 0.05, 11), 50);
    LearnerConfig config = syntheticConfig();
    std::vector<std::vector<Rule>> before;
    std::vector<std::vector<Rule>> after;
    LearnerHooks hooks;
    hooks.onPredict = [&](const LearnerState& st, const BatchRecord& rec) {
        CHECK(std::find(st.trainedOn.begin(), st.trainedOn.end(), rec.batch) == st.trainedOn.end());
        CHECK(rec.theoryVersion == static_cast<std::int64_t>(st.trainedOn.size()));
        before.push_back(st.theory);
    };
    hooks.onUpdate = [&](const LearnerState& st, std::size_t batch) {
        CHECK(st.trainedOn.back() == batch);
        after.push_back(st.theory);
    };
    auto run = runStream(batches, {}, config, hooks);
    REQUIRE(before.size() == batches.size());
    REQUIRE(after.size() == batches.size());

    // Replay: the snapshot taken before each batch reproduces its predictions.
    std::optional<std::set<Term>> carry;
    for (std::size_t k = 0; k < batches.size(); ++k) {
        Interpretation i = batches[k].interp;
        if (carry) i.initialState = *carry;
        auto map = mapInference(before[k], i, scaleWeights(before[k], config.scaleK), batches[k].truth->fluents());
        CHECK(map.trajectories.predicted() == run.trace[k].predictions);
        carry = map.trajectories.valuesAt(i.end() + 1);
        if (k > 0) CHECK(clauses(before[k]) == clauses(after[k - 1]));
    }
}

TEST_CASE("trace counts match recomputation from stored predictions") {
    auto batches = batchesOf(synthetic(1000, 0.05, 13), 50);
    auto run = runStream(batches, {}, syntheticConfig());
    HoldsSet all;
    for (const auto& rec : run.trace) all.insert(rec.predictions.begin(), rec.predictions.end());
    auto recomputed = evaluatePredictions(batches, all);
    REQUIRE(recomputed.size() == run.trace.size());
    for (std::size_t k = 0; k < recomputed.size(); ++k) CHECK(recomputed[k] == run.trace[k].counts);
}

TEST_CASE("learning is deterministic") {
    auto batches = batchesOf(synthetic(800, 0.05, 17), 50);
    LearnerConfig config = syntheticConfig();
    auto a = runStream(batches, {}, config);
    config.threads = 4;
    auto b = runStream(batches, {}, config);
    REQUIRE(a.theory.size() == b.theory.size());
    for (std::size_t k = 0; k < a.theory.size(); ++k) {
        CHECK(formatRule(a.theory[k]) == formatRule(b.theory[k]));
        CHECK(a.theory[k].id == b.theory[k].id);
    }
    for (std::size_t k = 0; k < a.trace.size(); ++k) {
        CHECK(a.trace[k].counts == b.trace[k].counts);
        CHECK(a.trace[k].theorySize == b.trace[k].theorySize);
    }
}

TEST_CASE("annotated carry starts each batch from the true state") {
    auto batches = batchesOf(synthetic(300, 0.0, 19), 50);
    LearnerConfig config = syntheticConfig();
    config.carry = CarryState::Annotated;
    LearnerState s = makeLearner({}, config);
    for (const auto& b : batches) {
        processBatch(s, b, config);
        REQUIRE(s.carry.has_value());
        CHECK(*s.carry == b.truth->valuesAt(b.interp.end() + 1));
    }
}

TEST_CASE("pruning removes rules that stay near zero") {
    auto batches = batchesOf(synthetic(600, 0.0, 23), 50);
    LearnerConfig config = syntheticConfig();
    config.learnStructure = false;
    config.pruneThreshold = 0.5;
    config.pruneBatches = 2;
    auto theory = parseRules("0.01 initiatedAt(active(X),T) :- happensAt(walk(X),T), happensAt(never(X),T).\n"
                             "5 initiatedAt(active(X),T) :- happensAt(start(X),T).\n");
    auto run = runStream(batches, theory, config);
    REQUIRE(run.theory.size() == 1);
    CHECK(run.theory[0].clauseStr() == "initiatedAt(active(X),T) :- happensAt(start(X),T)");
}

TEST_CASE("theory size counts literals") {
    auto theory = defaultSyntheticSpec().theory;
    CHECK(theorySize(theory) == 7);
}
