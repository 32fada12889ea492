#pragma once

// Shared fixtures for the unit and acceptance tests: the worked examples and
// a random instance generator within the restricted rule language.

#include <random>
#include <set>
#include <string>
#include <vector>

#include "wec/harness.hpp"
#include "wec/interpretation.hpp"
#include "wec/logic.hpp"
#include "wec/parser.hpp"
#include "wec/stream.hpp"

namespace wec::testing {

inline Atom fact(const std::string& text) { return parseAtom(text); }

struct Instance {
    std::vector<Rule> theory;
    Interpretation interp;
    std::set<Term> fluents;
};

// Rules 1-3 over fluent a with events b@2, c@5, d@8 on window [1,9].
inline Instance example1(double w1 = 2.0, double w2 = 1.0, double w3 = -1.0) {
    Instance x;
    x.theory = parseRules("initiatedAt(a,T) :- happensAt(b,T).\n"
                          "terminatedAt(a,T) :- happensAt(c,T).\n"
                          "initiatedAt(a,T) :- happensAt(d,T).\n");
    x.theory[0].weight = w1;
    x.theory[1].weight = w2;
    x.theory[2].weight = w3;
    x.interp = Interpretation(1, 9);
    for (auto s : {"happensAt(b,2)", "happensAt(c,5)", "happensAt(d,8)"}) x.interp.addObservation(fact(s));
    x.fluents = {Term::constant("a")};
    return x;
}

// The first worked example plus c@1 and e@1,3,5, with a true over 3..5 and a' over 6..10.
struct Example2 {
    Instance base;
    TrueState truth;
    std::vector<ModeDeclaration> modes;
};

inline Example2 example2() {
    Example2 x;
    x.base = example1();
    for (auto s : {"happensAt(c,1)", "happensAt(e,1)", "happensAt(e,3)", "happensAt(e,5)"})
        x.base.interp.addObservation(fact(s));
    x.base.fluents.insert(Term::constant("a'"));
    x.truth = TrueState(1, 9);
    x.truth.addFluent(Term::constant("a"));
    x.truth.addFluent(Term::constant("a'"));
    for (Time t = 3; t <= 5; ++t) x.truth.add({Term::constant("a"), t});
    for (Time t = 6; t <= 10; ++t) x.truth.add({Term::constant("a'"), t});
    x.modes = parseModes("modeh(initiatedAt(#fluent,+time)).\n"
                         "modeb(happensAt(#event,+time)).\n"
                         "modeb(holdsAt(#fluent,+time)).\n");
    return x;
}

struct RandomSpec {
    int maxTime = 10;
    int maxRules = 6;
    int fluents = 2;
    int events = 4;
    int minWeight = -5;
    int maxWeight = 5;
    double eventRate = 0.35;
    bool holdsLiterals = true;
};

inline std::string fluentName(int k) { return std::string(1, static_cast<char>('a' + k)); }

inline Instance randomInstance(std::mt19937_64& rng, const RandomSpec& spec = {}) {
    std::uniform_int_distribution<int> len(1, spec.maxTime), nrules(0, spec.maxRules),
        fl(0, spec.fluents - 1), ev(0, spec.events - 1), weight(spec.minWeight, spec.maxWeight), nbody(0, 2);
    std::bernoulli_distribution coin(0.5), rare(0.2), event(spec.eventRate);

    Instance x;
    std::string text;
    int n = nrules(rng);
    for (int r = 0; r < n; ++r) {
        std::string head = (coin(rng) ? "initiatedAt(" : "terminatedAt(") + fluentName(fl(rng)) + ",T)";
        std::vector<std::string> body;
        int k = nbody(rng);
        for (int b = 0; b < k; ++b)
            body.push_back((rare(rng) ? "not " : "") + std::string("happensAt(e") + std::to_string(ev(rng)) + ",T)");
        if (spec.holdsLiterals && rare(rng) + rare(rng) > 0)
            body.push_back((coin(rng) ? "not " : "") + std::string("holdsAt(") + fluentName(fl(rng)) + ",T)");
        text += std::to_string(weight(rng)) + " " + head;
        for (std::size_t b = 0; b < body.size(); ++b) text += (b ? ", " : " :- ") + body[b];
        text += ".\n";
    }
    x.theory = parseRules(text);
    int L = len(rng);
    x.interp = Interpretation(1, L);
    for (int t = 1; t <= L; ++t)
        for (int e = 0; e < spec.events; ++e)
            if (event(rng)) x.interp.addObservation(fact("happensAt(e" + std::to_string(e) + "," + std::to_string(t) + ")"));
    for (int f = 0; f < spec.fluents; ++f) {
        x.fluents.insert(Term::constant(fluentName(f)));
        if (rare(rng)) x.interp.initialState.insert(Term::constant(fluentName(f)));
    }
    return x;
}

inline std::set<Time> timesOf(const Trajectories& tr, const Term& fluent) {
    std::set<Time> out;
    if (const auto* f = tr.find(fluent))
        for (std::size_t k = 0; k < f->values.size(); ++k)
            if (f->values[k]) out.insert(f->start + static_cast<Time>(k));
    return out;
}

// The default synthetic stream at a given length, noise and seed.
inline SyntheticData synthetic(std::size_t length, double noise, std::uint64_t seed) {
    SyntheticSpec spec = defaultSyntheticSpec();
    spec.length = length;
    spec.noiseRate = noise;
    spec.seed = seed;
    return generateSynthetic(spec);
}

inline std::vector<Batch> batchesOf(const SyntheticData& d, std::size_t batchSize) {
    return makeBatches(d.records, d.annotation, batchSize);
}

}  // namespace wec::testing
