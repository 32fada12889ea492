#include <cmath>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "wec/crisp.hpp"
#include "wec/weights.hpp"

using namespace wec;
using namespace wec::testing;

namespace {

class Fixed : public HoldsQuery {
public:
    std::set<std::pair<Term, Time>> on;
    bool holds(const Term& f, Time t) const override { return on.count({f, t}) > 0; }
};

Rule fresh(double w) {
    Rule r = parseRules("initiatedAt(a,T) :- happensAt(b,T).").at(0);
    r.weight = w;
    return r;
}

Fixed randomState(std::mt19937_64& rng, const Instance& x) {
    Fixed s;
    std::bernoulli_distribution coin(0.5);
    for (const auto& f : x.fluents)
        for (Time t = x.interp.start(); t <= x.interp.end() + 1; ++t)
            if (coin(rng)) s.on.insert({f, t});
    return s;
}

// Groundings of a propositional rule counted literal by literal.
std::int64_t naiveTrueGroundings(const Rule& r, const HoldsQuery& s, const Interpretation& i) {
    std::int64_t n = 0;
    for (Time t = i.start(); t <= i.end(); ++t) {
        bool body = true;
        for (const auto& l : r.body) {
            bool v;
            if (l.atom.predicate == holdsAtSym()) {
                v = s.holds(l.atom.args.front(), t);
            } else {
                Atom a = l.atom;
                a.args.back() = Term::integer(t);
                v = i.observed(a, t);
            }
            body = body && v != l.negated;
        }
        bool next = s.holds(r.fluent(), t + 1);
        if (body && (r.kind() == HeadKind::Initiation) == next) ++n;
    }
    return n;
}

}  // namespace

TEST_CASE("AdaGrad step from zero") {
    Rule r = fresh(0.0);
    // C = 1 + sqrt(4) = 3; w - 2/3 = -0.6667; shrink by 0.01/3.
    CHECK(adagradUpdate(r, 2, {}) == doctest::Approx(-0.6633333333333333).epsilon(1e-12));
    CHECK(r.stats.gradSqSum == 4.0);
}

TEST_CASE("AdaGrad with no gradient") {
    Rule zero = fresh(0.0);
    CHECK(adagradUpdate(zero, 0, {}) == 0.0);
    CHECK_FALSE(std::signbit(zero.weight));
    Rule half = fresh(0.5);
    CHECK(adagradUpdate(half, 0, {}) == doctest::Approx(0.49).epsilon(1e-12));
}

TEST_CASE("AdaGrad rejects invalid hyperparameters") {
    Rule r = fresh(0.0);
    CHECK_THROWS(adagradUpdate(r, 1, {0.0, 0.01, 1.0}));
    CHECK_THROWS(adagradUpdate(r, 1, {1.0, -0.01, 1.0}));
    CHECK_THROWS(adagradUpdate(r, 1, {1.0, 0.01, -1.0}));
}

TEST_CASE("AdaGrad sign, history and adaptivity properties") {
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> w(-3, 3), hist(0, 50);
    std::uniform_int_distribution<int> g(-6, 6);
    for (int rep = 0; rep < 10000; ++rep) {
        Rule r = fresh(w(rng));
        r.stats.gradSqSum = hist(rng);
        double before = r.weight, sq = r.stats.gradSqSum;
        int dg = g(rng);
        adagradUpdate(r, dg, {});
        if (dg > 0) CHECK(r.weight < before);
        if (dg < 0) CHECK(r.weight > before);
        if (dg == 0) CHECK(std::abs(r.weight) <= std::abs(before));
        CHECK(r.stats.gradSqSum >= sq);

        Rule a = fresh(before), b = fresh(before);
        a.stats.gradSqSum = sq;
        b.stats.gradSqSum = sq + 100;
        adagradUpdate(a, dg, {});
        adagradUpdate(b, dg, {});
        CHECK(std::abs(b.weight - before) <= std::abs(a.weight - before) + 1e-15);
    }
}

TEST_CASE("repeated zero gradients shrink toward zero by lambda*eta/C") {
    Rule r = fresh(0.2);
    r.stats.gradSqSum = 9.0;  // C = 4
    for (int k = 0; k < 100; ++k) {
        double before = r.weight;
        adagradUpdate(r, 0, {});
        CHECK(r.weight == doctest::Approx(std::max(0.0, before - 0.01 / 4.0)));
    }
    CHECK(r.weight == 0.0);
}

TEST_CASE("true grounding definitions") {
    auto x = example1();
    Fixed s;
    s.on.insert({Term::constant("a"), 3});
    // rule 1 fires at 2 and a holds at 3
    CHECK(countTrueGroundings(x.theory[0], s, x.interp) == 1);
    // rule 2 fires at 5; with an empty state a is false at 6
    CHECK(countTrueGroundings(x.theory[1], Fixed{}, x.interp) == 1);
    CHECK(countTrueGroundings(x.theory[0], Fixed{}, x.interp) == 0);
    auto c = countGroundings(x.theory[0], Fixed{}, s, x.interp);
    CHECK(c.consistent == 1);
    CHECK(c.inconsistent == 0);
}

TEST_CASE("grounding counts match a naive count") {
    std::mt19937_64 rng(59);
    for (int rep = 0; rep < 500; ++rep) {
        Instance x = randomInstance(rng);
        Fixed s = randomState(rng, x);
        for (const auto& r : x.theory) CHECK(countTrueGroundings(r, s, x.interp, x.fluents) == naiveTrueGroundings(r, s, x.interp));
    }
}

TEST_CASE("batch update with identical states leaves only the shrink") {
    std::mt19937_64 rng(61);
    for (int rep = 0; rep < 100; ++rep) {
        Instance x = randomInstance(rng);
        Fixed s = randomState(rng, x);
        auto deltas = batchWeightUpdate(x.theory, s, s, x.interp, {}, x.fluents);
        for (const auto& [id, dg] : deltas) CHECK(dg == 0);
    }
}

TEST_CASE("false positives demote, false negatives promote") {
    auto x = example1(0.5, 0.5, 0.5);
    // Rule 3 (d at 8) makes a hold at 9..10 in the inferred state; truth has a only at 3..5.
    auto inferred = crispInfer(x.theory, x.interp);
    Fixed truth;
    for (Time t = 3; t <= 5; ++t) truth.on.insert({Term::constant("a"), t});
    auto theory = x.theory;
    auto deltas = batchWeightUpdate(theory, inferred, truth, x.interp, {});
    CHECK(deltas.at(3) > 0);
    CHECK(theory[2].weight < 0.5);

    // Inferred state misses a at 3..5: rule 1 could have prevented it.
    Fixed empty;
    theory = x.theory;
    deltas = batchWeightUpdate(theory, empty, truth, x.interp, {});
    CHECK(deltas.at(1) < 0);
    CHECK(theory[0].weight > 0.5);
}
