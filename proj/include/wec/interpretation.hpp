#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "wec/logic.hpp"

namespace wec {

using Time = std::int64_t;

/// holdsAt(fluent, time).
struct HoldsFact {
    Term fluent;
    Time time = 0;

    Atom atom() const;
    friend bool operator==(const HoldsFact&, const HoldsFact&) = default;
    friend std::strong_ordering operator<=>(const HoldsFact& a, const HoldsFact& b);
};

using HoldsSet = std::set<HoldsFact>;

/// Read access to fluent values over time.
class HoldsQuery {
public:
    virtual ~HoldsQuery() = default;
    virtual bool holds(const Term& fluent, Time t) const = 0;
};

/// One mini-batch: observations over transition times [start, end] plus the
/// target fluents holding at start.
class Interpretation {
public:
    Interpretation() = default;
    Interpretation(Time start, Time end);

    Time start() const { return start_; }
    Time end() const { return end_; }
    /// Number of transition time points.
    std::size_t length() const { return static_cast<std::size_t>(end_ - start_ + 1); }

    /// The fact's last argument must be an integer time inside the window.
    void addObservation(const Atom& fact);
    /// Facts at t, sorted.
    const std::vector<Atom>& observationsAt(Time t) const;
    bool observed(const Atom& groundFact, Time t) const;

    std::set<Term> initialState;

private:
    Time start_ = 0;
    Time end_ = 0;
    std::vector<std::vector<Atom>> byTime_;
};

/// Boolean value sequence of one fluent instance over [start, end + 1].
struct FluentTrajectory {
    Term fluent;
    Time start = 0;
    std::vector<bool> values;

    bool at(Time t) const { return values.at(static_cast<std::size_t>(t - start)); }
};

/// Trajectories of all fluent instances of a window. Unknown fluents never hold.
class Trajectories : public HoldsQuery {
public:
    Trajectories() = default;
    Trajectories(Time start, Time end) : start_(start), end_(end) {}

    Time start() const { return start_; }
    Time end() const { return end_; }

    void set(FluentTrajectory traj);
    const FluentTrajectory* find(const Term& fluent) const;
    const std::map<Term, FluentTrajectory>& all() const { return trajs_; }

    bool holds(const Term& fluent, Time t) const override;
    /// holdsAt facts with time in [from, to].
    HoldsSet holdsSet(Time from, Time to) const;
    HoldsSet predicted() const { return holdsSet(start_ + 1, end_ + 1); }
    std::set<Term> valuesAt(Time t) const;

    friend bool operator==(const Trajectories& a, const Trajectories& b);

private:
    Time start_ = 0;
    Time end_ = 0;
    std::map<Term, FluentTrajectory> trajs_;
};

/// Annotation over [start, end + 1] under the closed-world assumption:
/// anything not listed is false.
class TrueState : public HoldsQuery {
public:
    TrueState() = default;
    TrueState(Time start, Time end) : start_(start), end_(end) {}

    Time start() const { return start_; }
    Time end() const { return end_; }

    void add(const HoldsFact& f);
    const HoldsSet& facts() const { return facts_; }
    /// Target fluent instances mentioned by the annotation.
    const std::set<Term>& fluents() const { return fluents_; }
    void addFluent(const Term& f) { fluents_.insert(f); }

    bool holds(const Term& fluent, Time t) const override;
    std::set<Term> valuesAt(Time t) const;
    /// Facts scored against predictions: times start + 1 .. end + 1.
    HoldsSet scored() const;

private:
    Time start_ = 0;
    Time end_ = 0;
    HoldsSet facts_;
    std::set<Term> fluents_;
};

}  // namespace wec
