#include "wec/interpretation.hpp"

#include <algorithm>
#include <stdexcept>

namespace wec {

Atom HoldsFact::atom() const { return Atom(holdsAtSym(), {fluent, Term::integer(time)}); }

std::strong_ordering operator<=>(const HoldsFact& a, const HoldsFact& b) {
    if (auto c = a.time <=> b.time; c != 0) return c;
    return a.fluent <=> b.fluent;
}

Interpretation::Interpretation(Time start, Time end) : start_(start), end_(end) {
    if (end < start) throw std::invalid_argument("interpretation window end precedes start");
    byTime_.resize(length());
}

void Interpretation::addObservation(const Atom& fact) {
    if (fact.args.empty()) throw std::invalid_argument("observation '" + fact.str() + "' has no time argument");
    auto t = fact.args.back().asInteger();
    if (!t) throw std::invalid_argument("observation '" + fact.str() + "' has a non-integer time argument");
    if (*t < start_ || *t > end_)
        throw std::invalid_argument("observation '" + fact.str() + "' lies outside the window");
    if (!fact.ground()) throw std::invalid_argument("observation '" + fact.str() + "' is not ground");
    auto& slot = byTime_[static_cast<std::size_t>(*t - start_)];
    auto it = std::lower_bound(slot.begin(), slot.end(), fact);
    if (it == slot.end() || !(*it == fact)) slot.insert(it, fact);
}

const std::vector<Atom>& Interpretation::observationsAt(Time t) const {
    static const std::vector<Atom> empty;
    if (t < start_ || t > end_) return empty;
    return byTime_[static_cast<std::size_t>(t - start_)];
}

bool Interpretation::observed(const Atom& groundFact, Time t) const {
    const auto& slot = observationsAt(t);
    return std::binary_search(slot.begin(), slot.end(), groundFact);
}

void Trajectories::set(FluentTrajectory traj) {
    if (traj.start != start_ || traj.values.size() != static_cast<std::size_t>(end_ - start_ + 2))
        throw std::invalid_argument("trajectory does not cover the window");
    Term key = traj.fluent;
    trajs_.insert_or_assign(std::move(key), std::move(traj));
}

const FluentTrajectory* Trajectories::find(const Term& fluent) const {
    auto it = trajs_.find(fluent);
    return it == trajs_.end() ? nullptr : &it->second;
}

bool Trajectories::holds(const Term& fluent, Time t) const {
    if (t < start_ || t > end_ + 1) return false;
    const auto* tr = find(fluent);
    return tr && tr->at(t);
}

HoldsSet Trajectories::holdsSet(Time from, Time to) const {
    HoldsSet out;
    for (const auto& [f, tr] : trajs_)
        for (Time t = std::max(from, start_); t <= std::min(to, end_ + 1); ++t)
            if (tr.at(t)) out.insert({f, t});
    return out;
}

std::set<Term> Trajectories::valuesAt(Time t) const {
    std::set<Term> out;
    for (const auto& [f, tr] : trajs_)
        if (t >= start_ && t <= end_ + 1 && tr.at(t)) out.insert(f);
    return out;
}

bool operator==(const Trajectories& a, const Trajectories& b) {
    return a.start_ == b.start_ && a.end_ == b.end_ && a.holdsSet(a.start_, a.end_ + 1) == b.holdsSet(b.start_, b.end_ + 1);
}

void TrueState::add(const HoldsFact& f) {
    if (f.time < start_ || f.time > end_ + 1)
        throw std::invalid_argument("annotation '" + f.atom().str() + "' lies outside the window");
    facts_.insert(f);
    fluents_.insert(f.fluent);
}

bool TrueState::holds(const Term& fluent, Time t) const { return facts_.count({fluent, t}) > 0; }

std::set<Term> TrueState::valuesAt(Time t) const {
    std::set<Term> out;
    for (const auto& f : facts_)
        if (f.time == t) out.insert(f.fluent);
    return out;
}

HoldsSet TrueState::scored() const {
    HoldsSet out;
    for (const auto& f : facts_)
        if (f.time > start_) out.insert(f);
    return out;
}

}  // namespace wec
