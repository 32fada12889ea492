#include "wec/stream.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "wec/parser.hpp"

namespace wec {

namespace {

Time recordTime(const Atom& a) {
    if (a.args.empty()) throw std::invalid_argument("fact without a time argument: " + a.str());
    auto t = a.args.back().asInteger();
    if (!t) throw std::invalid_argument("non-integer time argument: " + a.str());
    if (*t < 0) throw std::invalid_argument("negative time: " + a.str());
    return *t;
}

void requireSorted(const std::vector<StreamRecord>& out) {
    for (std::size_t k = 1; k < out.size(); ++k)
        if (out[k].time < out[k - 1].time)
            throw std::invalid_argument("stream records out of time order at " + out[k].fact.str());
}

std::vector<std::string> splitTopLevel(std::string_view line) {
    std::vector<std::string> cells;
    std::string cur;
    int depth = 0;
    for (char c : line) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0) {
            cells.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    cells.push_back(cur);
    for (auto& s : cells) {
        auto b = s.find_first_not_of(" \t\r");
        auto e = s.find_last_not_of(" \t\r");
        s = b == std::string::npos ? "" : s.substr(b, e - b + 1);
    }
    return cells;
}

}  // namespace

std::vector<StreamRecord> parseStream(std::string_view text) {
    std::vector<StreamRecord> out;
    for (auto& a : parseFacts(text)) {
        Time t = recordTime(a);
        out.push_back({t, std::move(a)});
    }
    requireSorted(out);
    return out;
}

std::vector<StreamRecord> parseStreamCsv(std::string_view text) {
    std::vector<StreamRecord> out;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        auto cells = splitTopLevel(line);
        if (cells.size() < 2 || cells[0].empty() || cells[1].empty())
            throw ParseError("expected time,predicate,args...", lineNo, 1);
        Term time = parseTerm(cells[0]);
        if (!time.asInteger() || *time.asInteger() < 0) throw ParseError("bad time '" + cells[0] + "'", lineNo, 1);
        std::vector<Term> args;
        for (std::size_t k = 2; k < cells.size(); ++k) args.push_back(parseTerm(cells[k]));
        args.push_back(time);
        Atom a(cells[1], std::move(args));
        if (!a.ground()) throw ParseError("non-ground fact " + a.str(), lineNo, 1);
        Time t = recordTime(a);
        out.push_back({t, std::move(a)});
    }
    requireSorted(out);
    return out;
}

std::vector<HoldsFact> parseAnnotation(std::string_view text) {
    std::vector<HoldsFact> out;
    for (const auto& a : parseFacts(text)) {
        if (a.predicate != holdsAtSym() || a.arity() != 2)
            throw std::invalid_argument("annotation facts must be holdsAt(F,T): " + a.str());
        out.push_back({a.args[0], recordTime(a)});
    }
    return out;
}

std::string formatStream(const std::vector<StreamRecord>& records) {
    std::string out;
    for (const auto& r : records) out += formatFact(r.fact) + "\n";
    return out;
}

std::string formatAnnotation(const std::vector<HoldsFact>& facts) {
    std::string out;
    for (const auto& f : facts) out += formatFact(f.atom()) + "\n";
    return out;
}

std::vector<Batch> makeBatches(const std::vector<StreamRecord>& records,
                               const std::optional<std::vector<HoldsFact>>& annotation, std::size_t batchSize) {
    if (batchSize == 0) throw std::invalid_argument("batch size must be positive");
    requireSorted(records);
    std::optional<Time> first, last;
    auto extend = [&](Time lo, Time hi) {
        first = first ? std::min(*first, lo) : lo;
        last = last ? std::max(*last, hi) : hi;
    };
    for (const auto& r : records) extend(r.time, r.time);
    std::set<Term> targets;
    if (annotation)
        for (const auto& h : *annotation) {
            // An annotation at t is scored by the window whose last transition is t - 1.
            extend(h.time, h.time - 1);
            targets.insert(h.fluent);
        }
    std::vector<Batch> out;
    if (!first) return out;

    const Time B = static_cast<Time>(batchSize);
    std::size_t rec = 0;
    for (Time s = *first; s <= *last; s += B) {
        Time e = std::min(s + B - 1, *last);
        Batch b{Interpretation(s, e), std::nullopt};
        for (; rec < records.size() && records[rec].time <= e; ++rec) b.interp.addObservation(records[rec].fact);
        if (annotation) {
            TrueState ts(s, e);
            for (const auto& f : targets) ts.addFluent(f);
            for (const auto& h : *annotation)
                if (h.time >= s && h.time <= e + 1) ts.add(h);
            if (out.empty())
                for (const auto& f : ts.valuesAt(s)) b.interp.initialState.insert(f);
            b.truth = std::move(ts);
        }
        out.push_back(std::move(b));
    }
    return out;
}

std::string readFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<Batch> loadStream(const std::string& dataPath, const std::optional<std::string>& annotationPath,
                              std::size_t batchSize) {
    std::string text = readFile(dataPath);
    bool csv = dataPath.size() >= 4 && dataPath.compare(dataPath.size() - 4, 4, ".csv") == 0;
    auto records = csv ? parseStreamCsv(text) : parseStream(text);
    std::optional<std::vector<HoldsFact>> annotation;
    if (annotationPath) annotation = parseAnnotation(readFile(*annotationPath));
    return makeBatches(records, annotation, batchSize);
}

}  // namespace wec
