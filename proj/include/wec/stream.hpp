#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wec/interpretation.hpp"
#include "wec/logic.hpp"

namespace wec {

/// One observation: a ground fact whose last argument is its time.
struct StreamRecord {
    Time time = 0;
    Atom fact;

    friend bool operator==(const StreamRecord&, const StreamRecord&) = default;
};

/// One mini-batch window with its annotation, if any.
struct Batch {
    Interpretation interp;
    std::optional<TrueState> truth;
};

/// Ground facts, one per statement ("happensAt(walk(id1),1)."). Throws
/// ParseError on syntax errors and non-ground facts, std::invalid_argument on
/// a non-integer or negative time argument or records out of time order.
std::vector<StreamRecord> parseStream(std::string_view text);

/// CSV rows "time,predicate,arg1,...,argN" mapping to predicate(arg1,...,argN,time).
/// Arguments may be compound terms; commas inside parentheses do not split.
/// Blank lines and lines starting with '#' are skipped. Malformed rows throw
/// ParseError with their line number.
std::vector<StreamRecord> parseStreamCsv(std::string_view text);

/// Ground holdsAt(F,T) facts.
std::vector<HoldsFact> parseAnnotation(std::string_view text);

std::string formatStream(const std::vector<StreamRecord>& records);
std::string formatAnnotation(const std::vector<HoldsFact>& facts);

/// Tiles the stream into windows of batchSize transition time points
/// starting at the earliest record or annotation time. A window [s, e] holds
/// observations at s..e; with an annotation its TrueState covers s..e+1 under
/// the closed-world assumption over every annotated fluent instance. The first
/// batch's initial state is the annotation at s.
std::vector<Batch> makeBatches(const std::vector<StreamRecord>& records,
                               const std::optional<std::vector<HoldsFact>>& annotation, std::size_t batchSize);

/// Reads a data file (".csv" selects CSV ingestion) and an optional
/// annotation file, then tiles them with makeBatches.
std::vector<Batch> loadStream(const std::string& dataPath, const std::optional<std::string>& annotationPath,
                              std::size_t batchSize);

std::string readFile(const std::string& path);

}  // namespace wec
