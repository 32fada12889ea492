#include "wec/harness.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "wec/crisp.hpp"
#include "wec/parser.hpp"

namespace wec {

double f1Score(std::int64_t tp, std::int64_t fp, std::int64_t fn) {
    const std::int64_t denom = 2 * tp + fp + fn;
    return denom == 0 ? 0.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
}

SyntheticSpec defaultSyntheticSpec() {
    SyntheticSpec s;
    s.theory = parseRules("1 initiatedAt(active(X),T) :- happensAt(start(X),T).\n"
                          "1 terminatedAt(active(X),T) :- happensAt(stop(X),T).\n"
                          "1 initiatedAt(active(X),T) :- happensAt(ping(X),T), happensAt(ack(X),T).\n");
    s.entities = {"id1", "id2"};
    s.events = {{"start", 0.05}, {"stop", 0.05}, {"ping", 0.2}, {"ack", 0.2}, {"walk", 0.15}, {"idle", 0.15}};
    return s;
}

std::string defaultSyntheticModes() {
    return "modeh(initiatedAt(active(+id),+time)).\n"
           "modeh(terminatedAt(active(+id),+time)).\n"
           "modeb(happensAt(start(+id),+time)).\n"
           "modeb(happensAt(stop(+id),+time)).\n"
           "modeb(happensAt(ping(+id),+time)).\n"
           "modeb(happensAt(ack(+id),+time)).\n"
           "modeb(happensAt(walk(+id),+time)).\n"
           "modeb(happensAt(idle(+id),+time)).\n";
}

SyntheticData generateSynthetic(const SyntheticSpec& spec) {
    if (!(spec.noiseRate >= 0.0 && spec.noiseRate <= 1.0)) throw std::invalid_argument("noise rate must lie in [0,1]");
    if (spec.length == 0) throw std::invalid_argument("synthetic stream needs at least one time point");
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    SyntheticData out;
    const Time last = static_cast<Time>(spec.length) - 1;
    Interpretation whole(0, last);
    for (Time t = 0; t <= last; ++t)
        for (const auto& id : spec.entities)
            for (const auto& ev : spec.events)
                if (u(rng) < ev.probability) {
                    Atom a(happensAtSym(), {Term::compound(ev.functor, {Term::constant(id)}), Term::integer(t)});
                    whole.addObservation(a);
                    out.records.push_back({t, std::move(a)});
                }
    for (const auto& id : spec.entities) out.targets.insert(Term::compound(spec.fluentFunctor, {Term::constant(id)}));

    auto truth = crispInfer(spec.theory, whole, out.targets);
    for (Time t = 0; t <= last + 1; ++t)
        for (const auto& f : out.targets) {
            bool v = truth.holds(f, t);
            if (v) out.clean.push_back({f, t});
            ++out.labels;
            if (u(rng) < spec.noiseRate) {
                v = !v;
                ++out.flips;
            }
            if (v) out.annotation.push_back({f, t});
        }
    return out;
}

std::vector<Rule> firingRules(const std::vector<Rule>& theory) {
    std::vector<Rule> out;
    for (const auto& r : theory)
        if (r.weight > 0 || (r.weight == 0 && r.kind() == HeadKind::Termination)) out.push_back(r);
    return out;
}

double crispHoldoutF1(const std::vector<Rule>& theory, const SyntheticData& data) {
    std::vector<Rule> positive = firingRules(theory);
    Time last = 0;
    for (const auto& h : data.clean) last = std::max(last, h.time);
    for (const auto& r : data.records) last = std::max(last, r.time + 1);
    Interpretation whole(0, last - 1);
    for (const auto& r : data.records) whole.addObservation(r.fact);
    TrueState truth(0, last - 1);
    for (const auto& f : data.targets) truth.addFluent(f);
    for (const auto& h : data.clean) truth.add(h);
    Counts c = scorePredictions(crispInfer(positive, whole, data.targets), truth);
    return f1Score(c.tp, c.fp, c.fn);
}

std::vector<Counts> evaluatePredictions(const std::vector<Batch>& batches, const HoldsSet& predictions) {
    std::vector<Counts> out;
    for (const auto& b : batches) {
        Counts c;
        if (b.truth) {
            const TrueState& truth = *b.truth;
            std::set<Term> fluents = truth.fluents();
            for (const auto& h : truth.facts()) fluents.insert(h.fluent);
            for (const auto& h : predictions)
                if (h.time > truth.start() && h.time <= truth.end() + 1) fluents.insert(h.fluent);
            for (Time t = truth.start() + 1; t <= truth.end() + 1; ++t)
                for (const auto& f : fluents) {
                    bool p = predictions.count({f, t}) > 0, a = truth.holds(f, t);
                    if (p && a) ++c.tp;
                    else if (p) ++c.fp;
                    else if (a) ++c.fn;
                }
        }
        out.push_back(c);
    }
    return out;
}

namespace {

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

}  // namespace

std::string traceCsv(const std::vector<BatchRecord>& trace) {
    std::string out = "batch,tp,fp,fn,cum_err,cum_f1,infer_ms,learn_ms,theory_size\n";
    Counts cum;
    std::int64_t points = 0;
    for (const auto& r : trace) {
        cum += r.counts;
        if (r.annotated) points += r.end - r.start + 1;
        double err = points ? static_cast<double>(cum.fp + cum.fn) / static_cast<double>(points) : 0.0;
        out += std::to_string(r.batch) + "," + std::to_string(r.counts.tp) + "," + std::to_string(r.counts.fp) + "," +
               std::to_string(r.counts.fn) + "," + fixed(err, 6) + "," + fixed(f1Score(cum.tp, cum.fp, cum.fn), 6) +
               "," + fixed(r.inferMs, 3) + "," + fixed(r.learnMs, 3) + "," + std::to_string(r.theorySize) + "\n";
    }
    return out;
}

namespace {

void writeFile(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << text;
}

struct Options {
    std::string mode;
    std::string data, annotation, modes, rules, predictions;
    std::size_t batchSize = 50;
    double eta = 1.0, lambda = 0.01, adagradDelta = 1.0, hoeffdingDelta = 0.01;
    std::int64_t kScale = kDefaultScale;
    std::size_t maxBodyLength = 8;
    std::string carry = "inferred";
    std::optional<double> pruneThreshold;
    std::uint64_t seed = 1;
    std::string outDir = ".";
    std::size_t threads = 1;
    std::size_t length = 10000;
    double noise = 0.05;
    bool weightsOnly = false;
};

std::string summary(const std::vector<std::pair<std::string, std::string>>& kv) {
    std::string out;
    for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
    return out;
}

std::string predictionText(const std::vector<BatchRecord>& trace) {
    std::string out;
    for (const auto& r : trace)
        for (const auto& h : r.predictions) out += formatFact(h.atom()) + "\n";
    return out;
}

int runTrainOrInfer(const Options& o, bool learn) {
    std::optional<std::string> annotation;
    if (!o.annotation.empty()) annotation = o.annotation;
    auto batches = loadStream(o.data, annotation, o.batchSize);
    std::vector<Rule> theory;
    if (!o.rules.empty()) theory = parseRules(readFile(o.rules), learn ? 0.01 : 1.0);
    if (!learn && theory.empty()) throw std::invalid_argument("infer mode needs --rules");

    LearnerConfig cfg;
    cfg.adagrad = {o.eta, o.lambda, o.adagradDelta};
    cfg.hoeffdingDelta = o.hoeffdingDelta;
    cfg.scaleK = o.kScale;
    cfg.induction.maxBodyLength = o.maxBodyLength;
    cfg.induction.scaleK = o.kScale;
    if (!o.modes.empty()) cfg.modes = parseModes(readFile(o.modes));
    cfg.carry = o.carry == "annotated" ? CarryState::Annotated : CarryState::Inferred;
    cfg.pruneThreshold = o.pruneThreshold;
    cfg.threads = o.threads;
    cfg.learnStructure = !o.weightsOnly;

    std::vector<BatchRecord> trace;
    LearnerState state = makeLearner(theory, cfg);
    for (auto b : batches) {
        if (!learn) b.truth.reset();
        trace.push_back(processBatch(state, b, cfg));
    }
    if (!learn && annotation) {
        auto counts = evaluatePredictions(batches, [&] {
            HoldsSet all;
            for (const auto& r : trace) all.insert(r.predictions.begin(), r.predictions.end());
            return all;
        }());
        for (std::size_t k = 0; k < trace.size(); ++k) {
            trace[k].counts = counts[k];
            trace[k].annotated = batches[k].truth.has_value();
        }
    }

    std::filesystem::path dir(o.outDir);
    std::filesystem::create_directories(dir);
    writeFile(dir / "trace.csv", traceCsv(trace));
    writeFile(dir / "predictions.lp", predictionText(trace));
    if (learn) writeFile(dir / "theory.lp", formatRules(state.theory));

    Counts total;
    double inferMs = 0, learnMs = 0;
    for (const auto& r : trace) {
        total += r.counts;
        inferMs += r.inferMs;
        learnMs += r.learnMs;
    }
    writeFile(dir / "summary.txt",
              summary({{"mode", learn ? "train" : "infer"},
                       {"batches", std::to_string(trace.size())},
                       {"tp", std::to_string(total.tp)},
                       {"fp", std::to_string(total.fp)},
                       {"fn", std::to_string(total.fn)},
                       {"f1", fixed(f1Score(total.tp, total.fp, total.fn), 6)},
                       {"rules", std::to_string(learn ? state.theory.size() : theory.size())},
                       {"theory_size", std::to_string(theorySize(learn ? state.theory : theory))},
                       {"infer_ms", fixed(inferMs, 3)},
                       {"learn_ms", fixed(learnMs, 3)}}));
    std::cout << "batches=" << trace.size() << " f1=" << fixed(f1Score(total.tp, total.fp, total.fn), 6) << "\n";
    return 0;
}

int runEval(const Options& o) {
    if (o.annotation.empty() || o.predictions.empty()) throw std::invalid_argument("eval mode needs --annotation and --predictions");
    auto batches = loadStream(o.data, o.annotation, o.batchSize);
    HoldsSet predicted;
    for (const auto& h : parseAnnotation(readFile(o.predictions))) predicted.insert(h);
    auto counts = evaluatePredictions(batches, predicted);
    std::vector<BatchRecord> trace;
    Counts total;
    for (std::size_t k = 0; k < batches.size(); ++k) {
        BatchRecord r;
        r.batch = k;
        r.start = batches[k].interp.start();
        r.end = batches[k].interp.end();
        r.annotated = batches[k].truth.has_value();
        r.counts = counts[k];
        total += counts[k];
        trace.push_back(r);
    }
    std::filesystem::path dir(o.outDir);
    std::filesystem::create_directories(dir);
    writeFile(dir / "eval.csv", traceCsv(trace));
    writeFile(dir / "eval_summary.txt", summary({{"mode", "eval"},
                                                 {"batches", std::to_string(trace.size())},
                                                 {"tp", std::to_string(total.tp)},
                                                 {"fp", std::to_string(total.fp)},
                                                 {"fn", std::to_string(total.fn)},
                                                 {"f1", fixed(f1Score(total.tp, total.fp, total.fn), 6)}}));
    std::cout << "f1=" << fixed(f1Score(total.tp, total.fp, total.fn), 6) << "\n";
    return 0;
}

int runSynth(const Options& o) {
    SyntheticSpec spec = defaultSyntheticSpec();
    spec.length = o.length;
    spec.noiseRate = o.noise;
    spec.seed = o.seed;
    auto data = generateSynthetic(spec);
    std::filesystem::path dir(o.outDir);
    std::filesystem::create_directories(dir);
    writeFile(dir / "data.lp", formatStream(data.records));
    writeFile(dir / "annotation.lp", formatAnnotation(data.annotation));
    writeFile(dir / "clean_annotation.lp", formatAnnotation(data.clean));
    writeFile(dir / "modes.lp", defaultSyntheticModes());
    writeFile(dir / "ground_truth.lp", formatRules(spec.theory));
    std::cout << "records=" << data.records.size() << " labels=" << data.labels << " flips=" << data.flips << "\n";
    return 0;
}

}  // namespace

int runExperiment(int argc, char** argv) {
    CLI::App app{"Online learning of weighted Event Calculus theories"};
    Options o;
    app.add_option("--mode", o.mode, "train | infer | eval | synth")
        ->required()
        ->check(CLI::IsMember({"train", "infer", "eval", "synth"}));
    app.add_option("--data", o.data, "observation stream (facts, or .csv rows time,predicate,args...)");
    app.add_option("--annotation", o.annotation, "holdsAt annotation (closed world)");
    app.add_option("--modes", o.modes, "mode declarations");
    app.add_option("--rules", o.rules, "weighted rules: initial theory (train) or model (infer)");
    app.add_option("--predictions", o.predictions, "stored predictions (eval)");
    app.add_option("--batch-size", o.batchSize, "time points per mini-batch")->check(CLI::PositiveNumber);
    app.add_option("--eta", o.eta, "AdaGrad learning rate")->check(CLI::PositiveNumber);
    app.add_option("--lambda", o.lambda, "regularization")->check(CLI::NonNegativeNumber);
    app.add_option("--adagrad-delta", o.adagradDelta, "AdaGrad divisor guard")->check(CLI::NonNegativeNumber);
    app.add_option("--hoeffding-delta", o.hoeffdingDelta, "Hoeffding confidence")->check(CLI::Range(1e-12, 1.0 - 1e-12));
    app.add_option("--k-scale", o.kScale, "weight scaling constant K")->check(CLI::PositiveNumber);
    app.add_option("--max-body-length", o.maxBodyLength, "longest induced body");
    app.add_option("--carry-state", o.carry, "initial state of the next batch")
        ->check(CLI::IsMember({"inferred", "annotated"}));
    app.add_option("--prune-threshold", o.pruneThreshold, "remove rules whose |w| stays below this");
    app.add_option("--seed", o.seed, "seed for synthetic data");
    app.add_option("--out-dir", o.outDir, "report directory");
    app.add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--length", o.length, "synthetic stream length (synth)")->check(CLI::PositiveNumber);
    app.add_option("--noise", o.noise, "synthetic label noise rate (synth)")->check(CLI::Range(0.0, 1.0));
    app.add_flag("--weights-only", o.weightsOnly, "learn weights only, no structure");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }
    try {
        if (o.mode == "synth") return runSynth(o);
        if (o.data.empty()) throw std::invalid_argument("--data is required for mode " + o.mode);
        if (o.mode == "eval") return runEval(o);
        if (o.mode == "train" && o.annotation.empty()) throw std::invalid_argument("train mode needs --annotation");
        return runTrainOrInfer(o, o.mode == "train");
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace wec
