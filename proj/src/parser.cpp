#include "wec/parser.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <optional>

namespace wec {

ParseError::ParseError(const std::string& what, int line, int column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

namespace {

enum class Tok {
    Ident,     // lower-case initial: constant, functor, predicate, keyword
    Variable,  // upper-case or '_' initial
    Number,
    LParen,
    RParen,
    Comma,
    Dot,
    Neck,
    Plus,
    Minus,
    Hash,
    End,
};

struct Token {
    Tok kind;
    std::string text;
    int line;
    int column;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skipSpace();
            Token t{Tok::End, "", line_, col_};
            if (pos_ >= src_.size()) {
                out.push_back(t);
                return out;
            }
            char c = src_[pos_];
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                t.kind = std::isupper(static_cast<unsigned char>(c)) || c == '_' ? Tok::Variable : Tok::Ident;
                while (pos_ < src_.size() && isIdentChar(src_[pos_])) t.text += advance();
            } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                       (c == '-' && pos_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
                t.kind = Tok::Number;
                t.text += advance();
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) t.text += advance();
                if (pos_ + 1 < src_.size() && src_[pos_] == '.' &&
                    std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
                    t.text += advance();
                    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                        t.text += advance();
                }
                if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
                    std::size_t save = pos_;
                    int saveCol = col_;
                    std::string exp(1, advance());
                    if (pos_ < src_.size() && (src_[pos_] == '-' || src_[pos_] == '+')) exp += advance();
                    if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                            exp += advance();
                        t.text += exp;
                    } else {
                        pos_ = save;
                        col_ = saveCol;
                    }
                }
            } else if (src_.substr(pos_, 2) == ":-" || src_.substr(pos_, 2) == "<-") {
                t.kind = Tok::Neck;
                t.text = std::string(src_.substr(pos_, 2));
                advance();
                advance();
            } else if (src_.substr(pos_, 3) == "\xE2\x86\x90") {  // ←
                t.kind = Tok::Neck;
                t.text = "<-";
                pos_ += 3;
                ++col_;
            } else {
                switch (c) {
                    case '(': t.kind = Tok::LParen; break;
                    case ')': t.kind = Tok::RParen; break;
                    case ',': t.kind = Tok::Comma; break;
                    case '.': t.kind = Tok::Dot; break;
                    case '+': t.kind = Tok::Plus; break;
                    case '-': t.kind = Tok::Minus; break;
                    case '#': t.kind = Tok::Hash; break;
                    default: throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
                }
                t.text = std::string(1, advance());
            }
            out.push_back(std::move(t));
        }
    }

private:
    static bool isIdentChar(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
    }

    char advance() {
        char c = src_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    void skipSpace() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '%') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class Parser {
public:
    explicit Parser(std::string_view src) : toks_(Lexer(src).run()) {}

    bool atEnd() const { return peek().kind == Tok::End; }
    const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }

    const Token& expect(Tok kind, const char* what) {
        if (peek().kind != kind) fail(std::string("expected ") + what);
        return toks_[pos_++];
    }

    bool accept(Tok kind) {
        if (peek().kind != kind) return false;
        ++pos_;
        return true;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        const Token& t = peek();
        std::string near = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
        throw ParseError(msg + " near " + near, t.line, t.column);
    }

    Term term() {
        const Token& t = peek();
        switch (t.kind) {
            case Tok::Variable: ++pos_; return Term::variable(t.text);
            case Tok::Number: {
                ++pos_;
                if (t.text.find_first_of(".eE") != std::string::npos) fail("non-integer constant '" + t.text + "'");
                return Term::constant(t.text);
            }
            case Tok::Ident: {
                ++pos_;
                if (!accept(Tok::LParen)) return Term::constant(t.text);
                std::vector<Term> args;
                do args.push_back(term());
                while (accept(Tok::Comma));
                expect(Tok::RParen, "')'");
                return Term::compound(t.text, std::move(args));
            }
            default: fail("expected a term");
        }
    }

    Atom atom() {
        const Token& t = expect(Tok::Ident, "a predicate name");
        Atom a;
        a.predicate = Symbol(t.text);
        if (accept(Tok::LParen)) {
            do a.args.push_back(term());
            while (accept(Tok::Comma));
            expect(Tok::RParen, "')'");
        }
        checkArity(a, t);
        return a;
    }

    Literal literal() {
        Literal l;
        if (peek().kind == Tok::Ident && peek().text == "not" && peek(1).kind == Tok::Ident) {
            ++pos_;
            l.negated = true;
        }
        l.atom = atom();
        return l;
    }

    ModeTerm modeTerm() {
        const Token& t = peek();
        auto role = [&]() -> std::optional<Placemarker> {
            switch (t.kind) {
                case Tok::Plus: return Placemarker::Input;
                case Tok::Minus: return Placemarker::Output;
                case Tok::Hash: return Placemarker::Constant;
                default: return std::nullopt;
            }
        }();
        if (role) {
            ++pos_;
            if (peek().kind != Tok::Ident) fail("malformed placemarker: expected a type name");
            return ModeTerm::placemarker(*role, toks_[pos_++].text);
        }
        if (t.kind == Tok::Number) {
            ++pos_;
            return ModeTerm::constant(t.text);
        }
        if (t.kind != Tok::Ident) fail("expected a mode template term");
        ++pos_;
        if (!accept(Tok::LParen)) return ModeTerm::constant(t.text);
        std::vector<ModeTerm> args;
        do args.push_back(modeTerm());
        while (accept(Tok::Comma));
        expect(Tok::RParen, "')'");
        return ModeTerm::compound(t.text, std::move(args));
    }

private:
    void checkArity(const Atom& a, const Token& at) {
        auto [it, inserted] = arity_.emplace(a.predicate, a.arity());
        if (!inserted && it->second != a.arity())
            throw ParseError("predicate " + std::string(a.predicate.name()) + " used with arity " +
                                 std::to_string(a.arity()) + " but earlier with arity " + std::to_string(it->second),
                             at.line, at.column);
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::map<Symbol, std::size_t> arity_;
};

}  // namespace

std::vector<Rule> parseRules(std::string_view text, double defaultWeight, std::int64_t firstId) {
    Parser p(text);
    std::vector<Rule> rules;
    while (!p.atEnd()) {
        const auto startLine = p.peek().line, startCol = p.peek().column;
        Rule r;
        r.id = firstId + static_cast<std::int64_t>(rules.size());
        r.weight = defaultWeight;
        if (p.peek().kind == Tok::Number) {
            const auto& t = p.expect(Tok::Number, "weight");
            r.weight = std::stod(t.text);
        }
        r.head = p.atom();
        if (p.accept(Tok::Neck)) {
            do r.body.push_back(p.literal());
            while (p.accept(Tok::Comma));
        }
        p.expect(Tok::Dot, "'.' ending the rule");
        try {
            validateRule(r);
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what(), startLine, startCol);
        }
        rules.push_back(std::move(r));
    }
    return rules;
}

std::vector<ModeDeclaration> parseModes(std::string_view text) {
    Parser p(text);
    std::vector<ModeDeclaration> modes;
    while (!p.atEnd()) {
        const Token& kw = p.expect(Tok::Ident, "modeh or modeb");
        ModeDeclaration m;
        if (kw.text == "modeh")
            m.kind = ModeDeclaration::Kind::Head;
        else if (kw.text == "modeb")
            m.kind = ModeDeclaration::Kind::Body;
        else
            throw ParseError("expected modeh or modeb, got '" + kw.text + "'", kw.line, kw.column);
        p.expect(Tok::LParen, "'('");
        if (p.peek().kind == Tok::Ident && p.peek().text == "not" && p.peek(1).kind == Tok::Ident) {
            if (m.kind == ModeDeclaration::Kind::Head)
                throw ParseError("head modes cannot be negated", kw.line, kw.column);
            p.expect(Tok::Ident, "not");
            m.negated = true;
        }
        const Token& pred = p.expect(Tok::Ident, "a predicate name");
        m.predicate = Symbol(pred.text);
        p.expect(Tok::LParen, "'('");
        do m.args.push_back(p.modeTerm());
        while (p.accept(Tok::Comma));
        p.expect(Tok::RParen, "')'");
        p.expect(Tok::RParen, "')'");
        p.expect(Tok::Dot, "'.'");
        if (m.args.back().kind != ModeTerm::Kind::Placemarker || m.args.back().role == Placemarker::Output)
            throw ParseError("the last template argument must be a +time or #time placemarker", kw.line, kw.column);
        if (m.kind == ModeDeclaration::Kind::Head &&
            (m.predicate != initiatedAtSym() && m.predicate != terminatedAtSym()))
            throw ParseError("head modes must be over initiatedAt or terminatedAt", kw.line, kw.column);
        if (m.negated) {
            std::function<bool(const ModeTerm&)> hasOutput = [&](const ModeTerm& t) {
                if (t.kind == ModeTerm::Kind::Placemarker) return t.role == Placemarker::Output;
                for (const auto& a : t.args)
                    if (hasOutput(a)) return true;
                return false;
            };
            for (const auto& a : m.args)
                if (hasOutput(a))
                    throw ParseError("negated body modes cannot carry -output placemarkers", kw.line, kw.column);
        }
        modes.push_back(std::move(m));
    }
    return modes;
}

std::vector<Atom> parseFacts(std::string_view text) {
    Parser p(text);
    std::vector<Atom> facts;
    while (!p.atEnd()) {
        const auto line = p.peek().line, col = p.peek().column;
        Atom a = p.atom();
        p.expect(Tok::Dot, "'.' ending the fact");
        if (!a.ground()) throw ParseError("fact '" + a.str() + "' is not ground", line, col);
        facts.push_back(std::move(a));
    }
    return facts;
}

Term parseTerm(std::string_view text) {
    Parser p(text);
    Term t = p.term();
    if (!p.atEnd()) p.fail("trailing input after term");
    return t;
}

Atom parseAtom(std::string_view text) {
    Parser p(text);
    Atom a = p.atom();
    p.accept(Tok::Dot);
    if (!p.atEnd()) p.fail("trailing input after atom");
    return a;
}

std::string formatWeight(double w) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, w);
    std::string s(buf, end);
    // Keep a decimal point so the text is unmistakably a weight, not a constant.
    if (s.find_first_of(".e") == std::string::npos) s += ".0";
    return s;
}

std::string formatRule(const Rule& r) { return formatWeight(r.weight) + " " + r.clauseStr() + "."; }

std::string formatRules(const std::vector<Rule>& rules) {
    std::string out;
    for (const auto& r : rules) out += formatRule(r) + "\n";
    return out;
}

std::string formatModes(const std::vector<ModeDeclaration>& modes) {
    std::string out;
    for (const auto& m : modes) out += m.str() + ".\n";
    return out;
}

std::string formatFact(const Atom& a) { return a.str() + "."; }

}  // namespace wec
