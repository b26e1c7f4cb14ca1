#include "stratlog/parser.hpp"

#include <cctype>
#include <charconv>
#include <cstring>

#include "stratlog/errors.hpp"

namespace stratlog {

namespace {

struct Tok {
    enum class T {
        Ident,
        Number,
        String,
        IriRef,
        LParen,
        RParen,
        Comma,
        Dot,
        Colon,
        Implies,
        Wedge,
        Cmp,
        Plus,
        Minus,
        Star,
        Slash,
        End
    };
    T t = T::End;
    std::string text;
    double num = 0.0;
    std::size_t pos = 0;
};

bool identStart(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool identChar(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

std::vector<Tok> lex(std::string_view src) {
    std::vector<Tok> out;
    std::size_t i = 0;
    const std::size_t n = src.size();
    auto push = [&](Tok::T t, std::string text, std::size_t pos, double num = 0.0) {
        out.push_back(Tok{t, std::move(text), num, pos});
    };
    while (i < n) {
        char c = src[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            ++i;
            continue;
        }
        if (c == '#') break;  // comment to end of line
        // UTF-8 wedge
        if (static_cast<unsigned char>(c) == 0xE2 && i + 2 < n &&
            static_cast<unsigned char>(src[i + 1]) == 0x88 &&
            static_cast<unsigned char>(src[i + 2]) == 0xA7) {
            push(Tok::T::Wedge, "∧", i);
            i += 3;
            continue;
        }
        if (c == ':') {
            if (i + 1 < n && src[i + 1] == '-') {
                push(Tok::T::Implies, ":-", i);
                i += 2;
            } else {
                push(Tok::T::Colon, ":", i);
                ++i;
            }
            continue;
        }
        if (c == '(') { push(Tok::T::LParen, "(", i); ++i; continue; }
        if (c == ')') { push(Tok::T::RParen, ")", i); ++i; continue; }
        if (c == ',') { push(Tok::T::Comma, ",", i); ++i; continue; }
        if (c == '+') { push(Tok::T::Plus, "+", i); ++i; continue; }
        if (c == '*') { push(Tok::T::Star, "*", i); ++i; continue; }
        if (c == '/') { push(Tok::T::Slash, "/", i); ++i; continue; }
        if (c == '-') { push(Tok::T::Minus, "-", i); ++i; continue; }
        if (c == '.') {
            push(Tok::T::Dot, ".", i);
            ++i;
            continue;
        }
        if (c == '>' || c == '=') {
            if (c == '>' && i + 1 < n && src[i + 1] == '=') {
                push(Tok::T::Cmp, ">=", i);
                i += 2;
            } else {
                push(Tok::T::Cmp, std::string(1, c), i);
                ++i;
            }
            continue;
        }
        if (c == '!') {
            if (i + 1 < n && src[i + 1] == '=') {
                push(Tok::T::Cmp, "!=", i);
                i += 2;
                continue;
            }
            throw SyntaxError("unexpected '!' at column " + std::to_string(i + 1));
        }
        if (c == '<') {
            if (i + 1 < n && src[i + 1] == '=') {
                push(Tok::T::Cmp, "<=", i);
                i += 2;
                continue;
            }
            // <...> IRI reference when a '>' closes it before whitespace
            std::size_t j = i + 1;
            while (j < n && src[j] != '>' && src[j] != ' ' && src[j] != '\t') ++j;
            if (j < n && src[j] == '>' && j > i + 1) {
                push(Tok::T::IriRef, std::string(src.substr(i + 1, j - i - 1)), i);
                i = j + 1;
                continue;
            }
            push(Tok::T::Cmp, "<", i);
            ++i;
            continue;
        }
        if (c == '"') {
            std::string s;
            std::size_t j = i + 1;
            while (j < n && src[j] != '"') {
                if (src[j] == '\\' && j + 1 < n) {
                    s.push_back(src[j + 1]);
                    j += 2;
                } else {
                    s.push_back(src[j]);
                    ++j;
                }
            }
            if (j >= n) throw SyntaxError("unterminated string literal");
            push(Tok::T::String, std::move(s), i);
            i = j + 1;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            double v = 0.0;
            const char* begin = src.data() + i;
            const char* end = src.data() + n;
            auto [ptr, ec] = std::from_chars(begin, end, v);
            if (ec != std::errc()) throw SyntaxError("bad number at column " + std::to_string(i + 1));
            // keep a trailing rule dot out of the number ("20." at end of fact)
            if (ptr > begin && ptr[-1] == '.') --ptr;
            push(Tok::T::Number, std::string(begin, ptr), i, v);
            std::from_chars(begin, ptr, v);
            out.back().num = v;
            i += static_cast<std::size_t>(ptr - begin);
            continue;
        }
        if (identStart(c) || c == '?') {
            std::size_t j = i;
            if (c == '?') ++j;
            while (j < n) {
                if (identChar(src[j])) {
                    ++j;
                } else if (src[j] == ':' && j + 1 < n && identChar(src[j + 1]) &&
                           !(j + 1 < n && src[j + 1] == '-')) {
                    ++j;  // glued colon, e.g. rdf:type
                } else {
                    break;
                }
            }
            push(Tok::T::Ident, std::string(src.substr(i, j - i)), i);
            i = j;
            continue;
        }
        throw SyntaxError(std::string("unexpected character '") + c + "' at column " +
                          std::to_string(i + 1));
    }
    push(Tok::T::End, "", n);
    return out;
}

bool sameKw(const std::string& text, const char* kw) {
    if (text.size() != std::strlen(kw)) return false;
    for (std::size_t i = 0; i < text.size(); ++i)
        if (std::tolower(static_cast<unsigned char>(text[i])) != kw[i]) return false;
    return true;
}

bool varText(const std::string& t) {
    if (t.empty()) return false;
    if (t[0] == '?') return true;
    return std::isupper(static_cast<unsigned char>(t[0])) != 0;
}

std::string varName(const std::string& t) { return t[0] == '?' ? t.substr(1) : t; }

class RuleParser {
public:
    explicit RuleParser(std::string_view text) : toks_(lex(text)) {}

    Rule parse() {
        Rule r;
        if (at(Tok::T::Ident) && toks_[i_ + 1].t == Tok::T::Colon) {
            r.id = cur().text;
            i_ += 2;
        }
        r.head = parseAtom();
        expect(Tok::T::Implies, "':-'");
        if (at(Tok::T::Ident) && sameKw(cur().text, "aggregate")) {
            parseAggregateBody(r);
        } else {
            parseElement(r);
            while (atConj()) {
                ++i_;
                parseElement(r);
            }
        }
        expect(Tok::T::Dot, "'.'");
        if (!at(Tok::T::End)) throw SyntaxError("trailing input after '.'");
        validateRule(r);
        return r;
    }

private:
    const Tok& cur() const { return toks_[i_]; }
    bool at(Tok::T t) const { return cur().t == t; }
    bool atConj() const {
        return at(Tok::T::Wedge) || at(Tok::T::Comma) ||
               (at(Tok::T::Ident) && sameKw(cur().text, "and"));
    }
    void expect(Tok::T t, const char* what) {
        if (!at(t)) throw SyntaxError(std::string("expected ") + what + stateSuffix());
        ++i_;
    }
    std::string stateSuffix() const {
        return cur().t == Tok::T::End ? " at end of rule"
                                      : " near '" + cur().text + "'";
    }

    Term parseTerm() {
        if (at(Tok::T::Ident)) {
            std::string t = cur().text;
            ++i_;
            if (varText(t)) return Term::variable(varName(t));
            return Term::constant(Value::iri(t));
        }
        if (at(Tok::T::IriRef)) {
            std::string t = cur().text;
            ++i_;
            return Term::constant(Value::iri(t));
        }
        if (at(Tok::T::Number)) {
            double v = cur().num;
            ++i_;
            return Term::constant(Value::num(v));
        }
        if (at(Tok::T::Minus) && toks_[i_ + 1].t == Tok::T::Number) {
            double v = -toks_[i_ + 1].num;
            i_ += 2;
            return Term::constant(Value::num(v));
        }
        if (at(Tok::T::String)) {
            std::string t = cur().text;
            ++i_;
            return Term::constant(Value::str(t));
        }
        throw SyntaxError("expected term" + stateSuffix());
    }

    Atom parseAtom() {
        if (!at(Tok::T::Ident) && !at(Tok::T::IriRef))
            throw SyntaxError("expected predicate" + stateSuffix());
        // predicate position is always a constant, capitalization included
        std::string predText = cur().text;
        if (cur().t == Tok::T::Ident && predText[0] == '?')
            throw SyntaxError("predicate '" + predText + "' must be a constant");
        ++i_;
        expect(Tok::T::LParen, "'('");
        Term first = parseTerm();
        if (at(Tok::T::Comma)) {
            ++i_;
            Term second = parseTerm();
            expect(Tok::T::RParen, "')'");
            return Atom{Value::iri(predText), std::move(first), std::move(second)};
        }
        expect(Tok::T::RParen, "')'");
        // unary atom: canonical binary form (subject, rdf:type, Class)
        return Atom{typePredicate(), std::move(first), Term::constant(Value::iri(predText))};
    }

    void parseElement(Rule& r) {
        if (at(Tok::T::Ident) && sameKw(cur().text, "not")) {
            ++i_;
            r.negative.push_back(parseAtom());
            return;
        }
        if (at(Tok::T::Ident) && sameKw(cur().text, "bind")) {
            ++i_;
            expect(Tok::T::LParen, "'('");
            Builtin b;
            b.kind = Builtin::Kind::Bind;
            b.expr = parseExpr();
            if (!at(Tok::T::Ident) || !sameKw(cur().text, "as"))
                throw SyntaxError("expected AS in BIND" + stateSuffix());
            ++i_;
            if (!at(Tok::T::Ident) || !varText(cur().text))
                throw SyntaxError("expected target variable in BIND" + stateSuffix());
            b.target = varName(cur().text);
            ++i_;
            expect(Tok::T::RParen, "')'");
            r.builtins.push_back(std::move(b));
            return;
        }
        if (at(Tok::T::Ident) && sameKw(cur().text, "comp")) {
            ++i_;
            expect(Tok::T::LParen, "'('");
            Builtin b;
            b.kind = Builtin::Kind::Comp;
            b.left = parseTerm();
            expect(Tok::T::Comma, "','");
            if (!at(Tok::T::Cmp)) throw SyntaxError("expected comparator" + stateSuffix());
            b.cmp = comparatorFrom(cur().text);
            ++i_;
            expect(Tok::T::Comma, "','");
            b.right = parseTerm();
            expect(Tok::T::RParen, "')'");
            r.builtins.push_back(std::move(b));
            return;
        }
        r.positive.push_back(parseAtom());
    }

    void parseAggregateBody(Rule& r) {
        ++i_;  // aggregate
        expect(Tok::T::LParen, "'('");
        r.positive.push_back(parseAtom());
        while (atConj()) {
            ++i_;
            r.positive.push_back(parseAtom());
        }
        expect(Tok::T::RParen, "')'");
        AggregateSpec agg;
        if (!at(Tok::T::Ident) || !sameKw(cur().text, "on"))
            throw SyntaxError("expected ON in aggregate rule" + stateSuffix());
        ++i_;
        agg.groupVar = parseVar("group variable");
        if (!at(Tok::T::Ident) || !sameKw(cur().text, "with"))
            throw SyntaxError("expected WITH in aggregate rule" + stateSuffix());
        ++i_;
        if (!at(Tok::T::Ident)) throw SyntaxError("expected aggregate operator" + stateSuffix());
        auto op = aggOpFromText(cur().text);
        if (!op) throw AggregateError("unknown aggregate operator " + cur().text);
        agg.op = *op;
        ++i_;
        expect(Tok::T::LParen, "'('");
        agg.aggVar = parseVar("aggregated variable");
        expect(Tok::T::RParen, "')'");
        if (!at(Tok::T::Ident) || !sameKw(cur().text, "as"))
            throw SyntaxError("expected AS in aggregate rule" + stateSuffix());
        ++i_;
        agg.resultVar = parseVar("result variable");
        r.aggregate = std::move(agg);
    }

    std::string parseVar(const char* what) {
        if (!at(Tok::T::Ident) || !varText(cur().text))
            throw SyntaxError(std::string("expected ") + what + stateSuffix());
        std::string v = varName(cur().text);
        ++i_;
        return v;
    }

    static Comparator comparatorFrom(const std::string& t) {
        if (t == ">") return Comparator::Gt;
        if (t == ">=") return Comparator::Ge;
        if (t == "=") return Comparator::Eq;
        if (t == "<=") return Comparator::Le;
        if (t == "<") return Comparator::Lt;
        return Comparator::Ne;
    }

    BindExpr parseExpr() { return parseAddSub(); }

    BindExpr parseAddSub() {
        BindExpr left = parseMulDiv();
        while (at(Tok::T::Plus) || at(Tok::T::Minus)) {
            BindExpr::Op op = at(Tok::T::Plus) ? BindExpr::Op::Add : BindExpr::Op::Sub;
            ++i_;
            BindExpr right = parseMulDiv();
            BindExpr combined;
            combined.op = op;
            combined.args = {std::move(left), std::move(right)};
            left = std::move(combined);
        }
        return left;
    }

    BindExpr parseMulDiv() {
        BindExpr left = parseUnary();
        while (at(Tok::T::Star) || at(Tok::T::Slash)) {
            BindExpr::Op op = at(Tok::T::Star) ? BindExpr::Op::Mul : BindExpr::Op::Div;
            ++i_;
            BindExpr right = parseUnary();
            BindExpr combined;
            combined.op = op;
            combined.args = {std::move(left), std::move(right)};
            left = std::move(combined);
        }
        return left;
    }

    BindExpr parseUnary() {
        if (at(Tok::T::Minus)) {
            ++i_;
            BindExpr e;
            e.op = BindExpr::Op::Neg;
            e.args.push_back(parseUnary());
            return e;
        }
        if (at(Tok::T::Ident) && sameKw(cur().text, "abs")) {
            ++i_;
            expect(Tok::T::LParen, "'('");
            BindExpr e;
            e.op = BindExpr::Op::Abs;
            e.args.push_back(parseExpr());
            expect(Tok::T::RParen, "')'");
            return e;
        }
        if (at(Tok::T::LParen)) {
            ++i_;
            BindExpr e = parseExpr();
            expect(Tok::T::RParen, "')'");
            return e;
        }
        if (at(Tok::T::Number)) {
            BindExpr e;
            e.leaf = Term::constant(Value::num(cur().num));
            ++i_;
            return e;
        }
        if (at(Tok::T::Ident) && varText(cur().text)) {
            BindExpr e;
            e.leaf = Term::variable(varName(cur().text));
            ++i_;
            return e;
        }
        throw SyntaxError("expected variable or number in BIND expression" + stateSuffix());
    }

    std::vector<Tok> toks_;
    std::size_t i_ = 0;
};

std::vector<std::string_view> splitLines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            lines.push_back(text.substr(start));
            break;
        }
        lines.push_back(text.substr(start, nl - start));
        start = nl + 1;
    }
    return lines;
}

bool blankOrComment(std::string_view line) {
    for (char c : line) {
        if (c == '#') return true;
        if (c != ' ' && c != '\t' && c != '\r') return false;
    }
    return true;
}

Value constValue(const Term& t, std::size_t lineNo) {
    if (t.isVar()) throw SyntaxError("variable " + t.var + " in fact", lineNo);
    return t.value;
}

Fact parseFactLine(std::string_view line, FactFormat fmt, std::size_t lineNo) {
    auto toks = lex(line);
    if (fmt == FactFormat::Auto)
        fmt = toks[0].t == Tok::T::IriRef ? FactFormat::Triples : FactFormat::Functional;
    if (fmt == FactFormat::Triples) {
        std::size_t i = 0;
        auto want = [&](Tok::T t, const char* what) -> const Tok& {
            if (toks[i].t != t) throw SyntaxError(std::string("expected ") + what, lineNo);
            return toks[i++];
        };
        const Tok& s = want(Tok::T::IriRef, "<subject>");
        const Tok& p = want(Tok::T::IriRef, "<predicate>");
        Fact f;
        f.subject = Value::iri(s.text);
        f.pred = Value::iri(p.text);
        if (toks[i].t == Tok::T::IriRef) {
            f.object = Value::iri(toks[i++].text);
        } else if (toks[i].t == Tok::T::Number) {
            f.object = Value::num(toks[i++].num);
        } else if (toks[i].t == Tok::T::Minus && toks[i + 1].t == Tok::T::Number) {
            f.object = Value::num(-toks[i + 1].num);
            i += 2;
        } else if (toks[i].t == Tok::T::String) {
            f.object = Value::str(toks[i++].text);
        } else {
            throw SyntaxError("expected object term", lineNo);
        }
        want(Tok::T::Dot, "'.'");
        if (toks[i].t != Tok::T::End) throw SyntaxError("trailing input after '.'", lineNo);
        return f;
    }
    // functional form
    std::size_t i = 0;
    if (toks[i].t != Tok::T::Ident && toks[i].t != Tok::T::IriRef)
        throw SyntaxError("expected predicate", lineNo);
    std::string pred = toks[i].text;
    if (toks[i].t == Tok::T::Ident && pred[0] == '?')
        throw SyntaxError("predicate '" + pred + "' must be a constant", lineNo);
    ++i;
    auto term = [&]() -> Term {
        const Tok& t = toks[i];
        switch (t.t) {
            case Tok::T::Ident:
                ++i;
                return varText(t.text) ? Term::variable(varName(t.text))
                                       : Term::constant(Value::iri(t.text));
            case Tok::T::IriRef:
                ++i;
                return Term::constant(Value::iri(t.text));
            case Tok::T::Number:
                ++i;
                return Term::constant(Value::num(t.num));
            case Tok::T::Minus:
                if (toks[i + 1].t == Tok::T::Number) {
                    double v = -toks[i + 1].num;
                    i += 2;
                    return Term::constant(Value::num(v));
                }
                throw SyntaxError("expected term", lineNo);
            case Tok::T::String:
                ++i;
                return Term::constant(Value::str(t.text));
            default:
                throw SyntaxError("expected term", lineNo);
        }
    };
    auto want = [&](Tok::T t, const char* what) {
        if (toks[i].t != t) throw SyntaxError(std::string("expected ") + what, lineNo);
        ++i;
    };
    want(Tok::T::LParen, "'('");
    Term first = term();
    Fact f;
    if (toks[i].t == Tok::T::Comma) {
        ++i;
        Term second = term();
        want(Tok::T::RParen, "')'");
        f.pred = Value::iri(pred);
        f.subject = constValue(first, lineNo);
        f.object = constValue(second, lineNo);
    } else {
        want(Tok::T::RParen, "')'");
        f.pred = typePredicate();
        f.subject = constValue(first, lineNo);
        f.object = Value::iri(pred);
    }
    want(Tok::T::Dot, "'.'");
    if (toks[i].t != Tok::T::End) throw SyntaxError("trailing input after '.'", lineNo);
    return f;
}

}  // namespace

Rule parseRule(std::string_view text) { return RuleParser(text).parse(); }

std::vector<Rule> parseRuleFile(std::string_view text) {
    std::vector<Rule> rules;
    std::size_t lineNo = 0;
    for (std::string_view line : splitLines(text)) {
        ++lineNo;
        if (blankOrComment(line)) continue;
        try {
            rules.push_back(parseRule(line));
        } catch (const SyntaxError& e) {
            throw SyntaxError(e.what(), lineNo);
        }
    }
    return rules;
}

std::vector<Fact> parseFacts(std::string_view text, FactFormat fmt) {
    std::vector<Fact> facts;
    std::size_t lineNo = 0;
    for (std::string_view line : splitLines(text)) {
        ++lineNo;
        if (blankOrComment(line)) continue;
        facts.push_back(parseFactLine(line, fmt, lineNo));
    }
    return facts;
}

FactFormat formatForPath(const std::string& path) {
    auto endsWith = [&](const char* suffix) {
        std::size_t len = std::strlen(suffix);
        return path.size() >= len && path.compare(path.size() - len, len, suffix) == 0;
    };
    if (endsWith(".nt")) return FactFormat::Triples;
    if (endsWith(".dl")) return FactFormat::Functional;
    return FactFormat::Auto;
}

Fact parseFact(std::string_view text) { return parseFactLine(text, FactFormat::Auto, 0); }

Pattern parsePattern(std::string_view text) {
    auto toks = lex(text);
    std::size_t i = 0;
    if (toks[i].t != Tok::T::Ident && toks[i].t != Tok::T::IriRef)
        throw SyntaxError("expected predicate in pattern");
    std::string pred = toks[i].text;
    ++i;
    auto want = [&](Tok::T t, const char* what) {
        if (toks[i].t != t) throw SyntaxError(std::string("expected ") + what + " in pattern");
        ++i;
    };
    want(Tok::T::LParen, "'('");
    auto part = [&]() -> std::optional<Value> {
        const Tok& t = toks[i];
        switch (t.t) {
            case Tok::T::Ident:
                ++i;
                if (t.text == "?" || varText(t.text)) return std::nullopt;
                return Value::iri(t.text);
            case Tok::T::IriRef:
                ++i;
                return Value::iri(t.text);
            case Tok::T::Number:
                ++i;
                return Value::num(t.num);
            case Tok::T::String:
                ++i;
                return Value::str(t.text);
            default:
                throw SyntaxError("expected term or '?' in pattern");
        }
    };
    Pattern q;
    auto first = part();
    if (toks[i].t == Tok::T::Comma) {
        ++i;
        auto second = part();
        q.pred = Value::iri(pred);
        q.subject = std::move(first);
        q.object = std::move(second);
    } else {
        q.pred = typePredicate();
        q.subject = std::move(first);
        q.object = Value::iri(pred);
    }
    want(Tok::T::RParen, "')'");
    if (toks[i].t == Tok::T::Dot) ++i;
    if (toks[i].t != Tok::T::End) throw SyntaxError("trailing input in pattern");
    return q;
}

}  // namespace stratlog
