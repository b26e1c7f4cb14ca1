#include "stratlog/model.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "stratlog/errors.hpp"

namespace stratlog {

namespace {

bool identLike(const std::string& s) {
    if (s.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
    for (char c : s) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != ':') return false;
    }
    return true;
}

void addTermVars(const Term& t, std::set<std::string>& out) {
    if (t.isVar()) out.insert(t.var);
}

}  // namespace

const char* comparatorText(Comparator c) {
    switch (c) {
        case Comparator::Gt: return ">";
        case Comparator::Ge: return ">=";
        case Comparator::Eq: return "=";
        case Comparator::Le: return "<=";
        case Comparator::Lt: return "<";
        case Comparator::Ne: return "!=";
    }
    return "?";
}

const char* aggOpText(AggOp op) {
    switch (op) {
        case AggOp::Max: return "MAX";
        case AggOp::Min: return "MIN";
        case AggOp::Avg: return "AVG";
        case AggOp::Count: return "COUNT";
        case AggOp::Sum: return "SUM";
        case AggOp::Med: return "MED";
    }
    return "?";
}

std::optional<AggOp> aggOpFromText(const std::string& name) {
    std::string up;
    up.reserve(name.size());
    for (char c : name) up.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    if (up == "MAX") return AggOp::Max;
    if (up == "MIN") return AggOp::Min;
    if (up == "AVG") return AggOp::Avg;
    if (up == "COUNT") return AggOp::Count;
    if (up == "SUM") return AggOp::Sum;
    if (up == "MED") return AggOp::Med;
    return std::nullopt;
}

std::string predKey(const Value& pred, const Term& object) {
    if (pred.kind() == Value::Kind::Iri && pred.text() == kTypePred) {
        if (object.isVar()) return kTypePred + "#*";
        return kTypePred + "#" + object.value.text();
    }
    return pred.text();
}

std::string predKey(const Atom& a) { return predKey(a.pred, a.object); }

std::string predKeyOfFact(const Fact& f) {
    if (f.pred.kind() == Value::Kind::Iri && f.pred.text() == kTypePred)
        return kTypePred + "#" + f.object.text();
    return f.pred.text();
}

std::string headKey(const Rule& r) { return predKey(r.head); }

bool predKeysOverlap(const std::string& a, const std::string& b) {
    if (a == b) return true;
    const std::string wildcard = kTypePred + "#*";
    auto isType = [](const std::string& k) { return k.rfind(kTypePred + "#", 0) == 0; };
    if ((a == wildcard && isType(b)) || (b == wildcard && isType(a))) return true;
    return false;
}

std::set<std::string> termVars(const Term& t) {
    std::set<std::string> out;
    addTermVars(t, out);
    return out;
}

void collectExprVars(const BindExpr& e, std::set<std::string>& out) {
    if (e.op == BindExpr::Op::Leaf) {
        addTermVars(e.leaf, out);
        return;
    }
    for (const auto& k : e.args) collectExprVars(k, out);
}

std::set<std::string> boundVars(const Rule& r) {
    std::set<std::string> bound;
    for (const Atom& a : r.positive) {
        addTermVars(a.subject, bound);
        addTermVars(a.object, bound);
    }
    for (const Builtin& b : r.builtins)
        if (b.kind == Builtin::Kind::Bind) bound.insert(b.target);
    return bound;
}

void validateRule(const Rule& r) {
    if (r.aggregate) {
        const AggregateSpec& agg = *r.aggregate;
        if (!r.negative.empty() || !r.builtins.empty())
            throw AggregateError("aggregate rule body must contain positive atoms only");
        std::set<std::string> bodyVars;
        for (const Atom& a : r.positive) {
            addTermVars(a.subject, bodyVars);
            addTermVars(a.object, bodyVars);
        }
        if (!bodyVars.count(agg.groupVar))
            throw AggregateError("group variable " + agg.groupVar + " does not occur in the body");
        if (!bodyVars.count(agg.aggVar))
            throw AggregateError("aggregated variable " + agg.aggVar + " does not occur in the body");
        if (bodyVars.count(agg.resultVar))
            throw AggregateError("result variable " + agg.resultVar + " must not occur in the body");
        std::set<std::string> headVars;
        addTermVars(r.head.subject, headVars);
        addTermVars(r.head.object, headVars);
        if (!headVars.count(agg.resultVar))
            throw AggregateError("result variable " + agg.resultVar + " does not occur in the head");
        for (const auto& v : headVars)
            if (v != agg.groupVar && v != agg.resultVar)
                throw AggregateError("head variable " + v +
                                     " is neither the group variable nor the result variable");
        return;
    }

    const std::set<std::string> bound = boundVars(r);
    auto requireBound = [&](const std::set<std::string>& vars, const char* where) {
        for (const auto& v : vars) {
            if (!bound.count(v))
                throw SafetyError("variable " + v + " in " + where +
                                  " is not bound by any positive body atom or bind target");
        }
    };

    std::set<std::string> headVars;
    addTermVars(r.head.subject, headVars);
    addTermVars(r.head.object, headVars);
    requireBound(headVars, "the head");

    std::set<std::string> bindTargets;
    for (const Builtin& b : r.builtins) {
        if (b.kind == Builtin::Kind::Bind) {
            if (!bindTargets.insert(b.target).second)
                throw SafetyError("variable " + b.target + " is bound by two BIND atoms");
            std::set<std::string> positives;
            for (const Atom& a : r.positive) {
                addTermVars(a.subject, positives);
                addTermVars(a.object, positives);
            }
            if (positives.count(b.target))
                throw SafetyError("BIND target " + b.target +
                                  " already occurs in a positive body atom");
            std::set<std::string> ins;
            collectExprVars(b.expr, ins);
            requireBound(ins, "a BIND expression");
        } else {
            std::set<std::string> vars;
            addTermVars(b.left, vars);
            addTermVars(b.right, vars);
            requireBound(vars, "a COMP atom");
        }
    }

    // Variables not bound by positives may appear in exactly one negated
    // atom, where they read as locally existential.
    std::map<std::string, int> negOcc;
    for (const Atom& a : r.negative) {
        std::set<std::string> vars;
        addTermVars(a.subject, vars);
        addTermVars(a.object, vars);
        for (const auto& v : vars)
            if (!bound.count(v)) ++negOcc[v];
    }
    for (const auto& [v, n] : negOcc) {
        if (n > 1)
            throw SafetyError("variable " + v +
                              " occurs in multiple negated atoms but in no positive atom");
    }
}

std::string renderTerm(const Term& t) {
    if (t.isVar()) {
        if (!t.var.empty() && std::isupper(static_cast<unsigned char>(t.var[0]))) return t.var;
        return "?" + t.var;
    }
    const Value& v = t.value;
    // capitalized constants need the bracketed form in term position, where
    // a bare capitalized identifier reads as a variable
    if (v.kind() == Value::Kind::Iri &&
        identLike(v.text()) && !std::isupper(static_cast<unsigned char>(v.text()[0])))
        return v.text();
    return v.display();
}

std::string renderAtom(const Atom& a) {
    if (isClassAtom(a)) {
        const std::string& cls = a.object.value.text();
        return (identLike(cls) ? cls : a.object.value.display()) + "(" + renderTerm(a.subject) + ")";
    }
    std::string pred = identLike(a.pred.text()) ? a.pred.text() : a.pred.display();
    return pred + "(" + renderTerm(a.subject) + ", " + renderTerm(a.object) + ")";
}

namespace {

int precedence(BindExpr::Op op) {
    switch (op) {
        case BindExpr::Op::Add:
        case BindExpr::Op::Sub: return 1;
        case BindExpr::Op::Mul:
        case BindExpr::Op::Div: return 2;
        default: return 3;
    }
}

std::string renderExpr(const BindExpr& e, int parentPrec, bool rightChild) {
    switch (e.op) {
        case BindExpr::Op::Leaf:
            return renderTerm(e.leaf);
        case BindExpr::Op::Abs:
            return "abs(" + renderExpr(e.args[0], 0, false) + ")";
        case BindExpr::Op::Neg:
            return "-" + renderExpr(e.args[0], 3, false);
        default: {
            const int p = precedence(e.op);
            const char* op = e.op == BindExpr::Op::Add   ? " + "
                             : e.op == BindExpr::Op::Sub ? " - "
                             : e.op == BindExpr::Op::Mul ? " * "
                                                         : " / ";
            std::string s = renderExpr(e.args[0], p, false) + op + renderExpr(e.args[1], p, true);
            if (p < parentPrec || (p == parentPrec && rightChild)) return "(" + s + ")";
            return s;
        }
    }
}

}  // namespace

std::string renderRule(const Rule& r) {
    std::string out;
    if (!r.id.empty()) out += r.id + ": ";
    out += renderAtom(r.head);
    out += " :- ";
    if (r.aggregate) {
        out += "AGGREGATE(";
        for (std::size_t i = 0; i < r.positive.size(); ++i) {
            if (i) out += " ∧ ";
            out += renderAtom(r.positive[i]);
        }
        out += ") ON " + r.aggregate->groupVar;
        out += " WITH " + std::string(aggOpText(r.aggregate->op)) + "(" + r.aggregate->aggVar + ")";
        out += " AS " + r.aggregate->resultVar;
        out += " .";
        return out;
    }
    bool first = true;
    auto sep = [&] {
        if (!first) out += " ∧ ";
        first = false;
    };
    for (const Atom& a : r.positive) {
        sep();
        out += renderAtom(a);
    }
    for (const Builtin& b : r.builtins) {
        sep();
        if (b.kind == Builtin::Kind::Bind) {
            std::string target = std::isupper(static_cast<unsigned char>(b.target[0]))
                                     ? b.target
                                     : "?" + b.target;
            out += "BIND(" + renderExpr(b.expr, 0, false) + " AS " + target + ")";
        } else {
            out += "COMP(" + renderTerm(b.left) + ", " + comparatorText(b.cmp) + ", " +
                   renderTerm(b.right) + ")";
        }
    }
    for (const Atom& a : r.negative) {
        sep();
        out += "not " + renderAtom(a);
    }
    out += " .";
    return out;
}

std::string renderFactFunctional(const Fact& f) {
    Atom a{f.pred, Term::constant(f.subject), Term::constant(f.object)};
    return renderAtom(a) + ".";
}

std::string renderFactTriple(const Fact& f) {
    return f.subject.display() + " " + f.pred.display() + " " + f.object.display() + " .";
}

}  // namespace stratlog
