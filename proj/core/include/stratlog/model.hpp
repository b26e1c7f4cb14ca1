#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "stratlog/value.hpp"

namespace stratlog {

// Predicate used for the canonical binary form of unary atoms:
// C(x) is stored as (x, rdf:type, C).
inline const std::string kTypePred = "rdf:type";

inline Value typePredicate() { return Value::iri(kTypePred); }

struct Term {
    enum class Kind : std::uint8_t { Const, Var };

    Kind kind = Kind::Const;
    Value value;      // when Const
    std::string var;  // when Var, without any leading '?'

    static Term constant(Value v) {
        Term t;
        t.kind = Kind::Const;
        t.value = std::move(v);
        return t;
    }
    static Term variable(std::string name) {
        Term t;
        t.kind = Kind::Var;
        t.var = std::move(name);
        return t;
    }

    bool isVar() const { return kind == Kind::Var; }
    bool operator==(const Term&) const = default;
};

struct Atom {
    Value pred;  // always an IRI constant
    Term subject;
    Term object;

    bool operator==(const Atom&) const = default;
};

// True for atoms of the canonical unary form with a known class.
inline bool isClassAtom(const Atom& a) {
    return a.pred.kind() == Value::Kind::Iri && a.pred.text() == kTypePred && !a.object.isVar();
}

// Arithmetic expression over variables and numeric constants.
struct BindExpr {
    enum class Op : std::uint8_t { Leaf, Add, Sub, Mul, Div, Neg, Abs };

    Op op = Op::Leaf;
    Term leaf;                   // when Leaf
    std::vector<BindExpr> args;  // 2 for binary ops, 1 for Neg/Abs

    bool operator==(const BindExpr&) const = default;
};

enum class Comparator : std::uint8_t { Gt, Ge, Eq, Le, Lt, Ne };

const char* comparatorText(Comparator c);

struct Builtin {
    enum class Kind : std::uint8_t { Bind, Comp };

    Kind kind = Kind::Comp;
    // Bind
    BindExpr expr;
    std::string target;  // variable introduced by the bind
    // Comp
    Term left, right;
    Comparator cmp = Comparator::Eq;

    bool operator==(const Builtin&) const = default;
};

enum class AggOp : std::uint8_t { Max, Min, Avg, Count, Sum, Med };

const char* aggOpText(AggOp op);
std::optional<AggOp> aggOpFromText(const std::string& name);

struct AggregateSpec {
    std::string groupVar;   // grouping variable, must occur in the body
    AggOp op = AggOp::Count;
    std::string aggVar;     // aggregated variable, must occur in the body
    std::string resultVar;  // bound to the aggregate result, occurs in the head

    bool operator==(const AggregateSpec&) const = default;
};

struct Rule {
    std::string id;
    Atom head;
    std::vector<Atom> positive;  // source order preserved
    std::vector<Atom> negative;
    std::vector<Builtin> builtins;
    std::optional<AggregateSpec> aggregate;

    bool isAggregate() const { return aggregate.has_value(); }
    bool operator==(const Rule&) const = default;
};

// Dependency key of an atom occurrence. Plain predicates key on their name;
// unary/class atoms key on the class so that distinct classes stay
// independent in the dependency graph. A variable class keys as a wildcard.
std::string predKey(const Value& pred, const Term& object);
std::string predKey(const Atom& a);
std::string predKeyOfFact(const Fact& f);
std::string headKey(const Rule& r);
bool predKeysOverlap(const std::string& a, const std::string& b);

// Variables bound by positive evaluation: positive body atoms plus bind
// targets (for aggregate rules, the aggregate body).
std::set<std::string> boundVars(const Rule& r);
std::set<std::string> termVars(const Term& t);
void collectExprVars(const BindExpr& e, std::set<std::string>& out);

// Enforces rule safety and the aggregate-shape constraints.
// Throws SafetyError or AggregateError.
void validateRule(const Rule& r);

// Canonical one-line text form; parseRule(renderRule(r)) == r.
std::string renderRule(const Rule& r);
std::string renderAtom(const Atom& a);
std::string renderTerm(const Term& t);
std::string renderFactFunctional(const Fact& f);
std::string renderFactTriple(const Fact& f);

}  // namespace stratlog
