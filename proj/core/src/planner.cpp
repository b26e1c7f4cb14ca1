#include "stratlog/planner.hpp"

#include <optional>
#include <set>

#include "stratlog/errors.hpp"

namespace stratlog {

namespace {

struct Cand {
    int cls = 0;
    std::size_t est = 0;
    std::size_t src = 0;
    StepKind kind = StepKind::Atom;
    std::size_t index = 0;
    std::string path;

    bool betterThan(const Cand& o) const {
        if (cls != o.cls) return cls < o.cls;
        if (est != o.est) return est < o.est;
        return src < o.src;
    }
};

const char* className(int cls) {
    switch (cls) {
        case 0: return "P(S,O)";
        case 1: return "P(S,?o)";
        case 2: return "P(?s,?o)";
        case 3: return "C(?s)";
        case 4: return "Bind";
        case 5: return "Comp";
        default: return "Aggregate";
    }
}

}  // namespace

JoinPlan planRule(const Rule& r, const PredStats& stats) {
    JoinPlan plan;
    std::set<std::string> bound;
    auto termBound = [&](const Term& t) { return !t.isVar() || bound.count(t.var) != 0; };
    auto classify = [&](const Atom& a) -> std::pair<int, std::string> {
        const bool sb = termBound(a.subject);
        const bool ob = termBound(a.object);
        if (isClassAtom(a)) return sb ? std::pair{0, "check"} : std::pair{3, "pos[class]"};
        if (sb && ob) return {0, "check"};
        if (sb) return {1, "pso[s]"};
        if (ob) return {1, "pos[o]"};
        return {2, "scan"};
    };
    auto estOf = [&](const Atom& a) -> std::size_t {
        auto it = stats.find(predKey(a));
        return it == stats.end() ? 0 : it->second;
    };
    auto bindAtomVars = [&](const Atom& a) {
        if (a.subject.isVar()) bound.insert(a.subject.var);
        if (a.object.isVar()) bound.insert(a.object.var);
    };

    // positive body: atoms and builtins, greedy by heuristic class
    std::vector<bool> placedAtom(r.positive.size(), false);
    std::vector<bool> placedBuiltin(r.builtins.size(), false);
    std::size_t remaining = r.positive.size() + r.builtins.size();
    while (remaining > 0) {
        std::optional<Cand> best;
        for (std::size_t i = 0; i < r.positive.size(); ++i) {
            if (placedAtom[i]) continue;
            auto [cls, path] = classify(r.positive[i]);
            Cand c{cls, estOf(r.positive[i]), i, StepKind::Atom, i, path};
            if (!best || c.betterThan(*best)) best = std::move(c);
        }
        for (std::size_t j = 0; j < r.builtins.size(); ++j) {
            if (placedBuiltin[j]) continue;
            const Builtin& b = r.builtins[j];
            bool ready = true;
            if (b.kind == Builtin::Kind::Bind) {
                std::set<std::string> ins;
                collectExprVars(b.expr, ins);
                for (const auto& v : ins)
                    if (!bound.count(v)) ready = false;
            } else {
                if (b.left.isVar() && !bound.count(b.left.var)) ready = false;
                if (b.right.isVar() && !bound.count(b.right.var)) ready = false;
            }
            if (!ready) continue;
            const bool isBind = b.kind == Builtin::Kind::Bind;
            Cand c{isBind ? 4 : 5, 0, r.positive.size() + j,
                   isBind ? StepKind::Bind : StepKind::Comp, j, isBind ? "bind" : "filter"};
            if (!best || c.betterThan(*best)) best = std::move(c);
        }
        if (!best)
            throw PlanError("rule " + (r.id.empty() ? std::string("<anonymous>") : r.id) +
                            ": a BIND/COMP atom can never have its variables bound");
        plan.steps.push_back(PlanStep{best->kind, best->index, best->cls, best->est, best->path});
        if (best->kind == StepKind::Atom) {
            placedAtom[best->index] = true;
            bindAtomVars(r.positive[best->index]);
        } else {
            placedBuiltin[best->index] = true;
            if (best->kind == StepKind::Bind) bound.insert(r.builtins[best->index].target);
        }
        --remaining;
    }

    // negative body, same shape ranking; checks only, nothing gets bound
    std::vector<bool> placedNeg(r.negative.size(), false);
    for (std::size_t n = 0; n < r.negative.size(); ++n) {
        std::optional<Cand> best;
        for (std::size_t i = 0; i < r.negative.size(); ++i) {
            if (placedNeg[i]) continue;
            auto [cls, path] = classify(r.negative[i]);
            Cand c{cls, estOf(r.negative[i]), i, StepKind::NegAtom, i, path};
            if (!best || c.betterThan(*best)) best = std::move(c);
        }
        plan.steps.push_back(PlanStep{StepKind::NegAtom, best->index, best->cls, best->est,
                                      best->path});
        placedNeg[best->index] = true;
    }

    if (r.aggregate) plan.steps.push_back(PlanStep{StepKind::Aggregate, 0, 6, 0, "group"});
    return plan;
}

std::string JoinPlan::describe(const Rule& r) const {
    std::string out = (r.id.empty() ? std::string("<anonymous>") : r.id) + ":\n";
    std::size_t n = 0;
    for (const PlanStep& s : steps) {
        out += "  " + std::to_string(++n) + ". ";
        switch (s.kind) {
            case StepKind::Atom:
                out += renderAtom(r.positive[s.index]);
                break;
            case StepKind::NegAtom:
                out += "not " + renderAtom(r.negative[s.index]);
                break;
            case StepKind::Bind:
            case StepKind::Comp: {
                Rule tmp;  // reuse the canonical builtin rendering
                tmp.head = r.head;
                tmp.builtins.push_back(r.builtins[s.index]);
                std::string rendered = renderRule(tmp);
                auto pos = rendered.find(":- ");
                out += rendered.substr(pos + 3, rendered.size() - pos - 5);
                break;
            }
            case StepKind::Aggregate:
                out += "aggregate " + std::string(aggOpText(r.aggregate->op)) + "(" +
                       r.aggregate->aggVar + ") on " + r.aggregate->groupVar;
                break;
        }
        out += "   [";
        out += s.kind == StepKind::NegAtom ? "not " : "";
        out += className(s.heuristicClass);
        out += ", est=" + std::to_string(s.estCount) + ", " + s.accessPath + "]\n";
    }
    return out;
}

}  // namespace stratlog
