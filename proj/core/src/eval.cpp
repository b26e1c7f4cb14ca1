#include "stratlog/eval.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>

#include "stratlog/errors.hpp"

namespace stratlog {

bool SourceList::matchExists(const Pattern& q) const {
    for (const Entry& e : entries_) {
        if (e.store) {
            if (!e.hide) {
                if (e.store->matchExists(q)) return true;
            } else {
                bool found = false;
                e.store->match(q, [&](const Value& s, const Value& o) {
                    if (!found && !e.hide->contains(Fact{q.pred, s, o})) found = true;
                });
                if (found) return true;
            }
        } else if (e.bag) {
            if (e.bag->matchExists(q)) return true;
        }
    }
    return false;
}

bool SourceList::contains(const Fact& f) const {
    for (const Entry& e : entries_) {
        if (e.store) {
            if (e.store->contains(f) && !(e.hide && e.hide->contains(f))) return true;
        } else if (e.bag && e.bag->contains(f)) {
            return true;
        }
    }
    return false;
}

std::size_t SourceList::estimate(const Pattern& q) const {
    std::size_t n = 0;
    for (const Entry& e : entries_) {
        if (e.store) n += e.store->countMatches(q);
        else if (e.bag) n += e.bag->countMatches(q);
    }
    return n;
}

std::size_t SourceList::predicateCount(const Value& pred) const {
    std::size_t n = 0;
    for (const Entry& e : entries_) {
        if (e.store) n += e.store->predicateCount(pred);
        else if (e.bag) n += e.bag->predicateCount(pred);
    }
    return n;
}

namespace {

double evalExpr(const RuleExec::ExprNode& e, const std::vector<Value>& frame) {
    switch (e.op) {
        case BindExpr::Op::Leaf: {
            if (e.constant) return e.cval;
            const Value& v = frame[static_cast<std::size_t>(e.slot)];
            if (!v.isNum()) throw TypeError("arithmetic over non-numeric value " + v.display());
            return v.number();
        }
        case BindExpr::Op::Add:
            return evalExpr(e.kids[0], frame) + evalExpr(e.kids[1], frame);
        case BindExpr::Op::Sub:
            return evalExpr(e.kids[0], frame) - evalExpr(e.kids[1], frame);
        case BindExpr::Op::Mul:
            return evalExpr(e.kids[0], frame) * evalExpr(e.kids[1], frame);
        case BindExpr::Op::Div: {
            double d = evalExpr(e.kids[1], frame);
            if (d == 0.0) throw ArithmeticError("division by zero in BIND");
            return evalExpr(e.kids[0], frame) / d;
        }
        case BindExpr::Op::Neg:
            return -evalExpr(e.kids[0], frame);
        case BindExpr::Op::Abs:
            return std::fabs(evalExpr(e.kids[0], frame));
    }
    return 0.0;
}

bool compareValues(const Value& l, const Value& r, Comparator c) {
    if (l.isNum() && r.isNum()) {
        double a = l.number(), b = r.number();
        switch (c) {
            case Comparator::Gt: return a > b;
            case Comparator::Ge: return a >= b;
            case Comparator::Eq: return a == b;
            case Comparator::Le: return a <= b;
            case Comparator::Lt: return a < b;
            case Comparator::Ne: return a != b;
        }
    }
    switch (c) {
        case Comparator::Eq: return l == r;
        case Comparator::Ne: return !(l == r);
        default:
            throw TypeError("ordered comparison over non-numeric values " + l.display() + " and " +
                            r.display());
    }
}

}  // namespace

RuleExec::RuleExec(const Rule& r, const JoinPlan& plan) : rule_(&r), plan_(&plan) {
    auto slot = [&](const std::string& v) -> int {
        auto it = slotOf_.find(v);
        if (it != slotOf_.end()) return it->second;
        int s = static_cast<int>(slots_++);
        slotOf_[v] = s;
        return s;
    };
    auto compileTerm = [&](const Term& t, int& slotOut, Value& constOut) {
        if (t.isVar()) {
            slotOut = slot(t.var);
        } else {
            slotOut = -1;
            constOut = t.value;
        }
    };
    std::function<ExprNode(const BindExpr&)> compileExpr = [&](const BindExpr& e) -> ExprNode {
        ExprNode n;
        n.op = e.op;
        if (e.op == BindExpr::Op::Leaf) {
            if (e.leaf.isVar()) {
                n.slot = slot(e.leaf.var);
            } else {
                if (!e.leaf.value.isNum())
                    throw TypeError("non-numeric constant in BIND expression");
                n.constant = true;
                n.cval = e.leaf.value.number();
            }
            return n;
        }
        for (const auto& k : e.args) n.kids.push_back(compileExpr(k));
        return n;
    };

    for (const PlanStep& ps : plan.steps) {
        if (ps.kind == StepKind::Aggregate) continue;  // grouping handled separately
        Step st;
        st.kind = ps.kind;
        switch (ps.kind) {
            case StepKind::Atom:
            case StepKind::NegAtom: {
                const Atom& a =
                    (ps.kind == StepKind::Atom ? r.positive : r.negative).at(ps.index);
                st.pred = a.pred;
                compileTerm(a.subject, st.sSlot, st.sConst);
                compileTerm(a.object, st.oSlot, st.oConst);
                break;
            }
            case StepKind::Bind: {
                const Builtin& b = r.builtins.at(ps.index);
                st.expr = compileExpr(b.expr);
                st.target = slot(b.target);
                break;
            }
            case StepKind::Comp: {
                const Builtin& b = r.builtins.at(ps.index);
                compileTerm(b.left, st.lSlot, st.lConst);
                compileTerm(b.right, st.rSlot, st.rConst);
                st.cmp = b.cmp;
                break;
            }
            default:
                break;
        }
        steps_.push_back(std::move(st));
    }

    for (const auto& [v, s] : slotOf_) bodySlots_.push_back(s);
    std::sort(bodySlots_.begin(), bodySlots_.end());

    auto compileHeadTerm = [&](const Term& t, int& slotOut, Value& constOut) {
        if (t.isVar()) {
            slotOut = slot(t.var);  // aggregate result variables get a fresh slot
        } else {
            slotOut = -1;
            constOut = t.value;
        }
    };
    compileHeadTerm(r.head.subject, headS_, headSConst_);
    compileHeadTerm(r.head.object, headO_, headOConst_);
}

int RuleExec::slotOf(const std::string& var) const {
    auto it = slotOf_.find(var);
    return it == slotOf_.end() ? -1 : it->second;
}

template <typename Emit>
bool RuleExec::exec(std::size_t idx, std::vector<Value>& frame, std::vector<char>& bound,
                    const EvalInput& in, std::ptrdiff_t pinIdx, const DataStore* pin,
                    std::ptrdiff_t flipIdx, Emit&& emit) const {
    if (idx == steps_.size()) {
        Fact f;
        f.pred = rule_->head.pred;
        f.subject = headS_ >= 0 ? frame[static_cast<std::size_t>(headS_)] : headSConst_;
        f.object = headO_ >= 0 ? frame[static_cast<std::size_t>(headO_)] : headOConst_;
        return emit(f);
    }
    const Step& st = steps_[idx];
    switch (st.kind) {
        case StepKind::NegAtom:
        case StepKind::Atom: {
            const bool flipped = static_cast<std::ptrdiff_t>(idx) == flipIdx;
            Pattern q;
            q.pred = st.pred;
            const bool sFree = st.sSlot >= 0 && !bound[static_cast<std::size_t>(st.sSlot)];
            const bool oFree = st.oSlot >= 0 && !bound[static_cast<std::size_t>(st.oSlot)];
            if (st.sSlot < 0) q.subject = st.sConst;
            else if (!sFree) q.subject = frame[static_cast<std::size_t>(st.sSlot)];
            if (st.oSlot < 0) q.object = st.oConst;
            else if (!oFree) q.object = frame[static_cast<std::size_t>(st.oSlot)];

            if (st.kind == StepKind::NegAtom) {
                if (flipped) {
                    // a fact in `pin` matches the pattern, and the negation
                    // check holds against the configured sources
                    if (pin->matchExists(q) && !in.negative->matchExists(q))
                        return exec(idx + 1, frame, bound, in, pinIdx, pin, flipIdx, emit);
                    return true;
                }
                if (!in.negative->matchExists(q))
                    return exec(idx + 1, frame, bound, in, pinIdx, pin, flipIdx, emit);
                return true;
            }

            bool cont = true;
            auto onMatch = [&](const Value& s, const Value& o) {
                if (!cont) return;
                if (sFree && oFree && st.sSlot == st.oSlot && !(s == o)) return;
                if (sFree) {
                    frame[static_cast<std::size_t>(st.sSlot)] = s;
                    bound[static_cast<std::size_t>(st.sSlot)] = 1;
                }
                if (oFree && st.oSlot != st.sSlot) {
                    frame[static_cast<std::size_t>(st.oSlot)] = o;
                    bound[static_cast<std::size_t>(st.oSlot)] = 1;
                }
                cont = exec(idx + 1, frame, bound, in, pinIdx, pin, flipIdx, emit);
            };
            if (static_cast<std::ptrdiff_t>(idx) == pinIdx) {
                pin->match(q, onMatch);
            } else if (!sFree && !oFree) {
                // fully bound: containment check instead of iteration
                Fact f{q.pred, *q.subject, *q.object};
                if (in.positive->contains(f))
                    cont = exec(idx + 1, frame, bound, in, pinIdx, pin, flipIdx, emit);
            } else {
                in.positive->match(q, onMatch);
            }
            if (sFree) bound[static_cast<std::size_t>(st.sSlot)] = 0;
            if (oFree && st.oSlot != st.sSlot) bound[static_cast<std::size_t>(st.oSlot)] = 0;
            return cont;
        }
        case StepKind::Bind: {
            double v = evalExpr(st.expr, frame);
            frame[static_cast<std::size_t>(st.target)] = Value::num(v);
            bound[static_cast<std::size_t>(st.target)] = 1;
            bool cont = exec(idx + 1, frame, bound, in, pinIdx, pin, flipIdx, emit);
            bound[static_cast<std::size_t>(st.target)] = 0;
            return cont;
        }
        case StepKind::Comp: {
            auto fetch = [&](int slot, const Value& cst) -> const Value& {
                if (slot < 0) return cst;
                if (!bound[static_cast<std::size_t>(slot)])
                    throw PlanError("comparison operand evaluated before being bound");
                return frame[static_cast<std::size_t>(slot)];
            };
            if (compareValues(fetch(st.lSlot, st.lConst), fetch(st.rSlot, st.rConst), st.cmp))
                return exec(idx + 1, frame, bound, in, pinIdx, pin, flipIdx, emit);
            return true;
        }
        default:
            return true;
    }
}

template <typename Emit>
bool RuleExec::execAll(const EvalInput& in, std::ptrdiff_t pinIdx, const DataStore* pin,
                       std::ptrdiff_t flipIdx, std::vector<Value>* seedFrame,
                       std::vector<char>* seedBound, Emit&& emit) const {
    if (seedFrame) return exec(0, *seedFrame, *seedBound, in, pinIdx, pin, flipIdx, emit);
    std::vector<Value> frame(slots_);
    std::vector<char> bound(slots_, 0);
    return exec(0, frame, bound, in, pinIdx, pin, flipIdx, emit);
}

void RuleExec::run(const EvalInput& in, const FactSink& sink) const {
    execAll(in, -1, nullptr, -1, nullptr, nullptr, [&](const Fact& f) {
        sink(f);
        return true;
    });
}

void RuleExec::runDelta(const EvalInput& in, const DataStore& delta, const FactSink& sink) const {
    if (delta.empty()) return;
    for (std::size_t i = 0; i < steps_.size(); ++i) {
        if (steps_[i].kind != StepKind::Atom) continue;
        if (delta.predicateCount(steps_[i].pred) == 0) continue;
        execAll(in, static_cast<std::ptrdiff_t>(i), &delta, -1, nullptr, nullptr,
                [&](const Fact& f) {
                    sink(f);
                    return true;
                });
    }
}

void RuleExec::runNegFlip(const EvalInput& in, const DataStore& pin, const FactSink& sink) const {
    if (pin.empty()) return;
    for (std::size_t i = 0; i < steps_.size(); ++i) {
        if (steps_[i].kind != StepKind::NegAtom) continue;
        if (pin.predicateCount(steps_[i].pred) == 0) continue;
        execAll(in, -1, &pin, static_cast<std::ptrdiff_t>(i), nullptr, nullptr,
                [&](const Fact& f) {
                    sink(f);
                    return true;
                });
    }
}

bool RuleExec::rederivable(const EvalInput& in, const Fact& target) const {
    if (!(rule_->head.pred == target.pred)) return false;
    std::vector<Value> frame(slots_);
    std::vector<char> bound(slots_, 0);
    if (headS_ >= 0) {
        frame[static_cast<std::size_t>(headS_)] = target.subject;
        bound[static_cast<std::size_t>(headS_)] = 1;
    } else if (!(headSConst_ == target.subject)) {
        return false;
    }
    if (headO_ >= 0) {
        auto s = static_cast<std::size_t>(headO_);
        if (bound[s]) {
            if (!(frame[s] == target.object)) return false;
        } else {
            frame[s] = target.object;
            bound[s] = 1;
        }
    } else if (!(headOConst_ == target.object)) {
        return false;
    }
    bool found = false;
    execAll(in, -1, nullptr, -1, &frame, &bound, [&](const Fact&) {
        found = true;
        return false;
    });
    return found;
}

void RuleExec::runBody(const EvalInput& in, const FrameSink& sink) const {
    std::vector<Value> frame(slots_);
    std::vector<char> bound(slots_, 0);
    execAll(in, -1, nullptr, -1, &frame, &bound, [&](const Fact&) {
        sink(frame);
        return true;
    });
}

PredStats gatherStats(const Rule& r, const SourceList& sources) {
    PredStats stats;
    auto add = [&](const Atom& a) {
        std::string k = predKey(a);
        if (stats.count(k)) return;
        if (isClassAtom(a)) {
            stats[k] = sources.estimate(Pattern{typePredicate(), std::nullopt, a.object.value});
        } else {
            stats[k] = sources.predicateCount(a.pred);
        }
    };
    for (const Atom& a : r.positive) add(a);
    for (const Atom& a : r.negative) add(a);
    return stats;
}

std::vector<Fact> evalAggregateCore(const RuleExec& exec, const EvalInput& in) {
    const Rule& r = exec.rule();
    const AggregateSpec& agg = *r.aggregate;
    const int gSlot = exec.slotOf(agg.groupVar);
    const int aSlot = exec.slotOf(agg.aggVar);

    std::set<std::vector<Value>> seen;  // distinct body bindings
    std::map<Value, std::vector<Value>> groups;
    exec.runBody(in, [&](const std::vector<Value>& frame) {
        // the result variable's slot stays default-valued during body
        // evaluation, so the whole frame works as the distinctness key
        if (!seen.insert(frame).second) return;
        groups[frame[static_cast<std::size_t>(gSlot)]].push_back(
            frame[static_cast<std::size_t>(aSlot)]);
    });

    std::vector<Fact> out;
    for (auto& [groupVal, vals] : groups) {
        double result = 0.0;
        if (agg.op == AggOp::Count) {
            result = static_cast<double>(vals.size());
        } else {
            std::vector<double> nums;
            nums.reserve(vals.size());
            for (const Value& v : vals) {
                if (!v.isNum())
                    throw TypeError("aggregate " + std::string(aggOpText(agg.op)) +
                                    " over non-numeric value " + v.display());
                nums.push_back(v.number());
            }
            switch (agg.op) {
                case AggOp::Max:
                    result = *std::max_element(nums.begin(), nums.end());
                    break;
                case AggOp::Min:
                    result = *std::min_element(nums.begin(), nums.end());
                    break;
                case AggOp::Sum:
                case AggOp::Avg: {
                    double sum = 0.0;
                    for (double d : nums) sum += d;
                    result = agg.op == AggOp::Sum ? sum : sum / static_cast<double>(nums.size());
                    break;
                }
                case AggOp::Med: {
                    std::sort(nums.begin(), nums.end());
                    const std::size_t n = nums.size();
                    // even cardinality: arithmetic mean of the two middles
                    result = (n % 2 == 1) ? nums[n / 2]
                                          : (nums[n / 2 - 1] + nums[n / 2]) / 2.0;
                    break;
                }
                default:
                    break;
            }
        }
        auto headVal = [&](const Term& t) -> Value {
            if (!t.isVar()) return t.value;
            if (t.var == agg.groupVar) return groupVal;
            return Value::num(result);
        };
        out.push_back(Fact{r.head.pred, headVal(r.head.subject), headVal(r.head.object)});
    }
    return out;
}

namespace {

struct Compiled {
    const Rule* rule = nullptr;
    std::unique_ptr<JoinPlan> plan;
    std::unique_ptr<RuleExec> exec;
};

std::vector<Compiled> compileRules(const std::vector<const Rule*>& rules, const SourceList& src,
                                   const FixpointOptions& opt) {
    std::vector<Compiled> cs;
    cs.reserve(rules.size());
    for (const Rule* r : rules) {
        Compiled c;
        c.rule = r;
        c.plan = std::make_unique<JoinPlan>(planRule(*r, gatherStats(*r, src)));
        if (opt.explain && opt.out) *opt.out << c.plan->describe(*r);
        c.exec = std::make_unique<RuleExec>(*r, *c.plan);
        cs.push_back(std::move(c));
    }
    return cs;
}

}  // namespace

FixpointResult seminaiveFixpoint(const std::vector<const Rule*>& rules, const DataStoreBag& edb,
                                 DataStore& idb, NodeStats& stats, const FixpointOptions& opt) {
    DataStore snapshot = idb;
    try {
        FixpointResult res;
        SourceList src;
        src.addBag(&edb);
        src.addStore(&idb);
        EvalInput in{&src, &src};
        auto cs = compileRules(rules, src, opt);
        auto novel = [&](const Fact& f) { return !idb.contains(f) && !edb.contains(f); };

        DataStore delta;
        ++res.rounds;
        ++stats.rounds;
        for (auto& c : cs) {
            ++stats.ruleEvals;
            auto sink = [&](const Fact& f) {
                if (novel(f)) {
                    idb.insert(f);
                    delta.insert(f);
                }
            };
            if (c.rule->isAggregate()) {
                for (const Fact& f : evalAggregateCore(*c.exec, in)) sink(f);
            } else {
                c.exec->run(in, sink);
            }
        }
        res.derived += delta.size();
        stats.derived += delta.size();
        if (opt.trace && opt.out)
            *opt.out << "[fixpoint " << opt.label << "] round 1: +" << delta.size() << "\n";

        while (!delta.empty()) {
            DataStore next;
            ++res.rounds;
            ++stats.rounds;
            for (auto& c : cs) {
                if (c.rule->isAggregate()) continue;
                ++stats.ruleEvals;
                c.exec->runDelta(in, delta, [&](const Fact& f) {
                    if (novel(f)) {
                        idb.insert(f);
                        next.insert(f);
                    }
                });
            }
            res.derived += next.size();
            stats.derived += next.size();
            if (opt.trace && opt.out)
                *opt.out << "[fixpoint " << opt.label << "] round " << res.rounds << ": +"
                         << next.size() << "\n";
            delta = std::move(next);
        }
        return res;
    } catch (...) {
        idb = std::move(snapshot);
        throw;
    }
}

FixpointResult continueRounds(const std::vector<const Rule*>& rules, const DataStoreBag& edb,
                              DataStore& idb, const DataStore& initialDelta, NodeStats& stats,
                              const FixpointOptions& opt) {
    FixpointResult res;
    if (initialDelta.empty()) return res;
    SourceList src;
    src.addBag(&edb);
    src.addStore(&idb);
    EvalInput in{&src, &src};
    auto cs = compileRules(rules, src, opt);
    auto novel = [&](const Fact& f) { return !idb.contains(f) && !edb.contains(f); };

    DataStore delta = initialDelta;
    while (!delta.empty()) {
        DataStore next;
        ++res.rounds;
        ++stats.rounds;
        for (auto& c : cs) {
            if (c.rule->isAggregate()) continue;
            ++stats.ruleEvals;
            c.exec->runDelta(in, delta, [&](const Fact& f) {
                if (novel(f)) {
                    idb.insert(f);
                    next.insert(f);
                }
            });
        }
        res.derived += next.size();
        stats.derived += next.size();
        if (opt.trace && opt.out)
            *opt.out << "[continue " << opt.label << "] round " << res.rounds << ": +"
                     << next.size() << "\n";
        delta = std::move(next);
    }
    return res;
}

std::vector<Fact> evalRule(const Rule& r, const JoinPlan& plan, const DataStoreBag& edb,
                           const DataStoreBag& idbView, const DataStore* delta) {
    SourceList src;
    src.addBag(&edb);
    src.addBag(&idbView);
    EvalInput in{&src, &src};
    RuleExec exec(r, plan);
    std::vector<Fact> out;
    std::unordered_set<Fact> seen;
    auto sink = [&](const Fact& f) {
        if (seen.insert(f).second) out.push_back(f);
    };
    if (delta) exec.runDelta(in, *delta, sink);
    else exec.run(in, sink);
    return out;
}

std::vector<Fact> evalAggregate(const Rule& r, const DataStoreBag& edb,
                                const DataStoreBag& idbView) {
    SourceList src;
    src.addBag(&edb);
    src.addBag(&idbView);
    EvalInput in{&src, &src};
    JoinPlan plan = planRule(r, gatherStats(r, src));
    RuleExec exec(r, plan);
    return evalAggregateCore(exec, in);
}

}  // namespace stratlog
