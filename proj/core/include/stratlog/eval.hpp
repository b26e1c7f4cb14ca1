#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "stratlog/datastorebag.hpp"
#include "stratlog/planner.hpp"

namespace stratlog {

// Read-only view over a list of stores/bags, with optional per-store
// suppression (used to reconstruct a pre-update view of mutated stores).
class SourceList {
public:
    struct Entry {
        const DataStore* store = nullptr;
        const DataStoreBag* bag = nullptr;
        const DataStore* hide = nullptr;
    };

    void addStore(const DataStore* s, const DataStore* hide = nullptr) {
        entries_.push_back(Entry{s, nullptr, hide});
    }
    void addBag(const DataStoreBag* b) { entries_.push_back(Entry{nullptr, b, nullptr}); }

    template <typename Sink>
    void match(const Pattern& q, Sink&& sink) const {
        for (const Entry& e : entries_) {
            if (e.store) {
                if (e.hide) {
                    e.store->match(q, [&](const Value& s, const Value& o) {
                        if (!e.hide->contains(Fact{q.pred, s, o})) sink(s, o);
                    });
                } else {
                    e.store->match(q, sink);
                }
            } else if (e.bag) {
                e.bag->match(q, sink);
            }
        }
    }

    bool matchExists(const Pattern& q) const;
    bool contains(const Fact& f) const;
    std::size_t estimate(const Pattern& q) const;
    std::size_t predicateCount(const Value& pred) const;

private:
    std::vector<Entry> entries_;
};

struct EvalInput {
    const SourceList* positive = nullptr;  // read source for positive atoms
    const SourceList* negative = nullptr;  // read source for negation checks
};

using FactSink = std::function<void(const Fact&)>;
using FrameSink = std::function<void(const std::vector<Value>&)>;

// A rule compiled against a join plan: variables mapped to frame slots,
// terms resolved to constants or slots, bind expressions flattened.
class RuleExec {
public:
    RuleExec(const Rule& r, const JoinPlan& plan);

    const Rule& rule() const { return *rule_; }
    const JoinPlan& plan() const { return *plan_; }
    std::size_t slotCount() const { return slots_; }
    int slotOf(const std::string& var) const;

    // All head instantiations; duplicates possible, the caller dedups.
    void run(const EvalInput& in, const FactSink& sink) const;

    // Semi-naive variants: one positive occurrence of a predicate present in
    // `delta` is pinned to `delta` per variant.
    void runDelta(const EvalInput& in, const DataStore& delta, const FactSink& sink) const;

    // Deletion-side variants: one negative atom is flipped into a positive
    // read over `pin` (bindings whose negation check is invalidated or was
    // blocked by a fact in `pin`); remaining atoms evaluate normally.
    void runNegFlip(const EvalInput& in, const DataStore& pin, const FactSink& sink) const;

    // True when `target` unifies with the head and the body is satisfiable.
    bool rederivable(const EvalInput& in, const Fact& target) const;

    // Body-only evaluation, one callback per complete binding frame.
    void runBody(const EvalInput& in, const FrameSink& sink) const;

    struct ExprNode {
        BindExpr::Op op = BindExpr::Op::Leaf;
        int slot = -1;  // leaf variable
        double cval = 0.0;
        bool constant = false;  // leaf numeric constant
        std::vector<ExprNode> kids;
    };

    struct Step {
        StepKind kind = StepKind::Atom;
        Value pred;
        int sSlot = -1, oSlot = -1;
        Value sConst, oConst;
        ExprNode expr;
        int target = -1;
        int lSlot = -1, rSlot = -1;
        Value lConst, rConst;
        Comparator cmp = Comparator::Eq;
    };

private:
    template <typename Emit>
    bool exec(std::size_t idx, std::vector<Value>& frame, std::vector<char>& bound,
              const EvalInput& in, std::ptrdiff_t pinIdx, const DataStore* pin,
              std::ptrdiff_t flipIdx, Emit&& emit) const;
    template <typename Emit>
    bool execAll(const EvalInput& in, std::ptrdiff_t pinIdx, const DataStore* pin,
                 std::ptrdiff_t flipIdx, std::vector<Value>* seedFrame,
                 std::vector<char>* seedBound, Emit&& emit) const;

    const Rule* rule_;
    const JoinPlan* plan_;
    std::vector<Step> steps_;
    std::size_t slots_ = 0;
    std::map<std::string, int> slotOf_;
    int headS_ = -1, headO_ = -1;  // slots, or -1 for constants
    Value headSConst_, headOConst_;
    std::vector<int> bodySlots_;  // slots bound by the body, ascending
};

// Fact counts per dependency key over the given sources.
PredStats gatherStats(const Rule& r, const SourceList& sources);

struct NodeStats {
    std::uint64_t ruleEvals = 0;
    std::uint64_t derived = 0;
    std::uint64_t rounds = 0;
};

struct FixpointOptions {
    bool trace = false;
    bool explain = false;
    std::ostream* out = nullptr;
    std::string label;
};

struct FixpointResult {
    std::size_t rounds = 0;
    std::size_t derived = 0;
};

// Least fixpoint of `rules` over `edb`, writing into `idb`. Only facts not
// already visible through edb or idb are added. On error the idb is rolled
// back to its pre-call state.
FixpointResult seminaiveFixpoint(const std::vector<const Rule*>& rules, const DataStoreBag& edb,
                                 DataStore& idb, NodeStats& stats, const FixpointOptions& opt = {});

// Continue semi-naive rounds from an initial delta whose facts are already
// present in idb (or visible upstream).
FixpointResult continueRounds(const std::vector<const Rule*>& rules, const DataStoreBag& edb,
                              DataStore& idb, const DataStore& initialDelta, NodeStats& stats,
                              const FixpointOptions& opt = {});

// Convenience single-rule entry points.
std::vector<Fact> evalRule(const Rule& r, const JoinPlan& plan, const DataStoreBag& edb,
                           const DataStoreBag& idbView, const DataStore* delta = nullptr);
std::vector<Fact> evalAggregate(const Rule& r, const DataStoreBag& edb,
                                const DataStoreBag& idbView);

// Aggregate evaluation over explicit sources: dedup the body's binding set,
// group by the group variable, fold the aggregate over each group.
std::vector<Fact> evalAggregateCore(const RuleExec& exec, const EvalInput& in);

}  // namespace stratlog
