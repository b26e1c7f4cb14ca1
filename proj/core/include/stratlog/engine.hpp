#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "stratlog/depgraph.hpp"
#include "stratlog/eval.hpp"

namespace stratlog {

struct EvalStats {
    std::map<std::string, NodeStats> perNode;

    std::uint64_t totalRuleEvals() const;
    std::uint64_t totalDerived() const;
    void clear() { perNode.clear(); }
};

struct IdbDiff {
    DataStorePtr added;
    DataStorePtr removed;

    IdbDiff();
    bool empty() const { return added->empty() && removed->empty(); }
};

IdbDiff diffIdb(const DataStore& before, const DataStore& after);

// A reasoning unit: one SCC of the rule dependency graph, its derived facts
// (idb), and a handle bag over its inputs (predecessor idbs + program EDB).
struct HyperNode {
    std::string id;
    std::vector<std::string> rules;  // sorted member rule ids
    DataStorePtr idb;
    DataStoreBag edb;
};

struct UpdateReport {
    std::string kind;  // add-rules / del-rules / add-facts / del-facts
    std::vector<std::string> dihn;  // directly impacted nodes, sorted
    std::vector<std::string> plan;  // execution order
    struct NodeDelta {
        std::string node;
        std::size_t added = 0;
        std::size_t removed = 0;
        std::uint64_t ruleEvals = 0;
    };
    std::vector<NodeDelta> deltas;
    std::vector<std::string> addedNodes;    // created by merge/split/insert
    std::vector<std::string> removedNodes;  // dropped or replaced
    double seconds = 0.0;

    std::string summary() const;  // one line, for the update log
};

struct EngineOptions {
    bool explainPlans = false;
    bool traceFixpoint = false;
    std::ostream* out = nullptr;  // defaults to std::cerr when tracing
};

// Materializes a Datalog program over binary predicates and maintains the
// materialization under fact and rule updates. Single writer: one update
// runs to completion (or rolls back) before the next.
class Engine {
public:
    Engine();

    EngineOptions& options() { return options_; }

    // Registration. Rules with empty ids get sequential ones. Validates
    // program-level constraints and rebuilds the dependency structures;
    // throws DuplicateRuleError, AggregateError or UnsafeProgramError.
    void registerRules(std::vector<Rule> rules);
    void registerRuleText(const std::string& text);

    const std::vector<Rule>& rules() const { return rules_; }
    const Rule* findRule(const std::string& id) const;

    DataStore& edb() { return *edb_; }
    const DataStore& edb() const { return *edb_; }
    DataStorePtr edbHandle() const { return edb_; }
    const DataStoreBag& idb() const { return idbBag_; }
    bool materialized() const { return materialized_; }

    const Rdg& rdg() const { return rdg_; }
    const Hrdg& hrdg() const { return hrdg_; }
    const std::map<std::string, HyperNode>& nodes() const { return nodes_; }
    const std::vector<std::string>& topoOrder() const { return topo_; }

    // Full materialization (Algorithm: build RDG, condense, order, then one
    // semi-naive fixpoint per hyper-node in topological order).
    void materialize();

    // Incremental rule updates. State is restored on any failure.
    UpdateReport addRules(std::vector<Rule> newRules);
    UpdateReport addRuleText(const std::string& text);
    UpdateReport removeRules(const std::vector<std::string>& ids);

    // Incremental fact updates against the materialization. Absent facts are
    // ignored on delete; duplicate facts are ignored on insert.
    UpdateReport insertFacts(const std::vector<Fact>& facts);
    UpdateReport removeFacts(const std::vector<Fact>& facts);

    // Queries over EDB plus IDB with duplicate suppression.
    std::vector<Fact> query(const Pattern& q) const;
    std::size_t count(const Pattern& q) const;
    template <typename Sink>
    void matchAll(const Pattern& q, Sink&& sink) const {
        std::unordered_set<Fact> seen;
        edb_->match(q, [&](const Value& s, const Value& o) {
            if (seen.insert(Fact{q.pred, s, o}).second) sink(s, o);
        });
        idbBag_.match(q, [&](const Value& s, const Value& o) {
            if (seen.insert(Fact{q.pred, s, o}).second) sink(s, o);
        });
    }
    std::vector<Value> allPredicates() const;

    // Sorted triple lines of EDB plus IDB (deduplicated).
    std::string dumpAll() const;

    EvalStats& stats() { return stats_; }
    const EvalStats& stats() const { return stats_; }

private:
    struct StructureSnapshot;
    struct Txn;

    void assignIds(std::vector<Rule>& rules);
    void checkProgramConstraints(const std::vector<Rule>& all) const;
    void rebuildStructures();  // rdg_, hrdg_, fresh nodes (idbs kept by id when present)
    void wireBags();
    void runNodeFixpoint(HyperNode& node);
    FixpointOptions fixpointOptions(const std::string& label) const;
    void rebuildIdbBag();
    std::vector<const Rule*> nodeRules(const HyperNode& node) const;
    std::set<std::string> nodeHeadKeys(const HyperNode& node) const;

    // Per-node data-incremental maintenance: DRed-style overdelete/rederive
    // for removals and negation flips, semi-naive continuation for additions.
    IdbDiff applyDataDelta(HyperNode& node, const DataStore& upPlus, const DataStore& upMinus,
                           const std::map<const DataStore*, const IdbDiff*>& rewinds,
                           NodeStats& stats);

    void executePlan(UpdateReport& report, const std::set<std::string>& dihn,
                     const std::vector<std::string>& plan,
                     const std::set<std::string>& newRuleIds, bool deletion,
                     const IdbDiff* edbDiff, Txn& txn);

    std::vector<Rule> rules_;
    std::map<std::string, std::size_t> ruleIdx_;
    DataStorePtr edb_;
    Rdg rdg_;
    Hrdg hrdg_;
    std::map<std::string, HyperNode> nodes_;
    std::vector<std::string> topo_;
    DataStoreBag idbBag_;
    bool materialized_ = false;
    std::size_t nextAutoId_ = 1;
    EvalStats stats_;
    EngineOptions options_;
};

}  // namespace stratlog
