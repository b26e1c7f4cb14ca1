#include "stratlog/engine.hpp"

#include <algorithm>
#include <chrono>
#include <iostream>
#include <sstream>

#include "stratlog/errors.hpp"
#include "stratlog/parser.hpp"

namespace stratlog {

std::uint64_t EvalStats::totalRuleEvals() const {
    std::uint64_t n = 0;
    for (const auto& [id, s] : perNode) n += s.ruleEvals;
    return n;
}

std::uint64_t EvalStats::totalDerived() const {
    std::uint64_t n = 0;
    for (const auto& [id, s] : perNode) n += s.derived;
    return n;
}

IdbDiff::IdbDiff()
    : added(std::make_shared<DataStore>()), removed(std::make_shared<DataStore>()) {}

IdbDiff diffIdb(const DataStore& before, const DataStore& after) {
    IdbDiff d;
    after.forEach([&](const Fact& f) {
        if (!before.contains(f)) d.added->insert(f);
    });
    before.forEach([&](const Fact& f) {
        if (!after.contains(f)) d.removed->insert(f);
    });
    return d;
}

std::string UpdateReport::summary() const {
    std::ostringstream os;
    os << kind << " dihn=[";
    for (std::size_t i = 0; i < dihn.size(); ++i) os << (i ? "," : "") << dihn[i];
    os << "] plan=[";
    for (std::size_t i = 0; i < plan.size(); ++i) os << (i ? "," : "") << plan[i];
    os << "]";
    for (const auto& d : deltas)
        os << " " << d.node << "(+" << d.added << "/-" << d.removed << "," << d.ruleEvals
           << " evals)";
    os << " " << seconds << "s";
    return os.str();
}

Engine::Engine() : edb_(std::make_shared<DataStore>()) {}

const Rule* Engine::findRule(const std::string& id) const {
    auto it = ruleIdx_.find(id);
    return it == ruleIdx_.end() ? nullptr : &rules_[it->second];
}

void Engine::assignIds(std::vector<Rule>& rules) {
    for (Rule& r : rules) {
        if (!r.id.empty()) continue;
        std::string id;
        do {
            id = "u" + std::to_string(nextAutoId_++);
        } while (ruleIdx_.count(id));
        r.id = id;
    }
}

void Engine::checkProgramConstraints(const std::vector<Rule>& all) const {
    std::set<std::string> ids;
    std::map<std::string, std::size_t> headCount;
    for (const Rule& r : all) {
        if (!ids.insert(r.id).second) throw DuplicateRuleError("duplicate rule id " + r.id);
        ++headCount[headKey(r)];
    }
    for (const Rule& r : all) {
        if (r.isAggregate() && headCount[headKey(r)] > 1)
            throw AggregateError("aggregate head predicate of " + r.id +
                                 " also appears in another rule's head");
    }
}

void Engine::rebuildStructures() {
    rdg_ = buildRdg(rules_);
    hrdg_ = buildHrdg(rdg_, rules_);
    topo_ = topologicalOrder(hrdg_);
}

void Engine::registerRules(std::vector<Rule> rules) {
    if (materialized_)
        throw EngineError("program already materialized; use addRules for live updates");
    assignIds(rules);
    std::vector<Rule> all = rules_;
    for (auto& r : rules) all.push_back(r);
    checkProgramConstraints(all);
    Rdg rdg = buildRdg(all);
    Hrdg hrdg = buildHrdg(rdg, all);  // throws on unsafe programs
    rules_ = std::move(all);
    ruleIdx_.clear();
    for (std::size_t i = 0; i < rules_.size(); ++i) ruleIdx_[rules_[i].id] = i;
    rdg_ = std::move(rdg);
    hrdg_ = std::move(hrdg);
    topo_ = topologicalOrder(hrdg_);
}

void Engine::registerRuleText(const std::string& text) { registerRules(parseRuleFile(text)); }

std::vector<const Rule*> Engine::nodeRules(const HyperNode& node) const {
    std::vector<const Rule*> out;
    out.reserve(node.rules.size());
    for (const auto& id : node.rules) out.push_back(findRule(id));
    return out;
}

std::set<std::string> Engine::nodeHeadKeys(const HyperNode& node) const {
    std::set<std::string> keys;
    for (const auto& id : node.rules) keys.insert(headKey(*findRule(id)));
    return keys;
}

FixpointOptions Engine::fixpointOptions(const std::string& label) const {
    FixpointOptions opt;
    opt.trace = options_.traceFixpoint;
    opt.explain = options_.explainPlans;
    opt.out = options_.out ? options_.out : &std::cerr;
    opt.label = label;
    return opt;
}

void Engine::runNodeFixpoint(HyperNode& node) {
    seminaiveFixpoint(nodeRules(node), node.edb, *node.idb, stats_.perNode[node.id],
                      fixpointOptions(node.id));
}

void Engine::wireBags() {
    for (auto& [id, node] : nodes_) {
        node.edb.clear();
        for (const auto& pred : hrdg_.predecessors(id)) node.edb.addStore(nodes_.at(pred).idb);
        node.edb.addStore(edb_);
        node.edb.refreshIndex();
    }
}

void Engine::rebuildIdbBag() {
    idbBag_.clear();
    for (const auto& id : topo_) idbBag_.addStore(nodes_.at(id).idb);
    idbBag_.refreshIndex();
}

void Engine::materialize() {
    rebuildStructures();
    nodes_.clear();
    idbBag_.clear();
    for (const auto& [id, members] : hrdg_.members) {
        HyperNode n;
        n.id = id;
        n.rules = members;
        n.idb = std::make_shared<DataStore>();
        nodes_.emplace(id, std::move(n));
    }
    for (const auto& id : topo_) {
        HyperNode& node = nodes_.at(id);
        node.edb.clear();
        for (const auto& pred : hrdg_.predecessors(id)) node.edb.addStore(nodes_.at(pred).idb);
        node.edb.addStore(edb_);
        node.edb.refreshIndex();
        runNodeFixpoint(node);
        idbBag_.addStore(node.idb);
        idbBag_.refreshIndex();
    }
    materialized_ = true;
}

// ---------------------------------------------------------------------------
// transactional state capture

struct Engine::Txn {
    explicit Txn(Engine& e) : e(e) {
        rules = e.rules_;
        ruleIdx = e.ruleIdx_;
        rdg = e.rdg_;
        hrdg = e.hrdg_;
        topo = e.topo_;
        nextAutoId = e.nextAutoId_;
        materialized = e.materialized_;
        stats = e.stats_;
        for (const auto& [id, node] : e.nodes_) nodeCore[id] = {node.rules, node.idb};
        bagStores = e.idbBag_.stores();
    }

    void backupStore(const DataStorePtr& s) {
        if (seen.insert(s.get()).second) pre.emplace_back(s, *s);
    }

    void commit() { committed = true; }

    ~Txn() {
        if (committed) return;
        for (auto& [ptr, copy] : pre) *ptr = std::move(copy);
        e.rules_ = std::move(rules);
        e.ruleIdx_ = std::move(ruleIdx);
        e.rdg_ = std::move(rdg);
        e.hrdg_ = std::move(hrdg);
        e.topo_ = std::move(topo);
        e.nextAutoId_ = nextAutoId;
        e.materialized_ = materialized;
        e.stats_ = std::move(stats);
        e.nodes_.clear();
        for (auto& [id, core] : nodeCore) {
            HyperNode n;
            n.id = id;
            n.rules = std::move(core.first);
            n.idb = std::move(core.second);
            e.nodes_.emplace(id, std::move(n));
        }
        e.wireBags();
        e.idbBag_.clear();
        for (auto& s : bagStores) e.idbBag_.addStore(s);
        e.idbBag_.refreshIndex();
    }

    Engine& e;
    std::vector<Rule> rules;
    std::map<std::string, std::size_t> ruleIdx;
    Rdg rdg;
    Hrdg hrdg;
    std::vector<std::string> topo;
    std::map<std::string, std::pair<std::vector<std::string>, DataStorePtr>> nodeCore;
    std::vector<DataStorePtr> bagStores;
    std::size_t nextAutoId = 1;
    bool materialized = false;
    EvalStats stats;
    std::vector<std::pair<DataStorePtr, DataStore>> pre;
    std::set<const DataStore*> seen;
    bool committed = false;
};

namespace {

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

bool referencesAnyKey(const Rule& r, const std::set<std::string>& keys) {
    auto hit = [&](const std::string& k) {
        for (const auto& key : keys)
            if (predKeysOverlap(k, key)) return true;
        return false;
    };
    for (const Atom& a : r.positive)
        if (hit(predKey(a))) return true;
    for (const Atom& a : r.negative)
        if (hit(predKey(a))) return true;
    return false;
}

}  // namespace

// Replaces the node map to match a new condensation. Nodes whose membership
// is unchanged are preserved (including their idb); all other nodes start
// fresh. When `mergeOldContent` is set (rule insertion), a fresh node absorbs
// the idbs of the old nodes it subsumes. Returns the changed node ids.
std::set<std::string> adoptPartitionImpl(std::map<std::string, HyperNode>& nodes,
                                         const Hrdg& newHrdg, bool mergeOldContent) {
    std::set<std::string> changed;
    std::map<std::string, HyperNode> next;
    for (const auto& [id, members] : newHrdg.members) {
        auto it = nodes.find(id);
        if (it != nodes.end() && it->second.rules == members) {
            next.emplace(id, std::move(it->second));
            continue;
        }
        HyperNode n;
        n.id = id;
        n.rules = members;
        n.idb = std::make_shared<DataStore>();
        if (mergeOldContent) {
            for (const auto& [oid, old] : nodes) {
                if (!old.idb || old.rules.empty()) continue;  // moved-from entry
                if (std::includes(members.begin(), members.end(), old.rules.begin(),
                                  old.rules.end())) {
                    old.idb->forEach([&](const Fact& f) { n.idb->insert(f); });
                }
            }
        }
        next.emplace(id, std::move(n));
        changed.insert(id);
    }
    nodes = std::move(next);
    return changed;
}

UpdateReport Engine::addRules(std::vector<Rule> newRules) {
    UpdateReport report;
    report.kind = "add-rules";
    if (newRules.empty()) return report;
    Timer timer;

    assignIds(newRules);
    for (const Rule& r : newRules)
        if (ruleIdx_.count(r.id)) throw DuplicateRuleError("duplicate rule id " + r.id);
    {
        std::vector<Rule> all = rules_;
        for (const auto& r : newRules) all.push_back(r);
        checkProgramConstraints(all);
    }
    if (!materialized_) {
        registerRules(std::move(newRules));
        report.kind = "register";
        report.seconds = timer.seconds();
        return report;
    }

    Txn txn(*this);
    std::set<std::string> newIds;
    for (const Rule& r : newRules) newIds.insert(r.id);
    for (auto& r : newRules) {
        ruleIdx_[r.id] = rules_.size();
        rules_.push_back(std::move(r));
    }
    rdg_ = buildRdg(rules_);
    hrdg_ = buildHrdg(rdg_, rules_);  // unsafe insertions are rejected here
    topo_ = topologicalOrder(hrdg_);

    std::set<std::string> before;
    for (const auto& [id, n] : nodes_) before.insert(id);
    std::set<std::string> dihn = adoptPartitionImpl(nodes_, hrdg_, /*mergeOldContent=*/true);
    for (const auto& [id, n] : nodes_)
        if (!before.count(id)) report.addedNodes.push_back(id);
    for (const auto& id : before)
        if (!nodes_.count(id)) report.removedNodes.push_back(id);
    wireBags();

    std::vector<std::string> plan = computePlan(dihn, hrdg_);
    report.dihn.assign(dihn.begin(), dihn.end());
    report.plan = plan;
    executePlan(report, dihn, plan, newIds, /*deletion=*/false, nullptr, txn);
    rebuildIdbBag();
    report.seconds = timer.seconds();
    txn.commit();
    return report;
}

UpdateReport Engine::addRuleText(const std::string& text) { return addRules(parseRuleFile(text)); }

UpdateReport Engine::removeRules(const std::vector<std::string>& ids) {
    UpdateReport report;
    report.kind = "del-rules";
    if (ids.empty()) return report;
    Timer timer;

    for (const auto& id : ids)
        if (!ruleIdx_.count(id)) throw UnknownRuleError("unknown rule id " + id);
    std::set<std::string> deleted(ids.begin(), ids.end());

    Txn txn(*this);
    {
        std::vector<Rule> kept;
        kept.reserve(rules_.size());
        for (auto& r : rules_)
            if (!deleted.count(r.id)) kept.push_back(std::move(r));
        rules_ = std::move(kept);
        ruleIdx_.clear();
        for (std::size_t i = 0; i < rules_.size(); ++i) ruleIdx_[rules_[i].id] = i;
    }

    if (!materialized_) {
        rebuildStructures();
        report.kind = "unregister";
        report.seconds = timer.seconds();
        txn.commit();
        return report;
    }

    // successors of dirty nodes, recorded against the pre-update graph
    std::set<std::string> dihn;
    for (const auto& [nid, node] : nodes_) {
        bool dirty = false;
        for (const auto& rid : node.rules)
            if (deleted.count(rid)) dirty = true;
        if (!dirty) continue;
        for (const auto& s : hrdg_.successors(nid)) dihn.insert(s);
    }

    rdg_ = buildRdg(rules_);
    hrdg_ = buildHrdg(rdg_, rules_);
    topo_ = topologicalOrder(hrdg_);

    std::set<std::string> before;
    for (const auto& [id, n] : nodes_) before.insert(id);
    std::set<std::string> changed = adoptPartitionImpl(nodes_, hrdg_, /*mergeOldContent=*/false);
    // drop successors that vanished with their nodes; splits join the set
    for (auto it = dihn.begin(); it != dihn.end();) {
        if (!nodes_.count(*it)) it = dihn.erase(it);
        else ++it;
    }
    dihn.insert(changed.begin(), changed.end());
    for (const auto& [id, n] : nodes_)
        if (!before.count(id)) report.addedNodes.push_back(id);
    for (const auto& id : before)
        if (!nodes_.count(id)) report.removedNodes.push_back(id);
    wireBags();

    std::vector<std::string> plan = computePlan(dihn, hrdg_);
    report.dihn.assign(dihn.begin(), dihn.end());
    report.plan = plan;
    executePlan(report, dihn, plan, {}, /*deletion=*/true, nullptr, txn);
    rebuildIdbBag();
    report.seconds = timer.seconds();
    txn.commit();
    return report;
}

UpdateReport Engine::insertFacts(const std::vector<Fact>& facts) {
    UpdateReport report;
    report.kind = "add-facts";
    Timer timer;
    if (!materialized_) {
        for (const Fact& f : facts) edb_->insert(f);
        report.kind = "load";
        report.seconds = timer.seconds();
        return report;
    }
    Txn txn(*this);
    txn.backupStore(edb_);
    IdbDiff edbDiff;
    for (const Fact& f : facts)
        if (edb_->insert(f)) edbDiff.added->insert(f);
    if (edbDiff.added->empty()) {
        report.seconds = timer.seconds();
        txn.commit();
        return report;
    }
    std::set<std::string> keys;
    edbDiff.added->forEach([&](const Fact& f) { keys.insert(predKeyOfFact(f)); });
    std::set<std::string> seeds;
    for (const auto& [nid, node] : nodes_)
        for (const Rule* r : nodeRules(node))
            if (referencesAnyKey(*r, keys)) seeds.insert(nid);
    std::vector<std::string> plan = computePlan(seeds, hrdg_);
    report.dihn.assign(seeds.begin(), seeds.end());
    report.plan = plan;
    executePlan(report, {}, plan, {}, false, &edbDiff, txn);
    rebuildIdbBag();
    report.seconds = timer.seconds();
    txn.commit();
    return report;
}

UpdateReport Engine::removeFacts(const std::vector<Fact>& facts) {
    UpdateReport report;
    report.kind = "del-facts";
    Timer timer;
    if (!materialized_) {
        for (const Fact& f : facts) edb_->remove(f);
        report.kind = "load";
        report.seconds = timer.seconds();
        return report;
    }
    Txn txn(*this);
    txn.backupStore(edb_);
    IdbDiff edbDiff;
    for (const Fact& f : facts)
        if (edb_->remove(f)) edbDiff.removed->insert(f);
    if (edbDiff.removed->empty()) {
        report.seconds = timer.seconds();
        txn.commit();
        return report;
    }
    std::set<std::string> keys;
    edbDiff.removed->forEach([&](const Fact& f) { keys.insert(predKeyOfFact(f)); });
    std::set<std::string> seeds;
    for (const auto& [nid, node] : nodes_)
        for (const Rule* r : nodeRules(node))
            if (referencesAnyKey(*r, keys)) seeds.insert(nid);
    std::vector<std::string> plan = computePlan(seeds, hrdg_);
    report.dihn.assign(seeds.begin(), seeds.end());
    report.plan = plan;
    executePlan(report, {}, plan, {}, true, &edbDiff, txn);
    rebuildIdbBag();
    report.seconds = timer.seconds();
    txn.commit();
    return report;
}

void Engine::executePlan(UpdateReport& report, const std::set<std::string>& dihn,
                         const std::vector<std::string>& plan,
                         const std::set<std::string>& newRuleIds, bool deletion,
                         const IdbDiff* edbDiff, Txn& txn) {
    std::map<std::string, IdbDiff> diffs;
    std::map<const DataStore*, const IdbDiff*> rewinds;
    if (edbDiff) rewinds[edb_.get()] = edbDiff;

    for (const std::string& nodeId : plan) {
        HyperNode& node = nodes_.at(nodeId);
        node.edb.refreshIndex();
        NodeStats& ns = stats_.perNode[nodeId];
        const std::uint64_t evalsBefore = ns.ruleEvals;
        IdbDiff diff;

        if (dihn.count(nodeId)) {
            txn.backupStore(node.idb);
            DataStore before = *node.idb;
            if (deletion) {
                // deletion inside a directly impacted node: full recomputation
                node.idb->clear();
                runNodeFixpoint(node);
            } else {
                // insertion: evaluate the new rules against edb + current idb,
                // then continue delta rounds over all rules of the node
                SourceList src;
                src.addBag(&node.edb);
                src.addStore(node.idb.get());
                EvalInput in{&src, &src};
                DataStore seed;
                auto novel = [&](const Fact& f) {
                    return !node.idb->contains(f) && !node.edb.contains(f);
                };
                for (const auto& rid : node.rules) {
                    if (!newRuleIds.count(rid)) continue;
                    const Rule& r = *findRule(rid);
                    ++ns.ruleEvals;
                    JoinPlan rulePlan = planRule(r, gatherStats(r, src));
                    if (options_.explainPlans)
                        *(options_.out ? options_.out : &std::cerr) << rulePlan.describe(r);
                    RuleExec exec(r, rulePlan);
                    auto sink = [&](const Fact& f) {
                        if (novel(f)) {
                            node.idb->insert(f);
                            seed.insert(f);
                        }
                    };
                    if (r.isAggregate()) {
                        for (const Fact& f : evalAggregateCore(exec, in)) sink(f);
                    } else {
                        exec.run(in, sink);
                    }
                }
                ns.derived += seed.size();
                continueRounds(nodeRules(node), node.edb, *node.idb, seed, ns,
                               fixpointOptions(nodeId));
            }
            diff = diffIdb(before, *node.idb);
        } else {
            DataStore upPlus, upMinus;
            for (const auto& pred : hrdg_.predecessors(nodeId)) {
                auto it = diffs.find(pred);
                if (it == diffs.end()) continue;
                it->second.added->forEach([&](const Fact& f) { upPlus.insert(f); });
                it->second.removed->forEach([&](const Fact& f) { upMinus.insert(f); });
            }
            if (edbDiff) {
                edbDiff->added->forEach([&](const Fact& f) { upPlus.insert(f); });
                edbDiff->removed->forEach([&](const Fact& f) { upMinus.insert(f); });
            }
            txn.backupStore(node.idb);
            diff = applyDataDelta(node, upPlus, upMinus, rewinds, ns);
        }

        auto [it, inserted] = diffs.emplace(nodeId, std::move(diff));
        rewinds[node.idb.get()] = &it->second;
        report.deltas.push_back(UpdateReport::NodeDelta{nodeId, it->second.added->size(),
                                                        it->second.removed->size(),
                                                        ns.ruleEvals - evalsBefore});
    }
}

IdbDiff Engine::applyDataDelta(HyperNode& node, const DataStore& upPlus, const DataStore& upMinus,
                               const std::map<const DataStore*, const IdbDiff*>& rewinds,
                               NodeStats& ns) {
    IdbDiff empty;

    // removed facts still visible through another source are not removals
    // for this node; removed facts of this node's own head predicates stay
    // in as rederivation candidates
    DataStore minusEff;
    upMinus.forEach([&](const Fact& f) {
        if (!node.edb.contains(f) && !node.idb->contains(f)) minusEff.insert(f);
    });
    if (minusEff.empty() && upPlus.empty()) return empty;

    // skip nodes that do not reference any changed predicate
    std::set<std::string> keys;
    upPlus.forEach([&](const Fact& f) { keys.insert(predKeyOfFact(f)); });
    minusEff.forEach([&](const Fact& f) { keys.insert(predKeyOfFact(f)); });
    auto rules = nodeRules(node);
    bool relevant = false;
    for (const Rule* r : rules)
        if (referencesAnyKey(*r, keys)) relevant = true;
    if (!relevant) return empty;

    DataStore before = *node.idb;

    bool hasAggregate = false;
    for (const Rule* r : rules)
        if (r->isAggregate()) hasAggregate = true;
    if (hasAggregate) {
        // aggregates are not incrementally maintainable in general (MED, AVG);
        // aggregate nodes are acyclic singletons, recompute them exactly
        node.idb->clear();
        seminaiveFixpoint(rules, node.edb, *node.idb, ns, fixpointOptions(node.id));
        return diffIdb(before, *node.idb);
    }

    // current sources (post-update upstream state)
    SourceList cur;
    cur.addBag(&node.edb);
    cur.addStore(node.idb.get());
    EvalInput curIn{&cur, &cur};

    // pre-update view: own idb snapshot plus upstream stores rewound by the
    // diffs recorded while executing the plan
    SourceList oldView;
    oldView.addStore(&before);
    for (const DataStorePtr& s : node.edb.stores()) {
        auto it = rewinds.find(s.get());
        if (it != rewinds.end()) {
            oldView.addStore(s.get(), /*hide=*/it->second->added.get());
            oldView.addStore(it->second->removed.get());
        } else {
            oldView.addStore(s.get());
        }
    }
    EvalInput oldIn{&oldView, &oldView};

    struct CompiledRule {
        const Rule* rule;
        std::unique_ptr<JoinPlan> plan;
        std::unique_ptr<RuleExec> exec;
    };
    std::vector<CompiledRule> compiled;
    for (const Rule* r : rules) {
        CompiledRule c;
        c.rule = r;
        c.plan = std::make_unique<JoinPlan>(planRule(*r, gatherStats(*r, cur)));
        c.exec = std::make_unique<RuleExec>(*r, *c.plan);
        compiled.push_back(std::move(c));
    }

    // --- deletion side: overdelete against the old view, then rederive ---
    DataStore overdel;
    if (!minusEff.empty() || !upPlus.empty()) {
        auto killSink = [&](DataStore& frontier) {
            return [&](const Fact& f) {
                if (before.contains(f) && !overdel.contains(f)) {
                    overdel.insert(f);
                    frontier.insert(f);
                }
            };
        };
        DataStore frontier;
        for (auto& c : compiled) {
            ++ns.ruleEvals;
            c.exec->runDelta(oldIn, minusEff, killSink(frontier));
            // additions to negated predicates invalidate derivations
            c.exec->runNegFlip(oldIn, upPlus, killSink(frontier));
        }
        while (!frontier.empty()) {
            DataStore next;
            for (auto& c : compiled) {
                ++ns.ruleEvals;
                c.exec->runDelta(oldIn, frontier, killSink(next));
            }
            frontier = std::move(next);
        }
        overdel.forEach([&](const Fact& f) { node.idb->remove(f); });

        // rederivation candidates: everything overdeleted plus removed input
        // facts whose predicate this node derives
        DataStore candidates = overdel;
        const std::set<std::string> headKeys = nodeHeadKeys(node);
        minusEff.forEach([&](const Fact& f) {
            if (headKeys.count(predKeyOfFact(f))) candidates.insert(f);
        });
        bool changed = !candidates.empty();
        while (changed) {
            changed = false;
            candidates.forEach([&](const Fact& f) {
                if (node.idb->contains(f) || node.edb.contains(f)) return;
                for (auto& c : compiled) {
                    if (c.exec->rederivable(curIn, f)) {
                        node.idb->insert(f);
                        changed = true;
                        break;
                    }
                }
            });
        }
    }

    // --- insertion side: new upstream facts and freed negation checks ---
    if (!upPlus.empty() || !minusEff.empty()) {
        DataStore seed;
        auto novel = [&](const Fact& f) {
            return !node.idb->contains(f) && !node.edb.contains(f);
        };
        auto sink = [&](const Fact& f) {
            if (novel(f)) {
                node.idb->insert(f);
                seed.insert(f);
            }
        };
        for (auto& c : compiled) {
            ++ns.ruleEvals;
            c.exec->runDelta(curIn, upPlus, sink);
            // removals from negated predicates free blocked derivations
            c.exec->runNegFlip(curIn, minusEff, sink);
        }
        ns.derived += seed.size();
        continueRounds(rules, node.edb, *node.idb, seed, ns, fixpointOptions(node.id));
    }

    return diffIdb(before, *node.idb);
}

std::vector<Fact> Engine::query(const Pattern& q) const {
    std::vector<Fact> out;
    matchAll(q, [&](const Value& s, const Value& o) { out.push_back(Fact{q.pred, s, o}); });
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t Engine::count(const Pattern& q) const {
    std::size_t n = 0;
    matchAll(q, [&](const Value&, const Value&) { ++n; });
    return n;
}

std::vector<Value> Engine::allPredicates() const {
    std::set<Value> preds;
    for (const auto& p : edb_->predicates()) preds.insert(p);
    for (const auto& p : idbBag_.predicates()) preds.insert(p);
    return {preds.begin(), preds.end()};
}

std::string Engine::dumpAll() const {
    std::set<std::string> lines;
    auto add = [&](const Fact& f) { lines.insert(renderFactTriple(f)); };
    edb_->forEach(add);
    for (const auto& s : idbBag_.stores()) s->forEach(add);
    std::string out;
    for (const auto& l : lines) {
        out += l;
        out += '\n';
    }
    return out;
}

}  // namespace stratlog
