// stratlog command line: load rule/fact files, materialize, apply live rule
// and fact updates, query, dump, generate synthetic data sets, and run the
// packaged benchmark scenarios.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "stratlog/engine.hpp"
#include "stratlog/errors.hpp"
#include "stratlog/generators.hpp"
#include "stratlog/parser.hpp"
#include "stratlog/rulesets.hpp"

using namespace stratlog;

namespace {

struct CommonOpts {
    std::vector<std::string> ruleFiles;
    std::vector<std::string> factFiles;
    std::string format = "auto";  // nt | dl | auto
    bool explainPlan = false;
    bool traceFixpoint = false;
    bool cumulative = false;
    std::string updateLog;
};

std::string readFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw EngineError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void writeFile(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw EngineError("cannot write " + path);
    out << content;
}

FactFormat formatFrom(const std::string& flag, const std::string& path) {
    if (flag == "nt") return FactFormat::Triples;
    if (flag == "dl") return FactFormat::Functional;
    return formatForPath(path);
}

struct Session {
    Engine engine;
    CommonOpts opts;

    void applyOptions() {
        engine.options().explainPlans = opts.explainPlan;
        engine.options().traceFixpoint = opts.traceFixpoint;
        engine.options().out = &std::cerr;
    }

    void loadRules(const std::string& path) {
        auto rules = parseRuleFile(readFile(path));
        if (engine.materialized()) {
            logUpdate(engine.addRules(std::move(rules)));
        } else {
            engine.registerRules(std::move(rules));
        }
        std::cout << engine.rules().size() << " rules, " << engine.hrdg().members.size()
                  << " hyper-nodes";
        std::size_t aggNodes = 0;
        for (const auto& [id, members] : engine.hrdg().members)
            for (const auto& rid : members)
                if (engine.findRule(rid)->isAggregate()) {
                    ++aggNodes;
                    break;
                }
        if (aggNodes) std::cout << " (" << aggNodes << " aggregate-bearing)";
        std::cout << "\n";
    }

    void loadFacts(const std::string& path) {
        auto facts = parseFacts(readFile(path), formatFrom(opts.format, path));
        if (engine.materialized()) {
            logUpdate(engine.insertFacts(facts));
        } else {
            for (const Fact& f : facts) engine.edb().insert(f);
        }
        std::cout << facts.size() << " facts (" << engine.edb().size() << " total)\n";
    }

    void materialize() {
        auto t0 = std::chrono::steady_clock::now();
        engine.materialize();
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::size_t total = 0;
        for (const auto& id : engine.topoOrder()) {
            const auto& node = engine.nodes().at(id);
            std::cout << "  " << id << ": " << node.idb->size() << " derived\n";
            total += node.idb->size();
        }
        std::cout << total << " derived in " << engine.hrdg().members.size() << " hyper-nodes, "
                  << secs << "s\n";
        printPredicateTotals();
    }

    void printPredicateTotals() {
        for (const Value& p : engine.allPredicates())
            std::cout << "  " << p.text() << ": " << engine.count(Pattern::all(p)) << "\n";
    }

    void printReport(const UpdateReport& rep) {
        std::cout << rep.kind << ": dihn=[";
        for (std::size_t i = 0; i < rep.dihn.size(); ++i)
            std::cout << (i ? "," : "") << rep.dihn[i];
        std::cout << "] plan=[";
        for (std::size_t i = 0; i < rep.plan.size(); ++i)
            std::cout << (i ? "," : "") << rep.plan[i];
        std::cout << "]\n";
        for (const auto& d : rep.deltas)
            std::cout << "  " << d.node << ": +" << d.added << " -" << d.removed << " ("
                      << d.ruleEvals << " rule evals)\n";
        if (!rep.addedNodes.empty()) {
            std::cout << "  new nodes:";
            for (const auto& n : rep.addedNodes) std::cout << " " << n;
            std::cout << "\n";
        }
        if (!rep.removedNodes.empty()) {
            std::cout << "  dropped nodes:";
            for (const auto& n : rep.removedNodes) std::cout << " " << n;
            std::cout << "\n";
        }
        std::cout << "  " << rep.seconds << "s\n";
    }

    void logUpdate(const UpdateReport& rep) {
        printReport(rep);
        if (opts.updateLog.empty()) return;
        std::ofstream out(opts.updateLog, std::ios::app);
        out << rep.summary() << "\n";
    }

    void resetCountersUnlessCumulative() {
        if (!opts.cumulative) engine.stats().clear();
    }
};

int runRepl(Session& s) {
    std::string line;
    while (std::getline(std::cin, line)) {
        std::istringstream is(line);
        std::string cmd;
        is >> cmd;
        if (cmd.empty() || cmd[0] == '#') continue;
        std::string rest;
        std::getline(is, rest);
        while (!rest.empty() && rest.front() == ' ') rest.erase(rest.begin());
        try {
            s.resetCountersUnlessCumulative();
            if (cmd == "quit" || cmd == "exit") break;
            if (cmd == "help") {
                std::cout << "commands: load rules <path> | load facts <path> | materialize | "
                             "add-rule <rule> | del-rule <id> | add-fact <fact> | del-fact <fact> "
                             "| query <pattern> | dump [path] | export-graph [path] | stats | "
                             "quit\n";
            } else if (cmd == "load") {
                std::istringstream rs(rest);
                std::string kind, path;
                rs >> kind >> path;
                if (kind == "rules") s.loadRules(path);
                else if (kind == "facts") s.loadFacts(path);
                else std::cout << "expected: load rules|facts <path>\n";
            } else if (cmd == "materialize") {
                s.materialize();
            } else if (cmd == "add-rule") {
                s.logUpdate(s.engine.addRuleText(rest));
            } else if (cmd == "del-rule") {
                std::istringstream rs(rest);
                std::vector<std::string> ids;
                std::string id;
                while (rs >> id) ids.push_back(id);
                s.logUpdate(s.engine.removeRules(ids));
            } else if (cmd == "add-fact") {
                s.logUpdate(s.engine.insertFacts({parseFact(rest)}));
            } else if (cmd == "del-fact") {
                s.logUpdate(s.engine.removeFacts({parseFact(rest)}));
            } else if (cmd == "query") {
                auto results = s.engine.query(parsePattern(rest));
                for (const Fact& f : results) std::cout << renderFactFunctional(f) << "\n";
                std::cout << results.size() << " results\n";
            } else if (cmd == "dump") {
                if (rest.empty()) std::cout << s.engine.dumpAll();
                else writeFile(rest, s.engine.dumpAll());
            } else if (cmd == "export-graph") {
                std::string dot = rdgToDot(s.engine.rdg()) + hrdgToDot(s.engine.hrdg());
                if (rest.empty()) std::cout << dot;
                else writeFile(rest, dot);
            } else if (cmd == "stats") {
                for (const auto& [id, ns] : s.engine.stats().perNode)
                    std::cout << "  " << id << ": " << ns.ruleEvals << " rule evals, "
                              << ns.derived << " derived, " << ns.rounds << " rounds\n";
                std::cout << "total: " << s.engine.stats().totalRuleEvals() << " rule evals, "
                          << s.engine.stats().totalDerived() << " derived\n";
            } else {
                std::cout << "unknown command '" << cmd << "' (try: help)\n";
            }
        } catch (const EngineError& e) {
            std::cout << "error: " << e.what() << "\n";
        }
    }
    return 0;
}

// ---------------------------------------------------------------------------
// bench scenarios

std::set<Fact> visibleSet(const Engine& e) {
    std::set<Fact> s;
    e.edb().forEach([&](const Fact& f) { s.insert(f); });
    for (const auto& st : e.idb().stores()) st->forEach([&](const Fact& f) { s.insert(f); });
    return s;
}

double materializeInto(Engine& e, const std::string& rulesText, const std::vector<Fact>& facts) {
    if (!rulesText.empty()) e.registerRuleText(rulesText);
    for (const Fact& f : facts) e.edb().insert(f);
    auto t0 = std::chrono::steady_clock::now();
    e.materialize();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void reportMismatch(const std::set<Fact>& got, const std::set<Fact>& want) {
    std::size_t shown = 0;
    for (const Fact& f : want) {
        if (!got.count(f) && shown < 5) {
            std::cout << "  missing: " << renderFactTriple(f) << "\n";
            ++shown;
        }
    }
    for (const Fact& f : got) {
        if (!want.count(f) && shown < 10) {
            std::cout << "  extra:   " << renderFactTriple(f) << "\n";
            ++shown;
        }
    }
}

// leave-one-out insertion or plain deletion of one rule, verified against a
// from-scratch materialization
bool runRuleScenario(const std::string& rulesText, const std::string& ruleId, bool insertion,
                     std::size_t n, std::uint64_t seed) {
    MultiRelSpec spec;
    spec.n = n;
    spec.seed = seed;
    auto facts = generateMultiRel(spec);
    auto rules = parseRuleFile(rulesText);
    const Rule* target = nullptr;
    for (const auto& r : rules)
        if (r.id == ruleId) target = &r;
    if (!target) {
        std::cout << "unknown rule id " << ruleId << "\n";
        return false;
    }
    std::vector<Rule> without;
    for (const auto& r : rules)
        if (r.id != ruleId) without.push_back(r);

    double incSecs = 0, scratchSecs = 0;
    std::set<Fact> incremental, scratch;
    if (insertion) {
        Engine base;
        base.registerRules(without);
        for (const Fact& f : facts) base.edb().insert(f);
        base.materialize();
        auto t0 = std::chrono::steady_clock::now();
        base.addRules({*target});
        incSecs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        incremental = visibleSet(base);

        Engine o;
        scratchSecs = materializeInto(o, rulesText, facts);
        scratch = visibleSet(o);
    } else {
        Engine base;
        base.registerRules(rules);
        for (const Fact& f : facts) base.edb().insert(f);
        base.materialize();
        auto t0 = std::chrono::steady_clock::now();
        base.removeRules({ruleId});
        incSecs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        incremental = visibleSet(base);

        Engine o;
        o.registerRules(without);
        for (const Fact& f : facts) o.edb().insert(f);
        auto t1 = std::chrono::steady_clock::now();
        o.materialize();
        scratchSecs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t1).count();
        scratch = visibleSet(o);
    }
    bool ok = incremental == scratch;
    std::cout << (insertion ? "insert " : "delete ") << ruleId << ": " << (ok ? "PASS" : "FAIL")
              << "  incremental=" << incSecs << "s from-scratch=" << scratchSecs << "s\n";
    if (!ok) reportMismatch(incremental, scratch);
    return ok;
}

bool runRs1Scale(const std::vector<std::size_t>& sizes, std::uint64_t seed) {
    bool ok = true;
    std::vector<double> times;
    std::vector<std::size_t> counts;
    for (std::size_t n : sizes) {
        ChainSpec spec;
        spec.n = n;
        spec.seed = seed;
        Engine e;
        double secs = materializeInto(e, rulesets::rs1(), generateChain(spec));
        std::size_t derived = e.count(parsePattern("hasNeighbour(?, ?)"));
        bool match = derived == n * (n - 1);
        ok = ok && match;
        std::cout << "n=" << n << ": hasNeighbour=" << derived << " expect=" << n * (n - 1)
                  << (match ? " PASS" : " FAIL") << "  " << secs << "s\n";
        times.push_back(secs);
        counts.push_back(derived);
    }
    if (sizes.size() >= 2) {
        double countSlope =
            std::log(static_cast<double>(counts.back()) / static_cast<double>(counts.front())) /
            std::log(static_cast<double>(sizes.back()) / static_cast<double>(sizes.front()));
        double timeSlope =
            std::log(times.back() / times.front()) /
            std::log(static_cast<double>(sizes.back()) / static_cast<double>(sizes.front()));
        std::cout << "count log-log slope=" << countSlope << " time log-log slope=" << timeSlope
                  << " (soft expectation: ~2)\n";
    }
    return ok;
}

bool runRs1Data(std::size_t n, const std::vector<std::size_t>& percents, std::uint64_t seed) {
    bool ok = true;
    for (std::size_t pct : percents) {
        const std::size_t extra = n * pct / 100;
        ChainSpec baseSpec;
        baseSpec.n = n;
        baseSpec.seed = seed;
        ChainSpec extSpec;
        extSpec.n = n + extra;
        extSpec.seed = seed;

        auto baseFacts = generateChain(baseSpec);
        auto fullFacts = generateChain(extSpec);
        std::vector<Fact> extensionFacts;
        {
            std::set<Fact> baseSet(baseFacts.begin(), baseFacts.end());
            for (const Fact& f : fullFacts)
                if (!baseSet.count(f)) extensionFacts.push_back(f);
        }

        Engine e;
        materializeInto(e, rulesets::rs1(), baseFacts);
        auto beforeInsert = visibleSet(e);

        auto t0 = std::chrono::steady_clock::now();
        e.insertFacts(extensionFacts);
        double insertSecs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        Engine oracleFull;
        materializeInto(oracleFull, rulesets::rs1(), fullFacts);
        bool okInsert = visibleSet(e) == visibleSet(oracleFull);

        auto t1 = std::chrono::steady_clock::now();
        e.removeFacts(extensionFacts);
        double deleteSecs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t1).count();
        bool okDelete = visibleSet(e) == beforeInsert;

        ok = ok && okInsert && okDelete;
        std::cout << "+" << pct << "%: insert " << (okInsert ? "PASS" : "FAIL") << " ("
                  << insertSecs << "s), delete " << (okDelete ? "PASS" : "FAIL") << " ("
                  << deleteSecs << "s)"
                  << (deleteSecs >= insertSecs ? "" : "  [note: delete faster than insert]")
                  << "\n";
    }
    return ok;
}

std::vector<std::string> benchScenarioList() {
    std::vector<std::string> out = {"rs1-scale", "rs1-data"};
    for (int i = 1; i <= 18; ++i) {
        out.push_back("rs2-insert-r" + std::to_string(i));
        out.push_back("rs2-delete-r" + std::to_string(i));
    }
    for (const char* id : {"r6", "r10"}) {
        out.push_back(std::string("rs3-insert-") + id);
        out.push_back(std::string("rs3-delete-") + id);
    }
    out.push_back("rs2-insert-all");
    out.push_back("rs2-delete-all");
    return out;
}

int runBench(const std::string& scenario, std::size_t n, std::uint64_t seed) {
    bool ok = false;
    bool known = true;
    if (scenario == "rs1-scale") {
        ok = runRs1Scale({10, 50, 100, 200}, seed);
    } else if (scenario == "rs1-data") {
        ok = runRs1Data(n == 0 ? 200 : n, {10, 20, 30, 40, 50}, seed);
    } else if (scenario == "rs2-insert-all" || scenario == "rs2-delete-all") {
        const bool insertion = scenario == "rs2-insert-all";
        ok = true;
        for (int i = 1; i <= 18; ++i)
            ok = runRuleScenario(rulesets::rs2(), "r" + std::to_string(i), insertion,
                                 n == 0 ? 100 : n, seed) &&
                 ok;
    } else {
        auto tryPrefix = [&](const std::string& prefix, const std::string& rules, bool insertion) {
            if (scenario.rfind(prefix, 0) != 0) return false;
            ok = runRuleScenario(rules, scenario.substr(prefix.size()), insertion,
                                 n == 0 ? 100 : n, seed);
            return true;
        };
        known = tryPrefix("rs2-insert-", rulesets::rs2(), true) ||
                tryPrefix("rs2-delete-", rulesets::rs2(), false) ||
                tryPrefix("rs3-insert-", rulesets::rs3(), true) ||
                tryPrefix("rs3-delete-", rulesets::rs3(), false);
    }
    if (!known) {
        std::cout << "unknown scenario " << scenario << "; try --list\n";
        return 1;
    }
    std::cout << "verdict: " << (ok ? "PASS" : "FAIL") << "\n";
    return ok ? 0 : 1;
}

Session makeSession(const CommonOpts& opts) {
    Session s;
    s.opts = opts;
    s.applyOptions();
    for (const auto& path : opts.ruleFiles) s.loadRules(path);
    for (const auto& path : opts.factFiles) s.loadFacts(path);
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stratlog: an incremental Datalog engine over binary predicates"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::uint64_t seed = 1;
    app.add_option("--seed", seed, "generator seed")->capture_default_str();

    auto addCommon = [&](CLI::App* cmd, bool facts = true) {
        cmd->add_option("--rules", opts.ruleFiles, "rule file(s)");
        if (facts) cmd->add_option("--facts", opts.factFiles, "fact file(s)");
        cmd->add_option("--format", opts.format, "fact file format: nt|dl|auto");
        cmd->add_flag("--explain-plan", opts.explainPlan, "print join plans");
        cmd->add_flag("--trace-fixpoint", opts.traceFixpoint, "print per-round delta sizes");
        cmd->add_flag("--cumulative", opts.cumulative, "do not reset counters per command");
        cmd->add_option("--update-log", opts.updateLog, "append update reports to this file");
    };

    auto* cmdLoad = app.add_subcommand("load", "parse and register rules/facts, print summary");
    addCommon(cmdLoad);

    auto* cmdMat = app.add_subcommand("materialize", "run full materialization");
    addCommon(cmdMat);
    std::string dumpPath;
    cmdMat->add_option("--dump", dumpPath, "write sorted triples to this path");

    auto* cmdAddRule = app.add_subcommand("add-rule", "materialize, then insert rule(s) live");
    addCommon(cmdAddRule);
    std::vector<std::string> ruleTexts;
    std::string ruleFile;
    cmdAddRule->add_option("--rule", ruleTexts, "rule text");
    cmdAddRule->add_option("--rule-file", ruleFile, "file with rules to insert");

    auto* cmdDelRule = app.add_subcommand("del-rule", "materialize, then delete rule(s) live");
    addCommon(cmdDelRule);
    std::vector<std::string> delIds;
    cmdDelRule->add_option("--id", delIds, "rule id(s) to delete");

    auto* cmdAddFact = app.add_subcommand("add-fact", "materialize, then insert fact(s) live");
    addCommon(cmdAddFact);
    std::vector<std::string> factTexts;
    std::string factFile;
    cmdAddFact->add_option("--fact", factTexts, "fact text");
    cmdAddFact->add_option("--fact-file", factFile, "file with facts to insert");

    auto* cmdDelFact = app.add_subcommand("del-fact", "materialize, then delete fact(s) live");
    addCommon(cmdDelFact);
    std::vector<std::string> delFactTexts;
    std::string delFactFile;
    cmdDelFact->add_option("--fact", delFactTexts, "fact text");
    cmdDelFact->add_option("--fact-file", delFactFile, "file with facts to delete");

    auto* cmdQuery = app.add_subcommand("query", "materialize, then match a pattern");
    addCommon(cmdQuery);
    std::string pattern;
    cmdQuery->add_option("pattern", pattern, "pattern p(s|?, o|?)")->required();

    auto* cmdDump = app.add_subcommand("dump", "materialize, then dump sorted triples");
    addCommon(cmdDump);
    std::string dumpOut;
    cmdDump->add_option("--out", dumpOut, "output path (default stdout)");

    auto* cmdGraph = app.add_subcommand("export-graph", "emit RDG and HRDG in DOT form");
    addCommon(cmdGraph, /*facts=*/false);
    std::string graphOut;
    cmdGraph->add_option("--out", graphOut, "output path (default stdout)");

    auto* cmdGen = app.add_subcommand("generate", "produce a synthetic fact file");
    std::string genKind, genOut;
    std::size_t genN = 10;
    double anomalyTemp = 30.0;
    MultiRelSpec mrDefaults;
    std::size_t p1SegLen = mrDefaults.p1SegLen, p2SegLen = mrDefaults.p2SegLen;
    std::size_t anomalyIdxRaw = 0;
    cmdGen->add_option("kind", genKind, "chain-ds1 | multirel-ds2")->required();
    cmdGen->add_option("--n", genN, "entity count")->required();
    cmdGen->add_option("--out", genOut, "output path")->required();
    cmdGen->add_option("--anomaly-index", anomalyIdxRaw, "turbine with an anomalous reading");
    cmdGen->add_option("--anomaly-temp", anomalyTemp, "anomalous temperature");
    cmdGen->add_option("--p1-seg", p1SegLen, "p1 segment length");
    cmdGen->add_option("--p2-seg", p2SegLen, "p2 segment length");

    auto* cmdBench = app.add_subcommand("bench", "run a packaged benchmark scenario");
    std::string scenario;
    std::size_t benchN = 0;
    bool listScenarios = false;
    cmdBench->add_option("scenario", scenario, "scenario id");
    cmdBench->add_option("--n", benchN, "entity count override");
    cmdBench->add_flag("--list", listScenarios, "list scenario ids");

    auto* cmdStats = app.add_subcommand("stats", "materialize and print evaluation counters");
    addCommon(cmdStats);

    auto* cmdRepl = app.add_subcommand("repl", "interactive session on stdin");
    addCommon(cmdRepl);

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmdGen->parsed()) {
            if (genN < 2) throw EngineError("--n must be at least 2");
            std::vector<Fact> facts;
            if (genKind == "chain-ds1") {
                ChainSpec spec;
                spec.n = genN;
                spec.seed = seed;
                if (anomalyIdxRaw) spec.anomalyIndex = anomalyIdxRaw;
                spec.anomalyTemp = anomalyTemp;
                facts = generateChain(spec);
            } else if (genKind == "multirel-ds2") {
                MultiRelSpec spec;
                spec.n = genN;
                spec.seed = seed;
                spec.p1SegLen = p1SegLen;
                spec.p2SegLen = p2SegLen;
                facts = generateMultiRel(spec);
            } else {
                throw EngineError("unknown generator kind " + genKind);
            }
            writeFile(genOut, factsToTriples(facts));
            std::cout << facts.size() << " facts -> " << genOut << "\n";
            return 0;
        }
        if (cmdBench->parsed()) {
            if (listScenarios) {
                for (const auto& sc : benchScenarioList()) std::cout << sc << "\n";
                return 0;
            }
            if (scenario.empty()) throw EngineError("bench needs a scenario id (or --list)");
            return runBench(scenario, benchN, seed);
        }

        Session s = makeSession(opts);
        if (cmdLoad->parsed()) {
            if (opts.ruleFiles.empty() && opts.factFiles.empty()) std::cout << "0 rules\n";
            return 0;
        }
        if (cmdRepl->parsed()) return runRepl(s);

        if (cmdMat->parsed()) {
            s.materialize();
            if (!dumpPath.empty()) writeFile(dumpPath, s.engine.dumpAll());
            return 0;
        }
        if (cmdAddRule->parsed()) {
            s.materialize();
            s.resetCountersUnlessCumulative();
            std::string text;
            for (const auto& t : ruleTexts) text += t + "\n";
            if (!ruleFile.empty()) text += readFile(ruleFile);
            s.logUpdate(s.engine.addRuleText(text));
            return 0;
        }
        if (cmdDelRule->parsed()) {
            s.materialize();
            s.resetCountersUnlessCumulative();
            s.logUpdate(s.engine.removeRules(delIds));
            return 0;
        }
        if (cmdAddFact->parsed() || cmdDelFact->parsed()) {
            s.materialize();
            s.resetCountersUnlessCumulative();
            const bool deleting = cmdDelFact->parsed();
            std::vector<Fact> facts;
            for (const auto& t : deleting ? delFactTexts : factTexts) facts.push_back(parseFact(t));
            const std::string& file = deleting ? delFactFile : factFile;
            if (!file.empty())
                for (const Fact& f : parseFacts(readFile(file), formatFrom(opts.format, file)))
                    facts.push_back(f);
            s.logUpdate(deleting ? s.engine.removeFacts(facts) : s.engine.insertFacts(facts));
            return 0;
        }
        if (cmdQuery->parsed()) {
            s.materialize();
            auto results = s.engine.query(parsePattern(pattern));
            for (const Fact& f : results) std::cout << renderFactFunctional(f) << "\n";
            std::cout << results.size() << " results\n";
            return 0;
        }
        if (cmdDump->parsed()) {
            s.materialize();
            if (dumpOut.empty()) std::cout << s.engine.dumpAll();
            else writeFile(dumpOut, s.engine.dumpAll());
            return 0;
        }
        if (cmdGraph->parsed()) {
            std::string dot = rdgToDot(s.engine.rdg()) + hrdgToDot(s.engine.hrdg());
            if (graphOut.empty()) std::cout << dot;
            else writeFile(graphOut, dot);
            return 0;
        }
        if (cmdStats->parsed()) {
            s.materialize();
            for (const auto& [id, ns] : s.engine.stats().perNode)
                std::cout << "  " << id << ": " << ns.ruleEvals << " rule evals, " << ns.derived
                          << " derived, " << ns.rounds << " rounds\n";
            std::cout << "total: " << s.engine.stats().totalRuleEvals() << " rule evals, "
                      << s.engine.stats().totalDerived() << " derived\n";
            return 0;
        }
    } catch (const EngineError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
