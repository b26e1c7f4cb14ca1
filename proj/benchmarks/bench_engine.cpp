#include <benchmark/benchmark.h>

#include "stratlog/engine.hpp"
#include "stratlog/generators.hpp"
#include "stratlog/parser.hpp"
#include "stratlog/rulesets.hpp"

using namespace stratlog;

namespace {

void BM_MaterializeClosure(benchmark::State& state) {
    ChainSpec spec;
    spec.n = static_cast<std::size_t>(state.range(0));
    spec.seed = 7;
    auto facts = generateChain(spec);
    for (auto _ : state) {
        Engine e;
        e.registerRuleText(rulesets::rs1());
        for (const Fact& f : facts) e.edb().insert(f);
        e.materialize();
        benchmark::DoNotOptimize(e.idb().stores().size());
    }
}
BENCHMARK(BM_MaterializeClosure)->Arg(30)->Arg(60)->Unit(benchmark::kMillisecond);

void BM_LeafRuleInsert(benchmark::State& state) {
    MultiRelSpec spec;
    spec.n = 60;
    spec.seed = 11;
    auto facts = generateMultiRel(spec);
    auto rules = parseRuleFile(rulesets::rs2());
    Rule leaf = rules.back();  // r18
    rules.pop_back();
    for (auto _ : state) {
        state.PauseTiming();
        Engine e;
        e.registerRules(rules);
        for (const Fact& f : facts) e.edb().insert(f);
        e.materialize();
        state.ResumeTiming();
        auto report = e.addRules({leaf});
        benchmark::DoNotOptimize(report.deltas.size());
    }
}
BENCHMARK(BM_LeafRuleInsert)->Unit(benchmark::kMillisecond);

void BM_DataInsertChain(benchmark::State& state) {
    ChainSpec spec;
    spec.n = 40;
    spec.seed = 7;
    auto facts = generateChain(spec);
    Fact extension{Value::iri("hasNeighbour"), Value::iri(entityName(40)),
                   Value::iri(entityName(41))};
    for (auto _ : state) {
        state.PauseTiming();
        Engine e;
        e.registerRuleText(rulesets::rs1());
        for (const Fact& f : facts) e.edb().insert(f);
        e.materialize();
        state.ResumeTiming();
        auto report = e.insertFacts({extension});
        benchmark::DoNotOptimize(report.deltas.size());
    }
}
BENCHMARK(BM_DataInsertChain)->Unit(benchmark::kMillisecond);

}  // namespace
