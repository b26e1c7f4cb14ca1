#include <benchmark/benchmark.h>

#include "stratlog/datastore.hpp"
#include "stratlog/datastorebag.hpp"
#include "stratlog/generators.hpp"

using namespace stratlog;

namespace {

std::vector<Fact> chainFacts(std::size_t n) {
    ChainSpec spec;
    spec.n = n;
    spec.seed = 7;
    return generateChain(spec);
}

void BM_StoreInsert(benchmark::State& state) {
    auto facts = chainFacts(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        DataStore ds;
        for (const Fact& f : facts) ds.insert(f);
        benchmark::DoNotOptimize(ds.size());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(facts.size()));
}
BENCHMARK(BM_StoreInsert)->Arg(1000)->Arg(10000);

void BM_StoreMatchSubject(benchmark::State& state) {
    auto facts = chainFacts(static_cast<std::size_t>(state.range(0)));
    DataStore ds;
    for (const Fact& f : facts) ds.insert(f);
    Pattern q{Value::iri("hasNeighbour"), Value::iri(entityName(2)), std::nullopt};
    for (auto _ : state) {
        std::size_t n = 0;
        ds.match(q, [&](const Value&, const Value&) { ++n; });
        benchmark::DoNotOptimize(n);
    }
}
BENCHMARK(BM_StoreMatchSubject)->Arg(10000);

void BM_BagMatchIndexed(benchmark::State& state) {
    DataStoreBag bag;
    for (int i = 0; i < 16; ++i) {
        auto ds = std::make_shared<DataStore>();
        for (const Fact& f : chainFacts(500)) {
            Fact g = f;
            g.pred = Value::iri(f.pred.text() + std::to_string(i));
            ds->insert(g);
        }
        bag.addStore(ds);
    }
    Pattern q{Value::iri("hasNeighbour3"), std::nullopt, std::nullopt};
    for (auto _ : state) {
        std::size_t n = bag.countMatches(q);
        benchmark::DoNotOptimize(n);
    }
}
BENCHMARK(BM_BagMatchIndexed);

}  // namespace

BENCHMARK_MAIN();
