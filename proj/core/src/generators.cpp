#include "stratlog/generators.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "stratlog/model.hpp"

namespace stratlog {

std::string entityName(std::size_t i) { return "wt" + std::to_string(i); }

namespace {

Fact edge(const std::string& pred, std::size_t a, std::size_t b) {
    return Fact{Value::iri(pred), Value::iri(entityName(a)), Value::iri(entityName(b))};
}

double roundTo(double v, int decimals) {
    double scale = std::pow(10.0, decimals);
    return std::round(v * scale) / scale;
}

}  // namespace

std::vector<Fact> generateChain(const ChainSpec& spec) {
    std::vector<Fact> facts;
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> jitter(-spec.jitter, spec.jitter);
    for (std::size_t i = 1; i + 1 <= spec.n; ++i) facts.push_back(edge("hasNeighbour", i, i + 1));
    for (std::size_t i = 1; i <= spec.n; ++i) {
        double temp = spec.anomalyIndex && *spec.anomalyIndex == i
                          ? spec.anomalyTemp
                          : roundTo(spec.baseTemp + jitter(rng), 2);
        facts.push_back(Fact{Value::iri("hasAirTemperatureMesurement"),
                             Value::iri(entityName(i)), Value::num(temp)});
    }
    return facts;
}

std::vector<Fact> generateMultiRel(const MultiRelSpec& spec) {
    std::vector<Fact> facts;
    std::mt19937_64 rng(spec.seed);
    auto pick = [&](std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
    };

    // p1, p2: chains split into segments; the closure rules built on top
    // stay bounded by the segment length
    auto segmented = [&](const char* pred, std::size_t segLen) {
        if (segLen < 2) segLen = 2;
        for (std::size_t i = 1; i < spec.n; ++i) {
            if (i % segLen == 0) continue;  // segment boundary
            facts.push_back(edge(pred, i, i + 1));
        }
    };
    segmented("p1", spec.p1SegLen);
    segmented("p2", spec.p2SegLen);

    auto sparse = [&](const char* pred, double perEntity) {
        auto count = static_cast<std::size_t>(perEntity * static_cast<double>(spec.n));
        for (std::size_t k = 0; k < count; ++k) {
            std::size_t a = pick(1, spec.n);
            std::size_t b = pick(1, spec.n);
            if (a == b) b = a % spec.n + 1;
            facts.push_back(edge(pred, a, b));
        }
    };
    sparse("p3", spec.p3PerEntity);
    sparse("p4", spec.p4PerEntity);

    // p5 pairs follow the p2 segment neighbourhoods so that `not p5(..)`
    // actually blocks some derivations
    {
        auto count = static_cast<std::size_t>(spec.p5PerEntity * static_cast<double>(spec.n));
        for (std::size_t k = 0; k < count; ++k) {
            std::size_t a = pick(1, spec.n);
            std::size_t span = std::max<std::size_t>(spec.p2SegLen / 2, 1);
            std::size_t b = std::min(spec.n, a + pick(1, span));
            facts.push_back(edge("p5", a, b));
        }
    }

    std::sort(facts.begin(), facts.end());
    facts.erase(std::unique(facts.begin(), facts.end()), facts.end());
    return facts;
}

std::string factsToTriples(const std::vector<Fact>& facts) {
    std::string out;
    for (const Fact& f : facts) {
        out += renderFactTriple(f);
        out += '\n';
    }
    return out;
}

}  // namespace stratlog
