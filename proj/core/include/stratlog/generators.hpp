#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stratlog/value.hpp"

namespace stratlog {

// Chain of wind turbines: n-1 hasNeighbour links between consecutive
// turbines plus one hasAirTemperatureMesurement reading per turbine.
// Readings are baseTemp +/- jitter from a seeded generator; one turbine can
// be forced to an anomalous temperature.
struct ChainSpec {
    std::size_t n = 2;
    std::uint64_t seed = 1;
    double baseTemp = 20.0;
    double jitter = 0.5;
    std::optional<std::size_t> anomalyIndex;  // 1-based turbine index
    double anomalyTemp = 30.0;
};

std::vector<Fact> generateChain(const ChainSpec& spec);

// Multi-relation data set over n entities with predicates p1..p5.
// p1 and p2 are segmented chains (the segment length bounds the size of the
// symmetric-transitive closures built on top of them), p3/p4 are sparse
// random edges, and p5 samples pairs that overlap the p2 segments so that
// negation over p5 has visible effect.
struct MultiRelSpec {
    std::size_t n = 2;
    std::uint64_t seed = 1;
    std::size_t p1SegLen = 25;
    std::size_t p2SegLen = 10;
    double p3PerEntity = 0.6;
    double p4PerEntity = 0.4;
    double p5PerEntity = 0.3;
};

std::vector<Fact> generateMultiRel(const MultiRelSpec& spec);

std::string entityName(std::size_t i);  // wt<i>

// Renders facts as sorted-input-order triple lines; byte-identical for a
// fixed spec.
std::string factsToTriples(const std::vector<Fact>& facts);

}  // namespace stratlog
