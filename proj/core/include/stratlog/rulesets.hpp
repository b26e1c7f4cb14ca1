#pragma once

#include <string>

namespace stratlog::rulesets {

// Bundled rule sets used by the bench scenarios and the test suites.

// rs1: wind-farm anomaly detection. Symmetric-transitive neighbourhood
// closure, neighbour-count and median-temperature aggregation, and an
// anomaly gate comparing a turbine's reading against the local median.
const std::string& rs1();

// rs2: synthetic set of 18 rules over p1..p5 with symmetric/transitive
// closures, disjunction, a three-rule cycle and negation on an EDB predicate.
const std::string& rs2();

// rs3: rs2 with rule r10 replaced by a variant negating a derived predicate,
// introducing negative dependencies between hyper-nodes.
const std::string& rs3();

}  // namespace stratlog::rulesets
