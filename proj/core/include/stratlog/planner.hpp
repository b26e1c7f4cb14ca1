#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "stratlog/model.hpp"

namespace stratlog {

enum class StepKind : std::uint8_t { Atom, NegAtom, Bind, Comp, Aggregate };

// One element of a left-deep join plan. `index` points into the rule's
// positive/negative/builtins list according to `kind`.
struct PlanStep {
    StepKind kind = StepKind::Atom;
    std::size_t index = 0;
    int heuristicClass = 0;     // lower runs earlier within its group
    std::size_t estCount = 0;   // fact-count estimate used for tie-breaking
    std::string accessPath;     // chosen index access, for explain output
};

struct JoinPlan {
    std::vector<PlanStep> steps;

    std::string describe(const Rule& r) const;
};

// Fact counts per dependency key; missing keys count as zero.
using PredStats = std::map<std::string, std::size_t>;

// Orders the body greedily: positive atoms and builtins first (constants
// beat half-bound beats unbound beats class scans beats bind beats comp),
// then negative atoms with the same shape ranking, then aggregation.
// Equal classes tie-break by ascending fact count, then source order.
// Throws PlanError when a bind/comp can never have its inputs bound.
JoinPlan planRule(const Rule& r, const PredStats& stats);

}  // namespace stratlog
