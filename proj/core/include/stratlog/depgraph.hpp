#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "stratlog/model.hpp"

namespace stratlog {

using Edge = std::pair<std::string, std::string>;
using EdgeSet = std::set<Edge>;

// Rule dependency graph. (ri, rj) is a positive edge when ri's head
// predicate occurs in rj's positive body (aggregate bodies included), a
// negative edge when it occurs in rj's negative body.
struct Rdg {
    std::set<std::string> vertices;
    EdgeSet pos;
    EdgeSet neg;

    bool operator==(const Rdg&) const = default;
};

Rdg buildRdg(const std::vector<Rule>& rules);

// Strongly connected components per Kosaraju, over the given edge relation.
// Components are ordered by their smallest member, members sorted.
std::vector<std::vector<std::string>> kosarajuScc(const std::set<std::string>& vertices,
                                                  const EdgeSet& edges);

std::string nodeIdFor(const std::vector<std::string>& sortedMembers);

// SCC condensation of the RDG. Positive edges lift only across distinct
// nodes; negative edges lift unconditionally, so a negative dependency
// inside one component shows up as a self-loop and fails the DAG check.
struct Hrdg {
    std::map<std::string, std::vector<std::string>> members;  // node id -> sorted rule ids
    std::map<std::string, std::string> nodeOf;                // rule id -> node id
    EdgeSet pos;
    EdgeSet neg;

    std::vector<std::string> successors(const std::string& node) const;
    std::vector<std::string> predecessors(const std::string& node) const;
    std::vector<std::string> nodeIds() const;
};

// Throws UnsafeProgramError when the combined edge relation has a cycle or
// self-loop, or when an aggregate rule sits inside any cycle.
Hrdg buildHrdg(const Rdg& rdg, const std::vector<Rule>& rules);

// Deterministic topological order; ties broken by node id.
std::vector<std::string> topologicalOrder(const Hrdg& hrdg);

// Minimal stratification: positive edges impose f(ri) <= f(rj), negative
// edges f(ri) < f(rj). Longest-path labelling over the condensation counting
// negative edges as +1. Throws UnsafeProgramError when unstratifiable.
std::map<std::string, int> stratify(const Rdg& rdg);
bool validStratification(const Rdg& rdg, const std::map<std::string, int>& f);

// Execution plan: the nodes reachable from the given set (inclusive), in
// topological order. DFS post-order from each unvisited seed, reversed.
std::vector<std::string> computePlan(const std::set<std::string>& seeds, const Hrdg& hrdg);

// DOT renderings; negative edges carry style=dashed.
std::string rdgToDot(const Rdg& rdg);
std::string hrdgToDot(const Hrdg& hrdg);

}  // namespace stratlog
