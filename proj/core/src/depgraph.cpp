#include "stratlog/depgraph.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "stratlog/errors.hpp"

namespace stratlog {

namespace {

// Body occurrence keys of a rule, split by polarity.
void bodyKeys(const Rule& r, std::vector<std::string>& pos, std::vector<std::string>& neg) {
    for (const Atom& a : r.positive) pos.push_back(predKey(a));
    for (const Atom& a : r.negative) neg.push_back(predKey(a));
}

}  // namespace

Rdg buildRdg(const std::vector<Rule>& rules) {
    Rdg g;
    // head-key index
    std::map<std::string, std::vector<const Rule*>> byHead;
    for (const Rule& r : rules) {
        g.vertices.insert(r.id);
        byHead[headKey(r)].push_back(&r);
    }
    const std::string typePrefix = kTypePred + "#";
    const std::string wildcard = typePrefix + "*";
    for (const Rule& r : rules) {
        std::vector<std::string> pos, neg;
        bodyKeys(r, pos, neg);
        auto connect = [&](const std::vector<std::string>& keys, EdgeSet& edges) {
            auto addAll = [&](const std::string& hk) {
                auto it = byHead.find(hk);
                if (it == byHead.end()) return;
                for (const Rule* h : it->second) edges.insert({h->id, r.id});
            };
            for (const auto& k : keys) {
                addAll(k);
                const bool typeKey = k.rfind(typePrefix, 0) == 0;
                if (typeKey && k != wildcard) addAll(wildcard);
                if (k == wildcard) {
                    for (const auto& [hk, heads] : byHead) {
                        if (hk == wildcard || hk.rfind(typePrefix, 0) != 0) continue;
                        for (const Rule* h : heads) edges.insert({h->id, r.id});
                    }
                }
            }
        };
        connect(pos, g.pos);
        connect(neg, g.neg);
    }
    return g;
}

std::vector<std::vector<std::string>> kosarajuScc(const std::set<std::string>& vertices,
                                                  const EdgeSet& edges) {
    std::map<std::string, std::vector<std::string>> fwd, rev;
    for (const auto& [a, b] : edges) {
        if (!vertices.count(a) || !vertices.count(b)) continue;
        fwd[a].push_back(b);
        rev[b].push_back(a);
    }
    // first pass: finish order over the forward graph
    std::vector<std::string> order;
    order.reserve(vertices.size());
    std::set<std::string> visited;
    std::function<void(const std::string&)> dfs1 = [&](const std::string& v) {
        visited.insert(v);
        auto it = fwd.find(v);
        if (it != fwd.end())
            for (const auto& w : it->second)
                if (!visited.count(w)) dfs1(w);
        order.push_back(v);
    };
    for (const auto& v : vertices)
        if (!visited.count(v)) dfs1(v);

    // second pass: components over the transposed graph
    std::vector<std::vector<std::string>> comps;
    visited.clear();
    std::function<void(const std::string&, std::vector<std::string>&)> dfs2 =
        [&](const std::string& v, std::vector<std::string>& comp) {
            visited.insert(v);
            comp.push_back(v);
            auto it = rev.find(v);
            if (it != rev.end())
                for (const auto& w : it->second)
                    if (!visited.count(w)) dfs2(w, comp);
        };
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        if (visited.count(*it)) continue;
        std::vector<std::string> comp;
        dfs2(*it, comp);
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
    }
    std::sort(comps.begin(), comps.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return comps;
}

std::string nodeIdFor(const std::vector<std::string>& sortedMembers) {
    std::string id;
    for (const auto& m : sortedMembers) {
        if (!id.empty()) id += "+";
        id += m;
    }
    return id;
}

std::vector<std::string> Hrdg::successors(const std::string& node) const {
    std::set<std::string> out;
    for (const auto& [a, b] : pos)
        if (a == node) out.insert(b);
    for (const auto& [a, b] : neg)
        if (a == node) out.insert(b);
    return {out.begin(), out.end()};
}

std::vector<std::string> Hrdg::predecessors(const std::string& node) const {
    std::set<std::string> out;
    for (const auto& [a, b] : pos)
        if (b == node) out.insert(a);
    for (const auto& [a, b] : neg)
        if (b == node) out.insert(a);
    return {out.begin(), out.end()};
}

std::vector<std::string> Hrdg::nodeIds() const {
    std::vector<std::string> out;
    out.reserve(members.size());
    for (const auto& [id, m] : members) out.push_back(id);
    return out;
}

namespace {

// Finds some cycle over the combined edge relation (assumes one exists).
std::vector<std::string> findCycle(const std::set<std::string>& verts, const EdgeSet& edges) {
    std::map<std::string, std::vector<std::string>> adj;
    for (const auto& [a, b] : edges) adj[a].push_back(b);
    std::map<std::string, int> state;  // 0 new, 1 open, 2 done
    std::vector<std::string> path;
    std::vector<std::string> cycle;
    std::function<bool(const std::string&)> dfs = [&](const std::string& v) {
        state[v] = 1;
        path.push_back(v);
        for (const auto& w : adj[v]) {
            if (state[w] == 1) {
                auto it = std::find(path.begin(), path.end(), w);
                cycle.assign(it, path.end());
                return true;
            }
            if (state[w] == 0 && dfs(w)) return true;
        }
        path.pop_back();
        state[v] = 2;
        return false;
    };
    for (const auto& v : verts) {
        if (state[v] == 0 && dfs(v)) break;
    }
    return cycle;
}

}  // namespace

Hrdg buildHrdg(const Rdg& rdg, const std::vector<Rule>& rules) {
    Hrdg h;
    auto comps = kosarajuScc(rdg.vertices, [&] {
        EdgeSet all = rdg.pos;
        all.insert(rdg.neg.begin(), rdg.neg.end());
        return all;
    }());
    for (auto& comp : comps) {
        std::string id = nodeIdFor(comp);
        for (const auto& r : comp) h.nodeOf[r] = id;
        h.members[id] = std::move(comp);
    }
    for (const auto& [a, b] : rdg.pos) {
        const std::string &na = h.nodeOf.at(a), &nb = h.nodeOf.at(b);
        if (na != nb) h.pos.insert({na, nb});
    }
    // negative edges lift unconditionally: an intra-component negative
    // dependency becomes a self-loop and fails the DAG check below
    for (const auto& [a, b] : rdg.neg) h.neg.insert({h.nodeOf.at(a), h.nodeOf.at(b)});

    EdgeSet all = h.pos;
    all.insert(h.neg.begin(), h.neg.end());
    for (const auto& [a, b] : all) {
        if (a == b)
            throw UnsafeProgramError("negation through recursion in component " + a, {a});
    }
    std::set<std::string> nodeSet;
    for (const auto& [id, m] : h.members) nodeSet.insert(id);
    auto hyperComps = kosarajuScc(nodeSet, all);
    if (hyperComps.size() != nodeSet.size()) {
        auto cycle = findCycle(nodeSet, all);
        throw UnsafeProgramError("hyper-node dependency cycle: " + nodeIdFor(cycle), cycle);
    }

    // aggregation must not participate in any cycle
    std::map<std::string, const Rule*> byId;
    for (const Rule& r : rules) byId[r.id] = &r;
    for (const auto& [id, memberIds] : h.members) {
        bool hasAgg = false;
        for (const auto& rid : memberIds) {
            auto it = byId.find(rid);
            if (it != byId.end() && it->second->isAggregate()) hasAgg = true;
        }
        if (!hasAgg) continue;
        if (memberIds.size() > 1)
            throw UnsafeProgramError("aggregate rule inside recursive component " + id, {id});
        const std::string& rid = memberIds.front();
        if (rdg.pos.count({rid, rid}) || rdg.neg.count({rid, rid}))
            throw UnsafeProgramError("aggregate rule " + rid + " depends on its own head", {id});
    }
    return h;
}

std::vector<std::string> topologicalOrder(const Hrdg& hrdg) {
    std::map<std::string, std::size_t> indeg;
    std::map<std::string, std::vector<std::string>> adj;
    for (const auto& [id, m] : hrdg.members) indeg[id] = 0;
    EdgeSet all = hrdg.pos;
    all.insert(hrdg.neg.begin(), hrdg.neg.end());
    for (const auto& [a, b] : all) {
        adj[a].push_back(b);
        ++indeg[b];
    }
    std::set<std::string> ready;
    for (const auto& [id, d] : indeg)
        if (d == 0) ready.insert(id);
    std::vector<std::string> order;
    order.reserve(indeg.size());
    while (!ready.empty()) {
        std::string v = *ready.begin();
        ready.erase(ready.begin());
        order.push_back(v);
        for (const auto& w : adj[v])
            if (--indeg[w] == 0) ready.insert(w);
    }
    return order;
}

std::map<std::string, int> stratify(const Rdg& rdg) {
    // dummy rules are fine here: the aggregate check needs real rules, but
    // stratification only needs the condensation
    Hrdg h = [&] {
        try {
            return buildHrdg(rdg, {});
        } catch (const UnsafeProgramError& e) {
            throw UnsafeProgramError(std::string("unstratifiable program: ") + e.what(), e.cycle);
        }
    }();
    std::map<std::string, int> level;
    for (const auto& id : topologicalOrder(h)) {
        int lv = 0;
        for (const auto& [a, b] : h.pos)
            if (b == id) lv = std::max(lv, level[a]);
        for (const auto& [a, b] : h.neg)
            if (b == id) lv = std::max(lv, level[a] + 1);
        level[id] = lv;
    }
    std::map<std::string, int> f;
    for (const auto& [rid, nid] : h.nodeOf) f[rid] = level[nid];
    return f;
}

bool validStratification(const Rdg& rdg, const std::map<std::string, int>& f) {
    for (const auto& [a, b] : rdg.pos) {
        auto ia = f.find(a), ib = f.find(b);
        if (ia == f.end() || ib == f.end() || ia->second > ib->second) return false;
    }
    for (const auto& [a, b] : rdg.neg) {
        auto ia = f.find(a), ib = f.find(b);
        if (ia == f.end() || ib == f.end() || ia->second >= ib->second) return false;
    }
    return true;
}

std::vector<std::string> computePlan(const std::set<std::string>& seeds, const Hrdg& hrdg) {
    std::map<std::string, std::vector<std::string>> adj;
    EdgeSet all = hrdg.pos;
    all.insert(hrdg.neg.begin(), hrdg.neg.end());
    for (const auto& [a, b] : all) adj[a].push_back(b);
    for (auto& [a, succs] : adj) std::sort(succs.begin(), succs.end());

    std::set<std::string> visited;
    std::vector<std::string> post;
    std::function<void(const std::string&)> dfs = [&](const std::string& v) {
        visited.insert(v);
        for (const auto& w : adj[v])
            if (!visited.count(w)) dfs(w);
        post.push_back(v);
    };
    for (const auto& s : seeds)
        if (!visited.count(s)) dfs(s);
    std::reverse(post.begin(), post.end());
    return post;
}

namespace {

std::string dotEscape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

std::string edgesToDot(const EdgeSet& pos, const EdgeSet& neg) {
    std::string out;
    for (const auto& [a, b] : pos)
        out += "  \"" + dotEscape(a) + "\" -> \"" + dotEscape(b) + "\";\n";
    for (const auto& [a, b] : neg)
        out += "  \"" + dotEscape(a) + "\" -> \"" + dotEscape(b) + "\" [style=dashed];\n";
    return out;
}

}  // namespace

std::string rdgToDot(const Rdg& rdg) {
    std::string out = "digraph rdg {\n";
    for (const auto& v : rdg.vertices) out += "  \"" + dotEscape(v) + "\";\n";
    out += edgesToDot(rdg.pos, rdg.neg);
    out += "}\n";
    return out;
}

std::string hrdgToDot(const Hrdg& hrdg) {
    std::string out = "digraph hrdg {\n";
    for (const auto& [id, m] : hrdg.members) out += "  \"" + dotEscape(id) + "\";\n";
    out += edgesToDot(hrdg.pos, hrdg.neg);
    out += "}\n";
    return out;
}

}  // namespace stratlog
