#pragma once

#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "stratlog/datastore.hpp"

namespace stratlog {

// Merge-free collection of DataStore handles. Facts are never copied into
// the bag; lookups go through a predicate -> store index so stores lacking
// the queried predicate are never touched.
class DataStoreBag {
public:
    void addStore(DataStorePtr store);
    bool hasStore(const DataStore* store) const;
    void clear();

    const std::vector<DataStorePtr>& stores() const { return stores_; }

    // Recomputes the predicate index after member stores were mutated.
    void refreshIndex();

    std::size_t predicateCount(const Value& pred) const;
    std::size_t countMatches(const Pattern& q) const;  // with duplicate suppression

    // Union of member matches. When more than one member store holds the
    // predicate, duplicates across stores are suppressed.
    template <typename Sink>
    void match(const Pattern& q, Sink&& sink) const {
        auto it = pds_.find(q.pred);
        if (it == pds_.end()) return;
        const auto& holders = it->second;
        if (holders.size() == 1) {
            holders.front()->match(q, sink);
            return;
        }
        std::unordered_set<Fact> seen;
        for (const DataStore* ds : holders) {
            ds->match(q, [&](const Value& s, const Value& o) {
                if (seen.insert(Fact{q.pred, s, o}).second) sink(s, o);
            });
        }
    }

    bool matchExists(const Pattern& q) const;
    bool contains(const Fact& f) const;
    std::vector<Fact> matchAll(const Pattern& q) const;
    std::vector<Value> predicates() const;  // sorted

private:
    std::vector<DataStorePtr> stores_;
    std::unordered_map<Value, std::vector<const DataStore*>> pds_;
};

}  // namespace stratlog
