#include "stratlog/datastorebag.hpp"

#include <algorithm>
#include <set>

namespace stratlog {

void DataStoreBag::addStore(DataStorePtr store) {
    if (!store || hasStore(store.get())) return;
    for (const auto& [p, inner] : store->pso()) {
        if (!inner.empty()) pds_[p].push_back(store.get());
    }
    stores_.push_back(std::move(store));
}

bool DataStoreBag::hasStore(const DataStore* store) const {
    for (const auto& s : stores_)
        if (s.get() == store) return true;
    return false;
}

void DataStoreBag::clear() {
    stores_.clear();
    pds_.clear();
}

void DataStoreBag::refreshIndex() {
    pds_.clear();
    for (const auto& s : stores_) {
        for (const auto& [p, inner] : s->pso()) {
            if (!inner.empty()) pds_[p].push_back(s.get());
        }
    }
}

std::size_t DataStoreBag::predicateCount(const Value& pred) const {
    auto it = pds_.find(pred);
    if (it == pds_.end()) return 0;
    std::size_t n = 0;
    for (const DataStore* ds : it->second) n += ds->predicateCount(pred);
    return n;
}

std::size_t DataStoreBag::countMatches(const Pattern& q) const {
    std::size_t n = 0;
    match(q, [&](const Value&, const Value&) { ++n; });
    return n;
}

bool DataStoreBag::matchExists(const Pattern& q) const {
    auto it = pds_.find(q.pred);
    if (it == pds_.end()) return false;
    for (const DataStore* ds : it->second)
        if (ds->matchExists(q)) return true;
    return false;
}

bool DataStoreBag::contains(const Fact& f) const {
    auto it = pds_.find(f.pred);
    if (it == pds_.end()) return false;
    for (const DataStore* ds : it->second)
        if (ds->contains(f)) return true;
    return false;
}

std::vector<Fact> DataStoreBag::matchAll(const Pattern& q) const {
    std::vector<Fact> out;
    match(q, [&](const Value& s, const Value& o) { out.push_back(Fact{q.pred, s, o}); });
    return out;
}

std::vector<Value> DataStoreBag::predicates() const {
    std::set<Value> uniq;
    for (const auto& [p, holders] : pds_)
        if (!holders.empty()) uniq.insert(p);
    return {uniq.begin(), uniq.end()};
}

}  // namespace stratlog
