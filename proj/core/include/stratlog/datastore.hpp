#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "stratlog/value.hpp"

namespace stratlog {

// Match pattern: constant predicate, each of subject/object either a
// constant or a wildcard.
struct Pattern {
    Value pred;
    std::optional<Value> subject;
    std::optional<Value> object;

    static Pattern all(Value p) { return Pattern{std::move(p), std::nullopt, std::nullopt}; }
};

inline Pattern patternOf(const Fact& f) { return Pattern{f.pred, f.subject, f.object}; }

// In-memory fact set with PSO and POS hash indexes. Single writer; the two
// indexes always hold exactly the same fact set.
class DataStore {
public:
    using ValueSet = std::unordered_set<Value>;
    using Inner = std::unordered_map<Value, ValueSet>;
    using Index = std::unordered_map<Value, Inner>;

    bool insert(const Fact& f);
    bool insert(Value p, Value s, Value o) { return insert(Fact{std::move(p), std::move(s), std::move(o)}); }
    bool remove(const Fact& f);
    bool contains(const Fact& f) const;
    void clear();

    std::size_t size() const { return count_; }
    bool empty() const { return count_ == 0; }
    std::size_t predicateCount(const Value& pred) const;
    std::size_t countMatches(const Pattern& q) const;
    std::vector<Value> predicates() const;  // sorted

    const Index& pso() const { return pso_; }
    const Index& pos() const { return pos_; }

    // Uses PSO when the subject is bound, POS when only the object is bound,
    // and a predicate scan otherwise. Sink: (const Value& s, const Value& o).
    template <typename Sink>
    void match(const Pattern& q, Sink&& sink) const {
        ++probes_;
        auto it = pso_.find(q.pred);
        if (it == pso_.end()) return;
        if (q.subject) {
            auto sIt = it->second.find(*q.subject);
            if (sIt == it->second.end()) return;
            if (q.object) {
                if (sIt->second.count(*q.object)) sink(*q.subject, *q.object);
                return;
            }
            for (const auto& o : sIt->second) sink(*q.subject, o);
            return;
        }
        if (q.object) {
            auto pIt = pos_.find(q.pred);
            if (pIt == pos_.end()) return;
            auto oIt = pIt->second.find(*q.object);
            if (oIt == pIt->second.end()) return;
            for (const auto& s : oIt->second) sink(s, *q.object);
            return;
        }
        for (const auto& [s, objs] : it->second)
            for (const auto& o : objs) sink(s, o);
    }

    bool matchExists(const Pattern& q) const;
    std::vector<Fact> matchAll(const Pattern& q) const;

    template <typename Sink>
    void forEach(Sink&& sink) const {
        for (const auto& [p, inner] : pso_)
            for (const auto& [s, objs] : inner)
                for (const auto& o : objs) sink(Fact{p, s, o});
    }
    std::vector<Fact> allFacts() const;

    // Sorted dump lines in the triple format, one fact per line.
    std::string dump() const;

    // Instrumentation. Mutations count successful inserts/removes; probes
    // count index lookups (match/contains).
    std::uint64_t mutations() const { return mutations_; }
    std::uint64_t probes() const { return probes_; }

private:
    Index pso_;
    Index pos_;
    std::size_t count_ = 0;
    std::uint64_t mutations_ = 0;
    mutable std::uint64_t probes_ = 0;
};

using DataStorePtr = std::shared_ptr<DataStore>;

}  // namespace stratlog
