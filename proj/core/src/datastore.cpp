#include "stratlog/datastore.hpp"

#include <algorithm>

namespace stratlog {

bool DataStore::insert(const Fact& f) {
    auto& objs = pso_[f.pred][f.subject];
    if (!objs.insert(f.object).second) return false;
    pos_[f.pred][f.object].insert(f.subject);
    ++count_;
    ++mutations_;
    return true;
}

bool DataStore::remove(const Fact& f) {
    auto pIt = pso_.find(f.pred);
    if (pIt == pso_.end()) return false;
    auto sIt = pIt->second.find(f.subject);
    if (sIt == pIt->second.end()) return false;
    if (!sIt->second.erase(f.object)) return false;
    if (sIt->second.empty()) pIt->second.erase(sIt);
    if (pIt->second.empty()) pso_.erase(pIt);

    auto pIt2 = pos_.find(f.pred);
    auto oIt = pIt2->second.find(f.object);
    oIt->second.erase(f.subject);
    if (oIt->second.empty()) pIt2->second.erase(oIt);
    if (pIt2->second.empty()) pos_.erase(pIt2);

    --count_;
    ++mutations_;
    return true;
}

bool DataStore::contains(const Fact& f) const {
    ++probes_;
    auto pIt = pso_.find(f.pred);
    if (pIt == pso_.end()) return false;
    auto sIt = pIt->second.find(f.subject);
    if (sIt == pIt->second.end()) return false;
    return sIt->second.count(f.object) != 0;
}

void DataStore::clear() {
    if (count_ > 0) ++mutations_;
    pso_.clear();
    pos_.clear();
    count_ = 0;
}

std::size_t DataStore::predicateCount(const Value& pred) const {
    auto pIt = pso_.find(pred);
    if (pIt == pso_.end()) return 0;
    std::size_t n = 0;
    for (const auto& [s, objs] : pIt->second) n += objs.size();
    return n;
}

std::size_t DataStore::countMatches(const Pattern& q) const {
    ++probes_;
    if (q.subject && q.object)
        return contains(Fact{q.pred, *q.subject, *q.object}) ? 1 : 0;
    if (q.subject) {
        auto pIt = pso_.find(q.pred);
        if (pIt == pso_.end()) return 0;
        auto sIt = pIt->second.find(*q.subject);
        return sIt == pIt->second.end() ? 0 : sIt->second.size();
    }
    if (q.object) {
        auto pIt = pos_.find(q.pred);
        if (pIt == pos_.end()) return 0;
        auto oIt = pIt->second.find(*q.object);
        return oIt == pIt->second.end() ? 0 : oIt->second.size();
    }
    return predicateCount(q.pred);
}

std::vector<Value> DataStore::predicates() const {
    std::vector<Value> out;
    out.reserve(pso_.size());
    for (const auto& [p, inner] : pso_) out.push_back(p);
    std::sort(out.begin(), out.end());
    return out;
}

bool DataStore::matchExists(const Pattern& q) const {
    bool found = false;
    ++probes_;
    auto pIt = pso_.find(q.pred);
    if (pIt == pso_.end()) return false;
    if (q.subject) {
        auto sIt = pIt->second.find(*q.subject);
        if (sIt == pIt->second.end()) return false;
        return q.object ? sIt->second.count(*q.object) != 0 : !sIt->second.empty();
    }
    if (q.object) {
        auto pIt2 = pos_.find(q.pred);
        if (pIt2 == pos_.end()) return false;
        auto oIt = pIt2->second.find(*q.object);
        return oIt != pIt2->second.end() && !oIt->second.empty();
    }
    for (const auto& [s, objs] : pIt->second)
        if (!objs.empty()) {
            found = true;
            break;
        }
    return found;
}

std::vector<Fact> DataStore::matchAll(const Pattern& q) const {
    std::vector<Fact> out;
    match(q, [&](const Value& s, const Value& o) { out.push_back(Fact{q.pred, s, o}); });
    return out;
}

std::vector<Fact> DataStore::allFacts() const {
    std::vector<Fact> out;
    out.reserve(count_);
    forEach([&](const Fact& f) { out.push_back(f); });
    return out;
}

std::string DataStore::dump() const {
    std::vector<std::string> lines;
    lines.reserve(count_);
    forEach([&](const Fact& f) {
        lines.push_back(f.subject.display() + " " + f.pred.display() + " " + f.object.display() +
                        " .");
    });
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (const auto& l : lines) {
        out += l;
        out += '\n';
    }
    return out;
}

}  // namespace stratlog
