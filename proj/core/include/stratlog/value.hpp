#pragma once

#include <cstdint>
#include <functional>
#include <string>

namespace stratlog {

// A ground term: an IRI constant, a string literal, or a finite number.
class Value {
public:
    enum class Kind : std::uint8_t { Iri, Str, Num };

    Value() = default;

    static Value iri(std::string text) {
        Value v;
        v.kind_ = Kind::Iri;
        v.text_ = std::move(text);
        return v;
    }
    static Value str(std::string text) {
        Value v;
        v.kind_ = Kind::Str;
        v.text_ = std::move(text);
        return v;
    }
    static Value num(double d);  // throws TypeError on NaN/infinity

    Kind kind() const { return kind_; }
    bool isNum() const { return kind_ == Kind::Num; }
    const std::string& text() const { return text_; }
    double number() const { return num_; }

    // Token form used by the dump format: <iri>, "literal", or a bare decimal.
    std::string display() const;

    bool operator==(const Value& o) const {
        return kind_ == o.kind_ && num_ == o.num_ && text_ == o.text_;
    }
    bool operator!=(const Value& o) const { return !(*this == o); }
    bool operator<(const Value& o) const {
        if (kind_ != o.kind_) return kind_ < o.kind_;
        if (kind_ == Kind::Num) return num_ < o.num_;
        return text_ < o.text_;
    }

    std::size_t hash() const {
        std::size_t h = std::hash<std::string>{}(text_);
        h ^= std::hash<double>{}(num_) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h ^ static_cast<std::size_t>(kind_);
    }

private:
    Kind kind_ = Kind::Iri;
    double num_ = 0.0;
    std::string text_;
};

struct Fact {
    Value pred, subject, object;

    bool operator==(const Fact&) const = default;
    bool operator<(const Fact& o) const {
        if (subject != o.subject) return subject < o.subject;
        if (pred != o.pred) return pred < o.pred;
        return object < o.object;
    }
};

// Shortest decimal that round-trips through parsing.
std::string formatNumber(double v);

}  // namespace stratlog

template <>
struct std::hash<stratlog::Value> {
    std::size_t operator()(const stratlog::Value& v) const { return v.hash(); }
};

template <>
struct std::hash<stratlog::Fact> {
    std::size_t operator()(const stratlog::Fact& f) const {
        std::size_t h = f.pred.hash();
        h = h * 31 + f.subject.hash();
        h = h * 31 + f.object.hash();
        return h;
    }
};
