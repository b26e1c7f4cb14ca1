#include "stratlog/value.hpp"

#include <charconv>
#include <cmath>

#include "stratlog/errors.hpp"

namespace stratlog {

Value Value::num(double d) {
    if (!std::isfinite(d)) throw TypeError("numeric values must be finite");
    Value v;
    v.kind_ = Kind::Num;
    v.num_ = d;
    return v;
}

std::string formatNumber(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

std::string Value::display() const {
    switch (kind_) {
        case Kind::Iri:
            return "<" + text_ + ">";
        case Kind::Str:
            return "\"" + text_ + "\"";
        case Kind::Num:
            return formatNumber(num_);
    }
    return {};
}

}  // namespace stratlog
