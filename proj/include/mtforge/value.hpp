#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace mtforge {

struct Value;
using ValueList = std::vector<Value>;

// Runtime value: null, boolean, integer, decimal, string, or list (COLLECT).
// Dates are strings; ISO-8601 makes lexicographic order chronological.
struct Value {
    using Storage = std::variant<std::monostate, bool, std::int64_t, double, std::string, ValueList>;

    Storage v;

    Value() = default;
    Value(bool b) : v(b) {}
    Value(std::int64_t i) : v(i) {}
    Value(int i) : v(static_cast<std::int64_t>(i)) {}
    Value(double d) : v(d) {}
    Value(std::string s) : v(std::move(s)) {}
    Value(const char* s) : v(std::string(s)) {}
    Value(ValueList l) : v(std::move(l)) {}

    static Value null() { return Value(); }

    bool is_null() const { return std::holds_alternative<std::monostate>(v); }
    bool is_bool() const { return std::holds_alternative<bool>(v); }
    bool is_int() const { return std::holds_alternative<std::int64_t>(v); }
    bool is_double() const { return std::holds_alternative<double>(v); }
    bool is_number() const { return is_int() || is_double(); }
    bool is_string() const { return std::holds_alternative<std::string>(v); }
    bool is_list() const { return std::holds_alternative<ValueList>(v); }

    bool as_bool() const { return std::get<bool>(v); }
    std::int64_t as_int() const { return std::get<std::int64_t>(v); }
    double as_number() const { return is_int() ? static_cast<double>(as_int()) : std::get<double>(v); }
    const std::string& as_string() const { return std::get<std::string>(v); }
    const ValueList& as_list() const { return std::get<ValueList>(v); }

    // Tolerant equality: integers exact, decimals within 1e-9 absolute.
    static constexpr double kNumericEps = 1e-9;

    bool equals(const Value& other) const {
        if (is_number() && other.is_number()) {
            if (is_int() && other.is_int()) return as_int() == other.as_int();
            return std::fabs(as_number() - other.as_number()) <= kNumericEps;
        }
        if (v.index() != other.v.index()) return false;
        if (is_list()) {
            const auto& a = as_list();
            const auto& b = other.as_list();
            if (a.size() != b.size()) return false;
            for (std::size_t i = 0; i < a.size(); ++i)
                if (!a[i].equals(b[i])) return false;
            return true;
        }
        return v == other.v;
    }

    // Exact total order used for deterministic row sorting.
    // Rank: null < bool < number < string < list.
    static int compare(const Value& a, const Value& b) {
        auto rank = [](const Value& x) -> int {
            if (x.is_null()) return 0;
            if (x.is_bool()) return 1;
            if (x.is_number()) return 2;
            if (x.is_string()) return 3;
            return 4;
        };
        int ra = rank(a), rb = rank(b);
        if (ra != rb) return ra < rb ? -1 : 1;
        switch (ra) {
            case 0: return 0;
            case 1: return a.as_bool() == b.as_bool() ? 0 : (!a.as_bool() ? -1 : 1);
            case 2: {
                if (a.is_int() && b.is_int())
                    return a.as_int() == b.as_int() ? 0 : (a.as_int() < b.as_int() ? -1 : 1);
                double x = a.as_number(), y = b.as_number();
                return x == y ? 0 : (x < y ? -1 : 1);
            }
            case 3: return a.as_string().compare(b.as_string()) < 0   ? -1
                         : a.as_string().compare(b.as_string()) > 0 ? 1
                                                                    : 0;
            default: {
                const auto& la = a.as_list();
                const auto& lb = b.as_list();
                std::size_t n = la.size() < lb.size() ? la.size() : lb.size();
                for (std::size_t i = 0; i < n; ++i) {
                    int c = compare(la[i], lb[i]);
                    if (c != 0) return c;
                }
                return la.size() == lb.size() ? 0 : (la.size() < lb.size() ? -1 : 1);
            }
        }
    }

    bool operator<(const Value& other) const { return compare(*this, other) < 0; }
    bool operator==(const Value& other) const { return compare(*this, other) == 0; }
};

// Shortest round-trip decimal rendering.
inline std::string format_double(double d) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), d);
    return std::string(buf, res.ptr);
}

inline std::string value_to_text(const Value& val) {
    if (val.is_null()) return "null";
    if (val.is_bool()) return val.as_bool() ? "true" : "false";
    if (val.is_int()) return std::to_string(val.as_int());
    if (val.is_double()) return format_double(std::get<double>(val.v));
    if (val.is_string()) return val.as_string();
    std::string out = "[";
    const auto& list = val.as_list();
    for (std::size_t i = 0; i < list.size(); ++i) {
        if (i) out += ", ";
        out += value_to_text(list[i]);
    }
    out += "]";
    return out;
}

// Query execution output.
struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<Value>> rows;

    bool operator==(const ResultTable& other) const = default;
};

}  // namespace mtforge
