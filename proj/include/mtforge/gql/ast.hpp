#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace mtforge::gql {

enum class Aggregate { None, Count, Sum, Avg, Max, Min, Collect };
enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };
enum class BoolOp { And, Or, Xor };
enum class EdgeDirection { Right, Left };

// Query literal. `placeholder` marks a bare masking token such as [m],
// printed without quotes; quoted placeholder tokens ('[s]') stay plain
// string literals.
struct Literal {
    std::variant<bool, std::int64_t, double, std::string> v;
    bool placeholder = false;

    Literal() : v(std::int64_t{0}) {}
    Literal(bool b) : v(b) {}
    Literal(std::int64_t i) : v(i) {}
    Literal(double d) : v(d) {}
    Literal(std::string s) : v(std::move(s)) {}
    Literal(const char* s) : v(std::string(s)) {}

    static Literal bare_placeholder(std::string token) {
        Literal l(std::move(token));
        l.placeholder = true;
        return l;
    }

    bool is_string() const { return std::holds_alternative<std::string>(v) && !placeholder; }
    bool is_number() const {
        return std::holds_alternative<std::int64_t>(v) || std::holds_alternative<double>(v);
    }
    const std::string& as_string() const { return std::get<std::string>(v); }

    bool operator==(const Literal&) const = default;
};

struct Expr;
using ExprPtr = std::shared_ptr<Expr>;

struct PropAccess {
    std::string variable;
    std::string property;
    bool operator==(const PropAccess&) const = default;
};

struct VarRef {
    std::string variable;
    bool operator==(const VarRef&) const = default;
};

struct Comparison {
    ExprPtr lhs;
    CmpOp op = CmpOp::Eq;
    ExprPtr rhs;
};

struct Logical {
    ExprPtr lhs;
    BoolOp op = BoolOp::And;
    ExprPtr rhs;
};

struct Negation {
    ExprPtr inner;
};

struct Expr {
    std::variant<Literal, PropAccess, VarRef, Comparison, Logical, Negation> node;
};

bool expr_equal(const Expr& a, const Expr& b);
inline bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
    if (!a || !b) return !a && !b;
    return expr_equal(*a, *b);
}

inline ExprPtr make_literal(Literal lit) { return std::make_shared<Expr>(Expr{std::move(lit)}); }
inline ExprPtr make_prop(std::string var, std::string prop) {
    return std::make_shared<Expr>(Expr{PropAccess{std::move(var), std::move(prop)}});
}
inline ExprPtr make_var(std::string var) {
    return std::make_shared<Expr>(Expr{VarRef{std::move(var)}});
}
inline ExprPtr make_cmp(ExprPtr lhs, CmpOp op, ExprPtr rhs) {
    return std::make_shared<Expr>(Expr{Comparison{std::move(lhs), op, std::move(rhs)}});
}
inline ExprPtr make_logic(ExprPtr lhs, BoolOp op, ExprPtr rhs) {
    return std::make_shared<Expr>(Expr{Logical{std::move(lhs), op, std::move(rhs)}});
}
inline ExprPtr make_not(ExprPtr inner) {
    return std::make_shared<Expr>(Expr{Negation{std::move(inner)}});
}

struct NodePattern {
    std::optional<std::string> variable;
    std::optional<std::string> label;
    std::map<std::string, Literal> props;  // sorted: canonical order for free

    bool operator==(const NodePattern&) const = default;
};

struct EdgePattern {
    std::optional<std::string> variable;
    std::optional<std::string> type;
    EdgeDirection direction = EdgeDirection::Right;

    bool operator==(const EdgePattern&) const = default;
};

// nodes.size() == edges.size() + 1
struct PathPattern {
    std::vector<NodePattern> nodes;
    std::vector<EdgePattern> edges;

    bool operator==(const PathPattern&) const = default;
};

struct ReturnItem {
    ExprPtr expr;  // null for COUNT(*)
    Aggregate aggregate = Aggregate::None;
    bool distinct_arg = false;  // COUNT(DISTINCT x)
    bool count_star = false;
};

struct OrderKey {
    ExprPtr expr;
    bool descending = false;
};

struct QueryAst {
    std::vector<PathPattern> match_paths;
    ExprPtr where;  // null when absent
    bool return_distinct = false;
    std::vector<ReturnItem> return_items;
    std::vector<OrderKey> order_by;
    std::optional<std::int64_t> limit;
};

bool ast_equal(const QueryAst& a, const QueryAst& b);

// Variables bound by match paths, in first-appearance order.
std::vector<std::string> bound_variables(const QueryAst& ast);
// Edge-pattern variables only.
std::vector<std::string> bound_edge_variables(const QueryAst& ast);

// Node labels / edge types mentioned anywhere in the match paths.
std::vector<std::string> node_labels(const QueryAst& ast);
std::vector<std::string> edge_types(const QueryAst& ast);

// Map variable -> node label (for labeled node patterns).
std::map<std::string, std::string> variable_labels(const QueryAst& ast);

const char* aggregate_name(Aggregate agg);
const char* cmp_op_text(CmpOp op);
const char* bool_op_text(BoolOp op);

}  // namespace mtforge::gql
