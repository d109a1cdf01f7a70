#include "mtforge/gql/ast.hpp"

#include <algorithm>
#include <set>

namespace mtforge::gql {

bool expr_equal(const Expr& a, const Expr& b) {
    if (a.node.index() != b.node.index()) return false;
    if (const auto* la = std::get_if<Literal>(&a.node))
        return *la == std::get<Literal>(b.node);
    if (const auto* pa = std::get_if<PropAccess>(&a.node))
        return *pa == std::get<PropAccess>(b.node);
    if (const auto* va = std::get_if<VarRef>(&a.node))
        return *va == std::get<VarRef>(b.node);
    if (const auto* ca = std::get_if<Comparison>(&a.node)) {
        const auto& cb = std::get<Comparison>(b.node);
        return ca->op == cb.op && expr_equal(ca->lhs, cb.lhs) && expr_equal(ca->rhs, cb.rhs);
    }
    if (const auto* loga = std::get_if<Logical>(&a.node)) {
        const auto& logb = std::get<Logical>(b.node);
        return loga->op == logb.op && expr_equal(loga->lhs, logb.lhs) &&
               expr_equal(loga->rhs, logb.rhs);
    }
    const auto& na = std::get<Negation>(a.node);
    const auto& nb = std::get<Negation>(b.node);
    return expr_equal(na.inner, nb.inner);
}

bool ast_equal(const QueryAst& a, const QueryAst& b) {
    if (a.match_paths != b.match_paths) return false;
    if (!expr_equal(a.where, b.where)) return false;
    if (a.return_distinct != b.return_distinct) return false;
    if (a.return_items.size() != b.return_items.size()) return false;
    for (std::size_t i = 0; i < a.return_items.size(); ++i) {
        const auto& ra = a.return_items[i];
        const auto& rb = b.return_items[i];
        if (ra.aggregate != rb.aggregate || ra.distinct_arg != rb.distinct_arg ||
            ra.count_star != rb.count_star)
            return false;
        if (!ra.count_star && !expr_equal(ra.expr, rb.expr)) return false;
    }
    if (a.order_by.size() != b.order_by.size()) return false;
    for (std::size_t i = 0; i < a.order_by.size(); ++i) {
        if (a.order_by[i].descending != b.order_by[i].descending) return false;
        if (!expr_equal(a.order_by[i].expr, b.order_by[i].expr)) return false;
    }
    return a.limit == b.limit;
}

std::vector<std::string> bound_variables(const QueryAst& ast) {
    std::vector<std::string> out;
    std::set<std::string> seen;
    auto add = [&](const std::optional<std::string>& var) {
        if (var && seen.insert(*var).second) out.push_back(*var);
    };
    for (const auto& path : ast.match_paths) {
        for (std::size_t i = 0; i < path.nodes.size(); ++i) {
            add(path.nodes[i].variable);
            if (i < path.edges.size()) add(path.edges[i].variable);
        }
    }
    return out;
}

std::vector<std::string> bound_edge_variables(const QueryAst& ast) {
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const auto& path : ast.match_paths)
        for (const auto& e : path.edges)
            if (e.variable && seen.insert(*e.variable).second) out.push_back(*e.variable);
    return out;
}

std::vector<std::string> node_labels(const QueryAst& ast) {
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const auto& path : ast.match_paths)
        for (const auto& n : path.nodes)
            if (n.label && seen.insert(*n.label).second) out.push_back(*n.label);
    return out;
}

std::vector<std::string> edge_types(const QueryAst& ast) {
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const auto& path : ast.match_paths)
        for (const auto& e : path.edges)
            if (e.type && seen.insert(*e.type).second) out.push_back(*e.type);
    return out;
}

std::map<std::string, std::string> variable_labels(const QueryAst& ast) {
    std::map<std::string, std::string> out;
    for (const auto& path : ast.match_paths)
        for (const auto& n : path.nodes)
            if (n.variable && n.label) out.emplace(*n.variable, *n.label);
    return out;
}

const char* aggregate_name(Aggregate agg) {
    switch (agg) {
        case Aggregate::None: return "";
        case Aggregate::Count: return "COUNT";
        case Aggregate::Sum: return "SUM";
        case Aggregate::Avg: return "AVG";
        case Aggregate::Max: return "MAX";
        case Aggregate::Min: return "MIN";
        case Aggregate::Collect: return "COLLECT";
    }
    return "";
}

const char* cmp_op_text(CmpOp op) {
    switch (op) {
        case CmpOp::Eq: return "=";
        case CmpOp::Ne: return "!=";
        case CmpOp::Lt: return "<";
        case CmpOp::Le: return "<=";
        case CmpOp::Gt: return ">";
        case CmpOp::Ge: return ">=";
    }
    return "=";
}

const char* bool_op_text(BoolOp op) {
    switch (op) {
        case BoolOp::And: return "AND";
        case BoolOp::Or: return "OR";
        case BoolOp::Xor: return "XOR";
    }
    return "AND";
}

}  // namespace mtforge::gql
