#include "mtforge/gql/executor.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>

#include "mtforge/errors.hpp"
#include "mtforge/gql/printer.hpp"

namespace mtforge::gql {

namespace {

struct Binding {
    // variable -> node id or edge index
    std::map<std::string, std::string> nodes;
    std::map<std::string, std::size_t> edges;
};

Value literal_value(const Literal& lit) {
    if (const auto* b = std::get_if<bool>(&lit.v)) return Value(*b);
    if (const auto* i = std::get_if<std::int64_t>(&lit.v)) return Value(*i);
    if (const auto* d = std::get_if<double>(&lit.v)) return Value(*d);
    return Value(std::get<std::string>(lit.v));  // placeholders behave as strings
}

class Executor {
public:
    Executor(const QueryAst& ast, const PropertyGraph& graph) : ast_(ast), graph_(graph) {}

    ResultTable run() {
        check_semantics();
        std::vector<Binding> bindings{Binding{}};
        for (const auto& path : ast_.match_paths) bindings = match_path(path, std::move(bindings));
        if (ast_.where) {
            std::vector<Binding> filtered;
            for (auto& b : bindings) {
                Value cond = eval(*ast_.where, b);
                if (cond.is_bool() && cond.as_bool()) filtered.push_back(std::move(b));
            }
            bindings = std::move(filtered);
        }
        return project(bindings);
    }

private:
    // ---- semantic checks -------------------------------------------------

    void check_semantics() {
        const auto& schema = graph_.schema();
        for (const auto& path : ast_.match_paths) {
            for (const auto& n : path.nodes) {
                if (n.label && !schema.find_node_type(*n.label))
                    throw SemanticError("unknown node label '" + *n.label + "'");
                if (n.label) {
                    const auto* def = schema.find_node_type(*n.label);
                    for (const auto& [prop, lit] : n.props)
                        if (!def->find_property(prop))
                            throw SemanticError("node type '" + *n.label +
                                                "' has no property '" + prop + "'");
                }
            }
            for (const auto& e : path.edges)
                if (e.type && !schema.find_edge_type(*e.type))
                    throw SemanticError("unknown edge type '" + *e.type + "'");
        }
        // Property accesses against labeled variables must name declared
        // properties. Edge-variable accesses check the edge type.
        auto labels = variable_labels(ast_);
        std::map<std::string, std::string> edge_var_types;
        for (const auto& path : ast_.match_paths)
            for (const auto& e : path.edges)
                if (e.variable && e.type) edge_var_types.emplace(*e.variable, *e.type);
        std::set<std::string> edge_vars;
        for (const auto& v : bound_edge_variables(ast_)) edge_vars.insert(v);

        std::function<void(const ExprPtr&)> walk = [&](const ExprPtr& e) {
            if (!e) return;
            if (const auto* p = std::get_if<PropAccess>(&e->node)) {
                if (edge_vars.count(p->variable)) {
                    auto it = edge_var_types.find(p->variable);
                    if (it != edge_var_types.end()) {
                        const auto* def = graph_.schema().find_edge_type(it->second);
                        if (def && !def->find_property(p->property))
                            throw SemanticError("edge type '" + it->second +
                                                "' has no property '" + p->property + "'");
                    }
                } else if (auto it = labels.find(p->variable); it != labels.end()) {
                    const auto* def = graph_.schema().find_node_type(it->second);
                    if (def && !def->find_property(p->property))
                        throw SemanticError("node type '" + it->second + "' has no property '" +
                                            p->property + "'");
                }
            } else if (const auto* c = std::get_if<Comparison>(&e->node)) {
                walk(c->lhs);
                walk(c->rhs);
            } else if (const auto* l = std::get_if<Logical>(&e->node)) {
                walk(l->lhs);
                walk(l->rhs);
            } else if (const auto* n = std::get_if<Negation>(&e->node)) {
                walk(n->inner);
            }
        };
        walk(ast_.where);
        for (const auto& item : ast_.return_items) walk(item.expr);
        for (const auto& key : ast_.order_by) walk(key.expr);
    }

    // ---- pattern matching ------------------------------------------------

    bool node_matches(const GraphNode& node, const NodePattern& pattern) const {
        if (pattern.label && node.type != *pattern.label) return false;
        for (const auto& [prop, lit] : pattern.props) {
            auto it = node.props.find(prop);
            if (it == node.props.end()) return false;
            if (!it->second.equals(literal_value(lit))) return false;
        }
        return true;
    }

    bool bind_node(Binding& b, const NodePattern& pattern, const std::string& id) const {
        if (!pattern.variable) return true;
        auto it = b.nodes.find(*pattern.variable);
        if (it != b.nodes.end()) return it->second == id;
        b.nodes.emplace(*pattern.variable, id);
        return true;
    }

    std::vector<Binding> match_path(const PathPattern& path, std::vector<Binding> in) const {
        std::vector<Binding> out;
        for (const auto& binding : in) {
            // start-node candidates
            std::vector<const GraphNode*> starts;
            const auto& first = path.nodes[0];
            if (first.variable && binding.nodes.count(*first.variable)) {
                const GraphNode* n = graph_.find_node(binding.nodes.at(*first.variable));
                if (n && node_matches(*n, first)) starts.push_back(n);
            } else {
                for (const auto& n : graph_.nodes())
                    if (node_matches(n, first)) starts.push_back(&n);
            }
            for (const GraphNode* start : starts) {
                Binding b = binding;
                if (!bind_node(b, first, start->id)) continue;
                extend(path, 0, *start, b, out);
            }
        }
        return out;
    }

    void extend(const PathPattern& path, std::size_t edge_index, const GraphNode& current,
                Binding binding, std::vector<Binding>& out) const {
        if (edge_index == path.edges.size()) {
            out.push_back(std::move(binding));
            return;
        }
        const EdgePattern& ep = path.edges[edge_index];
        const NodePattern& np = path.nodes[edge_index + 1];
        const auto& candidates = ep.direction == EdgeDirection::Right
                                     ? graph_.edges_from(current.id)
                                     : graph_.edges_to(current.id);
        for (std::size_t idx : candidates) {
            const GraphEdge& edge = graph_.edges()[idx];
            if (ep.type && edge.type != *ep.type) continue;
            const std::string& other_id =
                ep.direction == EdgeDirection::Right ? edge.dst : edge.src;
            const GraphNode* other = graph_.find_node(other_id);
            if (!other || !node_matches(*other, np)) continue;
            Binding b = binding;
            if (ep.variable) {
                auto it = b.edges.find(*ep.variable);
                if (it != b.edges.end() && it->second != idx) continue;
                b.edges.emplace(*ep.variable, idx);
            }
            if (!bind_node(b, np, other_id)) continue;
            extend(path, edge_index + 1, *other, std::move(b), out);
        }
    }

    // ---- expression evaluation --------------------------------------------

    Value eval(const Expr& e, const Binding& b) const {
        if (const auto* lit = std::get_if<Literal>(&e.node)) return literal_value(*lit);
        if (const auto* p = std::get_if<PropAccess>(&e.node)) return prop_value(*p, b);
        if (const auto* v = std::get_if<VarRef>(&e.node)) {
            auto it = b.nodes.find(v->variable);
            if (it != b.nodes.end()) return Value(it->second);  // bare node var -> id
            auto eit = b.edges.find(v->variable);
            if (eit != b.edges.end()) return Value(graph_.edges()[eit->second].type);
            return Value::null();
        }
        if (const auto* c = std::get_if<Comparison>(&e.node))
            return compare(eval(*c->lhs, b), c->op, eval(*c->rhs, b));
        if (const auto* l = std::get_if<Logical>(&e.node)) {
            Value lhs = eval(*l->lhs, b);
            Value rhs = eval(*l->rhs, b);
            if (lhs.is_null() || rhs.is_null()) return Value::null();
            if (!lhs.is_bool() || !rhs.is_bool())
                throw TypeError("logical operator over non-boolean operands");
            switch (l->op) {
                case BoolOp::And: return Value(lhs.as_bool() && rhs.as_bool());
                case BoolOp::Or: return Value(lhs.as_bool() || rhs.as_bool());
                case BoolOp::Xor: return Value(lhs.as_bool() != rhs.as_bool());
            }
        }
        const auto& n = std::get<Negation>(e.node);
        Value inner = eval(*n.inner, b);
        if (inner.is_null()) return Value::null();
        if (!inner.is_bool()) throw TypeError("NOT over non-boolean operand");
        return Value(!inner.as_bool());
    }

    Value prop_value(const PropAccess& p, const Binding& b) const {
        if (auto it = b.nodes.find(p.variable); it != b.nodes.end()) {
            const GraphNode* node = graph_.find_node(it->second);
            if (!node) return Value::null();
            auto pit = node->props.find(p.property);
            return pit == node->props.end() ? Value::null() : pit->second;
        }
        if (auto it = b.edges.find(p.variable); it != b.edges.end()) {
            const GraphEdge& edge = graph_.edges()[it->second];
            auto pit = edge.props.find(p.property);
            return pit == edge.props.end() ? Value::null() : pit->second;
        }
        return Value::null();
    }

    static Value compare(const Value& lhs, CmpOp op, const Value& rhs) {
        if (lhs.is_null() || rhs.is_null()) return Value::null();
        bool comparable = (lhs.is_number() && rhs.is_number()) ||
                          (lhs.is_string() && rhs.is_string()) ||
                          (lhs.is_bool() && rhs.is_bool());
        if (!comparable)
            throw TypeError("cannot compare " + value_to_text(lhs) + " with " +
                            value_to_text(rhs));
        if (op == CmpOp::Eq) return Value(lhs.equals(rhs));
        if (op == CmpOp::Ne) return Value(!lhs.equals(rhs));
        int c = Value::compare(lhs, rhs);
        switch (op) {
            case CmpOp::Lt: return Value(c < 0);
            case CmpOp::Le: return Value(c <= 0);
            case CmpOp::Gt: return Value(c > 0);
            case CmpOp::Ge: return Value(c >= 0);
            default: return Value::null();
        }
    }

    // ---- projection / aggregation / ordering -------------------------------

    std::string column_name(const ReturnItem& item) const {
        std::string base;
        if (item.count_star) {
            base = "COUNT(*)";
        } else if (const auto* p = std::get_if<PropAccess>(&item.expr->node)) {
            base = p->variable + "." + p->property;
        } else if (const auto* v = std::get_if<VarRef>(&item.expr->node)) {
            base = v->variable;
        } else {
            base = "expr";
        }
        if (item.aggregate != Aggregate::None && !item.count_star) {
            std::string agg = aggregate_name(item.aggregate);
            base = agg + "(" + (item.distinct_arg ? "DISTINCT " : "") + base + ")";
        }
        return base;
    }

    Value aggregate_values(Aggregate agg, bool distinct, std::vector<Value> values) const {
        if (distinct) {
            std::sort(values.begin(), values.end());
            values.erase(std::unique(values.begin(), values.end()), values.end());
        }
        std::vector<Value> present;
        for (auto& v : values)
            if (!v.is_null()) present.push_back(std::move(v));
        switch (agg) {
            case Aggregate::Count: return Value(static_cast<std::int64_t>(present.size()));
            case Aggregate::Sum: {
                bool all_int = true;
                for (const auto& v : present) {
                    if (!v.is_number()) throw TypeError("SUM over non-numeric value");
                    if (!v.is_int()) all_int = false;
                }
                if (all_int) {
                    std::int64_t total = 0;
                    for (const auto& v : present) total += v.as_int();
                    return Value(total);
                }
                double total = 0;
                for (const auto& v : present) total += v.as_number();
                return Value(total);
            }
            case Aggregate::Avg: {
                if (present.empty()) return Value::null();
                double total = 0;
                for (const auto& v : present) {
                    if (!v.is_number()) throw TypeError("AVG over non-numeric value");
                    total += v.as_number();
                }
                return Value(total / static_cast<double>(present.size()));
            }
            case Aggregate::Max: {
                if (present.empty()) return Value::null();
                return *std::max_element(present.begin(), present.end());
            }
            case Aggregate::Min: {
                if (present.empty()) return Value::null();
                return *std::min_element(present.begin(), present.end());
            }
            case Aggregate::Collect: {
                std::sort(present.begin(), present.end());
                return Value(ValueList(present.begin(), present.end()));
            }
            default: return Value::null();
        }
    }

    ResultTable project(const std::vector<Binding>& bindings) const {
        ResultTable table;
        for (const auto& item : ast_.return_items) table.columns.push_back(column_name(item));

        bool has_aggregate = false;
        for (const auto& item : ast_.return_items)
            if (item.aggregate != Aggregate::None) has_aggregate = true;

        std::vector<std::vector<Value>> rows;
        std::vector<std::vector<Value>> order_keys;  // parallel to rows

        if (!has_aggregate) {
            for (const auto& b : bindings) {
                std::vector<Value> row;
                for (const auto& item : ast_.return_items) row.push_back(eval(*item.expr, b));
                std::vector<Value> keys;
                for (const auto& key : ast_.order_by) keys.push_back(eval(*key.expr, b));
                rows.push_back(std::move(row));
                order_keys.push_back(std::move(keys));
            }
            if (ast_.return_distinct) dedupe(rows, order_keys);
        } else {
            // Implicit grouping by the non-aggregate return expressions.
            std::vector<std::size_t> group_items, agg_items;
            for (std::size_t i = 0; i < ast_.return_items.size(); ++i)
                (ast_.return_items[i].aggregate == Aggregate::None ? group_items : agg_items)
                    .push_back(i);

            std::map<std::vector<Value>, std::vector<const Binding*>> groups;
            for (const auto& b : bindings) {
                std::vector<Value> key;
                for (std::size_t i : group_items) key.push_back(eval(*ast_.return_items[i].expr, b));
                groups[key].push_back(&b);
            }
            if (groups.empty() && group_items.empty()) groups[{}] = {};
            for (const auto& [key, members] : groups) {
                std::vector<Value> row(ast_.return_items.size());
                for (std::size_t k = 0; k < group_items.size(); ++k)
                    row[group_items[k]] = key[k];
                for (std::size_t i : agg_items) {
                    const auto& item = ast_.return_items[i];
                    std::vector<Value> values;
                    for (const Binding* b : members)
                        values.push_back(item.count_star ? Value(std::int64_t{1})
                                                         : eval(*item.expr, *b));
                    row[i] = aggregate_values(item.aggregate, item.distinct_arg,
                                              std::move(values));
                }
                rows.push_back(std::move(row));
            }
            // ORDER BY keys must be return items in aggregate mode.
            for (auto& row : rows) {
                std::vector<Value> keys;
                for (const auto& key : ast_.order_by) {
                    std::optional<std::size_t> found;
                    for (std::size_t i = 0; i < ast_.return_items.size(); ++i)
                        if (ast_.return_items[i].aggregate == Aggregate::None &&
                            ast_.return_items[i].expr && key.expr &&
                            expr_equal(ast_.return_items[i].expr, key.expr))
                            found = i;
                    if (!found)
                        throw SemanticError(
                            "ORDER BY key must appear in RETURN when aggregating");
                    keys.push_back(row[*found]);
                }
                order_keys.push_back(std::move(keys));
            }
            if (ast_.return_distinct) dedupe(rows, order_keys);
        }

        sort_rows(rows, order_keys);
        if (ast_.limit && rows.size() > static_cast<std::size_t>(*ast_.limit))
            rows.resize(static_cast<std::size_t>(*ast_.limit));
        table.rows = std::move(rows);
        return table;
    }

    void dedupe(std::vector<std::vector<Value>>& rows,
                std::vector<std::vector<Value>>& keys) const {
        std::set<std::vector<Value>> seen;
        std::vector<std::vector<Value>> out_rows;
        std::vector<std::vector<Value>> out_keys;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (seen.insert(rows[i]).second) {
                out_rows.push_back(std::move(rows[i]));
                out_keys.push_back(std::move(keys[i]));
            }
        }
        rows = std::move(out_rows);
        keys = std::move(out_keys);
    }

    void sort_rows(std::vector<std::vector<Value>>& rows,
                   std::vector<std::vector<Value>>& keys) const {
        std::vector<std::size_t> index(rows.size());
        for (std::size_t i = 0; i < index.size(); ++i) index[i] = i;
        const auto& order = ast_.order_by;
        std::sort(index.begin(), index.end(), [&](std::size_t a, std::size_t b) {
            for (std::size_t k = 0; k < order.size(); ++k) {
                int c = Value::compare(keys[a][k], keys[b][k]);
                if (c != 0) return order[k].descending ? c > 0 : c < 0;
            }
            // full-tuple tie break
            for (std::size_t k = 0; k < rows[a].size(); ++k) {
                int c = Value::compare(rows[a][k], rows[b][k]);
                if (c != 0) return c < 0;
            }
            return false;
        });
        std::vector<std::vector<Value>> sorted;
        sorted.reserve(rows.size());
        for (std::size_t i : index) sorted.push_back(std::move(rows[i]));
        rows = std::move(sorted);
    }

    const QueryAst& ast_;
    const PropertyGraph& graph_;
};

}  // namespace

ResultTable execute(const QueryAst& ast, const PropertyGraph& graph) {
    return Executor(ast, graph).run();
}

}  // namespace mtforge::gql
