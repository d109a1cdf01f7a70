#include "mtforge/gql/analysis.hpp"

#include <cctype>
#include <functional>
#include <set>

#include "mtforge/gql/printer.hpp"
#include "mtforge/text.hpp"

namespace mtforge::gql {

namespace {

// The placeholder class guarding (variable's label, property), if any.
const PlaceholderClass* placeholder_for(const GraphSchema& schema, const std::string& label,
                                        const std::string& property) {
    const NodeTypeDef* def = schema.find_node_type(label);
    if (!def || !def->placeholder) return nullptr;
    return def->placeholder->bound_property == property ? &*def->placeholder : nullptr;
}

Literal masked_literal(const Literal& original, const std::string& token) {
    if (original.placeholder) return original;
    if (original.is_number()) return Literal::bare_placeholder(token);
    return Literal(token);  // quoted token
}

ExprPtr mask_expr(const ExprPtr& e, const GraphSchema& schema,
                  const std::map<std::string, std::string>& labels) {
    if (!e) return e;
    if (const auto* c = std::get_if<Comparison>(&e->node)) {
        ExprPtr lhs = mask_expr(c->lhs, schema, labels);
        ExprPtr rhs = mask_expr(c->rhs, schema, labels);
        // placeholder equality: var.prop cmp literal (either side)
        const auto* lp = std::get_if<PropAccess>(&lhs->node);
        const auto* rp = std::get_if<PropAccess>(&rhs->node);
        auto mask_side = [&](ExprPtr& side, const PropAccess* other_prop) {
            auto* lit = std::get_if<Literal>(&side->node);
            if (!lit || lit->placeholder) return;
            if (other_prop && c->op == CmpOp::Eq && lit->is_string()) {
                auto it = labels.find(other_prop->variable);
                if (it != labels.end()) {
                    if (const auto* pc =
                            placeholder_for(schema, it->second, other_prop->property)) {
                        side = make_literal(masked_literal(*lit, pc->token));
                        return;
                    }
                }
            }
            if (lit->is_number()) side = make_literal(Literal::bare_placeholder("[m]"));
        };
        mask_side(rhs, lp);
        mask_side(lhs, rp);
        return make_cmp(std::move(lhs), c->op, std::move(rhs));
    }
    if (const auto* l = std::get_if<Logical>(&e->node))
        return make_logic(mask_expr(l->lhs, schema, labels), l->op,
                          mask_expr(l->rhs, schema, labels));
    if (const auto* n = std::get_if<Negation>(&e->node))
        return make_not(mask_expr(n->inner, schema, labels));
    return e;
}

}  // namespace

std::string mask_entities(const QueryAst& ast, const GraphSchema& schema) {
    QueryAst masked = ast;
    auto labels = variable_labels(ast);
    for (auto& path : masked.match_paths) {
        for (auto& node : path.nodes) {
            if (!node.label) continue;
            for (auto& [prop, lit] : node.props) {
                if (const auto* pc = placeholder_for(schema, *node.label, prop))
                    lit = masked_literal(lit, pc->token);
            }
        }
    }
    masked.where = mask_expr(masked.where, schema, labels);
    for (auto& item : masked.return_items) item.expr = mask_expr(item.expr, schema, labels);
    for (auto& key : masked.order_by) key.expr = mask_expr(key.expr, schema, labels);
    return print_canonical(masked);
}

std::vector<EntityLiteral> entity_literals(const QueryAst& ast, const GraphSchema& schema) {
    std::vector<EntityLiteral> out;
    auto labels = variable_labels(ast);
    for (const auto& path : ast.match_paths) {
        for (const auto& node : path.nodes) {
            if (!node.label) continue;
            for (const auto& [prop, lit] : node.props)
                if (lit.is_string() && placeholder_for(schema, *node.label, prop))
                    out.push_back({*node.label, lit.as_string()});
        }
    }
    std::function<void(const ExprPtr&)> walk = [&](const ExprPtr& e) {
        if (!e) return;
        if (const auto* c = std::get_if<Comparison>(&e->node)) {
            if (c->op == CmpOp::Eq) {
                const auto* lp = std::get_if<PropAccess>(&c->lhs->node);
                const auto* rp = std::get_if<PropAccess>(&c->rhs->node);
                const auto* ll = std::get_if<Literal>(&c->lhs->node);
                const auto* rl = std::get_if<Literal>(&c->rhs->node);
                auto try_pair = [&](const PropAccess* p, const Literal* lit) {
                    if (!p || !lit || !lit->is_string()) return;
                    auto it = labels.find(p->variable);
                    if (it == labels.end()) return;
                    if (placeholder_for(schema, it->second, p->property))
                        out.push_back({it->second, lit->as_string()});
                };
                try_pair(lp, rl);
                try_pair(rp, ll);
            }
            walk(c->lhs);
            walk(c->rhs);
        } else if (const auto* l = std::get_if<Logical>(&e->node)) {
            walk(l->lhs);
            walk(l->rhs);
        } else if (const auto* n = std::get_if<Negation>(&e->node)) {
            walk(n->inner);
        }
    };
    walk(ast.where);
    return out;
}

namespace {

const std::set<std::string>& keyword_set() {
    static const std::set<std::string> kKeywords = {
        // query control (ORDER BY / GROUP BY handled as pairs)
        "MATCH", "GO", "FETCH", "LOOKUP", "WHERE", "YIELD", "WITH", "LIMIT", "RETURN",
        // logical
        "AND", "OR", "NOT", "XOR",
        // graph traversal
        "VERTEX", "EDGE", "OVER", "REVERSELY", "BIDIRECT",
        // aggregation
        "COUNT", "SUM", "AVG", "MAX", "MIN", "COLLECT", "DISTINCT"};
    return kKeywords;
}

// Tolerant word scan: skips string literals, splits on non-identifier bytes.
std::vector<std::string> keyword_tokens(std::string_view text) {
    std::vector<std::string> words;
    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (c == '\'' || c == '"') {
            char quote = c;
            ++i;
            while (i < text.size() && text[i] != quote) {
                if (text[i] == '\\') ++i;
                ++i;
            }
            if (i < text.size()) ++i;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = i;
            while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) ||
                                       text[i] == '_'))
                ++i;
            words.push_back(to_upper(text.substr(start, i - start)));
            continue;
        }
        ++i;
    }
    return words;
}

}  // namespace

KeywordCounts count_keywords(std::string_view text) {
    KeywordCounts result;
    auto words = keyword_tokens(text);
    for (std::size_t i = 0; i < words.size(); ++i) {
        std::string kw = words[i];
        if ((kw == "ORDER" || kw == "GROUP") && i + 1 < words.size() && words[i + 1] == "BY") {
            kw += " BY";
            ++i;
        } else if (!keyword_set().count(kw)) {
            continue;
        }
        ++result.counts[kw];
        if (kw != "MATCH" && kw != "RETURN") ++result.informative_total;
    }
    return result;
}

const char* query_type_name(QueryType type) {
    switch (type) {
        case QueryType::EntityProperty: return "EntityProperty";
        case QueryType::NumericalSorting: return "NumericalSorting";
        case QueryType::RelationshipInference: return "RelationshipInference";
        case QueryType::YesNo: return "YesNo";
        case QueryType::RelationshipFiltering: return "RelationshipFiltering";
        case QueryType::AttributeComparison: return "AttributeComparison";
        case QueryType::EdgeProperty: return "EdgeProperty";
        case QueryType::StringFiltering: return "StringFiltering";
    }
    return "EntityProperty";
}

namespace {

bool is_boolean_expr(const ExprPtr& e) {
    if (!e) return false;
    return std::holds_alternative<Comparison>(e->node) ||
           std::holds_alternative<Logical>(e->node) || std::holds_alternative<Negation>(e->node);
}

void walk_comparisons(const ExprPtr& e, const std::function<void(const Comparison&)>& fn) {
    if (!e) return;
    if (const auto* c = std::get_if<Comparison>(&e->node)) {
        fn(*c);
        walk_comparisons(c->lhs, fn);
        walk_comparisons(c->rhs, fn);
    } else if (const auto* l = std::get_if<Logical>(&e->node)) {
        walk_comparisons(l->lhs, fn);
        walk_comparisons(l->rhs, fn);
    } else if (const auto* n = std::get_if<Negation>(&e->node)) {
        walk_comparisons(n->inner, fn);
    }
}

}  // namespace

QueryType classify_query_type(const QueryAst& ast) {
    if (!ast.order_by.empty()) return QueryType::NumericalSorting;

    for (const auto& item : ast.return_items)
        if (item.aggregate == Aggregate::None && is_boolean_expr(item.expr))
            return QueryType::YesNo;

    // schema-free entity literals: string literals in node property maps and
    // in equality comparisons against a property access
    std::set<std::string> entity_lits;
    for (const auto& path : ast.match_paths)
        for (const auto& node : path.nodes)
            for (const auto& [prop, lit] : node.props)
                if (lit.is_string()) entity_lits.insert(lit.as_string());
    bool prop_vs_prop = false;
    bool string_predicate = false;
    walk_comparisons(ast.where, [&](const Comparison& c) {
        const auto* lp = std::get_if<PropAccess>(&c.lhs->node);
        const auto* rp = std::get_if<PropAccess>(&c.rhs->node);
        const auto* ll = std::get_if<Literal>(&c.lhs->node);
        const auto* rl = std::get_if<Literal>(&c.rhs->node);
        if (lp && rp) prop_vs_prop = true;
        const Literal* lit = ll ? ll : rl;
        if (lit && lit->is_string()) {
            if (c.op == CmpOp::Eq)
                entity_lits.insert(lit->as_string());
            else
                string_predicate = true;
        }
    });
    if (entity_lits.size() >= 2 && prop_vs_prop) return QueryType::AttributeComparison;

    std::set<std::string> edge_vars;
    for (const auto& path : ast.match_paths)
        for (const auto& e : path.edges)
            if (e.variable) edge_vars.insert(*e.variable);
    for (const auto& item : ast.return_items) {
        if (!item.expr) continue;
        if (const auto* p = std::get_if<PropAccess>(&item.expr->node))
            if (edge_vars.count(p->variable)) return QueryType::EdgeProperty;
    }

    if (string_predicate) return QueryType::StringFiltering;

    std::size_t edge_count = 0;
    for (const auto& path : ast.match_paths) edge_count += path.edges.size();
    bool multi_hop = edge_count >= 2;
    if (multi_hop && ast.where) return QueryType::RelationshipFiltering;
    if (multi_hop) return QueryType::RelationshipInference;
    return QueryType::EntityProperty;
}

}  // namespace mtforge::gql
