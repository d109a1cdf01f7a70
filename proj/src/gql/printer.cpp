#include "mtforge/gql/printer.hpp"

#include <charconv>
#include <map>

#include "mtforge/text.hpp"
#include "mtforge/value.hpp"

namespace mtforge::gql {

namespace {

std::string quote_string(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    out.push_back('\'');
    return out;
}

class Printer {
public:
    explicit Printer(const QueryAst& ast) : ast_(ast) {
        int next = 1;
        for (const auto& var : bound_variables(ast))
            rename_.emplace(var, "v" + std::to_string(next++));
    }

    std::string run() {
        std::string out = "MATCH ";
        for (std::size_t i = 0; i < ast_.match_paths.size(); ++i) {
            if (i) out += ", ";
            out += path(ast_.match_paths[i]);
        }
        if (ast_.where) out += " WHERE " + expr(*ast_.where, 0);
        out += " RETURN ";
        if (ast_.return_distinct) out += "DISTINCT ";
        for (std::size_t i = 0; i < ast_.return_items.size(); ++i) {
            if (i) out += ", ";
            out += return_item(ast_.return_items[i]);
        }
        if (!ast_.order_by.empty()) {
            out += " ORDER BY ";
            for (std::size_t i = 0; i < ast_.order_by.size(); ++i) {
                if (i) out += ", ";
                out += expr(*ast_.order_by[i].expr, 0);
                if (ast_.order_by[i].descending) out += " DESC";
            }
        }
        if (ast_.limit) out += " LIMIT " + std::to_string(*ast_.limit);
        return out;
    }

private:
    std::string var(const std::string& name) const {
        auto it = rename_.find(name);
        return it == rename_.end() ? name : it->second;
    }

    std::string path(const PathPattern& p) const {
        std::string out = node(p.nodes[0]);
        for (std::size_t i = 0; i < p.edges.size(); ++i) {
            out += edge(p.edges[i]);
            out += node(p.nodes[i + 1]);
        }
        return out;
    }

    std::string node(const NodePattern& n) const {
        std::string out = "(";
        if (n.variable) out += var(*n.variable);
        if (n.label) out += ":" + *n.label;
        if (!n.props.empty()) {
            if (out.size() > 1) out += " ";
            out += "{";
            bool first = true;
            for (const auto& [key, lit] : n.props) {
                if (!first) out += ", ";
                first = false;
                out += key + ": " + print_literal(lit);
            }
            out += "}";
        }
        out += ")";
        return out;
    }

    std::string edge(const EdgePattern& e) const {
        std::string inner = "[";
        if (e.variable) inner += var(*e.variable);
        if (e.type) inner += ":" + *e.type;
        inner += "]";
        return e.direction == EdgeDirection::Right ? "-" + inner + "->" : "<-" + inner + "-";
    }

    // Precedence levels: OR=1, XOR=2, AND=3, NOT=4, comparison=5, atom=6.
    static int op_level(const Expr& e) {
        if (const auto* l = std::get_if<Logical>(&e.node)) {
            switch (l->op) {
                case BoolOp::Or: return 1;
                case BoolOp::Xor: return 2;
                case BoolOp::And: return 3;
            }
        }
        if (std::holds_alternative<Negation>(e.node)) return 4;
        if (std::holds_alternative<Comparison>(e.node)) return 5;
        return 6;
    }

    std::string expr(const Expr& e, int parent_level) const {
        int level = op_level(e);
        std::string out;
        if (const auto* lit = std::get_if<Literal>(&e.node)) {
            out = print_literal(*lit);
        } else if (const auto* p = std::get_if<PropAccess>(&e.node)) {
            out = var(p->variable) + "." + p->property;
        } else if (const auto* v = std::get_if<VarRef>(&e.node)) {
            out = var(v->variable);
        } else if (const auto* c = std::get_if<Comparison>(&e.node)) {
            out = expr(*c->lhs, level + 1) + " " + cmp_op_text(c->op) + " " +
                  expr(*c->rhs, level + 1);
        } else if (const auto* l = std::get_if<Logical>(&e.node)) {
            out = expr(*l->lhs, level) + " " + bool_op_text(l->op) + " " + expr(*l->rhs, level + 1);
        } else {
            const auto& n = std::get<Negation>(e.node);
            out = std::string("NOT ") + expr(*n.inner, level);
        }
        if (level < parent_level) return "(" + out + ")";
        return out;
    }

    std::string return_item(const ReturnItem& item) const {
        if (item.aggregate == Aggregate::None) return expr(*item.expr, 0);
        std::string out = aggregate_name(item.aggregate);
        out += "(";
        if (item.count_star) {
            out += "*";
        } else {
            if (item.distinct_arg) out += "DISTINCT ";
            out += expr(*item.expr, 0);
        }
        out += ")";
        return out;
    }

    const QueryAst& ast_;
    std::map<std::string, std::string> rename_;
};

}  // namespace

std::string print_literal(const Literal& lit) {
    if (lit.placeholder) return std::get<std::string>(lit.v);
    if (const auto* b = std::get_if<bool>(&lit.v)) return *b ? "true" : "false";
    if (const auto* i = std::get_if<std::int64_t>(&lit.v)) return std::to_string(*i);
    if (const auto* d = std::get_if<double>(&lit.v)) {
        // stay within the lexer's plain-decimal grammar: no exponents, and a
        // trailing .0 so the literal reparses as a decimal
        std::string out = format_double(*d);
        if (out.find('e') != std::string::npos || out.find('E') != std::string::npos) {
            char buf[64];
            auto res = std::to_chars(buf, buf + sizeof(buf), *d, std::chars_format::fixed);
            out.assign(buf, res.ptr);
        }
        if (out.find('.') == std::string::npos) out += ".0";
        return out;
    }
    return quote_string(std::get<std::string>(lit.v));
}

std::string print_canonical(const QueryAst& ast) { return Printer(ast).run(); }

}  // namespace mtforge::gql
