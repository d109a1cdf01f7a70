#include "mtforge/gql/parser.hpp"

#include <cctype>
#include <charconv>
#include <set>
#include <vector>

#include "mtforge/errors.hpp"
#include "mtforge/text.hpp"

namespace mtforge::gql {

namespace {

enum class Tok {
    Ident,
    String,
    Number,
    Placeholder,  // bare [x] token
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Colon,
    Comma,
    Dot,
    Star,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    ArrowRight,  // ->
    Dash,        // -
    ArrowLeft,   // <-
    End,
};

struct Token {
    Tok kind;
    std::string text;
    std::size_t offset;
    bool is_float = false;  // for Number
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            Token t = next();
            bool done = t.kind == Tok::End;
            out.push_back(std::move(t));
            if (done) break;
        }
        return out;
    }

private:
    Token next() {
        skip_ws();
        std::size_t at = pos_;
        if (pos_ >= src_.size()) return {Tok::End, "", at};
        char c = src_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            return {Tok::Ident, std::string(src_.substr(start, pos_ - start)), at};
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && pos_ + 1 < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
            std::size_t start = pos_;
            bool is_float = false;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            if (pos_ < src_.size() && src_[pos_] == '.' && pos_ + 1 < src_.size() &&
                std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
                is_float = true;
                ++pos_;
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                    ++pos_;
            }
            Token t{Tok::Number, std::string(src_.substr(start, pos_ - start)), at};
            t.is_float = is_float;
            return t;
        }
        if (c == '\'' || c == '"') {
            char quote = c;
            ++pos_;
            std::string text;
            while (pos_ < src_.size() && src_[pos_] != quote) {
                if (src_[pos_] == '\\' && pos_ + 1 < src_.size()) {
                    ++pos_;
                    text.push_back(src_[pos_]);
                } else {
                    text.push_back(src_[pos_]);
                }
                ++pos_;
            }
            if (pos_ >= src_.size())
                throw SyntaxError("unterminated string literal", at, "closing quote");
            ++pos_;
            return {Tok::String, std::move(text), at};
        }
        // bare placeholder token: [x] with a single letter
        if (c == '[' && pos_ + 2 < src_.size() &&
            std::isalpha(static_cast<unsigned char>(src_[pos_ + 1])) && src_[pos_ + 2] == ']') {
            std::string text = std::string(src_.substr(pos_, 3));
            pos_ += 3;
            return {Tok::Placeholder, std::move(text), at};
        }
        ++pos_;
        switch (c) {
            case '(': return {Tok::LParen, "(", at};
            case ')': return {Tok::RParen, ")", at};
            case '{': return {Tok::LBrace, "{", at};
            case '}': return {Tok::RBrace, "}", at};
            case '[': return {Tok::LBracket, "[", at};
            case ']': return {Tok::RBracket, "]", at};
            case ':': return {Tok::Colon, ":", at};
            case ',': return {Tok::Comma, ",", at};
            case '.': return {Tok::Dot, ".", at};
            case '*': return {Tok::Star, "*", at};
            case '=': return {Tok::Eq, "=", at};
            case '!':
                if (pos_ < src_.size() && src_[pos_] == '=') {
                    ++pos_;
                    return {Tok::Ne, "!=", at};
                }
                throw SyntaxError("unexpected character '!'", at, "'='");
            case '<':
                if (pos_ < src_.size() && src_[pos_] == '>') {
                    ++pos_;
                    return {Tok::Ne, "<>", at};
                }
                if (pos_ < src_.size() && src_[pos_] == '=') {
                    ++pos_;
                    return {Tok::Le, "<=", at};
                }
                if (pos_ < src_.size() && src_[pos_] == '-') {
                    ++pos_;
                    return {Tok::ArrowLeft, "<-", at};
                }
                return {Tok::Lt, "<", at};
            case '>':
                if (pos_ < src_.size() && src_[pos_] == '=') {
                    ++pos_;
                    return {Tok::Ge, ">=", at};
                }
                return {Tok::Gt, ">", at};
            case '-':
                if (pos_ < src_.size() && src_[pos_] == '>') {
                    ++pos_;
                    return {Tok::ArrowRight, "->", at};
                }
                return {Tok::Dash, "-", at};
            default:
                throw SyntaxError(std::string("unexpected character '") + c + "'", at);
        }
    }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

bool is_kw(const Token& t, std::string_view kw) {
    return t.kind == Tok::Ident && iequals(t.text, kw);
}

class Parser {
public:
    explicit Parser(std::string_view src) : tokens_(Lexer(src).run()) {}

    QueryAst run() {
        if (peek().kind == Tok::End)
            throw SyntaxError("empty query", 0, "MATCH");
        for (const char* stmt : {"GO", "FETCH", "LOOKUP"}) {
            if (is_kw(peek(), stmt))
                throw UnsupportedStatementError(std::string(stmt) +
                                                " statements are not executable; only MATCH is");
        }
        expect_kw("MATCH");
        QueryAst ast;
        ast.match_paths.push_back(parse_path());
        while (peek().kind == Tok::Comma) {
            advance();
            ast.match_paths.push_back(parse_path());
        }
        if (is_kw(peek(), "WHERE")) {
            advance();
            ast.where = parse_expr();
        }
        check_unsupported_clause();
        expect_kw("RETURN");
        if (is_kw(peek(), "DISTINCT")) {
            advance();
            ast.return_distinct = true;
        }
        ast.return_items.push_back(parse_return_item());
        while (peek().kind == Tok::Comma) {
            advance();
            ast.return_items.push_back(parse_return_item());
        }
        if (is_kw(peek(), "ORDER")) {
            advance();
            expect_kw("BY");
            ast.order_by.push_back(parse_order_key());
            while (peek().kind == Tok::Comma) {
                advance();
                ast.order_by.push_back(parse_order_key());
            }
        }
        if (is_kw(peek(), "LIMIT")) {
            advance();
            const Token& t = peek();
            if (t.kind != Tok::Number || t.is_float)
                throw SyntaxError("LIMIT expects a non-negative integer", t.offset, "integer");
            std::int64_t n = 0;
            std::from_chars(t.text.data(), t.text.data() + t.text.size(), n);
            ast.limit = n;
            advance();
        }
        check_unsupported_clause();
        if (peek().kind != Tok::End)
            throw SyntaxError("unexpected trailing input '" + peek().text + "'", peek().offset,
                              "end of query");
        check_bindings(ast);
        return ast;
    }

private:
    void check_unsupported_clause() {
        static const char* kUnsupported[] = {"GO", "FETCH", "LOOKUP", "YIELD", "WITH", "GROUP"};
        for (const char* kw : kUnsupported) {
            if (is_kw(peek(), kw))
                throw UnsupportedStatementError(
                    to_upper(peek().text) +
                    " is recognized but not part of the executable subset");
        }
    }

    PathPattern parse_path() {
        PathPattern path;
        path.nodes.push_back(parse_node_pattern());
        while (peek().kind == Tok::Dash || peek().kind == Tok::ArrowLeft) {
            path.edges.push_back(parse_edge_pattern());
            path.nodes.push_back(parse_node_pattern());
        }
        return path;
    }

    NodePattern parse_node_pattern() {
        const Token& open = peek();
        if (open.kind != Tok::LParen)
            throw SyntaxError("expected node pattern", open.offset, "'('");
        advance();
        NodePattern node;
        if (peek().kind == Tok::Ident && !next_is_reserved()) {
            node.variable = peek().text;
            advance();
        }
        if (peek().kind == Tok::Colon) {
            advance();
            const Token& t = peek();
            if (t.kind != Tok::Ident)
                throw SyntaxError("expected node label", t.offset, "identifier");
            node.label = t.text;
            advance();
        }
        if (peek().kind == Tok::LBrace) {
            node.props = parse_prop_map();
        }
        if (peek().kind != Tok::RParen)
            throw SyntaxError("unclosed node pattern (missing ')')", peek().offset, "')'");
        advance();
        return node;
    }

    std::map<std::string, Literal> parse_prop_map() {
        advance();  // {
        std::map<std::string, Literal> props;
        if (peek().kind == Tok::RBrace) {
            advance();
            return props;
        }
        while (true) {
            const Token& key = peek();
            if (key.kind != Tok::Ident)
                throw SyntaxError("expected property name", key.offset, "identifier");
            std::string name = key.text;
            advance();
            if (peek().kind != Tok::Colon)
                throw SyntaxError("expected ':' in property map", peek().offset, "':'");
            advance();
            props[name] = parse_literal();
            if (peek().kind == Tok::Comma) {
                advance();
                continue;
            }
            break;
        }
        if (peek().kind != Tok::RBrace)
            throw SyntaxError("unclosed property map", peek().offset, "'}'");
        advance();
        return props;
    }

    EdgePattern parse_edge_pattern() {
        EdgePattern edge;
        bool from_left = peek().kind == Tok::ArrowLeft;  // <-[...]-
        advance();                                       // '-' or '<-'
        if (peek().kind != Tok::LBracket)
            throw SyntaxError("expected edge pattern", peek().offset, "'['");
        advance();
        if (peek().kind == Tok::Ident) {
            edge.variable = peek().text;
            advance();
        }
        if (peek().kind == Tok::Colon) {
            advance();
            const Token& t = peek();
            if (t.kind != Tok::Ident)
                throw SyntaxError("expected edge type", t.offset, "identifier");
            edge.type = t.text;
            advance();
        }
        if (peek().kind != Tok::RBracket)
            throw SyntaxError("unclosed edge pattern", peek().offset, "']'");
        advance();
        if (from_left) {
            if (peek().kind != Tok::Dash)
                throw SyntaxError("expected '-' after edge pattern", peek().offset, "'-'");
            advance();
            edge.direction = EdgeDirection::Left;
        } else {
            if (peek().kind != Tok::ArrowRight)
                throw SyntaxError("expected '->' after edge pattern", peek().offset, "'->'");
            advance();
            edge.direction = EdgeDirection::Right;
        }
        return edge;
    }

    Literal parse_literal() {
        if (peek().kind == Tok::Dash && peek_ahead(1).kind == Tok::Number) {
            advance();
            Literal lit = number_literal(peek());
            advance();
            if (std::holds_alternative<std::int64_t>(lit.v))
                lit.v = -std::get<std::int64_t>(lit.v);
            else
                lit.v = -std::get<double>(lit.v);
            return lit;
        }
        const Token& t = peek();
        switch (t.kind) {
            case Tok::String: {
                Literal lit(t.text);
                advance();
                return lit;
            }
            case Tok::Number: {
                Literal lit = number_literal(t);
                advance();
                return lit;
            }
            case Tok::Placeholder: {
                Literal lit = Literal::bare_placeholder(t.text);
                advance();
                return lit;
            }
            case Tok::Ident:
                if (iequals(t.text, "true") || iequals(t.text, "false")) {
                    Literal lit(iequals(t.text, "true"));
                    advance();
                    return lit;
                }
                [[fallthrough]];
            default:
                throw SyntaxError("expected literal", t.offset, "string, number or boolean");
        }
    }

    static Literal number_literal(const Token& t) {
        if (t.is_float) {
            double d = 0;
            std::from_chars(t.text.data(), t.text.data() + t.text.size(), d);
            return Literal(d);
        }
        std::int64_t i = 0;
        std::from_chars(t.text.data(), t.text.data() + t.text.size(), i);
        return Literal(i);
    }

    // Precedence: OR < XOR < AND < NOT < comparison.
    ExprPtr parse_expr() { return parse_or(); }

    ExprPtr parse_or() {
        ExprPtr lhs = parse_xor();
        while (is_kw(peek(), "OR")) {
            advance();
            lhs = make_logic(std::move(lhs), BoolOp::Or, parse_xor());
        }
        return lhs;
    }

    ExprPtr parse_xor() {
        ExprPtr lhs = parse_and();
        while (is_kw(peek(), "XOR")) {
            advance();
            lhs = make_logic(std::move(lhs), BoolOp::Xor, parse_and());
        }
        return lhs;
    }

    ExprPtr parse_and() {
        ExprPtr lhs = parse_not();
        while (is_kw(peek(), "AND")) {
            advance();
            lhs = make_logic(std::move(lhs), BoolOp::And, parse_not());
        }
        return lhs;
    }

    ExprPtr parse_not() {
        if (is_kw(peek(), "NOT")) {
            advance();
            return make_not(parse_not());
        }
        return parse_comparison();
    }

    ExprPtr parse_comparison() {
        ExprPtr lhs = parse_operand();
        CmpOp op;
        switch (peek().kind) {
            case Tok::Eq: op = CmpOp::Eq; break;
            case Tok::Ne: op = CmpOp::Ne; break;
            case Tok::Lt: op = CmpOp::Lt; break;
            case Tok::Le: op = CmpOp::Le; break;
            case Tok::Gt: op = CmpOp::Gt; break;
            case Tok::Ge: op = CmpOp::Ge; break;
            default: return lhs;
        }
        advance();
        return make_cmp(std::move(lhs), op, parse_operand());
    }

    ExprPtr parse_operand() {
        const Token& t = peek();
        if (t.kind == Tok::LParen) {
            advance();
            ExprPtr inner = parse_expr();
            if (peek().kind != Tok::RParen)
                throw SyntaxError("unclosed parenthesis in expression", peek().offset, "')'");
            advance();
            return inner;
        }
        if (t.kind == Tok::Ident && !next_is_reserved()) {
            std::string var = t.text;
            advance();
            if (peek().kind == Tok::Dot) {
                advance();
                const Token& p = peek();
                if (p.kind != Tok::Ident)
                    throw SyntaxError("expected property name after '.'", p.offset, "identifier");
                std::string prop = p.text;
                advance();
                return make_prop(std::move(var), std::move(prop));
            }
            return make_var(std::move(var));
        }
        return make_literal(parse_literal());
    }

    ReturnItem parse_return_item() {
        ReturnItem item;
        const Token& t = peek();
        if (t.kind == Tok::Ident) {
            Aggregate agg = Aggregate::None;
            if (iequals(t.text, "COUNT")) agg = Aggregate::Count;
            else if (iequals(t.text, "SUM")) agg = Aggregate::Sum;
            else if (iequals(t.text, "AVG")) agg = Aggregate::Avg;
            else if (iequals(t.text, "MAX")) agg = Aggregate::Max;
            else if (iequals(t.text, "MIN")) agg = Aggregate::Min;
            else if (iequals(t.text, "COLLECT")) agg = Aggregate::Collect;
            if (agg != Aggregate::None && peek_ahead(1).kind == Tok::LParen) {
                item.aggregate = agg;
                advance();  // name
                advance();  // (
                if (agg == Aggregate::Count && peek().kind == Tok::Star) {
                    item.count_star = true;
                    advance();
                } else {
                    if (is_kw(peek(), "DISTINCT")) {
                        item.distinct_arg = true;
                        advance();
                    }
                    item.expr = parse_expr();
                }
                if (peek().kind != Tok::RParen)
                    throw SyntaxError("unclosed aggregate call", peek().offset, "')'");
                advance();
                return item;
            }
        }
        item.expr = parse_expr();
        return item;
    }

    OrderKey parse_order_key() {
        OrderKey key;
        key.expr = parse_expr();
        if (is_kw(peek(), "ASC")) {
            advance();
        } else if (is_kw(peek(), "DESC")) {
            key.descending = true;
            advance();
        }
        return key;
    }

    // True when the current Ident token is a clause keyword rather than a
    // variable name.
    bool next_is_reserved() {
        static const char* kReserved[] = {"MATCH", "WHERE",  "RETURN", "ORDER",    "BY",
                                          "LIMIT", "AND",    "OR",     "NOT",      "XOR",
                                          "ASC",   "DESC",   "GO",     "FETCH",    "LOOKUP",
                                          "YIELD", "WITH",   "GROUP",  "DISTINCT", "TRUE",
                                          "FALSE"};
        if (peek().kind != Tok::Ident) return false;
        for (const char* kw : kReserved)
            if (iequals(peek().text, kw)) return true;
        return false;
    }

    void check_bindings(const QueryAst& ast) const {
        std::set<std::string> bound;
        for (const auto& var : bound_variables(ast)) bound.insert(var);
        auto check_expr = [&](auto&& self, const ExprPtr& e) -> void {
            if (!e) return;
            if (const auto* p = std::get_if<PropAccess>(&e->node)) {
                if (!bound.count(p->variable))
                    throw UnboundVariableError("variable '" + p->variable +
                                               "' is not bound in MATCH");
            } else if (const auto* v = std::get_if<VarRef>(&e->node)) {
                if (!bound.count(v->variable))
                    throw UnboundVariableError("variable '" + v->variable +
                                               "' is not bound in MATCH");
            } else if (const auto* c = std::get_if<Comparison>(&e->node)) {
                self(self, c->lhs);
                self(self, c->rhs);
            } else if (const auto* l = std::get_if<Logical>(&e->node)) {
                self(self, l->lhs);
                self(self, l->rhs);
            } else if (const auto* n = std::get_if<Negation>(&e->node)) {
                self(self, n->inner);
            }
        };
        check_expr(check_expr, ast.where);
        for (const auto& item : ast.return_items) check_expr(check_expr, item.expr);
        for (const auto& key : ast.order_by) check_expr(check_expr, key.expr);
    }

    const Token& peek() const { return tokens_[pos_]; }
    const Token& peek_ahead(std::size_t n) const {
        std::size_t i = pos_ + n;
        return tokens_[i < tokens_.size() ? i : tokens_.size() - 1];
    }
    void advance() {
        if (pos_ + 1 < tokens_.size()) ++pos_;
    }
    void expect_kw(std::string_view kw) {
        if (!is_kw(peek(), kw))
            throw SyntaxError("expected " + std::string(kw) + ", found '" + peek().text + "'",
                              peek().offset, std::string(kw));
        advance();
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

}  // namespace

QueryAst parse(std::string_view text) { return Parser(text).run(); }

}  // namespace mtforge::gql
