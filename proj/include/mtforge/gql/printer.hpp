#pragma once

#include <string>

#include "mtforge/gql/ast.hpp"

namespace mtforge::gql {

// Canonical text form: upper-case keywords, single spacing, variables
// renamed v1,v2,... in first-appearance order, property maps sorted by key,
// single-quoted strings. parse(print_canonical(ast)) is structurally equal
// to ast for ASTs already in canonical variable form, and
// print(parse(print(parse(q)))) == print(parse(q)) for any valid q.
std::string print_canonical(const QueryAst& ast);

std::string print_literal(const Literal& lit);

}  // namespace mtforge::gql
