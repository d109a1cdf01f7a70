#pragma once

#include <string>
#include <string_view>

#include "mtforge/gql/ast.hpp"

namespace mtforge::gql {

// Parses the MATCH / WHERE / RETURN / ORDER BY / LIMIT subset. Keywords are
// case-insensitive. GO, FETCH, LOOKUP, YIELD, WITH and GROUP BY are
// recognized by the tokenizer but rejected with UnsupportedStatementError.
// Throws SyntaxError (with byte offset and expected-token hint) and
// UnboundVariableError.
QueryAst parse(std::string_view text);

}  // namespace mtforge::gql
