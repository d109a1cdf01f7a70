#pragma once

#include "mtforge/gql/ast.hpp"
#include "mtforge/graph.hpp"
#include "mtforge/value.hpp"

namespace mtforge::gql {

// Evaluates the query against the graph. Row order is deterministic: rows
// sort by their full value tuple when no ORDER BY is present, and ORDER BY
// ties break on the full tuple. Throws SemanticError for unknown
// labels/properties and TypeError for comparisons across incompatible kinds.
ResultTable execute(const QueryAst& ast, const PropertyGraph& graph);

}  // namespace mtforge::gql
