#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "mtforge/gql/ast.hpp"
#include "mtforge/graph.hpp"

namespace mtforge::gql {

// Replaces entity-selecting literals with the owning node type's placeholder
// token and numeric literals in comparisons with [m]; returns the canonical
// print of the masked query. Idempotent; never changes the structural
// skeleton.
std::string mask_entities(const QueryAst& ast, const GraphSchema& schema);

// Entity literals: string literals constraining a placeholder-bound property
// (property maps and equality comparisons), with the owning node type.
struct EntityLiteral {
    std::string node_type;
    std::string value;
};
std::vector<EntityLiteral> entity_literals(const QueryAst& ast, const GraphSchema& schema);

struct KeywordCounts {
    std::map<std::string, long> counts;  // canonical upper-case keyword -> occurrences
    long informative_total = 0;          // everything except MATCH and RETURN
};

// Token-stream keyword statistics over the four keyword groups (query
// control, logical, graph traversal, aggregation). Does not require a parse;
// string literals never contribute. ORDER BY / GROUP BY count once per pair.
KeywordCounts count_keywords(std::string_view text);

enum class QueryType {
    EntityProperty,
    NumericalSorting,
    RelationshipInference,
    YesNo,
    RelationshipFiltering,
    AttributeComparison,
    EdgeProperty,
    StringFiltering,
};

const char* query_type_name(QueryType type);

// Decision rules, first match wins:
//   ORDER BY            -> NumericalSorting
//   boolean return      -> YesNo
//   >=2 entity literals with a property-to-property comparison
//                       -> AttributeComparison
//   edge property in RETURN -> EdgeProperty
//   string comparison with operator other than '=' -> StringFiltering
//   WHERE over a multi-hop path (>=2 edges) -> RelationshipFiltering
//   multi-hop path without WHERE -> RelationshipInference
//   otherwise           -> EntityProperty
QueryType classify_query_type(const QueryAst& ast);

}  // namespace mtforge::gql
