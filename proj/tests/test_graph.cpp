#include <doctest.h>

#include <set>

#include "mtforge/errors.hpp"
#include "mtforge/graph.hpp"

#include "support/paths.hpp"
#include "support/randgen.hpp"

#include <nlohmann/json.hpp>

using namespace mtforge;
using nlohmann::json;

TEST_CASE("fixture schema loads with three node types and two edge types") {
    GraphSchema schema = testsupport::fixture_schema();
    CHECK(schema.node_types.size() == 3);
    CHECK(schema.edge_types.size() == 2);
    CHECK(schema.find_node_type("stock") != nullptr);
    CHECK(schema.find_node_type("stock")->placeholder->token == "[s]");
    CHECK(schema.find_edge_type("belong_to")->target == "industry");
}

TEST_CASE("schema validation rejects dangling edge endpoints") {
    json doc = {{"node_types", {{{"name", "a"}, {"properties", json::array()}}}},
                {"edge_types",
                 {{{"name", "e"}, {"source", "a"}, {"target", "foo"},
                   {"properties", json::array()}}}}};
    CHECK_THROWS_AS(schema_from_json(doc), SchemaError);
}

TEST_CASE("empty schema is valid") {
    json doc = {{"node_types", json::array()}, {"edge_types", json::array()}};
    GraphSchema schema = schema_from_json(doc);
    CHECK(schema.node_types.empty());
}

TEST_CASE("schema validation rejects duplicates and unknown placeholder tokens") {
    json dup = {{"node_types",
                 {{{"name", "a"}, {"properties", json::array()}},
                  {{"name", "a"}, {"properties", json::array()}}}},
                {"edge_types", json::array()}};
    CHECK_THROWS_AS(schema_from_json(dup), SchemaError);

    json bad_token = {{"node_types",
                       {{{"name", "a"},
                         {"properties", {{{"name", "x"}, {"kind", "string"}}}},
                         {"placeholder", {{"token", "[z]"}, {"bound_property", "x"}}}}}},
                      {"edge_types", json::array()}};
    CHECK_THROWS_AS(schema_from_json(bad_token), SchemaError);
}

TEST_CASE("fixture graph loads the Figure-1 reconstruction") {
    PropertyGraph graph = testsupport::fixture_graph();
    CHECK(graph.nodes_of_type("stock").size() == 2);
    CHECK(graph.nodes_of_type("industry").size() == 1);
    CHECK(graph.nodes_of_type("stock_data").size() >= 3);
    CHECK(graph.find_node("CITIC Securities") != nullptr);
}

TEST_CASE("graph loading reports dangling edges and kind mismatches") {
    GraphSchema schema = testsupport::fixture_schema();
    json dangling = {{"nodes",
                      {{{"id", "s1"}, {"type", "stock"}, {"props", {{"name", "s1"}}}}}},
                     {"edges",
                      {{{"src", "s1"}, {"type", "belong_to"}, {"dst", "missing"}}}}};
    CHECK_THROWS_AS(graph_from_json(schema, dangling), ConformanceError);
    CHECK_THROWS_WITH_AS(graph_from_json(schema, dangling),
                         doctest::Contains("missing"), ConformanceError);

    json mismatch = {{"nodes",
                      {{{"id", "s1"},
                        {"type", "stock"},
                        {"props", {{"name", "s1"}, {"opening_price", "not a number"}}}}}},
                     {"edges", json::array()}};
    CHECK_THROWS_AS(graph_from_json(schema, mismatch), ConformanceError);
}

TEST_CASE("accepted graphs re-validate with zero violations") {
    PropertyGraph graph = testsupport::fixture_graph();
    CHECK(graph.conformance_violations().empty());
}

TEST_CASE("loading the same files twice yields structurally equal graphs") {
    PropertyGraph a = testsupport::fixture_graph();
    PropertyGraph b = testsupport::fixture_graph();
    CHECK(a == b);
}

TEST_CASE("sample_entity is deterministic and honors the type") {
    PropertyGraph graph = testsupport::fixture_graph();
    CHECK(sample_entity(graph, "stock", 7) == sample_entity(graph, "stock", 7));
    CHECK(sample_entity(graph, "industry", 3) == "securities");
    CHECK(sample_entity(graph, "industry", 99) == "securities");
    CHECK_THROWS_AS(sample_entity(graph, "fund_manager", 1), EmptyTypeError);
}

TEST_CASE("sample_entity covers every node of the type across seeds") {
    PropertyGraph graph = testsupport::fixture_graph();
    std::set<std::string> seen;
    for (std::uint64_t seed = 0; seed < 64; ++seed)
        seen.insert(sample_entity(graph, "stock_data", seed));
    CHECK(seen.size() == graph.nodes_of_type("stock_data").size());
}

TEST_CASE("date-kind properties must look like ISO dates") {
    GraphSchema schema = testsupport::fixture_schema();
    json doc = {{"nodes",
                 {{{"id", "d1"}, {"type", "stock_data"}, {"props", {{"date", "tomorrow"}}}}}},
                {"edges", json::array()}};
    CHECK_THROWS_AS(graph_from_json(schema, doc), ConformanceError);
}

TEST_CASE("latest_date finds the maximum ISO date in the graph") {
    PropertyGraph graph = testsupport::fixture_graph();
    CHECK(latest_date(graph) == "2025-01-08");
}

TEST_CASE("every accepted random graph re-validates cleanly") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        PropertyGraph graph = testsupport::random_graph(seed);
        CHECK(graph.conformance_violations().empty());
    }
}
