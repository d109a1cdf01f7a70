#pragma once

// Seeded random graphs over a fixture-like financial schema plus random
// queries drawn from the six expansion-pattern template families.

#include <string>
#include <vector>

#include "mtforge/graph.hpp"
#include "mtforge/rng.hpp"
#include "mtforge/value.hpp"

namespace testsupport {

inline mtforge::GraphSchema random_schema() {
    using namespace mtforge;
    GraphSchema schema;
    schema.node_types.push_back(
        {"company",
         {{"name", ValueKind::String}, {"price", ValueKind::Number}, {"volume", ValueKind::Number}},
         PlaceholderClass{"[s]", "name"}});
    schema.node_types.push_back({"sector",
                                 {{"name", ValueKind::String}},
                                 PlaceholderClass{"[i]", "name"}});
    schema.node_types.push_back(
        {"record",
         {{"date", ValueKind::Date}, {"price", ValueKind::Number}, {"volume", ValueKind::Number}},
         PlaceholderClass{"[d]", "date"}});
    schema.edge_types.push_back({"in_sector", "company", "sector", {}});
    schema.edge_types.push_back(
        {"has_record", "company", "record", {{"weight", ValueKind::Number}}});
    schema.validate();
    return schema;
}

// <= 30 nodes; numeric values drawn from a small pool so comparisons and
// aggregates hit ties and duplicates.
inline mtforge::PropertyGraph random_graph(std::uint64_t seed) {
    using namespace mtforge;
    Rng rng(seed);
    GraphSchema schema = random_schema();
    std::vector<GraphNode> nodes;
    std::vector<GraphEdge> edges;

    auto price = [&]() -> Value {
        if (rng.bounded(2) == 0) return Value(static_cast<std::int64_t>(rng.range(1, 40)));
        return Value(static_cast<double>(rng.range(10, 400)) / 10.0);
    };

    int sectors = static_cast<int>(rng.range(1, 3));
    for (int i = 0; i < sectors; ++i)
        nodes.push_back({"S" + std::to_string(i), "sector", {{"name", Value("S" + std::to_string(i))}}});

    int companies = static_cast<int>(rng.range(2, 7));
    for (int i = 0; i < companies; ++i) {
        std::string id = "C" + std::to_string(i);
        nodes.push_back({id,
                         "company",
                         {{"name", Value(id)}, {"price", price()}, {"volume", price()}}});
        edges.push_back({id, "in_sector", "S" + std::to_string(rng.bounded(sectors)), {}});
    }

    int budget = 30 - sectors - companies;
    int records = static_cast<int>(rng.range(1, std::min<std::int64_t>(budget, 12)));
    for (int i = 0; i < records; ++i) {
        std::string id = "R" + std::to_string(i);
        std::string date = "2025-01-0" + std::to_string(1 + rng.bounded(9));
        nodes.push_back({id,
                         "record",
                         {{"date", Value(date)}, {"price", price()}, {"volume", price()}}});
        std::string owner = "C" + std::to_string(rng.bounded(companies));
        edges.push_back({owner, "has_record", id, {{"weight", price()}}});
    }
    return PropertyGraph(schema, std::move(nodes), std::move(edges));
}

// One random query from the Table-1-style template families; always valid
// against random_schema().
inline std::string random_query(const mtforge::PropertyGraph& graph, std::uint64_t seed) {
    using namespace mtforge;
    Rng rng(seed);
    auto companies = graph.nodes_of_type("company");
    auto sectors = graph.nodes_of_type("sector");
    auto records = graph.nodes_of_type("record");
    auto company = [&]() { return companies[rng.bounded(companies.size())]->id; };
    auto sector = [&]() { return sectors[rng.bounded(sectors.size())]->id; };
    auto date = [&]() {
        if (records.empty()) return std::string("2025-01-01");
        return records[rng.bounded(records.size())]->props.at("date").as_string();
    };
    auto num_prop = [&]() { return rng.bounded(2) == 0 ? "price" : "volume"; };
    auto threshold = [&]() { return std::to_string(rng.range(1, 40)); };

    switch (rng.bounded(10)) {
        case 0:  // attribute lookup
            return "MATCH (a:company {name: '" + company() + "'}) RETURN a." + num_prop();
        case 1:  // temporal lookup
            return "MATCH (a:company {name: '" + company() + "'})-[:has_record]->(r:record {date: '" +
                   date() + "'}) RETURN r." + num_prop();
        case 2:  // sorting with category filter
            return "MATCH (a:company)-[:in_sector]->(s:sector) WHERE s.name = '" + sector() +
                   "' RETURN a.name ORDER BY a." + num_prop() + " DESC LIMIT " +
                   std::to_string(rng.range(1, 3));
        case 3: {  // aggregation
            static const char* kAggs[] = {"COUNT", "SUM", "AVG", "MAX", "MIN", "COLLECT"};
            std::string agg = kAggs[rng.bounded(6)];
            return "MATCH (a:company) RETURN " + agg + "(a." + num_prop() + ")";
        }
        case 4: {  // conditional filtering
            std::string q = "MATCH (a:company) WHERE a.price > " + threshold();
            if (rng.bounded(2) == 0) q += " AND a.volume < " + threshold();
            else if (rng.bounded(2) == 0) q += " OR NOT a.volume > " + threshold();
            return q + " RETURN a.name";
        }
        case 5:  // same-type comparison (boolean return)
            return "MATCH (a:company {name: '" + company() + "'}), (b:company {name: '" +
                   company() + "'}) RETURN a." + num_prop() + " > b." + num_prop();
        case 6:  // attribute comparison with WHERE
            return "MATCH (a:company {name: '" + company() + "'}), (b:company {name: '" +
                   company() + "'}) WHERE a.price >= b.price RETURN a.name, b.name";
        case 7:  // edge property
            return "MATCH (a:company {name: '" + company() +
                   "'})-[r:has_record]->(d:record) RETURN r.weight ORDER BY r.weight";
        case 8:  // multi-hop with grouping
            return "MATCH (a:company)-[:in_sector]->(s:sector) RETURN s.name, COUNT(a.name)";
        case 9: {  // distinct projection over two-hop paths
            std::string q = "MATCH (a:company)-[:has_record]->(r:record {date: '" + date() +
                            "'}) RETURN DISTINCT a.name";
            if (rng.bounded(2) == 0) q += " ORDER BY a.name LIMIT 2";
            return q;
        }
    }
    return "MATCH (a:company) RETURN COUNT(*)";
}

// Tolerant table comparison (same arity, same order, Value::equals cells).
inline bool tables_equal(const mtforge::ResultTable& a, const mtforge::ResultTable& b) {
    if (a.rows.size() != b.rows.size()) return false;
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        if (a.rows[i].size() != b.rows[i].size()) return false;
        for (std::size_t j = 0; j < a.rows[i].size(); ++j)
            if (!a.rows[i][j].equals(b.rows[i][j])) return false;
    }
    return true;
}

}  // namespace testsupport
