#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mtforge/value.hpp"

#include <nlohmann/json_fwd.hpp>

namespace mtforge {

enum class ValueKind { String, Number, Boolean, Date };

std::string value_kind_name(ValueKind kind);
ValueKind value_kind_from_name(std::string_view name);

struct PropertyDef {
    std::string name;
    ValueKind kind = ValueKind::String;

    bool operator==(const PropertyDef&) const = default;
};

// Fixed nine-token alphabet for entity placeholders.
inline constexpr const char* kPlaceholderTokens[] = {
    "[s]", "[c]", "[h]", "[t]", "[p]", "[f]", "[i]", "[d]", "[m]"};

bool is_placeholder_token(std::string_view token);

struct PlaceholderClass {
    std::string token;           // one of kPlaceholderTokens
    std::string bound_property;  // property whose literal values are maskable

    bool operator==(const PlaceholderClass&) const = default;
};

struct NodeTypeDef {
    std::string name;
    std::vector<PropertyDef> properties;
    std::optional<PlaceholderClass> placeholder;

    const PropertyDef* find_property(std::string_view prop) const;

    bool operator==(const NodeTypeDef&) const = default;
};

struct EdgeTypeDef {
    std::string name;
    std::string source;
    std::string target;
    std::vector<PropertyDef> properties;

    const PropertyDef* find_property(std::string_view prop) const;

    bool operator==(const EdgeTypeDef&) const = default;
};

class GraphSchema {
public:
    std::vector<NodeTypeDef> node_types;
    std::vector<EdgeTypeDef> edge_types;

    const NodeTypeDef* find_node_type(std::string_view name) const;
    const EdgeTypeDef* find_edge_type(std::string_view name) const;

    // Edge types whose source or target is `node_type`.
    std::vector<const EdgeTypeDef*> edges_incident(std::string_view node_type) const;

    // Throws SchemaError on duplicate/empty names, dangling edge endpoints,
    // or unknown placeholder tokens.
    void validate() const;

    std::string canonical_json() const;
    std::uint64_t fingerprint() const;

    bool operator==(const GraphSchema&) const = default;
};

using PropertyValues = std::map<std::string, Value>;

struct GraphNode {
    std::string id;
    std::string type;
    PropertyValues props;

    bool operator==(const GraphNode&) const = default;
};

struct GraphEdge {
    std::string src;
    std::string type;
    std::string dst;
    PropertyValues props;

    bool operator==(const GraphEdge&) const = default;
};

// Immutable after load; safe for concurrent reads.
class PropertyGraph {
public:
    PropertyGraph() = default;
    PropertyGraph(GraphSchema schema, std::vector<GraphNode> nodes, std::vector<GraphEdge> edges);

    const GraphSchema& schema() const { return schema_; }
    const std::vector<GraphNode>& nodes() const { return nodes_; }
    const std::vector<GraphEdge>& edges() const { return edges_; }

    const GraphNode* find_node(std::string_view id) const;
    // Nodes of a given type, sorted by id.
    std::vector<const GraphNode*> nodes_of_type(std::string_view type) const;
    // Outgoing / incoming edge indices for a node id.
    const std::vector<std::size_t>& edges_from(std::string_view id) const;
    const std::vector<std::size_t>& edges_to(std::string_view id) const;

    // Re-runs every conformance rule; returns human-readable violations.
    std::vector<std::string> conformance_violations() const;

    bool operator==(const PropertyGraph& other) const {
        return schema_ == other.schema_ && nodes_ == other.nodes_ && edges_ == other.edges_;
    }

private:
    GraphSchema schema_;
    std::vector<GraphNode> nodes_;
    std::vector<GraphEdge> edges_;
    std::map<std::string, std::size_t, std::less<>> node_index_;
    std::map<std::string, std::vector<std::size_t>, std::less<>> out_edges_;
    std::map<std::string, std::vector<std::size_t>, std::less<>> in_edges_;
};

GraphSchema schema_from_json(const nlohmann::json& doc);
GraphSchema load_schema(const std::filesystem::path& path);

PropertyGraph graph_from_json(const GraphSchema& schema, const nlohmann::json& doc);
PropertyGraph load_graph(const GraphSchema& schema, const std::filesystem::path& path);

// Deterministic draw of a node id of the requested type.
// Throws EmptyTypeError when no node of that type exists.
std::string sample_entity(const PropertyGraph& graph, std::string_view node_type, std::uint64_t seed);

// Latest ISO-date value present anywhere in the graph ("" if none).
std::string latest_date(const PropertyGraph& graph);

}  // namespace mtforge
