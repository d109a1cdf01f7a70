#include "mtforge/graph.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "mtforge/errors.hpp"
#include "mtforge/rng.hpp"
#include "mtforge/text.hpp"

#include <nlohmann/json.hpp>

namespace mtforge {

using nlohmann::json;

std::string value_kind_name(ValueKind kind) {
    switch (kind) {
        case ValueKind::String: return "string";
        case ValueKind::Number: return "number";
        case ValueKind::Boolean: return "boolean";
        case ValueKind::Date: return "date";
    }
    return "string";
}

ValueKind value_kind_from_name(std::string_view name) {
    if (name == "string") return ValueKind::String;
    if (name == "number") return ValueKind::Number;
    if (name == "boolean") return ValueKind::Boolean;
    if (name == "date") return ValueKind::Date;
    throw ParseError("unknown value kind '" + std::string(name) + "'");
}

bool is_placeholder_token(std::string_view token) {
    for (const char* t : kPlaceholderTokens)
        if (token == t) return true;
    return false;
}

const PropertyDef* NodeTypeDef::find_property(std::string_view prop) const {
    for (const auto& p : properties)
        if (p.name == prop) return &p;
    return nullptr;
}

const PropertyDef* EdgeTypeDef::find_property(std::string_view prop) const {
    for (const auto& p : properties)
        if (p.name == prop) return &p;
    return nullptr;
}

const NodeTypeDef* GraphSchema::find_node_type(std::string_view name) const {
    for (const auto& t : node_types)
        if (t.name == name) return &t;
    return nullptr;
}

const EdgeTypeDef* GraphSchema::find_edge_type(std::string_view name) const {
    for (const auto& t : edge_types)
        if (t.name == name) return &t;
    return nullptr;
}

std::vector<const EdgeTypeDef*> GraphSchema::edges_incident(std::string_view node_type) const {
    std::vector<const EdgeTypeDef*> out;
    for (const auto& e : edge_types)
        if (e.source == node_type || e.target == node_type) out.push_back(&e);
    return out;
}

namespace {

void check_unique_properties(const std::vector<PropertyDef>& props, const std::string& owner) {
    std::set<std::string> seen;
    for (const auto& p : props) {
        if (p.name.empty()) throw SchemaError("empty property name in '" + owner + "'");
        if (!seen.insert(p.name).second)
            throw SchemaError("duplicate property '" + p.name + "' in '" + owner + "'");
    }
}

}  // namespace

void GraphSchema::validate() const {
    std::set<std::string> node_names;
    for (const auto& t : node_types) {
        if (t.name.empty()) throw SchemaError("empty node type name");
        if (!node_names.insert(t.name).second)
            throw SchemaError("duplicate node type '" + t.name + "'");
        check_unique_properties(t.properties, t.name);
        if (t.placeholder) {
            if (!is_placeholder_token(t.placeholder->token))
                throw SchemaError("unknown placeholder token '" + t.placeholder->token +
                                  "' on node type '" + t.name + "'");
            if (!t.find_property(t.placeholder->bound_property))
                throw SchemaError("placeholder on '" + t.name + "' binds unknown property '" +
                                  t.placeholder->bound_property + "'");
        }
    }
    std::set<std::string> edge_names;
    for (const auto& e : edge_types) {
        if (e.name.empty()) throw SchemaError("empty edge type name");
        if (!edge_names.insert(e.name).second)
            throw SchemaError("duplicate edge type '" + e.name + "'");
        check_unique_properties(e.properties, e.name);
        if (!find_node_type(e.source))
            throw SchemaError("edge type '" + e.name + "' references unknown source node type '" +
                              e.source + "'");
        if (!find_node_type(e.target))
            throw SchemaError("edge type '" + e.name + "' references unknown target node type '" +
                              e.target + "'");
    }
}

namespace {

json schema_to_json(const GraphSchema& schema) {
    json doc;
    doc["node_types"] = json::array();
    for (const auto& t : schema.node_types) {
        json jt;
        jt["name"] = t.name;
        jt["properties"] = json::array();
        for (const auto& p : t.properties)
            jt["properties"].push_back({{"name", p.name}, {"kind", value_kind_name(p.kind)}});
        if (t.placeholder)
            jt["placeholder"] = {{"token", t.placeholder->token},
                                 {"bound_property", t.placeholder->bound_property}};
        doc["node_types"].push_back(std::move(jt));
    }
    doc["edge_types"] = json::array();
    for (const auto& e : schema.edge_types) {
        json je;
        je["name"] = e.name;
        je["source"] = e.source;
        je["target"] = e.target;
        je["properties"] = json::array();
        for (const auto& p : e.properties)
            je["properties"].push_back({{"name", p.name}, {"kind", value_kind_name(p.kind)}});
        doc["edge_types"].push_back(std::move(je));
    }
    return doc;
}

}  // namespace

std::string GraphSchema::canonical_json() const { return schema_to_json(*this).dump(); }

std::uint64_t GraphSchema::fingerprint() const { return fnv1a64(canonical_json()); }

GraphSchema schema_from_json(const json& doc) {
    GraphSchema schema;
    if (!doc.is_object()) throw ParseError("schema document must be a JSON object");
    for (const auto& jt : doc.value("node_types", json::array())) {
        NodeTypeDef t;
        t.name = jt.value("name", "");
        for (const auto& jp : jt.value("properties", json::array()))
            t.properties.push_back(
                {jp.value("name", ""), value_kind_from_name(jp.value("kind", "string"))});
        if (jt.contains("placeholder")) {
            const auto& jpl = jt.at("placeholder");
            t.placeholder =
                PlaceholderClass{jpl.value("token", ""), jpl.value("bound_property", "")};
        }
        schema.node_types.push_back(std::move(t));
    }
    for (const auto& je : doc.value("edge_types", json::array())) {
        EdgeTypeDef e;
        e.name = je.value("name", "");
        e.source = je.value("source", "");
        e.target = je.value("target", "");
        for (const auto& jp : je.value("properties", json::array()))
            e.properties.push_back(
                {jp.value("name", ""), value_kind_from_name(jp.value("kind", "string"))});
        schema.edge_types.push_back(std::move(e));
    }
    schema.validate();
    return schema;
}

GraphSchema load_schema(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open schema file '" + path.string() + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ParseError("malformed schema file '" + path.string() + "': " + e.what());
    }
    return schema_from_json(doc);
}

namespace {

Value value_from_json(const json& j) {
    if (j.is_null()) return Value::null();
    if (j.is_boolean()) return Value(j.get<bool>());
    if (j.is_number_integer() || j.is_number_unsigned()) return Value(j.get<std::int64_t>());
    if (j.is_number_float()) return Value(j.get<double>());
    if (j.is_string()) return Value(j.get<std::string>());
    throw ParseError("unsupported property value: " + j.dump());
}

bool kind_matches(const Value& v, ValueKind kind) {
    switch (kind) {
        case ValueKind::String: return v.is_string();
        case ValueKind::Number: return v.is_number();
        case ValueKind::Boolean: return v.is_bool();
        case ValueKind::Date: return v.is_string() && looks_like_iso_date(v.as_string());
    }
    return false;
}

void check_props(const PropertyValues& props, const std::vector<PropertyDef>& defs,
                 const std::string& what, std::vector<std::string>* violations) {
    auto report = [&](const std::string& msg) {
        if (violations)
            violations->push_back(msg);
        else
            throw ConformanceError(msg);
    };
    for (const auto& [name, value] : props) {
        const PropertyDef* def = nullptr;
        for (const auto& d : defs)
            if (d.name == name) def = &d;
        if (!def) {
            report(what + ": undeclared property '" + name + "'");
            continue;
        }
        if (!kind_matches(value, def->kind))
            report(what + ": property '" + name + "' is not of kind " +
                   value_kind_name(def->kind));
    }
}

}  // namespace

PropertyGraph::PropertyGraph(GraphSchema schema, std::vector<GraphNode> nodes,
                             std::vector<GraphEdge> edges)
    : schema_(std::move(schema)), nodes_(std::move(nodes)), edges_(std::move(edges)) {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const auto& n = nodes_[i];
        if (!node_index_.emplace(n.id, i).second)
            throw ConformanceError("node '" + n.id + "': duplicate id");
        const NodeTypeDef* def = schema_.find_node_type(n.type);
        if (!def) throw ConformanceError("node '" + n.id + "': unknown node type '" + n.type + "'");
        check_props(n.props, def->properties, "node '" + n.id + "'", nullptr);
    }
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        const auto& e = edges_[i];
        const EdgeTypeDef* def = schema_.find_edge_type(e.type);
        if (!def)
            throw ConformanceError("edge " + std::to_string(i) + ": unknown edge type '" + e.type +
                                   "'");
        const GraphNode* src = find_node(e.src);
        const GraphNode* dst = find_node(e.dst);
        if (!src)
            throw ConformanceError("edge " + std::to_string(i) + " ('" + e.type +
                                   "'): source node '" + e.src + "' does not exist");
        if (!dst)
            throw ConformanceError("edge " + std::to_string(i) + " ('" + e.type +
                                   "'): target node '" + e.dst + "' does not exist");
        if (src->type != def->source)
            throw ConformanceError("edge " + std::to_string(i) + " ('" + e.type + "'): source '" +
                                   e.src + "' has type '" + src->type + "', expected '" +
                                   def->source + "'");
        if (dst->type != def->target)
            throw ConformanceError("edge " + std::to_string(i) + " ('" + e.type + "'): target '" +
                                   e.dst + "' has type '" + dst->type + "', expected '" +
                                   def->target + "'");
        check_props(e.props, def->properties, "edge " + std::to_string(i), nullptr);
        out_edges_[e.src].push_back(i);
        in_edges_[e.dst].push_back(i);
    }
}

const GraphNode* PropertyGraph::find_node(std::string_view id) const {
    auto it = node_index_.find(id);
    return it == node_index_.end() ? nullptr : &nodes_[it->second];
}

std::vector<const GraphNode*> PropertyGraph::nodes_of_type(std::string_view type) const {
    std::vector<const GraphNode*> out;
    for (const auto& n : nodes_)
        if (n.type == type) out.push_back(&n);
    std::sort(out.begin(), out.end(),
              [](const GraphNode* a, const GraphNode* b) { return a->id < b->id; });
    return out;
}

const std::vector<std::size_t>& PropertyGraph::edges_from(std::string_view id) const {
    static const std::vector<std::size_t> kEmpty;
    auto it = out_edges_.find(id);
    return it == out_edges_.end() ? kEmpty : it->second;
}

const std::vector<std::size_t>& PropertyGraph::edges_to(std::string_view id) const {
    static const std::vector<std::size_t> kEmpty;
    auto it = in_edges_.find(id);
    return it == in_edges_.end() ? kEmpty : it->second;
}

std::vector<std::string> PropertyGraph::conformance_violations() const {
    std::vector<std::string> violations;
    for (const auto& n : nodes_) {
        const NodeTypeDef* def = schema_.find_node_type(n.type);
        if (!def) {
            violations.push_back("node '" + n.id + "': unknown node type '" + n.type + "'");
            continue;
        }
        check_props(n.props, def->properties, "node '" + n.id + "'", &violations);
    }
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        const auto& e = edges_[i];
        const EdgeTypeDef* def = schema_.find_edge_type(e.type);
        if (!def) {
            violations.push_back("edge " + std::to_string(i) + ": unknown edge type");
            continue;
        }
        const GraphNode* src = find_node(e.src);
        const GraphNode* dst = find_node(e.dst);
        if (!src || src->type != def->source)
            violations.push_back("edge " + std::to_string(i) + ": bad source endpoint");
        if (!dst || dst->type != def->target)
            violations.push_back("edge " + std::to_string(i) + ": bad target endpoint");
        check_props(e.props, def->properties, "edge " + std::to_string(i), &violations);
    }
    return violations;
}

PropertyGraph graph_from_json(const GraphSchema& schema, const json& doc) {
    if (!doc.is_object()) throw ParseError("graph document must be a JSON object");
    std::vector<GraphNode> nodes;
    std::vector<GraphEdge> edges;
    for (const auto& jn : doc.value("nodes", json::array())) {
        GraphNode n;
        n.id = jn.value("id", "");
        n.type = jn.value("type", "");
        if (n.id.empty()) throw ParseError("graph node without id: " + jn.dump());
        if (jn.contains("props"))
            for (const auto& [key, val] : jn.at("props").items())
                n.props.emplace(key, value_from_json(val));
        nodes.push_back(std::move(n));
    }
    for (const auto& je : doc.value("edges", json::array())) {
        GraphEdge e;
        e.src = je.value("src", "");
        e.type = je.value("type", "");
        e.dst = je.value("dst", "");
        if (je.contains("props"))
            for (const auto& [key, val] : je.at("props").items())
                e.props.emplace(key, value_from_json(val));
        edges.push_back(std::move(e));
    }
    return PropertyGraph(schema, std::move(nodes), std::move(edges));
}

PropertyGraph load_graph(const GraphSchema& schema, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open graph file '" + path.string() + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ParseError("malformed graph file '" + path.string() + "': " + e.what());
    }
    return graph_from_json(schema, doc);
}

std::string sample_entity(const PropertyGraph& graph, std::string_view node_type,
                          std::uint64_t seed) {
    auto candidates = graph.nodes_of_type(node_type);
    if (candidates.empty())
        throw EmptyTypeError("no node of type '" + std::string(node_type) + "'");
    Rng rng(seed);
    return candidates[rng.bounded(candidates.size())]->id;
}

std::string latest_date(const PropertyGraph& graph) {
    std::string best;
    for (const auto& n : graph.nodes())
        for (const auto& [key, value] : n.props)
            if (value.is_string() && looks_like_iso_date(value.as_string()) &&
                value.as_string() > best)
                best = value.as_string();
    for (const auto& e : graph.edges())
        for (const auto& [key, value] : e.props)
            if (value.is_string() && looks_like_iso_date(value.as_string()) &&
                value.as_string() > best)
                best = value.as_string();
    return best;
}

}  // namespace mtforge
