#include "mtforge/textgen.hpp"

#include <algorithm>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "mtforge/errors.hpp"
#include "mtforge/gql/analysis.hpp"
#include "mtforge/gql/parser.hpp"
#include "mtforge/gql/printer.hpp"
#include "mtforge/rng.hpp"
#include "mtforge/text.hpp"

namespace mtforge {

namespace {

constexpr const char* kEmptyHistory = "(empty)";

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open prompt template '" + path.string() + "'");
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

}  // namespace

PromptTemplates PromptTemplates::load(const std::filesystem::path& dir) {
    PromptTemplates t;
    t.question = read_file(dir / "question.txt");
    t.gql = read_file(dir / "gql.txt");
    t.reverse = read_file(dir / "reverse.txt");
    t.repair = read_file(dir / "repair.txt");
    return t;
}

std::string render_schema_text(const GraphSchema& schema) {
    std::string out = "Node types:\n";
    for (const auto& t : schema.node_types) {
        out += "- " + t.name + "(";
        for (std::size_t i = 0; i < t.properties.size(); ++i) {
            if (i) out += ", ";
            out += t.properties[i].name + ": " + value_kind_name(t.properties[i].kind);
        }
        out += ")";
        if (t.placeholder)
            out += " [placeholder " + t.placeholder->token + " on " +
                   t.placeholder->bound_property + "]";
        out += "\n";
    }
    out += "Edge types:\n";
    for (const auto& e : schema.edge_types) {
        out += "- " + e.name + ": " + e.source + " -> " + e.target;
        if (!e.properties.empty()) {
            out += " (";
            for (std::size_t i = 0; i < e.properties.size(); ++i) {
                if (i) out += ", ";
                out += e.properties[i].name + ": " + value_kind_name(e.properties[i].kind);
            }
            out += ")";
        }
        out += "\n";
    }
    return out;
}

std::string render_history_text(const std::vector<Turn>& history) {
    if (history.empty()) return kEmptyHistory;
    std::string out;
    for (const auto& turn : history) {
        out += "Round " + std::to_string(turn.round) + ":\n";
        out += "Question: " + turn.question_raw + "\n";
        out += "Complete Question: " + turn.question_complete + "\n";
        out += "GQL: " + turn.gql + "\n";
        out += "Answer: " + turn.answer.dump() + "\n";
        std::string ents;
        for (std::size_t i = 0; i < turn.entities.size(); ++i)
            ents += (i ? ", " : "") + turn.entities[i];
        out += "Entities: " + ents + "\n";
        std::string rels;
        for (std::size_t i = 0; i < turn.relations.size(); ++i)
            rels += (i ? ", " : "") + turn.relations[i];
        out += "Relations: " + rels + "\n";
    }
    return out;
}

namespace {

void fill_slot(std::string& text, std::map<std::string, std::string>& slots,
               const std::string& name, const std::string& value) {
    slots[name] = value;
    text = replace_all(std::move(text), "{" + name + "}", value);
}

}  // namespace

Prompt build_prompt(const PromptTemplates& templates, PromptKind kind,
                    const PromptInputs& inputs) {
    Prompt prompt;
    prompt.kind = kind;
    switch (kind) {
        case PromptKind::Question: {
            if (!inputs.schema) throw MissingSlotError("schema");
            if (!inputs.history) throw MissingSlotError("history");
            std::string text = templates.question;
            fill_slot(text, prompt.slots, "SCHEMA", render_schema_text(*inputs.schema));
            fill_slot(text, prompt.slots, "DIALOGUE_HISTORY", render_history_text(*inputs.history));
            std::string pattern_text = inputs.pattern
                                           ? pattern_description(*inputs.pattern)
                                           : "(none - create an opening question)";
            if (inputs.focus) pattern_text += "\nFocus: " + *inputs.focus;
            fill_slot(text, prompt.slots, "QUESTION_EXPANDING_PATTERN", pattern_text);
            prompt.rendered_text = std::move(text);
            break;
        }
        case PromptKind::Gql: {
            if (!inputs.schema) throw MissingSlotError("schema");
            if (!inputs.question) throw MissingSlotError("question");
            std::string text = templates.gql;
            fill_slot(text, prompt.slots, "SCHEMA", render_schema_text(*inputs.schema));
            fill_slot(text, prompt.slots, "QUESTION", *inputs.question);
            prompt.rendered_text = std::move(text);
            break;
        }
        case PromptKind::Reverse: {
            if (!inputs.schema) throw MissingSlotError("schema");
            if (!inputs.gql) throw MissingSlotError("gql");
            std::string text = templates.reverse;
            fill_slot(text, prompt.slots, "SCHEMA", render_schema_text(*inputs.schema));
            fill_slot(text, prompt.slots, "GQL", *inputs.gql);
            prompt.rendered_text = std::move(text);
            break;
        }
        case PromptKind::Repair: {
            if (!inputs.question) throw MissingSlotError("question");
            if (!inputs.gql) throw MissingSlotError("gql");
            if (!inputs.error) throw MissingSlotError("error");
            std::string text = templates.repair;
            fill_slot(text, prompt.slots, "QUESTION", *inputs.question);
            fill_slot(text, prompt.slots, "GQL", *inputs.gql);
            fill_slot(text, prompt.slots, "ERROR", *inputs.error);
            prompt.rendered_text = std::move(text);
            break;
        }
    }
    return prompt;
}

std::string render_question_sections(const std::string& raw, const std::string& complete) {
    return "Question:\n" + raw + "\nComplete Question:\n" + complete + "\n";
}

void parse_question_sections(const std::string& body, std::string& raw, std::string& complete) {
    std::vector<std::string> lines;
    std::istringstream in(body);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    std::ptrdiff_t q_at = -1, c_at = -1;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (trim(lines[i]) == "Question:" && q_at < 0) q_at = static_cast<std::ptrdiff_t>(i);
        if (trim(lines[i]) == "Complete Question:") c_at = static_cast<std::ptrdiff_t>(i);
    }
    if (q_at < 0) throw MalformedResponseError("response is missing the \"Question:\" section");
    if (c_at < 0 || c_at < q_at)
        throw MalformedResponseError("response is missing the \"Complete Question:\" section");
    std::string raw_text, complete_text;
    for (std::ptrdiff_t i = q_at + 1; i < c_at; ++i) {
        if (!raw_text.empty()) raw_text += "\n";
        raw_text += lines[i];
    }
    for (std::size_t i = static_cast<std::size_t>(c_at) + 1; i < lines.size(); ++i) {
        if (!complete_text.empty()) complete_text += "\n";
        complete_text += lines[i];
    }
    raw = trim(raw_text);
    complete = trim(complete_text);
    if (raw.empty()) throw MalformedResponseError("empty \"Question:\" section");
    if (complete.empty()) throw MalformedResponseError("empty \"Complete Question:\" section");
}

// ---------------------------------------------------------------------------
// MockGenerator
// ---------------------------------------------------------------------------

namespace {

std::map<std::string, std::string> parse_focus(const std::string& pattern_slot) {
    std::map<std::string, std::string> out;
    std::size_t at = pattern_slot.find("Focus: ");
    if (at == std::string::npos) return out;
    std::string line = pattern_slot.substr(at + 7);
    if (auto nl = line.find('\n'); nl != std::string::npos) line = line.substr(0, nl);
    std::size_t pos = 0;
    while (pos < line.size()) {
        std::size_t end = line.find("; ", pos);
        std::string item =
            end == std::string::npos ? line.substr(pos) : line.substr(pos, end - pos);
        if (auto eq = item.find('='); eq != std::string::npos)
            out[item.substr(0, eq)] = item.substr(eq + 1);
        pos = end == std::string::npos ? line.size() : end + 2;
    }
    return out;
}

std::optional<Pattern> parse_pattern_tag(const std::string& pattern_slot) {
    for (Pattern p : kAllPatterns)
        if (pattern_slot.rfind(pattern_name(p) + ":", 0) == 0) return p;
    return std::nullopt;
}

// Property names referenced anywhere in the history's GQL lines.
std::set<std::string> asked_properties(const std::string& history_slot) {
    std::set<std::string> out;
    static const std::regex gql_line("GQL: ([^\n]*)");
    static const std::regex prop_ref("\\.([A-Za-z_][A-Za-z0-9_]*)|\\{\\s*([A-Za-z_][A-Za-z0-9_]*)\\s*:");
    for (auto it = std::sregex_iterator(history_slot.begin(), history_slot.end(), gql_line);
         it != std::sregex_iterator(); ++it) {
        std::string line = (*it)[1];
        for (auto pit = std::sregex_iterator(line.begin(), line.end(), prop_ref);
             pit != std::sregex_iterator(); ++pit) {
            if ((*pit)[1].matched) out.insert((*pit)[1]);
            if ((*pit)[2].matched) out.insert((*pit)[2]);
        }
    }
    return out;
}

std::vector<std::string> complete_question_lines(const std::string& history_slot) {
    std::vector<std::string> out;
    static const std::regex cq_line("Complete Question: ([^\n]*)");
    for (auto it = std::sregex_iterator(history_slot.begin(), history_slot.end(), cq_line);
         it != std::sregex_iterator(); ++it)
        out.push_back((*it)[1]);
    return out;
}

// Date-keyed neighbor: edge from `type` to a node type holding a date-kind
// property. Returns (edge def, neighbor def, date property name).
struct DateNeighbor {
    const EdgeTypeDef* edge = nullptr;
    const NodeTypeDef* neighbor = nullptr;
    std::string date_property;
};

std::optional<DateNeighbor> date_neighbor_of(const GraphSchema& schema, const std::string& type) {
    for (const auto& e : schema.edge_types) {
        if (e.source != type) continue;
        const NodeTypeDef* target = schema.find_node_type(e.target);
        if (!target) continue;
        for (const auto& p : target->properties)
            if (p.kind == ValueKind::Date) return DateNeighbor{&e, target, p.name};
    }
    return std::nullopt;
}

std::vector<std::string> numeric_properties(const NodeTypeDef& def) {
    std::vector<std::string> out;
    for (const auto& p : def.properties)
        if (p.kind == ValueKind::Number) out.push_back(p.name);
    return out;
}

// Identifier property: the placeholder-bound one, else the first declared.
std::string identity_property(const NodeTypeDef& def) {
    if (def.placeholder) return def.placeholder->bound_property;
    return def.properties.empty() ? std::string("id") : def.properties.front().name;
}

std::string spaced(const std::string& prop) { return unfold_identifier(prop); }

}  // namespace

MockGenerator::MockGenerator(GraphSchema schema) : schema_(std::move(schema)) {}

MockGenerator::MockGenerator(GraphSchema schema, Options options)
    : schema_(std::move(schema)), options_(options) {}

GeneratorOutput MockGenerator::generate(const Prompt& prompt, std::uint64_t seed) {
    GeneratorOutput out;
    switch (prompt.kind) {
        case PromptKind::Question: {
            out = generate_question(prompt, seed);
            out.text = render_question_sections(out.question_raw, out.question_complete);
            return out;
        }
        case PromptKind::Gql: {
            out.text = generate_gql(prompt, seed);
            return out;
        }
        case PromptKind::Reverse: {
            out.text = generate_reverse(prompt);
            return out;
        }
        case PromptKind::Repair: {
            out.text = generate_repair(prompt);
            return out;
        }
    }
    return out;
}

GeneratorOutput MockGenerator::generate_question(const Prompt& prompt, std::uint64_t seed) const {
    GeneratorOutput out;
    Rng rng(mix_seed(seed, fnv1a64("question")));
    const std::string& history = prompt.slots.at("DIALOGUE_HISTORY");
    const std::string& pattern_slot = prompt.slots.at("QUESTION_EXPANDING_PATTERN");

    if (trim(history) == kEmptyHistory) {
        // Opening question over a schema-sampled (node type, property) pair.
        // Anchored on name-like placeholders so the fulfilled entity is a
        // trackable node.
        std::vector<std::pair<const NodeTypeDef*, std::string>> candidates;
        for (const auto& t : schema_.node_types) {
            if (!t.placeholder) continue;
            const PropertyDef* bound = t.find_property(t.placeholder->bound_property);
            if (!bound || bound->kind != ValueKind::String) continue;
            for (const auto& p : t.properties)
                if (p.name != t.placeholder->bound_property) candidates.emplace_back(&t, p.name);
        }
        if (candidates.empty())
            throw UnrenderableError("schema has no placeholder-carrying node type to open with");
        const auto& [type, prop] = candidates[rng.bounded(candidates.size())];
        const PropertyDef* prop_def = type->find_property(prop);
        bool numeric = prop_def && prop_def->kind == ValueKind::Number;
        switch (numeric ? rng.bounded(4) : 0) {
            case 1:  // list opener; seeds entities through the answer
                out.question_raw = "Which " + type->name + " have " + spaced(prop) +
                                   " above [m]?";
                out.question_complete = "Which " + type->name + " have " + spaced(prop) +
                                        " greater than [m]?";
                return out;
            case 2:  // superlative opener
                out.question_raw = "Which " + type->name + " tops the " + spaced(prop) + "?";
                out.question_complete =
                    "Which " + type->name + " had the highest " + spaced(prop) + "?";
                return out;
            default:
                out.question_raw =
                    "What's the " + spaced(prop) + " of " + type->placeholder->token + "?";
                out.question_complete =
                    "What is the " + spaced(prop) + " of " + type->placeholder->token + "?";
                return out;
        }
    }

    std::optional<Pattern> pattern = parse_pattern_tag(pattern_slot);
    if (!pattern) throw UnrenderableError("question prompt has no recognizable pattern tag");
    auto focus = parse_focus(pattern_slot);
    std::string type_name = focus.count("type") ? focus.at("type") : "";
    const NodeTypeDef* type = schema_.find_node_type(type_name);
    if (!type) throw UnrenderableError("focus names unknown node type '" + type_name + "'");
    std::string token = type->placeholder ? type->placeholder->token : "[s]";

    switch (*pattern) {
        case Pattern::P1: {
            auto asked = asked_properties(history);
            std::vector<std::string> candidates;
            for (const auto& p : type->properties) {
                if (type->placeholder && p.name == type->placeholder->bound_property) continue;
                if (!asked.count(p.name)) candidates.push_back(p.name);
            }
            if (candidates.empty())
                for (const auto& p : type->properties)
                    if (!type->placeholder || p.name != type->placeholder->bound_property)
                        candidates.push_back(p.name);
            if (candidates.empty())
                throw UnrenderableError("P1: type '" + type_name + "' has no askable property");
            const std::string& prop = candidates[rng.bounded(candidates.size())];
            out.question_raw = "And what's its " + spaced(prop) + "?";
            out.question_complete = "What is the " + spaced(prop) + " of " + token + "?";
            return out;
        }
        case Pattern::P2: {
            auto neighbor = date_neighbor_of(schema_, type_name);
            if (!neighbor) throw UnrenderableError("P2: no date-keyed neighbor for " + type_name);
            std::vector<std::string> props;
            for (const auto& p : neighbor->neighbor->properties)
                if (p.kind != ValueKind::Date) props.push_back(p.name);
            if (props.empty()) props.push_back(neighbor->date_property);
            const std::string& prop = props[rng.bounded(props.size())];
            out.question_raw = "And what about on [d]?";
            out.question_complete =
                "What is the " + spaced(prop) + " of " + token + " on [d]?";
            return out;
        }
        case Pattern::P3: {
            std::string relation = focus.count("relation") ? focus.at("relation") : "";
            const EdgeTypeDef* edge = schema_.find_edge_type(relation);
            if (!edge) throw UnrenderableError("P3: focus names unknown relation '" + relation + "'");
            std::string other = edge->source == type_name ? edge->target : edge->source;
            out.question_raw = "What about its " + spaced(relation) + " links?";
            out.question_complete =
                "Which " + other + " is " + token + " connected to via " + relation + "?";
            return out;
        }
        case Pattern::P4: {
            std::string previous = focus.count("previous") ? focus.at("previous") : "";
            out.question_raw = "How about " + token + "?";
            auto lines = complete_question_lines(history);
            for (auto it = lines.rbegin(); it != lines.rend(); ++it) {
                if (!previous.empty() && it->find(previous) != std::string::npos) {
                    out.question_complete = replace_all(*it, previous, token);
                    return out;
                }
            }
            // no prior question mentions the previous entity: fresh lookup
            std::string prop;
            for (const auto& p : type->properties)
                if (!type->placeholder || p.name != type->placeholder->bound_property) {
                    prop = p.name;
                    break;
                }
            if (prop.empty()) prop = identity_property(*type);
            out.question_complete = "What is the " + spaced(prop) + " of " + token + "?";
            return out;
        }
        case Pattern::P5: {
            auto props = numeric_properties(*type);
            std::string target_type = type_name;
            if (props.empty()) {
                if (auto neighbor = date_neighbor_of(schema_, type_name)) {
                    props = numeric_properties(*neighbor->neighbor);
                    target_type = neighbor->neighbor->name;
                }
            }
            if (props.empty())
                throw UnrenderableError("P5: no numeric property in scope for " + type_name);
            const std::string& prop = props[rng.bounded(props.size())];
            out.question_raw = "And the average " + spaced(prop) + " across all of them?";
            out.question_complete =
                "What is the average " + spaced(prop) + " of all " + target_type + "?";
            return out;
        }
        case Pattern::P6: {
            auto props = numeric_properties(*type);
            if (props.empty())
                throw UnrenderableError("P6: no numeric property on " + type_name);
            const std::string& prop = props[rng.bounded(props.size())];
            out.question_raw = "Which of them have " + spaced(prop) + " above [m]?";
            out.question_complete =
                "Which " + type_name + " have " + spaced(prop) + " greater than [m]?";
            return out;
        }
    }
    throw UnrenderableError("unreachable pattern");
}

// ---------------------------------------------------------------------------
// question -> GQL templates
// ---------------------------------------------------------------------------

namespace {

class GqlBuilder {
public:
    explicit GqlBuilder(const GraphSchema& schema) : schema_(schema) {}

    std::string build(const std::string& question) const {
        std::smatch m;
        static const std::regex dated(
            R"(^What (?:is|was) the (.+?) of (.+) on (\d{4}-\d{2}-\d{2})\?$)");
        static const std::regex average(R"(^What (?:is|was) the average (.+?) of all (.+)\?$)");
        static const std::regex plain(R"(^What (?:is|was) the (.+?) of (.+)\?$)");
        static const std::regex filter(R"(^Which (.+) have (.+) greater than (.+)\?$)");
        static const std::regex relation(R"(^Which (.+?) is (.+) connected to via (.+)\?$)");
        static const std::regex superlative(
            R"(^Which (.+) (\S+) (?:opened at|had|has) the highest (.+?)(?: today)?\?$)");
        static const std::regex superlative_plain(
            R"(^Which (\S+) (?:opened at|had|has) the highest (.+?)(?: today)?\?$)");

        if (std::regex_match(question, m, dated))
            if (auto q = dated_lookup(fold_identifier(m[1].str()), m[2].str(), m[3].str())) return *q;
        if (std::regex_match(question, m, average))
            if (auto q = aggregate_query(fold_identifier(m[1].str()), fold_identifier(m[2].str()))) return *q;
        if (std::regex_match(question, m, filter))
            if (auto q = filter_query(fold_identifier(m[1].str()), fold_identifier(m[2].str()), m[3].str())) return *q;
        if (std::regex_match(question, m, relation))
            if (auto q = relation_query(fold_identifier(m[1].str()), m[2].str(),
                                        fold_identifier(m[3].str())))
                return *q;
        if (std::regex_match(question, m, superlative))
            if (auto q = superlative_query(m[1].str(), fold_identifier(m[2].str()), m[3].str(), question)) return *q;
        if (std::regex_match(question, m, superlative_plain))
            if (auto q = superlative_query("", fold_identifier(m[1].str()), m[2].str(), question)) return *q;
        if (std::regex_match(question, m, plain))
            if (auto q = plain_lookup(fold_identifier(m[1].str()), m[2].str())) return *q;
        return "MATCH (v1) RETURN COUNT(*)";
    }

private:
    std::vector<const NodeTypeDef*> anchor_types(const std::string& entity) const {
        std::vector<const NodeTypeDef*> out;
        bool date_shaped = looks_like_iso_date(entity);
        for (const auto& t : schema_.node_types) {
            if (!t.placeholder) continue;
            const PropertyDef* bound = t.find_property(t.placeholder->bound_property);
            if (!bound) continue;
            bool is_date_bound = bound->kind == ValueKind::Date;
            if (date_shaped == is_date_bound) out.push_back(&t);
        }
        return out;
    }

    std::optional<std::string> dated_lookup(const std::string& prop, const std::string& entity,
                                            const std::string& date) const {
        for (const NodeTypeDef* t : anchor_types(entity)) {
            for (const auto& e : schema_.edge_types) {
                if (e.source != t->name) continue;
                const NodeTypeDef* target = schema_.find_node_type(e.target);
                if (!target || !target->find_property(prop)) continue;
                std::string date_prop;
                for (const auto& p : target->properties)
                    if (p.kind == ValueKind::Date) date_prop = p.name;
                if (date_prop.empty()) continue;
                return "MATCH (v1:" + t->name + " {" + t->placeholder->bound_property + ": '" +
                       entity + "'})-[:" + e.name + "]->(v2:" + target->name + " {" + date_prop +
                       ": '" + date + "'}) RETURN v2." + prop;
            }
        }
        return std::nullopt;
    }

    std::optional<std::string> plain_lookup(const std::string& prop,
                                            const std::string& entity) const {
        auto anchors = anchor_types(entity);
        for (const NodeTypeDef* t : anchors)
            if (t->find_property(prop))
                return "MATCH (v1:" + t->name + " {" + t->placeholder->bound_property + ": '" +
                       entity + "'}) RETURN v1." + prop;
        for (const NodeTypeDef* t : anchors) {
            for (const auto& e : schema_.edge_types) {
                if (e.source != t->name) continue;
                const NodeTypeDef* target = schema_.find_node_type(e.target);
                if (!target || !target->find_property(prop)) continue;
                return "MATCH (v1:" + t->name + " {" + t->placeholder->bound_property + ": '" +
                       entity + "'})-[:" + e.name + "]->(v2:" + target->name + ") RETURN v2." +
                       prop;
            }
        }
        return std::nullopt;
    }

    std::optional<std::string> aggregate_query(const std::string& prop,
                                               const std::string& type) const {
        const NodeTypeDef* t = schema_.find_node_type(type);
        if (!t || !t->find_property(prop)) return std::nullopt;
        return "MATCH (v1:" + type + ") RETURN AVG(v1." + prop + ")";
    }

    std::optional<std::string> filter_query(const std::string& type, const std::string& prop,
                                            const std::string& number) const {
        const NodeTypeDef* t = schema_.find_node_type(type);
        if (!t || !t->find_property(prop)) return std::nullopt;
        return "MATCH (v1:" + type + ") WHERE v1." + prop + " > " + number + " RETURN v1." +
               identity_property(*t);
    }

    std::optional<std::string> relation_query(const std::string& other_type,
                                              const std::string& entity,
                                              const std::string& relation) const {
        const EdgeTypeDef* e = schema_.find_edge_type(relation);
        if (!e) return std::nullopt;
        const NodeTypeDef* other = schema_.find_node_type(other_type);
        if (!other) return std::nullopt;
        std::string anchor_name = e->source == other_type ? e->target : e->source;
        const NodeTypeDef* anchor = schema_.find_node_type(anchor_name);
        if (!anchor || !anchor->placeholder) return std::nullopt;
        std::string ident = identity_property(*other);
        if (e->source == anchor_name)
            return "MATCH (v1:" + anchor_name + " {" + anchor->placeholder->bound_property +
                   ": '" + entity + "'})-[:" + relation + "]->(v2:" + other_type + ") RETURN v2." +
                   ident;
        return "MATCH (v1:" + other_type + ")-[:" + relation + "]->(v2:" + anchor_name + " {" +
               anchor->placeholder->bound_property + ": '" + entity + "'}) RETURN v1." + ident;
    }

    // Property whose words best overlap the question text.
    static std::string best_property(const std::vector<std::string>& candidates,
                                     const std::string& question) {
        std::string lowered = to_lower(question);
        auto words = split_words(lowered);
        std::string best;
        int best_score = -1;
        for (const auto& prop : candidates) {
            int score = 0;
            for (const auto& part : split_words(unfold_identifier(prop))) {
                std::string p = to_lower(part);
                for (const auto& w : words) {
                    std::size_t n = std::min<std::size_t>(4, p.size());
                    if (w == p || (w.size() >= n && p.size() >= n && w.compare(0, n, p, 0, n) == 0)) {
                        ++score;
                        break;
                    }
                }
            }
            if (score > best_score) {
                best_score = score;
                best = prop;
            }
        }
        return best;
    }

    std::optional<std::string> superlative_query(const std::string& category,
                                                 const std::string& type,
                                                 const std::string& prop_words,
                                                 const std::string& question) const {
        const NodeTypeDef* t = schema_.find_node_type(type);
        if (!t) return std::nullopt;
        auto numeric = numeric_properties(*t);
        if (numeric.empty()) return std::nullopt;
        std::string prop = best_property(numeric, question + " " + prop_words);
        std::string ident = identity_property(*t);
        if (!category.empty()) {
            for (const auto& e : schema_.edge_types) {
                if (e.source != type) continue;
                const NodeTypeDef* target = schema_.find_node_type(e.target);
                if (!target || !target->placeholder) continue;
                const PropertyDef* bound =
                    target->find_property(target->placeholder->bound_property);
                if (!bound || bound->kind != ValueKind::String) continue;
                return "MATCH (v1:" + type + ")-[:" + e.name + "]->(v2:" + target->name +
                       ") WHERE v2." + target->placeholder->bound_property + " = '" + category +
                       "' RETURN v1." + ident + " ORDER BY v1." + prop + " DESC LIMIT 1";
            }
        }
        return "MATCH (v1:" + type + ") RETURN v1." + ident + " ORDER BY v1." + prop +
               " DESC LIMIT 1";
    }

    const GraphSchema& schema_;
};

}  // namespace

std::string mock_gql_for_question(const GraphSchema& schema, const std::string& question) {
    return GqlBuilder(schema).build(question);
}

std::string MockGenerator::generate_gql(const Prompt& prompt, std::uint64_t seed) const {
    const std::string& question = prompt.slots.at("QUESTION");
    std::string gql = GqlBuilder(schema_).build(question);
    if (options_.inject_faults) {
        Rng rng(mix_seed(seed, fnv1a64("fault")));
        if (rng.unit() < options_.fault_rate) {
            if (options_.fault_class == FaultClass::Fixable)
                gql = replace_all(gql, "RETURN", "RETRN");
            else
                gql = "GARBLE " + gql;
        }
    }
    return gql;
}

// ---------------------------------------------------------------------------
// GQL -> question (reverse generation)
// ---------------------------------------------------------------------------

std::string MockGenerator::generate_reverse(const Prompt& prompt) const {
    const std::string& gql_text = prompt.slots.at("GQL");
    gql::QueryAst ast;
    try {
        ast = gql::parse(gql_text);
    } catch (const Error&) {
        return "";
    }
    auto prop_of = [](const gql::ExprPtr& e) -> const gql::PropAccess* {
        return e ? std::get_if<gql::PropAccess>(&e->node) : nullptr;
    };
    const auto& paths = ast.match_paths;
    const bool single_path = paths.size() == 1;

    // superlative: ORDER BY ... DESC LIMIT 1
    if (!ast.order_by.empty() && ast.limit && *ast.limit == 1 && ast.order_by[0].descending &&
        single_path) {
        const auto* order_prop = prop_of(ast.order_by[0].expr);
        std::string type =
            paths[0].nodes[0].label ? *paths[0].nodes[0].label : std::string("entity");
        std::string category;
        if (ast.where) {
            if (const auto* cmp = std::get_if<gql::Comparison>(&ast.where->node)) {
                if (const auto* lit = std::get_if<gql::Literal>(&cmp->rhs->node))
                    if (lit->is_string()) category = lit->as_string();
            }
        }
        if (order_prop) {
            std::string head = category.empty() ? "Which " + type : "Which " + category + " " + type;
            return head + " had the highest " + spaced(order_prop->property) + "?";
        }
    }
    // aggregate over a type
    if (ast.return_items.size() == 1 && ast.return_items[0].aggregate == gql::Aggregate::Avg &&
        single_path && paths[0].nodes.size() == 1 && paths[0].nodes[0].label) {
        if (const auto* p = prop_of(ast.return_items[0].expr))
            return "What is the average " + spaced(p->property) + " of all " +
                   *paths[0].nodes[0].label + "?";
    }
    // conditional filter
    if (ast.where && single_path && paths[0].nodes.size() == 1 && paths[0].nodes[0].label) {
        if (const auto* cmp = std::get_if<gql::Comparison>(&ast.where->node)) {
            const auto* p = prop_of(cmp->lhs);
            const auto* lit = cmp->rhs ? std::get_if<gql::Literal>(&cmp->rhs->node) : nullptr;
            if (p && lit && lit->is_number() && cmp->op == gql::CmpOp::Gt)
                return "Which " + *paths[0].nodes[0].label + " have " + spaced(p->property) +
                       " greater than " + gql::print_literal(*lit) + "?";
        }
    }
    if (single_path && !ast.return_items.empty() && ast.return_items[0].expr) {
        const auto* ret = prop_of(ast.return_items[0].expr);
        const auto& nodes = paths[0].nodes;
        // entity anchor: first node's placeholder-bound property literal
        std::string entity;
        if (!nodes.empty() && nodes[0].label) {
            const NodeTypeDef* t = schema_.find_node_type(*nodes[0].label);
            if (t && t->placeholder) {
                auto it = nodes[0].props.find(t->placeholder->bound_property);
                if (it != nodes[0].props.end() && it->second.is_string())
                    entity = it->second.as_string();
            }
        }
        if (ret && nodes.size() == 2 && !entity.empty()) {
            // dated lookup?
            std::string date;
            if (nodes[1].label) {
                const NodeTypeDef* t = schema_.find_node_type(*nodes[1].label);
                if (t) {
                    for (const auto& [prop, lit] : nodes[1].props) {
                        const PropertyDef* def = t->find_property(prop);
                        if (def && def->kind == ValueKind::Date && lit.is_string())
                            date = lit.as_string();
                    }
                }
            }
            if (!date.empty())
                return "What is the " + spaced(ret->property) + " of " + entity + " on " + date +
                       "?";
            if (nodes[1].props.empty() && nodes[1].label && !ast.where &&
                paths[0].edges[0].type) {
                const NodeTypeDef* far = schema_.find_node_type(*nodes[1].label);
                if (far && ret->property == identity_property(*far))
                    return "Which " + *nodes[1].label + " is " + entity + " connected to via " +
                           *paths[0].edges[0].type + "?";
            }
            return "What is the " + spaced(ret->property) + " of " + entity + "?";
        }
        if (ret && nodes.size() == 1 && !entity.empty())
            return "What is the " + spaced(ret->property) + " of " + entity + "?";
    }
    return "What does the query " + gql::print_canonical(ast) + " return?";
}

std::string MockGenerator::generate_repair(const Prompt& prompt) const {
    const std::string& gql_text = prompt.slots.at("GQL");
    const std::string& error = prompt.slots.at("ERROR");
    if (gql_text.find("RETRN") != std::string::npos || error.find("RETRN") != std::string::npos)
        return replace_all(gql_text, "RETRN", "RETURN");
    return gql_text;
}

}  // namespace mtforge
