#include "mtforge/dialogue.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "mtforge/errors.hpp"
#include "mtforge/gql/parser.hpp"
#include "mtforge/graph.hpp"
#include "mtforge/rng.hpp"

namespace mtforge {

using nlohmann::json;

std::string pattern_name(Pattern p) {
    switch (p) {
        case Pattern::P1: return "P1";
        case Pattern::P2: return "P2";
        case Pattern::P3: return "P3";
        case Pattern::P4: return "P4";
        case Pattern::P5: return "P5";
        case Pattern::P6: return "P6";
    }
    return "P1";
}

std::optional<Pattern> pattern_from_name(std::string_view name) {
    for (Pattern p : kAllPatterns)
        if (pattern_name(p) == name) return p;
    if (name == "Initial") return std::nullopt;
    throw ParseError("unknown pattern tag '" + std::string(name) + "'");
}

std::string pattern_description(Pattern p) {
    switch (p) {
        case Pattern::P1:
            return "P1: Attribute Follow-up - ask about another attribute of an entity from the "
                   "previous turns.";
        case Pattern::P2:
            return "P2: Temporal Shift - move the question along the time dimension to query "
                   "dated historical records.";
        case Pattern::P3:
            return "P3: Relation Extension - expand the dialogue by following a relationship "
                   "that has not been traversed yet.";
        case Pattern::P4:
            return "P4: Same-Type Entity - switch to another entity of the same type, enabling "
                   "comparative reasoning between multiple entities.";
        case Pattern::P5:
            return "P5: Aggregation Calculation - ask for an aggregate such as an average or a "
                   "sum over numeric values.";
        case Pattern::P6:
            return "P6: Conditional Filtering - narrow down a previous multi-row result with a "
                   "numeric or string condition.";
    }
    return "";
}

bool contains_placeholder_token(std::string_view text) {
    for (const char* token : kPlaceholderTokens)
        if (text.find(token) != std::string_view::npos) return true;
    return false;
}

json value_to_json(const Value& value) {
    if (value.is_null()) return nullptr;
    if (value.is_bool()) return value.as_bool();
    if (value.is_int()) return value.as_int();
    if (value.is_double()) return std::get<double>(value.v);
    if (value.is_string()) return value.as_string();
    json arr = json::array();
    for (const auto& item : value.as_list()) arr.push_back(value_to_json(item));
    return arr;
}

json render_answer(const ResultTable& table) {
    json out = json::array();
    for (const auto& row : table.rows) {
        if (row.size() == 1) {
            out.push_back(value_to_json(row[0]));
        } else {
            json jrow = json::array();
            for (const auto& cell : row) jrow.push_back(value_to_json(cell));
            out.push_back(std::move(jrow));
        }
    }
    return out;
}

json turn_to_json(const Turn& turn) {
    json doc;
    doc["round"] = turn.round;
    doc["question_raw"] = turn.question_raw;
    doc["question_complete"] = turn.question_complete;
    doc["gql"] = turn.gql;
    doc["answer"] = turn.answer;
    doc["pattern"] = turn.pattern ? pattern_name(*turn.pattern) : "Initial";
    doc["entities"] = turn.entities;
    doc["relations"] = turn.relations;
    return doc;
}

Turn turn_from_json(const json& doc) {
    Turn turn;
    turn.round = doc.at("round").get<int>();
    turn.question_raw = doc.value("question_raw", "");
    turn.question_complete = doc.value("question_complete", "");
    turn.gql = doc.value("gql", "");
    turn.answer = doc.value("answer", json::array());
    turn.pattern = pattern_from_name(doc.value("pattern", "Initial"));
    turn.entities = doc.value("entities", std::vector<std::string>{});
    turn.relations = doc.value("relations", std::vector<std::string>{});
    return turn;
}

json dialogue_to_json(const Dialogue& dialogue) {
    json doc;
    doc["id"] = dialogue.id;
    doc["meta"] = dialogue.meta;
    doc["turns"] = json::array();
    for (const auto& turn : dialogue.turns) doc["turns"].push_back(turn_to_json(turn));
    return doc;
}

Dialogue dialogue_from_json(const json& doc) {
    Dialogue dialogue;
    dialogue.id = doc.at("id").get<std::string>();
    dialogue.meta = doc.value("meta", json::object());
    for (const auto& jt : doc.value("turns", json::array()))
        dialogue.turns.push_back(turn_from_json(jt));
    return dialogue;
}

void validate_dialogue(const Dialogue& dialogue, bool forge_bounds) {
    if (dialogue.id.empty()) throw InvariantError("dialogue without id");
    for (std::size_t i = 0; i < dialogue.turns.size(); ++i) {
        const Turn& turn = dialogue.turns[i];
        if (turn.round != static_cast<int>(i) + 1)
            throw InvariantError("dialogue '" + dialogue.id + "': round numbers must be 1.." +
                                 std::to_string(dialogue.turns.size()) + " consecutive, found " +
                                 std::to_string(turn.round) + " at position " +
                                 std::to_string(i + 1));
        if (contains_placeholder_token(turn.question_complete))
            throw InvariantError("dialogue '" + dialogue.id + "' round " +
                                 std::to_string(turn.round) +
                                 ": complete question still contains a placeholder token");
        try {
            gql::parse(turn.gql);
        } catch (const Error& e) {
            throw InvariantError("dialogue '" + dialogue.id + "' round " +
                                 std::to_string(turn.round) + ": gql does not parse: " + e.what());
        }
    }
    if (forge_bounds &&
        (dialogue.turns.size() < 5 || dialogue.turns.size() > 8))
        throw InvariantError("dialogue '" + dialogue.id + "': turn count " +
                             std::to_string(dialogue.turns.size()) + " outside [5,8]");
}

void write_dataset(const std::vector<Dialogue>& dialogues, const std::filesystem::path& path) {
    for (const auto& d : dialogues) validate_dialogue(d, false);
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    for (const auto& d : dialogues) out << dialogue_to_json(d).dump() << "\n";
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::vector<Dialogue> read_dataset(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open dataset '" + path.string() + "'");
    std::vector<Dialogue> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json doc;
        try {
            doc = json::parse(line);
        } catch (const json::exception& e) {
            throw ParseError("dataset '" + path.string() + "' line " + std::to_string(line_no) +
                             ": " + e.what());
        }
        Dialogue dialogue;
        try {
            dialogue = dialogue_from_json(doc);
        } catch (const json::exception& e) {
            throw ParseError("dataset '" + path.string() + "' line " + std::to_string(line_no) +
                             ": " + e.what());
        }
        validate_dialogue(dialogue, false);
        out.push_back(std::move(dialogue));
    }
    return out;
}

DatasetStats compute_stats(const std::vector<Dialogue>& dialogues) {
    DatasetStats stats;
    stats.data_points = dialogues.size();
    std::size_t total_entities = 0;
    std::size_t total_relations = 0;
    for (const auto& d : dialogues) {
        stats.total_gqls += d.turns.size();
        std::set<std::string> ents, rels;
        for (const auto& t : d.turns) {
            ents.insert(t.entities.begin(), t.entities.end());
            rels.insert(t.relations.begin(), t.relations.end());
        }
        total_entities += ents.size();
        total_relations += rels.size();
    }
    if (stats.data_points > 0) {
        const double n = static_cast<double>(stats.data_points);
        stats.avg_turns = static_cast<double>(stats.total_gqls) / n;
        stats.avg_entities = static_cast<double>(total_entities) / n;
        stats.avg_relations = static_cast<double>(total_relations) / n;
    }
    return stats;
}

void shuffle_dialogues(std::vector<Dialogue>& dialogues, std::uint64_t seed) {
    Rng rng(seed);
    rng.shuffle(dialogues);
}

}  // namespace mtforge
