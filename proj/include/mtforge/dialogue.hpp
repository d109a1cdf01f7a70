#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mtforge/value.hpp"

#include <nlohmann/json.hpp>

namespace mtforge {

// Question expansion patterns (Table-1 families).
enum class Pattern { P1, P2, P3, P4, P5, P6 };

inline constexpr Pattern kAllPatterns[] = {Pattern::P1, Pattern::P2, Pattern::P3,
                                           Pattern::P4, Pattern::P5, Pattern::P6};

std::string pattern_name(Pattern p);                       // "P1".."P6"
std::optional<Pattern> pattern_from_name(std::string_view name);  // nullopt for "Initial"
std::string pattern_description(Pattern p);                // Table-1 style description

struct Turn {
    int round = 0;
    std::string question_raw;       // conversational, references/ellipsis
    std::string question_complete;  // disambiguated, placeholder-free
    std::string gql;
    nlohmann::json answer = nlohmann::json::array();
    std::optional<Pattern> pattern;  // nullopt = initial turn
    std::vector<std::string> entities;
    std::vector<std::string> relations;

    bool operator==(const Turn&) const = default;
};

struct Dialogue {
    std::string id;
    nlohmann::json meta = nlohmann::json::object();
    std::vector<Turn> turns;

    bool operator==(const Dialogue&) const = default;
};

struct DatasetStats {
    std::size_t data_points = 0;
    std::size_t total_gqls = 0;
    double avg_turns = 0;
    double avg_entities = 0;
    double avg_relations = 0;
};

// ResultTable rendered as a JSON value list: single-column rows flatten to
// scalars, multi-column rows stay arrays. Deterministic given the executor's
// row order.
nlohmann::json render_answer(const ResultTable& table);
nlohmann::json value_to_json(const Value& value);

nlohmann::json turn_to_json(const Turn& turn);
Turn turn_from_json(const nlohmann::json& doc);
nlohmann::json dialogue_to_json(const Dialogue& dialogue);
Dialogue dialogue_from_json(const nlohmann::json& doc);

// Structural validation: consecutive rounds from 1, parseable gql,
// placeholder-free complete questions. `forge_bounds` additionally enforces
// the 5..8 round count (generator-produced data only).
void validate_dialogue(const Dialogue& dialogue, bool forge_bounds);

// JSONL, one dialogue per line. read(write(D)) == D.
void write_dataset(const std::vector<Dialogue>& dialogues, const std::filesystem::path& path);
std::vector<Dialogue> read_dataset(const std::filesystem::path& path);

DatasetStats compute_stats(const std::vector<Dialogue>& dialogues);

// Seeded in-place shuffle (split tooling).
void shuffle_dialogues(std::vector<Dialogue>& dialogues, std::uint64_t seed);

// True if any of the nine placeholder tokens occurs in the text.
bool contains_placeholder_token(std::string_view text);

}  // namespace mtforge
