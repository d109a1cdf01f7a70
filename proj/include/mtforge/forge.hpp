#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "mtforge/dialogue.hpp"
#include "mtforge/graph.hpp"
#include "mtforge/quality.hpp"
#include "mtforge/textgen.hpp"

namespace mtforge {

struct ForgeConfig {
    int rounds_min = 5;
    int rounds_max = 8;
    int retry_budget = 3;  // fresh questions per round before abandoning
    std::uint64_t seed = 0;
    int worker_count = 1;
};

// Dialogue-session state maintained by the context manager.
struct SessionState {
    std::vector<Turn> history;
    std::map<std::string, std::string> entity_types;  // node id -> node type
    std::set<std::string> entity_set;
    std::set<std::string> relation_set;
    std::vector<Pattern> pattern_history;
    std::array<double, 6> pattern_weights{};  // indexed by pattern
    int target_rounds = 5;
    std::uint64_t seed = 0;

    double weight(Pattern p) const { return pattern_weights[static_cast<int>(p)]; }
};

struct PatternChoice {
    Pattern pattern = Pattern::P1;
    std::vector<std::string> entities;   // chosen node ids
    std::vector<std::string> relations;  // chosen edge type names
};

// Uniform 1/6 weights, empty history, target rounds drawn from
// [rounds_min, rounds_max] by seed.
SessionState new_session(const GraphSchema& schema, const PropertyGraph& graph,
                         const ForgeConfig& config, std::uint64_t seed);

// Patterns whose applicability predicate holds for the current state.
// Requires non-empty history (the initial turn bypasses patterns).
std::set<Pattern> applicable_patterns(const SessionState& state, const GraphSchema& schema,
                                      const PropertyGraph& graph);

// Argmax-weight selection over the applicable set (ties -> lowest index),
// halving the chosen weight and redistributing the removed mass equally over
// the other five; then weighted entity/relation selection with the
// previous-turn +1/4 boost. Mutates the session's weights and history.
PatternChoice select_pattern(SessionState& state, const GraphSchema& schema,
                             const PropertyGraph& graph);

struct Fulfillment {
    std::string text;
    std::map<std::string, std::string> bindings;  // token -> substituted value
    std::vector<std::string> entity_ids;          // node ids behind entity tokens
};

// Replaces every placeholder token in the text with a concrete value drawn
// from the pattern choice, the graph, or the date/number rules.
// Throws UnboundPlaceholderError naming the token.
Fulfillment fulfill_placeholders(const std::string& question_template, const PatternChoice& choice,
                                 const SessionState& state, const PropertyGraph& graph,
                                 std::uint64_t seed);

// Applies already-computed bindings to another text (the raw question).
std::string apply_bindings(const std::string& text,
                           const std::map<std::string, std::string>& bindings);

struct ForgeRuntime {
    TextGenerator* generator = nullptr;
    const PromptTemplates* templates = nullptr;
    const Embedder* embedder = nullptr;
    QualityConfig quality;
    int retry_budget = 3;
};

// One full Steps-1-3 iteration per round until target_rounds turns exist.
// Throws DialogueAbandonedError after the per-round retry budget.
Dialogue run_dialogue(SessionState& state, const PropertyGraph& graph, const ForgeRuntime& runtime,
                      const std::string& dialogue_id);

struct GenerateResult {
    std::vector<Dialogue> dialogues;
    int abandoned = 0;
};

// Seed-deterministic batch generation over a worker pool; output order and
// content are independent of worker_count.
GenerateResult generate_dataset(const PropertyGraph& graph, const ForgeRuntime& runtime,
                                const ForgeConfig& config, int count);

}  // namespace mtforge
