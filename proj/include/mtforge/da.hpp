#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mtforge/dialogue.hpp"
#include "mtforge/graph.hpp"
#include "mtforge/quality.hpp"
#include "mtforge/textgen.hpp"

#include <nlohmann/json.hpp>

namespace mtforge {

struct ContextTurn {
    std::string question_raw;
    std::string question_explicit;
    std::string gql;
    nlohmann::json answer = nlohmann::json::array();
    std::vector<std::string> entities;   // entity mentions (masked literals + answers)
    std::vector<std::string> relations;  // edge types in the turn's query
    bool temporal_fragment = false;      // raw question was an elliptical time shift
};

// Incrementally maintained dialogue context for dependency-aware inference.
struct StructuredContext {
    std::vector<ContextTurn> turns;
    std::string reference_date;  // resolves "today"-style anchors

    // Analyze step: derive entities/relations from the turn's parsed query
    // (placeholder-bound literals) and its answer values.
    void record(const std::string& question_raw, const std::string& question_explicit,
                const std::string& gql, const nlohmann::json& answer, const GraphSchema& schema);
};

// Resolves coreference and ellipsis against the structured context.
// Self-contained questions pass through unchanged; unresolvable elliptical
// fragments raise ReformulationError. The generator parameter is reserved
// for LLM-backed reformulation; the rule-based path never calls it.
std::string reformulate(const std::string& question, const StructuredContext& context,
                        TextGenerator* generator = nullptr);

struct SubSchema {
    std::vector<std::string> node_types;
    std::vector<std::string> edge_types;
    bool full_fallback = false;

    nlohmann::json to_json() const;
};

// Closed sub-schema: types named in context turns plus types whose
// names/property names match the explicit question; edge endpoints always
// included; incident edges added when the seed set has none; full schema
// when nothing matches.
SubSchema extract_subschema(const GraphSchema& schema, const StructuredContext& context,
                            const std::string& explicit_question);

// Materializes the sub-schema as a schema object (all properties kept).
GraphSchema subschema_view(const GraphSchema& schema, const SubSchema& sub);

struct DaConfig {
    double tau_sem = 0.8;       // remote-mode alignment threshold
    bool mock_alignment = true;  // result-shape heuristics instead of reverse similarity
};

struct InferOutcome {
    std::string gql;
    std::string explicit_question;
    std::string initial_gql;  // pre-refine candidate
    bool executable = false;
    bool refined = false;  // the single Algorithm-2 refine round ran
    ResultTable result;    // valid when executable
};

// Reformulate -> ground entity mentions -> extract sub-schema -> generate ->
// execute -> alignment check -> at most one refine round.
InferOutcome infer_turn(const std::string& question, const StructuredContext& context,
                        const PropertyGraph& graph, const GraphSchema& schema,
                        TextGenerator& generator, const PromptTemplates& templates,
                        const Embedder& embedder, const DaConfig& config, std::uint64_t seed);

// Completes partial entity mentions against graph node names
// ("Guotai Junan" -> "Guotai Junan Securities" when unambiguous).
std::string ground_entities(const std::string& text, const PropertyGraph& graph);

// Runs the DA baseline over a gold dataset (raw questions only) and emits
// predictions keyed by (id, round). Context per dialogue is self-built from
// the method's own outputs.
struct PredictionRow {
    std::string id;
    int round = 0;
    std::string gql;
};
std::vector<PredictionRow> infer_dataset(const std::vector<Dialogue>& gold,
                                         const PropertyGraph& graph, const GraphSchema& schema,
                                         TextGenerator& generator,
                                         const PromptTemplates& templates,
                                         const Embedder& embedder, const DaConfig& config,
                                         std::uint64_t seed);

}  // namespace mtforge
