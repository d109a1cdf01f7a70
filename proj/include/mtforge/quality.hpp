#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mtforge/dialogue.hpp"
#include "mtforge/graph.hpp"
#include "mtforge/textgen.hpp"
#include "mtforge/value.hpp"

#include <nlohmann/json.hpp>

namespace mtforge {

inline constexpr std::size_t kEmbeddingDim = 384;

class Embedder {
public:
    virtual ~Embedder() = default;
    // 384 components, L2-normalized; identical text -> identical vector.
    virtual std::vector<float> embed(const std::string& text) const = 0;
};

// Hashed character-trigram bag over 384 bins, L2-normalized. Pure function;
// the offline stand-in for the sentence encoder. Empty text -> zero vector.
std::vector<float> fallback_embed(const std::string& text);

class FallbackEmbedder : public Embedder {
public:
    std::vector<float> embed(const std::string& text) const override {
        return fallback_embed(text);
    }
};

// POSTs {model, input:[text]} and reads {data:[{embedding:[...]}]}.
class RemoteEmbedder : public Embedder {
public:
    explicit RemoteEmbedder(EndpointConfig config);
    ~RemoteEmbedder() override;
    std::vector<float> embed(const std::string& text) const override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Cosine of two same-length vectors; 0 when either is the zero vector.
double cosine_similarity(std::span<const float> a, std::span<const float> b);

struct QualityConfig {
    double tau_sem = 0.8;           // reverse-generation acceptance threshold
    double dedup_threshold = 0.6;   // embedding-filter cosine threshold
    int masked_overlap_limit = 3;   // shared masked templates allowed
    int repair_attempts = 3;        // per validation phase
    bool global_overlap_mode = false;  // template frequency cap instead of pairwise
};

struct ValidationOutcome {
    enum class Kind { Accepted, Repaired, RegenerateQuestion };

    Kind kind = Kind::Accepted;
    std::string gql;     // final query (Accepted/Repaired)
    ResultTable result;  // execution result (Accepted/Repaired)
    int syntax_attempts = 0;
    int semantic_attempts = 0;
    std::string reason;  // RegenerateQuestion only

    int attempts() const { return std::max(syntax_attempts, semantic_attempts); }
};

// Syntax validation (parse + execute) with a <=3-attempt repair loop, then
// semantic validation (reverse generation + embedding similarity >= tau_sem)
// with its own <=3-attempt loop. Exhaustion -> RegenerateQuestion.
ValidationOutcome validate_and_optimize(const std::string& question, const std::string& gql,
                                        const PropertyGraph& graph, TextGenerator& generator,
                                        const PromptTemplates& templates, const Embedder& embedder,
                                        const QualityConfig& config, std::uint64_t seed);

struct DiscardReason {
    enum class Kind { MaskedGqlOverlap, EmbeddingSimilarity };
    Kind kind = Kind::MaskedGqlOverlap;
    std::string partner_id;
    int shared_count = 0;  // MaskedGqlOverlap
    double cosine = 0.0;   // EmbeddingSimilarity
};

struct FilterReport {
    std::vector<std::string> kept;
    std::vector<std::pair<std::string, DiscardReason>> discarded;

    nlohmann::json to_json() const;
};

// Masked-template dedup: dialogues sharing more than `masked_overlap_limit`
// identical masked GQL templates with an already-kept dialogue are discarded
// (keep-first). Scan order: stable sort by id.
FilterReport filter_masked_gql(const std::vector<Dialogue>& dialogues, const GraphSchema& schema,
                               const QualityConfig& config = {});

// Embedding dedup over per-dialogue concatenated complete questions;
// cosine strictly above `threshold` discards the later dialogue.
FilterReport filter_embedding(const std::vector<Dialogue>& dialogues, const Embedder& embedder,
                              double threshold = 0.6);

// Masked-template set of one dialogue (sorted, distinct).
std::vector<std::string> masked_templates(const Dialogue& dialogue, const GraphSchema& schema);

// Round-ordered single-space concatenation of complete questions.
std::string dialogue_question_text(const Dialogue& dialogue);

}  // namespace mtforge
