#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "mtforge/dialogue.hpp"
#include "mtforge/graph.hpp"

#include <nlohmann/json.hpp>

namespace mtforge {

// Predicted GQL per (dialogue id, round). Missing predictions score false.
struct PredictionSet {
    std::map<std::pair<std::string, int>, std::string> by_turn;

    static PredictionSet read_jsonl(const std::filesystem::path& path);
    void write_jsonl(const std::filesystem::path& path) const;
};

// Logical-form match: canonical prints of both ASTs are identical.
// Unparseable predictions are false; invalid gold throws GoldParseError.
bool exact_match(const std::string& pred, const std::string& gold);

// Execution match: equal result tables under the deterministic ordering and
// numeric tolerance. Ordered comparison when the gold query has ORDER BY,
// multiset-of-rows otherwise. Prediction failures are false; invalid gold
// throws GoldExecutionError.
bool execution_match(const std::string& pred, const std::string& gold,
                     const PropertyGraph& graph);

struct BucketScore {
    long total = 0;
    long em = 0;
    long ex = 0;
};

struct MetricsReport {
    long total_turns = 0;
    long em_hits = 0;
    long ex_hits = 0;
    long total_dialogues = 0;
    long aem_hits = 0;
    long aex_hits = 0;
    double em = 0, aem = 0, ex = 0, aex = 0;
    std::map<std::string, BucketScore> by_round;    // R1..R4, R5+
    std::map<std::string, BucketScore> by_pattern;  // P1..P6 (+ Initial, reported separately)

    nlohmann::json to_json() const;
    // Aligned plain-text table; breakdown in {"round", "pattern", "none"}.
    std::string to_table(const std::string& breakdown) const;
};

// EM/AEM/EX/AEX with per-round and per-pattern breakdowns. Throws
// AlignmentError for predictions that match no gold (id, round).
MetricsReport compute_metrics(const PredictionSet& preds, const std::vector<Dialogue>& gold,
                              const PropertyGraph& graph);

struct KeywordStats {
    std::map<std::string, long> totals;  // keyword -> occurrences over all GQLs
    long informative_total = 0;          // excludes MATCH and RETURN
    long gql_count = 0;
    double informative_avg = 0;
    std::map<std::string, long> query_type_counts;

    nlohmann::json to_json() const;
};

KeywordStats analyze_dataset(const std::vector<Dialogue>& dialogues);

}  // namespace mtforge
