#include "mtforge/config.hpp"

#include <fstream>

#include "mtforge/errors.hpp"

#include <nlohmann/json.hpp>

namespace mtforge {

using nlohmann::json;

void RunConfig::validate() const {
    if (forge.rounds_min > forge.rounds_max)
        throw InvariantError("rounds_min must be <= rounds_max");
    if (forge.rounds_min < 1) throw InvariantError("rounds_min must be >= 1");
    if (forge.worker_count < 1) throw InvariantError("worker_count must be >= 1");
    if (forge.retry_budget < 1) throw InvariantError("retry_budget must be >= 1");
    if (quality.tau_sem < 0 || quality.tau_sem > 1)
        throw InvariantError("tau_sem must be in [0,1]");
    if (quality.dedup_threshold < 0 || quality.dedup_threshold > 1)
        throw InvariantError("dedup_threshold must be in [0,1]");
    if (quality.masked_overlap_limit < 0)
        throw InvariantError("masked_overlap_limit must be >= 0");
    if (quality.repair_attempts < 0) throw InvariantError("repair_attempts must be >= 0");
    if (generator != "mock" && generator != "remote")
        throw InvariantError("generator must be 'mock' or 'remote'");
    if (embedder != "fallback" && embedder != "remote")
        throw InvariantError("embedder must be 'fallback' or 'remote'");
}

RunConfig config_from_json(const json& doc) {
    RunConfig cfg;
    if (!doc.is_object()) throw ParseError("config must be a JSON object");
    cfg.schema_path = doc.value("schema", cfg.schema_path);
    cfg.graph_path = doc.value("graph", cfg.graph_path);
    cfg.dataset_path = doc.value("dataset", cfg.dataset_path);
    cfg.predictions_path = doc.value("predictions", cfg.predictions_path);
    cfg.output_path = doc.value("output", cfg.output_path);
    cfg.prompts_dir = doc.value("prompts_dir", cfg.prompts_dir);

    cfg.forge.rounds_min = doc.value("rounds_min", cfg.forge.rounds_min);
    cfg.forge.rounds_max = doc.value("rounds_max", cfg.forge.rounds_max);
    cfg.forge.retry_budget = doc.value("retry_budget", cfg.forge.retry_budget);
    cfg.forge.seed = doc.value("seed", cfg.forge.seed);
    cfg.forge.worker_count = doc.value("worker_count", cfg.forge.worker_count);
    cfg.forge.worker_count = doc.value("workers", cfg.forge.worker_count);

    cfg.quality.tau_sem = doc.value("tau_sem", cfg.quality.tau_sem);
    cfg.quality.dedup_threshold = doc.value("dedup_threshold", cfg.quality.dedup_threshold);
    cfg.quality.masked_overlap_limit =
        doc.value("masked_overlap_limit", cfg.quality.masked_overlap_limit);
    cfg.quality.repair_attempts = doc.value("repair_attempts", cfg.quality.repair_attempts);
    cfg.quality.global_overlap_mode =
        doc.value("global_overlap_mode", cfg.quality.global_overlap_mode);

    cfg.generator = doc.value("generator", cfg.generator);
    cfg.embedder = doc.value("embedder", cfg.embedder);
    cfg.reference_date = doc.value("reference_date", cfg.reference_date);
    if (doc.contains("endpoint")) {
        const auto& je = doc.at("endpoint");
        cfg.endpoint.base_url = je.value("base_url", cfg.endpoint.base_url);
        cfg.endpoint.model = je.value("model", cfg.endpoint.model);
        cfg.endpoint.api_key_env = je.value("api_key_env", cfg.endpoint.api_key_env);
        cfg.endpoint.path = je.value("path", cfg.endpoint.path);
        cfg.endpoint.timeout_sec = je.value("timeout_sec", cfg.endpoint.timeout_sec);
        cfg.endpoint.max_in_flight = je.value("max_in_flight", cfg.endpoint.max_in_flight);
        cfg.endpoint.max_retries = je.value("max_retries", cfg.endpoint.max_retries);
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config '" + path.string() + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ParseError("malformed config '" + path.string() + "': " + e.what());
    }
    return config_from_json(doc);
}

}  // namespace mtforge
