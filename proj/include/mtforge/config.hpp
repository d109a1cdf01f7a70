#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "mtforge/forge.hpp"
#include "mtforge/quality.hpp"
#include "mtforge/textgen.hpp"

#include <nlohmann/json_fwd.hpp>

namespace mtforge {

struct RunConfig {
    // paths
    std::string schema_path;
    std::string graph_path;
    std::string dataset_path;
    std::string predictions_path;
    std::string output_path;
    std::string prompts_dir = "prompts";

    ForgeConfig forge;
    QualityConfig quality;

    std::string generator = "mock";  // mock | remote
    std::string embedder = "fallback";  // fallback | remote
    EndpointConfig endpoint;
    std::string reference_date;  // DA "today" anchor; empty -> latest graph date

    // Throws InvariantError when bounds are violated
    // (rounds_min <= rounds_max, thresholds in [0,1], workers >= 1).
    void validate() const;
};

RunConfig config_from_json(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace mtforge
