#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mtforge/dialogue.hpp"
#include "mtforge/graph.hpp"

namespace mtforge {

enum class PromptKind { Question, Gql, Reverse, Repair };

struct Prompt {
    PromptKind kind = PromptKind::Question;
    std::string rendered_text;
    std::map<std::string, std::string> slots;  // filled slot name -> value
};

// Question prompts carry both sections; other kinds carry `text`.
struct GeneratorOutput {
    std::string question_raw;
    std::string question_complete;
    std::string text;
};

class TextGenerator {
public:
    virtual ~TextGenerator() = default;
    virtual GeneratorOutput generate(const Prompt& prompt, std::uint64_t seed) = 0;
};

// Slot-marker templates ({SCHEMA}, {DIALOGUE_HISTORY}, ...), one file per
// prompt kind under <dir>/{question,gql,reverse,repair}.txt.
struct PromptTemplates {
    std::string question;
    std::string gql;
    std::string reverse;
    std::string repair;

    static PromptTemplates load(const std::filesystem::path& dir);
};

struct PromptInputs {
    const GraphSchema* schema = nullptr;
    const std::vector<Turn>* history = nullptr;
    std::optional<Pattern> pattern;
    std::optional<std::string> focus;  // Algorithm-1 selection, appended to the pattern slot
    std::optional<std::string> question;
    std::optional<std::string> gql;
    std::optional<std::string> error;
};

// Deterministic rendering; throws MissingSlotError naming the slot when a
// mandatory input for the kind is absent.
Prompt build_prompt(const PromptTemplates& templates, PromptKind kind, const PromptInputs& inputs);

std::string render_schema_text(const GraphSchema& schema);
std::string render_history_text(const std::vector<Turn>& history);

// Two-section response body with exact-match marker lines.
std::string render_question_sections(const std::string& raw, const std::string& complete);
// Throws MalformedResponseError when a section is missing or empty.
void parse_question_sections(const std::string& body, std::string& raw, std::string& complete);

// Deterministic template-based generator; a pure function of (prompt, seed).
class MockGenerator : public TextGenerator {
public:
    enum class FaultClass { Fixable, Unfixable };

    struct Options {
        bool inject_faults = false;
        double fault_rate = 0.4;
        FaultClass fault_class = FaultClass::Fixable;
    };

    explicit MockGenerator(GraphSchema schema);
    MockGenerator(GraphSchema schema, Options options);

    GeneratorOutput generate(const Prompt& prompt, std::uint64_t seed) override;

private:
    GeneratorOutput generate_question(const Prompt& prompt, std::uint64_t seed) const;
    std::string generate_gql(const Prompt& prompt, std::uint64_t seed) const;
    std::string generate_reverse(const Prompt& prompt) const;
    std::string generate_repair(const Prompt& prompt) const;

    GraphSchema schema_;
    Options options_;
};

// Builds the GQL text a mock would emit for a complete question (exposed for
// the DA baseline's generator-independent tests).
std::string mock_gql_for_question(const GraphSchema& schema, const std::string& question);

struct EndpointConfig {
    std::string base_url = "http://127.0.0.1:8080";
    std::string model = "default";
    std::string api_key_env = "MTFORGE_API_KEY";
    std::string path = "/v1/chat/completions";
    int timeout_sec = 30;
    int max_in_flight = 4;
    int max_retries = 3;
    int backoff_base_ms = 50;
};

// Chat-completion client: request {model, messages:[{role,content}]},
// response {choices:[{message:{content}}]}. Retries transient transport
// failures and 5xx with capped exponential backoff.
class RemoteChatGenerator : public TextGenerator {
public:
    explicit RemoteChatGenerator(EndpointConfig config);
    ~RemoteChatGenerator() override;

    GeneratorOutput generate(const Prompt& prompt, std::uint64_t seed) override;

    // Total HTTP requests issued by any instance (mock-mode tests assert 0).
    static std::uint64_t total_requests();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace mtforge
