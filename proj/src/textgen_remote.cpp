#include <atomic>
#include <chrono>
#include <cstdlib>
#include <semaphore>
#include <thread>

#include "mtforge/errors.hpp"
#include "mtforge/textgen.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace mtforge {

using nlohmann::json;

namespace {
std::atomic<std::uint64_t> g_request_count{0};
}

struct RemoteChatGenerator::Impl {
    EndpointConfig config;
    httplib::Client client;
    std::counting_semaphore<> in_flight;

    explicit Impl(EndpointConfig cfg)
        : config(std::move(cfg)),
          client(config.base_url),
          in_flight(std::max(1, config.max_in_flight)) {
        client.set_connection_timeout(config.timeout_sec);
        client.set_read_timeout(config.timeout_sec);
    }
};

RemoteChatGenerator::RemoteChatGenerator(EndpointConfig config)
    : impl_(std::make_unique<Impl>(std::move(config))) {}

RemoteChatGenerator::~RemoteChatGenerator() = default;

std::uint64_t RemoteChatGenerator::total_requests() { return g_request_count.load(); }

GeneratorOutput RemoteChatGenerator::generate(const Prompt& prompt, std::uint64_t seed) {
    (void)seed;  // sampling is the endpoint's concern
    json request = {{"model", impl_->config.model},
                    {"messages", json::array({{{"role", "user"}, {"content", prompt.rendered_text}}})}};
    httplib::Headers headers;
    if (const char* key = std::getenv(impl_->config.api_key_env.c_str()); key && *key)
        headers.emplace("Authorization", std::string("Bearer ") + key);

    impl_->in_flight.acquire();
    struct Release {
        std::counting_semaphore<>& sem;
        ~Release() { sem.release(); }
    } release{impl_->in_flight};

    std::string body = request.dump();
    std::string last_error;
    for (int attempt = 0; attempt <= impl_->config.max_retries; ++attempt) {
        if (attempt > 0) {
            int delay = impl_->config.backoff_base_ms * (1 << (attempt - 1));
            delay = std::min(delay, 2000);
            std::this_thread::sleep_for(std::chrono::milliseconds(delay));
        }
        auto res = impl_->client.Post(impl_->config.path, headers, body, "application/json");
        ++g_request_count;
        if (!res) {
            last_error = "transport failure: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status >= 500) {
            last_error = "server error " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200)
            throw TransportError("endpoint returned status " + std::to_string(res->status));
        json doc;
        try {
            doc = json::parse(res->body);
        } catch (const json::exception& e) {
            throw MalformedResponseError(std::string("response is not JSON: ") + e.what());
        }
        std::string content;
        try {
            content = doc.at("choices").at(0).at("message").at("content").get<std::string>();
        } catch (const json::exception&) {
            throw MalformedResponseError("response lacks choices[0].message.content");
        }
        GeneratorOutput out;
        out.text = content;
        if (prompt.kind == PromptKind::Question)
            parse_question_sections(content, out.question_raw, out.question_complete);
        return out;
    }
    throw TransportError("request failed after " + std::to_string(impl_->config.max_retries + 1) +
                         " attempts: " + last_error);
}

}  // namespace mtforge
