#include <cmath>
#include <cstdlib>

#include "mtforge/errors.hpp"
#include "mtforge/quality.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace mtforge {

using nlohmann::json;

struct RemoteEmbedder::Impl {
    EndpointConfig config;
    mutable httplib::Client client;

    explicit Impl(EndpointConfig cfg) : config(std::move(cfg)), client(config.base_url) {
        client.set_connection_timeout(config.timeout_sec);
        client.set_read_timeout(config.timeout_sec);
    }
};

RemoteEmbedder::RemoteEmbedder(EndpointConfig config)
    : impl_(std::make_unique<Impl>(std::move(config))) {}

RemoteEmbedder::~RemoteEmbedder() = default;

std::vector<float> RemoteEmbedder::embed(const std::string& text) const {
    json request = {{"model", impl_->config.model}, {"input", json::array({text})}};
    httplib::Headers headers;
    if (const char* key = std::getenv(impl_->config.api_key_env.c_str()); key && *key)
        headers.emplace("Authorization", std::string("Bearer ") + key);
    auto res = impl_->client.Post(impl_->config.path, headers, request.dump(), "application/json");
    if (!res) throw TransportError("embedding request failed: " + httplib::to_string(res.error()));
    if (res->status != 200)
        throw TransportError("embedding endpoint returned status " + std::to_string(res->status));
    json doc;
    try {
        doc = json::parse(res->body);
    } catch (const json::exception& e) {
        throw MalformedResponseError(std::string("embedding response is not JSON: ") + e.what());
    }
    std::vector<float> vec;
    try {
        for (const auto& x : doc.at("data").at(0).at("embedding"))
            vec.push_back(x.get<float>());
    } catch (const json::exception&) {
        throw MalformedResponseError("embedding response lacks data[0].embedding");
    }
    if (vec.size() != kEmbeddingDim)
        throw MalformedResponseError("embedding dimension " + std::to_string(vec.size()) +
                                     ", expected " + std::to_string(kEmbeddingDim));
    double norm = 0;
    for (float x : vec) norm += static_cast<double>(x) * x;
    norm = std::sqrt(norm);
    if (norm > 0)
        for (float& x : vec) x = static_cast<float>(x / norm);
    return vec;
}

}  // namespace mtforge
