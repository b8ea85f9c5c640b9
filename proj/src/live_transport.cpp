#include "mvlogic/llm_bridge.hpp"

#ifdef MVLOGIC_HAVE_TLS
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

namespace mvl {

namespace {

struct Endpoint {
    std::string base;  // scheme://host[:port]
    std::string path;
};

Endpoint split_url(const std::string& url)
{
    const auto scheme = url.find("://");
    if (scheme == std::string::npos)
        throw Error("endpoint '" + url + "' is not an absolute URL");
    const auto slash = url.find('/', scheme + 3);
    if (slash == std::string::npos)
        return {url, "/"};
    return {url.substr(0, slash), url.substr(slash)};
}

class LiveTransport : public Transport {
public:
    explicit LiveTransport(LiveConfig c) : config_(std::move(c)), endpoint_(split_url(config_.endpoint))
    {
#ifndef MVLOGIC_HAVE_TLS
        if (endpoint_.base.rfind("https://", 0) == 0)
            throw Error("this build has no TLS support; use an http:// endpoint");
#endif
    }

    ChatMessage send(const std::vector<ChatMessage>& messages, const std::vector<ToolSchema>& tools) override
    {
        nlohmann::ordered_json body{{"model", config_.model}};
        body["messages"] = nlohmann::ordered_json::array();
        for (const auto& m : messages)
            body["messages"].push_back(to_json(m));
        if (!tools.empty()) {
            body["functions"] = nlohmann::ordered_json::array();
            for (const auto& t : tools)
                body["functions"].push_back(to_json(t));
            body["function_call"] = "auto";
        }

        httplib::Client client(endpoint_.base);
        client.set_connection_timeout(30);
        client.set_read_timeout(120);
        httplib::Headers headers;
        if (!config_.api_key.empty())
            headers.emplace("Authorization", "Bearer " + config_.api_key);
        auto res = client.Post(endpoint_.path, headers, body.dump(), "application/json");
        if (!res)
            throw TransportError("request to " + config_.endpoint + " failed: " + httplib::to_string(res.error()));
        if (res->status != 200)
            throw TransportError("endpoint answered HTTP " + std::to_string(res->status) + ": " + res->body);
        nlohmann::ordered_json reply;
        try {
            reply = nlohmann::ordered_json::parse(res->body);
        } catch (const nlohmann::ordered_json::exception& e) {
            throw TransportError(std::string("endpoint returned malformed JSON: ") + e.what());
        }
        return message_from_json(reply);
    }

private:
    LiveConfig config_;
    Endpoint endpoint_;
};

} // namespace

std::unique_ptr<Transport> make_live_transport(const LiveConfig& config)
{
    return std::make_unique<LiveTransport>(config);
}

} // namespace mvl
