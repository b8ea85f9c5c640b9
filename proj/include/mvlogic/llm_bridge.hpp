#pragma once

// Chat-completion function calling and plot narration over a pluggable
// transport.

#include "mvlogic/document.hpp"
#include "mvlogic/planner.hpp"

#include <json.hpp>

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mvl {

class BridgeError : public Error {
public:
    using Error::Error;
};

class TransportError : public Error {
public:
    using Error::Error;
};

struct ToolParam {
    std::string name;
    std::vector<std::string> allowed;
    bool required = true;
};

struct ToolSchema {
    std::string name;
    std::string description;
    std::vector<ToolParam> params;
};

/// Checks nonempty enums and unique parameter names.
void validate(const ToolSchema& t);
/// The `functions` entry of a chat-completions request.
nlohmann::ordered_json to_json(const ToolSchema& t);

struct FunctionCall {
    std::string name;
    /// JSON object text, exactly as the model produced it.
    std::string arguments;
    friend bool operator==(const FunctionCall&, const FunctionCall&) = default;
};

struct ChatMessage {
    std::string role;  // system | user | assistant | function
    std::string content;
    std::optional<FunctionCall> function_call;
    std::optional<std::string> name;

    static ChatMessage system(std::string content) { return {"system", std::move(content), {}, {}}; }
    static ChatMessage user(std::string content) { return {"user", std::move(content), {}, {}}; }
    static ChatMessage assistant(std::string content) { return {"assistant", std::move(content), {}, {}}; }
    static ChatMessage call(std::string fn, std::string args)
    {
        return {"assistant", "", FunctionCall{std::move(fn), std::move(args)}, {}};
    }
    static ChatMessage function(std::string fn, std::string content)
    {
        return {"function", std::move(content), {}, std::move(fn)};
    }

    friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

void validate(const ChatMessage& m);
nlohmann::ordered_json to_json(const ChatMessage& m);
/// Accepts a bare message or a full response (`choices[0].message`).
ChatMessage message_from_json(const nlohmann::ordered_json& j);

class Transport {
public:
    virtual ~Transport() = default;
    virtual ChatMessage send(const std::vector<ChatMessage>& messages, const std::vector<ToolSchema>& tools) = 0;
};

/// Replays scripted replies in order and records every request.
class MockTransport : public Transport {
public:
    struct Request {
        std::vector<ChatMessage> messages;
        std::vector<ToolSchema> tools;
    };

    explicit MockTransport(std::vector<ChatMessage> script);
    /// JSON array of replies.
    static MockTransport from_file(const std::string& path);
    static MockTransport from_json(std::string_view text);

    ChatMessage send(const std::vector<ChatMessage>& messages, const std::vector<ToolSchema>& tools) override;

    const std::vector<Request>& requests() const { return requests_; }
    std::size_t remaining() const { return script_.size() - next_; }

private:
    std::vector<ChatMessage> script_;
    std::size_t next_ = 0;
    std::vector<Request> requests_;
};

struct LiveConfig {
    std::string endpoint;  // e.g. https://host/v1/chat/completions
    std::string model;
    std::string api_key;
};

inline constexpr const char* kApiKeyVariable = "MVLOGIC_API_KEY";

/// Reads `{"endpoint": ..., "model": ...}`; the key comes from
/// MVLOGIC_API_KEY.
LiveConfig load_live_config(const std::string& path);
std::unique_ptr<Transport> make_live_transport(const LiveConfig& config);

/// Receives the parsed, validated call arguments.
using ToolHandler = std::function<std::string(const nlohmann::ordered_json& args)>;

struct BridgeSession {
    explicit BridgeSession(Transport& t) : transport(&t) {}

    void add_tool(ToolSchema schema, ToolHandler handler);

    Transport* transport;
    std::vector<std::pair<ToolSchema, ToolHandler>> tools;
    std::vector<ChatMessage> history;
};

/// One function round: prompt, optional tool dispatch, final answer
/// (whitespace-trimmed).
std::string run_function_loop(BridgeSession& session, const std::string& prompt);

/// `[{"PLAN": [{"args": [...], "functor": "..."}, ...]}]`
std::string serialize_plan(const Plan& plan);

ToolSchema monkey_plan_tool();
/// Plans from the four enum arguments with the given monkey domain and
/// answers with serialize_plan, or `false` when no plan exists.
ToolHandler monkey_plan_handler(const Document& domain);

/// Replaces each argument by `role:argument` for the first declared role
/// containing it; arguments with no role are dropped.
std::vector<Term> prefix_story(const std::vector<Term>& events, const std::vector<EntityDecl>& decls);

/// Prolog term_string rendering: no spaces after commas, quoted atoms
/// where needed, `role:arg` pairs.
std::string render_prolog(const Term& t);
std::string render_prolog(const std::vector<Term>& list);

enum class NarrationMode { whole_story, per_event };

inline constexpr std::string_view kStoryPrompt = "Please narrate the plot:";
inline constexpr std::string_view kEventsPrompt =
    "Please narrate separately each event of the following plot, skipping a line after the narrative of each "
    "event: ";
inline constexpr std::string_view kSystemPrompt = "You are a helpful assistant.";

std::string narration_prompt(const std::vector<Term>& events, const std::vector<EntityDecl>& decls,
                             NarrationMode mode);

std::vector<std::string> narrate(const std::vector<Term>& events, const std::vector<EntityDecl>& decls,
                                 NarrationMode mode, Transport& transport);

/// Splits on line breaks (CRLF, LF or CR), trims each piece and drops
/// empty ones.
std::vector<std::string> split_paragraphs(std::string_view reply);

} // namespace mvl
