#include "mvlogic/llm_bridge.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace mvl {

using Json = nlohmann::ordered_json;

namespace {

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json parse_json(std::string_view text, const std::string& what)
{
    try {
        return Json::parse(text);
    } catch (const Json::exception& e) {
        throw Error("malformed " + what + ": " + e.what());
    }
}

std::string strip(std::string_view s)
{
    constexpr std::string_view ws = " \t\n\r\f\v";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos)
        return "";
    const auto e = s.find_last_not_of(ws);
    return std::string(s.substr(b, e - b + 1));
}

/// json.dumps string literal with ensure_ascii.
std::string py_string(std::string_view s)
{
    std::string out = "\"";
    char buf[16];
    auto u16 = [&](unsigned v) {
        std::snprintf(buf, sizeof buf, "\\u%04x", v);
        out += buf;
    };
    for (std::size_t i = 0; i < s.size();) {
        const auto c = static_cast<unsigned char>(s[i]);
        if (c < 0x80) {
            switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            case '\b': out += "\\b"; break;
            case '\f': out += "\\f"; break;
            default:
                if (c < 0x20)
                    u16(c);
                else
                    out += static_cast<char>(c);
            }
            ++i;
            continue;
        }
        int len = c >= 0xF0 ? 4 : c >= 0xE0 ? 3 : 2;
        unsigned cp = c & (0x3Fu >> (len - 1));
        for (int k = 1; k < len && i + k < s.size(); ++k)
            cp = (cp << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3F);
        i += static_cast<std::size_t>(len);
        if (cp >= 0x10000) {
            cp -= 0x10000;
            u16(0xD800 + (cp >> 10));
            u16(0xDC00 + (cp & 0x3FF));
        } else {
            u16(cp);
        }
    }
    return out + "\"";
}

bool plain_atom(const std::string& s)
{
    if (s.empty() || !(s[0] >= 'a' && s[0] <= 'z'))
        return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_'))
            return false;
    return true;
}

bool digits(const std::string& s)
{
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::string prolog_atom(const std::string& s)
{
    if (plain_atom(s) || digits(s) || s == "[]")
        return s;
    std::string out = "'";
    for (char c : s) {
        if (c == '\'' || c == '\\')
            out += '\\';
        out += c;
    }
    return out + "'";
}

} // namespace

void validate(const ToolSchema& t)
{
    if (t.name.empty())
        throw BridgeError("tool schema without a name");
    std::set<std::string> names;
    for (const auto& p : t.params) {
        if (!names.insert(p.name).second)
            throw BridgeError("tool '" + t.name + "' declares parameter '" + p.name + "' twice");
        if (p.allowed.empty())
            throw BridgeError("parameter '" + p.name + "' of tool '" + t.name + "' has an empty enum");
    }
}

Json to_json(const ToolSchema& t)
{
    Json props = Json::object();
    Json required = Json::array();
    for (const auto& p : t.params) {
        props[p.name] = {{"type", "string"}, {"enum", p.allowed}};
        if (p.required)
            required.push_back(p.name);
    }
    return {{"name", t.name},
            {"description", t.description},
            {"parameters", {{"type", "object"}, {"properties", props}, {"required", required}}}};
}

void validate(const ChatMessage& m)
{
    static const std::set<std::string> roles = {"system", "user", "assistant", "function"};
    if (!roles.contains(m.role))
        throw BridgeError("unknown message role '" + m.role + "'");
    if (m.function_call && m.role != "assistant")
        throw BridgeError("function_call on a " + m.role + " message");
    if (m.role == "function" && !m.name)
        throw BridgeError("function message without a name");
}

Json to_json(const ChatMessage& m)
{
    Json j{{"role", m.role}};
    if (m.function_call) {
        j["content"] = nullptr;
        j["function_call"] = {{"name", m.function_call->name}, {"arguments", m.function_call->arguments}};
    } else {
        j["content"] = m.content;
    }
    if (m.name)
        j["name"] = *m.name;
    return j;
}

ChatMessage message_from_json(const Json& raw)
{
    const Json* j = &raw;
    if (raw.contains("choices")) {
        if (!raw["choices"].is_array() || raw["choices"].empty() || !raw["choices"][0].contains("message"))
            throw TransportError("response has no choices[0].message");
        j = &raw["choices"][0]["message"];
    }
    if (!j->is_object())
        throw TransportError("message is not a JSON object");
    ChatMessage m;
    m.role = j->value("role", "assistant");
    if (j->contains("content") && (*j)["content"].is_string())
        m.content = (*j)["content"].get<std::string>();
    if (j->contains("function_call") && !(*j)["function_call"].is_null()) {
        const Json& fc = (*j)["function_call"];
        if (!fc.contains("name") || !fc["name"].is_string())
            throw TransportError("function_call without a name");
        FunctionCall call{fc["name"].get<std::string>(), "{}"};
        if (fc.contains("arguments"))
            call.arguments = fc["arguments"].is_string() ? fc["arguments"].get<std::string>() : fc["arguments"].dump();
        m.function_call = std::move(call);
    }
    if (j->contains("name") && (*j)["name"].is_string())
        m.name = (*j)["name"].get<std::string>();
    validate(m);
    return m;
}

MockTransport::MockTransport(std::vector<ChatMessage> script) : script_(std::move(script))
{
    for (const auto& m : script_)
        validate(m);
}

MockTransport MockTransport::from_json(std::string_view text)
{
    const Json j = parse_json(text, "mock script");
    if (!j.is_array())
        throw Error("mock script must be a JSON array of replies");
    std::vector<ChatMessage> script;
    for (const auto& r : j)
        script.push_back(message_from_json(r));
    return MockTransport(std::move(script));
}

MockTransport MockTransport::from_file(const std::string& path)
{
    return from_json(read_file(path));
}

ChatMessage MockTransport::send(const std::vector<ChatMessage>& messages, const std::vector<ToolSchema>& tools)
{
    requests_.push_back({messages, tools});
    if (next_ >= script_.size())
        throw TransportError("mock transport exhausted after " + std::to_string(script_.size()) + " replies");
    return script_[next_++];
}

LiveConfig load_live_config(const std::string& path)
{
    const Json j = parse_json(read_file(path), "transport config");
    LiveConfig c;
    if (!j.contains("endpoint") || !j["endpoint"].is_string() || !j.contains("model") || !j["model"].is_string())
        throw Error("transport config needs string fields \"endpoint\" and \"model\"");
    c.endpoint = j["endpoint"].get<std::string>();
    c.model = j["model"].get<std::string>();
    if (const char* key = std::getenv(kApiKeyVariable))
        c.api_key = key;
    return c;
}

void BridgeSession::add_tool(ToolSchema schema, ToolHandler handler)
{
    validate(schema);
    for (const auto& [s, h] : tools)
        if (s.name == schema.name)
            throw BridgeError("tool '" + schema.name + "' registered twice");
    tools.emplace_back(std::move(schema), std::move(handler));
}

namespace {

Json checked_arguments(const ToolSchema& schema, const std::string& text)
{
    Json args;
    try {
        args = Json::parse(text);
    } catch (const Json::exception&) {
        throw BridgeError("arguments of " + schema.name + " are not valid JSON");
    }
    if (!args.is_object())
        throw BridgeError("arguments of " + schema.name + " must be a JSON object");
    for (const auto& [k, v] : args.items()) {
        auto it = std::find_if(schema.params.begin(), schema.params.end(),
                               [&](const ToolParam& p) { return p.name == k; });
        if (it == schema.params.end())
            throw BridgeError("unknown argument '" + k + "' for " + schema.name);
        if (!v.is_string() ||
            std::find(it->allowed.begin(), it->allowed.end(), v.get<std::string>()) == it->allowed.end())
            throw BridgeError("argument '" + k + "' of " + schema.name + " has value " + v.dump() +
                              " outside its enum");
    }
    for (const auto& p : schema.params)
        if (p.required && !args.contains(p.name))
            throw BridgeError("missing required argument '" + p.name + "' for " + schema.name);
    return args;
}

} // namespace

std::string run_function_loop(BridgeSession& session, const std::string& prompt)
{
    std::vector<ToolSchema> schemas;
    for (const auto& [s, h] : session.tools)
        schemas.push_back(s);

    const ChatMessage ask = ChatMessage::user(prompt);
    const ChatMessage reply = session.transport->send({ask}, schemas);
    validate(reply);
    session.history.push_back(ask);
    session.history.push_back(reply);
    if (!reply.function_call)
        return strip(reply.content);

    const auto& call = *reply.function_call;
    auto it = std::find_if(session.tools.begin(), session.tools.end(),
                           [&](const auto& t) { return t.first.name == call.name; });
    if (it == session.tools.end())
        throw BridgeError("model called unknown function '" + call.name + "'");
    const std::string result = it->second(checked_arguments(it->first, call.arguments));

    const ChatMessage answer = ChatMessage::function(call.name, result);
    const ChatMessage final_reply = session.transport->send({ask, reply, answer}, {});
    validate(final_reply);
    session.history.push_back(answer);
    session.history.push_back(final_reply);
    return strip(final_reply.content);
}

std::string serialize_plan(const Plan& plan)
{
    std::string out = "[{\"PLAN\": [";
    for (std::size_t i = 0; i < plan.size(); ++i) {
        if (i)
            out += ", ";
        out += "{\"args\": [";
        const auto& args = plan[i].args();
        for (std::size_t k = 0; k < args.size(); ++k) {
            if (k)
                out += ", ";
            out += py_string(args[k].is_constant() ? args[k].name() : render(args[k]));
        }
        out += "], \"functor\": " + py_string(plan[i].name()) + "}";
    }
    return out + "]}]";
}

ToolSchema monkey_plan_tool()
{
    const std::vector<std::string> locs = {"at_center", "at_window", "at_door"};
    return ToolSchema{"get_monkey_plan",
                      "Gets the sequence of actions that lead the monkey to get the banana starting from a given "
                      "state",
                      {{"monkey_start_ground_location", locs, true},
                       {"monkey_start_height_location", {"on_ground", "on_box"}, true},
                       {"box_start_location", locs, true},
                       {"monkey_has_banana", {"has_banana", "no_banana"}, true}}};
}

ToolHandler monkey_plan_handler(const Document& domain)
{
    return [domain](const Json& args) {
        auto c = [](const std::string& s) { return Term::constant(s); };
        const std::vector<Term> init = {
            Term::compound("at", {c("monkey"), c(args.at("monkey_start_ground_location").get<std::string>())}),
            c(args.at("monkey_start_height_location").get<std::string>()),
            Term::compound("at", {c("box"), c(args.at("box_start_location").get<std::string>())}),
            c(args.at("monkey_has_banana").get<std::string>()),
        };
        const auto problem = planning_problem(domain, init, std::vector<Literal>{Literal::pos(c("has_banana"))});
        const auto plan = plan_search(problem);
        return plan ? serialize_plan(*plan) : std::string("false");
    };
}

std::vector<Term> prefix_story(const std::vector<Term>& events, const std::vector<EntityDecl>& decls)
{
    if (decls.empty())
        throw Error("story prefixing needs entity declarations");
    std::vector<Term> out;
    for (const auto& ev : events) {
        std::vector<Term> args;
        for (const auto& a : ev.args())
            for (const auto& d : decls)
                if (std::find(d.instances.begin(), d.instances.end(), a) != d.instances.end()) {
                    args.push_back(Term::compound(":", {Term::constant(d.role), a}));
                    break;
                }
        out.push_back(args.empty() ? Term::constant(ev.name()) : Term::compound(ev.name(), std::move(args)));
    }
    return out;
}

std::string render_prolog(const Term& t)
{
    if (t.is_variable())
        return t.is_anonymous() ? "_" : t.name();
    if (t.is_constant())
        return prolog_atom(t.name());
    if (t.name() == ":" && t.arity() == 2)
        return render_prolog(t.args()[0]) + ":" + render_prolog(t.args()[1]);
    std::string out = prolog_atom(t.name()) + "(";
    for (std::size_t i = 0; i < t.arity(); ++i)
        out += (i ? "," : "") + render_prolog(t.args()[i]);
    return out + ")";
}

std::string render_prolog(const std::vector<Term>& list)
{
    std::string out = "[";
    for (std::size_t i = 0; i < list.size(); ++i)
        out += (i ? "," : "") + render_prolog(list[i]);
    return out + "]";
}

std::string narration_prompt(const std::vector<Term>& events, const std::vector<EntityDecl>& decls,
                             NarrationMode mode)
{
    std::string p(mode == NarrationMode::whole_story ? kStoryPrompt : kEventsPrompt);
    if (events.empty())
        return p;
    return p + render_prolog(prefix_story(events, decls));
}

std::vector<std::string> narrate(const std::vector<Term>& events, const std::vector<EntityDecl>& decls,
                                 NarrationMode mode, Transport& transport)
{
    const auto reply = transport.send(
        {ChatMessage::system(std::string(kSystemPrompt)), ChatMessage::user(narration_prompt(events, decls, mode))},
        {});
    return split_paragraphs(strip(reply.content));
}

std::vector<std::string> split_paragraphs(std::string_view reply)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    auto flush = [&](std::size_t end) {
        auto piece = strip(reply.substr(start, end - start));
        if (!piece.empty())
            out.push_back(std::move(piece));
    };
    for (std::size_t i = 0; i < reply.size(); ++i) {
        if (reply[i] != '\n' && reply[i] != '\r')
            continue;
        flush(i);
        if (reply[i] == '\r' && i + 1 < reply.size() && reply[i + 1] == '\n')
            ++i;
        start = i + 1;
    }
    flush(reply.size());
    return out;
}

} // namespace mvl
