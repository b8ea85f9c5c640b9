#include "support.hpp"

#include "mvlogic/llm_bridge.hpp"

#include <doctest.h>

using namespace mvl;
using mvt::c, mvt::f;
using Json = nlohmann::ordered_json;

namespace {

const std::string kMonkeyArgs =
    R"({"monkey_start_ground_location": "at_door", "monkey_start_height_location": "on_ground", )"
    R"("box_start_location": "at_window", "monkey_has_banana": "no_banana"})";

const std::string kMonkeyWire =
    R"([{"PLAN": [{"args": ["at_door", "at_window"], "functor": "walk"}, )"
    R"({"args": ["at_window", "at_center"], "functor": "push_box"}, )"
    R"({"args": [], "functor": "climb_box"}, {"args": [], "functor": "get_banana"}]}])";

std::vector<Term> story_events() { return mvt::load_scenario("story.mvl").story; }
std::vector<EntityDecl> story_roles() { return mvt::load_scenario("story.mvl").kb.entity_decls; }

} // namespace

TEST_CASE("function loop with one tool call")
{
    auto mock = MockTransport::from_file(mvt::scenario("monkey_session.mock.json"));
    BridgeSession session(mock);
    int calls = 0;
    std::string tool_result;
    const auto handler = monkey_plan_handler(mvt::load_scenario("monkey.mvl"));
    session.add_tool(monkey_plan_tool(), [&](const Json& args) {
        ++calls;
        tool_result = handler(args);
        return tool_result;
    });

    const auto answer = run_function_loop(session, "Please get the plan for the monkey");
    CHECK(calls == 1);
    CHECK(tool_result == kMonkeyWire);
    CHECK(answer.rfind("Here is a sequence of actions", 0) == 0);
    CHECK(answer.back() == '.');
    REQUIRE(session.history.size() == 4);
    CHECK(session.history[0].role == "user");
    CHECK(session.history[1].function_call);
    CHECK(session.history[2] == ChatMessage::function("get_monkey_plan", kMonkeyWire));
    CHECK(mock.remaining() == 0);

    REQUIRE(mock.requests().size() == 2);
    CHECK(mock.requests()[0].tools.size() == 1);
    CHECK(mock.requests()[0].messages.size() == 1);
    CHECK(mock.requests()[1].messages.size() == 3);
    CHECK(mock.requests()[1].tools.empty());
}

TEST_CASE("plain answers skip the tools")
{
    auto mock = MockTransport::from_file(mvt::scenario("plain_answer.mock.json"));
    BridgeSession session(mock);
    bool called = false;
    session.add_tool(monkey_plan_tool(), [&](const Json&) {
        called = true;
        return std::string();
    });
    CHECK(run_function_loop(session, "What is Prolog?") ==
          "Prolog is a logic programming language rooted in first-order logic.");
    CHECK_FALSE(called);
    CHECK(session.history.size() == 2);
}

TEST_CASE("tool calls are checked strictly")
{
    auto run = [](const std::string& name, const std::string& args) {
        MockTransport mock({ChatMessage::call(name, args), ChatMessage::assistant("done")});
        BridgeSession session(mock);
        session.add_tool(monkey_plan_tool(), [](const Json&) { return std::string("ok"); });
        return run_function_loop(session, "go");
    };
    CHECK(run("get_monkey_plan", kMonkeyArgs) == "done");
    CHECK_THROWS_AS(run("get_robot_plan", kMonkeyArgs), BridgeError);
    CHECK_THROWS_AS(run("get_monkey_plan", "{not json"), BridgeError);
    CHECK_THROWS_AS(run("get_monkey_plan", R"({"monkey_start_ground_location": "at_door"})"), BridgeError);
    std::string bad = kMonkeyArgs;
    bad.replace(bad.find("at_window"), 9, "on_roof");
    CHECK_THROWS_AS(run("get_monkey_plan", bad), BridgeError);
    std::string extra = kMonkeyArgs;
    extra.insert(1, R"("speed": "fast", )");
    CHECK_THROWS_AS(run("get_monkey_plan", extra), BridgeError);
}

TEST_CASE("mock transports run dry loudly")
{
    MockTransport mock({ChatMessage::call("get_monkey_plan", kMonkeyArgs)});
    BridgeSession session(mock);
    session.add_tool(monkey_plan_tool(), [](const Json&) { return std::string("x"); });
    CHECK_THROWS_AS(run_function_loop(session, "go"), TransportError);
    CHECK_THROWS_AS(MockTransport::from_json("{}"), Error);
}

TEST_CASE("session and schema invariants")
{
    MockTransport mock({});
    BridgeSession session(mock);
    session.add_tool(monkey_plan_tool(), [](const Json&) { return std::string(); });
    CHECK_THROWS_AS(session.add_tool(monkey_plan_tool(), [](const Json&) { return std::string(); }), BridgeError);
    CHECK_THROWS_AS(validate(ToolSchema{"t", "", {{"x", {}, true}}}), BridgeError);
    CHECK_THROWS_AS(validate(ChatMessage{"user", "", FunctionCall{"f", "{}"}, {}}), BridgeError);
    CHECK_THROWS_AS(validate(ChatMessage{"function", "x", {}, {}}), BridgeError);
    CHECK_THROWS_AS(validate(ChatMessage{"robot", "x", {}, {}}), BridgeError);

    const auto j = to_json(monkey_plan_tool());
    CHECK(j["name"] == "get_monkey_plan");
    CHECK(j["parameters"]["required"].size() == 4);
    CHECK(j["parameters"]["properties"]["box_start_location"]["enum"] ==
          Json::array({"at_center", "at_window", "at_door"}));
}

TEST_CASE("messages round-trip through JSON")
{
    for (const auto& m : {ChatMessage::user("hi"), ChatMessage::call("f", R"({"a": "b"})"),
                          ChatMessage::function("f", "[1]"), ChatMessage::system("s")})
        CHECK(message_from_json(to_json(m)) == m);
    const auto wrapped = Json::parse(R"({"choices": [{"message": {"role": "assistant", "content": "x"}}]})");
    CHECK(message_from_json(wrapped) == ChatMessage::assistant("x"));
}

TEST_CASE("plan serialization")
{
    CHECK(serialize_plan({}) == R"([{"PLAN": []}])");
    CHECK(serialize_plan({f("walk", {c("a"), c("b")})}) ==
          R"([{"PLAN": [{"args": ["a", "b"], "functor": "walk"}]}])");
    CHECK(serialize_plan({f("go", {c("Caf\xc3\xa9")})}) == R"([{"PLAN": [{"args": ["Caf\u00e9"], "functor": "go"}]}])");
    CHECK(serialize_plan({f("walk", {c("a"), c("b")})}) != serialize_plan({f("walk", {c("b"), c("a")})}));
    const auto handler = monkey_plan_handler(mvt::load_scenario("monkey.mvl"));
    CHECK(handler(Json::parse(kMonkeyArgs)) == kMonkeyWire);
}

TEST_CASE("story events get role prefixes")
{
    const auto roles = story_roles();
    CHECK(render_prolog(prefix_story({f("ride", {c("Draco"), c("White Castle")})}, roles)) ==
          "[ride(villain:'Draco',place:'White Castle')]");
    CHECK(render_prolog(prefix_story({f("warn", {c("Walt"), c("Sir Brian"), c("capture")})}, roles)) ==
          "[warn(sentinel:'Walt',hero:'Sir Brian',crime:capture)]");
    CHECK(render_prolog(prefix_story({f("meet", {c("Draco"), c("nobody")})}, roles)) == "[meet(villain:'Draco')]");
    CHECK_THROWS_AS(prefix_story({}, {}), Error);

    // A constant in two roles takes the first declared one.
    const std::vector<EntityDecl> twice = {{"hero", {c("x")}}, {"villain", {c("x")}}};
    CHECK(render_prolog(prefix_story({f("act", {c("x")})}, twice)) == "[act(hero:x)]");
}

TEST_CASE("narration prompts and reply splitting")
{
    const auto events = story_events();
    const auto roles = story_roles();
    const auto p = narration_prompt(events, roles, NarrationMode::per_event);
    CHECK(p.rfind("Please narrate separately each event of the following plot, skipping a line after the "
                  "narrative of each event: [ride(villain:'Draco',place:'White Castle'),",
                  0) == 0);
    CHECK(narration_prompt({}, roles, NarrationMode::whole_story) == "Please narrate the plot:");

    auto mock = MockTransport::from_file(mvt::scenario("story_events.mock.json"));
    const auto parts = narrate(events, roles, NarrationMode::per_event, mock);
    CHECK(parts.size() == 10);
    CHECK(parts[5] == "Sir Brian frees Princess Marian.");
    REQUIRE(mock.requests().size() == 1);
    CHECK(mock.requests()[0].messages[0] == ChatMessage::system("You are a helpful assistant."));
    CHECK(mock.requests()[0].messages[1].content == p);

    auto whole = MockTransport::from_file(mvt::scenario("story_whole.mock.json"));
    CHECK(narrate(events, roles, NarrationMode::whole_story, whole).size() == 3);

    MockTransport one({ChatMessage::assistant("Once upon a time.")});
    CHECK(narrate({}, roles, NarrationMode::whole_story, one) == std::vector<std::string>{"Once upon a time."});
    CHECK(one.requests()[0].messages[1].content == "Please narrate the plot:");

    CHECK(split_paragraphs("A.\r\n\r\nB.") == std::vector<std::string>{"A.", "B."});
    CHECK(split_paragraphs("single line") == std::vector<std::string>{"single line"});
    CHECK(split_paragraphs("x\ny\n") == std::vector<std::string>{"x", "y"});
    CHECK(split_paragraphs("  \n\n ").empty());
}

TEST_CASE("live transport configuration")
{
    CHECK_THROWS_AS(load_live_config(mvt::scenario("missing.json")), Error);
    LiveConfig cfg{"not a url", "m", ""};
    CHECK_THROWS_AS(make_live_transport(cfg), Error);
}
