#include "support.hpp"

#include "mvlogic/cli.hpp"

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace mvl;

namespace {

struct Case {
    const char* name;
    std::vector<std::string> args;  // `@` expands to the scenario directory
};

// Every corpus file appears at least once.
const std::vector<Case> kCases = {
    {"parse_tweety", {"parse", "@tweety.mvl"}},
    {"parse_monkey_wire", {"parse", "--kb", "@monkey.mvl", "--format", "wire"}},
    {"parse_story", {"parse", "@story.mvl"}},
    {"query_tweety", {"query", "--kb", "@tweety.mvl", "--query", "fly(X)"}},
    {"query_noisy", {"query", "--kb", "@monkey_noisy.mvl", "--query", "umbrella_needed"}},
    {"circ_tweety", {"circumscribe", "--kb", "@tweety.mvl", "--minimize", "ab", "--query", "fly(tweety)"}},
    {"circ_penguin", {"circumscribe", "--kb", "@tweety_penguin.mvl", "--minimize", "ab", "--query", "fly(tweety)"}},
    {"circ_penguin_models", {"circumscribe", "--kb", "@tweety_penguin.mvl", "--format", "wire"}},
    {"circ_choice", {"circumscribe", "--kb", "@choice.mvl", "--query", "p"}},
    {"def_property", {"defeasible", "--kb", "@property.mvl"}},
    {"def_property_query", {"defeasible", "--kb", "@property.mvl", "--query", "may_access(john)"}},
    {"def_c32", {"defeasible", "--kb", "@c32.mvl", "--query", "can_take(joe, c32)", "--format", "wire"}},
    {"af_cycle3", {"af", "--semantics", "grounded", "@cycle3.mvl"}},
    {"af_cycle3_stable", {"af", "--semantics", "stable", "@cycle3.mvl"}},
    {"af_cycle3_preferred", {"af", "--semantics", "preferred", "@cycle3.mvl", "--format", "wire"}},
    {"af_chain", {"af", "--semantics", "complete", "@chain.mvl"}},
    {"af_umbrella", {"af", "--semantics", "stable", "--kb", "@umbrella.mvl"}},
    {"abduce_graduation",
     {"abduce", "--kb", "@graduation.mvl", "--abducibles", "take_c32,traineeship", "--observe", "graduation"}},
    {"abduce_garden",
     {"abduce", "--kb", "@garden.mvl", "--abducibles", "windstorm,animal,person", "--observe",
      "uprooted,fence_damaged,footprints"}},
    {"abduce_garden_wire",
     {"abduce", "--kb", "@garden.mvl", "--abducibles", "windstorm,animal,person", "--observe",
      "uprooted,fence_damaged", "--format", "wire"}},
    {"cf_accident",
     {"counterfactual", "--kb", "@accident.mvl", "--mode", "but-for", "--cause", "rear_end", "--effect", "accident"}},
    {"cf_independent",
     {"counterfactual", "--kb", "@accident_independent.mvl", "--mode", "but-for", "--cause", "rear_end", "--effect",
      "accident"}},
    {"cf_exam",
     {"counterfactual", "--kb", "@exam.mvl", "--mode", "would", "--antecedent", "study", "--consequent", "pass",
      "--format", "wire"}},
    {"cf_exam_might",
     {"counterfactual", "--kb", "@exam.mvl", "--mode", "might", "--antecedent", "study", "--consequent",
      "(not pass)"}},
    {"modal_alice",
     {"modal-check", "--kb", "@alice_bob.mvl", "--formula",
      "(implies (bel alice meet_at(loc_x)) (bel bob meet_at(loc_x)))"}},
    {"modal_deontic", {"modal-check", "--kb", "@deontic.mvl", "--formula", "(ob attend)"}},
    {"modal_deontic_world", {"modal-check", "--kb", "@deontic.mvl", "--formula", "(pm pay)", "--world", "w2"}},
    {"modal_monkey",
     {"modal-check", "--kb", "@monkey.mvl", "--formula", "(eventually has_banana)", "--format", "wire"}},
    {"modal_monkey_ground", {"modal-check", "--kb", "@monkey.mvl", "--formula", "(always on_ground)"}},
    {"plan_monkey", {"plan", "--domain", "@monkey.mvl", "--goal", "has_banana"}},
    {"plan_monkey_wire", {"plan", "--domain", "@monkey.mvl", "--format", "wire"}},
    {"plan_monkey_init",
     {"plan", "--domain", "@monkey.mvl", "--init", "at(monkey, at_center), on_ground, at(box, at_center), no_banana"}},
    {"plan_monkey_none", {"plan", "--domain", "@monkey.mvl", "--goal", "at(box, roof)"}},
    {"plan_robot", {"plan", "--domain", "@robot.mvl"}},
    {"plan_story", {"plan", "--domain", "@story.mvl", "--goal", "free(_, 'Princess Marian')"}},
    {"pipeline_noisy", {"pipeline", "--kb", "@monkey_noisy.mvl", "--spec", "@monkey_noisy.pipeline.json"}},
    {"pipeline_graduation",
     {"pipeline", "--kb", "@graduation.mvl", "--spec", "@graduation.pipeline.json", "--format", "wire"}},
    {"pipeline_story", {"pipeline", "--kb", "@story.mvl", "--spec", "@story.pipeline.json", "--format", "wire"}},
    {"narrate_events",
     {"narrate", "--kb", "@story.mvl", "--mode", "events", "--transport", "mock:@story_events.mock.json"}},
    {"narrate_story", {"narrate", "--kb", "@story.mvl", "--transport", "mock:@story_whole.mock.json", "--format", "wire"}},
    {"bridge_monkey",
     {"bridge", "--domain", "@monkey.mvl", "--prompt", "Please get the plan for the monkey", "--transport",
      "mock:@monkey_session.mock.json"}},
    {"bridge_plain",
     {"bridge", "--domain", "@monkey.mvl", "--prompt", "What is Prolog?", "--transport",
      "mock:@plain_answer.mock.json", "--format", "wire"}},
};

std::vector<std::string> expand(const std::vector<std::string>& args)
{
    std::vector<std::string> out;
    for (auto a : args) {
        if (auto at = a.find('@'); at != std::string::npos)
            a.replace(at, 1, std::string(MVLOGIC_SCENARIOS) + "/");
        out.push_back(a);
    }
    return out;
}

struct Run {
    int code;
    std::string out, err;
};

Run run(const std::vector<std::string>& args)
{
    std::ostringstream out, err;
    const int code = run_cli(expand(args), out, err);
    return {code, out.str(), err.str()};
}

std::string golden_path(const std::string& name) { return std::string(MVLOGIC_GOLDEN) + "/" + name + ".txt"; }

} // namespace

TEST_CASE("golden outputs")
{
    const bool update = std::getenv("MVLOGIC_UPDATE_GOLDEN") != nullptr;
    for (const auto& c : kCases) {
        CAPTURE(c.name);
        const auto r = run(c.args);
        CAPTURE(r.err);
        CHECK(r.code == 0);
        CHECK(r.err.empty());
        if (update) {
            std::ofstream(golden_path(c.name), std::ios::binary) << r.out;
            continue;
        }
        std::ifstream in(golden_path(c.name), std::ios::binary);
        REQUIRE(in);
        std::stringstream expected;
        expected << in.rdbuf();
        CHECK(r.out == expected.str());
        CHECK(run(c.args).out == r.out);
    }
}

TEST_CASE("every corpus file has a golden case")
{
    for (const auto& file : mvt::scenario_files()) {
        CAPTURE(file);
        const bool used = std::any_of(kCases.begin(), kCases.end(), [&](const Case& c) {
            return std::find(c.args.begin(), c.args.end(), "@" + file) != c.args.end();
        });
        CHECK(used);
    }
}

TEST_CASE("exit codes")
{
    CHECK(run({"plan", "--domain", "@missing.mvl"}).code == 1);
    CHECK(run({"plan", "--domain", "@missing.mvl"}).err.find("missing.mvl") != std::string::npos);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"plan", "--domain", "@monkey.mvl", "--speed", "3"}).code == 2);
    CHECK(run({"af", "--semantics", "ideal", "@cycle3.mvl"}).code == 2);
    CHECK(run({"plan", "--domain", "@monkey.mvl", "--format", "xml"}).code == 2);
    CHECK(run({"narrate", "--kb", "@story.mvl", "--transport", "carrier-pigeon"}).code == 2);
    CHECK(run({"query", "--kb", "@tweety.mvl"}).code == 2);
    CHECK(run({"--help"}).code == 0);

    const auto bad = run({"query", "--kb", "@tweety.mvl", "--query", "fly(("});
    CHECK(bad.code == 1);
    CHECK(bad.err.find("column") != std::string::npos);
}

TEST_CASE("parse failures report file, line and column")
{
    const auto path = (std::filesystem::temp_directory_path() / "mvlogic_broken.mvl").string();
    std::ofstream(path) << "p(a).\nq(b :- r.\n";
    std::ostringstream out, err;
    CHECK(run_cli({"parse", path}, out, err) == 1);
    CHECK(err.str().find("mvlogic_broken.mvl:2:") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("negative verdicts are successes")
{
    const auto none = run({"plan", "--domain", "@monkey.mvl", "--goal", "at(box, roof)"});
    CHECK(none.code == 0);
    CHECK(none.out == "no plan\n");
    const auto defeated = run({"defeasible", "--kb", "@property.mvl", "--query", "may_access(john)"});
    CHECK(defeated.code == 0);
    CHECK(defeated.out.rfind("may_access(john): defeated (defeated by restrict)", 0) == 0);
}
