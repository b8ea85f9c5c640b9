#include "support.hpp"

#include "mvlogic/planner.hpp"

#include <doctest.h>

using namespace mvl;
using mvt::c, mvt::f;

namespace {

PlanningProblem monkey_problem(const mvt::MonkeyState& s)
{
    const auto fl = mvt::monkey_fluents(s);
    return planning_problem(mvt::load_scenario("monkey.mvl"), std::vector<Term>(fl.begin(), fl.end()));
}

} // namespace

TEST_CASE("the monkey gets the banana in four steps")
{
    const auto p = planning_problem(mvt::load_scenario("monkey.mvl"));
    const auto plan = plan_search(p);
    REQUIRE(plan);
    CHECK(render(*plan) == "walk(at_door, at_window)\npush_box(at_window, at_center)\nclimb_box\nget_banana\n");
    CHECK(validate_plan(p, *plan).valid);
}

TEST_CASE("plan lengths agree with exhaustive search from every state")
{
    for (const auto& s : mvt::all_monkey_states()) {
        const auto dist = mvt::monkey_distances(s);
        int best = -1;
        for (const auto& [t, d] : dist)
            if (t.banana && (best < 0 || d < best))
                best = d;
        const auto plan = plan_search(monkey_problem(s));
        CHECK(plan.has_value() == (best >= 0));
        if (plan)
            CHECK(static_cast<int>(plan->size()) == best);
    }
}

TEST_CASE("reachable states match the hand-coded transition system")
{
    CHECK(mvt::all_monkey_states().size() == 36);
    for (const auto& s : mvt::all_monkey_states()) {
        const auto mine = reachable_states(monkey_problem(s));
        std::set<FluentState> theirs;
        for (const auto& [t, d] : mvt::monkey_distances(s))
            theirs.insert(mvt::monkey_fluents(t));
        CHECK(mine == theirs);
    }
}

TEST_CASE("fluents not deleted persist through every action")
{
    const auto p = planning_problem(mvt::load_scenario("monkey.mvl"));
    for (const auto& s : reachable_states(p)) {
        for (const auto& [a, next] : successors(s, p)) {
            const auto& schema = *std::find_if(p.schemas.begin(), p.schemas.end(),
                                               [&](const ActionSchema& x) { return x.name == a.name(); });
            Substitution bind;
            for (std::size_t i = 0; i < schema.params.size(); ++i)
                bind.bind(schema.params[i].var, a.args()[i]);
            const auto full = match_literals(schema.preconditions, s, p.background, bind);
            REQUIRE(full);
            std::set<Term> touched;
            for (const auto& d : schema.deletes)
                touched.insert(full->apply(d));
            for (const auto& x : schema.adds)
                touched.insert(full->apply(x));
            for (const auto& fl : s)
                if (!touched.contains(fl))
                    CHECK(next.contains(fl));
            CHECK(next == apply_action(s, a, p));
        }
    }
}

TEST_CASE("typed parameters range over their sort")
{
    const auto p = planning_problem(mvt::load_scenario("robot.mvl"));
    const auto plan = plan_search(p);
    REQUIRE(plan);
    CHECK(render(*plan) == "move_up(1, 1)\nmove_up(1, 2)\n");
}

TEST_CASE("validation names the failing step and precondition")
{
    const auto p = planning_problem(mvt::load_scenario("monkey.mvl"));
    const Plan bad = {parse_action("walk(at_door, at_window)"), parse_action("get_banana")};
    const auto r = validate_plan(p, bad);
    CHECK_FALSE(r.valid);
    CHECK(r.failing_step == 2);
    CHECK(r.reason.find("at(monkey, at_center)") != std::string::npos);

    const Plan short_plan = {parse_action("walk(at_door, at_window)")};
    const auto g = validate_plan(p, short_plan);
    CHECK_FALSE(g.valid);
    CHECK(g.failing_step == 0);

    try {
        apply_action(p.initial, parse_action("climb_box"), p);
        FAIL("expected a precondition error");
    } catch (const PreconditionError& e) {
        CHECK(e.action() == c("climb_box"));
    }
}

TEST_CASE("an unreachable goal yields no plan")
{
    const auto doc = mvt::load_scenario("monkey.mvl");
    const auto p = planning_problem(doc, std::nullopt, std::vector<Literal>{Literal::pos(f("at", {c("box"), c("roof")}))});
    CHECK_FALSE(plan_search(p));
}

TEST_CASE("traces list the state before and after each step")
{
    const auto p = planning_problem(mvt::load_scenario("monkey.mvl"));
    const auto plan = *plan_search(p);
    const auto t = trace_states(p, plan);
    REQUIRE(t.size() == 5);
    CHECK(t.front() == p.initial);
    CHECK(t.back().contains(c("has_banana")));
    CHECK(check_trace(t, 0, parse_formula("(eventually has_banana)")));
    CHECK_FALSE(check_trace(t, 0, parse_formula("(always on_ground)")));
    CHECK(t[3].contains(c("on_box")));
}

TEST_CASE("the reconstructed story domain rescues the princess")
{
    const auto doc = mvt::load_scenario("story.mvl");
    const auto p = planning_problem(doc, std::nullopt, parse_literals("free(_, 'Princess Marian')"));
    const auto plan = plan_search(p);
    REQUIRE(plan);
    CHECK(plan->size() == 5);
    CHECK(plan->back().name() == "free");
    // Replaying the story's own rescue events is a valid plan as well.
    const Plan told(doc.story.begin() + 4, doc.story.begin() + 9);
    CHECK(validate_plan(p, told).valid);
}
