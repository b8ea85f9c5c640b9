#include "support.hpp"

#include "mvlogic/document.hpp"

#include <doctest.h>

using namespace mvl;

TEST_CASE("every corpus file survives a render and re-parse")
{
    for (const auto& name : mvt::scenario_files()) {
        CAPTURE(name);
        const auto doc = mvt::load_scenario(name);
        const auto text = render(doc);
        const auto again = parse_document(text);
        CHECK(again == doc);
        CHECK(render(again) == text);
    }
}

TEST_CASE("rules, defeasible annotations and constraints parse")
{
    const auto doc = parse_document(R"(
        % comment
        owner(john).
        access: owner(X) ~> may_access(X) [tier=legal, prio=1, rebut=(court_order(X)), qualifier="probably"].
        r: p(X) :- q(X), not s(X), X \= b.
        :- p(a), neg t.
        domain {a, b, john}.
    )");
    REQUIRE(doc.kb.rules.size() == 3);
    const auto* acc = doc.kb.find_rule("access");
    REQUIRE(acc);
    CHECK(acc->kind == RuleKind::defeasible);
    CHECK(acc->tier == Tier::legal);
    CHECK(acc->priority == 1);
    CHECK(doc.kb.annotations.at("access").qualifier == "probably");
    CHECK(doc.kb.constraints.size() == 1);
    CHECK(doc.kb.has_domain_block);
    CHECK(doc.kb.rules[0].label == default_label(1));
}

TEST_CASE("anonymous variables are distinct")
{
    const auto kb = parse_kb("p :- q(_, _).");
    const auto& body = kb.rules[0].body[0].atom;
    CHECK(body.args()[0].is_anonymous());
    CHECK(body.args()[0] != body.args()[1]);
}

TEST_CASE("parse errors carry a location")
{
    try {
        parse_document("p(a).\nq(b :- r.\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() > 0);
    }
    CHECK_THROWS_AS(parse_document("a: p. a: q."), Error);
    CHECK_THROWS_AS(load_document(mvt::scenario("missing.mvl")), Error);
}

TEST_CASE("sections of a planning and modal document")
{
    const auto monkey = mvt::load_scenario("monkey.mvl");
    CHECK(monkey.actions.size() == 4);
    CHECK(monkey.actions[2].params.size() == 2);
    REQUIRE(monkey.init);
    CHECK(monkey.init->size() == 4);

    const auto story = mvt::load_scenario("story.mvl");
    CHECK(story.story.size() == 10);
    CHECK(story.kb.entity_decls.size() == 6);
    CHECK(story.goal_rules.size() == 1);

    const auto exam = mvt::load_scenario("exam.mvl");
    CHECK(exam.worlds.size() == 3);
    CHECK(exam.actual == "w0");
    CHECK(exam.ranks.size() == 2);
}
