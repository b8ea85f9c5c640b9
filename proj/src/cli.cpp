#include "mvlogic/cli.hpp"

#include "mvlogic/abduction.hpp"
#include "mvlogic/argumentation.hpp"
#include "mvlogic/counterfactual.hpp"
#include "mvlogic/defeasible.hpp"
#include "mvlogic/derive.hpp"
#include "mvlogic/document.hpp"
#include "mvlogic/llm_bridge.hpp"
#include "mvlogic/minimize.hpp"
#include "mvlogic/modal.hpp"
#include "mvlogic/orchestrator.hpp"
#include "mvlogic/planner.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <functional>
#include <memory>

namespace mvl {

namespace {

using Json = nlohmann::ordered_json;

class UsageError : public Error {
public:
    using Error::Error;
};

std::vector<std::string> split_names(const std::string& csv)
{
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char c : csv) {
        if (c == '(')
            ++depth;
        if (c == ')')
            --depth;
        if (c == ',' && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else if (c != ' ') {
            cur += c;
        }
    }
    if (!cur.empty())
        out.push_back(cur);
    return out;
}

std::set<std::string> name_set(const std::string& csv)
{
    const auto v = split_names(csv);
    return {v.begin(), v.end()};
}

Document load(const std::string& path)
{
    if (path.empty())
        throw UsageError("an input file is required (--kb)");
    try {
        return load_document(path);
    } catch (const ParseError& e) {
        throw Error(path + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) + ": " + e.message());
    }
}

Literal single_literal(const std::string& text)
{
    const auto lits = parse_literals(text);
    if (lits.size() != 1)
        throw Error("expected a single literal, got '" + text + "'");
    return lits.front();
}

std::unique_ptr<Transport> open_transport(const std::string& spec)
{
    if (spec.rfind("mock:", 0) == 0)
        return std::make_unique<MockTransport>(MockTransport::from_file(spec.substr(5)));
    if (spec.rfind("live:", 0) == 0)
        return make_live_transport(load_live_config(spec.substr(5)));
    throw UsageError("--transport must be mock:<script-file> or live:<config-file>");
}

Json substitution_json(const Substitution& s, const std::set<std::string>& vars)
{
    Json j = Json::object();
    for (const auto& v : vars)
        j[v] = render(s.apply(Term::variable(v)));
    return j;
}

std::string render_answer(const Substitution& s, const std::set<std::string>& vars)
{
    std::string out;
    for (const auto& v : vars)
        out += (out.empty() ? "" : ", ") + v + " = " + render(s.apply(Term::variable(v)));
    return out;
}

Json string_list(const std::set<Term>& atoms)
{
    Json a = Json::array();
    for (const auto& t : atoms)
        a.push_back(render(literal_of_model_atom(t)));
    return a;
}

struct Options {
    std::string kb;
    bool wire = false;
    std::string query;
    std::string minimize, fixed, varied;
    std::string semantics = "grounded";
    std::string abducibles, observe, forbid;
    std::string mode;
    std::string antecedent, consequent;
    std::string formula, world;
    std::size_t position = 0;
    std::string init, goal;
    std::string spec;
    std::string transport;
    std::string prompt;
};

using Handler = std::function<void(const Options&, std::ostream&)>;

void cmd_parse(const Options& o, std::ostream& out)
{
    const auto doc = load(o.kb);
    if (!o.wire) {
        out << render(doc);
        return;
    }
    Json rules = Json::array();
    for (std::size_t i = 0; i < doc.kb.rules.size(); ++i) {
        const auto& r = doc.kb.rules[i];
        auto it = doc.kb.annotations.find(r.label);
        rules.push_back(render_rule(r, i + 1, it == doc.kb.annotations.end() ? nullptr : &it->second));
    }
    Json j{{"rules", rules},
           {"constraints", doc.kb.constraints.size()},
           {"actions", doc.actions.size()},
           {"worlds", doc.worlds.size()},
           {"story", doc.story.size()}};
    out << j.dump() << "\n";
}

void cmd_query(const Options& o, std::ostream& out)
{
    const auto doc = load(o.kb);
    if (o.query.empty())
        throw UsageError("query needs --query");
    const auto q = single_literal(o.query);
    std::set<std::string> vars;
    collect_variables(q, vars);
    std::erase_if(vars, [](const std::string& v) { return v.rfind("_#", 0) == 0; });
    const auto answers = derive(doc.kb, q);
    if (o.wire) {
        Json a = Json::array();
        for (const auto& s : answers)
            a.push_back(substitution_json(s, vars));
        out << Json{{"query", render(q)}, {"holds", !answers.empty()}, {"answers", a}}.dump() << "\n";
        return;
    }
    if (answers.empty()) {
        out << "not derivable\n";
        return;
    }
    if (vars.empty()) {
        out << "holds\n";
        return;
    }
    for (const auto& s : answers)
        out << render_answer(s, vars) << "\n";
}

void cmd_circumscribe(const Options& o, std::ostream& out)
{
    const auto doc = load(o.kb);
    auto minimized = o.minimize.empty() ? std::set<std::string>(doc.minimized.begin(), doc.minimized.end())
                                        : name_set(o.minimize);
    if (minimized.empty())
        throw UsageError("circumscribe needs --minimize or a minimize block");
    std::optional<std::set<std::string>> fixed, varied;
    if (!o.fixed.empty())
        fixed = name_set(o.fixed);
    else if (!doc.fixed.empty())
        fixed = std::set<std::string>(doc.fixed.begin(), doc.fixed.end());
    if (!o.varied.empty())
        varied = name_set(o.varied);
    else if (!doc.varied.empty())
        varied = std::set<std::string>(doc.varied.begin(), doc.varied.end());
    const auto theory = make_theory(doc.kb, minimized, fixed, varied);

    if (!o.query.empty()) {
        const auto q = single_literal(o.query);
        const auto v = circumscribed_entails(theory, q);
        if (o.wire)
            out << Json{{"query", render(q)}, {"verdict", verdict_name(v)}}.dump() << "\n";
        else
            out << verdict_name(v) << "\n";
        return;
    }
    const auto models = minimal_models(theory);
    if (o.wire) {
        Json m = Json::array();
        for (const auto& x : models)
            m.push_back(string_list(x));
        out << Json{{"minimal_models", m}}.dump() << "\n";
        return;
    }
    if (models.empty())
        out << "no models\n";
    for (const auto& x : models)
        out << render(x) << "\n";
}

Json conclusion_json(const LabeledConclusion& c)
{
    Json j{{"literal", render(c.literal)}, {"status", status_name(c.status)}};
    if (c.defeater)
        j["defeater"] = *c.defeater;
    if (!c.qualifier.empty())
        j["qualifier"] = c.qualifier;
    if (c.justification)
        j["justification"] = render(*c.justification);
    return j;
}

std::string conclusion_line(const LabeledConclusion& c)
{
    std::string line = render(c.literal) + ": " + std::string(status_name(c.status));
    if (c.defeater)
        line += " (defeated by " + *c.defeater + ")";
    else if (c.status == Status::presumably_holds && !c.qualifier.empty())
        line += " (" + c.qualifier + ")";
    return line;
}

void cmd_defeasible(const Options& o, std::ostream& out)
{
    const auto doc = load(o.kb);
    if (!o.query.empty()) {
        const auto c = conclude(doc.kb, single_literal(o.query));
        if (o.wire) {
            out << conclusion_json(c).dump() << "\n";
            return;
        }
        out << conclusion_line(c) << "\n";
        if (c.justification)
            out << render(*c.justification);
        return;
    }
    const auto all = conclude_all(doc.kb);
    if (o.wire) {
        Json a = Json::array();
        for (const auto& c : all)
            a.push_back(conclusion_json(c));
        out << a.dump() << "\n";
        return;
    }
    for (const auto& c : all)
        out << conclusion_line(c) << "\n";
}

void cmd_af(const Options& o, std::ostream& out)
{
    const auto sem = semantics_from_name(o.semantics);
    if (!sem)
        throw UsageError("unknown semantics '" + o.semantics + "'");
    const auto af = framework_from_kb(load(o.kb).kb);
    const auto exts = extensions(af, *sem);
    if (o.wire) {
        Json a = Json::array();
        for (const auto& e : exts)
            a.push_back(Json(e));
        out << Json{{"semantics", semantics_name(*sem)}, {"extensions", a}}.dump() << "\n";
        return;
    }
    if (exts.empty())
        out << "none\n";
    for (const auto& e : exts)
        out << render(e) << "\n";
}

void cmd_abduce(const Options& o, std::ostream& out)
{
    if (o.abducibles.empty() || o.observe.empty())
        throw UsageError("abduce needs --abducibles and --observe");
    auto doc = load(o.kb);
    std::set<Term> abducibles;
    for (const auto& t : parse_terms(o.abducibles))
        abducibles.insert(t);
    auto constraints = doc.kb.constraints;
    if (!o.forbid.empty())
        constraints.push_back(parse_literals(o.forbid));
    const auto p = make_abduction(doc.kb, abducibles, parse_literals(o.observe), constraints);
    const auto hs = explanations(p);
    if (o.wire) {
        Json a = Json::array();
        for (const auto& h : hs)
            a.push_back(string_list(h));
        out << Json{{"explanations", a}}.dump() << "\n";
        return;
    }
    if (hs.empty())
        out << "none\n";
    for (const auto& h : hs)
        out << render(h) << "\n";
}

void cmd_counterfactual(const Options& o, std::ostream& out)
{
    const auto model = similarity_model(load(o.kb));
    if (o.antecedent.empty() || o.consequent.empty())
        throw UsageError("counterfactual needs --antecedent and --consequent (cause and effect for but-for)");
    const auto a = parse_formula(o.antecedent);
    const auto b = parse_formula(o.consequent);
    Json j{{"mode", o.mode}};
    if (o.mode == "but-for") {
        const bool r = but_for(model, a, b);
        j["caused"] = r;
        if (!o.wire)
            out << (r ? "caused" : "not caused") << "\n";
    } else if (o.mode == "would" || o.mode == "might") {
        const auto r = o.mode == "would" ? would(model, a, b) : might(model, a, b);
        j["holds"] = r.holds;
        j["vacuous"] = r.vacuous;
        if (!o.wire)
            out << (r.holds ? "true" : "false") << (r.vacuous ? " (vacuous)" : "") << "\n";
    } else {
        throw UsageError("--mode must be would, might or but-for");
    }
    if (o.wire)
        out << j.dump() << "\n";
}

void cmd_modal(const Options& o, std::ostream& out)
{
    if (o.formula.empty())
        throw UsageError("modal-check needs --formula");
    const auto doc = load(o.kb);
    const auto f = parse_formula(o.formula);
    Json j{{"formula", render(f)}};
    if (f.mentions_temporal()) {
        const auto problem = planning_problem(doc, std::nullopt, std::nullopt);
        const auto plan = plan_search(problem);
        if (!plan)
            throw Error("temporal formulas are checked on the plan trace, and the document has no plan");
        const auto trace = trace_states(problem, *plan);
        if (o.position >= trace.size())
            throw UsageError("--position beyond the trace length " + std::to_string(trace.size()));
        const bool v = check_trace(trace, o.position, f);
        j["position"] = o.position;
        j["value"] = v;
        if (!o.wire)
            out << (v ? "true" : "false") << "\n";
    } else {
        const auto model = kripke_model(doc);
        std::vector<std::string> worlds;
        if (!o.world.empty())
            worlds.push_back(o.world);
        else if (doc.actual)
            worlds.push_back(*doc.actual);
        else
            worlds.assign(model.worlds.begin(), model.worlds.end());
        Json vals = Json::object();
        for (const auto& w : worlds) {
            const bool v = check_world(model, w, f);
            vals[w] = v;
            if (!o.wire)
                out << w << ": " << (v ? "true" : "false") << "\n";
        }
        j["worlds"] = vals;
    }
    if (o.wire)
        out << j.dump() << "\n";
}

void cmd_plan(const Options& o, std::ostream& out)
{
    const auto doc = load(o.kb);
    std::optional<std::vector<Term>> init;
    std::optional<std::vector<Literal>> goal;
    if (!o.init.empty())
        init = parse_terms(o.init);
    if (!o.goal.empty())
        goal = parse_literals(o.goal);
    const auto plan = plan_search(planning_problem(doc, init, goal));
    if (o.wire) {
        out << (plan ? serialize_plan(*plan) : std::string("false")) << "\n";
        return;
    }
    if (!plan)
        out << "no plan\n";
    else
        out << render(*plan);
}

int cmd_pipeline(const Options& o, std::ostream& out)
{
    if (o.spec.empty())
        throw UsageError("pipeline needs --spec");
    const auto doc = load(o.kb);
    const auto pipeline = load_pipeline(o.spec);
    std::optional<std::vector<Literal>> query;
    if (!o.query.empty())
        query = parse_literals(o.query);
    const auto result = run_pipeline(doc, pipeline, query);
    out << to_json(result).dump(o.wire ? -1 : 2) << "\n";
    return result.ok ? 0 : 1;
}

void cmd_narrate(const Options& o, std::ostream& out)
{
    const auto doc = load(o.kb);
    NarrationMode mode;
    if (o.mode.empty() || o.mode == "story")
        mode = NarrationMode::whole_story;
    else if (o.mode == "events")
        mode = NarrationMode::per_event;
    else
        throw UsageError("--mode must be story or events");
    auto transport = open_transport(o.transport);
    const auto parts = narrate(doc.story, doc.kb.entity_decls, mode, *transport);
    if (o.wire) {
        out << Json(parts).dump() << "\n";
        return;
    }
    for (std::size_t i = 0; i < parts.size(); ++i)
        out << (i ? "\n" : "") << parts[i] << "\n";
}

void cmd_bridge(const Options& o, std::ostream& out)
{
    if (o.prompt.empty())
        throw UsageError("bridge needs --prompt");
    const auto doc = load(o.kb);
    auto transport = open_transport(o.transport);
    BridgeSession session(*transport);
    session.add_tool(monkey_plan_tool(), monkey_plan_handler(doc));
    const auto answer = run_function_loop(session, o.prompt);
    if (!o.wire) {
        out << answer << "\n";
        return;
    }
    Json h = Json::array();
    for (const auto& m : session.history)
        h.push_back(to_json(m));
    out << Json{{"answer", answer}, {"history", h}}.dump() << "\n";
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Multi-valued logic toolkit: rules, defaults, arguments, modalities and plans", "mvlogic"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "mvlogic 0.1.0");

    Options o;
    std::string format = "text";
    std::function<int(std::ostream&)> run;

    auto sub = [&](const char* name, const char* help, const char* input_flag, auto body) {
        auto* s = app.add_subcommand(name, help);
        s->add_option(input_flag, o.kb, "Input .mvl file");
        s->add_option("file", o.kb, "Input .mvl file");
        s->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "wire"}));
        s->callback([&, body] {
            run = [&, body](std::ostream& os) {
                if constexpr (std::is_same_v<decltype(body(o, os)), int>)
                    return body(o, os);
                else {
                    body(o, os);
                    return 0;
                }
            };
        });
        return s;
    };

    sub("parse", "Parse a document and print it in canonical form", "--kb", cmd_parse);

    auto* q = sub("query", "Answer a query in the stratified least model", "--kb", cmd_query);
    q->add_option("--query", o.query, "Literal, variables allowed");

    auto* c = sub("circumscribe", "Minimal models and circumscriptive entailment", "--kb", cmd_circumscribe);
    c->add_option("--minimize", o.minimize, "Comma separated predicates to minimize");
    c->add_option("--fixed", o.fixed, "Comma separated fixed predicates");
    c->add_option("--varied", o.varied, "Comma separated varied predicates");
    c->add_option("--query", o.query, "Ground literal; prints holds, fails or disputed");

    auto* d = sub("defeasible", "Qualified conclusions of defeasible rules", "--kb", cmd_defeasible);
    d->add_option("--query", o.query, "Ground literal");

    auto* f = sub("af", "Extensions of an abstract argumentation framework", "--kb", cmd_af);
    f->add_option("--semantics", o.semantics, "grounded|admissible|complete|preferred|stable|conflict-free");

    auto* a = sub("abduce", "Minimal explanations from abducible atoms", "--kb", cmd_abduce);
    a->add_option("--abducibles", o.abducibles, "Comma separated ground atoms");
    a->add_option("--observe", o.observe, "Comma separated observed literals");
    a->add_option("--forbid", o.forbid, "Literals that may not hold together");

    auto* cf = sub("counterfactual", "Evaluate a counterfactual over ranked worlds", "--kb", cmd_counterfactual);
    cf->add_option("--mode", o.mode, "would|might|but-for")->required();
    cf->add_option("--antecedent,--cause", o.antecedent, "Formula");
    cf->add_option("--consequent,--effect", o.consequent, "Formula");

    auto* m = sub("modal-check", "Check a modal or temporal formula", "--kb", cmd_modal);
    m->add_option("--formula", o.formula, "Prefix formula, e.g. (ob attend)");
    m->add_option("--world", o.world, "World to evaluate at (default: actual, else all)");
    m->add_option("--position", o.position, "Trace position for temporal formulas");

    auto* p = sub("plan", "Shortest plan by breadth-first search", "--domain", cmd_plan);
    p->add_option("--init", o.init, "Comma separated initial fluents");
    p->add_option("--goal", o.goal, "Comma separated goal literals");

    auto* pl = sub("pipeline", "Run a staged reasoning pipeline", "--kb", cmd_pipeline);
    pl->add_option("--spec", o.spec, "Pipeline JSON file");
    pl->add_option("--query", o.query, "Default query, observation and goal");

    auto* n = sub("narrate", "Narrate the document's story through a chat model", "--kb", cmd_narrate);
    n->add_option("--mode", o.mode, "story|events");
    n->add_option("--transport", o.transport, "mock:<script-file> or live:<config-file>")->required();

    auto* b = sub("bridge", "Answer a prompt with the monkey planning tool available", "--domain", cmd_bridge);
    b->add_option("--prompt", o.prompt, "User prompt");
    b->add_option("--transport", o.transport, "mock:<script-file> or live:<config-file>")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }

    o.wire = format == "wire";
    try {
        return run(out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace mvl
