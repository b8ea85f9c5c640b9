#include "mvlogic/orchestrator.hpp"

#include "mvlogic/abduction.hpp"
#include "mvlogic/argumentation.hpp"
#include "mvlogic/counterfactual.hpp"
#include "mvlogic/defeasible.hpp"
#include "mvlogic/minimize.hpp"
#include "mvlogic/modal.hpp"
#include "mvlogic/planner.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace mvl {

using Op = ModalFormula::Op;

Pipeline parse_pipeline(std::string_view json_text)
{
    Json j;
    try {
        j = Json::parse(json_text);
    } catch (const Json::exception& e) {
        throw Error(std::string("malformed pipeline: ") + e.what());
    }
    const Json& stages = j.is_array() ? j : j.value("stages", Json());
    if (!stages.is_array())
        throw Error("pipeline needs a \"stages\" array");
    static const std::set<std::string> kinds = {"circumscribe",   "defeasible", "argue", "abduce",
                                                "counterfactual", "believe",    "plan"};
    Pipeline p;
    for (const auto& s : stages) {
        if (!s.is_object() || !s.contains("stage") || !s["stage"].is_string())
            throw Error("every stage needs a \"stage\" name");
        StageSpec spec{s["stage"].get<std::string>(), s};
        if (!kinds.contains(spec.kind))
            throw Error("unknown stage '" + spec.kind + "'");
        spec.config.erase("stage");
        p.stages.push_back(std::move(spec));
    }
    return p;
}

Pipeline load_pipeline(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_pipeline(ss.str());
}

std::vector<std::pair<ModalFormula, Substitution>> infer_goals(const std::vector<GoalRuleDecl>& rules,
                                                               const std::vector<Term>& events)
{
    std::vector<std::pair<ModalFormula, Substitution>> out;
    for (const auto& ev : events)
        for (const auto& rule : rules) {
            auto s = unify(rule.trigger, ev);
            if (!s)
                continue;
            ModalFormula goal = substitute(rule.goal, *s);
            if (std::none_of(out.begin(), out.end(), [&](const auto& g) { return g.first == goal; }))
                out.emplace_back(std::move(goal), *s);
        }
    return out;
}

std::vector<Literal> goal_literals(const ModalFormula& f)
{
    switch (f.op) {
    case Op::eventually: return goal_literals(f.args[0]);
    case Op::atom: return {Literal::pos(f.atom)};
    case Op::negation:
        if (f.args[0].op == Op::atom)
            return {Literal::naf(f.args[0].atom)};
        break;
    case Op::conjunction: {
        auto a = goal_literals(f.args[0]);
        auto b = goal_literals(f.args[1]);
        a.insert(a.end(), b.begin(), b.end());
        return a;
    }
    default: break;
    }
    throw Error("cannot plan for goal " + render(f));
}

namespace {

std::vector<std::string> strings(const Json& cfg, const char* key)
{
    std::vector<std::string> out;
    if (!cfg.contains(key))
        return out;
    const Json& v = cfg[key];
    if (v.is_string())
        return {v.get<std::string>()};
    if (!v.is_array())
        throw Error(std::string("\"") + key + "\" must be a string or a list of strings");
    for (const auto& x : v) {
        if (!x.is_string())
            throw Error(std::string("\"") + key + "\" must be a string or a list of strings");
        out.push_back(x.get<std::string>());
    }
    return out;
}

std::optional<std::string> text(const Json& cfg, const char* key)
{
    if (!cfg.contains(key))
        return std::nullopt;
    if (!cfg[key].is_string())
        throw Error(std::string("\"") + key + "\" must be a string");
    return cfg[key].get<std::string>();
}

std::vector<Literal> literals(const std::vector<std::string>& items)
{
    std::vector<Literal> out;
    for (const auto& s : items) {
        auto ls = parse_literals(s);
        out.insert(out.end(), ls.begin(), ls.end());
    }
    return out;
}

Json literal_list(const std::vector<Literal>& ls)
{
    Json j = Json::array();
    for (const auto& l : ls)
        j.push_back(render(l));
    return j;
}

Json term_list(const std::set<Term>& ts)
{
    Json j = Json::array();
    for (const auto& t : ts)
        j.push_back(render(t));
    return j;
}

bool mentions(const Rule& r, const std::set<std::string>& preds)
{
    if (preds.contains(r.head.atom.name()))
        return true;
    return std::any_of(r.body.begin(), r.body.end(), [&](const Literal& l) { return preds.contains(l.atom.name()); });
}

void drop_rules(Document& doc, const std::set<std::string>& labels)
{
    auto& rules = doc.kb.rules;
    rules.erase(std::remove_if(rules.begin(), rules.end(), [&](const Rule& r) { return labels.contains(r.label); }),
                rules.end());
    for (const auto& l : labels) {
        doc.kb.annotations.erase(l);
        doc.kb.assumptions.erase(l);
    }
    finalize(doc.kb);
}

Literal single_query(const Json& cfg, const std::optional<std::vector<Literal>>& query, const char* stage)
{
    if (auto q = text(cfg, "query")) {
        auto ls = parse_literals(*q);
        if (ls.size() != 1)
            throw Error(std::string(stage) + " query must be a single literal");
        return ls[0];
    }
    if (query && query->size() == 1)
        return (*query)[0];
    throw Error(std::string(stage) + " stage needs a single-literal query");
}

bool has_query(const Json& cfg, const std::optional<std::vector<Literal>>& query)
{
    return cfg.contains("query") || (query && query->size() == 1);
}

void circumscribe(Document& doc, const Json& cfg, const std::optional<std::vector<Literal>>& query, StageReport& rep)
{
    auto focus_list = strings(cfg, "focus");
    auto minimized = strings(cfg, "minimize");
    if (focus_list.empty() && minimized.empty())
        throw Error("circumscribe stage needs \"focus\" or \"minimize\" predicates");
    std::set<std::string> focus(focus_list.begin(), focus_list.end());
    focus.insert(minimized.begin(), minimized.end());
    rep.inputs["focus"] = focus;

    std::set<std::string> roles;
    for (const auto& e : doc.kb.entity_decls)
        roles.insert(e.role);
    // Rules mentioning a focus predicate, closed under the rules that
    // define what their bodies read.
    std::vector<char> keep(doc.kb.rules.size(), 0);
    std::set<std::string> needed;
    for (bool grew = true; grew;) {
        grew = false;
        for (std::size_t i = 0; i < doc.kb.rules.size(); ++i) {
            const auto& r = doc.kb.rules[i];
            const bool role_fact = r.is_fact() && roles.contains(r.head.atom.name());
            if (keep[i] || !(mentions(r, focus) || role_fact || needed.contains(r.head.atom.name())))
                continue;
            keep[i] = 1;
            grew = true;
            for (const auto& l : r.body)
                if (!l.is_builtin())
                    needed.insert(l.atom.name());
        }
    }
    std::set<std::string> dropped;
    Json kept = Json::array();
    for (std::size_t i = 0; i < doc.kb.rules.size(); ++i) {
        if (keep[i])
            kept.push_back(doc.kb.rules[i].label);
        else
            dropped.insert(doc.kb.rules[i].label);
    }
    auto& constraints = doc.kb.constraints;
    constraints.erase(std::remove_if(constraints.begin(), constraints.end(),
                                     [&](const std::vector<Literal>& body) {
                                         return std::none_of(body.begin(), body.end(), [&](const Literal& l) {
                                             return focus.contains(l.atom.name());
                                         });
                                     }),
                      constraints.end());
    drop_rules(doc, dropped);
    rep.outputs["kept"] = kept;
    rep.outputs["dropped"] = dropped;

    if (!minimized.empty()) {
        rep.inputs["minimize"] = minimized;
        auto theory = make_theory(doc.kb, {minimized.begin(), minimized.end()});
        Json models = Json::array();
        for (const auto& m : minimal_models(theory))
            models.push_back(render(m));
        rep.outputs["minimal_models"] = models;
        if (has_query(cfg, query)) {
            const Literal q = single_query(cfg, query, "circumscribe");
            rep.inputs["query"] = render(q);
            rep.outputs["verdict"] = verdict_name(circumscribed_entails(theory, q));
        }
    }
    for (const auto& l : kept)
        rep.provenance.push_back(l.get<std::string>());
}

void defeasible(Document& doc, const Json& cfg, const std::optional<std::vector<Literal>>& query, StageReport& rep)
{
    const auto all = conclude_all(doc.kb);
    Json conclusions = Json::array();
    for (const auto& c : all) {
        Json j{{"literal", render(c.literal)}, {"status", status_name(c.status)}};
        if (c.defeater)
            j["defeater"] = *c.defeater;
        if (c.status == Status::presumably_holds && !c.qualifier.empty())
            j["qualifier"] = c.qualifier;
        conclusions.push_back(std::move(j));
    }
    rep.outputs["conclusions"] = conclusions;

    if (has_query(cfg, query)) {
        const Literal q = single_query(cfg, query, "defeasible");
        rep.inputs["query"] = render(q);
        const auto c = conclude(doc.kb, q);
        rep.outputs["status"] = status_name(c.status);
        if (c.defeater)
            rep.outputs["defeater"] = *c.defeater;
        if (c.status == Status::presumably_holds)
            rep.outputs["qualifier"] = c.qualifier;
    }

    std::set<std::string> inert;
    for (const auto& r : doc.kb.rules) {
        if (r.kind != RuleKind::defeasible)
            continue;
        bool defeated = false, accepted = false;
        for (const auto& c : all) {
            if (c.literal.sign != r.head.sign || !unify(c.literal.atom, r.head.atom))
                continue;
            defeated |= c.status == Status::defeated;
            accepted |= c.status == Status::presumably_holds;
            if (c.defeater && c.status == Status::defeated)
                rep.provenance.push_back(*c.defeater);
        }
        if (defeated && !accepted)
            inert.insert(r.label);
    }
    rep.outputs["inert_rules"] = inert;
    drop_rules(doc, inert);
}

void argue(Document& doc, const Json& cfg, StageReport& rep)
{
    const std::string sem_name = text(cfg, "semantics").value_or("grounded");
    const auto sem = semantics_from_name(sem_name);
    if (!sem)
        throw Error("unknown semantics '" + sem_name + "'");
    rep.inputs["semantics"] = sem_name;
    const auto af = framework_from_kb(doc.kb);
    const auto exts = extensions(af, *sem);

    Json ext_json = Json::array();
    for (const auto& e : exts)
        ext_json.push_back(e);
    rep.outputs["extensions"] = ext_json;

    ArgSet accepted = af.args;
    ArgSet credulous;
    if (exts.empty())
        accepted.clear();
    for (const auto& e : exts) {
        ArgSet keep;
        std::set_intersection(accepted.begin(), accepted.end(), e.begin(), e.end(), std::inserter(keep, keep.end()));
        accepted = std::move(keep);
        credulous.insert(e.begin(), e.end());
    }
    ArgSet rejected;
    for (const auto& a : af.args)
        if (!credulous.contains(a))
            rejected.insert(a);
    rep.outputs["accepted"] = accepted;
    rep.outputs["rejected"] = rejected;

    std::set<std::string> dropped;
    for (const auto& r : doc.kb.rules)
        if (rejected.contains(r.label))
            dropped.insert(r.label);
    rep.outputs["dropped_rules"] = dropped;
    drop_rules(doc, dropped);
    rep.provenance.push_back(std::string(semantics_name(*sem)));
}

void abduce(Document& doc, const Json& cfg, const std::optional<std::vector<Literal>>& query, StageReport& rep)
{
    std::set<Term> abducibles;
    for (const auto& s : strings(cfg, "abducibles"))
        for (auto& t : parse_terms(s))
            abducibles.insert(std::move(t));
    auto observation = literals(strings(cfg, "observe"));
    if (observation.empty() && query)
        observation = *query;
    std::vector<std::vector<Literal>> forbid;
    for (const auto& s : strings(cfg, "forbid"))
        forbid.push_back(parse_literals(s));

    rep.inputs["abducibles"] = term_list(abducibles);
    rep.inputs["observation"] = literal_list(observation);
    const auto problem = make_abduction(doc.kb, abducibles, observation, forbid);
    const auto hs = explanations(problem);
    Json hj = Json::array();
    for (const auto& h : hs)
        hj.push_back(term_list(h));
    rep.outputs["hypotheses"] = hj;

    Json adopted = Json::array();
    if (hs.size() == 1 && !hs[0].empty()) {
        const std::set<std::string> before = doc.kb.assumptions;
        doc.kb = with_hypothesis(doc.kb, hs[0]);
        finalize(doc.kb);
        for (const auto& label : doc.kb.assumptions)
            if (!before.contains(label)) {
                adopted.push_back({{"label", label}, {"fact", render(doc.kb.find_rule(label)->head)}});
                rep.provenance.push_back(label);
            }
    }
    rep.outputs["assumptions"] = adopted;
}

ModalFormula formula(const Json& cfg, const char* key)
{
    auto s = text(cfg, key);
    if (!s)
        throw Error(std::string("stage needs \"") + key + "\"");
    return parse_formula(*s);
}

void counterfactual(const Document& doc, const Json& cfg, StageReport& rep)
{
    const auto model = similarity_model(doc);
    const std::string mode = text(cfg, "mode").value_or("would");
    const auto a = formula(cfg, mode == "but_for" ? "cause" : "antecedent");
    const auto b = formula(cfg, mode == "but_for" ? "effect" : "consequent");
    rep.inputs = {{"mode", mode}, {"a", render(a)}, {"b", render(b)}, {"actual", model.actual}};
    if (mode == "but_for") {
        rep.outputs["holds"] = but_for(model, a, b);
    } else if (mode == "would" || mode == "might") {
        const auto r = mode == "would" ? would(model, a, b) : might(model, a, b);
        rep.outputs["holds"] = r.holds;
        rep.outputs["vacuous"] = r.vacuous;
    } else {
        throw Error("unknown counterfactual mode '" + mode + "'");
    }
    for (const auto& w : closest(model, mode == "but_for" ? !a : a))
        rep.provenance.push_back(w);
}

void believe(const Document& doc, const Json& cfg, StageReport& rep)
{
    const auto model = kripke_model(doc);
    const auto f = formula(cfg, "formula");
    std::string world;
    if (auto w = text(cfg, "world"))
        world = *w;
    else if (doc.actual)
        world = *doc.actual;
    else
        throw Error("believe stage needs a \"world\" (no actual world declared)");
    rep.inputs = {{"world", world}, {"formula", render(f)}};
    rep.outputs["holds"] = check_world(model, world, f);
    rep.provenance.push_back(world);
}

void plan(const Document& doc, const Json& cfg, const std::optional<std::vector<Literal>>& query, StageReport& rep)
{
    Json assumptions = Json::array();
    for (const auto& label : doc.kb.assumptions)
        assumptions.push_back({{"label", label}, {"fact", render(doc.kb.find_rule(label)->head)}});
    rep.outputs["assumptions"] = assumptions;
    if (doc.actions.empty()) {
        rep.outputs["status"] = "no action schemas";
        return;
    }

    std::optional<ModalFormula> temporal_goal;
    std::optional<std::vector<Literal>> goal;
    if (auto g = text(cfg, "goal")) {
        goal = parse_literals(*g);
    } else if (cfg.value("infer", false)) {
        const auto goals = infer_goals(doc.goal_rules, doc.story);
        if (goals.empty())
            throw Error("no goal inference rule matches the story");
        temporal_goal = goals.front().first;
        goal = goal_literals(*temporal_goal);
        rep.inputs["inferred_goal"] = render(*temporal_goal);
    } else if (query) {
        goal = query;
    }
    std::optional<std::vector<Term>> init;
    if (auto i = text(cfg, "init"))
        init = parse_terms(*i);

    const auto problem = planning_problem(doc, init, goal);
    rep.inputs["goal"] = literal_list(problem.goal);
    const auto found = plan_search(problem);
    if (!found) {
        rep.outputs["status"] = "no plan";
        return;
    }
    rep.outputs["status"] = "plan found";
    Json steps = Json::array();
    for (const auto& a : *found) {
        steps.push_back(render(a));
        rep.provenance.push_back(a.name());
    }
    rep.outputs["plan"] = steps;
    if (temporal_goal)
        rep.outputs["trace_check"] = check_trace(trace_states(problem, *found), 0, *temporal_goal);
}

} // namespace

PipelineResult run_pipeline(const Document& doc, const Pipeline& pipeline,
                            const std::optional<std::vector<Literal>>& query)
{
    PipelineResult result;
    result.document = doc;
    for (const auto& stage : pipeline.stages) {
        StageReport rep;
        rep.stage = stage.kind;
        Document work = result.document;
        try {
            if (stage.kind == "circumscribe")
                circumscribe(work, stage.config, query, rep);
            else if (stage.kind == "defeasible")
                defeasible(work, stage.config, query, rep);
            else if (stage.kind == "argue")
                argue(work, stage.config, rep);
            else if (stage.kind == "abduce")
                abduce(work, stage.config, query, rep);
            else if (stage.kind == "counterfactual")
                counterfactual(work, stage.config, rep);
            else if (stage.kind == "believe")
                believe(work, stage.config, rep);
            else if (stage.kind == "plan")
                plan(work, stage.config, query, rep);
            else
                throw Error("unknown stage '" + stage.kind + "'");
        } catch (const std::exception& e) {
            rep.error = e.what();
            result.reports.push_back(std::move(rep));
            result.ok = false;
            return result;
        }
        result.document = std::move(work);
        result.reports.push_back(std::move(rep));
    }
    return result;
}

Json to_json(const StageReport& r)
{
    Json j{{"stage", r.stage}, {"inputs", r.inputs}, {"outputs", r.outputs}, {"provenance", r.provenance}};
    if (r.error)
        j["error"] = *r.error;
    return j;
}

Json to_json(const PipelineResult& r)
{
    Json reports = Json::array();
    for (const auto& rep : r.reports)
        reports.push_back(to_json(rep));
    Json assumptions = Json::array();
    for (const auto& label : r.document.kb.assumptions)
        assumptions.push_back(label);
    return {{"ok", r.ok}, {"reports", reports}, {"rules", r.document.kb.rules.size()}, {"assumptions", assumptions}};
}

} // namespace mvl
