#include "mvlogic/planner.hpp"

#include "mvlogic/derive.hpp"

#include <deque>
#include <functional>

namespace mvl {

PreconditionError::PreconditionError(const GroundAction& action, const Literal& violated)
    : Error("precondition " + render(violated) + " of " + render(action) + " does not hold"),
      action_(action),
      violated_(violated)
{
}

PlanningProblem planning_problem(const Document& doc, const std::optional<std::vector<Term>>& init,
                                 const std::optional<std::vector<Literal>>& goal)
{
    PlanningProblem p;
    p.schemas = doc.actions;
    for (const auto& e : doc.kb.entity_decls)
        p.objects[e.role] = e.instances;
    for (const auto& s : doc.sorts)
        p.objects[s.name] = s.objects;
    for (const auto& a : least_model(doc.kb))
        p.background.insert(a);

    const auto& start = init ? init : doc.init;
    if (!start)
        throw Error("planning problem has no initial state");
    for (const auto& t : *start) {
        if (!t.is_ground())
            throw Error("initial fluent " + render(t) + " is not ground");
        p.initial.insert(t);
    }
    const auto& target = goal ? goal : doc.goal;
    if (!target)
        throw Error("planning problem has no goal");
    p.goal = *target;

    std::set<std::string> names;
    for (const auto& a : p.schemas) {
        if (!names.insert(a.name).second)
            throw Error("action '" + a.name + "' declared twice");
        for (const auto& prm : a.params)
            if (!p.objects.contains(prm.sort))
                throw Error("action '" + a.name + "' uses undeclared sort '" + prm.sort + "'");
    }
    return p;
}

namespace {

bool holds_ground(const Literal& l, const FluentState& s, const std::set<Term>& bg)
{
    if (l.is_builtin())
        return eval_builtin(l.atom);
    const Term a = l.sign == Sign::naf ? l.atom : model_atom(l);
    const bool present = atom_holds(a, s) || atom_holds(a, bg);
    return l.sign == Sign::naf ? !present : present;
}

bool match_rec(const std::vector<const Literal*>& positives, std::size_t k, const std::vector<const Literal*>& rest,
               const FluentState& s, const std::set<Term>& bg, Substitution& sub)
{
    if (k == positives.size()) {
        for (const auto* l : rest) {
            Literal g = sub.apply(*l);
            if (l->is_builtin() && !g.atom.is_ground())
                return false;
            if (!holds_ground(g, s, bg))
                return false;
        }
        return true;
    }
    const Term pattern = sub.apply(model_atom(*positives[k]));
    for (const auto* pool : {&s, &bg}) {
        for (const auto& cand : *pool) {
            Substitution trial = sub;
            if (!unify_into(pattern, cand, trial))
                continue;
            if (match_rec(positives, k + 1, rest, s, bg, trial)) {
                sub = std::move(trial);
                return true;
            }
        }
    }
    return false;
}

std::vector<Term> sorted_objects(const std::vector<Term>& v)
{
    std::set<Term> s(v.begin(), v.end());
    return {s.begin(), s.end()};
}

const ActionSchema& schema_for(const GroundAction& action, const PlanningProblem& p)
{
    for (const auto& a : p.schemas)
        if (a.name == action.name() && a.params.size() == action.arity())
            return a;
    throw Error("unknown action " + render(action));
}

Substitution bind_params(const ActionSchema& a, const GroundAction& action, const PlanningProblem& p)
{
    Substitution sub;
    for (std::size_t i = 0; i < a.params.size(); ++i) {
        const Term& arg = action.args()[i];
        const auto& objs = p.objects.at(a.params[i].sort);
        if (std::find(objs.begin(), objs.end(), arg) == objs.end())
            throw Error("argument " + render(arg) + " of " + render(action) + " is not a " + a.params[i].sort);
        sub.bind(a.params[i].var, arg);
    }
    return sub;
}

FluentState effects(const FluentState& state, const ActionSchema& a, const Substitution& sub,
                    const GroundAction& action)
{
    FluentState out = state;
    for (const auto& d : a.deletes)
        out.erase(sub.apply(d));
    for (const auto& t : a.adds) {
        Term g = sub.apply(t);
        if (!g.is_ground())
            throw Error("effect " + render(g) + " of " + render(action) + " is not ground");
        out.insert(std::move(g));
    }
    return out;
}

GroundAction make_action(const std::string& name, std::vector<Term> args)
{
    return args.empty() ? Term::constant(name) : Term::compound(name, std::move(args));
}

} // namespace

std::optional<Substitution> match_literals(const std::vector<Literal>& lits, const FluentState& state,
                                           const std::set<Term>& background, const Substitution& base)
{
    std::vector<const Literal*> positives, rest;
    for (const auto& l : lits)
        (l.sign != Sign::naf && !l.is_builtin() ? positives : rest).push_back(&l);
    Substitution sub = base;
    if (match_rec(positives, 0, rest, state, background, sub))
        return sub;
    return std::nullopt;
}

bool goal_satisfied(const PlanningProblem& p, const FluentState& s)
{
    return match_literals(p.goal, s, p.background).has_value();
}

FluentState apply_action(const FluentState& state, const GroundAction& action, const PlanningProblem& p)
{
    if (!action.is_ground())
        throw Error("action " + render(action) + " is not ground");
    const ActionSchema& a = schema_for(action, p);
    const Substitution params = bind_params(a, action, p);
    auto sub = match_literals(a.preconditions, state, p.background, params);
    if (!sub) {
        std::vector<Literal> prefix;
        for (const auto& l : a.preconditions) {
            prefix.push_back(l);
            if (!match_literals(prefix, state, p.background, params))
                throw PreconditionError(action, params.apply(l));
        }
        throw PreconditionError(action, a.preconditions.back());
    }
    return effects(state, a, *sub, action);
}

std::vector<std::pair<GroundAction, FluentState>> successors(const FluentState& state, const PlanningProblem& p)
{
    std::vector<std::pair<GroundAction, FluentState>> out;
    for (const auto& a : p.schemas) {
        std::vector<std::vector<Term>> domains;
        for (const auto& prm : a.params)
            domains.push_back(sorted_objects(p.objects.at(prm.sort)));
        std::vector<Term> args(a.params.size());
        std::function<void(std::size_t, Substitution&)> rec = [&](std::size_t i, Substitution& sub) {
            if (i == a.params.size()) {
                if (auto m = match_literals(a.preconditions, state, p.background, sub)) {
                    auto action = make_action(a.name, args);
                    out.emplace_back(action, effects(state, a, *m, action));
                }
                return;
            }
            for (const auto& obj : domains[i]) {
                Substitution next = sub;
                if (!next.bind(a.params[i].var, obj))
                    continue;
                args[i] = obj;
                rec(i + 1, next);
            }
        };
        Substitution empty;
        rec(0, empty);
    }
    return out;
}

std::optional<Plan> plan_search(const PlanningProblem& p, std::size_t max_states)
{
    if (goal_satisfied(p, p.initial))
        return Plan{};
    std::map<FluentState, std::pair<const FluentState*, GroundAction>> parent;
    std::deque<const FluentState*> frontier;
    auto [root, _] = parent.emplace(p.initial, std::pair<const FluentState*, GroundAction>{nullptr, {}});
    frontier.push_back(&root->first);
    while (!frontier.empty()) {
        const FluentState* s = frontier.front();
        frontier.pop_front();
        for (auto& [action, next] : successors(*s, p)) {
            auto [it, fresh] = parent.emplace(std::move(next), std::pair{s, action});
            if (!fresh)
                continue;
            if (parent.size() > max_states)
                throw Error("state space exceeds " + std::to_string(max_states) + " states");
            if (goal_satisfied(p, it->first)) {
                Plan plan;
                for (const FluentState* cur = &it->first; parent.at(*cur).first; cur = parent.at(*cur).first)
                    plan.push_back(parent.at(*cur).second);
                return Plan(plan.rbegin(), plan.rend());
            }
            frontier.push_back(&it->first);
        }
    }
    return std::nullopt;
}

std::set<FluentState> reachable_states(const PlanningProblem& p, std::size_t max_states)
{
    std::set<FluentState> seen{p.initial};
    std::deque<FluentState> frontier{p.initial};
    while (!frontier.empty()) {
        FluentState s = std::move(frontier.front());
        frontier.pop_front();
        for (auto& [action, next] : successors(s, p)) {
            if (!seen.insert(next).second)
                continue;
            if (seen.size() > max_states)
                throw Error("state space exceeds " + std::to_string(max_states) + " states");
            frontier.push_back(std::move(next));
        }
    }
    return seen;
}

PlanReport validate_plan(const PlanningProblem& p, const Plan& plan)
{
    FluentState s = p.initial;
    for (std::size_t i = 0; i < plan.size(); ++i) {
        try {
            s = apply_action(s, plan[i], p);
        } catch (const Error& e) {
            return {false, i + 1, e.what()};
        }
    }
    if (!goal_satisfied(p, s))
        return {false, 0, "goal does not hold after the last step"};
    return {true, 0, ""};
}

Trace trace_states(const PlanningProblem& p, const Plan& plan)
{
    const auto report = validate_plan(p, plan);
    if (!report.valid)
        throw Error("invalid plan: " + report.reason);
    Trace t{p.initial};
    for (const auto& a : plan)
        t.push_back(apply_action(t.back(), a, p));
    return t;
}

GroundAction parse_action(std::string_view text)
{
    Term t = parse_term(text);
    if (!t.is_ground() || t.is_variable())
        throw Error("action must be a ground term: " + std::string(text));
    return t;
}

std::string render(const Plan& plan)
{
    std::string out;
    for (const auto& a : plan)
        out += render(a) + "\n";
    return out;
}

} // namespace mvl
