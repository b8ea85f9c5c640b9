#include "mvlogic/modal.hpp"

#include <algorithm>

namespace mvl {

using Op = ModalFormula::Op;

KripkeModel make_kripke(std::set<World> worlds, std::map<Term, Relation> relations,
                        std::map<World, std::set<Term>> valuation)
{
    auto check = [&](const World& w, const std::string& where) {
        if (!worlds.contains(w))
            throw Error("unknown world '" + w + "' in " + where);
    };
    for (const auto& [key, rel] : relations)
        for (const auto& [a, b] : rel) {
            check(a, "relation " + render(key));
            check(b, "relation " + render(key));
        }
    for (const auto& [w, atoms] : valuation) {
        check(w, "valuation");
        for (const auto& a : atoms)
            if (!a.is_ground())
                throw Error("world '" + w + "' holds non-ground atom " + render(a));
    }
    for (const auto& w : worlds)
        valuation[w];
    return KripkeModel{std::move(worlds), std::move(relations), std::move(valuation)};
}

KripkeModel kripke_model(const Document& doc)
{
    std::set<World> worlds;
    std::map<World, std::set<Term>> valuation;
    for (const auto& w : doc.worlds) {
        if (!worlds.insert(w.id).second)
            throw Error("world '" + w.id + "' declared twice");
        valuation[w.id].insert(w.atoms.begin(), w.atoms.end());
    }
    std::map<Term, Relation> relations;
    for (const auto& r : doc.relations)
        relations[r.key].emplace(r.from, r.to);
    return make_kripke(std::move(worlds), std::move(relations), std::move(valuation));
}

Term relation_key(const ModalFormula& f)
{
    switch (f.op) {
    case Op::box:
    case Op::dia: return f.key;
    case Op::ob:
    case Op::pm:
    case Op::fb: return deontic_key();
    case Op::bel: return belief_key(f.key);
    default: throw Error("operator in " + render(f) + " has no accessibility relation");
    }
}

bool atom_holds(const Term& atom, const std::set<Term>& state)
{
    if (atom.is_ground())
        return state.contains(atom);
    return std::any_of(state.begin(), state.end(), [&](const Term& t) { return unify(atom, t).has_value(); });
}

namespace {

void check_relations(const KripkeModel& m, const ModalFormula& f)
{
    if (f.is_temporal())
        throw Error("temporal operator in world formula: " + render(f));
    if (f.is_world_modal() && !m.relations.contains(relation_key(f)))
        throw Error("no relation '" + render(relation_key(f)) + "' declared for " + render(f));
    for (const auto& a : f.args)
        check_relations(m, a);
}

bool eval(const KripkeModel& m, const World& w, const ModalFormula& f)
{
    switch (f.op) {
    case Op::atom: return atom_holds(f.atom, m.valuation.at(w));
    case Op::negation: return !eval(m, w, f.args[0]);
    case Op::conjunction: return eval(m, w, f.args[0]) && eval(m, w, f.args[1]);
    case Op::disjunction: return eval(m, w, f.args[0]) || eval(m, w, f.args[1]);
    case Op::implication: return !eval(m, w, f.args[0]) || eval(m, w, f.args[1]);
    default: break;
    }
    const Relation& rel = m.relations.at(relation_key(f));
    const bool universal = f.op == Op::box || f.op == Op::ob || f.op == Op::fb || f.op == Op::bel;
    for (auto it = rel.lower_bound({w, World{}}); it != rel.end() && it->first == w; ++it) {
        bool v = eval(m, it->second, f.args[0]);
        if (f.op == Op::fb)
            v = !v;
        if (universal && !v)
            return false;
        if (!universal && v)
            return true;
    }
    return universal;
}

bool eval_trace(const Trace& t, std::size_t i, const ModalFormula& f)
{
    switch (f.op) {
    case Op::atom: return atom_holds(f.atom, t[i]);
    case Op::negation: return !eval_trace(t, i, f.args[0]);
    case Op::conjunction: return eval_trace(t, i, f.args[0]) && eval_trace(t, i, f.args[1]);
    case Op::disjunction: return eval_trace(t, i, f.args[0]) || eval_trace(t, i, f.args[1]);
    case Op::implication: return !eval_trace(t, i, f.args[0]) || eval_trace(t, i, f.args[1]);
    case Op::always:
        for (std::size_t j = i; j < t.size(); ++j)
            if (!eval_trace(t, j, f.args[0]))
                return false;
        return true;
    case Op::eventually:
        for (std::size_t j = i; j < t.size(); ++j)
            if (eval_trace(t, j, f.args[0]))
                return true;
        return false;
    case Op::hist:
        for (std::size_t j = 0; j <= i; ++j)
            if (!eval_trace(t, j, f.args[0]))
                return false;
        return true;
    case Op::past:
        for (std::size_t j = 0; j <= i; ++j)
            if (eval_trace(t, j, f.args[0]))
                return true;
        return false;
    default: throw Error("world modality in trace formula: " + render(f));
    }
}

ModalFormula negate(ModalFormula f)
{
    if (f.op == Op::negation)
        return std::move(f.args[0]);
    return !std::move(f);
}

} // namespace

bool check_world(const KripkeModel& model, const World& w, const ModalFormula& f)
{
    if (!model.worlds.contains(w))
        throw Error("unknown world '" + w + "'");
    check_relations(model, f);
    return eval(model, w, f);
}

bool check_trace(const Trace& trace, std::size_t i, const ModalFormula& f)
{
    if (i >= trace.size())
        throw Error("trace position " + std::to_string(i) + " out of range (length " +
                    std::to_string(trace.size()) + ")");
    return eval_trace(trace, i, f);
}

ModalFormula dual_normalize(const ModalFormula& f)
{
    auto sub = [&](std::size_t k) { return dual_normalize(f.args[k]); };
    auto box = [](Term key, ModalFormula g) { return ModalFormula::keyed(Op::box, std::move(key), std::move(g)); };
    switch (f.op) {
    case Op::atom: return f;
    case Op::negation: return negate(sub(0));
    case Op::conjunction: return sub(0) && sub(1);
    case Op::disjunction: return negate(negate(sub(0)) && negate(sub(1)));
    case Op::implication: return negate(sub(0) && negate(sub(1)));
    case Op::box: return box(f.key, sub(0));
    case Op::dia: return negate(box(f.key, negate(sub(0))));
    case Op::ob: return box(deontic_key(), sub(0));
    case Op::pm: return negate(box(deontic_key(), negate(sub(0))));
    case Op::fb: return box(deontic_key(), negate(sub(0)));
    case Op::bel: return ModalFormula::keyed(Op::bel, f.key, sub(0));
    case Op::always: return ModalFormula::unary(Op::always, sub(0));
    case Op::eventually: return negate(ModalFormula::unary(Op::always, negate(sub(0))));
    case Op::hist: return ModalFormula::unary(Op::hist, sub(0));
    case Op::past: return negate(ModalFormula::unary(Op::hist, negate(sub(0))));
    }
    return f;
}

} // namespace mvl
