#include "mvlogic/counterfactual.hpp"

#include "mvlogic/modal.hpp"

#include <limits>

namespace mvl {

using Op = ModalFormula::Op;

SimilarityModel make_similarity(std::set<std::string> worlds, std::map<std::string, std::set<Term>> valuation,
                                std::string actual, std::map<std::string, int> rank)
{
    if (!worlds.contains(actual))
        throw Error("actual world '" + actual + "' is not declared");
    for (const auto& [w, atoms] : valuation) {
        if (!worlds.contains(w))
            throw Error("unknown world '" + w + "' in valuation");
        for (const auto& a : atoms)
            if (!a.is_ground())
                throw Error("world '" + w + "' holds non-ground atom " + render(a));
    }
    rank.try_emplace(actual, 0);
    for (const auto& [w, r] : rank) {
        if (!worlds.contains(w))
            throw Error("unknown world '" + w + "' in rank");
        if (r < 0)
            throw Error("world '" + w + "' has negative rank");
        if (w == actual && r != 0)
            throw Error("actual world '" + w + "' must have rank 0");
        if (w != actual && r == 0)
            throw Error("world '" + w + "' has rank 0 but is not the actual world");
    }
    for (const auto& w : worlds) {
        if (!rank.contains(w))
            throw Error("world '" + w + "' has no rank");
        valuation[w];
    }
    return SimilarityModel{std::move(worlds), std::move(valuation), std::move(actual), std::move(rank)};
}

SimilarityModel similarity_model(const Document& doc)
{
    if (!doc.actual)
        throw Error("model declares no actual world");
    std::set<std::string> worlds;
    std::map<std::string, std::set<Term>> valuation;
    for (const auto& w : doc.worlds) {
        if (!worlds.insert(w.id).second)
            throw Error("world '" + w.id + "' declared twice");
        valuation[w.id].insert(w.atoms.begin(), w.atoms.end());
    }
    std::map<std::string, int> rank;
    for (const auto& [w, r] : doc.ranks)
        if (!rank.emplace(w, r).second)
            throw Error("world '" + w + "' ranked twice");
    return make_similarity(std::move(worlds), std::move(valuation), *doc.actual, std::move(rank));
}

bool evaluate(const SimilarityModel& m, const std::string& world, const ModalFormula& f)
{
    switch (f.op) {
    case Op::atom: return atom_holds(f.atom, m.valuation.at(world));
    case Op::negation: return !evaluate(m, world, f.args[0]);
    case Op::conjunction: return evaluate(m, world, f.args[0]) && evaluate(m, world, f.args[1]);
    case Op::disjunction: return evaluate(m, world, f.args[0]) || evaluate(m, world, f.args[1]);
    case Op::implication: return !evaluate(m, world, f.args[0]) || evaluate(m, world, f.args[1]);
    default: throw Error("counterfactual formulas are propositional: " + render(f));
    }
}

std::set<std::string> closest(const SimilarityModel& m, const ModalFormula& a)
{
    std::set<std::string> out;
    int best = std::numeric_limits<int>::max();
    for (const auto& w : m.worlds) {
        if (!evaluate(m, w, a))
            continue;
        const int r = m.rank.at(w);
        if (r < best) {
            best = r;
            out.clear();
        }
        if (r == best)
            out.insert(w);
    }
    return out;
}

CounterfactualResult would(const SimilarityModel& m, const ModalFormula& a, const ModalFormula& b)
{
    const auto near = closest(m, a);
    if (near.empty())
        return {true, true};
    for (const auto& w : near)
        if (!evaluate(m, w, b))
            return {false, false};
    return {true, false};
}

CounterfactualResult might(const SimilarityModel& m, const ModalFormula& a, const ModalFormula& b)
{
    const auto near = closest(m, a);
    if (near.empty())
        return {false, true};
    for (const auto& w : near)
        if (evaluate(m, w, b))
            return {true, false};
    return {false, false};
}

bool but_for(const SimilarityModel& m, const ModalFormula& cause, const ModalFormula& effect)
{
    if (!evaluate(m, m.actual, cause))
        throw Error("but-for test needs the cause to hold at the actual world: " + render(cause));
    if (!evaluate(m, m.actual, effect))
        throw Error("but-for test needs the effect to hold at the actual world: " + render(effect));
    return would(m, !cause, !effect).holds;
}

} // namespace mvl
