#include "mvlogic/minimize.hpp"

#include "mvlogic/derive.hpp"

#include <algorithm>
#include <map>

namespace mvl {

namespace {

std::string base_name(const std::string& name)
{
    return !name.empty() && name[0] == '-' ? name.substr(1) : name;
}

void add_predicate(const Literal& l, std::set<std::string>& out)
{
    if (!l.is_builtin())
        out.insert(l.atom.name());
}

std::string join(const std::set<std::string>& s)
{
    std::string out;
    for (const auto& x : s)
        out += (out.empty() ? "" : ", ") + x;
    return out;
}

} // namespace

std::set<std::string> predicate_names(const KnowledgeBase& kb)
{
    std::set<std::string> out;
    for (const auto& r : kb.rules) {
        add_predicate(r.head, out);
        for (const auto& l : r.body)
            add_predicate(l, out);
    }
    for (const auto& c : kb.constraints)
        for (const auto& l : c)
            add_predicate(l, out);
    return out;
}

DefaultTheory make_theory(KnowledgeBase kb, const std::set<std::string>& minimized,
                          const std::optional<std::set<std::string>>& fixed,
                          const std::optional<std::set<std::string>>& varied)
{
    const auto preds = predicate_names(kb);
    auto check_known = [&](const std::set<std::string>& names, const char* what) {
        for (const auto& n : names)
            if (!preds.contains(n))
                throw Error(std::string(what) + " predicate '" + n + "' does not occur in the knowledge base");
    };
    check_known(minimized, "minimized");

    DefaultTheory t;
    t.minimized = minimized;
    if (fixed)
        check_known(*fixed, "fixed");
    if (varied)
        check_known(*varied, "varied");

    for (const auto& p : preds) {
        if (minimized.contains(p))
            continue;
        bool in_fixed = fixed && fixed->contains(p);
        bool in_varied = varied && varied->contains(p);
        if (in_fixed && in_varied)
            throw Error("predicate '" + p + "' is both fixed and varied");
        if (!in_fixed && !in_varied) {
            if (fixed && varied)
                throw Error("predicate '" + p + "' is neither minimized, fixed nor varied");
            if (fixed)
                in_varied = true;
            else if (varied)
                in_fixed = true;
            else
                in_fixed = std::any_of(kb.rules.begin(), kb.rules.end(), [&](const Rule& r) {
                    return r.is_fact() && r.head.atom.name() == p;
                });
            in_varied = !in_fixed;
        }
        (in_fixed ? t.fixed : t.varied).insert(p);
    }
    for (const auto& p : minimized)
        if ((fixed && fixed->contains(p)) || (varied && varied->contains(p)))
            throw Error("predicate '" + p + "' is minimized and also fixed or varied");
    t.kb = std::move(kb);
    return t;
}

std::vector<Model> minimal_models(const DefaultTheory& theory, Execution ex)
{
    using kernels::Mask;
    const auto prog = GroundProgram::compile(theory.kb);
    const std::size_t n = prog.atom_count();
    if (n > kMaxHerbrandBase)
        throw Error("Herbrand base has " + std::to_string(n) + " atoms; the exhaustive bound is " +
                    std::to_string(kMaxHerbrandBase) + " (minimized: " + join(theory.minimized) + ")");

    Mask min_mask = 0, fix_mask = 0, var_mask = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto p = base_name(prog.atoms()[i].name());
        const Mask bit = Mask{1} << i;
        if (theory.minimized.contains(p))
            min_mask |= bit;
        else if (theory.fixed.contains(p))
            fix_mask |= bit;
        else
            var_mask |= bit;
    }

    const auto models = kernels::filter_masks(ex, static_cast<int>(n), [&](Mask m) { return prog.is_model(m); });

    // Stage 1: minimal on the minimized part among models with equal fixed part.
    std::map<Mask, std::vector<Mask>> by_fixed;
    for (Mask m : models)
        by_fixed[m & fix_mask].push_back(m & min_mask);
    std::map<Mask, std::set<Mask>> minimal_min;
    for (auto& [f, mins] : by_fixed) {
        auto kept = kernels::minimal_elements(mins);
        minimal_min[f] = {kept.begin(), kept.end()};
    }

    // Stage 2: minimal on the varied part within each (fixed, minimized) group.
    std::map<std::pair<Mask, Mask>, std::vector<Mask>> by_group;
    for (Mask m : models)
        if (minimal_min[m & fix_mask].contains(m & min_mask))
            by_group[{m & fix_mask, m & min_mask}].push_back(m & var_mask);

    std::vector<Mask> chosen;
    for (auto& [key, vars] : by_group)
        for (Mask v : kernels::minimal_elements(vars))
            chosen.push_back(key.first | key.second | v);
    std::sort(chosen.begin(), chosen.end());

    std::vector<Model> out;
    for (Mask m : chosen) {
        Model model;
        for (std::size_t i = 0; i < n; ++i)
            if (m & (Mask{1} << i))
                model.insert(prog.atoms()[i]);
        out.push_back(std::move(model));
    }
    return out;
}

std::string_view verdict_name(Verdict v)
{
    switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::fails: return "fails";
    case Verdict::disputed: return "disputed";
    }
    return "?";
}

Verdict circumscribed_entails(const DefaultTheory& theory, const Literal& query, Execution ex)
{
    if (!query.atom.is_ground())
        throw Error("query must be ground: " + render(query));
    const auto models = minimal_models(theory, ex);
    if (models.empty())
        throw Error("theory has no models");
    std::size_t yes = 0;
    for (const auto& m : models)
        yes += satisfied(query, m) ? 1 : 0;
    if (yes == models.size())
        return Verdict::holds;
    if (yes == 0)
        return Verdict::fails;
    return Verdict::disputed;
}

} // namespace mvl
