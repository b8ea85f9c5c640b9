#include "mvlogic/abduction.hpp"

#include "mvlogic/derive.hpp"
#include "mvlogic/document.hpp"
#include "mvlogic/minimize.hpp"

#include <algorithm>

namespace mvl {

AbductionProblem make_abduction(KnowledgeBase kb, std::set<Term> abducibles, std::vector<Literal> observation,
                                std::vector<std::vector<Literal>> constraints)
{
    if (abducibles.size() > kMaxAbducibles)
        throw Error(std::to_string(abducibles.size()) + " abducibles exceed the bound of " +
                    std::to_string(kMaxAbducibles));
    for (const auto& a : abducibles) {
        if (!a.is_ground() || a.is_variable())
            throw Error("abducible " + render(a) + " is not a ground atom");
        for (const auto& r : kb.rules)
            if (r.head.sign == Sign::positive && unify(r.head.atom, a))
                throw Error("abducible " + render(a) + " is the head of rule '" + r.label + "'");
    }
    auto vocab = predicate_names(kb);
    for (const auto& a : abducibles)
        vocab.insert(a.name());
    if (observation.empty())
        throw Error("observation is empty");
    for (const auto& l : observation) {
        if (!l.atom.is_ground())
            throw Error("observation literal " + render(l) + " is not ground");
        if (!l.is_builtin() && !vocab.contains(l.atom.name()))
            throw Error("observation predicate '" + l.atom.name() + "' does not occur in the knowledge base");
    }
    for (const auto& a : abducibles)
        collect_constants(a, kb.constant_domain);
    for (const auto& l : observation)
        collect_constants(l.atom, kb.constant_domain);
    return AbductionProblem{std::move(kb), std::move(abducibles), std::move(observation), std::move(constraints)};
}

KnowledgeBase with_hypothesis(const KnowledgeBase& kb, const Hypothesis& h)
{
    KnowledgeBase out = kb;
    std::size_t n = 0;
    for (const auto& a : h) {
        std::string label;
        do {
            label = "hyp" + std::to_string(++n);
        } while (out.find_rule(label));
        out.rules.push_back(Rule{label, Literal::pos(a), {}, RuleKind::strict, Tier::personal, std::nullopt});
        out.assumptions.insert(label);
        collect_constants(a, out.constant_domain);
    }
    return out;
}

bool explains(const AbductionProblem& p, const Hypothesis& h)
{
    KnowledgeBase kb = with_hypothesis(p.kb, h);
    for (const auto& l : p.observation)
        if (!holds(kb, l))
            return false;
    auto constraints = kb.constraints;
    constraints.insert(constraints.end(), p.constraints.begin(), p.constraints.end());
    kb.constraints.clear();
    const Term violation = Term::constant("$violation");
    for (const auto& c : constraints)
        kb.rules.push_back(Rule{"$constraint" + std::to_string(kb.rules.size()), Literal::pos(violation), c,
                                RuleKind::strict, Tier::personal, std::nullopt});
    return !holds(kb, Literal::pos(violation));
}

std::vector<Hypothesis> explanations(const AbductionProblem& p, Execution ex)
{
    using kernels::Mask;
    KnowledgeBase kb = p.kb;
    kb.constraints.insert(kb.constraints.end(), p.constraints.begin(), p.constraints.end());

    const std::vector<Term> abd(p.abducibles.begin(), p.abducibles.end());
    std::vector<Term> extra = abd;
    for (const auto& l : p.observation)
        if (!l.is_builtin())
            extra.push_back(l.sign == Sign::naf ? l.atom : model_atom(l));
    const auto prog = GroundProgram::compile(kb, extra);

    std::vector<int> abd_index;
    for (const auto& a : abd)
        abd_index.push_back(prog.index_of(a));

    auto valid = [&](Mask m) {
        std::vector<int> assumed;
        for (std::size_t i = 0; i < abd.size(); ++i)
            if (m & (Mask{1} << i))
                assumed.push_back(abd_index[i]);
        const auto model = prog.least_model(assumed);
        if (prog.violates_constraints(model))
            return false;
        for (const auto& l : p.observation) {
            if (l.is_builtin()) {
                if (!eval_builtin(l.atom))
                    return false;
                continue;
            }
            const int i = prog.index_of(l.sign == Sign::naf ? l.atom : model_atom(l));
            const bool present = model[static_cast<std::size_t>(i)] != 0;
            if (present == (l.sign == Sign::naf))
                return false;
        }
        return true;
    };

    std::vector<Hypothesis> out;
    for (Mask m : kernels::minimal_masks(ex, static_cast<int>(abd.size()), valid)) {
        Hypothesis h;
        for (std::size_t i = 0; i < abd.size(); ++i)
            if (m & (Mask{1} << i))
                h.insert(abd[i]);
        out.push_back(std::move(h));
    }
    std::sort(out.begin(), out.end(), [](const Hypothesis& a, const Hypothesis& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    return out;
}

} // namespace mvl
