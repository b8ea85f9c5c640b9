#include "mvlogic/defeasible.hpp"

#include "mvlogic/derive.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace mvl {

std::vector<ToulminRule> toulmin_rules(const KnowledgeBase& kb)
{
    std::set<std::string> preds;
    for (const auto& r : kb.rules) {
        preds.insert(r.head.atom.name());
        for (const auto& l : r.body)
            preds.insert(l.atom.name());
    }
    std::vector<ToulminRule> out;
    for (const auto& r : kb.rules) {
        if (r.kind != RuleKind::defeasible)
            continue;
        ToulminRule t{r, std::nullopt, {}, std::string(kDefaultQualifier)};
        if (auto it = kb.annotations.find(r.label); it != kb.annotations.end()) {
            t.backing = it->second.backing;
            t.rebuttals = it->second.rebuttals;
            if (it->second.qualifier)
                t.qualifier = *it->second.qualifier;
        }
        for (const auto& reb : t.rebuttals)
            for (const auto& l : reb)
                if (!l.is_builtin() && !preds.contains(l.atom.name()))
                    throw Error("rebuttal of rule '" + r.label + "' mentions undeclared predicate '" +
                                l.atom.name() + "'");
        out.push_back(std::move(t));
    }
    return out;
}

std::string_view strength_name(Strength s)
{
    switch (s) {
    case Strength::stronger: return "stronger";
    case Strength::weaker: return "weaker";
    case Strength::equal: return "equal";
    case Strength::incomparable: return "incomparable";
    }
    return "?";
}

Strength compare_strength(const Rule& a, const Rule& b)
{
    if (a.label == b.label)
        return Strength::equal;
    if (a.tier != b.tier)
        return a.tier < b.tier ? Strength::stronger : Strength::weaker;
    if (a.priority && b.priority && *a.priority != *b.priority)
        return *a.priority > *b.priority ? Strength::stronger : Strength::weaker;
    return Strength::incomparable;
}

Strength compare_strength(const ToulminRule& a, const ToulminRule& b)
{
    return compare_strength(a.base, b.base);
}

std::string_view status_name(Status s)
{
    switch (s) {
    case Status::presumably_holds: return "presumably-holds";
    case Status::defeated: return "defeated";
    case Status::not_derivable: return "not-derivable";
    }
    return "?";
}

namespace {

struct Instance {
    const Rule* rule = nullptr;
    const ToulminRule* toulmin = nullptr;  // null for strict rules
    Rule ground;
    std::vector<std::vector<Literal>> rebuttals;
    Term head;  // model atom
};

class Engine {
public:
    Engine(const KnowledgeBase& kb, const std::vector<ToulminRule>& rules) : rules_(rules)
    {
        KnowledgeBase all = kb;
        all.rules.clear();
        for (const auto& r : kb.rules)
            if (r.kind == RuleKind::strict)
                all.rules.push_back(r);
        for (const auto& t : rules) {
            Rule r = t.base;
            r.kind = RuleKind::defeasible;
            all.rules.push_back(std::move(r));
        }
        for (const auto& r : all.rules)
            collect_constants_of(r, all.constant_domain);
        support_ = least_model(all);
        rules_all_ = std::move(all.rules);

        std::map<std::string, const ToulminRule*> by_label;
        for (const auto& t : rules)
            by_label[t.base.label] = &t;
        for (const auto& r : rules_all_) {
            const ToulminRule* t = r.kind == RuleKind::defeasible ? by_label.at(r.label) : nullptr;
            for (auto& [sub, g] : ground_rule(r, all.constant_domain)) {
                Instance in;
                in.rule = &r;
                in.toulmin = t;
                in.head = model_atom(g.head);
                if (t)
                    for (const auto& reb : t->rebuttals) {
                        std::vector<Literal> inst;
                        for (const auto& l : reb)
                            inst.push_back(sub.apply(l));
                        in.rebuttals.push_back(std::move(inst));
                    }
                in.ground = std::move(g);
                instances_.push_back(std::move(in));
            }
        }
        for (const auto& in : instances_)
            blocker_.push_back(find_blocker(in));
        accept();
    }

    const std::set<Term>& support() const { return support_; }
    const std::set<Term>& accepted() const { return accepted_; }

    LabeledConclusion status(const Literal& q) const
    {
        LabeledConclusion c;
        c.literal = q;
        const Term a = model_atom(q);
        if (accepted_.contains(a)) {
            c.status = Status::presumably_holds;
            std::set<Term> seen;
            c.justification = justify(a, seen);
            c.qualifier = qualifier_of(*c.justification);
            return c;
        }
        if (!support_.contains(a))
            return c;
        c.status = Status::defeated;
        std::set<Term> seen;
        c.defeater = defeater_of(a, seen);
        return c;
    }

private:
    const std::vector<ToulminRule>& rules_;
    std::vector<Rule> rules_all_;
    std::vector<Instance> instances_;
    std::vector<std::optional<std::string>> blocker_;
    std::set<Term> support_;
    std::set<Term> accepted_;
    std::map<Term, std::size_t> first_derivation_;

    static void collect_constants_of(const Rule& r, std::set<Term>& out)
    {
        for (const auto& a : r.head.atom.args())
            collect_constants(a, out);
        for (const auto& l : r.body)
            for (const auto& a : l.atom.args())
                collect_constants(a, out);
    }

    bool naf_ok(const Rule& g) const
    {
        for (const auto& l : g.body)
            if (l.sign == Sign::naf && support_.contains(l.atom))
                return false;
        return true;
    }

    bool applicable(const Rule& g, const std::set<Term>& base) const
    {
        for (const auto& l : g.body)
            if (l.sign != Sign::naf && !base.contains(model_atom(l)))
                return false;
        return naf_ok(g);
    }

    std::optional<std::string> find_blocker(const Instance& in) const
    {
        if (!in.toulmin)
            return std::nullopt;
        const Term contrary = model_atom(complement(in.ground.head));
        for (const auto& other : instances_) {
            if (other.head != contrary || !applicable(other.ground, support_))
                continue;
            if (!other.toulmin)
                return other.rule->label;
            const Strength s = compare_strength(*other.rule, *in.rule);
            if (s == Strength::stronger || s == Strength::incomparable)
                return other.rule->label;
        }
        for (const auto& reb : in.rebuttals)
            if (auto who = rebuttal_source(reb))
                return who->empty() ? "rebuttal of " + in.rule->label : *who;
        return std::nullopt;
    }

    /// Label of the rule deriving the first literal of a satisfied rebuttal.
    std::optional<std::string> rebuttal_source(const std::vector<Literal>& reb) const
    {
        std::vector<Literal> positives;
        for (const auto& l : reb)
            if (l.sign != Sign::naf && !l.is_builtin())
                positives.push_back(l);
        std::optional<std::string> found;
        std::function<void(std::size_t, Substitution)> rec = [&](std::size_t k, Substitution s) {
            if (found)
                return;
            if (k == reb.size()) {
                for (const auto& l : positives) {
                    const Term a = model_atom(s.apply(l));
                    for (const auto& in : instances_)
                        if (in.head == a && applicable(in.ground, support_)) {
                            found = in.rule->label;
                            return;
                        }
                }
                found = "";
                return;
            }
            const Literal l = s.apply(reb[k]);
            if (l.is_builtin()) {
                if (l.atom.is_ground() && eval_builtin(l.atom))
                    rec(k + 1, s);
                return;
            }
            if (l.sign == Sign::naf) {
                if (l.atom.is_ground() ? !support_.contains(l.atom)
                                       : std::none_of(support_.begin(), support_.end(),
                                                      [&](const Term& t) { return unify(l.atom, t).has_value(); }))
                    rec(k + 1, s);
                return;
            }
            const Term pattern = model_atom(l);
            for (const auto& t : support_) {
                Substitution next = s;
                if (unify_into(pattern, t, next))
                    rec(k + 1, next);
                if (found)
                    return;
            }
        };
        rec(0, {});
        return found;
    }

    void accept()
    {
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t i = 0; i < instances_.size(); ++i) {
                const auto& in = instances_[i];
                if (blocker_[i] || accepted_.contains(in.head) || !applicable(in.ground, accepted_))
                    continue;
                accepted_.insert(in.head);
                first_derivation_.emplace(in.head, i);
                changed = true;
            }
        }
    }

    Justification justify(const Term& a, std::set<Term>& seen) const
    {
        const auto& in = instances_[first_derivation_.at(a)];
        Justification j{in.rule->label, in.ground.head, in.rebuttals, {}};
        seen.insert(a);
        for (const auto& l : in.ground.body)
            if (l.sign != Sign::naf && !l.is_builtin() && !seen.contains(model_atom(l)))
                j.premises.push_back(justify(model_atom(l), seen));
        return j;
    }

    std::string qualifier_of(const Justification& j) const
    {
        for (const auto& t : rules_)
            if (t.base.label == j.rule)
                return t.qualifier;
        for (const auto& p : j.premises) {
            auto q = qualifier_of(p);
            if (!q.empty())
                return q;
        }
        return "";
    }

    std::optional<std::string> defeater_of(const Term& a, std::set<Term>& seen) const
    {
        if (!seen.insert(a).second)
            return std::nullopt;
        for (std::size_t i = 0; i < instances_.size(); ++i) {
            const auto& in = instances_[i];
            if (in.head != a || !applicable(in.ground, support_))
                continue;
            if (blocker_[i])
                return blocker_[i];
        }
        for (const auto& in : instances_) {
            if (in.head != a || !applicable(in.ground, support_))
                continue;
            for (const auto& l : in.ground.body)
                if (l.sign != Sign::naf && !accepted_.contains(model_atom(l)))
                    if (auto d = defeater_of(model_atom(l), seen))
                        return d;
        }
        return std::nullopt;
    }
};

} // namespace

LabeledConclusion conclude(const KnowledgeBase& kb, const std::vector<ToulminRule>& rules, const Literal& q)
{
    if (q.sign == Sign::naf || q.is_builtin())
        throw Error("defeasible queries are positive or classically negated literals: " + render(q));
    if (!q.atom.is_ground())
        throw Error("defeasible query must be ground: " + render(q));
    return Engine(kb, rules).status(q);
}

LabeledConclusion conclude(const KnowledgeBase& kb, const Literal& q)
{
    return conclude(kb, toulmin_rules(kb), q);
}

std::vector<LabeledConclusion> conclude_all(const KnowledgeBase& kb)
{
    const auto rules = toulmin_rules(kb);
    Engine e(kb, rules);
    std::vector<LabeledConclusion> out;
    for (const auto& a : e.support())
        out.push_back(e.status(literal_of_model_atom(a)));
    return out;
}

std::string render(const Justification& j, int indent)
{
    std::string out(static_cast<std::size_t>(indent) * 2, ' ');
    out += render(j.conclusion) + "  [" + j.rule + "]\n";
    for (const auto& p : j.premises)
        out += render(p, indent + 1);
    return out;
}

} // namespace mvl
