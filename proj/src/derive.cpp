#include "mvlogic/derive.hpp"

#include <algorithm>
#include <functional>

namespace mvl {

namespace {

std::string join_cycle(const std::vector<std::string>& cycle)
{
    std::string out;
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        if (i)
            out += " -> ";
        out += cycle[i];
    }
    return out;
}

constexpr std::size_t kMaxModelAtoms = 1'000'000;

} // namespace

StratificationError::StratificationError(std::vector<std::string> cycle)
    : Error("negation as failure is not stratified; cycle through negation: " + join_cycle(cycle)),
      cycle_(std::move(cycle))
{
}

GroundingError::GroundingError(const std::string& label, const std::string& msg)
    : Error("rule '" + label + "': " + msg), label_(label)
{
}

PredicateKey model_predicate(const Literal& l)
{
    if (l.sign == Sign::classical)
        return {"-" + l.atom.name(), l.atom.arity()};
    return predicate_of(l.atom);
}

std::map<PredicateKey, int> stratify(const std::vector<Rule>& rules)
{
    // Dependency graph body -> head; an edge is negative when it goes
    // through naf.
    std::map<PredicateKey, int> id;
    std::vector<PredicateKey> keys;
    auto node = [&](const PredicateKey& k) {
        auto [it, inserted] = id.emplace(k, static_cast<int>(keys.size()));
        if (inserted)
            keys.push_back(k);
        return it->second;
    };
    struct Edge {
        int to;
        bool negative;
    };
    std::vector<std::vector<Edge>> adj;
    auto ensure = [&] { adj.resize(keys.size()); };
    for (const auto& r : rules) {
        int h = node(model_predicate(r.head));
        ensure();
        for (const auto& l : r.body) {
            if (l.is_builtin())
                continue;
            int b = node(model_predicate(l));
            ensure();
            adj[static_cast<std::size_t>(b)].push_back({h, l.sign == Sign::naf});
        }
    }
    ensure();
    const int n = static_cast<int>(keys.size());

    // Tarjan's SCC.
    std::vector<int> index(static_cast<std::size_t>(n), -1), low(static_cast<std::size_t>(n), 0),
        comp(static_cast<std::size_t>(n), -1);
    std::vector<char> on_stack(static_cast<std::size_t>(n), 0);
    std::vector<int> stack;
    int counter = 0;
    int ncomp = 0;
    std::function<void(int)> strong = [&](int v) {
        auto uv = static_cast<std::size_t>(v);
        index[uv] = low[uv] = counter++;
        stack.push_back(v);
        on_stack[uv] = 1;
        for (const auto& e : adj[uv]) {
            auto ut = static_cast<std::size_t>(e.to);
            if (index[ut] < 0) {
                strong(e.to);
                low[uv] = std::min(low[uv], low[ut]);
            } else if (on_stack[ut]) {
                low[uv] = std::min(low[uv], index[ut]);
            }
        }
        if (low[uv] == index[uv]) {
            int w;
            do {
                w = stack.back();
                stack.pop_back();
                on_stack[static_cast<std::size_t>(w)] = 0;
                comp[static_cast<std::size_t>(w)] = ncomp;
            } while (w != v);
            ++ncomp;
        }
    };
    for (int v = 0; v < n; ++v)
        if (index[static_cast<std::size_t>(v)] < 0)
            strong(v);

    // A negative edge inside one component is a cycle through negation.
    for (int u = 0; u < n; ++u)
        for (const auto& e : adj[static_cast<std::size_t>(u)]) {
            if (!e.negative || comp[static_cast<std::size_t>(u)] != comp[static_cast<std::size_t>(e.to)])
                continue;
            // Path e.to ~> u within the component closes the cycle.
            std::vector<int> parent(static_cast<std::size_t>(n), -1);
            std::vector<int> frontier{e.to};
            parent[static_cast<std::size_t>(e.to)] = e.to;
            while (!frontier.empty() && parent[static_cast<std::size_t>(u)] < 0) {
                std::vector<int> next;
                for (int x : frontier)
                    for (const auto& f : adj[static_cast<std::size_t>(x)]) {
                        auto uf = static_cast<std::size_t>(f.to);
                        if (parent[uf] < 0 && comp[uf] == comp[static_cast<std::size_t>(u)]) {
                            parent[uf] = x;
                            next.push_back(f.to);
                        }
                    }
                frontier = std::move(next);
            }
            std::vector<std::string> cycle{keys[static_cast<std::size_t>(u)].str()};
            std::vector<std::string> back;
            for (int x = u; x != e.to; x = parent[static_cast<std::size_t>(x)])
                back.push_back(keys[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])].str());
            cycle.insert(cycle.end(), back.rbegin(), back.rend());
            cycle.push_back(keys[static_cast<std::size_t>(u)].str());
            if (u == e.to)
                cycle = {keys[static_cast<std::size_t>(u)].str(), keys[static_cast<std::size_t>(u)].str()};
            throw StratificationError(std::move(cycle));
        }

    // Tarjan emits components in reverse topological order.
    std::vector<int> comp_stratum(static_cast<std::size_t>(ncomp), 0);
    std::vector<std::vector<int>> members(static_cast<std::size_t>(ncomp));
    for (int v = 0; v < n; ++v)
        members[static_cast<std::size_t>(comp[static_cast<std::size_t>(v)])].push_back(v);
    for (int c = ncomp - 1; c >= 0; --c)
        for (int v : members[static_cast<std::size_t>(c)])
            for (const auto& e : adj[static_cast<std::size_t>(v)]) {
                auto tc = static_cast<std::size_t>(comp[static_cast<std::size_t>(e.to)]);
                comp_stratum[tc] = std::max(comp_stratum[tc],
                                            comp_stratum[static_cast<std::size_t>(c)] + (e.negative ? 1 : 0));
            }

    std::map<PredicateKey, int> out;
    for (int v = 0; v < n; ++v)
        out.emplace(keys[static_cast<std::size_t>(v)],
                    comp_stratum[static_cast<std::size_t>(comp[static_cast<std::size_t>(v)])]);
    return out;
}

bool eval_builtin(const Term& atom)
{
    if (!atom.is_ground())
        throw Error("comparison " + render(atom) + " is not ground when evaluated");
    const bool equal = atom.args()[0] == atom.args()[1];
    return atom.name() == "=" ? equal : !equal;
}

void for_each_assignment(const std::vector<std::string>& vars, const std::set<Term>& domain,
                         const Substitution& base, const std::function<void(const Substitution&)>& f)
{
    std::function<void(std::size_t, const Substitution&)> go = [&](std::size_t i, const Substitution& s) {
        if (i == vars.size()) {
            f(s);
            return;
        }
        if (s.lookup(vars[i])) {
            go(i + 1, s);
            return;
        }
        for (const auto& c : domain) {
            Substitution t = s;
            t.bind(vars[i], c);
            go(i + 1, t);
        }
    };
    go(0, base);
}

std::vector<std::pair<Substitution, Rule>> ground_rule(const Rule& rule, const std::set<Term>& domain)
{
    auto check = [&](const Literal& l) {
        for (const auto& a : l.atom.args())
            if (a.is_compound())
                throw GroundingError(rule.label, "nested compound term " + render(a) +
                                                     " cannot be grounded over a finite domain");
    };
    check(rule.head);
    for (const auto& l : rule.body)
        check(l);

    std::set<std::string> vs;
    collect_variables(rule, vs);
    std::vector<std::string> vars(vs.begin(), vs.end());
    std::vector<std::pair<Substitution, Rule>> out;
    for_each_assignment(vars, domain, {}, [&](const Substitution& s) {
        Rule g = s.apply(rule);
        std::vector<Literal> body;
        for (auto& l : g.body) {
            if (l.is_builtin()) {
                if (!eval_builtin(l.atom))
                    return;
                continue;
            }
            body.push_back(std::move(l));
        }
        g.body = std::move(body);
        out.emplace_back(s, std::move(g));
    });
    return out;
}

std::vector<Rule> ground(const KnowledgeBase& kb)
{
    std::vector<Rule> out;
    for (const auto& r : kb.rules)
        for (auto& [_, g] : ground_rule(r, kb.constant_domain))
            out.push_back(std::move(g));
    return out;
}

bool satisfied(const Literal& l, const std::set<Term>& model)
{
    if (l.is_builtin())
        return eval_builtin(l.atom);
    if (l.sign == Sign::naf)
        return !model.contains(l.atom);
    return model.contains(model_atom(l));
}

namespace {

class Evaluator {
public:
    Evaluator(const KnowledgeBase& kb) : kb_(kb) {}

    std::set<Term> run()
    {
        auto strata = stratify(kb_.rules);
        int top = 0;
        for (const auto& [_, s] : strata)
            top = std::max(top, s);
        std::vector<std::vector<const Rule*>> by_stratum(static_cast<std::size_t>(top) + 1);
        for (const auto& r : kb_.rules)
            by_stratum[static_cast<std::size_t>(strata.at(model_predicate(r.head)))].push_back(&r);

        for (const auto& rules : by_stratum) {
            bool changed = true;
            while (changed) {
                changed = false;
                for (const Rule* r : rules)
                    changed |= fire(*r);
            }
        }
        return std::move(model_);
    }

private:
    bool fire(const Rule& r)
    {
        std::vector<const Literal*> joins, checks;
        for (const auto& l : r.body)
            (l.sign != Sign::naf && !l.is_builtin() ? joins : checks).push_back(&l);
        std::vector<Term> produced;
        join(r, joins, 0, {}, checks, produced);
        bool changed = false;
        for (auto& t : produced)
            changed |= add(std::move(t));
        return changed;
    }

    void join(const Rule& r, const std::vector<const Literal*>& joins, std::size_t i, const Substitution& s,
              const std::vector<const Literal*>& checks, std::vector<Term>& produced)
    {
        if (i == joins.size()) {
            finish(r, s, checks, produced);
            return;
        }
        const Term pattern = s.apply(model_atom(*joins[i]));
        auto it = index_.find(predicate_of(pattern));
        if (it == index_.end())
            return;
        for (const auto& fact : it->second) {
            Substitution t = s;
            if (unify_into(pattern, fact, t))
                join(r, joins, i + 1, t, checks, produced);
        }
    }

    void finish(const Rule& r, const Substitution& s, const std::vector<const Literal*>& checks,
                std::vector<Term>& produced)
    {
        std::set<std::string> free;
        collect_variables(r.head, free);
        for (const auto* l : checks)
            collect_variables(*l, free);
        std::vector<std::string> unbound;
        for (const auto& v : free)
            if (!s.lookup(v))
                unbound.push_back(v);
        for_each_assignment(unbound, kb_.constant_domain, s, [&](const Substitution& full) {
            for (const auto* l : checks)
                if (!satisfied(full.apply(*l), model_))
                    return;
            Term head = full.apply(model_atom(r.head));
            if (!head.is_ground())
                throw GroundingError(r.label, "head " + render(r.head) + " is not ground after evaluation");
            produced.push_back(std::move(head));
        });
    }

    bool add(Term t)
    {
        if (model_.contains(t))
            return false;
        if (model_.size() >= kMaxModelAtoms)
            throw Error("derivation exceeded " + std::to_string(kMaxModelAtoms) + " atoms");
        index_[predicate_of(t)].insert(t);
        model_.insert(std::move(t));
        return true;
    }

    const KnowledgeBase& kb_;
    std::set<Term> model_;
    std::map<PredicateKey, std::set<Term>> index_;
};

} // namespace

std::set<Term> least_model(const KnowledgeBase& kb)
{
    return Evaluator(kb).run();
}

std::vector<Substitution> derive(const KnowledgeBase& kb, const Literal& query)
{
    const auto model = least_model(kb);
    std::set<std::string> qvars;
    collect_variables(query, qvars);
    std::set<Substitution> answers;

    if (query.sign == Sign::naf || query.is_builtin()) {
        std::vector<std::string> vars(qvars.begin(), qvars.end());
        for_each_assignment(vars, kb.constant_domain, {}, [&](const Substitution& s) {
            if (satisfied(s.apply(query), model))
                answers.insert(s);
        });
        return {answers.begin(), answers.end()};
    }

    const Term pattern = model_atom(query);
    const auto key = predicate_of(pattern);
    for (const auto& atom : model) {
        if (predicate_of(atom) != key)
            continue;
        if (auto s = unify(pattern, atom))
            answers.insert(s->restrict_to(qvars));
    }
    return {answers.begin(), answers.end()};
}

bool holds(const KnowledgeBase& kb, const Literal& query)
{
    return !derive(kb, query).empty();
}

// ---------------------------------------------------------------------------
// GroundProgram

int GroundProgram::intern(const Term& t)
{
    auto [it, inserted] = index_.emplace(t, static_cast<int>(atoms_.size()));
    if (inserted)
        atoms_.push_back(t);
    return it->second;
}

int GroundProgram::index_of(const Term& t) const
{
    auto it = index_.find(t);
    return it == index_.end() ? -1 : it->second;
}

GroundProgram GroundProgram::compile(const KnowledgeBase& kb, std::span<const Term> extra_atoms)
{
    GroundProgram p;
    const auto strata = stratify(kb.rules);
    for (const auto& r : ground(kb)) {
        Clause c;
        c.head = p.intern(model_atom(r.head));
        c.stratum = strata.at(model_predicate(r.head));
        p.max_stratum_ = std::max(p.max_stratum_, c.stratum);
        for (const auto& l : r.body)
            (l.sign == Sign::naf ? c.neg : c.pos).push_back(p.intern(model_atom(l.sign == Sign::naf
                                                                                    ? Literal::pos(l.atom)
                                                                                    : l)));
        p.clauses_.push_back(std::move(c));
    }
    for (const auto& body : kb.constraints) {
        std::set<std::string> vs;
        for (const auto& l : body)
            collect_variables(l, vs);
        std::vector<std::string> vars(vs.begin(), vs.end());
        for_each_assignment(vars, kb.constant_domain, {}, [&](const Substitution& s) {
            Constraint c;
            for (const auto& raw : body) {
                Literal l = s.apply(raw);
                if (l.is_builtin()) {
                    if (!eval_builtin(l.atom))
                        return;
                    continue;
                }
                if (l.sign == Sign::naf)
                    c.neg.push_back(p.intern(l.atom));
                else
                    c.pos.push_back(p.intern(model_atom(l)));
            }
            p.constraints_.push_back(std::move(c));
        });
    }
    for (const auto& t : extra_atoms)
        p.intern(t);

    for (std::size_t i = 0; i < p.atoms_.size(); ++i) {
        const Term& a = p.atoms_[i];
        if (!a.name().empty() && a.name()[0] == '-') {
            int j = p.index_of(Term::compound(a.name().substr(1), a.args()));
            if (j >= 0)
                p.complements_.emplace_back(j, static_cast<int>(i));
        }
    }

    if (p.atoms_.size() <= 32) {
        auto mask = [](const std::vector<int>& ids) {
            std::uint32_t m = 0;
            for (int i : ids)
                m |= 1u << i;
            return m;
        };
        for (const auto& c : p.clauses_)
            p.clause_masks_.push_back({mask(c.pos), mask(c.neg), 1u << c.head});
        for (const auto& c : p.constraints_)
            p.constraint_masks_.push_back({mask(c.pos), mask(c.neg), 0});
        for (auto [a, b] : p.complements_)
            p.complement_masks_.push_back((1u << a) | (1u << b));
    }
    return p;
}

std::vector<char> GroundProgram::least_model(std::span<const int> assumed) const
{
    std::vector<char> m(atoms_.size(), 0);
    for (int a : assumed)
        m[static_cast<std::size_t>(a)] = 1;
    for (int s = 0; s <= max_stratum_; ++s) {
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto& c : clauses_) {
                if (c.stratum != s || m[static_cast<std::size_t>(c.head)])
                    continue;
                bool fire = std::all_of(c.pos.begin(), c.pos.end(),
                                        [&](int i) { return m[static_cast<std::size_t>(i)] != 0; }) &&
                            std::none_of(c.neg.begin(), c.neg.end(),
                                         [&](int i) { return m[static_cast<std::size_t>(i)] != 0; });
                if (fire) {
                    m[static_cast<std::size_t>(c.head)] = 1;
                    changed = true;
                }
            }
        }
    }
    return m;
}

bool GroundProgram::violates_constraints(const std::vector<char>& m) const
{
    for (const auto& c : constraints_) {
        bool body = std::all_of(c.pos.begin(), c.pos.end(), [&](int i) { return m[static_cast<std::size_t>(i)] != 0; }) &&
                    std::none_of(c.neg.begin(), c.neg.end(), [&](int i) { return m[static_cast<std::size_t>(i)] != 0; });
        if (body)
            return true;
    }
    return false;
}

bool GroundProgram::is_model(std::uint32_t I) const
{
    for (const auto& m : clause_masks_)
        if ((I & m.pos) == m.pos && (I & m.neg) == 0 && (I & m.head) == 0)
            return false;
    for (const auto& m : constraint_masks_)
        if ((I & m.pos) == m.pos && (I & m.neg) == 0)
            return false;
    for (auto m : complement_masks_)
        if ((I & m) == m)
            return false;
    return true;
}

} // namespace mvl
