#include "mvlogic/term.hpp"

#include <algorithm>
#include <cctype>

namespace mvl {

Term Term::variable(std::string name)
{
    Term t;
    t.kind_ = Kind::variable;
    t.name_ = std::move(name);
    return t;
}

Term Term::constant(std::string name)
{
    Term t;
    t.kind_ = Kind::constant;
    t.name_ = std::move(name);
    return t;
}

Term Term::compound(std::string functor, std::vector<Term> args)
{
    if (args.empty())
        return constant(std::move(functor));
    Term t;
    t.kind_ = Kind::compound;
    t.name_ = std::move(functor);
    t.args_ = std::move(args);
    return t;
}

bool Term::is_ground() const
{
    if (kind_ == Kind::variable)
        return false;
    return std::all_of(args_.begin(), args_.end(), [](const Term& a) { return a.is_ground(); });
}

bool Term::is_anonymous() const
{
    return kind_ == Kind::variable && name_.size() > 1 && name_[0] == '_' && name_[1] == '#';
}

std::size_t Term::depth() const
{
    std::size_t d = 0;
    for (const auto& a : args_)
        d = std::max(d, a.depth());
    return d + 1;
}

std::strong_ordering operator<=>(const Term& a, const Term& b)
{
    if (auto c = a.kind_ <=> b.kind_; c != 0)
        return c;
    if (auto c = a.name_.compare(b.name_); c != 0)
        return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    if (auto c = a.args_.size() <=> b.args_.size(); c != 0)
        return c;
    for (std::size_t i = 0; i < a.args_.size(); ++i)
        if (auto c = a.args_[i] <=> b.args_[i]; c != 0)
            return c;
    return std::strong_ordering::equal;
}

PredicateKey predicate_of(const Term& atom)
{
    return {atom.name(), atom.arity()};
}

bool Literal::is_builtin() const
{
    return atom.is_compound() && atom.arity() == 2 && (atom.name() == "\\=" || atom.name() == "=");
}

Literal complement(const Literal& lit)
{
    switch (lit.sign) {
    case Sign::positive:
        return Literal::neg(lit.atom);
    case Sign::classical:
        return Literal::pos(lit.atom);
    case Sign::naf:
        break;
    }
    throw Error("naf literal has no classical complement: " + render(lit));
}

Term model_atom(const Literal& lit)
{
    if (lit.sign == Sign::classical)
        return Term::compound("-" + lit.atom.name(), lit.atom.args());
    return lit.atom;
}

Literal literal_of_model_atom(const Term& atom)
{
    if (!atom.is_variable() && !atom.name().empty() && atom.name()[0] == '-')
        return Literal::neg(Term::compound(atom.name().substr(1), atom.args()));
    return Literal::pos(atom);
}

namespace {
constexpr std::string_view kTierNames[] = {"logical", "physical", "economic", "legal",
                                           "social", "cultural", "personal"};
}

std::string_view tier_name(Tier t)
{
    return kTierNames[static_cast<std::size_t>(t)];
}

std::optional<Tier> tier_from_name(std::string_view name)
{
    for (std::size_t i = 0; i < std::size(kTierNames); ++i)
        if (kTierNames[i] == name)
            return static_cast<Tier>(i);
    return std::nullopt;
}

const Rule* KnowledgeBase::find_rule(std::string_view label) const
{
    for (const auto& r : rules)
        if (r.label == label)
            return &r;
    return nullptr;
}

void collect_constants(const Term& t, std::set<Term>& out)
{
    for (const auto& a : t.args()) {
        if (a.is_constant())
            out.insert(a);
        else
            collect_constants(a, out);
    }
}

void collect_variables(const Term& t, std::set<std::string>& out)
{
    if (t.is_variable()) {
        out.insert(t.name());
        return;
    }
    for (const auto& a : t.args())
        collect_variables(a, out);
}

void collect_variables(const Literal& l, std::set<std::string>& out)
{
    collect_variables(l.atom, out);
}

void collect_variables(const Rule& r, std::set<std::string>& out)
{
    collect_variables(r.head, out);
    for (const auto& l : r.body)
        collect_variables(l, out);
}

std::set<Term> constants_of(const KnowledgeBase& kb)
{
    std::set<Term> out;
    for (const auto& r : kb.rules) {
        collect_constants(r.head.atom, out);
        for (const auto& l : r.body)
            collect_constants(l.atom, out);
    }
    for (const auto& c : kb.constraints)
        for (const auto& l : c)
            collect_constants(l.atom, out);
    for (const auto& e : kb.entity_decls)
        for (const auto& i : e.instances) {
            if (i.is_constant())
                out.insert(i);
            else
                collect_constants(i, out);
        }
    return out;
}

// ---------------------------------------------------------------------------
// Substitution

const Term* Substitution::lookup(const std::string& var) const
{
    auto it = bindings_.find(var);
    return it == bindings_.end() ? nullptr : &it->second;
}

bool occurs_in(const std::string& var, const Term& t)
{
    if (t.is_variable())
        return t.name() == var;
    return std::any_of(t.args().begin(), t.args().end(),
                       [&](const Term& a) { return occurs_in(var, a); });
}

Term Substitution::apply(const Term& t) const
{
    if (bindings_.empty())
        return t;
    switch (t.kind()) {
    case Term::Kind::variable: {
        auto it = bindings_.find(t.name());
        return it == bindings_.end() ? t : it->second;
    }
    case Term::Kind::constant:
        return t;
    case Term::Kind::compound: {
        std::vector<Term> args;
        args.reserve(t.arity());
        for (const auto& a : t.args())
            args.push_back(apply(a));
        return Term::compound(t.name(), std::move(args));
    }
    }
    return t;
}

Literal Substitution::apply(const Literal& l) const
{
    return {apply(l.atom), l.sign};
}

Rule Substitution::apply(const Rule& r) const
{
    Rule out = r;
    out.head = apply(r.head);
    for (auto& l : out.body)
        l = apply(l);
    return out;
}

bool Substitution::bind(const std::string& var, const Term& t)
{
    Term value = apply(t);
    if (value.is_variable() && value.name() == var)
        return true;
    if (const Term* existing = lookup(var))
        return *existing == value;
    if (occurs_in(var, value))
        return false;
    Substitution single;
    single.bindings_.emplace(var, value);
    for (auto& [_, bound] : bindings_)
        bound = single.apply(bound);
    bindings_.emplace(var, std::move(value));
    return true;
}

Substitution Substitution::restrict_to(const std::set<std::string>& vars) const
{
    Substitution out;
    for (const auto& [v, t] : bindings_)
        if (vars.contains(v))
            out.bindings_.emplace(v, t);
    return out;
}

bool unify_into(const Term& a, const Term& b, Substitution& s)
{
    std::vector<std::pair<Term, Term>> work{{a, b}};
    while (!work.empty()) {
        auto [x, y] = std::move(work.back());
        work.pop_back();
        x = s.apply(x);
        y = s.apply(y);
        if (x == y)
            continue;
        if (x.is_variable()) {
            if (!s.bind(x.name(), y))
                return false;
        } else if (y.is_variable()) {
            if (!s.bind(y.name(), x))
                return false;
        } else if (x.kind() != y.kind() || x.name() != y.name() || x.arity() != y.arity()) {
            return false;
        } else {
            for (std::size_t i = 0; i < x.arity(); ++i)
                work.emplace_back(x.args()[i], y.args()[i]);
        }
    }
    return true;
}

std::optional<Substitution> unify(const Term& a, const Term& b)
{
    Substitution s;
    if (!unify_into(a, b, s))
        return std::nullopt;
    return s;
}

// ---------------------------------------------------------------------------
// Rendering

std::string quote_if_needed(const std::string& name)
{
    auto plain = [&] {
        if (name.empty())
            return false;
        if (std::islower(static_cast<unsigned char>(name[0])))
            return std::all_of(name.begin(), name.end(), [](char c) {
                return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
            });
        std::size_t i = name[0] == '-' ? 1 : 0;
        if (i == name.size())
            return false;
        return std::all_of(name.begin() + static_cast<std::ptrdiff_t>(i), name.end(),
                           [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
    };
    if (plain())
        return name;
    std::string out = "'";
    for (char c : name) {
        if (c == '\'' || c == '\\')
            out += '\\';
        out += c;
    }
    out += '\'';
    return out;
}

std::string render(const Term& t)
{
    switch (t.kind()) {
    case Term::Kind::variable:
        return t.is_anonymous() ? "_" : t.name();
    case Term::Kind::constant:
        return quote_if_needed(t.name());
    case Term::Kind::compound:
        break;
    }
    if (t.arity() == 2 && (t.name() == "\\=" || t.name() == "="))
        return render(t.args()[0]) + " " + t.name() + " " + render(t.args()[1]);
    std::string out = quote_if_needed(t.name()) + "(";
    for (std::size_t i = 0; i < t.arity(); ++i) {
        if (i)
            out += ", ";
        out += render(t.args()[i]);
    }
    return out + ")";
}

std::string render(const Literal& l)
{
    switch (l.sign) {
    case Sign::naf:
        return "not " + render(l.atom);
    case Sign::classical:
        return "neg " + render(l.atom);
    case Sign::positive:
        break;
    }
    return render(l.atom);
}

std::string render(const Substitution& s)
{
    std::string out = "{";
    bool first = true;
    for (const auto& [v, t] : s.bindings()) {
        if (!first)
            out += ", ";
        first = false;
        out += v + " = " + render(t);
    }
    return out + "}";
}

std::string render_rule_body(const std::vector<Literal>& body)
{
    std::string out;
    for (std::size_t i = 0; i < body.size(); ++i) {
        if (i)
            out += ", ";
        out += render(body[i]);
    }
    return out;
}

std::string render(const std::set<Term>& atoms)
{
    std::string out = "{";
    for (const auto& a : atoms)
        out += (out.size() > 1 ? ", " : "") + render(literal_of_model_atom(a));
    return out + "}";
}

} // namespace mvl
