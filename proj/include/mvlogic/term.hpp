#pragma once

// First-order syntax shared by every reasoning engine: terms, literals,
// rules, knowledge bases and substitutions.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mvl {

/// Base class for every error raised by the engine.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Term {
public:
    enum class Kind : std::uint8_t { variable, constant, compound };

    Term() = default;

    static Term variable(std::string name);
    static Term constant(std::string name);
    static Term compound(std::string functor, std::vector<Term> args);

    Kind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    const std::vector<Term>& args() const { return args_; }
    std::size_t arity() const { return args_.size(); }

    bool is_variable() const { return kind_ == Kind::variable; }
    bool is_constant() const { return kind_ == Kind::constant; }
    bool is_compound() const { return kind_ == Kind::compound; }
    bool is_ground() const;
    /// Anonymous variables (`_` in source) carry an internal name that
    /// cannot be typed and render back as `_`.
    bool is_anonymous() const;

    std::size_t depth() const;

    friend bool operator==(const Term&, const Term&) = default;
    friend std::strong_ordering operator<=>(const Term& a, const Term& b);

private:
    Kind kind_ = Kind::constant;
    std::string name_;
    std::vector<Term> args_;
};

/// Predicate identity of an atom: name plus arity.
struct PredicateKey {
    std::string name;
    std::size_t arity = 0;

    friend auto operator<=>(const PredicateKey&, const PredicateKey&) = default;
    std::string str() const { return name + "/" + std::to_string(arity); }
};

PredicateKey predicate_of(const Term& atom);

enum class Sign : std::uint8_t { positive, naf, classical };

struct Literal {
    Term atom;
    Sign sign = Sign::positive;

    static Literal pos(Term a) { return {std::move(a), Sign::positive}; }
    static Literal naf(Term a) { return {std::move(a), Sign::naf}; }
    static Literal neg(Term a) { return {std::move(a), Sign::classical}; }

    bool is_builtin() const;

    friend auto operator<=>(const Literal&, const Literal&) = default;
};

/// Literal with the opposite classical polarity (p <-> neg p). naf literals
/// have no classical complement.
Literal complement(const Literal& lit);

/// Encodes a positive or classically negated literal as a single atom so
/// models can store both polarities in one set.
Term model_atom(const Literal& lit);
Literal literal_of_model_atom(const Term& atom);

/// Strength levels for defeasible rules, strongest first.
enum class Tier : std::uint8_t { logical, physical, economic, legal, social, cultural, personal };

std::string_view tier_name(Tier t);
std::optional<Tier> tier_from_name(std::string_view name);

enum class RuleKind : std::uint8_t { strict, defeasible };

struct Rule {
    std::string label;
    Literal head;
    std::vector<Literal> body;
    RuleKind kind = RuleKind::strict;
    Tier tier = Tier::personal;
    std::optional<int> priority;

    bool is_fact() const { return body.empty(); }
    friend bool operator==(const Rule&, const Rule&) = default;
};

/// Toulmin metadata attached to a rule label in the DSL.
struct RuleAnnotation {
    std::optional<std::string> backing;
    std::vector<std::vector<Literal>> rebuttals;
    std::optional<std::string> qualifier;

    friend bool operator==(const RuleAnnotation&, const RuleAnnotation&) = default;
};

struct EntityDecl {
    std::string role;
    std::vector<Term> instances;

    friend bool operator==(const EntityDecl&, const EntityDecl&) = default;
};

struct KnowledgeBase {
    std::vector<Rule> rules;
    std::vector<EntityDecl> entity_decls;
    std::set<Term> constant_domain;
    bool has_domain_block = false;
    /// Integrity constraints `:- body.`; a model may not satisfy any body.
    std::vector<std::vector<Literal>> constraints;
    std::map<std::string, RuleAnnotation> annotations;
    /// Labels of rules that were added as hypotheses rather than asserted.
    std::set<std::string> assumptions;

    const Rule* find_rule(std::string_view label) const;
    friend bool operator==(const KnowledgeBase&, const KnowledgeBase&) = default;
};

/// Collects every constant occurring as an argument (at any depth) in `t`.
void collect_constants(const Term& t, std::set<Term>& out);
void collect_variables(const Term& t, std::set<std::string>& out);
void collect_variables(const Literal& l, std::set<std::string>& out);
void collect_variables(const Rule& r, std::set<std::string>& out);

/// Recomputes the constant domain from rules, constraints and entities.
std::set<Term> constants_of(const KnowledgeBase& kb);

/// Idempotent variable bindings. Every bound term is already fully
/// resolved against the other bindings.
class Substitution {
public:
    Substitution() = default;

    bool empty() const { return bindings_.empty(); }
    std::size_t size() const { return bindings_.size(); }
    const std::map<std::string, Term>& bindings() const { return bindings_; }
    const Term* lookup(const std::string& var) const;

    /// Adds var -> t. Fails (returns false) on an occurs-check violation or
    /// when var is already bound to something else.
    bool bind(const std::string& var, const Term& t);

    Term apply(const Term& t) const;
    Literal apply(const Literal& l) const;
    Rule apply(const Rule& r) const;

    /// Keeps only bindings for the given variables.
    Substitution restrict_to(const std::set<std::string>& vars) const;

    friend auto operator<=>(const Substitution&, const Substitution&) = default;

private:
    std::map<std::string, Term> bindings_;
};

bool occurs_in(const std::string& var, const Term& t);

/// Most general unifier with occurs check.
std::optional<Substitution> unify(const Term& a, const Term& b);
/// Unifies under an existing substitution, extending it.
bool unify_into(const Term& a, const Term& b, Substitution& s);

// Rendering in the .mvl surface syntax.
std::string render(const Term& t);
std::string render(const Literal& l);
std::string render(const Substitution& s);
/// `{a, neg b}` for a set of model atoms.
std::string render(const std::set<Term>& atoms);
std::string render_rule_body(const std::vector<Literal>& body);
std::string quote_if_needed(const std::string& name);

} // namespace mvl
