#pragma once

// Grounding and stratified bottom-up derivation with negation as failure.

#include "mvlogic/term.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace mvl {

class StratificationError : public Error {
public:
    explicit StratificationError(std::vector<std::string> cycle);
    const std::vector<std::string>& cycle() const { return cycle_; }

private:
    std::vector<std::string> cycle_;
};

class GroundingError : public Error {
public:
    GroundingError(const std::string& label, const std::string& msg);
    const std::string& rule_label() const { return label_; }

private:
    std::string label_;
};

/// Predicate keys as used in models: classical negation is folded into the
/// name (`-p/1`).
PredicateKey model_predicate(const Literal& l);

/// Stratum per model predicate; rules for a predicate only read lower strata
/// through naf. Throws StratificationError listing the offending cycle.
std::map<PredicateKey, int> stratify(const std::vector<Rule>& rules);

/// Evaluates a ground builtin (`=`, `\=`).
bool eval_builtin(const Term& atom);

/// Enumerates every assignment of `vars` over `domain`, in lexicographic
/// order of the sorted domain. Calls `f` with each extension of `base`.
void for_each_assignment(const std::vector<std::string>& vars, const std::set<Term>& domain,
                         const Substitution& base, const std::function<void(const Substitution&)>& f);

/// All ground instances of the KB's rules over its constant domain. Ground
/// builtins are evaluated away; instances with a false builtin are dropped.
std::vector<Rule> ground(const KnowledgeBase& kb);
/// Ground instances of one rule, paired with the substitution producing each.
std::vector<std::pair<Substitution, Rule>> ground_rule(const Rule& rule, const std::set<Term>& domain);

/// Stratified least model, as a set of model atoms (see `model_atom`).
std::set<Term> least_model(const KnowledgeBase& kb);

/// All answers to `query` in the stratified least model. An empty result
/// means "not derivable"; a single empty substitution means "holds".
std::vector<Substitution> derive(const KnowledgeBase& kb, const Literal& query);
bool holds(const KnowledgeBase& kb, const Literal& query);

/// Whether a ground literal (positive, classical or naf) is satisfied by a
/// model given as model atoms.
bool satisfied(const Literal& ground_literal, const std::set<Term>& model);

/// Propositional form of a grounded KB, indexed for fast repeated
/// evaluation by the enumeration kernels.
class GroundProgram {
public:
    struct Clause {
        int head = -1;
        std::vector<int> pos;
        std::vector<int> neg;  // naf body atoms
        int stratum = 0;
    };
    struct Constraint {
        std::vector<int> pos;
        std::vector<int> neg;
    };

    static GroundProgram compile(const KnowledgeBase& kb, std::span<const Term> extra_atoms = {});

    std::size_t atom_count() const { return atoms_.size(); }
    const std::vector<Term>& atoms() const { return atoms_; }
    /// -1 when absent.
    int index_of(const Term& model_atom) const;
    const std::vector<Clause>& clauses() const { return clauses_; }
    const std::vector<Constraint>& constraints() const { return constraints_; }
    /// Index pairs (p, -p) that may not both hold.
    const std::vector<std::pair<int, int>>& complements() const { return complements_; }

    /// Stratified least model with `assumed` atoms added as facts.
    std::vector<char> least_model(std::span<const int> assumed = {}) const;
    bool violates_constraints(const std::vector<char>& model) const;

    /// Classical satisfaction of every clause and constraint by a bitmask
    /// interpretation (only valid when atom_count() <= 32).
    bool is_model(std::uint32_t interpretation) const;

private:
    std::vector<Term> atoms_;
    std::map<Term, int> index_;
    std::vector<Clause> clauses_;
    std::vector<Constraint> constraints_;
    std::vector<std::pair<int, int>> complements_;
    int max_stratum_ = 0;

    struct Masks {
        std::uint32_t pos = 0, neg = 0, head = 0;
    };
    std::vector<Masks> clause_masks_;
    std::vector<Masks> constraint_masks_;
    std::vector<std::uint32_t> complement_masks_;

    int intern(const Term& t);
};

} // namespace mvl
