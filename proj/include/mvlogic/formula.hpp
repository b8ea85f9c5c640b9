#pragma once

#include "mvlogic/term.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace mvl {

/// Formula AST covering boolean connectives, the alethic/deontic/doxastic
/// modalities and the past/future temporal operators.
///
/// `box`/`dia` carry a relation key (`alethic`, `deontic`, `belief(a)`);
/// `bel` carries the agent. Prefix syntax:
///
///     p(a)   (not F)   (and F G ...)   (or F G ...)   (implies F G)
///     (box F)   (box deontic F)   (dia F)   (dia belief(bob) F)
///     (ob F)  (pm F)  (fb F)   (bel alice F)
///     (always F)  (eventually F)  (hist F)  (past F)
struct ModalFormula {
    enum class Op {
        atom, negation, conjunction, disjunction, implication,
        box, dia, ob, pm, fb,
        always, eventually, hist, past,
        bel,
    };

    Op op = Op::atom;
    Term atom;                       // atom
    Term key;                        // box/dia relation key, bel agent
    std::vector<ModalFormula> args;

    static ModalFormula make_atom(Term a);
    static ModalFormula unary(Op op, ModalFormula f);
    static ModalFormula binary(Op op, ModalFormula a, ModalFormula b);
    static ModalFormula keyed(Op op, Term key, ModalFormula f);

    bool is_temporal() const;
    bool is_world_modal() const;
    /// True when the operator or any subformula is temporal / world modal.
    bool mentions_temporal() const;
    bool mentions_world_modal() const;

    friend bool operator==(const ModalFormula&, const ModalFormula&) = default;
};

ModalFormula operator!(ModalFormula f);
ModalFormula operator&&(ModalFormula a, ModalFormula b);
ModalFormula operator||(ModalFormula a, ModalFormula b);

Term alethic_key();
Term deontic_key();
Term belief_key(const Term& agent);

ModalFormula parse_formula(std::string_view text);
std::string render(const ModalFormula& f);

/// Applies a substitution to every atom.
ModalFormula substitute(const ModalFormula& f, const Substitution& s);
void collect_variables(const ModalFormula& f, std::set<std::string>& out);

} // namespace mvl
