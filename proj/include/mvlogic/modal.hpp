#pragma once

// Kripke model checking for alethic, deontic and doxastic modalities, and
// linear temporal evaluation over finite traces.

#include "mvlogic/document.hpp"
#include "mvlogic/formula.hpp"

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace mvl {

using World = std::string;
using Relation = std::set<std::pair<World, World>>;

struct KripkeModel {
    std::set<World> worlds;
    /// Keyed by `alethic`, `deontic` or `belief(agent)`.
    std::map<Term, Relation> relations;
    std::map<World, std::set<Term>> valuation;

    friend bool operator==(const KripkeModel&, const KripkeModel&) = default;
};

/// Validates that relations and valuation only mention declared worlds and
/// fills empty valuations for worlds without atoms.
KripkeModel make_kripke(std::set<World> worlds, std::map<Term, Relation> relations,
                        std::map<World, std::set<Term>> valuation);

KripkeModel kripke_model(const Document& doc);

/// Relation key a world-modal operator quantifies over.
Term relation_key(const ModalFormula& f);

/// Atom truth in a state. Non-ground atoms are read existentially.
bool atom_holds(const Term& atom, const std::set<Term>& state);

bool check_world(const KripkeModel& model, const World& w, const ModalFormula& f);

using Trace = std::vector<std::set<Term>>;

bool check_trace(const Trace& trace, std::size_t i, const ModalFormula& f);

/// Rewrites into box/always/hist/bel/not/and over atoms, with double
/// negations collapsed.
ModalFormula dual_normalize(const ModalFormula& f);

} // namespace mvl
