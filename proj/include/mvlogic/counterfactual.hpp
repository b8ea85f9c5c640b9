#pragma once

// Counterfactual conditionals over a ranked set of worlds centered on the
// actual one.

#include "mvlogic/document.hpp"
#include "mvlogic/formula.hpp"

#include <map>
#include <set>
#include <string>

namespace mvl {

struct SimilarityModel {
    std::set<std::string> worlds;
    std::map<std::string, std::set<Term>> valuation;
    std::string actual;
    /// Distance from the actual world; only the actual world has rank 0.
    std::map<std::string, int> rank;

    friend bool operator==(const SimilarityModel&, const SimilarityModel&) = default;
};

/// Checks centering and completeness of the ranking. The actual world gets
/// rank 0 when none is given.
SimilarityModel make_similarity(std::set<std::string> worlds, std::map<std::string, std::set<Term>> valuation,
                                std::string actual, std::map<std::string, int> rank);

SimilarityModel similarity_model(const Document& doc);

struct CounterfactualResult {
    bool holds = false;
    /// No world satisfies the antecedent.
    bool vacuous = false;
};

/// Boolean formula truth at a world (no modal or temporal operators).
bool evaluate(const SimilarityModel& m, const std::string& world, const ModalFormula& f);

/// A-worlds of minimal rank.
std::set<std::string> closest(const SimilarityModel& m, const ModalFormula& a);

CounterfactualResult would(const SimilarityModel& m, const ModalFormula& a, const ModalFormula& b);
CounterfactualResult might(const SimilarityModel& m, const ModalFormula& a, const ModalFormula& b);

/// would(not cause, not effect); both must hold at the actual world.
bool but_for(const SimilarityModel& m, const ModalFormula& cause, const ModalFormula& effect);

} // namespace mvl
