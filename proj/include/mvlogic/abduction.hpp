#pragma once

// Minimal abductive explanations over declared abducible atoms.

#include "mvlogic/kernels.hpp"
#include "mvlogic/term.hpp"

#include <set>
#include <vector>

namespace mvl {

inline constexpr std::size_t kMaxAbducibles = 20;

struct AbductionProblem {
    KnowledgeBase kb;
    std::set<Term> abducibles;
    std::vector<Literal> observation;
    /// Forbidden conjunctions, in addition to the KB's own constraints.
    std::vector<std::vector<Literal>> constraints;
};

/// Validates: abducibles ground and never rule heads, observation ground
/// and over the KB's vocabulary, at most kMaxAbducibles abducibles.
AbductionProblem make_abduction(KnowledgeBase kb, std::set<Term> abducibles, std::vector<Literal> observation,
                                std::vector<std::vector<Literal>> constraints = {});

using Hypothesis = std::set<Term>;

/// Subset-minimal hypothesis sets, ordered by size and then member-wise.
std::vector<Hypothesis> explanations(const AbductionProblem& p, Execution ex = Execution::parallel);

/// kb + h derives the observation and violates no constraint. Evaluated
/// through `derive`, independently of the enumeration.
bool explains(const AbductionProblem& p, const Hypothesis& h);

/// The KB with `h` added as facts.
KnowledgeBase with_hypothesis(const KnowledgeBase& kb, const Hypothesis& h);

} // namespace mvl
