#pragma once

// Circumscription by abnormality minimization over a finite ground theory.

#include "mvlogic/kernels.hpp"
#include "mvlogic/term.hpp"

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace mvl {

inline constexpr std::size_t kMaxHerbrandBase = 24;

struct DefaultTheory {
    KnowledgeBase kb;
    std::set<std::string> minimized;
    std::set<std::string> fixed;
    std::set<std::string> varied;
};

/// Builds a theory, filling the partition: predicates with facts are fixed,
/// everything else not minimized varies. Explicit `fixed`/`varied` override.
DefaultTheory make_theory(KnowledgeBase kb, const std::set<std::string>& minimized,
                          const std::optional<std::set<std::string>>& fixed = std::nullopt,
                          const std::optional<std::set<std::string>>& varied = std::nullopt);

/// Every predicate name mentioned by the KB (classical negation folded).
std::set<std::string> predicate_names(const KnowledgeBase& kb);

using Model = std::set<Term>;

/// Models of the ground theory that are subset-minimal on the minimized
/// predicates among models agreeing on the fixed ones, and, within that,
/// subset-minimal on the varied predicates. Ordered deterministically.
std::vector<Model> minimal_models(const DefaultTheory& theory, Execution ex = Execution::parallel);

enum class Verdict { holds, fails, disputed };
std::string_view verdict_name(Verdict v);

/// Cautious reading: holds iff true in every minimal model, fails iff false
/// in every one, disputed otherwise.
Verdict circumscribed_entails(const DefaultTheory& theory, const Literal& query,
                              Execution ex = Execution::parallel);

} // namespace mvl
