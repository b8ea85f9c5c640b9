#pragma once

// Dung abstract argumentation frameworks.

#include "mvlogic/kernels.hpp"
#include "mvlogic/term.hpp"

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mvl {

inline constexpr std::size_t kMaxArguments = 20;

using ArgSet = std::set<std::string>;

struct ArgFramework {
    std::set<std::string> args;
    std::set<std::pair<std::string, std::string>> attacks;  // (attacker, target)

    friend bool operator==(const ArgFramework&, const ArgFramework&) = default;
};

/// Checks that every attack mentions declared arguments.
ArgFramework make_framework(std::set<std::string> args, std::set<std::pair<std::string, std::string>> attacks);

/// Reads `arg(a).`, `att(a,b).` and `attacks(a,b).` facts. Arguments named
/// only in attacks are declared implicitly.
ArgFramework framework_from_kb(const KnowledgeBase& kb);

enum class Semantics { conflict_free, admissible, complete, grounded, preferred, stable };

std::string_view semantics_name(Semantics s);
std::optional<Semantics> semantics_from_name(std::string_view name);

/// Arguments defended by S: every attacker is attacked by a member of S.
ArgSet char_fn(const ArgFramework& af, const ArgSet& s);

/// Least fixpoint of char_fn by iteration from the empty set.
ArgSet grounded_extension(const ArgFramework& af);

/// Every extension under `sem`, ordered by size and then member-wise.
/// Brute-force semantics need at most kMaxArguments arguments.
std::vector<ArgSet> extensions(const ArgFramework& af, Semantics sem, Execution ex = Execution::parallel);

bool conflict_free(const ArgFramework& af, const ArgSet& s);

/// Size-then-lexicographic order used for every extension listing.
bool extension_less(const ArgSet& a, const ArgSet& b);

std::string render(const ArgSet& s);

} // namespace mvl
