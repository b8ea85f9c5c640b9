#pragma once

// Toulmin-style defeasible rules ranked by entrenchment tier and priority.

#include "mvlogic/term.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mvl {

inline constexpr std::string_view kDefaultQualifier = "presumably";

struct ToulminRule {
    Rule base;
    std::optional<std::string> backing;
    std::vector<std::vector<Literal>> rebuttals;
    std::string qualifier = std::string(kDefaultQualifier);

    friend bool operator==(const ToulminRule&, const ToulminRule&) = default;
};

/// The KB's defeasible rules with their annotations attached. Throws when a
/// rebuttal mentions a predicate the KB never uses.
std::vector<ToulminRule> toulmin_rules(const KnowledgeBase& kb);

enum class Strength { stronger, weaker, equal, incomparable };
std::string_view strength_name(Strength s);

/// Tier first, then priority when both rules carry one.
Strength compare_strength(const Rule& a, const Rule& b);
Strength compare_strength(const ToulminRule& a, const ToulminRule& b);

enum class Status { presumably_holds, defeated, not_derivable };
std::string_view status_name(Status s);

struct Justification {
    std::string rule;
    Literal conclusion;
    /// Rebuttal conditions of this rule instance (empty for strict rules).
    std::vector<std::vector<Literal>> rebuttals;
    std::vector<Justification> premises;
};

struct LabeledConclusion {
    Literal literal;
    Status status = Status::not_derivable;
    std::optional<std::string> defeater;
    std::optional<Justification> justification;
    std::string qualifier;
};

/// Strict rules come from `kb`; its defeasible rules are replaced by
/// `rules`. `q` must be ground and not naf.
LabeledConclusion conclude(const KnowledgeBase& kb, const std::vector<ToulminRule>& rules, const Literal& q);
LabeledConclusion conclude(const KnowledgeBase& kb, const Literal& q);

/// Every ground literal derivable when defeasible rules are read as strict,
/// each with its status.
std::vector<LabeledConclusion> conclude_all(const KnowledgeBase& kb);

std::string render(const Justification& j, int indent = 0);

} // namespace mvl
