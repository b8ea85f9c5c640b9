#pragma once

// Add/delete-effect planning with frame persistence and breadth-first
// search over ground states.

#include "mvlogic/document.hpp"
#include "mvlogic/modal.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace mvl {

inline constexpr std::size_t kMaxPlannerStates = 1'000'000;

using FluentState = std::set<Term>;
/// A ground action is the term `name(args...)` (a constant when nullary).
using GroundAction = Term;
using Plan = std::vector<GroundAction>;

struct PlanningProblem {
    FluentState initial;
    std::vector<Literal> goal;
    std::vector<ActionSchema> schemas;
    std::map<std::string, std::vector<Term>> objects;  // sort -> constants
    /// Static facts visible to preconditions and goals but never changed.
    std::set<Term> background;
};

class PreconditionError : public Error {
public:
    PreconditionError(const GroundAction& action, const Literal& violated);
    const GroundAction& action() const { return action_; }
    const Literal& violated() const { return violated_; }

private:
    GroundAction action_;
    Literal violated_;
};

/// Sorts come from `sort` blocks and entity roles; the background is the
/// least model of the document's rules. `init`/`goal` override the
/// document's own sections.
PlanningProblem planning_problem(const Document& doc, const std::optional<std::vector<Term>>& init = std::nullopt,
                                 const std::optional<std::vector<Literal>>& goal = std::nullopt);

/// First binding (in literal order, candidates in sorted order) that
/// satisfies every literal against state and background.
std::optional<Substitution> match_literals(const std::vector<Literal>& lits, const FluentState& state,
                                           const std::set<Term>& background, const Substitution& base = {});

bool goal_satisfied(const PlanningProblem& p, const FluentState& s);

/// (state \ deletes) u adds. Throws PreconditionError naming the first
/// unsatisfiable precondition.
FluentState apply_action(const FluentState& state, const GroundAction& action, const PlanningProblem& p);

/// Applicable ground actions with their successors, schemas in declaration
/// order and arguments in lexicographic order.
std::vector<std::pair<GroundAction, FluentState>> successors(const FluentState& state, const PlanningProblem& p);

/// Shortest plan, or nullopt if the goal is unreachable.
std::optional<Plan> plan_search(const PlanningProblem& p, std::size_t max_states = kMaxPlannerStates);

/// Every state reachable from the initial one.
std::set<FluentState> reachable_states(const PlanningProblem& p, std::size_t max_states = kMaxPlannerStates);

struct PlanReport {
    bool valid = false;
    /// 1-based index of the failing step; 0 means all steps applied and the
    /// goal check failed (or the plan is valid).
    std::size_t failing_step = 0;
    std::string reason;
};

PlanReport validate_plan(const PlanningProblem& p, const Plan& plan);

Trace trace_states(const PlanningProblem& p, const Plan& plan);

GroundAction parse_action(std::string_view text);
std::string render(const Plan& plan);

} // namespace mvl
