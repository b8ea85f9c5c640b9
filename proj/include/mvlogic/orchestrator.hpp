#pragma once

// Staged composition of the reasoning engines over one document, and goal
// inference from story events.

#include "mvlogic/document.hpp"
#include "mvlogic/formula.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mvl {

using Json = nlohmann::ordered_json;

/// `kind` is one of circumscribe, defeasible, argue, abduce,
/// counterfactual, believe, plan.
struct StageSpec {
    std::string kind;
    Json config = Json::object();
};

struct Pipeline {
    std::vector<StageSpec> stages;
};

/// `{"stages": [{"stage": "circumscribe", "focus": ["at"]}, ...]}` or a
/// bare array of stage objects.
Pipeline parse_pipeline(std::string_view json_text);
Pipeline load_pipeline(const std::string& path);

struct StageReport {
    std::string stage;
    Json inputs = Json::object();
    Json outputs = Json::object();
    /// Rule labels, semantics names or world ids the outputs rest on.
    std::vector<std::string> provenance;
    std::optional<std::string> error;
};

struct PipelineResult {
    std::vector<StageReport> reports;
    Document document;
    bool ok = true;
};

/// Runs the stages in order, each on the document left by the previous
/// one. `query` serves as the default circumscribe/defeasible query,
/// abduction observation and planning goal. The first failing stage stops
/// the run; its report carries the error.
PipelineResult run_pipeline(const Document& doc, const Pipeline& pipeline,
                            const std::optional<std::vector<Literal>>& query = std::nullopt);

Json to_json(const StageReport& r);
Json to_json(const PipelineResult& r);

/// Instantiated goal formulas for every event matching a trigger, in event
/// order, without duplicates.
std::vector<std::pair<ModalFormula, Substitution>> infer_goals(const std::vector<GoalRuleDecl>& rules,
                                                               const std::vector<Term>& events);

/// Goal conjunction for the planner from `(eventually F)`, `(and ...)`,
/// atoms and negated atoms.
std::vector<Literal> goal_literals(const ModalFormula& f);

} // namespace mvl
