#pragma once

// The `.mvl` source format. A document holds one knowledge base plus the
// optional sections the other engines read: minimization directives,
// action schemas, Kripke/similarity worlds, and story events.

#include "mvlogic/formula.hpp"
#include "mvlogic/term.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mvl {

class ParseError : public Error {
public:
    ParseError(const std::string& msg, int line, int column);
    int line() const { return line_; }
    int column() const { return column_; }
    const std::string& message() const { return message_; }

private:
    std::string message_;
    int line_;
    int column_;
};

struct TypedParam {
    std::string var;
    std::string sort;
    friend bool operator==(const TypedParam&, const TypedParam&) = default;
};

/// STRIPS-style operator: typed parameters, preconditions, add and delete
/// lists. Variables that appear only in preconditions are bound by matching
/// against the current state.
struct ActionSchema {
    std::string name;
    std::vector<TypedParam> params;
    std::vector<Literal> preconditions;
    std::vector<Term> adds;
    std::vector<Term> deletes;
    friend bool operator==(const ActionSchema&, const ActionSchema&) = default;
};

struct SortDecl {
    std::string name;
    std::vector<Term> objects;
    friend bool operator==(const SortDecl&, const SortDecl&) = default;
};

struct WorldDecl {
    std::string id;
    std::vector<Term> atoms;
    friend bool operator==(const WorldDecl&, const WorldDecl&) = default;
};

struct RelationDecl {
    Term key;
    std::string from;
    std::string to;
    friend bool operator==(const RelationDecl&, const RelationDecl&) = default;
};

/// `infer trigger => formula.`
struct GoalRuleDecl {
    Term trigger;
    ModalFormula goal;
    friend bool operator==(const GoalRuleDecl&, const GoalRuleDecl&) = default;
};

struct Document {
    KnowledgeBase kb;

    std::vector<std::string> minimized;
    std::vector<std::string> fixed;
    std::vector<std::string> varied;

    std::vector<SortDecl> sorts;
    std::vector<ActionSchema> actions;
    std::optional<std::vector<Term>> init;
    std::optional<std::vector<Literal>> goal;

    std::vector<WorldDecl> worlds;
    std::vector<RelationDecl> relations;
    std::optional<std::string> actual;
    std::vector<std::pair<std::string, int>> ranks;

    std::vector<Term> story;
    std::vector<GoalRuleDecl> goal_rules;

    friend bool operator==(const Document&, const Document&) = default;
};

Document parse_document(std::string_view source);
KnowledgeBase parse_kb(std::string_view source);
Document load_document(const std::string& path);

std::string render(const Document& doc);
std::string render(const KnowledgeBase& kb);
/// `index` is 1-based; a label equal to default_label(index) is left out.
std::string render_rule(const Rule& rule, std::size_t index, const RuleAnnotation* ann);

/// Rebuilds derived fields (entity instances, constant domain) and checks
/// label uniqueness and the domain block after programmatic edits.
void finalize(KnowledgeBase& kb);

/// Label a rule receives when the source gives none (1-based index).
std::string default_label(std::size_t index);

Term parse_term(std::string_view text);
Literal parse_literal(std::string_view text);
/// Comma separated literals, e.g. `a, not b(X), neg c`.
std::vector<Literal> parse_literals(std::string_view text);
std::vector<Term> parse_terms(std::string_view text);

} // namespace mvl
