#include "mvlogic/document.hpp"

#include "lexer.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace mvl {

using detail::Reader;
using detail::Tok;

ParseError::ParseError(const std::string& msg, int line, int column)
    : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
      message_(msg), line_(line), column_(column)
{
}

std::string default_label(std::size_t index)
{
    return "r" + std::to_string(index);
}

namespace {

struct Position {
    int line;
    int column;
};

std::string read_world_id(Reader& r)
{
    if (r.at(Tok::ident) || r.at(Tok::integer) || r.at(Tok::quoted))
        return r.next().text;
    r.fail("expected a world identifier");
}

std::vector<std::string> ident_set(Reader& r)
{
    r.expect(Tok::lbrace, "'{'");
    std::vector<std::string> out;
    if (r.accept(Tok::rbrace))
        return out;
    do {
        if (!r.at(Tok::ident) && !r.at(Tok::quoted))
            r.fail("expected a predicate name");
        out.push_back(r.next().text);
    } while (r.accept(Tok::comma));
    r.expect(Tok::rbrace, "'}'");
    return out;
}

std::vector<Term> term_set(Reader& r)
{
    r.expect(Tok::lbrace, "'{'");
    return r.term_list(Tok::rbrace);
}

std::string read_text_value(Reader& r)
{
    if (r.at(Tok::string) || r.at(Tok::quoted) || r.at(Tok::ident) || r.at(Tok::integer))
        return r.next().text;
    r.fail("expected a text value");
}

class DocumentParser {
public:
    explicit DocumentParser(std::string_view src) : r_(src) {}

    Document run()
    {
        while (!r_.at(Tok::end))
            statement();
        finish();
        return std::move(doc_);
    }

private:
    bool keyword(std::string_view kw, std::initializer_list<Tok> follow)
    {
        if (!r_.at_ident(kw))
            return false;
        for (Tok t : follow)
            if (r_.at(t, 1))
                return true;
        return false;
    }

    void statement()
    {
        r_.begin_statement();
        if (r_.at(Tok::if_)) {
            r_.next();
            doc_.kb.constraints.push_back(r_.literal_list());
            r_.expect(Tok::dot, "'.' after constraint");
            return;
        }
        if (r_.at_ident("entities") && r_.at(Tok::lparen, 1)) {
            r_.next();
            r_.next();
            r_.expect(Tok::lbracket, "'[' opening the entity role list");
            for (const auto& role : r_.term_list(Tok::rbracket)) {
                if (!role.is_constant())
                    r_.fail("entity roles must be plain identifiers");
                doc_.kb.entity_decls.push_back({role.name(), {}});
            }
            r_.expect(Tok::rparen, "')'");
            r_.accept(Tok::dot);
            return;
        }
        if (keyword("domain", {Tok::lbrace})) {
            r_.next();
            r_.expect(Tok::lbrace, "'{'");
            for (auto& c : r_.term_list(Tok::rbrace)) {
                if (!c.is_constant())
                    r_.fail("domain entries must be constants");
                doc_.kb.constant_domain.insert(std::move(c));
            }
            doc_.kb.has_domain_block = true;
            r_.accept(Tok::dot);
            return;
        }
        for (auto [kw, target] : {std::pair{"minimize", &doc_.minimized},
                                  std::pair{"fixed", &doc_.fixed},
                                  std::pair{"vary", &doc_.varied}}) {
            if (keyword(kw, {Tok::lbrace})) {
                r_.next();
                auto names = ident_set(r_);
                target->insert(target->end(), names.begin(), names.end());
                r_.accept(Tok::dot);
                return;
            }
        }
        if (keyword("sort", {Tok::ident})) {
            r_.next();
            SortDecl s;
            s.name = r_.expect(Tok::ident, "sort name").text;
            s.objects = term_set(r_);
            for (const auto& o : s.objects)
                if (!o.is_constant())
                    r_.fail("sort members must be constants");
            doc_.sorts.push_back(std::move(s));
            r_.accept(Tok::dot);
            return;
        }
        if (keyword("action", {Tok::ident, Tok::quoted})) {
            r_.next();
            action();
            return;
        }
        if (keyword("init", {Tok::lbrace})) {
            r_.next();
            auto atoms = term_set(r_);
            for (const auto& a : atoms)
                if (!a.is_ground())
                    r_.fail("initial state atoms must be ground");
            doc_.init = std::move(atoms);
            r_.accept(Tok::dot);
            return;
        }
        if (keyword("goal", {Tok::lbrace})) {
            r_.next();
            r_.expect(Tok::lbrace, "'{'");
            std::vector<Literal> g;
            if (!r_.accept(Tok::rbrace)) {
                g = r_.literal_list();
                r_.expect(Tok::rbrace, "'}'");
            }
            doc_.goal = std::move(g);
            r_.accept(Tok::dot);
            return;
        }
        if (keyword("world", {Tok::ident, Tok::integer, Tok::quoted})) {
            r_.next();
            WorldDecl w;
            w.id = read_world_id(r_);
            w.atoms = term_set(r_);
            doc_.worlds.push_back(std::move(w));
            r_.accept(Tok::dot);
            return;
        }
        if (keyword("rel", {Tok::ident})) {
            r_.next();
            RelationDecl rel;
            rel.key = r_.atom();
            rel.from = read_world_id(r_);
            rel.to = read_world_id(r_);
            doc_.relations.push_back(std::move(rel));
            r_.accept(Tok::dot);
            return;
        }
        if (keyword("actual", {Tok::ident, Tok::integer, Tok::quoted})) {
            r_.next();
            doc_.actual = read_world_id(r_);
            r_.accept(Tok::dot);
            return;
        }
        if (keyword("rank", {Tok::ident, Tok::integer, Tok::quoted})) {
            r_.next();
            std::string w = read_world_id(r_);
            auto tok = r_.expect(Tok::integer, "rank value");
            doc_.ranks.emplace_back(std::move(w), std::stoi(tok.text));
            r_.accept(Tok::dot);
            return;
        }
        if (keyword("story", {Tok::lbracket})) {
            r_.next();
            r_.expect(Tok::lbracket, "'['");
            for (auto& e : r_.term_list(Tok::rbracket)) {
                if (!e.is_ground())
                    r_.fail("story events must be ground");
                doc_.story.push_back(std::move(e));
            }
            r_.accept(Tok::dot);
            return;
        }
        if (keyword("infer", {Tok::ident, Tok::quoted})) {
            r_.next();
            GoalRuleDecl g;
            g.trigger = r_.atom();
            r_.expect(Tok::implies_arrow, "'=>'");
            g.goal = detail::read_formula(r_);
            r_.expect(Tok::dot, "'.'");
            std::set<std::string> trig, goal;
            collect_variables(g.trigger, trig);
            collect_variables(g.goal, goal);
            for (const auto& v : goal)
                if (v.rfind("_#", 0) != 0 && !trig.contains(v))
                    r_.fail("goal variable " + v + " does not occur in the trigger");
            doc_.goal_rules.push_back(std::move(g));
            return;
        }
        rule();
    }

    void action()
    {
        ActionSchema a;
        a.name = r_.next().text;
        if (r_.accept(Tok::lparen)) {
            do {
                TypedParam p;
                p.var = r_.expect(Tok::var, "parameter variable").text;
                r_.expect(Tok::colon, "':' before the parameter sort");
                p.sort = r_.expect(Tok::ident, "parameter sort").text;
                a.params.push_back(std::move(p));
            } while (r_.accept(Tok::comma));
            r_.expect(Tok::rparen, "')'");
        }
        for (;;) {
            if (r_.at_ident("pre")) {
                r_.next();
                auto lits = r_.literal_list();
                a.preconditions.insert(a.preconditions.end(), lits.begin(), lits.end());
            } else if (r_.at_ident("add") || r_.at_ident("del")) {
                bool add = r_.next().text == "add";
                auto& target = add ? a.adds : a.deletes;
                do {
                    target.push_back(r_.atom());
                } while (r_.accept(Tok::comma));
            } else {
                break;
            }
        }
        r_.expect(Tok::dot, "'.' ending the action");
        std::set<std::string> bound;
        for (const auto& p : a.params)
            bound.insert(p.var);
        for (const auto& l : a.preconditions)
            collect_variables(l, bound);
        for (const auto* list : {&a.adds, &a.deletes})
            for (const auto& t : *list) {
                std::set<std::string> vs;
                collect_variables(t, vs);
                for (const auto& v : vs)
                    if (!bound.contains(v))
                        r_.fail("effect variable " + v + " of action " + a.name +
                                " is neither a parameter nor bound by a precondition");
            }
        doc_.actions.push_back(std::move(a));
    }

    void rule()
    {
        const auto start = r_.peek();
        Rule rule;
        std::optional<std::string> label;
        if ((r_.at(Tok::ident) || r_.at(Tok::quoted)) && r_.at(Tok::colon, 1)) {
            label = r_.next().text;
            r_.next();
        }
        std::vector<Literal> lits;
        if (r_.at(Tok::defeasible_arrow)) {
            r_.next();
            rule.kind = RuleKind::defeasible;
            rule.head = r_.literal();
        } else {
            lits = r_.literal_list();
            if (r_.accept(Tok::if_)) {
                if (lits.size() != 1)
                    r_.fail(start, "a rule has exactly one head literal");
                rule.head = lits[0];
                rule.body = r_.literal_list();
            } else if (r_.accept(Tok::defeasible_arrow)) {
                rule.kind = RuleKind::defeasible;
                rule.body = std::move(lits);
                rule.head = r_.literal();
            } else {
                if (lits.size() != 1)
                    r_.fail(start, "expected ':-' or '~>' after a literal list");
                rule.head = lits[0];
            }
        }
        if (rule.head.sign == Sign::naf)
            r_.fail(start, "rule heads cannot use negation as failure");
        if (rule.head.is_builtin())
            r_.fail(start, "rule heads cannot be comparisons");

        RuleAnnotation ann;
        if (r_.accept(Tok::lbracket)) {
            do {
                auto key = r_.expect(Tok::ident, "attribute name");
                if (!r_.accept(Tok::eq)) {
                    auto tier = tier_from_name(key.text);
                    if (!tier)
                        r_.fail(key, "unknown attribute '" + key.text + "'");
                    rule.tier = *tier;
                    continue;
                }
                if (key.text == "tier") {
                    auto v = r_.expect(Tok::ident, "tier name");
                    auto tier = tier_from_name(v.text);
                    if (!tier)
                        r_.fail(v, "unknown entrenchment tier '" + v.text + "'");
                    rule.tier = *tier;
                } else if (key.text == "prio") {
                    rule.priority = std::stoi(r_.expect(Tok::integer, "priority").text);
                } else if (key.text == "label") {
                    label = read_text_value(r_);
                } else if (key.text == "rebut") {
                    r_.expect(Tok::lparen, "'(' opening the rebuttal");
                    ann.rebuttals.push_back(r_.literal_list());
                    r_.expect(Tok::rparen, "')'");
                } else if (key.text == "backing") {
                    ann.backing = read_text_value(r_);
                } else if (key.text == "qualifier") {
                    ann.qualifier = read_text_value(r_);
                } else {
                    r_.fail(key, "unknown attribute '" + key.text + "'");
                }
            } while (r_.accept(Tok::comma));
            r_.expect(Tok::rbracket, "']'");
        }
        r_.expect(Tok::dot, "'.' ending the rule");

        const std::size_t index = doc_.kb.rules.size();
        rule.label = label ? *label : default_label(index + 1);
        if (seen_labels_.contains(rule.label))
            r_.fail(start, "duplicate rule label '" + rule.label + "'");
        seen_labels_.insert(rule.label);
        if (ann != RuleAnnotation{})
            doc_.kb.annotations.emplace(rule.label, std::move(ann));
        positions_.push_back({start.line, start.column});
        doc_.kb.rules.push_back(std::move(rule));
    }

    void finish()
    {
        auto& kb = doc_.kb;
        if (kb.has_domain_block) {
            for (std::size_t i = 0; i < kb.rules.size(); ++i) {
                std::set<Term> cs;
                collect_constants(kb.rules[i].head.atom, cs);
                for (const auto& l : kb.rules[i].body)
                    collect_constants(l.atom, cs);
                for (const auto& c : cs)
                    if (!kb.constant_domain.contains(c))
                        throw ParseError("constant " + render(c) + " in rule '" + kb.rules[i].label +
                                             "' is outside the declared domain",
                                         positions_[i].line, positions_[i].column);
            }
        }
        finalize(kb);
    }

    Reader r_;
    Document doc_;
    std::set<std::string> seen_labels_;
    std::vector<Position> positions_;
};

std::string quote_string(const std::string& s)
{
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\')
            out += '\\';
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out += c;
    }
    return out + "\"";
}

template <class Range, class F>
std::string join(const Range& items, F&& f, std::string_view sep = ", ")
{
    std::string out;
    bool first = true;
    for (const auto& it : items) {
        if (!first)
            out += sep;
        first = false;
        out += f(it);
    }
    return out;
}

} // namespace

void finalize(KnowledgeBase& kb)
{
    std::set<std::string> labels;
    for (const auto& r : kb.rules)
        if (!labels.insert(r.label).second)
            throw Error("duplicate rule label '" + r.label + "'");

    for (auto& decl : kb.entity_decls) {
        decl.instances.clear();
        for (const auto& r : kb.rules)
            if (r.is_fact() && r.head.sign == Sign::positive && r.head.atom.is_compound() &&
                r.head.atom.name() == decl.role && r.head.atom.arity() == 1 && r.head.atom.is_ground())
                decl.instances.push_back(r.head.atom.args()[0]);
    }

    auto found = constants_of(kb);
    if (kb.has_domain_block) {
        for (const auto& c : found)
            if (!kb.constant_domain.contains(c))
                throw Error("constant " + render(c) + " is outside the declared domain");
    } else {
        kb.constant_domain = std::move(found);
    }
}

Document parse_document(std::string_view source)
{
    return DocumentParser(source).run();
}

KnowledgeBase parse_kb(std::string_view source)
{
    return parse_document(source).kb;
}

Document load_document(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_document(ss.str());
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.message(), e.line(), e.column());
    }
}

std::string render_rule(const Rule& rule, std::size_t index, const RuleAnnotation* ann)
{
    std::string out;
    if (rule.label != default_label(index))
        out += quote_if_needed(rule.label) + ": ";
    if (rule.kind == RuleKind::defeasible) {
        if (!rule.body.empty())
            out += render_rule_body(rule.body) + " ";
        out += "~> " + render(rule.head);
    } else {
        out += render(rule.head);
        if (!rule.body.empty())
            out += " :- " + render_rule_body(rule.body);
    }
    std::vector<std::string> attrs;
    if (rule.tier != Tier::personal)
        attrs.push_back("tier=" + std::string(tier_name(rule.tier)));
    if (rule.priority)
        attrs.push_back("prio=" + std::to_string(*rule.priority));
    if (ann) {
        for (const auto& reb : ann->rebuttals)
            attrs.push_back("rebut=(" + render_rule_body(reb) + ")");
        if (ann->backing)
            attrs.push_back("backing=" + quote_string(*ann->backing));
        if (ann->qualifier)
            attrs.push_back("qualifier=" + quote_string(*ann->qualifier));
    }
    if (!attrs.empty())
        out += " [" + join(attrs, [](const std::string& s) { return s; }) + "]";
    return out + ".";
}

std::string render(const KnowledgeBase& kb)
{
    std::ostringstream out;
    if (kb.has_domain_block)
        out << "domain {" << join(kb.constant_domain, [](const Term& t) { return render(t); }) << "}.\n";
    if (!kb.entity_decls.empty())
        out << "entities([" << join(kb.entity_decls, [](const EntityDecl& e) { return e.role; }) << "]).\n";
    for (std::size_t i = 0; i < kb.rules.size(); ++i) {
        auto it = kb.annotations.find(kb.rules[i].label);
        out << render_rule(kb.rules[i], i + 1, it == kb.annotations.end() ? nullptr : &it->second) << "\n";
    }
    for (const auto& c : kb.constraints)
        out << ":- " << render_rule_body(c) << ".\n";
    return out.str();
}

std::string render(const Document& doc)
{
    std::ostringstream out;
    auto names = [](const std::vector<std::string>& v) {
        return join(v, [](const std::string& s) { return quote_if_needed(s); });
    };
    auto terms = [](const std::vector<Term>& v) { return join(v, [](const Term& t) { return render(t); }); };
    auto world = [](const std::string& w) { return quote_if_needed(w); };

    out << render(doc.kb);
    if (!doc.minimized.empty())
        out << "minimize {" << names(doc.minimized) << "}.\n";
    if (!doc.fixed.empty())
        out << "fixed {" << names(doc.fixed) << "}.\n";
    if (!doc.varied.empty())
        out << "vary {" << names(doc.varied) << "}.\n";
    for (const auto& s : doc.sorts)
        out << "sort " << s.name << " {" << terms(s.objects) << "}.\n";
    for (const auto& a : doc.actions) {
        out << "action " << quote_if_needed(a.name);
        if (!a.params.empty())
            out << "(" << join(a.params, [](const TypedParam& p) { return p.var + ": " + p.sort; }) << ")";
        if (!a.preconditions.empty())
            out << "\n  pre " << render_rule_body(a.preconditions);
        if (!a.adds.empty())
            out << "\n  add " << terms(a.adds);
        if (!a.deletes.empty())
            out << "\n  del " << terms(a.deletes);
        out << ".\n";
    }
    if (doc.init)
        out << "init {" << terms(*doc.init) << "}.\n";
    if (doc.goal)
        out << "goal {" << render_rule_body(*doc.goal) << "}.\n";
    for (const auto& w : doc.worlds)
        out << "world " << world(w.id) << " {" << terms(w.atoms) << "}\n";
    for (const auto& r : doc.relations)
        out << "rel " << render(r.key) << " " << world(r.from) << " " << world(r.to) << "\n";
    if (doc.actual)
        out << "actual " << world(*doc.actual) << "\n";
    for (const auto& [w, rank] : doc.ranks)
        out << "rank " << world(w) << " " << rank << "\n";
    if (!doc.story.empty())
        out << "story [" << terms(doc.story) << "].\n";
    for (const auto& g : doc.goal_rules)
        out << "infer " << render(g.trigger) << " => " << render(g.goal) << ".\n";
    return out.str();
}

namespace {
template <class F>
auto parse_whole(std::string_view text, F&& f)
{
    Reader r(text);
    auto value = f(r);
    if (!r.at(Tok::end))
        r.fail("unexpected trailing input");
    return value;
}
} // namespace

Term parse_term(std::string_view text)
{
    return parse_whole(text, [](Reader& r) { return r.term(); });
}

Literal parse_literal(std::string_view text)
{
    return parse_whole(text, [](Reader& r) { return r.literal(); });
}

std::vector<Literal> parse_literals(std::string_view text)
{
    return parse_whole(text, [](Reader& r) {
        return r.at(Tok::end) ? std::vector<Literal>{} : r.literal_list();
    });
}

std::vector<Term> parse_terms(std::string_view text)
{
    return parse_whole(text, [](Reader& r) {
        std::vector<Term> out;
        if (r.at(Tok::end))
            return out;
        do {
            out.push_back(r.term());
        } while (r.accept(Tok::comma));
        return out;
    });
}

} // namespace mvl
