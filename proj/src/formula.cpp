#include "mvlogic/formula.hpp"

#include "lexer.hpp"

#include <map>

namespace mvl {

using detail::Reader;
using detail::Tok;
using Op = ModalFormula::Op;

ModalFormula ModalFormula::make_atom(Term a)
{
    ModalFormula f;
    f.op = Op::atom;
    f.atom = std::move(a);
    return f;
}

ModalFormula ModalFormula::unary(Op op, ModalFormula g)
{
    ModalFormula f;
    f.op = op;
    if (op == Op::box || op == Op::dia)
        f.key = alethic_key();
    f.args.push_back(std::move(g));
    return f;
}

ModalFormula ModalFormula::binary(Op op, ModalFormula a, ModalFormula b)
{
    ModalFormula f;
    f.op = op;
    f.args.push_back(std::move(a));
    f.args.push_back(std::move(b));
    return f;
}

ModalFormula ModalFormula::keyed(Op op, Term key, ModalFormula g)
{
    ModalFormula f;
    f.op = op;
    f.key = std::move(key);
    f.args.push_back(std::move(g));
    return f;
}

bool ModalFormula::is_temporal() const
{
    return op == Op::always || op == Op::eventually || op == Op::hist || op == Op::past;
}

bool ModalFormula::is_world_modal() const
{
    return op == Op::box || op == Op::dia || op == Op::ob || op == Op::pm || op == Op::fb ||
           op == Op::bel;
}

bool ModalFormula::mentions_temporal() const
{
    if (is_temporal())
        return true;
    for (const auto& a : args)
        if (a.mentions_temporal())
            return true;
    return false;
}

bool ModalFormula::mentions_world_modal() const
{
    if (is_world_modal())
        return true;
    for (const auto& a : args)
        if (a.mentions_world_modal())
            return true;
    return false;
}

ModalFormula operator!(ModalFormula f)
{
    return ModalFormula::unary(Op::negation, std::move(f));
}

ModalFormula operator&&(ModalFormula a, ModalFormula b)
{
    return ModalFormula::binary(Op::conjunction, std::move(a), std::move(b));
}

ModalFormula operator||(ModalFormula a, ModalFormula b)
{
    return ModalFormula::binary(Op::disjunction, std::move(a), std::move(b));
}

Term alethic_key()
{
    return Term::constant("alethic");
}

Term deontic_key()
{
    return Term::constant("deontic");
}

Term belief_key(const Term& agent)
{
    return Term::compound("belief", {agent});
}

namespace {

const std::map<std::string, Op, std::less<>>& unary_ops()
{
    static const std::map<std::string, Op, std::less<>> ops = {
        {"not", Op::negation}, {"ob", Op::ob},           {"pm", Op::pm},
        {"fb", Op::fb},        {"always", Op::always},   {"eventually", Op::eventually},
        {"hist", Op::hist},    {"past", Op::past},
    };
    return ops;
}

const char* op_name(Op op)
{
    switch (op) {
    case Op::atom: return "atom";
    case Op::negation: return "not";
    case Op::conjunction: return "and";
    case Op::disjunction: return "or";
    case Op::implication: return "implies";
    case Op::box: return "box";
    case Op::dia: return "dia";
    case Op::ob: return "ob";
    case Op::pm: return "pm";
    case Op::fb: return "fb";
    case Op::always: return "always";
    case Op::eventually: return "eventually";
    case Op::hist: return "hist";
    case Op::past: return "past";
    case Op::bel: return "bel";
    }
    return "?";
}

} // namespace

namespace detail {

ModalFormula read_formula(Reader& r)
{
    if (!r.at(Tok::lparen))
        return ModalFormula::make_atom(r.atom());
    auto open = r.next();
    auto op_tok = r.expect(Tok::ident, "formula operator");
    const std::string& op = op_tok.text;

    std::vector<ModalFormula> items;
    Term agent;
    if (op == "bel")
        agent = r.term();
    while (!r.at(Tok::rparen)) {
        if (r.at(Tok::end))
            r.fail(open, "unterminated formula");
        items.push_back(read_formula(r));
    }
    r.next();

    auto arity = [&](std::size_t n) {
        if (items.size() != n)
            r.fail(op_tok, "operator '" + op + "' takes " + std::to_string(n) + " argument(s)");
    };

    if (auto it = unary_ops().find(op); it != unary_ops().end()) {
        arity(1);
        return ModalFormula::unary(it->second, std::move(items[0]));
    }
    if (op == "and" || op == "or") {
        if (items.size() < 2)
            r.fail(op_tok, "operator '" + op + "' takes at least two arguments");
        const Op kind = op == "and" ? Op::conjunction : Op::disjunction;
        ModalFormula acc = std::move(items.back());
        for (std::size_t i = items.size() - 1; i-- > 0;)
            acc = ModalFormula::binary(kind, std::move(items[i]), std::move(acc));
        return acc;
    }
    if (op == "implies") {
        arity(2);
        return ModalFormula::binary(Op::implication, std::move(items[0]), std::move(items[1]));
    }
    if (op == "box" || op == "dia") {
        const Op kind = op == "box" ? Op::box : Op::dia;
        if (items.size() == 1)
            return ModalFormula::unary(kind, std::move(items[0]));
        if (items.size() == 2 && items[0].op == Op::atom)
            return ModalFormula::keyed(kind, items[0].atom, std::move(items[1]));
        r.fail(op_tok, "expected (" + op + " F) or (" + op + " relation F)");
    }
    if (op == "bel") {
        arity(1);
        return ModalFormula::keyed(Op::bel, std::move(agent), std::move(items[0]));
    }
    r.fail(op_tok, "unknown formula operator '" + op + "'");
}

} // namespace detail

ModalFormula parse_formula(std::string_view text)
{
    Reader r(text);
    auto f = detail::read_formula(r);
    if (!r.at(Tok::end))
        r.fail("unexpected trailing input after formula");
    return f;
}

std::string render(const ModalFormula& f)
{
    if (f.op == Op::atom)
        return render(f.atom);
    std::string out = "(";
    out += op_name(f.op);
    if (f.op == Op::bel)
        out += " " + render(f.key);
    if ((f.op == Op::box || f.op == Op::dia) && f.key != alethic_key())
        out += " " + render(f.key);
    for (const auto& a : f.args)
        out += " " + render(a);
    return out + ")";
}

ModalFormula substitute(const ModalFormula& f, const Substitution& s)
{
    ModalFormula out = f;
    if (f.op == Op::atom)
        out.atom = s.apply(f.atom);
    for (auto& a : out.args)
        a = substitute(a, s);
    return out;
}

void collect_variables(const ModalFormula& f, std::set<std::string>& out)
{
    if (f.op == Op::atom)
        collect_variables(f.atom, out);
    for (const auto& a : f.args)
        collect_variables(a, out);
}

} // namespace mvl
