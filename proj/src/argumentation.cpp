#include "mvlogic/argumentation.hpp"

#include <algorithm>
#include <map>

namespace mvl {

using kernels::Mask;

namespace {

struct Indexed {
    std::vector<std::string> names;
    std::vector<Mask> attackers;  // attackers[i]: who attacks i
    std::vector<Mask> targets;    // targets[i]: whom i attacks

    explicit Indexed(const ArgFramework& af) : names(af.args.begin(), af.args.end())
    {
        std::map<std::string, int> idx;
        for (std::size_t i = 0; i < names.size(); ++i)
            idx[names[i]] = static_cast<int>(i);
        attackers.assign(names.size(), 0);
        targets.assign(names.size(), 0);
        for (const auto& [a, b] : af.attacks) {
            attackers[idx[b]] |= Mask{1} << idx[a];
            targets[idx[a]] |= Mask{1} << idx[b];
        }
    }

    int size() const { return static_cast<int>(names.size()); }

    Mask attacked_by(Mask s) const
    {
        Mask out = 0;
        for (int i = 0; i < size(); ++i)
            if (s & (Mask{1} << i))
                out |= targets[i];
        return out;
    }

    bool conflict_free(Mask s) const { return (attacked_by(s) & s) == 0; }

    Mask defended(Mask s) const
    {
        const Mask hit = attacked_by(s);
        Mask out = 0;
        for (int i = 0; i < size(); ++i)
            if ((attackers[i] & ~hit) == 0)
                out |= Mask{1} << i;
        return out;
    }

    ArgSet to_set(Mask m) const
    {
        ArgSet out;
        for (int i = 0; i < size(); ++i)
            if (m & (Mask{1} << i))
                out.insert(names[i]);
        return out;
    }
};

enum Tag : std::uint8_t { cf = 1, adm = 2, cmp = 4, stb = 8 };

std::vector<ArgSet> sorted(std::vector<ArgSet> v)
{
    std::sort(v.begin(), v.end(), extension_less);
    return v;
}

} // namespace

ArgFramework make_framework(std::set<std::string> args, std::set<std::pair<std::string, std::string>> attacks)
{
    for (const auto& [a, b] : attacks)
        for (const auto* x : {&a, &b})
            if (!args.contains(*x))
                throw Error("attack mentions undeclared argument '" + *x + "'");
    return ArgFramework{std::move(args), std::move(attacks)};
}

ArgFramework framework_from_kb(const KnowledgeBase& kb)
{
    ArgFramework af;
    for (const auto& r : kb.rules) {
        if (!r.is_fact() || r.head.sign != Sign::positive)
            continue;
        const Term& h = r.head.atom;
        auto name_of = [&](const Term& t) {
            if (!t.is_constant())
                throw Error("argument ids must be constants in '" + render(h) + "'");
            return t.name();
        };
        if (h.name() == "arg" && h.arity() == 1) {
            af.args.insert(name_of(h.args()[0]));
        } else if ((h.name() == "att" || h.name() == "attacks") && h.arity() == 2) {
            auto a = name_of(h.args()[0]), b = name_of(h.args()[1]);
            af.args.insert(a);
            af.args.insert(b);
            af.attacks.emplace(a, b);
        }
    }
    return af;
}

std::string_view semantics_name(Semantics s)
{
    switch (s) {
    case Semantics::conflict_free: return "conflict-free";
    case Semantics::admissible: return "admissible";
    case Semantics::complete: return "complete";
    case Semantics::grounded: return "grounded";
    case Semantics::preferred: return "preferred";
    case Semantics::stable: return "stable";
    }
    return "?";
}

std::optional<Semantics> semantics_from_name(std::string_view name)
{
    for (auto s : {Semantics::conflict_free, Semantics::admissible, Semantics::complete, Semantics::grounded,
                   Semantics::preferred, Semantics::stable})
        if (semantics_name(s) == name)
            return s;
    return std::nullopt;
}

bool conflict_free(const ArgFramework& af, const ArgSet& s)
{
    for (const auto& [a, b] : af.attacks)
        if (s.contains(a) && s.contains(b))
            return false;
    return true;
}

ArgSet char_fn(const ArgFramework& af, const ArgSet& s)
{
    std::map<std::string, std::vector<std::string>> attackers;
    ArgSet hit;
    for (const auto& [a, b] : af.attacks) {
        attackers[b].push_back(a);
        if (s.contains(a))
            hit.insert(b);
    }
    ArgSet out;
    for (const auto& x : af.args) {
        const auto& as = attackers[x];
        if (std::all_of(as.begin(), as.end(), [&](const std::string& y) { return hit.contains(y); }))
            out.insert(x);
    }
    return out;
}

ArgSet grounded_extension(const ArgFramework& af)
{
    ArgSet s;
    for (;;) {
        ArgSet next = char_fn(af, s);
        if (next == s)
            return s;
        s = std::move(next);
    }
}

std::vector<ArgSet> extensions(const ArgFramework& af, Semantics sem, Execution ex)
{
    if (sem == Semantics::grounded)
        return {grounded_extension(af)};
    if (af.args.size() > kMaxArguments)
        throw Error("framework has " + std::to_string(af.args.size()) + " arguments; " +
                    std::string(semantics_name(sem)) + " enumeration is bounded at " +
                    std::to_string(kMaxArguments));

    const Indexed ix(af);
    const Mask all = ix.size() == 0 ? 0 : static_cast<Mask>((std::uint64_t{1} << ix.size()) - 1);
    const auto tagged = kernels::classify_masks(ex, ix.size(), [&](Mask s) -> std::uint8_t {
        if (!ix.conflict_free(s))
            return 0;
        std::uint8_t t = cf;
        const Mask d = ix.defended(s);
        if ((s & d) == s)
            t |= adm;
        if (d == s)
            t |= cmp;
        if ((s | ix.attacked_by(s)) == all)
            t |= stb;
        return t;
    });

    const std::uint8_t want = sem == Semantics::conflict_free ? cf
                              : sem == Semantics::complete    ? cmp
                              : sem == Semantics::stable      ? stb
                                                              : adm;
    std::vector<Mask> masks;
    for (auto [m, t] : tagged)
        if (t & want)
            masks.push_back(m);
    if (sem == Semantics::preferred)
        masks = kernels::maximal_elements(std::move(masks));

    std::vector<ArgSet> out;
    for (Mask m : masks)
        out.push_back(ix.to_set(m));
    return sorted(std::move(out));
}

bool extension_less(const ArgSet& a, const ArgSet& b)
{
    if (a.size() != b.size())
        return a.size() < b.size();
    return a < b;
}

std::string render(const ArgSet& s)
{
    std::string out = "{";
    for (const auto& x : s)
        out += (out.size() > 1 ? ", " : "") + quote_if_needed(x);
    return out + "}";
}

} // namespace mvl
