#pragma once

// Scenario access, seeded generators and brute-force oracles shared by the
// test binaries. Oracles here never call the engine they check.

#include "mvlogic/document.hpp"
#include "mvlogic/planner.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace mvt {

inline std::string scenario(const std::string& name)
{
    return std::string(MVLOGIC_SCENARIOS) + "/" + name;
}

inline mvl::Document load_scenario(const std::string& name)
{
    return mvl::load_document(scenario(name));
}

inline std::vector<std::string> scenario_files()
{
    return {"accident.mvl", "accident_independent.mvl", "alice_bob.mvl", "c32.mvl", "chain.mvl",
            "choice.mvl", "cycle3.mvl", "deontic.mvl", "exam.mvl", "garden.mvl", "graduation.mvl",
            "monkey.mvl", "monkey_noisy.mvl", "property.mvl", "robot.mvl", "story.mvl", "tweety.mvl",
            "tweety_penguin.mvl", "umbrella.mvl"};
}

using Rng = std::mt19937;

inline mvl::Term c(const std::string& s) { return mvl::Term::constant(s); }
inline mvl::Term v(const std::string& s) { return mvl::Term::variable(s); }
inline mvl::Term f(const std::string& s, std::vector<mvl::Term> a) { return mvl::Term::compound(s, std::move(a)); }

// --- monkey and bananas, hand-coded --------------------------------------
//
// State: (monkey location, on box?, box location, has banana?). The four
// transitions follow the original Prolog clauses; walk and push_box are
// restricted to distinct locations.

struct MonkeyState {
    int monkey = 0;
    bool on_box = false;
    int box = 0;
    bool banana = false;
    auto operator<=>(const MonkeyState&) const = default;
};

inline constexpr std::array<const char*, 3> kMonkeyLocs = {"at_door", "at_window", "at_center"};

inline std::vector<MonkeyState> monkey_moves(const MonkeyState& s)
{
    std::vector<MonkeyState> out;
    if (s.monkey == 2 && s.box == 2 && s.on_box && !s.banana)
        out.push_back({s.monkey, true, s.box, true});
    if (!s.on_box && s.monkey == s.box)
        out.push_back({s.monkey, true, s.box, s.banana});
    for (int to = 0; to < 3; ++to) {
        if (to == s.monkey)
            continue;
        if (!s.on_box && s.monkey == s.box)
            out.push_back({to, false, to, s.banana});
        if (!s.on_box)
            out.push_back({to, false, s.box, s.banana});
    }
    return out;
}

inline std::vector<MonkeyState> all_monkey_states()
{
    std::vector<MonkeyState> out;
    for (int m = 0; m < 3; ++m)
        for (int h = 0; h < 2; ++h)
            for (int b = 0; b < 3; ++b)
                for (int g = 0; g < 2; ++g)
                    out.push_back({m, h == 1, b, g == 1});
    return out;
}

/// BFS distances from `start` over the full 36-state space.
inline std::map<MonkeyState, int> monkey_distances(const MonkeyState& start)
{
    std::map<MonkeyState, int> dist{{start, 0}};
    std::deque<MonkeyState> q{start};
    while (!q.empty()) {
        const auto s = q.front();
        q.pop_front();
        for (const auto& n : monkey_moves(s))
            if (dist.emplace(n, dist[s] + 1).second)
                q.push_back(n);
    }
    return dist;
}

inline std::set<mvl::Term> monkey_fluents(const MonkeyState& s)
{
    return {f("at", {c("monkey"), c(kMonkeyLocs[static_cast<std::size_t>(s.monkey)])}),
            f("at", {c("box"), c(kMonkeyLocs[static_cast<std::size_t>(s.box)])}),
            c(s.on_box ? "on_box" : "on_ground"), c(s.banana ? "has_banana" : "no_banana")};
}

// --- abstract argumentation, by definition --------------------------------

struct AfOracle {
    std::vector<std::string> args;
    std::set<std::pair<std::string, std::string>> att;

    std::set<std::string> set_of(unsigned m) const
    {
        std::set<std::string> s;
        for (std::size_t i = 0; i < args.size(); ++i)
            if (m >> i & 1u)
                s.insert(args[i]);
        return s;
    }
    bool attacks(const std::set<std::string>& s, const std::string& b) const
    {
        return std::any_of(s.begin(), s.end(), [&](const std::string& a) { return att.contains({a, b}); });
    }
    bool conflict_free(const std::set<std::string>& s) const
    {
        return std::none_of(s.begin(), s.end(), [&](const std::string& b) { return attacks(s, b); });
    }
    bool defends(const std::set<std::string>& s, const std::string& a) const
    {
        for (const auto& b : args)
            if (att.contains({b, a}) && !attacks(s, b))
                return false;
        return true;
    }
    bool admissible(const std::set<std::string>& s) const
    {
        return conflict_free(s) && std::all_of(s.begin(), s.end(), [&](const std::string& a) { return defends(s, a); });
    }
    bool complete(const std::set<std::string>& s) const
    {
        if (!admissible(s))
            return false;
        for (const auto& a : args)
            if (!s.contains(a) && defends(s, a))
                return false;
        return true;
    }
    bool stable(const std::set<std::string>& s) const
    {
        if (!conflict_free(s))
            return false;
        for (const auto& a : args)
            if (!s.contains(a) && !attacks(s, a))
                return false;
        return true;
    }
    std::vector<std::set<std::string>> all(bool (AfOracle::*pred)(const std::set<std::string>&) const) const
    {
        std::vector<std::set<std::string>> out;
        for (unsigned m = 0; m < (1u << args.size()); ++m)
            if ((this->*pred)(set_of(m)))
                out.push_back(set_of(m));
        return out;
    }
    /// Least complete extension: the complete one contained in all others.
    std::set<std::string> grounded() const
    {
        const auto cs = all(&AfOracle::complete);
        for (const auto& s : cs)
            if (std::all_of(cs.begin(), cs.end(),
                            [&](const auto& t) { return std::includes(t.begin(), t.end(), s.begin(), s.end()); }))
                return s;
        return {};
    }
    std::vector<std::set<std::string>> preferred() const
    {
        const auto as = all(&AfOracle::admissible);
        std::vector<std::set<std::string>> out;
        for (const auto& s : as)
            if (std::none_of(as.begin(), as.end(), [&](const auto& t) {
                    return t.size() > s.size() && std::includes(t.begin(), t.end(), s.begin(), s.end());
                }))
                out.push_back(s);
        return out;
    }
};

inline AfOracle random_af(Rng& rng, std::size_t max_args = 8)
{
    AfOracle o;
    const auto n = std::uniform_int_distribution<std::size_t>(1, max_args)(rng);
    for (std::size_t i = 0; i < n; ++i)
        o.args.push_back("a" + std::to_string(i));
    std::bernoulli_distribution edge(0.25);
    for (const auto& a : o.args)
        for (const auto& b : o.args)
            if (edge(rng))
                o.att.insert({a, b});
    return o;
}

template <class T>
bool contains_all(const std::vector<T>& big, const std::vector<T>& small)
{
    return std::all_of(small.begin(), small.end(),
                       [&](const T& x) { return std::find(big.begin(), big.end(), x) != big.end(); });
}

template <class T>
std::vector<T> sorted(std::vector<T> v)
{
    std::sort(v.begin(), v.end());
    return v;
}

} // namespace mvt
