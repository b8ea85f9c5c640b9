// Serial vs OpenMP timings for the enumeration kernels on synthetic inputs
// sized to take a noticeable fraction of a second.
//
//   bench_kernels [repetitions]

#include "mvlogic/abduction.hpp"
#include "mvlogic/argumentation.hpp"
#include "mvlogic/document.hpp"
#include "mvlogic/minimize.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>

using namespace mvl;

namespace {

double best_of(int reps, const std::function<std::size_t()>& f, std::size_t& result)
{
    double best = 1e30;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        result = f();
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

void report(const char* name, int reps, const std::function<std::size_t(Execution)>& f)
{
    std::size_t rs = 0, rp = 0;
    const double s = best_of(reps, [&] { return f(Execution::serial); }, rs);
    const double p = best_of(reps, [&] { return f(Execution::parallel); }, rp);
    std::printf("%-22s serial %8.3f ms   parallel %8.3f ms   speedup %5.2fx   %s (%zu results)\n", name, s * 1e3,
                p * 1e3, s / p, rs == rp ? "same" : "MISMATCH", rs);
}

/// Chain of defaults over 20 atoms: p_i :- not ab_i, with ab_i tied to
/// the next atom so minimization has real work.
DefaultTheory default_theory()
{
    std::string src;
    for (int i = 0; i < 10; ++i) {
        const auto n = std::to_string(i);
        src += "p" + n + " :- not ab" + n + ".\n";
        if (i + 1 < 10)
            src += "ab" + std::to_string(i + 1) + " :- p" + n + ".\n";
    }
    std::set<std::string> mins;
    for (int i = 0; i < 10; ++i)
        mins.insert("ab" + std::to_string(i));
    return make_theory(parse_kb(src), mins);
}

ArgFramework random_framework(int n)
{
    std::mt19937 rng(1);
    std::bernoulli_distribution edge(0.15);
    std::set<std::string> args;
    std::set<std::pair<std::string, std::string>> att;
    for (int i = 0; i < n; ++i)
        args.insert("a" + std::to_string(i));
    for (const auto& a : args)
        for (const auto& b : args)
            if (edge(rng))
                att.insert({a, b});
    return make_framework(args, att);
}

AbductionProblem abduction_problem()
{
    std::string src;
    for (int i = 0; i < 16; i += 2)
        src += "m" + std::to_string(i / 2) + " :- h" + std::to_string(i) + ", h" + std::to_string(i + 1) + ".\n";
    src += "obs :- m0, m1, m2, m3.\nobs :- m4, m5, m6, m7.\nobs :- h0, h5, h9, h14.\n";
    std::set<Term> ab;
    for (int i = 0; i < 16; ++i)
        ab.insert(Term::constant("h" + std::to_string(i)));
    return make_abduction(parse_kb(src), ab, {Literal::pos(Term::constant("obs"))});
}

} // namespace

int main(int argc, char** argv)
{
    const int reps = argc > 1 ? std::max(1, std::atoi(argv[1])) : 3;
    const auto theory = default_theory();
    report("minimal_models (20)", reps, [&](Execution ex) { return minimal_models(theory, ex).size(); });

    const auto af = random_framework(18);
    report("af preferred (18)", reps, [&](Execution ex) { return extensions(af, Semantics::preferred, ex).size(); });
    report("af stable (18)", reps, [&](Execution ex) { return extensions(af, Semantics::stable, ex).size(); });

    const auto problem = abduction_problem();
    report("explanations (16)", reps, [&](Execution ex) { return explanations(problem, ex).size(); });
    return 0;
}
