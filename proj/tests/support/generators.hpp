#ifndef STABLEREL_TESTS_GENERATORS_HPP
#define STABLEREL_TESTS_GENERATORS_HPP

// Seeded random generators for property tests: terms, goal ASTs, ground
// programs, and small Datalog programs with negation.

#include <random>
#include <string>
#include <vector>

#include "stablerel/grounder.hpp"
#include "stablerel/program.hpp"
#include "stablerel/term.hpp"

namespace gen {

using Rng = std::mt19937;

inline int pick(Rng& rng, int lo, int hi) { // inclusive
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline bool chance(Rng& rng, double p) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

// --- terms -----------------------------------------------------------------

inline stablerel::TermPtr random_term(Rng& rng, int depth = 3) {
    using stablerel::Term;
    int roll = pick(rng, 0, depth > 0 ? 4 : 3);
    switch (roll) {
    case 0: return Term::var(pick(rng, 0, 3));
    case 1: {
        const char* syms[] = {"a", "b", "c"};
        return Term::sym(syms[pick(rng, 0, 2)]);
    }
    case 2: return Term::num(pick(rng, -2, 2));
    case 3: return Term::nil();
    default:
        return Term::pair(random_term(rng, depth - 1), random_term(rng, depth - 1));
    }
}

// --- goal ASTs (for has_negation / registry properties) --------------------

inline stablerel::GoalPtr random_goal(Rng& rng, int depth, bool allow_noto);

inline std::vector<stablerel::GoalPtr> random_body(Rng& rng, int depth,
                                                   bool allow_noto) {
    std::vector<stablerel::GoalPtr> out;
    int n = pick(rng, 1, 3);
    for (int i = 0; i < n; ++i) out.push_back(random_goal(rng, depth, allow_noto));
    return out;
}

inline stablerel::GoalPtr random_goal(Rng& rng, int depth, bool allow_noto) {
    using stablerel::GoalExpr;
    using stablerel::TermTpl;
    int roll = pick(rng, 0, depth > 0 ? 5 : 2);
    switch (roll) {
    case 0: return GoalExpr::succeed();
    case 1:
        return GoalExpr::unify(TermTpl::var("x"), TermTpl::sym("a"));
    case 2: {
        if (allow_noto && chance(rng, 0.3))
            return GoalExpr::noto(GoalExpr::call("r", {TermTpl::var("x")}));
        return GoalExpr::call("r", {TermTpl::var("x")});
    }
    case 3: {
        std::vector<std::vector<stablerel::GoalPtr>> branches;
        int n = pick(rng, 1, 3);
        for (int i = 0; i < n; ++i) branches.push_back(random_body(rng, depth - 1, allow_noto));
        return GoalExpr::conde(std::move(branches));
    }
    default:
        return GoalExpr::fresh({"x"}, random_body(rng, depth - 1, allow_noto));
    }
}

// --- ground programs --------------------------------------------------------

// Arity-0 atoms named g00..g11 so their canonical order matches their index.
inline stablerel::GroundProgram random_ground_program(Rng& rng, int max_atoms = 10,
                                                      int max_rules = 12) {
    using stablerel::GroundAtom;
    using stablerel::GroundProgram;
    using stablerel::GroundRule;
    using stablerel::PredKey;

    int n = pick(rng, 1, max_atoms);
    GroundProgram pi;
    for (int i = 0; i < n; ++i) {
        char name[4] = {'g', static_cast<char>('0' + i / 10),
                        static_cast<char>('0' + i % 10), 0};
        pi.atoms.push_back(GroundAtom{PredKey{name, 0}, {}});
    }
    pi.rebuild_index();

    int rules = pick(rng, 0, max_rules);
    for (int r = 0; r < rules; ++r) {
        GroundRule rule;
        rule.head = pick(rng, 0, n - 1);
        int npos = pick(rng, 0, 2), nneg = pick(rng, 0, 2);
        for (int i = 0; i < npos; ++i) rule.pos.push_back(pick(rng, 0, n - 1));
        for (int i = 0; i < nneg; ++i) rule.neg.push_back(pick(rng, 0, n - 1));
        pi.rules.push_back(rule);
    }
    return pi;
}

// Ground program with an explicit stratification: positive literals stay in
// the head's stratum or below, negative literals strictly below.
struct StratifiedGround {
    stablerel::GroundProgram pi;
    std::vector<int> atom_strata;
};

inline StratifiedGround random_stratified_ground(Rng& rng, int max_atoms = 10) {
    using stablerel::GroundRule;
    StratifiedGround out;
    out.pi = random_ground_program(rng, max_atoms, 0);
    int n = static_cast<int>(out.pi.atom_count());
    out.atom_strata.resize(n);
    for (int i = 0; i < n; ++i) out.atom_strata[i] = pick(rng, 0, 2);

    int rules = pick(rng, 1, 14);
    for (int r = 0; r < rules; ++r) {
        GroundRule rule;
        rule.head = pick(rng, 0, n - 1);
        int hs = out.atom_strata[rule.head];
        int npos = pick(rng, 0, 2), nneg = pick(rng, 0, 2);
        for (int i = 0; i < npos; ++i) {
            int b = pick(rng, 0, n - 1);
            if (out.atom_strata[b] <= hs) rule.pos.push_back(b);
        }
        for (int i = 0; i < nneg; ++i) {
            int b = pick(rng, 0, n - 1);
            if (out.atom_strata[b] < hs) rule.neg.push_back(b);
        }
        out.pi.rules.push_back(rule);
    }
    return out;
}

// --- random Datalog surface programs (groundable, possibly with negation) --

// Produces defineo source text over unary predicates p0..p{k-1} and
// constants a/b/c. Layered calls keep every program's dependency graph
// acyclic apart from optional self-recursion, so queries terminate.
inline std::string random_datalog_source(Rng& rng, bool stratified_only) {
    int npreds = pick(rng, 2, 4);
    const char* consts[] = {"a", "b", "c"};
    std::string src;
    for (int i = 0; i < npreds; ++i) {
        std::string name = "p" + std::to_string(i);
        std::string body = "(conde";
        int branches = pick(rng, 1, 3);
        for (int b = 0; b < branches; ++b) {
            body += " [";
            bool fact = (i == 0) || chance(rng, 0.4);
            if (fact) {
                body += "(== x '" + std::string(consts[pick(rng, 0, 2)]) + ")";
            } else {
                int callee = pick(rng, 0, i - 1);
                body += "(p" + std::to_string(callee) + " x)";
                bool negate = chance(rng, 0.5);
                if (negate) {
                    int negd = pick(rng, 0, i - 1);
                    body += " (noto (p" + std::to_string(negd) + " x))";
                } else if (!stratified_only && chance(rng, 0.3)) {
                    // A negative self-loop makes the program normal.
                    body += " (noto (p" + std::to_string(i) + " x))";
                }
            }
            body += "]";
        }
        body += ")";
        src += "(defineo (" + name + " x) " + body + ")\n";
    }
    return src;
}

} // namespace gen

#endif
