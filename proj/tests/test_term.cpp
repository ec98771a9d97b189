#include "doctest.h"

#include "stablerel/term.hpp"
#include "support/generators.hpp"

using namespace stablerel;

namespace {

TermPtr sym(const char* s) { return Term::sym(s); }

} // namespace

TEST_CASE("walk follows bindings to a non-var or unbound var") {
    TermPtr x = Term::var(0), y = Term::var(1);
    Subst empty;
    CHECK(empty.walk(x)->is_var());
    CHECK(empty.walk(x)->var_id() == 0);

    Subst s1 = empty.extend(0, sym("a"));
    CHECK(term_equal(s1.walk(x), sym("a")));

    Subst s2 = empty.extend(0, y).extend(1, Term::num(5));
    TermPtr w = s2.walk(x);
    CHECK(w->is_num());
    CHECK(w->num_value() == 5);
}

TEST_CASE("unify binds variables and rejects mismatched constants") {
    TermPtr x = Term::var(0), y = Term::var(1);
    Subst s;

    UnifyResult r1 = unify(x, sym("a"), s);
    REQUIRE(r1.ok);
    CHECK(term_equal(r1.subst.walk(x), sym("a")));

    UnifyResult r2 = unify(Term::pair(x, y), Term::pair(sym("b"), Term::nil()), s);
    REQUIRE(r2.ok);
    CHECK(term_equal(r2.subst.walk(x), sym("b")));
    CHECK(r2.subst.walk(y)->is_nil());

    CHECK_FALSE(unify(sym("a"), sym("b"), s).ok);
}

TEST_CASE("occurs check is off by default and rejects cycles when on") {
    TermPtr x = Term::var(0);
    TermPtr cyclic = Term::pair(x, Term::nil());
    Subst s;
    CHECK(unify(x, cyclic, s).ok); // builds a cyclic binding, by tradition
    UnifyOptions occurs{true};
    CHECK_FALSE(unify(x, cyclic, s, occurs).ok);
}

TEST_CASE("reify names residual vars _.n in first-appearance order") {
    TermPtr q = Term::var(7);
    Subst s;
    CHECK(term_to_string(reify(q, s)) == "_.0");

    TermPtr twice = Term::pair(q, Term::pair(q, Term::nil()));
    CHECK(term_to_string(reify(twice, s)) == "(_.0 _.0)");

    Subst bound = s.extend(7, sym("c"));
    CHECK(term_to_string(reify(q, bound)) == "c");

    TermPtr two = Term::pair(Term::var(1), Term::pair(Term::var(2), Term::nil()));
    CHECK(term_to_string(reify(two, s)) == "(_.0 _.1)");
}

TEST_CASE("term printing handles proper and improper lists") {
    TermPtr lst = Term::list({sym("a"), sym("b"), sym("c")});
    CHECK(term_to_string(lst) == "(a b c)");
    CHECK(term_to_string(Term::nil()) == "()");
    CHECK(term_to_string(Term::pair(sym("a"), sym("b"))) == "(a . b)");
    CHECK(term_to_string(Term::pair(sym("a"), Term::pair(sym("b"), sym("c")))) ==
          "(a b . c)");
    CHECK(term_to_string(Term::num(-3)) == "-3");
}

TEST_CASE("unify is commutative and makes both sides deep-walk equal") {
    gen::Rng rng(20240601);
    UnifyOptions occurs{true}; // keep the generated substitutions acyclic
    int successes = 0;
    for (int i = 0; i < 500; ++i) {
        TermPtr a = gen::random_term(rng);
        TermPtr b = gen::random_term(rng);
        Subst s;
        UnifyResult ab = unify(a, b, s, occurs);
        UnifyResult ba = unify(b, a, s, occurs);
        CHECK(ab.ok == ba.ok);
        if (!ab.ok) continue;
        ++successes;
        CHECK(term_equal(ab.subst.walk_deep(a), ab.subst.walk_deep(b)));
        CHECK(term_equal(ba.subst.walk_deep(a), ba.subst.walk_deep(b)));
        // The two substitutions agree up to variable renaming: reification
        // canonicalizes the names.
        TermPtr probe = Term::list(
            {a, b, Term::var(0), Term::var(1), Term::var(2), Term::var(3)});
        CHECK(term_equal(reify(probe, ab.subst), reify(probe, ba.subst)));
    }
    CHECK(successes > 50); // the generator must exercise the success path
}

TEST_CASE("reify is idempotent") {
    gen::Rng rng(20240602);
    for (int i = 0; i < 300; ++i) {
        TermPtr t = gen::random_term(rng);
        TermPtr other = gen::random_term(rng);
        Subst s;
        UnifyResult u = unify(t, other, s, UnifyOptions{true});
        const Subst& use = u.ok ? u.subst : s;
        TermPtr once = reify(t, use);
        TermPtr twice = reify(once, Subst{});
        CHECK(term_equal(once, twice));
    }
}

TEST_CASE("var ids from a source are unique and monotone") {
    VarSource vs;
    TermPtr a = vs.fresh(), b = vs.fresh(), c = vs.fresh();
    CHECK(a->var_id() < b->var_id());
    CHECK(b->var_id() < c->var_id());
}
