#include "stablerel/engine.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <set>

#include "stablerel/diagnostics.hpp"

namespace stablerel {

namespace {

// ---------------------------------------------------------------------------
// Lazy substitution streams with interleaving disjunction (the classic
// microKanren mplus/bind discipline; relation calls are delayed so every
// conde branch makes progress).
//
// Lifetime note: thunks capture GoalPtr/RelationDef pointers whose owners
// (the Program and the query's goal vector) outlive the query, plus Env and
// Subst values.

struct StreamImpl;
using StreamPtr = std::shared_ptr<const StreamImpl>;

struct StreamImpl {
    enum class Tag { Cons, Thunk } tag = Tag::Cons;
    Subst head;
    StreamPtr tail; // nullptr = empty
    std::function<StreamPtr()> thunk;
};

StreamPtr stream_cons(Subst head, StreamPtr tail) {
    auto node = std::make_shared<StreamImpl>();
    node->tag = StreamImpl::Tag::Cons;
    node->head = std::move(head);
    node->tail = std::move(tail);
    return node;
}

StreamPtr stream_unit(Subst s) { return stream_cons(std::move(s), nullptr); }

StreamPtr stream_delay(std::function<StreamPtr()> f) {
    auto node = std::make_shared<StreamImpl>();
    node->tag = StreamImpl::Tag::Thunk;
    node->thunk = std::move(f);
    return node;
}

StreamPtr stream_mplus(StreamPtr a, StreamPtr b) {
    if (a == nullptr) return b;
    if (b == nullptr) return a;
    if (a->tag == StreamImpl::Tag::Thunk) {
        // Swap the operands under the delay: this is what makes the search
        // interleave instead of committing to the left branch.
        return stream_delay([a, b]() { return stream_mplus(b, a->thunk()); });
    }
    return stream_cons(a->head, stream_mplus(a->tail, b));
}

using GoalFn = std::function<StreamPtr(const Subst&)>;

StreamPtr stream_bind(StreamPtr s, const GoalFn& g) {
    if (s == nullptr) return nullptr;
    if (s->tag == StreamImpl::Tag::Thunk)
        return stream_delay([s, g]() { return stream_bind(s->thunk(), g); });
    return stream_mplus(g(s->head), stream_bind(s->tail, g));
}

// ---------------------------------------------------------------------------
// Evaluation context: which predicates are grounded, which stable model the
// grounded part is being read against, and the step budget.

struct EvalCtx {
    const Program& prog;
    VarSource& vars;
    UnifyOptions uopts;
    const std::set<PredKey>* scope = nullptr; // grounded predicates
    const GroundProgram* pi = nullptr;        // their propositional image
    const Interpretation* model = nullptr;    // the model being queried
    long long* steps_left = nullptr;          // nullptr = unlimited
};

// Variable name -> runtime term, per relation activation / query.
using Env = std::map<std::string, TermPtr>;

TermPtr instantiate(const TermTplPtr& tpl, const Env& env) {
    switch (tpl->kind()) {
    case TermTpl::Kind::Var: {
        auto it = env.find(tpl->var_name());
        if (it == env.end())
            throw std::logic_error("unbound template variable '" + tpl->var_name() + "'");
        return it->second;
    }
    case TermTpl::Kind::Sym: return Term::sym(tpl->sym_name());
    case TermTpl::Kind::Num: return Term::num(tpl->num_value());
    case TermTpl::Kind::Nil: return Term::nil();
    case TermTpl::Kind::Pair:
        return Term::pair(instantiate(tpl->head(), env), instantiate(tpl->tail(), env));
    }
    throw std::logic_error("unreachable");
}

StreamPtr eval_seq(const std::vector<GoalPtr>* goals, std::size_t idx, Env env,
                   const Subst& s, EvalCtx& ctx);

StreamPtr eval_call_in_scope(const GoalExpr& g, const PredKey& key, const Env& env,
                             const Subst& s, EvalCtx& ctx) {
    // Brave matching: the call holds for each atom of this predicate that is
    // true in the current model and unifies with the arguments.
    std::vector<TermPtr> args;
    args.reserve(g.args().size());
    for (const auto& a : g.args()) args.push_back(instantiate(a, env));

    StreamPtr out = nullptr;
    // Atoms are canonically ordered; collect matches in reverse so the cons
    // chain yields them in ascending atom order.
    for (int i = static_cast<int>(ctx.pi->atoms.size()) - 1; i >= 0; --i) {
        const GroundAtom& atom = ctx.pi->atoms[static_cast<std::size_t>(i)];
        if (!(atom.pred == key)) continue;
        if (!ctx.model->test(i)) continue;
        Subst cur = s;
        bool ok = true;
        for (std::size_t k = 0; k < args.size() && ok; ++k) {
            UnifyResult u = unify(args[k], atom.args[k], cur, ctx.uopts);
            if (!u.ok)
                ok = false;
            else
                cur = std::move(u.subst);
        }
        if (ok) out = stream_cons(std::move(cur), out);
    }
    return out;
}

StreamPtr eval_goal(const GoalPtr& g, const Env& env, const Subst& s, EvalCtx& ctx) {
    switch (g->kind()) {
    case GoalExpr::Kind::Succeed:
        return stream_unit(s);
    case GoalExpr::Kind::Fail:
        return nullptr;
    case GoalExpr::Kind::Unify: {
        UnifyResult u = unify(instantiate(g->lhs(), env), instantiate(g->rhs(), env), s,
                              ctx.uopts);
        return u.ok ? stream_unit(std::move(u.subst)) : nullptr;
    }
    case GoalExpr::Kind::Fresh: {
        Env extended = env;
        for (const auto& name : g->fresh_vars()) extended[name] = ctx.vars.fresh();
        return eval_seq(&g->body(), 0, std::move(extended), s, ctx);
    }
    case GoalExpr::Kind::Conde: {
        EvalCtx* ctx_ptr = &ctx;
        StreamPtr out = nullptr;
        for (std::size_t b = g->branches().size(); b-- > 0;) {
            GoalPtr goal = g;
            StreamPtr one = stream_delay([ctx_ptr, goal, b, env, s]() {
                return eval_seq(&goal->branches()[b], 0, env, s, *ctx_ptr);
            });
            out = stream_mplus(std::move(one), std::move(out));
        }
        return out;
    }
    case GoalExpr::Kind::Call: {
        PredKey key{g->callee(), static_cast<int>(g->args().size())};
        const RelationDef* def = ctx.prog.find(key);
        if (def == nullptr)
            throw Diagnostic(DiagCode::UndefinedRelation,
                             "call to undefined relation " + key.display());
        if (!def->builtin && ctx.scope != nullptr && ctx.scope->count(key) > 0)
            return eval_call_in_scope(*g, key, env, s, ctx);
        // Definitional expansion (definite relations and builtins): bind the
        // parameters and delay the body.
        Env callee_env;
        for (std::size_t i = 0; i < def->params.size(); ++i)
            callee_env[def->params[i]] = instantiate(g->args()[i], env);
        EvalCtx* ctx_ptr = &ctx;
        return stream_delay([ctx_ptr, def, callee_env, s]() {
            return eval_seq(&def->body, 0, callee_env, s, *ctx_ptr);
        });
    }
    case GoalExpr::Kind::Noto: {
        const GoalPtr& inner = g->inner();
        PredKey key{inner->callee(), static_cast<int>(inner->args().size())};
        if (ctx.pi == nullptr || ctx.model == nullptr || ctx.scope == nullptr ||
            ctx.scope->count(key) == 0)
            throw std::logic_error("negated goal evaluated outside a grounded scope");
        std::vector<TermPtr> args;
        for (const auto& a : inner->args())
            args.push_back(s.walk_deep(instantiate(a, env)));
        for (const auto& a : args)
            if (!a->is_ground())
                throw Diagnostic(DiagCode::Floundering,
                                 "negated goal " + key.display() +
                                     " reached with unbound arguments");
        int idx = ctx.pi->find_atom(key, args);
        bool holds = idx < 0 || !ctx.model->test(idx);
        return holds ? stream_unit(s) : nullptr;
    }
    }
    throw std::logic_error("unreachable");
}

StreamPtr eval_seq(const std::vector<GoalPtr>* goals, std::size_t idx, Env env,
                   const Subst& s, EvalCtx& ctx) {
    if (idx == goals->size()) return stream_unit(s);
    StreamPtr first = eval_goal((*goals)[idx], env, s, ctx);
    if (idx + 1 == goals->size()) return first;
    EvalCtx* ctx_ptr = &ctx;
    GoalFn rest = [ctx_ptr, goals, idx, env](const Subst& s2) {
        return eval_seq(goals, idx + 1, env, s2, *ctx_ptr);
    };
    return stream_bind(std::move(first), rest);
}

// Pulls substitutions out of a stream, charging delayed steps against the
// budget.
class StreamCursor {
  public:
    explicit StreamCursor(StreamPtr s) : cur_(std::move(s)) {}

    std::optional<Subst> next(EvalCtx& ctx) {
        while (cur_ != nullptr) {
            if (cur_->tag == StreamImpl::Tag::Thunk) {
                if (ctx.steps_left != nullptr) {
                    if (*ctx.steps_left <= 0)
                        throw Diagnostic(DiagCode::BudgetExhausted,
                                         "step budget exhausted during definite search");
                    --*ctx.steps_left;
                }
                cur_ = cur_->thunk();
                continue;
            }
            Subst head = cur_->head;
            cur_ = cur_->tail;
            return head;
        }
        return std::nullopt;
    }

  private:
    StreamPtr cur_;
};

// ---------------------------------------------------------------------------
// Query analysis: which goals force grounding, and over which predicates.

struct QueryAnalysis {
    std::set<PredKey> scope;        // union of negation-relevant cones
    std::vector<TermPtr> constants; // syms/nums appearing in the goals
    bool any_scoped = false;
};

void collect_tpl_constants(const TermTplPtr& t, std::vector<TermPtr>& out) {
    switch (t->kind()) {
    case TermTpl::Kind::Sym: out.push_back(Term::sym(t->sym_name())); break;
    case TermTpl::Kind::Num: out.push_back(Term::num(t->num_value())); break;
    case TermTpl::Kind::Pair:
        collect_tpl_constants(t->head(), out);
        collect_tpl_constants(t->tail(), out);
        break;
    default: break;
    }
}

void collect_goal_constants(const GoalPtr& g, std::vector<TermPtr>& out) {
    switch (g->kind()) {
    case GoalExpr::Kind::Unify:
        collect_tpl_constants(g->lhs(), out);
        collect_tpl_constants(g->rhs(), out);
        break;
    case GoalExpr::Kind::Call:
        for (const auto& a : g->args()) collect_tpl_constants(a, out);
        break;
    case GoalExpr::Kind::Noto:
        collect_goal_constants(g->inner(), out);
        break;
    case GoalExpr::Kind::Fresh:
        for (const auto& sub : g->body()) collect_goal_constants(sub, out);
        break;
    case GoalExpr::Kind::Conde:
        for (const auto& br : g->branches())
            for (const auto& sub : br) collect_goal_constants(sub, out);
        break;
    default: break;
    }
}

QueryAnalysis analyze_query(const Program& p, const std::vector<GoalPtr>& goals) {
    QueryAnalysis a;
    for (const auto& g : goals) {
        collect_goal_constants(g, a.constants);
        std::vector<GoalPtr> single{g};
        std::set<PredKey> closure = query_cone(p, single);
        bool scoped = has_negation(g);
        if (!scoped)
            for (const auto& key : closure)
                if (p.find(key)->negated) {
                    scoped = true;
                    break;
                }
        if (scoped) {
            a.any_scoped = true;
            a.scope.insert(closure.begin(), closure.end());
        }
    }
    return a;
}

// Grounds a scope and solves its stable models, using the stratified or
// minimal-model fast path when the scope's classification allows it.
struct ScopeModels {
    GroundProgram pi;
    StableModelSet models;
    SolvePath path = SolvePath::Enumerated;
};

ScopeModels solve_scope(const Program& p, const std::set<PredKey>& scope,
                        const std::vector<TermPtr>& extra_constants,
                        const EngineConfig& cfg) {
    ScopeModels out;
    out.pi = ground(p, scope, extra_constants, GroundMode::Guided);

    SolveOptions opts;
    opts.oracle = cfg.oracle;
    opts.cap = cfg.cap;
    std::vector<int> atom_strata;
    if (!cfg.oracle) {
        ClassifyResult cls = classify(p, scope);
        if (cls.classification != Classification::Normal) {
            atom_strata.resize(out.pi.atom_count(), 0);
            for (std::size_t i = 0; i < out.pi.atoms.size(); ++i)
                atom_strata[i] = cls.strata.at(out.pi.atoms[i].pred);
            opts.atom_strata = &atom_strata;
        }
    }
    SolveResult solved = enumerate_stable_models(out.pi, opts);
    out.models = std::move(solved.models);
    out.path = solved.path;
    return out;
}

std::string groundability_diagnostic(const Program& p, const std::set<PredKey>& scope,
                                     const PredKey& offender, bool for_global_check) {
    bool negation_in_scope = false;
    for (const auto& key : scope)
        if (p.find(key)->negated) {
            negation_in_scope = true;
            break;
        }
    if (negation_in_scope)
        return "negation over non-Datalog relation " + offender.display();
    // Registered-but-definite relations can only reach here through the
    // global check (legacy-coarse registration).
    if (for_global_check)
        return "contradiction check requires grounding " + offender.display() +
               ", which builds compound terms; use run-partial or fine-grained "
               "registration";
    return "relation " + offender.display() + " cannot be grounded";
}

} // namespace

std::set<PredKey> Engine::checked_scope(const std::vector<GoalPtr>& goals) const {
    QueryAnalysis a = analyze_query(prog_, goals);
    std::set<PredKey> scope = a.scope;
    // Registry cones, walked from the registered roots only so unrelated
    // ill-formed relations cannot interfere.
    std::vector<PredKey> frontier(prog_.registry().begin(), prog_.registry().end());
    for (const auto& k : frontier) scope.insert(k);
    std::set<PredKey> visited(prog_.registry().begin(), prog_.registry().end());
    while (!frontier.empty()) {
        PredKey key = frontier.back();
        frontier.pop_back();
        const RelationDef* def = prog_.find(key);
        if (def == nullptr) continue;
        std::vector<GoalPtr> body = def->body;
        for (const auto& callee : query_cone(prog_, body)) {
            scope.insert(callee);
            if (visited.insert(callee).second) frontier.push_back(callee);
        }
    }
    return scope;
}

QueryOutcome Engine::query(RunMode mode, std::optional<long long> n,
                           const std::vector<std::string>& qvars,
                           const std::vector<GoalPtr>& goals) const {
    QueryOutcome out;
    if (n.has_value() && *n <= 0) {
        out.exhausted = false;
        return out;
    }

    long long budget_storage = cfg_.step_budget.value_or(0);
    long long* budget = cfg_.step_budget.has_value() ? &budget_storage : nullptr;

    EvalCtx ctx{prog_, vars_, UnifyOptions{cfg_.occurs_check}};
    ctx.steps_left = budget;

    Env env;
    std::vector<TermPtr> qvar_terms;
    for (const auto& name : qvars) {
        TermPtr v = vars_.fresh();
        env[name] = v;
        qvar_terms.push_back(v);
    }
    TermPtr answer_tpl = qvar_terms.size() == 1 ? qvar_terms[0] : Term::list(qvar_terms);

    QueryAnalysis analysis = analyze_query(prog_, goals);

    // The run interface's global check scope: query cone + registry + the
    // registry's cones.
    std::set<PredKey> global_scope;
    bool check_globally = false;
    if (mode == RunMode::Run) {
        global_scope = checked_scope(goals);
        check_globally = !global_scope.empty();
        if (check_globally && cfg_.auto_dispatch) {
            ClassifyResult cls = classify(prog_, global_scope);
            if (cls.classification != Classification::Normal) check_globally = false;
        }
        if (check_globally) {
            if (auto offender = first_non_groundable(prog_, global_scope))
                throw Diagnostic(DiagCode::NotGroundable,
                                 groundability_diagnostic(prog_, global_scope, *offender,
                                                          /*for_global_check=*/true));
            // Unavoidable contradiction in the registered program kills every
            // answer outright (and guards against consuming an infinite
            // definite stream that could never be admitted).
            ScopeModels global = solve_scope(prog_, global_scope, analysis.constants, cfg_);
            if (global.models.models.empty()) {
                out.exhausted = true;
                return out;
            }
        }
    }

    // Admission check for one candidate answer: some stable model of the
    // global scope must satisfy the whole query with the answer's bindings
    // pinned. Recomputed from scratch per answer; nothing is cached.
    auto admitted = [&](const Subst& s_ans) -> bool {
        if (!check_globally) return true;
        ScopeModels global = solve_scope(prog_, global_scope, analysis.constants, cfg_);
        EvalCtx gctx{prog_, vars_, UnifyOptions{cfg_.occurs_check}};
        gctx.steps_left = budget;
        gctx.scope = &global_scope;
        gctx.pi = &global.pi;
        for (const auto& m : global.models.models) {
            gctx.model = &m;
            StreamCursor cursor(eval_seq(&goals, 0, env, s_ans, gctx));
            if (cursor.next(gctx).has_value()) return true;
        }
        return false;
    };

    auto emit = [&](const Subst& s) -> bool {
        // Returns true when enough answers were collected.
        if (!admitted(s)) return false;
        TermPtr r = reify(answer_tpl, s);
        out.answers.push_back(r);
        out.answer_texts.push_back(term_to_string(r));
        return n.has_value() && static_cast<long long>(out.answers.size()) >= *n;
    };

    if (!analysis.any_scoped) {
        // Pure definite query: classic interleaved stream search, duplicates
        // preserved, no grounding.
        StreamCursor cursor(eval_seq(&goals, 0, env, Subst{}, ctx));
        while (true) {
            std::optional<Subst> s = cursor.next(ctx);
            if (!s.has_value()) {
                out.exhausted = true;
                break;
            }
            if (emit(*s)) break;
        }
        return out;
    }

    // Negation-bearing query: ground the union of the scoped goals' cones
    // and answer bravely, model by model. Conjunctions must hold inside a
    // single stable model; answers are deduplicated across models.
    if (auto offender = first_non_groundable(prog_, analysis.scope))
        throw Diagnostic(DiagCode::NotGroundable,
                         groundability_diagnostic(prog_, analysis.scope, *offender,
                                                  /*for_global_check=*/false));
    ScopeModels scoped = solve_scope(prog_, analysis.scope, analysis.constants, cfg_);
    ctx.scope = &analysis.scope;
    ctx.pi = &scoped.pi;

    std::set<std::string> seen;
    bool done = false;
    for (const auto& m : scoped.models.models) {
        if (done) break;
        ctx.model = &m;
        StreamCursor cursor(eval_seq(&goals, 0, env, Subst{}, ctx));
        while (true) {
            std::optional<Subst> s = cursor.next(ctx);
            if (!s.has_value()) break;
            std::string key = term_to_string(reify(answer_tpl, *s));
            if (!seen.insert(key).second) continue;
            if (emit(*s)) {
                done = true;
                break;
            }
        }
    }
    if (!done) out.exhausted = true;
    return out;
}

} // namespace stablerel
