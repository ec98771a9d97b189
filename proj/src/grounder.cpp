#include "stablerel/grounder.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "stablerel/diagnostics.hpp"

namespace stablerel {

std::string GroundAtom::key() const {
    std::ostringstream os;
    os << pred.name;
    if (!args.empty()) {
        os << "(";
        for (std::size_t i = 0; i < args.size(); ++i)
            os << (i ? "," : "") << term_to_string(args[i]);
        os << ")";
    }
    return os.str();
}

int ground_atom_compare(const GroundAtom& a, const GroundAtom& b) {
    if (a.pred.name != b.pred.name) return a.pred.name < b.pred.name ? -1 : 1;
    if (a.pred.arity != b.pred.arity) return a.pred.arity < b.pred.arity ? -1 : 1;
    for (std::size_t i = 0; i < a.args.size(); ++i) {
        int c = term_compare(a.args[i], b.args[i]);
        if (c != 0) return c;
    }
    return 0;
}

int GroundProgram::find_atom(const GroundAtom& a) const {
    auto it = index_.find(a.key());
    return it == index_.end() ? -1 : it->second;
}

int GroundProgram::find_atom(const PredKey& pred, const std::vector<TermPtr>& args) const {
    GroundAtom a{pred, args};
    return find_atom(a);
}

void GroundProgram::rebuild_index() {
    index_.clear();
    for (std::size_t i = 0; i < atoms.size(); ++i)
        index_.emplace(atoms[i].key(), static_cast<int>(i));
}

std::string GroundProgram::dump() const {
    std::ostringstream os;
    for (const auto& r : rules) {
        os << atoms[r.head].key();
        if (!r.pos.empty() || !r.neg.empty()) {
            os << " :- ";
            bool first = true;
            for (int b : r.pos) {
                os << (first ? "" : ", ") << atoms[b].key();
                first = false;
            }
            for (int b : r.neg) {
                os << (first ? "" : ", ") << "not " << atoms[b].key();
                first = false;
            }
        }
        os << ".\n";
    }
    return os.str();
}

namespace {

struct FlattenCtx {
    const Program& prog;
    const RelationDef& def;
    int fresh_counter = 0;
    std::vector<NormalClause> out;
};

using NameEnv = std::map<std::string, std::string>; // surface name -> renamed

ClauseArg tpl_to_arg(const TermTplPtr& t, const NameEnv& env, const PredKey& where) {
    switch (t->kind()) {
    case TermTpl::Kind::Var: {
        auto it = env.find(t->var_name());
        if (it == env.end())
            throw std::logic_error("unbound variable '" + t->var_name() + "' in " +
                                   where.display());
        return ClauseArg{true, it->second, nullptr};
    }
    case TermTpl::Kind::Sym:
        return ClauseArg{false, "", Term::sym(t->sym_name())};
    case TermTpl::Kind::Num:
        return ClauseArg{false, "", Term::num(t->num_value())};
    case TermTpl::Kind::Nil:
        return ClauseArg{false, "", Term::nil()};
    case TermTpl::Kind::Pair:
        throw Diagnostic(DiagCode::NotGroundable,
                         where.display() + " builds compound terms and cannot be grounded");
    }
    throw std::logic_error("unreachable");
}

// Conjunction under construction while expanding conde branches.
struct PartialClause {
    std::vector<ClauseLit> pos;
    std::vector<ClauseLit> neg;
    std::vector<std::pair<ClauseArg, ClauseArg>> eqs;
    bool always_fail = false;
    NameEnv env;
};

void flatten_goals(FlattenCtx& ctx, const std::vector<GoalPtr>& goals, std::size_t idx,
                   PartialClause acc);

void flatten_goal(FlattenCtx& ctx, const GoalPtr& g,
                  const std::vector<GoalPtr>& rest_goals, std::size_t rest_idx,
                  PartialClause acc) {
    const PredKey where = ctx.def.key();
    switch (g->kind()) {
    case GoalExpr::Kind::Succeed:
        flatten_goals(ctx, rest_goals, rest_idx, std::move(acc));
        return;
    case GoalExpr::Kind::Fail:
        acc.always_fail = true;
        flatten_goals(ctx, rest_goals, rest_idx, std::move(acc));
        return;
    case GoalExpr::Kind::Unify:
        acc.eqs.emplace_back(tpl_to_arg(g->lhs(), acc.env, where),
                             tpl_to_arg(g->rhs(), acc.env, where));
        flatten_goals(ctx, rest_goals, rest_idx, std::move(acc));
        return;
    case GoalExpr::Kind::Fresh: {
        PartialClause next = std::move(acc);
        for (const auto& v : g->fresh_vars())
            next.env[v] = v + "#" + std::to_string(ctx.fresh_counter++);
        // Splice the fresh body in front of the remaining goals.
        std::vector<GoalPtr> seq = g->body();
        for (std::size_t i = rest_idx; i < rest_goals.size(); ++i)
            seq.push_back(rest_goals[i]);
        flatten_goals(ctx, seq, 0, std::move(next));
        return;
    }
    case GoalExpr::Kind::Conde: {
        for (const auto& branch : g->branches()) {
            PartialClause copy = acc;
            std::vector<GoalPtr> seq = branch;
            for (std::size_t i = rest_idx; i < rest_goals.size(); ++i)
                seq.push_back(rest_goals[i]);
            flatten_goals(ctx, seq, 0, std::move(copy));
        }
        return;
    }
    case GoalExpr::Kind::Call: {
        PredKey callee{g->callee(), static_cast<int>(g->args().size())};
        const RelationDef* target = ctx.prog.find(callee);
        if (target == nullptr)
            throw Diagnostic(DiagCode::UndefinedRelation,
                             where.display() + " calls undefined relation " + callee.display());
        if (target->builtin) {
            // Inline nullo/conso as their defining equation; conso's pair
            // template is rejected by tpl_to_arg above.
            if (callee.name == "nullo") {
                acc.eqs.emplace_back(tpl_to_arg(g->args()[0], acc.env, where),
                                     ClauseArg{false, "", Term::nil()});
            } else {
                throw Diagnostic(DiagCode::NotGroundable,
                                 where.display() + " uses " + callee.display() +
                                     ", which builds compound terms and cannot be grounded");
            }
            flatten_goals(ctx, rest_goals, rest_idx, std::move(acc));
            return;
        }
        ClauseLit lit{callee, {}};
        for (const auto& a : g->args()) lit.args.push_back(tpl_to_arg(a, acc.env, where));
        acc.pos.push_back(std::move(lit));
        flatten_goals(ctx, rest_goals, rest_idx, std::move(acc));
        return;
    }
    case GoalExpr::Kind::Noto: {
        const GoalPtr& inner = g->inner();
        PredKey callee{inner->callee(), static_cast<int>(inner->args().size())};
        const RelationDef* target = ctx.prog.find(callee);
        if (target == nullptr)
            throw Diagnostic(DiagCode::UndefinedRelation,
                             where.display() + " calls undefined relation " + callee.display());
        if (target->builtin)
            throw Diagnostic(DiagCode::NotGroundable,
                             where.display() + " negates builtin " + callee.display());
        ClauseLit lit{callee, {}};
        for (const auto& a : inner->args())
            lit.args.push_back(tpl_to_arg(a, acc.env, where));
        acc.neg.push_back(std::move(lit));
        flatten_goals(ctx, rest_goals, rest_idx, std::move(acc));
        return;
    }
    }
}

void flatten_goals(FlattenCtx& ctx, const std::vector<GoalPtr>& goals, std::size_t idx,
                   PartialClause acc) {
    if (idx == goals.size()) {
        NormalClause clause;
        clause.head = ctx.def.key();
        clause.head_vars = ctx.def.params;
        clause.pos = std::move(acc.pos);
        clause.neg = std::move(acc.neg);
        clause.eqs = std::move(acc.eqs);
        clause.always_fail = acc.always_fail;
        clause.def_index = ctx.def.def_index;
        clause.clause_ordinal = static_cast<int>(ctx.out.size());
        ctx.out.push_back(std::move(clause));
        return;
    }
    flatten_goal(ctx, goals[idx], goals, idx + 1, std::move(acc));
}

} // namespace

std::vector<NormalClause> flatten_relation(const Program& p, const RelationDef& def) {
    FlattenCtx ctx{p, def};
    PartialClause start;
    for (const auto& param : def.params) start.env[param] = param;
    flatten_goals(ctx, def.body, 0, std::move(start));
    // Clauses that contain `fail` can never fire.
    std::vector<NormalClause> out;
    int ordinal = 0;
    for (auto& c : ctx.out) {
        if (c.always_fail) continue;
        c.clause_ordinal = ordinal++;
        out.push_back(std::move(c));
    }
    return out;
}

std::optional<PredKey> first_non_groundable(const Program& p,
                                            const std::set<PredKey>& cone) {
    std::vector<PredKey> ordered(cone.begin(), cone.end());
    std::sort(ordered.begin(), ordered.end(), [&](const PredKey& a, const PredKey& b) {
        return p.find(a)->def_index < p.find(b)->def_index;
    });
    for (const auto& key : ordered) {
        const RelationDef* def = p.find(key);
        if (def == nullptr || def->builtin) continue;
        try {
            flatten_relation(p, *def);
        } catch (const Diagnostic& d) {
            if (d.code() == DiagCode::NotGroundable) return key;
            throw;
        }
    }
    return std::nullopt;
}

std::vector<TermPtr> herbrand_constants(const Program& p, const std::set<PredKey>& cone) {
    std::vector<TermPtr> out;
    auto add = [&](const TermPtr& t) {
        for (const auto& existing : out)
            if (term_equal(existing, t)) return;
        out.push_back(t);
    };
    std::function<void(const TermTplPtr&)> scan_tpl = [&](const TermTplPtr& t) {
        switch (t->kind()) {
        case TermTpl::Kind::Sym: add(Term::sym(t->sym_name())); break;
        case TermTpl::Kind::Num: add(Term::num(t->num_value())); break;
        case TermTpl::Kind::Pair:
            scan_tpl(t->head());
            scan_tpl(t->tail());
            break;
        default: break;
        }
    };
    std::function<void(const std::vector<GoalPtr>&)> scan_body =
        [&](const std::vector<GoalPtr>& body) {
            for (const auto& g : body) {
                switch (g->kind()) {
                case GoalExpr::Kind::Unify:
                    scan_tpl(g->lhs());
                    scan_tpl(g->rhs());
                    break;
                case GoalExpr::Kind::Call:
                    for (const auto& a : g->args()) scan_tpl(a);
                    break;
                case GoalExpr::Kind::Noto:
                    for (const auto& a : g->inner()->args()) scan_tpl(a);
                    break;
                case GoalExpr::Kind::Fresh:
                    scan_body(g->body());
                    break;
                case GoalExpr::Kind::Conde:
                    for (const auto& br : g->branches()) scan_body(br);
                    break;
                default: break;
                }
            }
        };
    for (const auto& key : cone) {
        const RelationDef* def = p.find(key);
        if (def != nullptr && !def->builtin) scan_body(def->body);
    }
    std::sort(out.begin(), out.end(),
              [](const TermPtr& a, const TermPtr& b) { return term_compare(a, b) < 0; });
    return out;
}

namespace {

// Union-find over clause variable names, with an optional constant binding
// per class. Equations are applied up-front; contradictory ones kill the
// instantiation.
class VarBindings {
  public:
    explicit VarBindings(const NormalClause& clause) {
        auto touch = [&](const ClauseArg& a) {
            if (a.is_var && parent_.find(a.var) == parent_.end())
                parent_[a.var] = a.var;
        };
        for (const auto& v : clause.head_vars)
            if (parent_.find(v) == parent_.end()) parent_[v] = v;
        for (const auto& lit : clause.pos)
            for (const auto& a : lit.args) touch(a);
        for (const auto& lit : clause.neg)
            for (const auto& a : lit.args) touch(a);
        for (const auto& [a, b] : clause.eqs) {
            touch(a);
            touch(b);
        }
    }

    bool apply_eq(const ClauseArg& a, const ClauseArg& b) {
        if (a.is_var && b.is_var) return merge(a.var, b.var);
        if (a.is_var) return bind(a.var, b.value);
        if (b.is_var) return bind(b.var, a.value);
        return term_equal(a.value, b.value);
    }

    bool bind(const std::string& var, const TermPtr& value) {
        std::string r = root(var);
        auto it = value_.find(r);
        if (it != value_.end()) return term_equal(it->second, value);
        value_[r] = value;
        return true;
    }

    const TermPtr* resolve(const std::string& var) {
        std::string r = root(var);
        auto it = value_.find(r);
        return it == value_.end() ? nullptr : &it->second;
    }

    std::vector<std::string> unbound_roots() {
        std::vector<std::string> out;
        for (const auto& [v, _] : parent_) {
            std::string r = root(v);
            if (value_.find(r) == value_.end() &&
                std::find(out.begin(), out.end(), r) == out.end())
                out.push_back(r);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    VarBindings snapshot() const { return *this; }

  private:
    std::map<std::string, std::string> parent_;
    std::map<std::string, TermPtr> value_;

    std::string root(const std::string& v) {
        std::string cur = v;
        auto it = parent_.find(cur);
        if (it == parent_.end()) {
            parent_[cur] = cur;
            return cur;
        }
        while (parent_[cur] != cur) cur = parent_[cur];
        parent_[v] = cur;
        return cur;
    }

    bool merge(const std::string& a, const std::string& b) {
        std::string ra = root(a), rb = root(b);
        if (ra == rb) return true;
        auto va = value_.find(ra);
        auto vb = value_.find(rb);
        if (va != value_.end() && vb != value_.end())
            return term_equal(va->second, vb->second);
        parent_[ra] = rb;
        if (va != value_.end() && vb == value_.end()) {
            value_[rb] = va->second;
            value_.erase(ra);
        }
        return true;
    }
};

struct RuleInstance {
    GroundAtom head;
    std::vector<GroundAtom> pos;
    std::vector<GroundAtom> neg;
    int def_index;
    int clause_ordinal;

    std::string key() const {
        std::string k = head.key() + "<-";
        for (const auto& a : pos) k += a.key() + ",";
        k += "~";
        for (const auto& a : neg) k += a.key() + ",";
        k += "@" + std::to_string(def_index) + ":" + std::to_string(clause_ordinal);
        return k;
    }
};

class Instantiator {
  public:
    Instantiator(const std::vector<NormalClause>& clauses,
                 std::vector<TermPtr> constants, GroundMode mode)
        : clauses_(clauses), constants_(std::move(constants)), mode_(mode) {}

    std::vector<RuleInstance> run() {
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto& clause : clauses_) {
                VarBindings base(clause);
                bool eqs_ok = true;
                for (const auto& [a, b] : clause.eqs)
                    if (!base.apply_eq(a, b)) {
                        eqs_ok = false;
                        break;
                    }
                if (!eqs_ok) continue;
                expand_pos(clause, base, 0, changed);
            }
        }
        return std::move(instances_);
    }

  private:
    const std::vector<NormalClause>& clauses_;
    std::vector<TermPtr> constants_;
    GroundMode mode_;
    std::vector<RuleInstance> instances_;
    std::set<std::string> instance_keys_;
    std::set<std::string> derivable_;

    bool match_lit(const ClauseLit& lit, const GroundAtom& atom, VarBindings& b) {
        for (std::size_t i = 0; i < lit.args.size(); ++i) {
            const ClauseArg& a = lit.args[i];
            if (a.is_var) {
                if (!b.bind(a.var, atom.args[i])) return false;
            } else if (!term_equal(a.value, atom.args[i])) {
                return false;
            }
        }
        return true;
    }

    std::optional<GroundAtom> resolve_lit(const ClauseLit& lit, VarBindings& b) {
        GroundAtom atom{lit.pred, {}};
        for (const auto& a : lit.args) {
            if (a.is_var) {
                const TermPtr* v = b.resolve(a.var);
                if (v == nullptr) return std::nullopt;
                atom.args.push_back(*v);
            } else {
                atom.args.push_back(a.value);
            }
        }
        return atom;
    }

    void expand_pos(const NormalClause& clause, VarBindings bindings, std::size_t idx,
                    bool& changed) {
        if (idx == clause.pos.size()) {
            finish(clause, std::move(bindings), changed);
            return;
        }
        const ClauseLit& lit = clause.pos[idx];
        if (mode_ == GroundMode::Guided) {
            // Match against currently derivable atoms of this predicate.
            for (const auto& key : derivable_) {
                auto it = derivable_atoms_.find(key);
                const GroundAtom& atom = it->second;
                if (!(atom.pred == lit.pred)) continue;
                VarBindings next = bindings.snapshot();
                if (match_lit(lit, atom, next))
                    expand_pos(clause, std::move(next), idx + 1, changed);
            }
        } else {
            // Full mode: enumerate every constant assignment for the
            // literal's unbound vars, later filtered by nothing (the
            // Herbrand cross product).
            enumerate_lit_args(clause, lit, bindings, 0, idx, changed);
        }
    }

    void enumerate_lit_args(const NormalClause& clause, const ClauseLit& lit,
                            VarBindings& bindings, std::size_t arg_idx,
                            std::size_t pos_idx, bool& changed) {
        if (arg_idx == lit.args.size()) {
            expand_pos(clause, bindings.snapshot(), pos_idx + 1, changed);
            return;
        }
        const ClauseArg& a = lit.args[arg_idx];
        if (!a.is_var || bindings.resolve(a.var) != nullptr) {
            enumerate_lit_args(clause, lit, bindings, arg_idx + 1, pos_idx, changed);
            return;
        }
        for (const auto& c : constants_) {
            VarBindings next = bindings.snapshot();
            if (next.bind(a.var, c))
                enumerate_lit_args(clause, lit, next, arg_idx + 1, pos_idx, changed);
        }
    }

    void finish(const NormalClause& clause, VarBindings bindings, bool& changed) {
        // Any vars still unbound (head-only or neg-only vars) range over the
        // whole constant pool.
        std::vector<std::string> free = bindings.unbound_roots();
        finish_free(clause, std::move(bindings), free, 0, changed);
    }

    void finish_free(const NormalClause& clause, VarBindings bindings,
                     const std::vector<std::string>& free, std::size_t idx,
                     bool& changed) {
        if (idx < free.size()) {
            for (const auto& c : constants_) {
                VarBindings next = bindings.snapshot();
                if (next.bind(free[idx], c))
                    finish_free(clause, std::move(next), free, idx + 1, changed);
            }
            return;
        }

        RuleInstance inst;
        ClauseLit head_lit{clause.head, {}};
        for (const auto& v : clause.head_vars)
            head_lit.args.push_back(ClauseArg{true, v, nullptr});
        auto head = resolve_lit(head_lit, bindings);
        if (!head.has_value()) return; // arity-0 heads always resolve
        inst.head = *head;
        for (const auto& lit : clause.pos) {
            auto atom = resolve_lit(lit, bindings);
            if (!atom.has_value()) return;
            inst.pos.push_back(*atom);
        }
        for (const auto& lit : clause.neg) {
            auto atom = resolve_lit(lit, bindings);
            if (!atom.has_value()) return;
            inst.neg.push_back(*atom);
        }
        inst.def_index = clause.def_index;
        inst.clause_ordinal = clause.clause_ordinal;

        if (instance_keys_.insert(inst.key()).second) {
            instances_.push_back(inst);
            changed = true;
        }
        std::string head_key = inst.head.key();
        if (derivable_.insert(head_key).second) {
            derivable_atoms_.emplace(head_key, inst.head);
            changed = true;
        }
    }

    std::map<std::string, GroundAtom> derivable_atoms_;
};

} // namespace

GroundProgram ground(const Program& p, const std::set<PredKey>& cone,
                     const std::vector<TermPtr>& extra_constants, GroundMode mode) {
    GroundProgram out;
    if (cone.empty()) {
        out.rebuild_index();
        return out;
    }

    std::vector<NormalClause> clauses;
    std::vector<PredKey> ordered(cone.begin(), cone.end());
    std::sort(ordered.begin(), ordered.end(), [&](const PredKey& a, const PredKey& b) {
        return p.find(a)->def_index < p.find(b)->def_index;
    });
    for (const auto& key : ordered) {
        const RelationDef* def = p.find(key);
        if (def == nullptr)
            throw Diagnostic(DiagCode::UndefinedRelation,
                             "cannot ground undefined relation " + key.display());
        if (def->builtin) continue;
        auto flat = flatten_relation(p, *def);
        clauses.insert(clauses.end(), flat.begin(), flat.end());
    }

    std::vector<TermPtr> constants = herbrand_constants(p, cone);
    for (const auto& c : extra_constants) {
        bool present = false;
        for (const auto& existing : constants)
            if (term_equal(existing, c)) {
                present = true;
                break;
            }
        if (!present) constants.push_back(c);
    }
    std::sort(constants.begin(), constants.end(),
              [](const TermPtr& a, const TermPtr& b) { return term_compare(a, b) < 0; });

    Instantiator inst(clauses, constants, mode);
    std::vector<RuleInstance> instances = inst.run();

    // Intern atoms in canonical order, then rules sorted by provenance.
    std::vector<GroundAtom> atom_pool;
    std::set<std::string> atom_seen;
    auto note_atom = [&](const GroundAtom& a) {
        if (atom_seen.insert(a.key()).second) atom_pool.push_back(a);
    };
    for (const auto& i : instances) {
        note_atom(i.head);
        for (const auto& a : i.pos) note_atom(a);
        for (const auto& a : i.neg) note_atom(a);
    }
    std::sort(atom_pool.begin(), atom_pool.end(),
              [](const GroundAtom& a, const GroundAtom& b) {
                  return ground_atom_compare(a, b) < 0;
              });
    out.atoms = std::move(atom_pool);
    out.rebuild_index();

    for (const auto& i : instances) {
        GroundRule r;
        r.head = out.find_atom(i.head);
        for (const auto& a : i.pos) r.pos.push_back(out.find_atom(a));
        for (const auto& a : i.neg) r.neg.push_back(out.find_atom(a));
        std::sort(r.pos.begin(), r.pos.end());
        std::sort(r.neg.begin(), r.neg.end());
        r.def_index = i.def_index;
        r.clause_ordinal = i.clause_ordinal;
        out.rules.push_back(std::move(r));
    }
    std::sort(out.rules.begin(), out.rules.end(),
              [](const GroundRule& a, const GroundRule& b) {
                  if (a.def_index != b.def_index) return a.def_index < b.def_index;
                  if (a.clause_ordinal != b.clause_ordinal)
                      return a.clause_ordinal < b.clause_ordinal;
                  if (a.head != b.head) return a.head < b.head;
                  if (a.pos != b.pos) return a.pos < b.pos;
                  return a.neg < b.neg;
              });
    out.rules.erase(std::unique(out.rules.begin(), out.rules.end(),
                                [](const GroundRule& a, const GroundRule& b) {
                                    return a.head == b.head && a.pos == b.pos &&
                                           a.neg == b.neg;
                                }),
                    out.rules.end());
    return out;
}

} // namespace stablerel
