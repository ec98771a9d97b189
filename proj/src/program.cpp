#include "stablerel/program.hpp"

#include <sstream>

#include "stablerel/diagnostics.hpp"

namespace stablerel {

TermTplPtr TermTpl::var(std::string name) {
    auto t = std::shared_ptr<TermTpl>(new TermTpl(Kind::Var));
    t->name_ = std::move(name);
    return t;
}

TermTplPtr TermTpl::sym(std::string name) {
    auto t = std::shared_ptr<TermTpl>(new TermTpl(Kind::Sym));
    t->name_ = std::move(name);
    return t;
}

TermTplPtr TermTpl::num(std::int64_t value) {
    auto t = std::shared_ptr<TermTpl>(new TermTpl(Kind::Num));
    t->num_ = value;
    return t;
}

TermTplPtr TermTpl::nil() {
    static const TermTplPtr instance = std::shared_ptr<TermTpl>(new TermTpl(Kind::Nil));
    return instance;
}

TermTplPtr TermTpl::pair(TermTplPtr head, TermTplPtr tail) {
    auto t = std::shared_ptr<TermTpl>(new TermTpl(Kind::Pair));
    t->head_ = std::move(head);
    t->tail_ = std::move(tail);
    return t;
}

TermTplPtr TermTpl::from_ground(const TermPtr& t) {
    switch (t->kind()) {
    case Term::Kind::Sym: return sym(t->sym_name());
    case Term::Kind::Num: return num(t->num_value());
    case Term::Kind::Nil: return nil();
    case Term::Kind::Pair:
        return pair(from_ground(t->head()), from_ground(t->tail()));
    case Term::Kind::Var:
        throw std::logic_error("from_ground on a term containing a variable");
    }
    throw std::logic_error("unreachable");
}

bool TermTpl::is_ground() const {
    switch (kind_) {
    case Kind::Var: return false;
    case Kind::Pair: return head_->is_ground() && tail_->is_ground();
    default: return true;
    }
}

TermPtr TermTpl::to_term() const {
    switch (kind_) {
    case Kind::Sym: return Term::sym(name_);
    case Kind::Num: return Term::num(num_);
    case Kind::Nil: return Term::nil();
    case Kind::Pair: return Term::pair(head_->to_term(), tail_->to_term());
    case Kind::Var:
        throw std::logic_error("to_term on a non-ground template");
    }
    throw std::logic_error("unreachable");
}

void TermTpl::collect_vars(std::vector<std::string>& out) const {
    switch (kind_) {
    case Kind::Var:
        out.push_back(name_);
        break;
    case Kind::Pair:
        head_->collect_vars(out);
        tail_->collect_vars(out);
        break;
    default:
        break;
    }
}

std::string tpl_to_string(const TermTplPtr& t) {
    switch (t->kind()) {
    case TermTpl::Kind::Var: return t->var_name();
    case TermTpl::Kind::Sym: return "'" + t->sym_name();
    case TermTpl::Kind::Num: return std::to_string(t->num_value());
    case TermTpl::Kind::Nil: return "'()";
    case TermTpl::Kind::Pair: {
        std::string out = "(cons " + tpl_to_string(t->head());
        out += " " + tpl_to_string(t->tail()) + ")";
        return out;
    }
    }
    return "?";
}

GoalPtr GoalExpr::unify(TermTplPtr a, TermTplPtr b) {
    auto g = std::shared_ptr<GoalExpr>(new GoalExpr(Kind::Unify));
    g->t1_ = std::move(a);
    g->t2_ = std::move(b);
    return g;
}

GoalPtr GoalExpr::succeed() {
    static const GoalPtr instance = std::shared_ptr<GoalExpr>(new GoalExpr(Kind::Succeed));
    return instance;
}

GoalPtr GoalExpr::fail() {
    static const GoalPtr instance = std::shared_ptr<GoalExpr>(new GoalExpr(Kind::Fail));
    return instance;
}

GoalPtr GoalExpr::fresh(std::vector<std::string> vars, std::vector<GoalPtr> body) {
    auto g = std::shared_ptr<GoalExpr>(new GoalExpr(Kind::Fresh));
    g->vars_ = std::move(vars);
    g->body_ = std::move(body);
    return g;
}

GoalPtr GoalExpr::conde(std::vector<std::vector<GoalPtr>> branches) {
    if (branches.empty())
        throw Diagnostic(DiagCode::InvalidGoal, "conde requires at least one branch");
    for (const auto& b : branches)
        if (b.empty())
            throw Diagnostic(DiagCode::InvalidGoal, "conde branch must contain a goal");
    auto g = std::shared_ptr<GoalExpr>(new GoalExpr(Kind::Conde));
    g->branches_ = std::move(branches);
    return g;
}

GoalPtr GoalExpr::call(std::string relation, std::vector<TermTplPtr> args) {
    auto g = std::shared_ptr<GoalExpr>(new GoalExpr(Kind::Call));
    g->callee_ = std::move(relation);
    g->args_ = std::move(args);
    return g;
}

GoalPtr GoalExpr::noto(GoalPtr inner) {
    if (inner->kind() != Kind::Call)
        throw Diagnostic(DiagCode::InvalidGoal,
                         "noto must wrap a relation call, not a compound goal");
    auto g = std::shared_ptr<GoalExpr>(new GoalExpr(Kind::Noto));
    g->inner_ = std::move(inner);
    return g;
}

std::string goal_to_string(const GoalPtr& g) {
    std::ostringstream os;
    switch (g->kind()) {
    case GoalExpr::Kind::Unify:
        os << "(== " << tpl_to_string(g->lhs()) << " " << tpl_to_string(g->rhs()) << ")";
        break;
    case GoalExpr::Kind::Succeed:
        os << "succeed";
        break;
    case GoalExpr::Kind::Fail:
        os << "fail";
        break;
    case GoalExpr::Kind::Fresh: {
        os << "(fresh (";
        for (std::size_t i = 0; i < g->fresh_vars().size(); ++i)
            os << (i ? " " : "") << g->fresh_vars()[i];
        os << ")";
        for (const auto& sub : g->body()) os << " " << goal_to_string(sub);
        os << ")";
        break;
    }
    case GoalExpr::Kind::Conde: {
        os << "(conde";
        for (const auto& br : g->branches()) {
            os << " [";
            for (std::size_t i = 0; i < br.size(); ++i)
                os << (i ? " " : "") << goal_to_string(br[i]);
            os << "]";
        }
        os << ")";
        break;
    }
    case GoalExpr::Kind::Call: {
        os << "(" << g->callee();
        for (const auto& a : g->args()) os << " " << tpl_to_string(a);
        os << ")";
        break;
    }
    case GoalExpr::Kind::Noto:
        os << "(noto " << goal_to_string(g->inner()) << ")";
        break;
    }
    return os.str();
}

bool has_negation(const GoalPtr& goal) {
    switch (goal->kind()) {
    case GoalExpr::Kind::Noto:
        return true;
    case GoalExpr::Kind::Conde:
        for (const auto& branch : goal->branches())
            if (has_negation(branch)) return true;
        return false;
    case GoalExpr::Kind::Fresh:
        return has_negation(goal->body());
    default:
        // Bare goals (calls, ==, succeed, fail) answer false without looking
        // at the callee's body.
        return false;
    }
}

bool has_negation(const std::vector<GoalPtr>& body) {
    for (const auto& g : body)
        if (has_negation(g)) return true;
    return false;
}

Program::Program() {
    for (auto& def : builtin_relations()) {
        def.def_index = next_def_index_++;
        relations_.emplace(def.key(), std::move(def));
    }
}

std::optional<std::string> Program::define(RelationDef def, const DefineOptions& opts) {
    if (static_cast<int>(def.params.size()) != def.arity)
        throw std::logic_error("relation arity does not match parameter count");
    {
        std::set<std::string> seen;
        for (const auto& p : def.params)
            if (!seen.insert(p).second)
                throw Diagnostic(DiagCode::InvalidGoal,
                                 "duplicate parameter '" + p + "' in " + def.key().display());
    }

    def.negated = has_negation(def.body);
    PredKey key = def.key();

    std::optional<std::string> warning;
    auto existing = relations_.find(key);
    if (existing != relations_.end()) {
        if (existing->second.builtin)
            throw Diagnostic(DiagCode::DuplicateDefinition,
                             key.display() + " is a builtin relation and cannot be redefined");
        if (!opts.allow_redefine)
            throw Diagnostic(DiagCode::DuplicateDefinition,
                             key.display() + " is already defined");
        warning = "redefining " + key.display();
        def.def_index = existing->second.def_index; // keep original position
        registry_.erase(key);
        relations_.erase(existing);
    } else {
        def.def_index = next_def_index_++;
    }

    bool reg = opts.legacy_coarse ? true : def.negated;
    relations_.emplace(key, std::move(def));
    if (reg) registry_.insert(key);
    return warning;
}

const RelationDef* Program::find(const PredKey& key) const {
    auto it = relations_.find(key);
    return it == relations_.end() ? nullptr : &it->second;
}

const RelationDef* Program::find(const std::string& name, int arity) const {
    return find(PredKey{name, arity});
}

bool Program::is_registered(const PredKey& key) const {
    return registry_.count(key) > 0;
}

std::vector<PredKey> Program::registry_ordered() const {
    std::vector<PredKey> out(registry_.begin(), registry_.end());
    std::sort(out.begin(), out.end(), [this](const PredKey& a, const PredKey& b) {
        return find(a)->def_index < find(b)->def_index;
    });
    return out;
}

std::vector<RelationDef> builtin_relations() {
    std::vector<RelationDef> out;

    RelationDef nullo;
    nullo.name = "nullo";
    nullo.arity = 1;
    nullo.params = {"l"};
    nullo.body = {GoalExpr::unify(TermTpl::var("l"), TermTpl::nil())};
    nullo.builtin = true;
    out.push_back(std::move(nullo));

    RelationDef conso;
    conso.name = "conso";
    conso.arity = 3;
    conso.params = {"h", "t", "l"};
    conso.body = {GoalExpr::unify(
        TermTpl::pair(TermTpl::var("h"), TermTpl::var("t")), TermTpl::var("l"))};
    conso.builtin = true;
    out.push_back(std::move(conso));

    return out;
}

} // namespace stablerel
