#ifndef STABLEREL_PROGRAM_HPP
#define STABLEREL_PROGRAM_HPP

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "stablerel/term.hpp"

namespace stablerel {

// A relation is keyed by name and arity; p/1 and p/2 are distinct.
struct PredKey {
    std::string name;
    int arity = 0;

    bool operator==(const PredKey& o) const { return name == o.name && arity == o.arity; }
    bool operator<(const PredKey& o) const {
        if (name != o.name) return name < o.name;
        return arity < o.arity;
    }
    std::string display() const { return name + "/" + std::to_string(arity); }
};

// Term template inside a relation body: like Term, but variables are names
// resolved at call time (params, fresh bindings, query vars).
class TermTpl;
using TermTplPtr = std::shared_ptr<const TermTpl>;

class TermTpl {
  public:
    enum class Kind { Var, Sym, Num, Nil, Pair };

    static TermTplPtr var(std::string name);
    static TermTplPtr sym(std::string name);
    static TermTplPtr num(std::int64_t value);
    static TermTplPtr nil();
    static TermTplPtr pair(TermTplPtr head, TermTplPtr tail);
    static TermTplPtr from_ground(const TermPtr& t);

    Kind kind() const { return kind_; }
    bool is_var() const { return kind_ == Kind::Var; }
    const std::string& var_name() const { return name_; }
    const std::string& sym_name() const { return name_; }
    std::int64_t num_value() const { return num_; }
    const TermTplPtr& head() const { return head_; }
    const TermTplPtr& tail() const { return tail_; }

    // True when no Var occurs anywhere beneath this node.
    bool is_ground() const;
    // Ground templates convert directly to terms.
    TermPtr to_term() const;
    void collect_vars(std::vector<std::string>& out) const;

  private:
    Kind kind_;
    std::string name_;
    std::int64_t num_ = 0;
    TermTplPtr head_, tail_;

    explicit TermTpl(Kind k) : kind_(k) {}
};

std::string tpl_to_string(const TermTplPtr& t);

// Goal AST. A relation body is a list of goals (implicit conjunction).
class GoalExpr;
using GoalPtr = std::shared_ptr<const GoalExpr>;

class GoalExpr {
  public:
    enum class Kind { Unify, Succeed, Fail, Fresh, Conde, Call, Noto };

    static GoalPtr unify(TermTplPtr a, TermTplPtr b);
    static GoalPtr succeed();
    static GoalPtr fail();
    static GoalPtr fresh(std::vector<std::string> vars, std::vector<GoalPtr> body);
    static GoalPtr conde(std::vector<std::vector<GoalPtr>> branches);
    static GoalPtr call(std::string relation, std::vector<TermTplPtr> args);
    // inner must be a Call; enforced by the parser/definer with a diagnostic.
    static GoalPtr noto(GoalPtr inner);

    Kind kind() const { return kind_; }
    const TermTplPtr& lhs() const { return t1_; }
    const TermTplPtr& rhs() const { return t2_; }
    const std::vector<std::string>& fresh_vars() const { return vars_; }
    const std::vector<GoalPtr>& body() const { return body_; }
    const std::vector<std::vector<GoalPtr>>& branches() const { return branches_; }
    const std::string& callee() const { return callee_; }
    const std::vector<TermTplPtr>& args() const { return args_; }
    const GoalPtr& inner() const { return inner_; }

  private:
    Kind kind_;
    TermTplPtr t1_, t2_;
    std::vector<std::string> vars_;
    std::vector<GoalPtr> body_;
    std::vector<std::vector<GoalPtr>> branches_;
    std::string callee_;
    std::vector<TermTplPtr> args_;
    GoalPtr inner_;

    explicit GoalExpr(Kind k) : kind_(k) {}
};

std::string goal_to_string(const GoalPtr& g);

struct RelationDef {
    std::string name;
    int arity = 0;
    std::vector<std::string> params;
    std::vector<GoalPtr> body; // implicit conjunction
    bool negated = false;      // result of has_negation
    bool builtin = false;      // nullo/conso; never registered, no graph node
    int def_index = 0;         // definition order, for deterministic grounding

    PredKey key() const { return PredKey{name, arity}; }
};

// Syntax analysis: true iff a noto occurs anywhere under nested conde/fresh/
// conjunction. Deliberately does not recurse into callees; transitive
// negation is the dependency module's job.
bool has_negation(const std::vector<GoalPtr>& body);
bool has_negation(const GoalPtr& goal);

// The relation store plus the registered subset that requires unavoidable-
// contradiction checking. Under fine-grained gating (the default) a relation
// is registered iff its own body contains noto; under legacy-coarse gating
// every defined relation is registered.
class Program {
  public:
    Program();

    struct DefineOptions {
        bool legacy_coarse = false;
        bool allow_redefine = false;
    };
    // Stores the relation and updates the registry. Returns a warning string
    // when an existing relation was replaced (REPL redefinition).
    std::optional<std::string> define(RelationDef def, const DefineOptions& opts);

    const RelationDef* find(const PredKey& key) const;
    const RelationDef* find(const std::string& name, int arity) const;
    bool is_registered(const PredKey& key) const;

    const std::map<PredKey, RelationDef>& relations() const { return relations_; }
    const std::set<PredKey>& registry() const { return registry_; }
    // Registry in definition order, for reports.
    std::vector<PredKey> registry_ordered() const;

  private:
    std::map<PredKey, RelationDef> relations_;
    std::set<PredKey> registry_;
    int next_def_index_ = 0;
};

// Standard helpers used by the paper's list programs: nullo(l) and
// conso(h, t, l). Definite by construction and never registered.
std::vector<RelationDef> builtin_relations();

} // namespace stablerel

#endif
