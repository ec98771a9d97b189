#ifndef STABLEREL_GROUNDER_HPP
#define STABLEREL_GROUNDER_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "stablerel/program.hpp"

namespace stablerel {

// Ground (variable-free) atom. The key is the canonical printed form and
// doubles as the interning handle.
struct GroundAtom {
    PredKey pred;
    std::vector<TermPtr> args;

    std::string key() const;
};

int ground_atom_compare(const GroundAtom& a, const GroundAtom& b);

// head <- pos..., not neg... with atoms by index into GroundProgram::atoms.
// def_index/clause_ordinal trace the rule to the conde branch it
// instantiates.
struct GroundRule {
    int head = -1;
    std::vector<int> pos;
    std::vector<int> neg;
    int def_index = 0;
    int clause_ordinal = 0;
};

// Propositional image of a predicate cone: every rule instance plus the
// ordered universe of atoms appearing in them.
class GroundProgram {
  public:
    std::vector<GroundAtom> atoms; // canonical order (pred, then args)
    std::vector<GroundRule> rules;

    int find_atom(const GroundAtom& a) const;
    int find_atom(const PredKey& pred, const std::vector<TermPtr>& args) const;
    std::size_t atom_count() const { return atoms.size(); }
    bool empty() const { return rules.empty() && atoms.empty(); }

    // One rule per line: `head :- b1, ..., not c1.`; facts print `head.`
    std::string dump() const;

    void rebuild_index();

  private:
    std::map<std::string, int> index_;
};

// Flattened clause form used by the grounder: conde branches expanded,
// fresh vars alpha-renamed, builtin calls inlined into equations.
struct ClauseArg {
    bool is_var = false;
    std::string var;  // when is_var
    TermPtr value;    // ground otherwise
};

struct ClauseLit {
    PredKey pred;
    std::vector<ClauseArg> args;
};

struct NormalClause {
    PredKey head;
    std::vector<std::string> head_vars; // params, in order
    std::vector<ClauseLit> pos;
    std::vector<ClauseLit> neg;
    std::vector<std::pair<ClauseArg, ClauseArg>> eqs;
    bool always_fail = false;
    int def_index = 0;
    int clause_ordinal = 0;
};

// Expands one relation into clauses. Throws NotGroundable when a body
// builds compound terms (pair templates, conso) or unifies against them.
std::vector<NormalClause> flatten_relation(const Program& p, const RelationDef& def);

// First relation in the cone (definition order) whose body cannot be
// grounded, if any.
std::optional<PredKey> first_non_groundable(const Program& p,
                                            const std::set<PredKey>& cone);

// All Sym/Num constants syntactically appearing in the cone's bodies.
std::vector<TermPtr> herbrand_constants(const Program& p, const std::set<PredKey>& cone);

enum class GroundMode {
    Guided, // instantiate positive body atoms only against derivable atoms
    Full,   // cross product over the Herbrand base, equations as filters
};

// Propositional image of the cone. extra_constants lets the caller add the
// query's constants to the Herbrand universe. All cone members must be
// groundable; the caller is expected to have checked (diagnostics name this
// module otherwise).
GroundProgram ground(const Program& p, const std::set<PredKey>& cone,
                     const std::vector<TermPtr>& extra_constants = {},
                     GroundMode mode = GroundMode::Guided);

} // namespace stablerel

#endif
