#ifndef STABLEREL_TERM_HPP
#define STABLEREL_TERM_HPP

#include <atomic>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace stablerel {

class Term;
using TermPtr = std::shared_ptr<const Term>;

// Logic values: variables, symbols, integers, the empty list, and cons
// cells. Immutable after construction; proper lists are right-nested pairs
// terminated by Nil.
class Term {
  public:
    enum class Kind { Var, Sym, Num, Nil, Pair };

    static TermPtr var(int id);
    static TermPtr sym(std::string name);
    static TermPtr num(std::int64_t value);
    static TermPtr nil();
    static TermPtr pair(TermPtr head, TermPtr tail);
    // Builds a proper list from the given elements.
    static TermPtr list(const std::vector<TermPtr>& elems);

    Kind kind() const { return kind_; }
    bool is_var() const { return kind_ == Kind::Var; }
    bool is_sym() const { return kind_ == Kind::Sym; }
    bool is_num() const { return kind_ == Kind::Num; }
    bool is_nil() const { return kind_ == Kind::Nil; }
    bool is_pair() const { return kind_ == Kind::Pair; }

    int var_id() const { return var_id_; }
    const std::string& sym_name() const { return sym_; }
    std::int64_t num_value() const { return num_; }
    const TermPtr& head() const { return head_; }
    const TermPtr& tail() const { return tail_; }

    bool is_ground() const;

  private:
    Kind kind_;
    int var_id_ = -1;
    std::string sym_;
    std::int64_t num_ = 0;
    TermPtr head_, tail_;

    explicit Term(Kind k) : kind_(k) {}
};

// Structural equality and a total order (used for canonical atom ordering).
bool term_equal(const TermPtr& a, const TermPtr& b);
int term_compare(const TermPtr& a, const TermPtr& b);

// Scheme-ish printing: (a b c), (a . b), 42, sym. Variables print as #<v.n>;
// they should not survive reification.
std::string term_to_string(const TermPtr& t);

// Monotone id source for fresh variables, scoped to an engine session.
class VarSource {
  public:
    TermPtr fresh() { return Term::var(next_.fetch_add(1, std::memory_order_relaxed)); }
    int next_id() const { return next_.load(std::memory_order_relaxed); }

  private:
    std::atomic<int> next_{0};
};

// Triangular substitution: var id -> term, where the term may itself contain
// vars bound elsewhere. Persistent: extend() shares structure with the parent
// so interleaved search branches cheaply.
class Subst {
  public:
    Subst() = default;

    Subst extend(int var_id, TermPtr value) const;
    // Follows bindings until a non-var or an unbound var. Bounded by the
    // number of bindings, so it terminates even on cyclic substitutions.
    TermPtr walk(const TermPtr& t) const;
    // Walks recursively through pairs. Unbounded on cyclic *terms* (possible
    // only with the occurs check off).
    TermPtr walk_deep(const TermPtr& t) const;

    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }

  private:
    struct Node {
        int var;
        TermPtr value;
        std::shared_ptr<const Node> next;
    };
    std::shared_ptr<const Node> head_;
    std::size_t size_ = 0;

    const TermPtr* lookup(int var_id) const;
};

struct UnifyOptions {
    bool occurs_check = false; // miniKanren tradition: off by default
};

// Returns the minimal extension of s making t1 and t2 equal modulo s, or
// nothing. Failure is a value, not a fault.
struct UnifyResult {
    bool ok = false;
    Subst subst;
};
UnifyResult unify(const TermPtr& t1, const TermPtr& t2, const Subst& s,
                  const UnifyOptions& opts = {});

// Reification: deep-walks t and renames residual vars _.0, _.1, ... in
// first-appearance order. The result contains no Var nodes.
TermPtr reify(const TermPtr& t, const Subst& s);

} // namespace stablerel

#endif
