#include "stablerel/term.hpp"

#include <map>
#include <sstream>

namespace stablerel {

TermPtr Term::var(int id) {
    auto t = std::shared_ptr<Term>(new Term(Kind::Var));
    t->var_id_ = id;
    return t;
}

TermPtr Term::sym(std::string name) {
    auto t = std::shared_ptr<Term>(new Term(Kind::Sym));
    t->sym_ = std::move(name);
    return t;
}

TermPtr Term::num(std::int64_t value) {
    auto t = std::shared_ptr<Term>(new Term(Kind::Num));
    t->num_ = value;
    return t;
}

TermPtr Term::nil() {
    static const TermPtr instance = std::shared_ptr<Term>(new Term(Kind::Nil));
    return instance;
}

TermPtr Term::pair(TermPtr head, TermPtr tail) {
    auto t = std::shared_ptr<Term>(new Term(Kind::Pair));
    t->head_ = std::move(head);
    t->tail_ = std::move(tail);
    return t;
}

TermPtr Term::list(const std::vector<TermPtr>& elems) {
    TermPtr acc = nil();
    for (auto it = elems.rbegin(); it != elems.rend(); ++it)
        acc = pair(*it, acc);
    return acc;
}

bool Term::is_ground() const {
    switch (kind_) {
    case Kind::Var: return false;
    case Kind::Pair: return head_->is_ground() && tail_->is_ground();
    default: return true;
    }
}

bool term_equal(const TermPtr& a, const TermPtr& b) {
    return term_compare(a, b) == 0;
}

int term_compare(const TermPtr& a, const TermPtr& b) {
    if (a.get() == b.get()) return 0;
    // Order across kinds: Var < Sym < Num < Nil < Pair.
    auto rank = [](Term::Kind k) {
        switch (k) {
        case Term::Kind::Var: return 0;
        case Term::Kind::Sym: return 1;
        case Term::Kind::Num: return 2;
        case Term::Kind::Nil: return 3;
        case Term::Kind::Pair: return 4;
        }
        return 5;
    };
    if (rank(a->kind()) != rank(b->kind()))
        return rank(a->kind()) < rank(b->kind()) ? -1 : 1;
    switch (a->kind()) {
    case Term::Kind::Var:
        return a->var_id() == b->var_id() ? 0 : (a->var_id() < b->var_id() ? -1 : 1);
    case Term::Kind::Sym:
        return a->sym_name().compare(b->sym_name()) < 0   ? -1
               : a->sym_name().compare(b->sym_name()) > 0 ? 1
                                                          : 0;
    case Term::Kind::Num:
        return a->num_value() == b->num_value() ? 0
               : a->num_value() < b->num_value() ? -1 : 1;
    case Term::Kind::Nil:
        return 0;
    case Term::Kind::Pair: {
        int c = term_compare(a->head(), b->head());
        if (c != 0) return c;
        return term_compare(a->tail(), b->tail());
    }
    }
    return 0;
}

namespace {

void print_term(std::ostream& os, const TermPtr& t) {
    switch (t->kind()) {
    case Term::Kind::Var:
        os << "#<v." << t->var_id() << ">";
        break;
    case Term::Kind::Sym:
        os << t->sym_name();
        break;
    case Term::Kind::Num:
        os << t->num_value();
        break;
    case Term::Kind::Nil:
        os << "()";
        break;
    case Term::Kind::Pair: {
        os << "(";
        const Term* cur = t.get();
        bool first = true;
        while (true) {
            if (!first) os << " ";
            print_term(os, cur->head());
            first = false;
            if (cur->tail()->is_pair()) {
                cur = cur->tail().get();
            } else if (cur->tail()->is_nil()) {
                break;
            } else {
                os << " . ";
                print_term(os, cur->tail());
                break;
            }
        }
        os << ")";
        break;
    }
    }
}

} // namespace

std::string term_to_string(const TermPtr& t) {
    std::ostringstream os;
    print_term(os, t);
    return os.str();
}

Subst Subst::extend(int var_id, TermPtr value) const {
    Subst out;
    out.head_ = std::make_shared<Node>(Node{var_id, std::move(value), head_});
    out.size_ = size_ + 1;
    return out;
}

const TermPtr* Subst::lookup(int var_id) const {
    for (const Node* n = head_.get(); n != nullptr; n = n->next.get())
        if (n->var == var_id) return &n->value;
    return nullptr;
}

TermPtr Subst::walk(const TermPtr& t) const {
    TermPtr cur = t;
    // Step bound guards against pathological cycles when the occurs check
    // is off; a chain can be at most size_ long otherwise.
    for (std::size_t steps = 0; steps <= size_; ++steps) {
        if (!cur->is_var()) return cur;
        const TermPtr* bound = lookup(cur->var_id());
        if (bound == nullptr) return cur;
        cur = *bound;
    }
    return cur;
}

TermPtr Subst::walk_deep(const TermPtr& t) const {
    TermPtr w = walk(t);
    if (w->is_pair())
        return Term::pair(walk_deep(w->head()), walk_deep(w->tail()));
    return w;
}

namespace {

bool occurs(int var_id, const TermPtr& t, const Subst& s) {
    TermPtr w = s.walk(t);
    if (w->is_var()) return w->var_id() == var_id;
    if (w->is_pair())
        return occurs(var_id, w->head(), s) || occurs(var_id, w->tail(), s);
    return false;
}

bool unify_rec(const TermPtr& t1, const TermPtr& t2, Subst& s,
               const UnifyOptions& opts) {
    TermPtr a = s.walk(t1);
    TermPtr b = s.walk(t2);
    if (a->is_var() && b->is_var() && a->var_id() == b->var_id()) return true;
    if (a->is_var()) {
        if (opts.occurs_check && occurs(a->var_id(), b, s)) return false;
        s = s.extend(a->var_id(), b);
        return true;
    }
    if (b->is_var()) {
        if (opts.occurs_check && occurs(b->var_id(), a, s)) return false;
        s = s.extend(b->var_id(), a);
        return true;
    }
    if (a->kind() != b->kind()) return false;
    switch (a->kind()) {
    case Term::Kind::Sym: return a->sym_name() == b->sym_name();
    case Term::Kind::Num: return a->num_value() == b->num_value();
    case Term::Kind::Nil: return true;
    case Term::Kind::Pair:
        return unify_rec(a->head(), b->head(), s, opts) &&
               unify_rec(a->tail(), b->tail(), s, opts);
    default: return false;
    }
}

TermPtr reify_rec(const TermPtr& t, const Subst& s,
                  std::map<int, TermPtr>& names) {
    TermPtr w = s.walk(t);
    if (w->is_var()) {
        auto it = names.find(w->var_id());
        if (it != names.end()) return it->second;
        TermPtr name = Term::sym("_." + std::to_string(names.size()));
        names.emplace(w->var_id(), name);
        return name;
    }
    if (w->is_pair()) {
        // Sequence explicitly: argument evaluation order would otherwise
        // decide which var gets _.0.
        TermPtr head = reify_rec(w->head(), s, names);
        TermPtr tail = reify_rec(w->tail(), s, names);
        return Term::pair(std::move(head), std::move(tail));
    }
    return w;
}

} // namespace

UnifyResult unify(const TermPtr& t1, const TermPtr& t2, const Subst& s,
                  const UnifyOptions& opts) {
    UnifyResult res;
    Subst out = s;
    if (unify_rec(t1, t2, out, opts)) {
        res.ok = true;
        res.subst = std::move(out);
    }
    return res;
}

TermPtr reify(const TermPtr& t, const Subst& s) {
    std::map<int, TermPtr> names;
    return reify_rec(t, s, names);
}

} // namespace stablerel
