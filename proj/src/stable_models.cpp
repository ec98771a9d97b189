#include "stablerel/stable_models.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "stablerel/diagnostics.hpp"

namespace stablerel {

std::size_t Interpretation::count() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
}

std::vector<int> Interpretation::members() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < size_; ++i)
        if (test(static_cast<int>(i))) out.push_back(static_cast<int>(i));
    return out;
}

bool Interpretation::subset_of(const Interpretation& o) const {
    for (std::size_t w = 0; w < words_.size(); ++w)
        if (words_[w] & ~o.words_[w]) return false;
    return true;
}

bool interpretation_less(const Interpretation& a, const Interpretation& b) {
    std::size_t ca = a.count(), cb = b.count();
    if (ca != cb) return ca < cb;
    for (std::size_t i = 0; i < a.universe_size(); ++i) {
        bool ta = a.test(static_cast<int>(i));
        bool tb = b.test(static_cast<int>(i));
        if (ta != tb) return ta; // holding the smaller index sorts first
    }
    return false;
}

GroundProgram reduct(const GroundProgram& pi, const Interpretation& m) {
    GroundProgram out;
    out.atoms = pi.atoms;
    for (const auto& r : pi.rules) {
        bool deleted = false;
        for (int n : r.neg)
            if (m.test(n)) {
                deleted = true;
                break;
            }
        if (deleted) continue;
        GroundRule keep = r;
        keep.neg.clear();
        out.rules.push_back(std::move(keep));
    }
    out.rebuild_index();
    return out;
}

Interpretation minimal_model(const GroundProgram& definite) {
    for (const auto& r : definite.rules)
        if (!r.neg.empty())
            throw std::logic_error("minimal_model on a program with negative literals");

    Interpretation m(definite.atom_count());
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& r : definite.rules) {
            if (m.test(r.head)) continue;
            bool fire = true;
            for (int b : r.pos)
                if (!m.test(b)) {
                    fire = false;
                    break;
                }
            if (fire) {
                m.set(r.head);
                changed = true;
            }
        }
    }
    return m;
}

bool is_stable(const GroundProgram& pi, const Interpretation& m) {
    return minimal_model(reduct(pi, m)) == m;
}

namespace {

bool any_negative_literal(const GroundProgram& pi) {
    for (const auto& r : pi.rules)
        if (!r.neg.empty()) return true;
    return false;
}

void sort_models(std::vector<Interpretation>& models) {
    std::sort(models.begin(), models.end(), interpretation_less);
    models.erase(std::unique(models.begin(), models.end()), models.end());
}

// Verbatim path: every subset of the atom universe, by increasing size then
// lexicographic index order, filtered through is_stable.
StableModelSet oracle_enumerate(const GroundProgram& pi, int cap) {
    const int n = static_cast<int>(pi.atom_count());
    if (n > cap)
        throw Diagnostic(DiagCode::CapExceeded,
                         "ground program too large for contradiction check (" +
                             std::to_string(n) + " atoms)");
    StableModelSet out;
    for (int k = 0; k <= n; ++k) {
        // k-combinations of {0..n-1} in lexicographic order.
        std::vector<int> idx(k);
        for (int i = 0; i < k; ++i) idx[i] = i;
        while (true) {
            Interpretation m(static_cast<std::size_t>(n));
            for (int i : idx) m.set(i);
            if (is_stable(pi, m)) out.models.push_back(m);
            if (k == 0) break;
            int i = k - 1;
            while (i >= 0 && idx[i] == n - k + i) --i;
            if (i < 0) break;
            ++idx[i];
            for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
    return out;
}

// Atoms outside the least fixpoint that ignores negation are false in every
// stable model (M = lfp(reduct) and the reduct's rules are a subset with
// negation erased). Rules needing such an atom positively are dropped;
// negative literals on them are erased.
GroundProgram simplify_for_enumeration(const GroundProgram& pi) {
    Interpretation derivable(pi.atom_count());
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& r : pi.rules) {
            if (derivable.test(r.head)) continue;
            bool fire = true;
            for (int b : r.pos)
                if (!derivable.test(b)) {
                    fire = false;
                    break;
                }
            if (fire) {
                derivable.set(r.head);
                changed = true;
            }
        }
    }

    GroundProgram out;
    out.atoms = pi.atoms;
    for (const auto& r : pi.rules) {
        bool dead = false;
        for (int b : r.pos)
            if (!derivable.test(b)) {
                dead = true;
                break;
            }
        if (dead) continue;
        GroundRule keep = r;
        keep.neg.clear();
        for (int b : r.neg)
            if (derivable.test(b)) keep.neg.push_back(b);
        out.rules.push_back(std::move(keep));
    }
    out.rebuild_index();
    return out;
}

StableModelSet pruned_enumerate(const GroundProgram& pi, int cap) {
    GroundProgram simple = simplify_for_enumeration(pi);

    std::vector<int> candidates; // atoms occurring in some negative body
    {
        std::vector<bool> seen(simple.atom_count(), false);
        for (const auto& r : simple.rules)
            for (int b : r.neg)
                if (!seen[b]) {
                    seen[b] = true;
                    candidates.push_back(b);
                }
        std::sort(candidates.begin(), candidates.end());
    }
    const int c = static_cast<int>(candidates.size());
    if (c > cap)
        throw Diagnostic(DiagCode::CapExceeded,
                         "ground program too large for contradiction check (" +
                             std::to_string(c) + " atoms)");

    StableModelSet out;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << c); ++bits) {
        Interpretation alpha(pi.atom_count());
        for (int i = 0; i < c; ++i)
            if ((bits >> i) & 1) alpha.set(candidates[i]);
        Interpretation m = minimal_model(reduct(simple, alpha));
        // Consistent iff the fixpoint agrees with the guessed negation
        // assignment on every candidate atom.
        bool ok = true;
        for (int a : candidates)
            if (m.test(a) != alpha.test(a)) {
                ok = false;
                break;
            }
        if (ok) out.models.push_back(std::move(m));
    }
    sort_models(out.models);
    return out;
}

} // namespace

Interpretation stratified_eval(const GroundProgram& pi,
                               const std::vector<int>& atom_strata) {
    if (atom_strata.size() != pi.atom_count())
        throw std::logic_error("stratified_eval: strata size mismatch");
    int top = 0;
    for (int s : atom_strata) top = std::max(top, s);

    Interpretation m(pi.atom_count());
    for (int stratum = 0; stratum <= top; ++stratum) {
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto& r : pi.rules) {
                if (atom_strata[r.head] != stratum || m.test(r.head)) continue;
                bool fire = true;
                for (int b : r.pos) {
                    if (atom_strata[b] > stratum)
                        throw std::logic_error(
                            "stratified_eval: positive literal above head stratum");
                    if (!m.test(b)) {
                        fire = false;
                        break;
                    }
                }
                for (int b : r.neg) {
                    if (!fire) break;
                    if (atom_strata[b] >= stratum)
                        throw std::logic_error(
                            "stratified_eval: negative literal not strictly below head");
                    if (m.test(b)) fire = false;
                }
                if (fire) {
                    m.set(r.head);
                    changed = true;
                }
            }
        }
    }
    return m;
}

SolveResult enumerate_stable_models(const GroundProgram& pi, const SolveOptions& opts) {
    SolveResult res;
    if (opts.oracle) {
        res.models = oracle_enumerate(pi, opts.cap);
        res.path = SolvePath::Oracle;
        return res;
    }
    if (!any_negative_literal(pi)) {
        res.models.models.push_back(minimal_model(pi));
        res.path = SolvePath::MinimalModel;
        return res;
    }
    if (opts.atom_strata != nullptr) {
        res.models.models.push_back(stratified_eval(pi, *opts.atom_strata));
        res.path = SolvePath::Stratified;
        return res;
    }
    res.models = pruned_enumerate(pi, opts.cap);
    res.path = SolvePath::Enumerated;
    return res;
}

} // namespace stablerel
