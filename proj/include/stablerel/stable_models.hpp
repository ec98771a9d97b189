#ifndef STABLEREL_STABLE_MODELS_HPP
#define STABLEREL_STABLE_MODELS_HPP

#include <cstdint>
#include <vector>

#include "stablerel/grounder.hpp"

namespace stablerel {

// Subset of a ground program's atom universe.
class Interpretation {
  public:
    Interpretation() = default;
    explicit Interpretation(std::size_t n) : size_(n), words_((n + 63) / 64, 0) {}

    std::size_t universe_size() const { return size_; }
    bool test(int i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
    void set(int i, bool v = true) {
        std::uint64_t mask = std::uint64_t{1} << (i & 63);
        if (v)
            words_[i >> 6] |= mask;
        else
            words_[i >> 6] &= ~mask;
    }
    std::size_t count() const;
    std::vector<int> members() const;

    bool operator==(const Interpretation& o) const {
        return size_ == o.size_ && words_ == o.words_;
    }
    bool operator!=(const Interpretation& o) const { return !(*this == o); }

    // True when every member of this is a member of o.
    bool subset_of(const Interpretation& o) const;

  private:
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

// Canonical model order: increasing true-atom count, then lexicographic on
// the sorted index sequence (the model holding the smaller first index
// sorts first).
bool interpretation_less(const Interpretation& a, const Interpretation& b);

struct StableModelSet {
    std::vector<Interpretation> models; // canonical order, deduplicated
};

// Gelfond-Lifschitz reduct, body-only variant: a rule whose negative body
// meets m is deleted; surviving rules keep their heads and lose their
// negative literals.
GroundProgram reduct(const GroundProgram& pi, const Interpretation& m);

// Least fixpoint of the immediate-consequence step from the empty set.
// Requires every rule's negative body to be empty; violation is a
// programming error, not a diagnostic.
Interpretation minimal_model(const GroundProgram& definite);

// M is stable iff it equals the minimal model of its own reduct.
bool is_stable(const GroundProgram& pi, const Interpretation& m);

struct SolveOptions {
    bool oracle = false; // force the verbatim 2^N enumeration
    int cap = 24;        // enumeration width cap (atoms)
    // Per-atom strata when the source cone is stratified; enables the
    // unique-model fast path. Ignored in oracle mode.
    const std::vector<int>* atom_strata = nullptr;
};

enum class SolvePath { Oracle, MinimalModel, Stratified, Enumerated };

struct SolveResult {
    StableModelSet models;
    SolvePath path = SolvePath::Enumerated;
};

// All stable models of pi. The production path enumerates assignments only
// over atoms that occur in some negative body (everything else follows from
// the fixpoint), after discarding rules with underivable positive bodies;
// this is equivalence-preserving and property-tested against the oracle.
SolveResult enumerate_stable_models(const GroundProgram& pi, const SolveOptions& opts);

// Unique stable model of a stratified ground program, computed stratum by
// stratum; negative literals consult only completed lower strata.
Interpretation stratified_eval(const GroundProgram& pi,
                               const std::vector<int>& atom_strata);

} // namespace stablerel

#endif
