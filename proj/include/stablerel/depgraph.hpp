#ifndef STABLEREL_DEPGRAPH_HPP
#define STABLEREL_DEPGRAPH_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "stablerel/program.hpp"

namespace stablerel {

enum class EdgeSign { Positive, Negative };

struct DepEdge {
    PredKey from;
    PredKey to;
    EdgeSign sign;

    bool operator<(const DepEdge& o) const {
        if (!(from == o.from)) return from < o.from;
        if (!(to == o.to)) return to < o.to;
        return sign < o.sign;
    }
    bool operator==(const DepEdge& o) const {
        return from == o.from && to == o.to && sign == o.sign;
    }
};

// Predicate-level dependency graph. Builtins are excluded: they call nothing
// and calls to them create no edges.
struct DepGraph {
    std::vector<PredKey> nodes; // sorted
    std::set<DepEdge> edges;

    bool has_node(const PredKey& k) const;
};

enum class Classification { Definite, Stratified, Normal };

std::string classification_name(Classification c);

// Edge (r, s, positive) iff r's body contains a call to s outside noto;
// (r, s, negative) iff a call to s appears under noto. A call to an
// undefined relation is a diagnostic naming the callee and arity.
DepGraph build_graph(const Program& p);
// Same, restricted to the given predicates (bodies of other relations are
// not inspected). Every member must be defined.
DepGraph build_graph(const Program& p, const std::set<PredKey>& preds);

// Strongly connected components in reverse topological order (callees
// before callers). A self-loop makes a singleton SCC cyclic.
std::vector<std::set<PredKey>> sccs(const DepGraph& g);

struct ClassifyResult {
    Classification classification = Classification::Definite;
    // Present for Definite and Stratified programs: negative edges go
    // strictly downward, positive edges non-upward.
    std::map<PredKey, int> strata;
    std::vector<std::set<PredKey>> components; // reverse topological
    // Components that contain an internal negative edge (Normal witnesses).
    std::vector<std::set<PredKey>> negative_components;
};

ClassifyResult classify(const Program& p);
ClassifyResult classify(const Program& p, const std::set<PredKey>& preds);

// All predicates reachable from the roots via edges of any sign, roots
// included. Roots must be nodes of the graph.
std::set<PredKey> cone(const DepGraph& g, const std::set<PredKey>& roots);

// Predicates reachable from a set of top-level query goals (the query acts
// as a virtual relation node). Undefined callees are diagnostics.
std::set<PredKey> query_cone(const Program& p, const std::vector<GoalPtr>& goals);

// DOT export; negative edges are dashed and labeled "not".
std::string to_dot(const DepGraph& g);

} // namespace stablerel

#endif
