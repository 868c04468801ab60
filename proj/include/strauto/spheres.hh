#pragma once

#include <map>
#include <set>

#include "strauto/classic.hh"

namespace strauto {

/// A potential sphere: an abstract finite structure with ordered centers.
/// With budget N, center i (1-based) carries radius 2^(N-i); every element
/// must lie within some center's radius (coverage).
struct Sphere {
    int budget = 0;             // N
    int size = 0;               // elements are 0..size-1
    std::vector<int> centers;   // k = centers.size() <= budget; repeats allowed
    std::map<std::string, std::set<std::vector<int>>> relations;
};

/// All-pairs distances in the sphere's own Gaifman graph; unreachable pairs
/// get a value larger than any radius.
std::vector<std::vector<int>> sphere_distances(const Sphere& s);

bool sphere_coverage_ok(const Sphere& s);

/// Max Gaifman degree inside the sphere.
int sphere_degree(const Sphere& s);

/// The induced substructure on the union of the centers' balls, elements
/// indexed in breadth-first discovery order (center list order first).
/// Throws ResourceError if neighbor enumeration cannot be certified finite.
Sphere extract_sphere(const Presentation& p, const MultiTrackNfa& gaifman,
                      const std::vector<Word>& centers, int budget);
Sphere extract_sphere(const Presentation& p, const std::vector<Word>& centers,
                      int budget);

/// Isomorphism with index-wise center correspondence.
bool sphere_iso(const Sphere& a, const Sphere& b);

/// Canonical string: equal iff sphere_iso (refinement + backtracking labeling).
std::string canonical_form(const Sphere& s);

struct LocalOptions {
    uint64_t degree_cap = 64;
    std::optional<uint64_t> size_cap;  // default: geometric ball-size bound
    bool memoize = true;
    ExploreLimits limits;
};

/// Does the sphere embed into the presented structure as an actual union of
/// balls (domain membership, exact atom agreement, and neighbor closure at
/// interior elements)? Decided by lazy product emptiness.
bool sphere_realizable(const Presentation& p, const Sphere& s,
                       const ExploreLimits& lim = {});

/// Sentence decision by depth-first sphere-tree evaluation. One decider may
/// serve many sentences over the same presentation; realizability and
/// extension enumerations are cached across calls.
class LocalDecider {
  public:
    LocalDecider(const Presentation& p, const LocalOptions& opts = {});
    Verdict decide(const FormulaPtr& sentence);

    // Candidate extensions of s by one more center (iso-deduplicated, coverage,
    // degree- and size-capped, restriction-compatible), before realizability.
    std::vector<Sphere> extensions(const Sphere& s);
    bool realizable(const Sphere& s);
    uint64_t degree_bound() const;

  private:
    struct Impl;
    std::shared_ptr<Impl> impl_;
};

Verdict decide_local(const Presentation& p, const FormulaPtr& sentence,
                     const LocalOptions& opts = {});

}  // namespace strauto
