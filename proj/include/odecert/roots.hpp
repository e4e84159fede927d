#pragma once

#include "odecert/interval.hpp"
#include "odecert/poly.hpp"

#include <optional>
#include <vector>

namespace odecert {

struct RootItem {
    ComplexBox box;
    int multiplicity = 1;
};

// Certified multiset of polynomial roots: pairwise disjoint boxes, each
// containing exactly `multiplicity` roots counted with multiplicity, summing
// to the degree. Carries the source polynomial so callers can refine.
class RootEnclosures {
public:
    RootEnclosures() : bits_(0) {}
    RootEnclosures(Poly source, long bits, std::vector<RootItem> items)
        : source_(std::move(source)), bits_(bits), items_(std::move(items)) {}

    static RootEnclosures empty(Poly source) { return RootEnclosures(std::move(source), 0, {}); }

    const std::vector<RootItem>& items() const { return items_; }
    const Poly& source() const { return source_; }
    long bits() const { return bits_; }
    int total_multiplicity() const;

private:
    Poly source_;
    long bits_;
    std::vector<RootItem> items_;
};

// Exact square-free split for multiplicities, Eigen companion eigenvalues for
// estimates, interval Newton for certification. Boxes have width <= 2^-bits
// and are sorted by (Re mid, Im mid).
RootEnclosures certified_roots(const Poly& p, long bits);

enum class Inclusion { Included, NotIncluded, Inconclusive };

// Geometric multiset inclusion test on the enclosures (refining both sides as
// needed). NotIncluded verdicts are fully certified; Included means the
// matching was stable under refinement. The exact `divides` check is the
// authoritative decision path; this is its independent cross-check.
Inclusion multiset_root_inclusion(const RootEnclosures& a, const RootEnclosures& b);

// A root of `a` certifiably outside the multiset of `b`: either a box disjoint
// from all b-boxes, or one with a proven multiplicity deficit.
struct ExcludedRoot {
    ComplexBox box;
    bool deficit = false; // true: excluded by multiplicity, not by separation
};
std::optional<ExcludedRoot> find_excluded_root(const RootEnclosures& a, const RootEnclosures& b);

const char* to_string(Inclusion v);

} // namespace odecert
