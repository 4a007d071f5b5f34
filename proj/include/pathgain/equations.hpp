#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pathgain/forest.hpp"
#include "pathgain/network.hpp"
#include "pathgain/poly.hpp"

namespace pathgain {

/// Polynomials over leaf variable ids (variable index = leaf id).
struct TaggedPoly {
  Poly poly;
  std::string tag;
};

/// sum_k a_ijk - [s(j) = i] for every tree j and source i with N_ij > 0.
/// Raises UnsatisfiableDemand when a sink has no path from its demanded source.
std::vector<TaggedPoly> build_no_interference(const Forest& forest, const Problem& problem);

/// Quadratic rank conditions between copies of the same node feeding the same
/// outgoing edge, for every pair of sources reaching that node. With `screen`
/// nodes that cannot contribute new equations are skipped up front; the
/// resulting equation set is the same either way.
std::vector<TaggedPoly> build_edge_compat(const Forest& forest, const Problem& problem,
                                          bool screen = true);

struct PathSystem {
  TopoOrder order;
  Forest forest;
  PolySystem system;
};

/// topo_sort, transform, then no-interference and edge-compatibility
/// equations over one variable per leaf (named g<i>_<j>_<k>).
PathSystem build_path_formulation(const Problem& problem);
PolySystem build_path_system(const Problem& problem);

/// Leaf variable names replaced by per-source letters ("a1", "b3", ...).
PolySystem with_aliases(const PolySystem& system, const Forest& forest);

/// Which edge-to-edge gains become variables in the Koetter-Medard system.
enum class GainConvention {
  /// Gains only where a node combines several inputs (including sinks with
  /// several inputs). Single-input forwarding is fixed to 1.
  Reduced,
  /// A gain on every adjacent pair, including e(s) -> e and e -> e(t).
  Full,
};

/// Symbolic forward propagation of edge coding vectors from unit vectors at
/// the sources; one equation per sink and coordinate. Variables that never
/// reach a sink are omitted.
PolySystem build_km_system(const Problem& problem, GainConvention convention = GainConvention::Reduced);

/// Adjacent edge-id pairs along the leaf's path (virtual edges included) that
/// carry a gain variable under `convention`; their product is the path gain.
std::vector<std::pair<std::string, std::string>> expand_path_in_gains(
    const Forest& forest, const Problem& problem, int leaf_var,
    GainConvention convention = GainConvention::Reduced);

/// The expansion above as a monomial over `km`'s variables. Pairs missing
/// from `km` make the result zero.
Poly path_gain_poly(const Forest& forest, const Problem& problem, int leaf_var, const PolySystem& km,
                    GainConvention convention = GainConvention::Reduced);

}  // namespace pathgain
