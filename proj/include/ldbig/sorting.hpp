#pragma once

#include "ldbig/bigraph.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace ldbig::sorting {

/// A forbidden shape.
///
/// Matching is open: a pattern root may sit under any host node or root
/// (only host roots when `anchor == top`), a pattern node with a site below
/// it may have extra host children while one without must match its host
/// children exactly, pattern names may stand for any host link, and pattern
/// edges are closed (their host image is an edge reached by exactly the
/// matched points). Negative ports may receive extra host points. Attributes
/// set on a pattern node must be present with the same value on its image.
struct Pattern {
    enum class Anchor { anywhere, top };

    std::string name;
    Bigraph bigraph;
    Anchor anchor = Anchor::anywhere;
};

struct Occurrence {
    std::map<NodeId, NodeId> node_map;
    std::map<EdgeId, EdgeId> edge_map;
    /// Pattern root -> host parent of the nodes placed under it. Roots
    /// without nodes are unconstrained and absent.
    std::map<std::size_t, Parent> root_anchors;
    /// Pattern link names (outer positive, inner negative) -> host link.
    std::map<NameRef, Link> name_map;

    bool operator==(const Occurrence&) const = default;
};

/// Every occurrence of the pattern in the host. Occurrences are not
/// deduplicated: automorphic images are reported separately.
/// Throws SignatureMismatch when a pattern control is unknown to the host.
std::vector<Occurrence> find_matches(const Pattern& pattern, const Bigraph& host);

struct SortingResult {
    bool well_sorted = true;
    /// Offending pattern name with its occurrences, in pattern order.
    std::vector<std::pair<std::string, std::vector<Occurrence>>> counterexamples;
};

SortingResult check_sorting(const Bigraph& host, const std::vector<Pattern>& forbidden);

}  // namespace ldbig::sorting
