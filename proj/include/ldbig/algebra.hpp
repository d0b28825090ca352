#pragma once

#include "ldbig/bigraph.hpp"

#include <string>
#include <vector>

namespace ldbig {

/// One broken well-formedness clause. `clause` is a stable keyword
/// ("forest", "link locality", ...); `element` names the offender.
struct ValidationIssue {
    std::string clause;
    std::string element;
    std::string message;
};

/// Checks every well-formedness condition of a local directed bigraph.
/// An empty result means the bigraph is well-formed.
std::vector<ValidationIssue> validate(const Bigraph& b);
inline bool is_valid(const Bigraph& b) { return validate(b).empty(); }

/// Id_I: no nodes or edges, site i under root i, every positive inner name
/// and negative outer name linked to its namesake.
Bigraph identity(const LocalInterface& iface, Signature signature = {});

/// outer ∘ inner, defined when inner.outer() == outer.inner(). Colliding
/// node and edge identifiers of `outer` are refreshed.
/// Throws InterfaceMismatch, SignatureMismatch, or CompositionError when a
/// link chain through the shared interface never reaches a link.
Bigraph compose(const Bigraph& outer, const Bigraph& inner);

struct TensorOptions {
    /// Rename clashing global names of the right operand instead of throwing.
    bool tag_globals = false;
};

/// left ⊗ right. Throws GlobalNameClash when global names collide and
/// tagging is off.
Bigraph tensor(const Bigraph& left, const Bigraph& right, TensorOptions options = {});

/// Tensor of a list, left to right; the empty list yields Id_ε.
Bigraph tensor_all(const std::vector<Bigraph>& parts, TensorOptions options = {});

struct IsoOptions {
    /// Also require node attributes to agree.
    bool compare_attributes = true;
};

/// Support equivalence: bijections on nodes (control preserving) and edges
/// commuting with prnt and link while fixing both interfaces.
bool is_isomorphic(const Bigraph& a, const Bigraph& b, IsoOptions options = {});

/// Copy of `b` with node and edge identifiers shifted by the given offsets.
Bigraph shift_support(const Bigraph& b, std::uint32_t node_offset, std::uint32_t edge_offset);

}  // namespace ldbig
