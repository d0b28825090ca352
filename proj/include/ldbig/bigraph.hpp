#pragma once

#include "ldbig/interface.hpp"

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace ldbig {

/// A node type with a polarized arity <plus, minus>. Positive ports are link
/// sources (points); negative ports are link targets.
struct Control {
    std::string name;
    std::size_t plus = 0;
    std::size_t minus = 0;

    auto operator<=>(const Control&) const = default;
    bool operator==(const Control&) const = default;
};

/// Signature entry. A parametric entry fixes only the control name; each
/// node instantiates its own arity (process_{r,s}).
struct ControlDecl {
    Control control;
    bool parametric = false;

    bool operator==(const ControlDecl&) const = default;
};

class Signature {
public:
    Signature() = default;

    void add(Control control, bool parametric = false);
    bool contains(const std::string& name) const { return decls_.count(name) != 0; }
    const ControlDecl* find(const std::string& name) const;
    /// True when `control` is a legal instance of a declared control.
    bool admits(const Control& control) const;
    const std::map<std::string, ControlDecl>& decls() const { return decls_; }

    /// Union of two signatures; throws SignatureMismatch on conflicting entries.
    static Signature merge(const Signature& a, const Signature& b);

    bool operator==(const Signature&) const = default;

private:
    std::map<std::string, ControlDecl> decls_;
};

struct NodeId {
    std::uint32_t value = 0;
    auto operator<=>(const NodeId&) const = default;
};

struct EdgeId {
    std::uint32_t value = 0;
    auto operator<=>(const EdgeId&) const = default;
};

enum class Side : std::uint8_t { inner, outer };

/// A name of the inner or outer interface, addressed by its interface
/// locality. Polarity follows from the role: as a point an inner name is
/// positive and an outer name negative; as a link the reverse.
struct NameRef {
    Side side = Side::inner;
    std::size_t locality = 0;
    std::string text;

    auto operator<=>(const NameRef&) const = default;
};

struct PortRef {
    NodeId node;
    std::size_t index = 0;

    auto operator<=>(const PortRef&) const = default;
};

/// Positive inner name, negative outer name, or positive node port.
using Point = std::variant<NameRef, PortRef>;
/// Negative inner name, positive outer name, edge, or negative node port.
using Link = std::variant<NameRef, EdgeId, PortRef>;

/// Root index in 1..width(outer).
struct RootIndex {
    std::size_t value = 1;
    auto operator<=>(const RootIndex&) const = default;
};

using Parent = std::variant<NodeId, RootIndex>;

struct Node {
    Control control;
    Parent parent;
    /// Free-form metadata (service name, read-only flag, ...).
    std::map<std::string, std::string> attrs;

    bool operator==(const Node&) const = default;
};

class InterfaceMismatch : public std::runtime_error {
    using std::runtime_error::runtime_error;
};
class GlobalNameClash : public std::runtime_error {
    using std::runtime_error::runtime_error;
};
class SignatureMismatch : public std::runtime_error {
    using std::runtime_error::runtime_error;
};
class CompositionError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A local directed bigraph B = (V, E, ctrl, prnt, link) : inner -> outer.
///
/// Values are immutable once built; BigraphBuilder is the only way to
/// produce one. Nothing here enforces well-formedness: use validate().
class Bigraph {
public:
    Bigraph() = default;

    const Signature& signature() const { return signature_; }
    const LocalInterface& inner() const { return inner_; }
    const LocalInterface& outer() const { return outer_; }
    const std::map<NodeId, Node>& nodes() const { return nodes_; }
    const std::set<EdgeId>& edges() const { return edges_; }
    /// Parent of site i, for i in 1..width(inner).
    const Parent& site_parent(std::size_t site) const { return sites_.at(site - 1); }
    const std::vector<Parent>& sites() const { return sites_; }
    const std::map<Point, Link>& links() const { return link_; }

    const Node& node(NodeId id) const { return nodes_.at(id); }
    std::optional<Link> link_of(const Point& p) const;

    /// Every point of B: positive inner names, negative outer names and
    /// positive ports.
    std::vector<Point> points() const;
    /// Every link of B.
    std::vector<Link> all_links() const;

    std::vector<NodeId> children(const Parent& parent) const;
    /// Sites placed directly under `parent` (1-based).
    std::vector<std::size_t> child_sites(const Parent& parent) const;

    /// Root reached from a node by iterating prnt; nullopt on cycles or
    /// dangling parents.
    std::optional<std::size_t> root_of(NodeId node) const;
    std::optional<std::size_t> root_of_site(std::size_t site) const;

    /// Locality of a point or link: 0 for global names and edges, the root
    /// index for outer names and ports, and the root above the site for
    /// inner names.
    std::optional<std::size_t> locality(const Point& p) const;
    std::optional<std::size_t> locality(const Link& l) const;

    std::uint32_t next_node_id() const;
    std::uint32_t next_edge_id() const;

    bool operator==(const Bigraph&) const = default;

private:
    friend class BigraphBuilder;

    Signature signature_;
    LocalInterface inner_;
    LocalInterface outer_;
    std::map<NodeId, Node> nodes_;
    std::set<EdgeId> edges_;
    std::vector<Parent> sites_;
    std::map<Point, Link> link_;
};

/// Single-threaded mutable staging area for a Bigraph.
class BigraphBuilder {
public:
    BigraphBuilder(Signature signature, LocalInterface inner, LocalInterface outer);
    /// Starts from an existing bigraph.
    explicit BigraphBuilder(Bigraph base);

    NodeId add_node(Control control, Parent parent,
                    std::map<std::string, std::string> attrs = {});
    /// Adds a node with a caller-chosen identifier.
    void add_node(NodeId id, Control control, Parent parent,
                  std::map<std::string, std::string> attrs = {});
    EdgeId add_edge();
    void add_edge(EdgeId id);
    void set_site_parent(std::size_t site, Parent parent);
    void set_link(Point p, Link l);
    void set_parent(NodeId node, Parent parent);

    Bigraph build() &&;
    Bigraph build() const&;

private:
    Bigraph b_;
    std::uint32_t next_node_ = 0;
    std::uint32_t next_edge_ = 0;
};

// Point and link constructors, mostly for tests and builders.
inline NameRef inner_name(std::size_t loc, std::string text) {
    return NameRef{Side::inner, loc, std::move(text)};
}
inline NameRef outer_name(std::size_t loc, std::string text) {
    return NameRef{Side::outer, loc, std::move(text)};
}
inline PortRef port(NodeId node, std::size_t index) { return PortRef{node, index}; }

std::string to_string(const Point& p);
std::string to_string(const Link& l);
std::string to_string(const Parent& p);

}  // namespace ldbig
