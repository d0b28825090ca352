#pragma once

#include "ldbig/bigraph.hpp"

#include <compare>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ldbig::analysis {

class NotAComposite : public std::runtime_error {
    using std::runtime_error::runtime_error;
};
class CyclicOrder : public std::runtime_error {
    using std::runtime_error::runtime_error;
};
class UnknownNetwork : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class OrderParseError : public std::runtime_error {
public:
    OrderParseError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

struct FlowNode {
    enum class Kind { container, network, volume };

    Kind kind = Kind::container;
    std::string name;

    auto operator<=>(const FlowNode&) const = default;
    bool operator==(const FlowNode&) const = default;
};

std::string to_string(const FlowNode& n);

struct FlowArc {
    enum class Kind { read, write };

    FlowNode from;
    FlowNode to;
    Kind kind = Kind::read;

    auto operator<=>(const FlowArc&) const = default;
    bool operator==(const FlowArc&) const = default;
};

/// Bipartite read/write graph between containers and networks/volumes.
/// A read arc runs resource -> container, a write arc container -> resource.
class FlowGraph {
public:
    void add_node(FlowNode n) { nodes_.insert(std::move(n)); }
    /// Adds both endpoints if missing.
    void add_arc(FlowArc arc);

    const std::set<FlowNode>& nodes() const { return nodes_; }
    const std::set<FlowArc>& arcs() const { return arcs_; }
    bool has_arc(const FlowNode& from, const FlowNode& to) const;

    /// Successors in witness order: containers before resources, then by name.
    std::vector<FlowNode> successors(const FlowNode& n) const;

    /// Every arc joins a container and a resource.
    bool is_bipartite() const;

private:
    std::set<FlowNode> nodes_;
    std::set<FlowArc> arcs_;
    std::map<FlowNode, std::set<FlowNode>> out_;
};

/// Strict ordering assertions `high > low` over network names.
struct SecurityOrder {
    std::set<std::pair<std::string, std::string>> assertions;

    bool operator==(const SecurityOrder&) const = default;
};

/// One assertion per line, `HIGH > LOW`; `#` starts a comment.
SecurityOrder parse_order(std::string_view text);

/// Throws CyclicOrder when some network ends up above itself.
SecurityOrder transitive_closure(const SecurityOrder& order);

struct Violation {
    enum class Kind { links_unreachable, security_leak };

    Kind kind = Kind::links_unreachable;
    /// Source/target container for links; high/low network for leaks.
    std::string first;
    std::string second;
    /// Leak witness: a directed path from the high to the low network.
    std::vector<FlowNode> path;

    bool operator==(const Violation&) const = default;
};

const char* to_string(Violation::Kind kind);

/// Name of a container node: its `name` attribute, else `node:<id>`.
std::string container_name(const Bigraph& b, NodeId id);

/// Every pair of distinct containers (C1, C2) where something inside C1
/// links to C2's handle port but no network node of C1 shares a link with a
/// network node of C2. Sorted by container names.
std::vector<Violation> check_links(const Bigraph& b);

/// Flow graph of an assembled composite. Networks are read-write; volumes
/// mounted with readonly=true contribute only the read arc.
FlowGraph build_flow_graph(const Bigraph& b);

/// Leaks of `order` in a flow graph: for every (h, l) in the closure, a
/// directed path from network h to network l. Throws UnknownNetwork and
/// CyclicOrder.
std::vector<Violation> check_security(const FlowGraph& g, const SecurityOrder& order);
std::vector<Violation> check_security(const Bigraph& b, const SecurityOrder& order);

}  // namespace ldbig::analysis
