#include "ldbig/bigraph.hpp"

#include "ldbig/detail/overloaded.hpp"

#include <algorithm>

namespace ldbig {

using detail::overloaded;

void Signature::add(Control control, bool parametric) {
    ControlDecl decl{std::move(control), parametric};
    auto [it, inserted] = decls_.emplace(decl.control.name, decl);
    if (!inserted && !(it->second == decl))
        throw SignatureMismatch("control '" + decl.control.name + "' declared twice");
}

const ControlDecl* Signature::find(const std::string& name) const {
    auto it = decls_.find(name);
    return it == decls_.end() ? nullptr : &it->second;
}

bool Signature::admits(const Control& control) const {
    const auto* decl = find(control.name);
    if (!decl)
        return false;
    return decl->parametric || decl->control == control;
}

Signature Signature::merge(const Signature& a, const Signature& b) {
    Signature out = a;
    for (const auto& [name, decl] : b.decls_) {
        auto it = out.decls_.find(name);
        if (it == out.decls_.end())
            out.decls_.emplace(name, decl);
        else if (!(it->second == decl))
            throw SignatureMismatch("control '" + name + "' has conflicting declarations");
    }
    return out;
}

std::optional<Link> Bigraph::link_of(const Point& p) const {
    auto it = link_.find(p);
    if (it == link_.end())
        return std::nullopt;
    return it->second;
}

std::vector<Point> Bigraph::points() const {
    std::vector<Point> out;
    for (std::size_t i = 0; i <= inner_.width(); ++i)
        for (const auto& n : inner_.at(i).plus)
            out.emplace_back(inner_name(i, n));
    for (std::size_t i = 0; i <= outer_.width(); ++i)
        for (const auto& n : outer_.at(i).minus)
            out.emplace_back(outer_name(i, n));
    for (const auto& [id, node] : nodes_)
        for (std::size_t k = 0; k < node.control.plus; ++k)
            out.emplace_back(port(id, k));
    return out;
}

std::vector<Link> Bigraph::all_links() const {
    std::vector<Link> out;
    for (std::size_t i = 0; i <= inner_.width(); ++i)
        for (const auto& n : inner_.at(i).minus)
            out.emplace_back(inner_name(i, n));
    for (std::size_t i = 0; i <= outer_.width(); ++i)
        for (const auto& n : outer_.at(i).plus)
            out.emplace_back(outer_name(i, n));
    for (const auto& e : edges_)
        out.emplace_back(e);
    for (const auto& [id, node] : nodes_)
        for (std::size_t k = 0; k < node.control.minus; ++k)
            out.emplace_back(port(id, k));
    return out;
}

std::vector<NodeId> Bigraph::children(const Parent& parent) const {
    std::vector<NodeId> out;
    for (const auto& [id, node] : nodes_)
        if (node.parent == parent)
            out.push_back(id);
    return out;
}

std::vector<std::size_t> Bigraph::child_sites(const Parent& parent) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < sites_.size(); ++i)
        if (sites_[i] == parent)
            out.push_back(i + 1);
    return out;
}

std::optional<std::size_t> Bigraph::root_of(NodeId id) const {
    Parent current = id;
    for (std::size_t steps = 0; steps <= nodes_.size(); ++steps) {
        if (const auto* r = std::get_if<RootIndex>(&current))
            return r->value;
        auto it = nodes_.find(std::get<NodeId>(current));
        if (it == nodes_.end())
            return std::nullopt;
        current = it->second.parent;
    }
    return std::nullopt;
}

std::optional<std::size_t> Bigraph::root_of_site(std::size_t site) const {
    if (site == 0 || site > sites_.size())
        return std::nullopt;
    const auto& p = sites_[site - 1];
    if (const auto* r = std::get_if<RootIndex>(&p))
        return r->value;
    return root_of(std::get<NodeId>(p));
}

std::optional<std::size_t> Bigraph::locality(const Point& p) const {
    return std::visit(
        overloaded{
            [&](const NameRef& n) -> std::optional<std::size_t> {
                if (n.locality == 0)
                    return 0;
                if (n.side == Side::outer)
                    return n.locality;
                return root_of_site(n.locality);
            },
            [&](const PortRef& pr) -> std::optional<std::size_t> { return root_of(pr.node); },
        },
        p);
}

std::optional<std::size_t> Bigraph::locality(const Link& l) const {
    return std::visit(
        overloaded{
            [&](const NameRef& n) -> std::optional<std::size_t> {
                if (n.locality == 0)
                    return 0;
                if (n.side == Side::outer)
                    return n.locality;
                return root_of_site(n.locality);
            },
            [](const EdgeId&) -> std::optional<std::size_t> { return 0; },
            [&](const PortRef& pr) -> std::optional<std::size_t> { return root_of(pr.node); },
        },
        l);
}

std::uint32_t Bigraph::next_node_id() const {
    return nodes_.empty() ? 0 : nodes_.rbegin()->first.value + 1;
}

std::uint32_t Bigraph::next_edge_id() const {
    return edges_.empty() ? 0 : edges_.rbegin()->value + 1;
}

BigraphBuilder::BigraphBuilder(Signature signature, LocalInterface inner, LocalInterface outer) {
    b_.signature_ = std::move(signature);
    b_.inner_ = std::move(inner);
    b_.outer_ = std::move(outer);
    b_.sites_.assign(b_.inner_.width(), RootIndex{1});
}

BigraphBuilder::BigraphBuilder(Bigraph base) : b_(std::move(base)) {
    next_node_ = b_.next_node_id();
    next_edge_ = b_.next_edge_id();
}

NodeId BigraphBuilder::add_node(Control control, Parent parent,
                                std::map<std::string, std::string> attrs) {
    NodeId id{next_node_};
    add_node(id, std::move(control), std::move(parent), std::move(attrs));
    return id;
}

void BigraphBuilder::add_node(NodeId id, Control control, Parent parent,
                              std::map<std::string, std::string> attrs) {
    if (b_.nodes_.count(id))
        throw std::invalid_argument("duplicate node id " + std::to_string(id.value));
    b_.nodes_.emplace(id, Node{std::move(control), std::move(parent), std::move(attrs)});
    next_node_ = std::max(next_node_, id.value + 1);
}

EdgeId BigraphBuilder::add_edge() {
    EdgeId id{next_edge_};
    add_edge(id);
    return id;
}

void BigraphBuilder::add_edge(EdgeId id) {
    if (!b_.edges_.insert(id).second)
        throw std::invalid_argument("duplicate edge id " + std::to_string(id.value));
    next_edge_ = std::max(next_edge_, id.value + 1);
}

void BigraphBuilder::set_site_parent(std::size_t site, Parent parent) {
    if (site == 0 || site > b_.sites_.size())
        throw std::out_of_range("site " + std::to_string(site) + " out of range");
    b_.sites_[site - 1] = std::move(parent);
}

void BigraphBuilder::set_link(Point p, Link l) { b_.link_[std::move(p)] = std::move(l); }

void BigraphBuilder::set_parent(NodeId node, Parent parent) {
    b_.nodes_.at(node).parent = std::move(parent);
}

Bigraph BigraphBuilder::build() && { return std::move(b_); }
Bigraph BigraphBuilder::build() const& { return b_; }

std::string to_string(const Point& p) {
    return std::visit(overloaded{
                          [](const NameRef& n) {
                              return std::string(n.side == Side::inner ? "inner:" : "outer:") +
                                     n.text + "@" + std::to_string(n.locality) +
                                     (n.side == Side::inner ? "+" : "-");
                          },
                          [](const PortRef& pr) {
                              return "port:" + std::to_string(pr.node.value) + "#" +
                                     std::to_string(pr.index);
                          },
                      },
                      p);
}

std::string to_string(const Link& l) {
    return std::visit(overloaded{
                          [](const NameRef& n) {
                              return std::string(n.side == Side::inner ? "inner:" : "outer:") +
                                     n.text + "@" + std::to_string(n.locality) +
                                     (n.side == Side::inner ? "-" : "+");
                          },
                          [](const EdgeId& e) { return "edge:" + std::to_string(e.value); },
                          [](const PortRef& pr) {
                              return "port:" + std::to_string(pr.node.value) + "#" +
                                     std::to_string(pr.index);
                          },
                      },
                      l);
}

std::string to_string(const Parent& p) {
    if (const auto* r = std::get_if<RootIndex>(&p))
        return "root:" + std::to_string(r->value);
    return "node:" + std::to_string(std::get<NodeId>(p).value);
}

}  // namespace ldbig
