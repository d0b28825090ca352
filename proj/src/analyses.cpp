#include "ldbig/analyses.hpp"

#include <algorithm>
#include <queue>
#include <sstream>

namespace ldbig::analysis {

std::string to_string(const FlowNode& n) {
    switch (n.kind) {
    case FlowNode::Kind::container:
        return "container:" + n.name;
    case FlowNode::Kind::network:
        return "network:" + n.name;
    case FlowNode::Kind::volume:
        return "volume:" + n.name;
    }
    return n.name;
}

const char* to_string(Violation::Kind kind) {
    return kind == Violation::Kind::links_unreachable ? "linksUnreachable" : "securityLeak";
}

void FlowGraph::add_arc(FlowArc arc) {
    nodes_.insert(arc.from);
    nodes_.insert(arc.to);
    out_[arc.from].insert(arc.to);
    arcs_.insert(std::move(arc));
}

bool FlowGraph::has_arc(const FlowNode& from, const FlowNode& to) const {
    auto it = out_.find(from);
    return it != out_.end() && it->second.count(to);
}

std::vector<FlowNode> FlowGraph::successors(const FlowNode& n) const {
    auto it = out_.find(n);
    if (it == out_.end())
        return {};
    // std::set order already puts containers first (enum order), then names.
    return {it->second.begin(), it->second.end()};
}

bool FlowGraph::is_bipartite() const {
    return std::all_of(arcs_.begin(), arcs_.end(), [](const FlowArc& a) {
        return (a.from.kind == FlowNode::Kind::container) != (a.to.kind == FlowNode::Kind::container);
    });
}

SecurityOrder parse_order(std::string_view text) {
    SecurityOrder order;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        const char* ws = " \t\r\n";
        auto b = s.find_first_not_of(ws);
        if (b == std::string::npos)
            return std::string();
        auto e = s.find_last_not_of(ws);
        return s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        auto gt = line.find('>');
        if (gt == std::string::npos || line.find('>', gt + 1) != std::string::npos)
            throw OrderParseError(lineno, "expected 'HIGH > LOW'");
        auto high = trim(line.substr(0, gt));
        auto low = trim(line.substr(gt + 1));
        auto bad = [](const std::string& s) {
            return s.empty() || s.find_first_of(" \t") != std::string::npos;
        };
        if (bad(high) || bad(low))
            throw OrderParseError(lineno, "expected 'HIGH > LOW'");
        order.assertions.emplace(high, low);
    }
    return order;
}

SecurityOrder transitive_closure(const SecurityOrder& order) {
    std::map<std::string, std::set<std::string>> below;
    for (const auto& [h, l] : order.assertions)
        below[h].insert(l);
    SecurityOrder out;
    for (const auto& [start, _] : below) {
        std::set<std::string> seen;
        std::vector<std::string> stack(below[start].begin(), below[start].end());
        while (!stack.empty()) {
            auto n = stack.back();
            stack.pop_back();
            if (!seen.insert(n).second)
                continue;
            if (auto it = below.find(n); it != below.end())
                stack.insert(stack.end(), it->second.begin(), it->second.end());
        }
        if (seen.count(start))
            throw CyclicOrder("network '" + start + "' is ordered above itself");
        for (const auto& n : seen)
            out.assertions.emplace(start, n);
    }
    return out;
}

namespace {

bool has_control(const Bigraph& b, NodeId id, const char* control) {
    return b.node(id).control.name == control;
}

std::vector<NodeId> containers(const Bigraph& b) {
    std::vector<NodeId> out;
    for (const auto& [id, node] : b.nodes())
        if (node.control.name == "container")
            out.push_back(id);
    if (out.empty())
        throw NotAComposite("no container nodes found");
    return out;
}

/// Nearest strict container ancestor of every node (or none).
std::map<NodeId, NodeId> owners(const Bigraph& b) {
    std::map<NodeId, NodeId> out;
    for (const auto& [id, node] : b.nodes()) {
        Parent p = node.parent;
        for (std::size_t steps = 0; steps <= b.nodes().size(); ++steps) {
            const auto* n = std::get_if<NodeId>(&p);
            if (!n || !b.nodes().count(*n))
                break;
            if (has_control(b, *n, "container")) {
                out.emplace(id, *n);
                break;
            }
            p = b.node(*n).parent;
        }
    }
    return out;
}

std::string attr(const Bigraph& b, NodeId id, const char* key) {
    const auto& attrs = b.node(id).attrs;
    auto it = attrs.find(key);
    return it == attrs.end() ? std::string() : it->second;
}

}  // namespace

std::string container_name(const Bigraph& b, NodeId id) {
    auto name = attr(b, id, "name");
    return name.empty() ? "node:" + std::to_string(id.value) : name;
}

std::vector<Violation> check_links(const Bigraph& b) {
    containers(b);
    const auto owner = owners(b);

    // Links reached by the network nodes of each container.
    std::map<NodeId, std::set<Link>> network_links;
    for (const auto& [id, c] : owner)
        if (has_control(b, id, "network"))
            if (auto l = b.link_of(port(id, 0)))
                network_links[c].insert(*l);

    std::set<std::pair<NodeId, NodeId>> requires_link;
    for (const auto& [p, l] : b.links()) {
        const auto* target = std::get_if<PortRef>(&l);
        const auto* source = std::get_if<PortRef>(&p);
        if (!target || !source || !has_control(b, target->node, "container"))
            continue;
        NodeId from;
        if (has_control(b, source->node, "container")) {
            from = source->node;
        } else {
            auto it = owner.find(source->node);
            if (it == owner.end())
                continue;
            from = it->second;
        }
        if (!(from == target->node))
            requires_link.emplace(from, target->node);
    }

    std::vector<Violation> out;
    for (const auto& [c1, c2] : requires_link) {
        const auto& l1 = network_links[c1];
        const auto& l2 = network_links[c2];
        bool shared = std::any_of(l1.begin(), l1.end(), [&](const Link& l) { return l2.count(l); });
        if (!shared)
            out.push_back({Violation::Kind::links_unreachable, container_name(b, c1),
                           container_name(b, c2), {}});
    }
    std::sort(out.begin(), out.end(), [](const Violation& a, const Violation& b) {
        return std::tie(a.first, a.second) < std::tie(b.first, b.second);
    });
    return out;
}

FlowGraph build_flow_graph(const Bigraph& b) {
    const auto all = containers(b);
    const auto owner = owners(b);
    FlowGraph g;
    for (auto c : all)
        g.add_node({FlowNode::Kind::container, container_name(b, c)});

    // Resource identity is the link its nodes reach; the label comes from
    // the smallest node name seen on that link.
    std::map<std::pair<FlowNode::Kind, Link>, std::string> labels;
    for (const auto& [id, c] : owner) {
        FlowNode::Kind kind;
        if (has_control(b, id, "network"))
            kind = FlowNode::Kind::network;
        else if (has_control(b, id, "volume"))
            kind = FlowNode::Kind::volume;
        else
            continue;
        auto l = b.link_of(port(id, 0));
        if (!l)
            continue;
        auto name = attr(b, id, "name");
        if (name.empty())
            name = to_string(*l);
        auto [it, inserted] = labels.emplace(std::make_pair(kind, *l), name);
        if (!inserted && name < it->second)
            it->second = name;
    }
    // Distinct links that happen to share a label stay distinct nodes.
    std::map<std::pair<FlowNode::Kind, Link>, FlowNode> resource;
    std::map<FlowNode, int> used;
    for (const auto& [key, label] : labels) {
        FlowNode n{key.first, label};
        if (int k = used[n]++; k > 0)
            n.name += "#" + std::to_string(k);
        resource.emplace(key, n);
        g.add_node(n);
    }

    for (const auto& [id, c] : owner) {
        const bool network = has_control(b, id, "network");
        if (!network && !has_control(b, id, "volume"))
            continue;
        auto l = b.link_of(port(id, 0));
        if (!l)
            continue;
        const auto& r = resource.at({network ? FlowNode::Kind::network : FlowNode::Kind::volume, *l});
        FlowNode cn{FlowNode::Kind::container, container_name(b, c)};
        g.add_arc({r, cn, FlowArc::Kind::read});
        if (network || attr(b, id, "readonly") != "true")
            g.add_arc({cn, r, FlowArc::Kind::write});
    }
    return g;
}

std::vector<Violation> check_security(const FlowGraph& g, const SecurityOrder& order) {
    auto closure = transitive_closure(order);
    for (const auto& [h, l] : order.assertions)
        for (const auto& n : {h, l})
            if (!g.nodes().count({FlowNode::Kind::network, n}))
                throw UnknownNetwork("unknown network '" + n + "' in security order");

    std::vector<Violation> out;
    for (const auto& [h, l] : closure.assertions) {
        const FlowNode src{FlowNode::Kind::network, h};
        const FlowNode dst{FlowNode::Kind::network, l};
        std::map<FlowNode, FlowNode> pred;
        std::set<FlowNode> seen{src};
        std::queue<FlowNode> q;
        q.push(src);
        bool found = false;
        while (!q.empty() && !found) {
            auto n = q.front();
            q.pop();
            for (const auto& m : g.successors(n)) {
                if (!seen.insert(m).second)
                    continue;
                pred.emplace(m, n);
                if (m == dst) {
                    found = true;
                    break;
                }
                q.push(m);
            }
        }
        if (!found)
            continue;
        std::vector<FlowNode> path{dst};
        while (!(path.back() == src))
            path.push_back(pred.at(path.back()));
        std::reverse(path.begin(), path.end());
        out.push_back({Violation::Kind::security_leak, h, l, std::move(path)});
    }
    return out;
}

std::vector<Violation> check_security(const Bigraph& b, const SecurityOrder& order) {
    return check_security(build_flow_graph(b), order);
}

}  // namespace ldbig::analysis
