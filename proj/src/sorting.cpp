#include "ldbig/sorting.hpp"

#include <algorithm>
#include <set>

namespace ldbig::sorting {

namespace {

bool attrs_included(const Node& pattern, const Node& host) {
    for (const auto& [k, v] : pattern.attrs) {
        auto it = host.attrs.find(k);
        if (it == host.attrs.end() || it->second != v)
            return false;
    }
    return true;
}

class Matcher {
public:
    Matcher(const Pattern& pattern, const Bigraph& host)
        : anchor_top_(pattern.anchor == Pattern::Anchor::top), p_(pattern.bigraph), h_(host) {
        for (const auto& [id, node] : p_.nodes()) {
            pnodes_.push_back(id);
            if (const auto* u = std::get_if<NodeId>(&node.parent))
                pchildren_[*u].push_back(id);
        }
        for (std::size_t s = 1; s <= p_.sites().size(); ++s)
            if (const auto* u = std::get_if<NodeId>(&p_.site_parent(s)))
                open_.insert(*u);
        for (const auto& [id, node] : h_.nodes())
            hchildren_[node.parent].push_back(id);
        for (std::size_t s = 1; s <= h_.sites().size(); ++s)
            if (const auto* u = std::get_if<NodeId>(&h_.site_parent(s)))
                ++hsites_[*u];
        for (const auto& [p, l] : p_.links())
            ppre_[l].push_back(p);
        for (const auto& [p, l] : h_.links())
            hpre_[l].push_back(p);
        plan();
    }

    std::vector<Occurrence> run() {
        search(0);
        return std::move(out_);
    }

private:
    std::size_t degree(NodeId v) const {
        const auto& n = p_.node(v);
        std::size_t d = n.control.plus + n.control.minus;
        if (std::holds_alternative<NodeId>(n.parent))
            ++d;
        if (auto it = pchildren_.find(v); it != pchildren_.end())
            d += it->second.size();
        return d;
    }

    bool adjacent(NodeId a, NodeId b) const {
        const auto& na = p_.node(a);
        const auto& nb = p_.node(b);
        if (na.parent == Parent{b} || nb.parent == Parent{a})
            return true;
        auto touches = [&](NodeId from, NodeId to) {
            for (std::size_t k = 0; k < p_.node(from).control.plus; ++k)
                if (auto l = p_.link_of(port(from, k)))
                    if (const auto* pr = std::get_if<PortRef>(&*l); pr && pr->node == to)
                        return true;
            return false;
        };
        return touches(a, b) || touches(b, a);
    }

    // Most constrained first: highest degree, then most ties to planned nodes.
    void plan() {
        std::set<NodeId> left(pnodes_.begin(), pnodes_.end());
        while (!left.empty()) {
            NodeId best{};
            long best_score = -1;
            for (auto v : left) {
                long ties = 0;
                for (auto u : order_)
                    ties += adjacent(u, v) ? 1 : 0;
                long score = ties * 1000 + static_cast<long>(degree(v));
                if (score > best_score) {
                    best = v;
                    best_score = score;
                }
            }
            order_.push_back(best);
            left.erase(best);
        }
    }

    const NodeId* image(NodeId v) const {
        auto it = phi_.find(v);
        return it == phi_.end() ? nullptr : &it->second;
    }

    bool consistent(Occurrence* occ) const {
        std::map<std::size_t, Parent> anchors;
        std::map<EdgeId, EdgeId> edges;
        std::map<EdgeId, EdgeId> edges_back;
        std::map<NameRef, Link> names;

        for (const auto& [v, w] : phi_) {
            const auto& pn = p_.node(v);
            const auto& hn = h_.node(w);
            if (!(pn.control == hn.control) || !attrs_included(pn, hn))
                return false;

            if (const auto* u = std::get_if<NodeId>(&pn.parent)) {
                if (const auto* iu = image(*u); iu && !(hn.parent == Parent{*iu}))
                    return false;
            } else {
                const auto r = std::get<RootIndex>(pn.parent).value;
                if (anchor_top_ && !std::holds_alternative<RootIndex>(hn.parent))
                    return false;
                if (const auto* a = std::get_if<NodeId>(&hn.parent); a && used_.count(*a))
                    return false;
                auto [it, inserted] = anchors.emplace(r, hn.parent);
                if (!inserted && !(it->second == hn.parent))
                    return false;
            }

            if (!open_.count(v)) {
                auto pc = pchildren_.find(v);
                auto hc = hchildren_.find(Parent{w});
                const std::size_t np = pc == pchildren_.end() ? 0 : pc->second.size();
                const std::size_t nh = hc == hchildren_.end() ? 0 : hc->second.size();
                if (np != nh || hsites_.count(w))
                    return false;
            }

            for (std::size_t k = 0; k < pn.control.plus; ++k) {
                auto pl = p_.link_of(port(v, k));
                auto hl = h_.link_of(port(w, k));
                if (!pl || !hl)
                    return false;
                if (const auto* pr = std::get_if<PortRef>(&*pl)) {
                    const auto* hr = std::get_if<PortRef>(&*hl);
                    if (!hr || hr->index != pr->index ||
                        !(h_.node(hr->node).control == p_.node(pr->node).control))
                        return false;
                    if (const auto* iu = image(pr->node); iu && !(hr->node == *iu))
                        return false;
                } else if (const auto* e = std::get_if<EdgeId>(&*pl)) {
                    const auto* he = std::get_if<EdgeId>(&*hl);
                    if (!he)
                        return false;
                    auto [it, ins] = edges.emplace(*e, *he);
                    auto [jt, jns] = edges_back.emplace(*he, *e);
                    if (!(it->second == *he) || !(jt->second == *e))
                        return false;
                } else {
                    auto [it, ins] = names.emplace(std::get<NameRef>(*pl), *hl);
                    if (!(it->second == *hl))
                        return false;
                }
            }
        }
        if (occ) {
            occ->node_map = phi_;
            occ->edge_map = std::move(edges);
            occ->root_anchors = std::move(anchors);
            occ->name_map = std::move(names);
        }
        return true;
    }

    // Closed edges: the host edge is reached by exactly the matched points.
    bool edges_closed(const Occurrence& occ) const {
        for (const auto& [e, he] : occ.edge_map) {
            const auto& pp = ppre_.at(Link{e});
            if (std::any_of(pp.begin(), pp.end(),
                            [](const Point& p) { return std::holds_alternative<NameRef>(p); }))
                continue;
            auto it = hpre_.find(Link{he});
            if (it == hpre_.end() || it->second.size() != pp.size())
                return false;
        }
        return true;
    }

    std::vector<NodeId> candidates(NodeId v) const {
        const auto& pn = p_.node(v);
        if (const auto* u = std::get_if<NodeId>(&pn.parent)) {
            if (const auto* iu = image(*u))
                return children_of(Parent{*iu});
        } else {
            const auto r = std::get<RootIndex>(pn.parent);
            for (const auto& [pv, hw] : phi_)
                if (p_.node(pv).parent == Parent{r})
                    return children_of(h_.node(hw).parent);
        }
        if (auto it = pchildren_.find(v); it != pchildren_.end())
            for (auto c : it->second)
                if (const auto* ic = image(c)) {
                    if (const auto* hp = std::get_if<NodeId>(&h_.node(*ic).parent))
                        return {*hp};
                    return {};
                }
        std::vector<NodeId> all;
        for (const auto& [id, _] : h_.nodes())
            all.push_back(id);
        return all;
    }

    std::vector<NodeId> children_of(const Parent& p) const {
        auto it = hchildren_.find(p);
        return it == hchildren_.end() ? std::vector<NodeId>{} : it->second;
    }

    void search(std::size_t depth) {
        if (depth == order_.size()) {
            Occurrence occ;
            if (consistent(&occ) && edges_closed(occ))
                out_.push_back(std::move(occ));
            return;
        }
        const NodeId v = order_[depth];
        for (auto w : candidates(v)) {
            if (used_.count(w) || !(h_.node(w).control == p_.node(v).control) ||
                !attrs_included(p_.node(v), h_.node(w)))
                continue;
            phi_[v] = w;
            used_.insert(w);
            if (consistent(nullptr))
                search(depth + 1);
            used_.erase(w);
            phi_.erase(v);
        }
    }

    bool anchor_top_;
    const Bigraph& p_;
    const Bigraph& h_;
    std::vector<NodeId> pnodes_;
    std::map<NodeId, std::vector<NodeId>> pchildren_;
    std::set<NodeId> open_;
    std::map<Parent, std::vector<NodeId>> hchildren_;
    std::map<NodeId, std::size_t> hsites_;
    std::map<Link, std::vector<Point>> ppre_, hpre_;
    std::vector<NodeId> order_;
    std::map<NodeId, NodeId> phi_;
    std::set<NodeId> used_;
    std::vector<Occurrence> out_;
};

}  // namespace

std::vector<Occurrence> find_matches(const Pattern& pattern, const Bigraph& host) {
    Signature::merge(pattern.bigraph.signature(), host.signature());
    for (const auto& [id, node] : pattern.bigraph.nodes())
        if (!host.signature().admits(node.control))
            throw SignatureMismatch("pattern '" + pattern.name + "' uses control '" +
                                    node.control.name + "' unknown to the host");
    return Matcher(pattern, host).run();
}

SortingResult check_sorting(const Bigraph& host, const std::vector<Pattern>& forbidden) {
    SortingResult result;
    for (const auto& p : forbidden) {
        auto occ = find_matches(p, host);
        if (!occ.empty())
            result.counterexamples.emplace_back(p.name, std::move(occ));
    }
    result.well_sorted = result.counterexamples.empty();
    return result;
}

}  // namespace ldbig::sorting
