#include "ldbig/algebra.hpp"

#include "ldbig/detail/overloaded.hpp"

#include <algorithm>
#include <functional>
#include <queue>

namespace ldbig {

using detail::overloaded;

namespace {

bool is_link_of(const Bigraph& b, const Link& l) {
    return std::visit(overloaded{
                          [&](const NameRef& n) {
                              const auto& iface = n.side == Side::inner ? b.inner() : b.outer();
                              auto pol = n.side == Side::inner ? Polarity::negative
                                                               : Polarity::positive;
                              return iface.contains(n.locality, pol, n.text);
                          },
                          [&](const EdgeId& e) { return b.edges().count(e) != 0; },
                          [&](const PortRef& pr) {
                              auto it = b.nodes().find(pr.node);
                              return it != b.nodes().end() && pr.index < it->second.control.minus;
                          },
                      },
                      l);
}

}  // namespace

std::vector<ValidationIssue> validate(const Bigraph& b) {
    std::vector<ValidationIssue> issues;
    auto report = [&](std::string clause, std::string element, std::string message) {
        issues.push_back({std::move(clause), std::move(element), std::move(message)});
    };

    if (auto msg = b.inner().check(); !msg.empty())
        report("interface", "inner", msg);
    if (auto msg = b.outer().check(); !msg.empty())
        report("interface", "outer", msg);

    const auto roots = b.outer().width();
    auto check_parent = [&](const Parent& p, const std::string& who) {
        if (const auto* r = std::get_if<RootIndex>(&p)) {
            if (r->value == 0 || r->value > roots)
                report("parent", who, "placed under nonexistent root " + std::to_string(r->value));
            return;
        }
        if (!b.nodes().count(std::get<NodeId>(p)))
            report("parent", who, "placed under unknown " + to_string(p));
    };

    for (const auto& [id, node] : b.nodes()) {
        const auto who = "node:" + std::to_string(id.value);
        if (!b.signature().admits(node.control))
            report("signature", who,
                   "control '" + node.control.name + "' <" + std::to_string(node.control.plus) +
                       "," + std::to_string(node.control.minus) + "> not in signature");
        check_parent(node.parent, who);
    }
    for (std::size_t s = 1; s <= b.sites().size(); ++s)
        check_parent(b.site_parent(s), "site:" + std::to_string(s));
    if (b.sites().size() != b.inner().width())
        report("parent", "sites", "site count differs from inner width");

    // Forest: every node must reach a root.
    bool forest_ok = true;
    for (const auto& [id, node] : b.nodes()) {
        if (!b.root_of(id)) {
            forest_ok = false;
            // Only flag nodes whose parent chain is well-typed, i.e. genuine cycles.
            std::set<NodeId> seen;
            Parent cur = id;
            bool dangling = false;
            while (auto* n = std::get_if<NodeId>(&cur)) {
                if (!seen.insert(*n).second)
                    break;
                auto it = b.nodes().find(*n);
                if (it == b.nodes().end()) {
                    dangling = true;
                    break;
                }
                cur = it->second.parent;
            }
            if (!dangling)
                report("forest", "node:" + std::to_string(id.value), "parent chain is cyclic");
        }
    }

    // Link map: total on points, into links, respecting localities.
    const auto points = b.points();
    std::set<Point> point_set(points.begin(), points.end());
    for (const auto& p : points)
        if (!b.links().count(p))
            report("link totality", to_string(p), "point has no link");
    std::map<Link, std::size_t> preimage;
    for (const auto& [p, l] : b.links()) {
        if (!point_set.count(p)) {
            report("link domain", to_string(p), "not a point of the bigraph");
            continue;
        }
        if (!is_link_of(b, l)) {
            report("link codomain", to_string(p), to_string(l) + " is not a link of the bigraph");
            continue;
        }
        ++preimage[l];
        if (!forest_ok)
            continue;
        auto pl = b.locality(p);
        auto ll = b.locality(l);
        if (pl && ll && *ll != 0 && *pl != *ll)
            report("link locality", to_string(p),
                   "point at locality " + std::to_string(*pl) + " targets " + to_string(l) +
                       " at locality " + std::to_string(*ll));
    }

    // Pass-through names: an inner negative name reached from an inner
    // positive name of the same locality has exactly one preimage; dually
    // for outer names.
    for (const auto& [p, l] : b.links()) {
        const auto* pn = std::get_if<NameRef>(&p);
        const auto* ln = std::get_if<NameRef>(&l);
        if (!pn || !ln || pn->side != ln->side || pn->locality != ln->locality)
            continue;
        if (preimage[l] != 1)
            report("pass-through", to_string(l),
                   "name reached from " + to_string(p) + " has " + std::to_string(preimage[l]) +
                       " preimages");
    }
    return issues;
}

Bigraph identity(const LocalInterface& iface, Signature signature) {
    BigraphBuilder builder(std::move(signature), iface, iface);
    for (std::size_t i = 1; i <= iface.width(); ++i)
        builder.set_site_parent(i, RootIndex{i});
    for (std::size_t i = 0; i <= iface.width(); ++i) {
        for (const auto& n : iface.at(i).plus)
            builder.set_link(inner_name(i, n), outer_name(i, n));
        for (const auto& n : iface.at(i).minus)
            builder.set_link(outer_name(i, n), inner_name(i, n));
    }
    return std::move(builder).build();
}

Bigraph shift_support(const Bigraph& b, std::uint32_t node_offset, std::uint32_t edge_offset) {
    auto shift_node = [&](NodeId id) { return NodeId{id.value + node_offset}; };
    auto shift_parent = [&](const Parent& p) -> Parent {
        if (const auto* n = std::get_if<NodeId>(&p))
            return shift_node(*n);
        return p;
    };
    BigraphBuilder builder(b.signature(), b.inner(), b.outer());
    for (const auto& [id, node] : b.nodes())
        builder.add_node(shift_node(id), node.control, shift_parent(node.parent), node.attrs);
    for (const auto& e : b.edges())
        builder.add_edge(EdgeId{e.value + edge_offset});
    for (std::size_t s = 1; s <= b.sites().size(); ++s)
        builder.set_site_parent(s, shift_parent(b.site_parent(s)));
    for (const auto& [p, l] : b.links()) {
        Point np = p;
        if (auto* pr = std::get_if<PortRef>(&np))
            pr->node = shift_node(pr->node);
        Link nl = l;
        if (auto* pr = std::get_if<PortRef>(&nl))
            pr->node = shift_node(pr->node);
        else if (auto* e = std::get_if<EdgeId>(&nl))
            e->value += edge_offset;
        builder.set_link(std::move(np), std::move(nl));
    }
    return std::move(builder).build();
}

namespace {

bool supports_overlap(const Bigraph& a, const Bigraph& b) {
    for (const auto& [id, _] : b.nodes())
        if (a.nodes().count(id))
            return true;
    for (const auto& e : b.edges())
        if (a.edges().count(e))
            return true;
    return false;
}

/// Shifts `b` past `a`'s identifiers when their supports collide.
Bigraph disjoint_from(const Bigraph& a, const Bigraph& b) {
    if (!supports_overlap(a, b))
        return b;
    return shift_support(b, a.next_node_id(), a.next_edge_id());
}

}  // namespace

Bigraph compose(const Bigraph& outer_in, const Bigraph& inner) {
    if (!(inner.outer() == outer_in.inner()))
        throw InterfaceMismatch("cannot compose: outer interface " + to_string(inner.outer()) +
                                " differs from inner interface " + to_string(outer_in.inner()));
    auto signature = Signature::merge(inner.signature(), outer_in.signature());
    const Bigraph outer = disjoint_from(inner, outer_in);

    BigraphBuilder builder(std::move(signature), inner.inner(), outer.outer());

    // Crossing a root of `inner` lands wherever `outer` placed that site.
    auto lift = [&](const Parent& p) -> Parent {
        if (const auto* r = std::get_if<RootIndex>(&p))
            return outer.site_parent(r->value);
        return p;
    };
    for (const auto& [id, node] : inner.nodes())
        builder.add_node(id, node.control, lift(node.parent), node.attrs);
    for (const auto& [id, node] : outer.nodes())
        builder.add_node(id, node.control, node.parent, node.attrs);
    for (const auto& e : inner.edges())
        builder.add_edge(e);
    for (const auto& e : outer.edges())
        builder.add_edge(e);
    for (std::size_t s = 1; s <= inner.sites().size(); ++s)
        builder.set_site_parent(s, lift(inner.site_parent(s)));

    // link(p) = prelink(p) when that is already a link of the composite,
    // otherwise keep following prelink through the shared interface.
    const std::size_t bound = 2 * (inner.outer().width() + 1);
    std::size_t shared_names = 0;
    for (const auto& l : inner.outer().localities())
        shared_names += l.plus.size() + l.minus.size();

    auto resolve = [&](const Point& start, bool from_inner) -> Link {
        Point p = start;
        bool in_inner = from_inner;
        for (std::size_t steps = 0; steps <= shared_names + bound; ++steps) {
            const Bigraph& src = in_inner ? inner : outer;
            auto l = src.link_of(p);
            if (!l)
                throw CompositionError("point " + to_string(p) + " has no link");
            const auto* n = std::get_if<NameRef>(&*l);
            if (in_inner && n && n->side == Side::outer) {
                p = inner_name(n->locality, n->text);
                in_inner = false;
                continue;
            }
            if (!in_inner && n && n->side == Side::inner) {
                p = outer_name(n->locality, n->text);
                in_inner = true;
                continue;
            }
            return *l;
        }
        throw CompositionError("link of " + to_string(start) +
                               " cycles through the shared interface");
    };

    for (std::size_t i = 0; i <= inner.inner().width(); ++i)
        for (const auto& n : inner.inner().at(i).plus)
            builder.set_link(inner_name(i, n), resolve(inner_name(i, n), true));
    for (std::size_t i = 0; i <= outer.outer().width(); ++i)
        for (const auto& n : outer.outer().at(i).minus)
            builder.set_link(outer_name(i, n), resolve(outer_name(i, n), false));
    for (const auto& [id, node] : inner.nodes())
        for (std::size_t k = 0; k < node.control.plus; ++k)
            builder.set_link(port(id, k), resolve(port(id, k), true));
    for (const auto& [id, node] : outer.nodes())
        for (std::size_t k = 0; k < node.control.plus; ++k)
            builder.set_link(port(id, k), resolve(port(id, k), false));
    return std::move(builder).build();
}

Bigraph tensor(const Bigraph& left, const Bigraph& right_in, TensorOptions options) {
    GlobalRenaming inner_ren, outer_ren;
    auto inner = juxtapose(left.inner(), right_in.inner(), &inner_ren);
    auto outer = juxtapose(left.outer(), right_in.outer(), &outer_ren);
    if (!options.tag_globals && (!inner_ren.empty() || !outer_ren.empty()))
        throw GlobalNameClash("global names of the operands collide");
    auto signature = Signature::merge(left.signature(), right_in.signature());
    const Bigraph right = disjoint_from(left, right_in);

    const auto site_shift = left.inner().width();
    const auto root_shift = left.outer().width();

    auto shift_parent = [&](const Parent& p) -> Parent {
        if (const auto* r = std::get_if<RootIndex>(&p))
            return RootIndex{r->value + root_shift};
        return p;
    };
    // Relocates a name of the right operand into the juxtaposed interface.
    auto shift_name = [&](NameRef n, bool positive) {
        if (n.locality == 0) {
            const auto& ren = n.side == Side::inner ? inner_ren : outer_ren;
            const auto& map = positive ? ren.plus : ren.minus;
            if (auto it = map.find(n.text); it != map.end())
                n.text = it->second;
        } else {
            n.locality += n.side == Side::inner ? site_shift : root_shift;
        }
        return n;
    };

    BigraphBuilder builder(std::move(signature), std::move(inner), std::move(outer));
    for (const auto& [id, node] : left.nodes())
        builder.add_node(id, node.control, node.parent, node.attrs);
    for (const auto& [id, node] : right.nodes())
        builder.add_node(id, node.control, shift_parent(node.parent), node.attrs);
    for (const auto& e : left.edges())
        builder.add_edge(e);
    for (const auto& e : right.edges())
        builder.add_edge(e);
    for (std::size_t s = 1; s <= left.sites().size(); ++s)
        builder.set_site_parent(s, left.site_parent(s));
    for (std::size_t s = 1; s <= right.sites().size(); ++s)
        builder.set_site_parent(s + site_shift, shift_parent(right.site_parent(s)));
    for (const auto& [p, l] : left.links())
        builder.set_link(p, l);
    for (const auto& [p, l] : right.links()) {
        Point np = p;
        if (auto* n = std::get_if<NameRef>(&np))
            *n = shift_name(*n, n->side == Side::inner);
        Link nl = l;
        if (auto* n = std::get_if<NameRef>(&nl))
            *n = shift_name(*n, n->side == Side::outer);
        builder.set_link(std::move(np), std::move(nl));
    }
    return std::move(builder).build();
}

Bigraph tensor_all(const std::vector<Bigraph>& parts, TensorOptions options) {
    if (parts.empty())
        return identity(LocalInterface::unit());
    Bigraph acc = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i)
        acc = tensor(acc, parts[i], options);
    return acc;
}

// ---------------------------------------------------------------------------
// Isomorphism

namespace {

class IsoSearch {
public:
    IsoSearch(const Bigraph& a, const Bigraph& b, IsoOptions options)
        : a_(a), b_(b), options_(options) {
        for (const auto& [id, _] : a.nodes())
            a_nodes_.push_back(id);
        for (const auto& [id, _] : b.nodes())
            b_nodes_.push_back(id);
        for (std::size_t i = 0; i < a_nodes_.size(); ++i)
            a_index_[a_nodes_[i]] = i;
        for (std::size_t i = 0; i < b_nodes_.size(); ++i)
            b_index_[b_nodes_[i]] = i;
    }

    bool run() {
        if (a_nodes_.size() != b_nodes_.size() || a_.edges().size() != b_.edges().size() ||
            a_.sites().size() != b_.sites().size())
            return false;
        refine();
        {
            std::vector<int> ca = color_a_, cb = color_b_;
            std::sort(ca.begin(), ca.end());
            std::sort(cb.begin(), cb.end());
            if (ca != cb)
                return false;
        }
        order_nodes();
        map_.assign(a_nodes_.size(), npos);
        used_.assign(b_nodes_.size(), false);
        return search(0);
    }

private:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    // Shared color ids so classes are comparable across both bigraphs.
    int intern(const std::vector<long long>& key) {
        auto [it, inserted] = palette_.emplace(key, static_cast<int>(palette_.size()));
        return it->second;
    }

    int text_id(const std::string& s) {
        auto [it, inserted] = texts_.emplace(s, static_cast<int>(texts_.size()));
        return it->second;
    }

    std::vector<long long> base_key(const Bigraph& g, NodeId id) {
        const auto& node = g.node(id);
        std::vector<long long> key{text_id(node.control.name), static_cast<long long>(node.control.plus),
                                   static_cast<long long>(node.control.minus)};
        if (options_.compare_attributes)
            for (const auto& [k, v] : node.attrs) {
                key.push_back(text_id(k));
                key.push_back(text_id(v));
            }
        key.push_back(-1);
        if (const auto* r = std::get_if<RootIndex>(&node.parent))
            key.push_back(static_cast<long long>(r->value));
        else
            key.push_back(0);
        for (auto s : g.child_sites(id))
            key.push_back(static_cast<long long>(s));
        key.push_back(-2);
        for (std::size_t k = 0; k < node.control.plus; ++k) {
            auto l = g.link_of(port(id, k));
            if (!l)
                key.push_back(-3);
            else if (std::holds_alternative<NameRef>(*l))
                key.push_back(1000 + text_id(to_string(*l)));
            else if (std::holds_alternative<EdgeId>(*l))
                key.push_back(-4);
            else
                key.push_back(-5 - static_cast<long long>(std::get<PortRef>(*l).index));
        }
        return key;
    }

    std::vector<int> initial_colors(const Bigraph& g, const std::vector<NodeId>& ids) {
        std::vector<int> out;
        for (auto id : ids)
            out.push_back(intern(base_key(g, id)));
        return out;
    }

    std::vector<int> refine_once(const Bigraph& g, const std::vector<NodeId>& ids,
                                 const std::map<NodeId, std::size_t>& index,
                                 const std::vector<int>& color) {
        auto c = [&](NodeId id) { return static_cast<long long>(color[index.at(id)]); };
        // Points into each link, as colored port/name descriptors.
        std::map<Link, std::vector<long long>> incoming;
        for (const auto& [p, l] : g.links()) {
            long long d;
            if (const auto* pr = std::get_if<PortRef>(&p)) {
                if (!index.count(pr->node))
                    continue;
                d = c(pr->node) * 64 + static_cast<long long>(pr->index);
            } else {
                d = -1 - text_id(to_string(p));
            }
            incoming[l].push_back(d);
        }
        for (auto& [_, v] : incoming)
            std::sort(v.begin(), v.end());

        std::vector<int> out;
        for (auto id : ids) {
            const auto& node = g.node(id);
            std::vector<long long> key{c(id), -7};
            if (const auto* n = std::get_if<NodeId>(&node.parent); n && index.count(*n))
                key.push_back(c(*n));
            key.push_back(-8);
            std::vector<long long> kids;
            for (auto ch : g.children(id))
                kids.push_back(c(ch));
            std::sort(kids.begin(), kids.end());
            key.insert(key.end(), kids.begin(), kids.end());
            key.push_back(-9);
            for (std::size_t k = 0; k < node.control.plus; ++k) {
                auto l = g.link_of(port(id, k));
                if (!l)
                    continue;
                if (const auto* pr = std::get_if<PortRef>(&*l); pr && index.count(pr->node))
                    key.push_back(c(pr->node));
                const auto& in = incoming[*l];
                key.push_back(-10);
                key.insert(key.end(), in.begin(), in.end());
            }
            for (std::size_t k = 0; k < node.control.minus; ++k) {
                const auto& in = incoming[Link{port(id, k)}];
                key.push_back(-11);
                key.insert(key.end(), in.begin(), in.end());
            }
            out.push_back(intern(key));
        }
        return out;
    }

    static std::size_t classes(const std::vector<int>& v) {
        return std::set<int>(v.begin(), v.end()).size();
    }

    void refine() {
        color_a_ = initial_colors(a_, a_nodes_);
        color_b_ = initial_colors(b_, b_nodes_);
        for (std::size_t round = 0; round <= a_nodes_.size(); ++round) {
            auto na = refine_once(a_, a_nodes_, a_index_, color_a_);
            auto nb = refine_once(b_, b_nodes_, b_index_, color_b_);
            bool stable = classes(na) == classes(color_a_) && classes(nb) == classes(color_b_);
            color_a_ = std::move(na);
            color_b_ = std::move(nb);
            if (stable)
                break;
        }
    }

    // Parents before children so the parent constraint is always decidable.
    void order_nodes() {
        std::queue<NodeId> q;
        for (std::size_t r = 1; r <= a_.outer().width(); ++r)
            for (auto id : a_.children(RootIndex{r}))
                q.push(id);
        std::set<NodeId> seen;
        while (!q.empty()) {
            auto id = q.front();
            q.pop();
            if (!seen.insert(id).second)
                continue;
            order_.push_back(a_index_.at(id));
            for (auto ch : a_.children(id))
                q.push(ch);
        }
        // Malformed inputs (cycles, dangling parents) still get searched.
        for (std::size_t i = 0; i < a_nodes_.size(); ++i)
            if (!seen.count(a_nodes_[i]))
                order_.push_back(i);
    }

    std::optional<Parent> map_parent(const Parent& p) const {
        if (const auto* n = std::get_if<NodeId>(&p)) {
            auto it = a_index_.find(*n);
            if (it == a_index_.end() || map_[it->second] == npos)
                return std::nullopt;
            return b_nodes_[map_[it->second]];
        }
        return p;
    }

    std::optional<Point> map_point(const Point& p) const {
        if (const auto* pr = std::get_if<PortRef>(&p)) {
            auto it = a_index_.find(pr->node);
            if (it == a_index_.end() || map_[it->second] == npos)
                return std::nullopt;
            return Point{port(b_nodes_[map_[it->second]], pr->index)};
        }
        return p;
    }

    bool consistent(std::size_t ai, std::size_t bi) const {
        const auto a_id = a_nodes_[ai];
        const auto& an = a_.node(a_id);
        const auto& bn = b_.node(b_nodes_[bi]);
        if (auto mp = map_parent(an.parent); mp && !(*mp == bn.parent))
            return false;
        for (std::size_t k = 0; k < an.control.plus; ++k) {
            auto la = a_.link_of(port(a_id, k));
            auto lb = b_.link_of(port(b_nodes_[bi], k));
            if (!la || !lb) {
                if (la.has_value() != lb.has_value())
                    return false;
                continue;
            }
            if (la->index() != lb->index())
                return false;
            if (std::holds_alternative<NameRef>(*la) && !(*la == *lb))
                return false;
            if (const auto* pr = std::get_if<PortRef>(&*la)) {
                auto it = a_index_.find(pr->node);
                if (it != a_index_.end() && map_[it->second] != npos &&
                    !(Link{port(b_nodes_[map_[it->second]], pr->index)} == *lb))
                    return false;
            }
        }
        return true;
    }

    bool verify() const {
        std::map<EdgeId, EdgeId> fwd, back;
        for (const auto& p : a_.points()) {
            auto la = a_.link_of(p);
            auto mp = map_point(p);
            if (!mp)
                return false;
            auto lb = b_.link_of(*mp);
            if (!la || !lb) {
                if (la.has_value() != lb.has_value())
                    return false;
                continue;
            }
            if (const auto* e = std::get_if<EdgeId>(&*la)) {
                const auto* f = std::get_if<EdgeId>(&*lb);
                if (!f)
                    return false;
                auto [it, ins] = fwd.emplace(*e, *f);
                auto [jt, jns] = back.emplace(*f, *e);
                if (!(it->second == *f) || !(jt->second == *e))
                    return false;
                continue;
            }
            Link mapped = *la;
            if (auto* pr = std::get_if<PortRef>(&mapped)) {
                auto it = a_index_.find(pr->node);
                if (it == a_index_.end())
                    return false;
                pr->node = b_nodes_[map_[it->second]];
            }
            if (!(mapped == *lb))
                return false;
        }
        for (std::size_t s = 1; s <= a_.sites().size(); ++s) {
            auto mp = map_parent(a_.site_parent(s));
            if (!mp || !(*mp == b_.site_parent(s)))
                return false;
        }
        // Remaining edges are idle on both sides and pair up arbitrarily.
        return a_.edges().size() - fwd.size() == b_.edges().size() - back.size();
    }

    bool search(std::size_t depth) {
        if (depth == order_.size())
            return verify();
        const auto ai = order_[depth];
        for (std::size_t bi = 0; bi < b_nodes_.size(); ++bi) {
            if (used_[bi] || color_b_[bi] != color_a_[ai])
                continue;
            map_[ai] = bi;
            if (consistent(ai, bi)) {
                used_[bi] = true;
                if (search(depth + 1))
                    return true;
                used_[bi] = false;
            }
            map_[ai] = npos;
        }
        return false;
    }

    const Bigraph& a_;
    const Bigraph& b_;
    IsoOptions options_;
    std::vector<NodeId> a_nodes_, b_nodes_;
    std::map<NodeId, std::size_t> a_index_, b_index_;
    std::map<std::vector<long long>, int> palette_;
    std::map<std::string, int> texts_;
    std::vector<int> color_a_, color_b_;
    std::vector<std::size_t> order_;
    std::vector<std::size_t> map_;
    std::vector<bool> used_;
};

}  // namespace

bool is_isomorphic(const Bigraph& a, const Bigraph& b, IsoOptions options) {
    if (!(a.inner() == b.inner()) || !(a.outer() == b.outer()))
        return false;
    return IsoSearch(a, b, options).run();
}

}  // namespace ldbig
