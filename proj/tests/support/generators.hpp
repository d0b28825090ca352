#pragma once

#include "ldbig/algebra.hpp"
#include "ldbig/analyses.hpp"
#include "ldbig/bigraph.hpp"
#include "ldbig/sorting.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace ldbig::testing {

using Rng = std::mt19937;

inline std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

template <class T>
const T& pick(Rng& rng, const std::vector<T>& xs) {
    return xs[uniform(rng, 0, xs.size() - 1)];
}

/// Small fixed signature used by the algebraic tests.
inline Signature test_signature() {
    Signature sig;
    sig.add({"A", 1, 0});
    sig.add({"B", 1, 1});
    sig.add({"C", 0, 1});
    sig.add({"D", 2, 1});
    return sig;
}

inline std::vector<Control> test_controls() {
    std::vector<Control> out;
    const auto sig = test_signature();
    for (const auto& [_, decl] : sig.decls())
        out.push_back(decl.control);
    return out;
}

/// Each name of the pools lands on the positive side, the negative side or
/// nowhere, independently per locality.
inline LocalInterface random_interface(Rng& rng, std::size_t width,
                                       const std::vector<std::string>& global_pool,
                                       const std::vector<std::string>& local_pool = {"a", "b",
                                                                                     "c"}) {
    auto fill = [&](const std::vector<std::string>& pool) {
        Locality loc;
        for (const auto& n : pool) {
            switch (uniform(rng, 0, 3)) {
            case 0:
                loc.plus.insert(n);
                break;
            case 1:
                loc.minus.insert(n);
                break;
            default:
                break;
            }
        }
        return loc;
    };
    std::vector<Locality> locs{fill(global_pool)};
    for (std::size_t i = 0; i < width; ++i)
        locs.push_back(fill(local_pool));
    return LocalInterface(std::move(locs));
}

struct BigraphShape {
    std::size_t max_nodes = 4;
    std::size_t max_edges = 2;
    /// Probability that a name point is allowed to target a name.
    double name_to_name = 0.3;
    bool attrs = true;
};

/// A random well-formed bigraph inner -> outer over the test signature.
/// Same-side name-to-name links at one interface index are never produced,
/// so the result has no pass-through names.
inline Bigraph random_bigraph(Rng& rng, const LocalInterface& inner, const LocalInterface& outer,
                              const BigraphShape& shape = {}) {
    const auto sig = test_signature();
    const auto controls = test_controls();
    const std::size_t roots = outer.width();
    BigraphBuilder builder(sig, inner, outer);

    const std::size_t n = roots == 0 ? 0 : uniform(rng, 0, shape.max_nodes);
    std::vector<NodeId> ids;
    std::vector<std::size_t> root_of;
    std::vector<Control> ctrl;
    auto random_parent = [&](std::size_t& root) -> Parent {
        const std::size_t k = uniform(rng, 0, roots + ids.size() - 1);
        if (k < roots) {
            root = k + 1;
            return RootIndex{k + 1};
        }
        root = root_of[k - roots];
        return ids[k - roots];
    };
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t root = 0;
        Parent parent = random_parent(root);
        Control c = pick(rng, controls);
        std::map<std::string, std::string> attrs;
        if (shape.attrs && coin(rng, 0.2))
            attrs["tag"] = coin(rng) ? "x" : "y";
        ids.push_back(builder.add_node(c, parent, attrs));
        root_of.push_back(root);
        ctrl.push_back(c);
    }
    std::vector<std::size_t> site_root(inner.width() + 1, 0);
    for (std::size_t s = 1; s <= inner.width(); ++s) {
        std::size_t root = 0;
        builder.set_site_parent(s, random_parent(root));
        site_root[s] = root;
    }

    std::vector<EdgeId> edges;
    for (std::size_t e = 0, m = uniform(rng, 0, shape.max_edges); e < m; ++e)
        edges.push_back(builder.add_edge());

    struct Candidate {
        Link link;
        std::size_t locality;
    };
    std::vector<Candidate> links;
    for (std::size_t i = 0; i <= inner.width(); ++i)
        for (const auto& x : inner.at(i).minus)
            links.push_back({inner_name(i, x), i == 0 ? 0 : site_root[i]});
    for (std::size_t i = 0; i <= outer.width(); ++i)
        for (const auto& x : outer.at(i).plus)
            links.push_back({outer_name(i, x), i});
    for (std::size_t k = 0; k < ids.size(); ++k)
        for (std::size_t j = 0; j < ctrl[k].minus; ++j)
            links.push_back({port(ids[k], j), root_of[k]});

    auto connect = [&](const Point& p, std::size_t loc) {
        const auto* pn = std::get_if<NameRef>(&p);
        const bool names_ok = !pn || coin(rng, shape.name_to_name);
        std::vector<Link> ok;
        for (const auto& c : links) {
            if (c.locality != 0 && c.locality != loc)
                continue;
            if (const auto* ln = std::get_if<NameRef>(&c.link)) {
                if (!names_ok)
                    continue;
                if (pn && pn->side == ln->side && pn->locality == ln->locality)
                    continue;
            }
            ok.push_back(c.link);
        }
        for (const auto& e : edges)
            ok.push_back(e);
        if (ok.empty() || coin(rng, 0.1)) {
            edges.push_back(builder.add_edge());
            ok.push_back(edges.back());
        }
        builder.set_link(p, pick(rng, ok));
    };
    for (std::size_t i = 0; i <= inner.width(); ++i)
        for (const auto& x : inner.at(i).plus)
            connect(inner_name(i, x), i == 0 ? 0 : site_root[i]);
    for (std::size_t i = 0; i <= outer.width(); ++i)
        for (const auto& x : outer.at(i).minus)
            connect(outer_name(i, x), i);
    for (std::size_t k = 0; k < ids.size(); ++k)
        for (std::size_t j = 0; j < ctrl[k].plus; ++j)
            connect(port(ids[k], j), root_of[k]);
    return std::move(builder).build();
}

/// Widths w_0..w_{count-1} in [0, max] such that a positive width is never
/// followed by zero (a bigraph with sites needs a root).
inline std::vector<std::size_t> random_widths(Rng& rng, std::size_t count, std::size_t max) {
    std::vector<std::size_t> w(count);
    for (auto& x : w)
        x = uniform(rng, 0, max);
    for (std::size_t i = 1; i < count; ++i)
        if (w[i - 1] > 0 && w[i] == 0)
            w[i] = 1;
    return w;
}

/// Chain of interfaces I_0, ..., I_{count-1} for composable sequences.
inline std::vector<LocalInterface> random_chain(Rng& rng, std::size_t count, std::size_t max_width,
                                                const std::vector<std::string>& globals = {"g", "h"}) {
    std::vector<LocalInterface> out;
    for (auto w : random_widths(rng, count, max_width))
        out.push_back(random_interface(rng, w, globals));
    return out;
}

/// Renames every node and edge identifier through a random injection.
inline Bigraph scramble_support(Rng& rng, const Bigraph& b) {
    std::vector<std::uint32_t> fresh(b.nodes().size() + 10);
    for (std::size_t i = 0; i < fresh.size(); ++i)
        fresh[i] = static_cast<std::uint32_t>(100 + 3 * i);
    std::shuffle(fresh.begin(), fresh.end(), rng);
    std::map<NodeId, NodeId> nm;
    std::size_t k = 0;
    for (const auto& [id, _] : b.nodes())
        nm[id] = NodeId{fresh[k++]};
    std::vector<std::uint32_t> efresh(b.edges().size() + 10);
    for (std::size_t i = 0; i < efresh.size(); ++i)
        efresh[i] = static_cast<std::uint32_t>(50 + 7 * i);
    std::shuffle(efresh.begin(), efresh.end(), rng);
    std::map<EdgeId, EdgeId> em;
    k = 0;
    for (const auto& e : b.edges())
        em[e] = EdgeId{efresh[k++]};

    auto mp = [&](const Parent& p) -> Parent {
        if (const auto* n = std::get_if<NodeId>(&p))
            return nm.at(*n);
        return p;
    };
    BigraphBuilder builder(b.signature(), b.inner(), b.outer());
    for (const auto& [id, node] : b.nodes())
        builder.add_node(nm.at(id), node.control, mp(node.parent), node.attrs);
    for (const auto& [_, e] : em)
        builder.add_edge(e);
    for (std::size_t s = 1; s <= b.sites().size(); ++s)
        builder.set_site_parent(s, mp(b.site_parent(s)));
    for (const auto& [p, l] : b.links()) {
        Point np = p;
        if (auto* pr = std::get_if<PortRef>(&np))
            pr->node = nm.at(pr->node);
        Link nl = l;
        if (auto* pr = std::get_if<PortRef>(&nl))
            pr->node = nm.at(pr->node);
        else if (auto* e = std::get_if<EdgeId>(&nl))
            *e = em.at(*e);
        builder.set_link(np, nl);
    }
    return std::move(builder).build();
}

/// A pattern cut out of `source`: up to `max_nodes` of its nodes with their
/// nesting, links the cut keeps inside become ports or edges, the rest
/// become global names. Sites are added where the cut drops content, and at
/// random elsewhere.
inline sorting::Pattern extract_pattern(Rng& rng, const Bigraph& source, std::size_t max_nodes,
                                        const std::string& name) {
    std::vector<NodeId> all;
    for (const auto& [id, _] : source.nodes())
        all.push_back(id);
    std::shuffle(all.begin(), all.end(), rng);
    const std::size_t k = all.empty() ? 0 : uniform(rng, 1, std::min(max_nodes, all.size()));
    std::set<NodeId> keep(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k));

    // One pattern root per distinct outside parent.
    std::map<Parent, std::size_t> root_for;
    for (auto v : keep) {
        const Parent& p = source.node(v).parent;
        if (const auto* u = std::get_if<NodeId>(&p); u && keep.count(*u))
            continue;
        root_for.emplace(p, 0);
    }
    std::size_t r = 0;
    for (auto& [_, idx] : root_for)
        idx = ++r;

    std::vector<Parent> site_parents;
    for (auto v : keep) {
        bool dropped = false;
        for (auto c : source.children(Parent{v}))
            dropped = dropped || !keep.count(c);
        dropped = dropped || !source.child_sites(Parent{v}).empty();
        if (dropped || coin(rng, 0.2))
            site_parents.push_back(v);
    }
    for (std::size_t i = 1; i <= r; ++i)
        if (coin(rng, 0.2))
            site_parents.push_back(RootIndex{i});

    std::map<Link, std::string> outside;
    std::vector<std::pair<Point, Link>> links;
    std::set<EdgeId> edges;
    for (auto v : keep) {
        for (std::size_t j = 0; j < source.node(v).control.plus; ++j) {
            const Link l = *source.link_of(port(v, j));
            bool inside = false;
            if (const auto* pr = std::get_if<PortRef>(&l)) {
                inside = keep.count(pr->node) != 0;
            } else if (const auto* e = std::get_if<EdgeId>(&l)) {
                inside = coin(rng, 0.7);
                for (const auto& [pt, target] : source.links())
                    if (target == l) {
                        const auto* pp = std::get_if<PortRef>(&pt);
                        inside = inside && pp && keep.count(pp->node);
                    }
                if (inside)
                    edges.insert(*e);
            }
            if (inside) {
                links.emplace_back(port(v, j), l);
            } else {
                auto [it, _] = outside.emplace(l, "x" + std::to_string(outside.size()));
                links.emplace_back(port(v, j), outer_name(0, it->second));
            }
        }
    }

    std::vector<Locality> inner(site_parents.size() + 1), outer(r + 1);
    for (const auto& [_, n] : outside)
        outer[0].plus.insert(n);
    BigraphBuilder builder(source.signature(), LocalInterface(inner), LocalInterface(outer));
    for (auto v : keep) {
        Parent p = source.node(v).parent;
        if (const auto* u = std::get_if<NodeId>(&p); !(u && keep.count(*u)))
            p = RootIndex{root_for.at(p)};
        builder.add_node(v, source.node(v).control, p);
    }
    for (auto e : edges)
        builder.add_edge(e);
    for (std::size_t s = 0; s < site_parents.size(); ++s)
        builder.set_site_parent(s + 1, site_parents[s]);
    for (const auto& [p, l] : links)
        builder.set_link(p, l);
    sorting::Pattern pattern{name, std::move(builder).build(), sorting::Pattern::Anchor::anywhere};
    if (coin(rng, 0.25))
        pattern.anchor = sorting::Pattern::Anchor::top;
    return pattern;
}

struct ComposeShape {
    std::size_t max_services = 6;
    std::size_t max_networks = 4;
    std::size_t max_volumes = 3;
};

struct GeneratedCompose {
    std::vector<std::string> service_blocks;
    std::string tail;

    /// The document with services in the given order.
    std::string text(const std::vector<std::size_t>& order) const {
        std::string out = "version: '2'\nservices:\n";
        for (auto i : order)
            out += service_blocks[i];
        return out + tail;
    }
    std::string text() const {
        std::vector<std::size_t> order(service_blocks.size());
        for (std::size_t i = 0; i < order.size(); ++i)
            order[i] = i;
        return text(order);
    }
};

/// A random valid compose document in the supported subset.
inline GeneratedCompose random_compose(Rng& rng, const ComposeShape& shape = {}) {
    const std::size_t ns = uniform(rng, 1, shape.max_services);
    const std::size_t nn = uniform(rng, 0, shape.max_networks);
    const std::size_t nv = uniform(rng, 0, shape.max_volumes);
    std::vector<std::string> services, networks, volumes;
    for (std::size_t i = 0; i < ns; ++i)
        services.push_back("svc" + std::to_string(i));
    for (std::size_t i = 0; i < nn; ++i)
        networks.push_back("net" + std::to_string(i));
    for (std::size_t i = 0; i < nv; ++i)
        volumes.push_back("vol" + std::to_string(i));

    GeneratedCompose out;
    std::size_t next_host_port = 8000;
    for (std::size_t i = 0; i < ns; ++i) {
        std::ostringstream s;
        s << "  " << services[i] << ":\n    image: img" << uniform(rng, 0, 3) << "\n";
        std::vector<std::string> links;
        for (std::size_t j = 0; j < ns; ++j) {
            if (j == i || !coin(rng, 0.3))
                continue;
            links.push_back(coin(rng) ? services[j]
                                      : services[j] + ":alias" + std::to_string(j));
        }
        if (!links.empty()) {
            s << "    links:\n";
            for (const auto& l : links)
                s << "      - " << l << "\n";
        }
        std::vector<std::string> container_ports;
        for (std::size_t p = 0, m = uniform(rng, 0, 2); p < m; ++p)
            container_ports.push_back(std::to_string(80 + 10 * p));
        std::vector<std::string> published, exposed;
        for (const auto& cp : container_ports)
            (coin(rng) ? published : exposed).push_back(cp);
        if (!published.empty()) {
            s << "    ports:\n";
            for (const auto& cp : published)
                s << "      - \"" << next_host_port++ << ":" << cp << "\"\n";
        }
        if (!exposed.empty()) {
            s << "    expose:\n";
            for (const auto& cp : exposed)
                s << "      - \"" << cp << "\"\n";
        }
        if (!networks.empty() && coin(rng, 0.8)) {
            std::vector<std::string> mine;
            for (const auto& n : networks)
                if (coin(rng))
                    mine.push_back(n);
            if (mine.empty())
                mine.push_back(pick(rng, networks));
            s << "    networks: [";
            for (std::size_t k = 0; k < mine.size(); ++k)
                s << (k ? ", " : "") << mine[k];
            s << "]\n";
        }
        std::vector<std::string> mounts;
        for (std::size_t v = 0; v < volumes.size(); ++v)
            if (coin(rng, 0.4))
                mounts.push_back(volumes[v] + ":/data" + std::to_string(v) +
                                 (coin(rng) ? ":ro" : ""));
        if (!mounts.empty()) {
            s << "    volumes:\n";
            for (const auto& m : mounts)
                s << "      - " << m << "\n";
        }
        out.service_blocks.push_back(s.str());
    }
    std::ostringstream t;
    if (!networks.empty()) {
        t << "networks:\n";
        for (const auto& n : networks)
            t << "  " << n << ":\n    driver: bridge\n";
    }
    if (!volumes.empty()) {
        t << "volumes:\n";
        for (const auto& v : volumes)
            t << "  " << v << ":\n    external: " << (coin(rng) ? "true" : "false") << "\n";
    }
    out.tail = t.str();
    return out;
}

/// A random flow graph with at most `max_nodes` nodes and at least one
/// network.
inline analysis::FlowGraph random_flow_graph(Rng& rng, std::size_t max_nodes = 12) {
    using analysis::FlowArc;
    using analysis::FlowNode;
    const std::size_t networks = uniform(rng, 1, 4);
    const std::size_t volumes = uniform(rng, 0, 3);
    const std::size_t containers = uniform(rng, 1, max_nodes - networks - volumes);
    analysis::FlowGraph g;
    std::vector<FlowNode> cs, rs;
    for (std::size_t i = 0; i < containers; ++i)
        cs.push_back({FlowNode::Kind::container, "c" + std::to_string(i)});
    for (std::size_t i = 0; i < networks; ++i)
        rs.push_back({FlowNode::Kind::network, "n" + std::to_string(i)});
    for (std::size_t i = 0; i < volumes; ++i)
        rs.push_back({FlowNode::Kind::volume, "v" + std::to_string(i)});
    for (const auto& n : cs)
        g.add_node(n);
    for (const auto& n : rs)
        g.add_node(n);
    const double density = std::uniform_real_distribution<double>(0.1, 0.6)(rng);
    for (const auto& c : cs)
        for (const auto& r : rs) {
            if (coin(rng, density))
                g.add_arc({r, c, FlowArc::Kind::read});
            if (coin(rng, density))
                g.add_arc({c, r, FlowArc::Kind::write});
        }
    return g;
}

/// A random strict order over the networks of `g`: pairs consistent with a
/// shuffled ranking.
inline analysis::SecurityOrder random_dag_order(Rng& rng, const analysis::FlowGraph& g) {
    std::vector<std::string> nets;
    for (const auto& n : g.nodes())
        if (n.kind == analysis::FlowNode::Kind::network)
            nets.push_back(n.name);
    std::shuffle(nets.begin(), nets.end(), rng);
    analysis::SecurityOrder order;
    const double density = std::uniform_real_distribution<double>(0.0, 0.7)(rng);
    for (std::size_t i = 0; i < nets.size(); ++i)
        for (std::size_t j = i + 1; j < nets.size(); ++j)
            if (coin(rng, density))
                order.assertions.insert({nets[i], nets[j]});
    return order;
}

}  // namespace ldbig::testing
