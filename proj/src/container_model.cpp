#include "ldbig/container_model.hpp"

#include "ldbig/algebra.hpp"

#include <set>

namespace ldbig {

Signature ContainerSignature::signature() const {
    Signature sig;
    sig.add(container);
    sig.add(process(0, 0), true);
    sig.add(request);
    sig.add(network);
    sig.add(volume);
    return sig;
}

ContainerSignature default_signature() { return {}; }

namespace {

using Kind = ContainerSpecError::Kind;

void require_unique(const std::vector<std::string>& names, const std::string& what) {
    std::set<std::string> seen;
    for (const auto& n : names) {
        if (n.empty())
            throw ContainerSpecError(Kind::invalid_spec, "empty " + what + " name");
        if (!seen.insert(n).second)
            throw ContainerSpecError(Kind::invalid_spec, "duplicate " + what + " '" + n + "'");
    }
}

}  // namespace

Bigraph build_container(const ContainerSpec& spec) {
    if (spec.name.empty())
        throw ContainerSpecError(Kind::invalid_spec, "container name is empty");
    if (!spec.has_site && (!spec.site_services.empty() || !spec.site_resources.empty() ||
                           !spec.link_through.empty()))
        throw ContainerSpecError(Kind::invalid_spec,
                                 "container '" + spec.name + "' has site names but no site");

    const auto sig = default_signature();
    LocalInterface inner = LocalInterface::empty(spec.has_site ? 1 : 0);
    LocalInterface outer = LocalInterface::empty(1);

    auto add_name = [&](LocalInterface& iface, Polarity pol, const std::string& text) {
        try {
            if (iface.contains(1, pol, text))
                throw ContainerSpecError(Kind::invalid_spec, "interface name '" + text +
                                                                 "' used twice");
            iface.add(1, pol, text);
        } catch (const std::invalid_argument& e) {
            throw ContainerSpecError(Kind::invalid_spec, e.what());
        }
    };

    // Outer interface: the handle and published offers are negative; every
    // resource reached from inside is positive.
    add_name(outer, Polarity::negative, spec.name);
    for (const auto& p : spec.exposed_ports)
        add_name(outer, Polarity::negative, p);
    std::set<std::string> link_outs;
    for (const auto& l : spec.links) {
        add_name(outer, Polarity::positive, l);
        link_outs.insert(l);
    }
    for (const auto& n : spec.networks)
        if (!outer.contains(1, Polarity::positive, n.outer()))
            add_name(outer, Polarity::positive, n.outer());
    for (const auto& v : spec.volumes)
        if (!outer.contains(1, Polarity::positive, v.outer()))
            add_name(outer, Polarity::positive, v.outer());
    if (spec.has_site) {
        for (const auto& s : spec.site_services)
            add_name(inner, Polarity::positive, s);
        for (const auto& r : spec.site_resources)
            add_name(inner, Polarity::negative, r);
        for (const auto& t : spec.link_through)
            add_name(inner, Polarity::positive, t.inner);
    }

    {
        std::vector<std::string> net_names, vol_names;
        for (const auto& n : spec.networks)
            net_names.push_back(n.name);
        for (const auto& v : spec.volumes)
            vol_names.push_back(v.name);
        require_unique(net_names, "network");
        require_unique(vol_names, "volume");
    }

    BigraphBuilder builder(sig.signature(), inner, outer);
    auto attrs = spec.attrs;
    attrs["name"] = spec.name;
    const NodeId container = builder.add_node(sig.container, RootIndex{1}, std::move(attrs));
    builder.set_link(outer_name(1, spec.name), port(container, 0));
    if (spec.has_site)
        builder.set_site_parent(1, container);

    // Offered handles, keyed by handle name.
    std::map<std::string, PortRef> handles;
    std::vector<NodeId> process_nodes;
    for (std::size_t i = 0; i < spec.processes.size(); ++i) {
        const auto& ps = spec.processes[i];
        std::size_t r = ps.consumes.size(), s = ps.offers.size();
        if (ps.arity) {
            if (ps.arity->first < r || ps.arity->second < s)
                throw ContainerSpecError(
                    Kind::arity_overflow,
                    "process " + std::to_string(i) + " of '" + spec.name + "' needs <" +
                        std::to_string(r) + "," + std::to_string(s) + "> ports but has <" +
                        std::to_string(ps.arity->first) + "," + std::to_string(ps.arity->second) +
                        ">");
            r = ps.arity->first;
            s = ps.arity->second;
        }
        std::map<std::string, std::string> pattrs;
        if (!ps.label.empty())
            pattrs["name"] = ps.label;
        const NodeId id = builder.add_node(sig.process(r, s), container, std::move(pattrs));
        process_nodes.push_back(id);
        for (std::size_t k = 0; k < ps.offers.size(); ++k)
            if (!handles.emplace(ps.offers[k], port(id, k)).second)
                throw ContainerSpecError(Kind::invalid_spec,
                                         "handle '" + ps.offers[k] + "' offered twice");
    }

    std::map<std::string, NodeId> networks, volumes, requests;
    for (const auto& n : spec.networks) {
        const NodeId id = builder.add_node(sig.network, container, {{"name", n.name}});
        builder.set_link(port(id, 0), outer_name(1, n.outer()));
        networks[n.name] = id;
    }
    for (const auto& v : spec.volumes) {
        std::map<std::string, std::string> vattrs{{"name", v.name},
                                                  {"readonly", v.read_only ? "true" : "false"}};
        if (!v.host_path.empty())
            vattrs["path"] = v.host_path;
        const NodeId id = builder.add_node(sig.volume, container, std::move(vattrs));
        builder.set_link(port(id, 0), outer_name(1, v.outer()));
        volumes[v.name] = id;
    }
    std::set<std::string> site_resources(spec.site_resources.begin(), spec.site_resources.end());

    auto resolve = [&](const std::string& name, const std::string& who) -> Link {
        if (auto it = handles.find(name); it != handles.end())
            return it->second;
        if (auto it = networks.find(name); it != networks.end())
            return port(it->second, 0);
        if (auto it = volumes.find(name); it != volumes.end())
            return port(it->second, 0);
        if (auto it = requests.find(name); it != requests.end())
            return port(it->second, 0);
        if (site_resources.count(name))
            return inner_name(1, name);
        if (link_outs.count(name))
            return outer_name(1, name);
        throw ContainerSpecError(Kind::unresolved_name,
                                 who + " of '" + spec.name + "' consumes unknown name '" + name +
                                     "'");
    };

    for (const auto& q : spec.requests) {
        const NodeId id = builder.add_node(sig.request, container, {{"name", q}});
        requests.emplace(q, id);
    }
    for (const auto& q : spec.requests)
        builder.set_link(port(requests.at(q), 0), resolve(q, "request '" + q + "'"));

    for (std::size_t i = 0; i < spec.processes.size(); ++i) {
        const auto& ps = spec.processes[i];
        const NodeId id = process_nodes[i];
        const auto r = ps.arity ? ps.arity->first : ps.consumes.size();
        for (std::size_t k = 0; k < r; ++k) {
            if (k < ps.consumes.size())
                builder.set_link(port(id, k),
                                 resolve(ps.consumes[k], "process " + std::to_string(i)));
            else
                builder.set_link(port(id, k), builder.add_edge());
        }
    }

    auto handle = [&](const std::string& name, const std::string& what) {
        auto it = handles.find(name);
        if (it == handles.end())
            throw ContainerSpecError(Kind::unresolved_name, what + " '" + name + "' of '" +
                                                                spec.name +
                                                                "' is not offered by any process");
        return it->second;
    };
    for (const auto& p : spec.exposed_ports)
        builder.set_link(outer_name(1, p), handle(p, "exposed port"));
    if (spec.has_site) {
        for (const auto& s : spec.site_services)
            builder.set_link(inner_name(1, s), handle(s, "site service"));
        for (const auto& t : spec.link_through) {
            if (!link_outs.count(t.outer))
                throw ContainerSpecError(Kind::unresolved_name,
                                         "link-through target '" + t.outer + "' of '" + spec.name +
                                             "' is not a declared link");
            builder.set_link(inner_name(1, t.inner), outer_name(1, t.outer));
        }
    }

    auto b = std::move(builder).build();
    if (auto issues = validate(b); !issues.empty())
        throw ContainerSpecError(Kind::invalid_spec, "container '" + spec.name +
                                                         "' is not well-formed: " +
                                                         issues.front().clause + " " +
                                                         issues.front().message);
    return b;
}

}  // namespace ldbig
