#include "ldbig/io.hpp"

#include "ldbig/detail/overloaded.hpp"

#include <sstream>

namespace ldbig::io {

using detail::overloaded;

namespace {

std::size_t parse_index(const std::string& s, const std::string& whole) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw FormatError("bad index in '" + whole + "'");
    return std::stoul(s);
}

struct ParsedRef {
    std::string kind;
    std::string body;
};

ParsedRef split_ref(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos)
        throw FormatError("malformed reference '" + text + "'");
    return {text.substr(0, colon), text.substr(colon + 1)};
}

/// `text@i±` -> (NameRef, sign).
std::pair<NameRef, char> parse_name(Side side, const std::string& body, const std::string& whole) {
    auto at = body.rfind('@');
    if (at == std::string::npos || at == 0 || body.size() < at + 3)
        throw FormatError("malformed name '" + whole + "'");
    char sign = body.back();
    if (sign != '+' && sign != '-')
        throw FormatError("name '" + whole + "' lacks polarity");
    auto loc = parse_index(body.substr(at + 1, body.size() - at - 2), whole);
    return {NameRef{side, loc, body.substr(0, at)}, sign};
}

PortRef parse_port(const std::string& body, const std::string& whole) {
    auto hash = body.find('#');
    if (hash == std::string::npos)
        throw FormatError("malformed port '" + whole + "'");
    return PortRef{NodeId{static_cast<std::uint32_t>(parse_index(body.substr(0, hash), whole))},
                   parse_index(body.substr(hash + 1), whole)};
}

}  // namespace

Point parse_point(const std::string& text) {
    auto [kind, body] = split_ref(text);
    if (kind == "inner" || kind == "outer") {
        const auto side = kind == "inner" ? Side::inner : Side::outer;
        auto [name, sign] = parse_name(side, body, text);
        if ((side == Side::inner) != (sign == '+'))
            throw FormatError("'" + text + "' is not a point");
        return name;
    }
    if (kind == "port")
        return parse_port(body, text);
    throw FormatError("'" + text + "' is not a point");
}

Link parse_link(const std::string& text) {
    auto [kind, body] = split_ref(text);
    if (kind == "inner" || kind == "outer") {
        const auto side = kind == "inner" ? Side::inner : Side::outer;
        auto [name, sign] = parse_name(side, body, text);
        if ((side == Side::inner) != (sign == '-'))
            throw FormatError("'" + text + "' is not a link");
        return name;
    }
    if (kind == "port")
        return parse_port(body, text);
    if (kind == "edge")
        return EdgeId{static_cast<std::uint32_t>(parse_index(body, text))};
    throw FormatError("'" + text + "' is not a link");
}

Parent parse_parent(const std::string& text) {
    auto [kind, body] = split_ref(text);
    if (kind == "root")
        return RootIndex{parse_index(body, text)};
    if (kind == "node")
        return NodeId{static_cast<std::uint32_t>(parse_index(body, text))};
    throw FormatError("'" + text + "' is not a parent");
}

json to_json(const LocalInterface& iface) {
    json out = json::array();
    for (const auto& l : iface.localities())
        out.push_back({{"plus", l.plus}, {"minus", l.minus}});
    return out;
}

LocalInterface interface_from_json(const json& j) {
    if (!j.is_array() || j.empty())
        throw FormatError("interface must be a non-empty list of localities");
    std::vector<Locality> locs;
    for (const auto& l : j) {
        Locality loc;
        if (l.contains("plus"))
            loc.plus = l.at("plus").get<std::set<std::string>>();
        if (l.contains("minus"))
            loc.minus = l.at("minus").get<std::set<std::string>>();
        locs.push_back(std::move(loc));
    }
    LocalInterface iface(std::move(locs));
    if (auto msg = iface.check(); !msg.empty())
        throw FormatError("interface: " + msg);
    return iface;
}

json to_json(const Bigraph& b) {
    json sig = json::array();
    for (const auto& [name, decl] : b.signature().decls())
        sig.push_back({{"name", name},
                       {"plus", decl.control.plus},
                       {"minus", decl.control.minus},
                       {"parametric", decl.parametric}});
    json nodes = json::array();
    for (const auto& [id, node] : b.nodes()) {
        json n{{"id", id.value},
               {"control", node.control.name},
               {"arity", {node.control.plus, node.control.minus}},
               {"parent", to_string(node.parent)}};
        if (!node.attrs.empty())
            n["attrs"] = node.attrs;
        nodes.push_back(std::move(n));
    }
    json sites = json::array();
    for (const auto& p : b.sites())
        sites.push_back(to_string(p));
    json edges = json::array();
    for (const auto& e : b.edges())
        edges.push_back(e.value);
    json links = json::array();
    for (const auto& [p, l] : b.links())
        links.push_back({{"point", to_string(p)}, {"link", to_string(l)}});
    return json{{"signature", sig}, {"inner", to_json(b.inner())}, {"outer", to_json(b.outer())},
                {"nodes", nodes},    {"sites", sites},                {"edges", edges},
                {"links", links}};
}

Bigraph bigraph_from_json(const json& j, const Signature& fallback) {
    try {
        Signature sig = fallback;
        if (j.contains("signature")) {
            sig = Signature{};
            for (const auto& c : j.at("signature"))
                sig.add(Control{c.at("name").get<std::string>(), c.value("plus", std::size_t{0}),
                                c.value("minus", std::size_t{0})},
                        c.value("parametric", false));
        }
        auto inner = j.contains("inner") ? interface_from_json(j.at("inner")) : LocalInterface{};
        auto outer = interface_from_json(j.at("outer"));
        BigraphBuilder builder(sig, inner, outer);
        for (const auto& n : j.value("nodes", json::array())) {
            Control c{n.at("control").get<std::string>(), 0, 0};
            if (n.contains("arity")) {
                const auto& a = n.at("arity");
                if (!a.is_array() || a.size() != 2)
                    throw FormatError("arity must be [plus, minus]");
                c.plus = a[0].get<std::size_t>();
                c.minus = a[1].get<std::size_t>();
            } else if (const auto* decl = sig.find(c.name)) {
                c = decl->control;
            }
            builder.add_node(NodeId{n.at("id").get<std::uint32_t>()}, std::move(c),
                             parse_parent(n.at("parent").get<std::string>()),
                             n.value("attrs", std::map<std::string, std::string>{}));
        }
        const auto sites = j.value("sites", json::array());
        if (sites.size() != inner.width())
            throw FormatError("expected " + std::to_string(inner.width()) + " site parents");
        for (std::size_t s = 0; s < sites.size(); ++s)
            builder.set_site_parent(s + 1, parse_parent(sites[s].get<std::string>()));
        for (const auto& e : j.value("edges", json::array()))
            builder.add_edge(EdgeId{e.get<std::uint32_t>()});
        for (const auto& l : j.value("links", json::array()))
            builder.set_link(parse_point(l.at("point").get<std::string>()),
                             parse_link(l.at("link").get<std::string>()));
        return std::move(builder).build();
    } catch (const json::exception& e) {
        throw FormatError(std::string("bigraph document: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw FormatError(std::string("bigraph document: ") + e.what());
    } catch (const std::out_of_range& e) {
        throw FormatError(std::string("bigraph document: ") + e.what());
    }
}

ContainerSpec container_spec_from_json(const json& j) {
    try {
        ContainerSpec spec;
        spec.name = j.at("name").get<std::string>();
        for (const auto& p : j.value("processes", json::array())) {
            ProcessSpec ps;
            ps.offers = p.value("offers", std::vector<std::string>{});
            ps.consumes = p.value("consumes", std::vector<std::string>{});
            ps.label = p.value("label", std::string{});
            if (p.contains("arity"))
                ps.arity = std::make_pair(p.at("arity").at(0).get<std::size_t>(),
                                          p.at("arity").at(1).get<std::size_t>());
            spec.processes.push_back(std::move(ps));
        }
        auto attachment = [](const json& a) {
            if (a.is_string())
                return Attachment{a.get<std::string>(), {}, {}, false};
            return Attachment{a.at("name").get<std::string>(), a.value("interfaceName", std::string{}),
                              a.value("hostPath", std::string{}), a.value("readOnly", false)};
        };
        for (const auto& n : j.value("networks", json::array()))
            spec.networks.push_back(attachment(n));
        for (const auto& v : j.value("volumes", json::array()))
            spec.volumes.push_back(attachment(v));
        spec.requests = j.value("requests", std::vector<std::string>{});
        spec.exposed_ports = j.value("exposedPorts", std::vector<std::string>{});
        spec.links = j.value("links", std::vector<std::string>{});
        spec.has_site = j.value("hasSite", false);
        spec.site_services = j.value("siteServices", std::vector<std::string>{});
        spec.site_resources = j.value("siteResources", std::vector<std::string>{});
        for (const auto& t : j.value("linkThrough", json::array()))
            spec.link_through.push_back({t.at("inner").get<std::string>(), t.at("outer").get<std::string>()});
        spec.attrs = j.value("attrs", std::map<std::string, std::string>{});
        return spec;
    } catch (const json::exception& e) {
        throw FormatError(std::string("container spec: ") + e.what());
    }
}

json to_json(const ContainerSpec& spec) {
    json procs = json::array();
    for (const auto& p : spec.processes) {
        json jp{{"offers", p.offers}, {"consumes", p.consumes}};
        if (!p.label.empty())
            jp["label"] = p.label;
        if (p.arity)
            jp["arity"] = {p.arity->first, p.arity->second};
        procs.push_back(std::move(jp));
    }
    auto attachments = [](const std::vector<Attachment>& as) {
        json out = json::array();
        for (const auto& a : as)
            out.push_back({{"name", a.name},
                           {"interfaceName", a.interface_name},
                           {"hostPath", a.host_path},
                           {"readOnly", a.read_only}});
        return out;
    };
    json through = json::array();
    for (const auto& t : spec.link_through)
        through.push_back({{"inner", t.inner}, {"outer", t.outer}});
    return json{{"name", spec.name},
                {"processes", procs},
                {"networks", attachments(spec.networks)},
                {"volumes", attachments(spec.volumes)},
                {"requests", spec.requests},
                {"exposedPorts", spec.exposed_ports},
                {"links", spec.links},
                {"hasSite", spec.has_site},
                {"siteServices", spec.site_services},
                {"siteResources", spec.site_resources},
                {"linkThrough", through},
                {"attrs", spec.attrs}};
}

std::vector<sorting::Pattern> patterns_from_json(const json& j) {
    if (!j.is_array())
        throw FormatError("pattern file must hold a JSON list");
    const auto fallback = default_signature().signature();
    std::vector<sorting::Pattern> out;
    for (const auto& item : j) {
        sorting::Pattern p;
        if (!item.contains("name") || !item.at("name").is_string())
            throw FormatError("every pattern needs a name");
        p.name = item.at("name").get<std::string>();
        const auto anchor = item.value("anchor", std::string("anywhere"));
        if (anchor == "top")
            p.anchor = sorting::Pattern::Anchor::top;
        else if (anchor != "anywhere")
            throw FormatError("pattern '" + p.name + "': anchor must be 'anywhere' or 'top'");
        p.bigraph = bigraph_from_json(item, fallback);
        out.push_back(std::move(p));
    }
    return out;
}

json to_json(const sorting::Occurrence& occ) {
    json nodes = json::object();
    for (const auto& [p, h] : occ.node_map)
        nodes[std::to_string(p.value)] = h.value;
    json edges = json::object();
    for (const auto& [p, h] : occ.edge_map)
        edges[std::to_string(p.value)] = h.value;
    json anchors = json::object();
    for (const auto& [r, parent] : occ.root_anchors)
        anchors[std::to_string(r)] = to_string(parent);
    json names = json::object();
    for (const auto& [n, l] : occ.name_map)
        names[to_string(Link{n})] = to_string(l);
    return json{{"nodes", nodes}, {"edges", edges}, {"rootAnchors", anchors}, {"names", names}};
}

// ---------------------------------------------------------------------------
// DOT

namespace {

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c;
    }
    return out + "\"";
}

std::string node_id(NodeId id) { return quote("n" + std::to_string(id.value)); }

std::string name_id(const NameRef& n) {
    return quote(std::string(n.side == Side::inner ? "in:" : "out:") + std::to_string(n.locality) +
                 ":" + n.text);
}

class DotWriter {
public:
    DotWriter(const Bigraph& b, std::ostream& os) : b_(b), os_(os) {}

    void write(const DotOptions& options) {
        os_ << "digraph " << quote(options.graph_name) << " {\n";
        os_ << "  compound=true;\n  node [fontname=\"Helvetica\"];\n";
        for (std::size_t r = 1; r <= b_.outer().width(); ++r) {
            os_ << "  subgraph " << quote("cluster_root_" + std::to_string(r)) << " {\n";
            os_ << "    label=" << quote(std::to_string(r - 1)) << "; style=dashed; color=red;\n";
            place(RootIndex{r}, 4);
            os_ << "  }\n";
        }
        names();
        for (const auto& e : b_.edges())
            os_ << "  " << quote("e" + std::to_string(e.value))
                << " [shape=point, width=0.08];\n";
        for (const auto& [p, l] : b_.links())
            os_ << "  " << endpoint(p) << " -> " << endpoint(l) << ";\n";
        os_ << "}\n";
    }

private:
    void place(const Parent& parent, int indent) {
        const std::string pad(indent, ' ');
        for (auto s : b_.child_sites(parent))
            os_ << pad << quote("site" + std::to_string(s)) << " [label=" << quote(std::to_string(s - 1))
                << ", shape=box, style=\"filled,dashed\", fillcolor=lightgrey];\n";
        for (auto id : b_.children(parent)) {
            const auto& node = b_.node(id);
            std::string label = node.control.name;
            if (auto it = node.attrs.find("name"); it != node.attrs.end())
                label += "\\n" + it->second;
            const bool nested = !b_.children(id).empty() || !b_.child_sites(id).empty();
            if (!nested) {
                os_ << pad << node_id(id) << " [label=" << quote(label) << ", shape=box, style=rounded];\n";
                continue;
            }
            os_ << pad << "subgraph " << quote("cluster_n" + std::to_string(id.value)) << " {\n";
            os_ << pad << "  label=" << quote(label) << "; style=rounded;\n";
            os_ << pad << "  " << node_id(id) << " [label=\"\", shape=point, width=0.05];\n";
            place(id, indent + 2);
            os_ << pad << "}\n";
        }
    }

    void names() {
        auto emit = [&](Side side, const LocalInterface& iface) {
            for (std::size_t i = 0; i <= iface.width(); ++i)
                for (const auto* set : {&iface.at(i).plus, &iface.at(i).minus})
                    for (const auto& n : *set)
                        os_ << "  " << name_id(NameRef{side, i, n})
                            << " [label=" << quote(n + (i == 0 ? "" : "@" + std::to_string(i)))
                            << ", shape=plaintext];\n";
        };
        emit(Side::outer, b_.outer());
        emit(Side::inner, b_.inner());
    }

    std::string endpoint(const Point& p) const {
        return std::visit(overloaded{[](const NameRef& n) { return name_id(n); },
                                     [](const PortRef& pr) { return node_id(pr.node); }},
                          p);
    }

    std::string endpoint(const Link& l) const {
        return std::visit(overloaded{[](const NameRef& n) { return name_id(n); },
                                     [](const EdgeId& e) { return quote("e" + std::to_string(e.value)); },
                                     [](const PortRef& pr) { return node_id(pr.node); }},
                          l);
    }

    const Bigraph& b_;
    std::ostream& os_;
};

}  // namespace

std::string to_dot(const Bigraph& b, const DotOptions& options) {
    std::ostringstream os;
    DotWriter(b, os).write(options);
    return os.str();
}

}  // namespace ldbig::io
