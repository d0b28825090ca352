#include "ldbig/compose.hpp"

#include "ldbig/algebra.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace ldbig::dc {

using Kind = ComposeError::Kind;

ComposeError::ComposeError(Kind kind, std::string path, const std::string& message, int line)
    : std::runtime_error(path.empty() ? message : path + ": " + message),
      kind_(kind),
      path_(std::move(path)),
      message_(message),
      line_(line) {}

const char* to_string(ComposeError::Kind kind) {
    switch (kind) {
    case Kind::syntax:
        return "SyntaxError";
    case Kind::unsupported_key:
        return "UnsupportedKey";
    case Kind::dangling_reference:
        return "DanglingReference";
    case Kind::conflict:
        return "Conflict";
    }
    return "?";
}

std::vector<std::string> ServiceSpec::offered_ports() const {
    std::vector<std::string> out;
    auto add = [&](const std::string& p) {
        if (std::find(out.begin(), out.end(), p) == out.end())
            out.push_back(p);
    };
    for (const auto& p : expose)
        add(p);
    for (const auto& p : ports)
        add(p.container);
    return out;
}

const ServiceSpec* ComposeModel::find(const std::string& service) const {
    for (const auto& [name, spec] : services)
        if (name == service)
            return &spec;
    return nullptr;
}

std::size_t ComposeModel::site_of(const std::string& service) const {
    for (std::size_t i = 0; i < services.size(); ++i)
        if (services[i].first == service)
            return i + 1;
    throw std::out_of_range("unknown service '" + service + "'");
}

std::string network_handle(const std::string& network) { return "n_" + network; }
std::string volume_handle(const std::string& volume) { return "v_" + volume; }
std::string link_handle(const std::string& alias) { return "l_" + alias; }
std::string port_handle(const std::string& port) { return "p_" + port; }

// ---------------------------------------------------------------------------
// Parsing

namespace {

int line_of(const YAML::Node& n) {
    const auto m = n.Mark();
    return m.line < 0 ? 0 : m.line + 1;
}

std::string scalar(const YAML::Node& n, const std::string& path) {
    if (!n.IsScalar())
        throw ComposeError(Kind::syntax, path, "expected a scalar", line_of(n));
    return n.Scalar();
}

std::vector<std::pair<std::string, YAML::Node>> list(const YAML::Node& n, const std::string& path) {
    std::vector<std::pair<std::string, YAML::Node>> out;
    if (n.IsNull())
        return out;
    if (!n.IsSequence())
        throw ComposeError(Kind::syntax, path, "expected a list", line_of(n));
    for (const auto& item : n)
        out.emplace_back(scalar(item, path), item);
    return out;
}

bool is_port(const std::string& s) {
    return !s.empty() && s.size() <= 5 &&
           std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }) &&
           std::stoul(s) <= 65535;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

bool valid_identifier(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_' || c == '-' || c == '.';
    });
}

ServiceSpec parse_service(const std::string& name, const YAML::Node& node) {
    ServiceSpec svc;
    if (node.IsNull()) {
        svc.networks.push_back(default_network);
        return svc;
    }
    if (!node.IsMap())
        throw ComposeError(Kind::syntax, name, "service definition must be a mapping",
                           line_of(node));
    bool has_networks = false;
    for (const auto& kv : node) {
        const auto key = kv.first.as<std::string>();
        const auto path = name + "." + key;
        const auto& value = kv.second;
        if (key == "image") {
            svc.image = scalar(value, path);
        } else if (key == "links") {
            for (const auto& [entry, item] : list(value, path)) {
                auto parts = split(entry, ':');
                if (parts.size() > 2 || !valid_identifier(parts[0]) ||
                    (parts.size() == 2 && !valid_identifier(parts[1])))
                    throw ComposeError(Kind::syntax, path + "." + entry,
                                       "link must be SERVICE or SERVICE:ALIAS", line_of(item));
                svc.links.push_back({parts[0], parts.size() == 2 ? parts[1] : parts[0]});
            }
        } else if (key == "ports") {
            for (const auto& [entry, item] : list(value, path)) {
                auto parts = split(entry, ':');
                if (parts.size() == 1 && is_port(parts[0]))
                    svc.expose.push_back(parts[0]);
                else if (parts.size() == 2 && is_port(parts[0]) && is_port(parts[1]))
                    svc.ports.push_back({parts[0], parts[1]});
                else
                    throw ComposeError(Kind::syntax, path + "." + entry,
                                       "port must be \"HOST:CONTAINER\"", line_of(item));
            }
        } else if (key == "expose") {
            for (const auto& [entry, item] : list(value, path)) {
                if (!is_port(entry))
                    throw ComposeError(Kind::syntax, path + "." + entry,
                                       "exposed port must be a port number", line_of(item));
                svc.expose.push_back(entry);
            }
        } else if (key == "networks") {
            has_networks = true;
            for (const auto& [entry, item] : list(value, path)) {
                if (!valid_identifier(entry))
                    throw ComposeError(Kind::syntax, path + "." + entry, "bad network name",
                                       line_of(item));
                svc.networks.push_back(entry);
            }
        } else if (key == "volumes") {
            for (const auto& [entry, item] : list(value, path)) {
                auto parts = split(entry, ':');
                bool ok = (parts.size() == 2 || parts.size() == 3) && !parts[0].empty() &&
                          !parts[1].empty() && parts[1].front() == '/';
                if (ok && parts.size() == 3 && parts[2] != "ro" && parts[2] != "rw")
                    ok = false;
                if (!ok)
                    throw ComposeError(Kind::syntax, path + "." + entry,
                                       "volume must be NAME:PATH[:ro|:rw]", line_of(item));
                svc.volumes.push_back({parts[0], parts[1], parts.size() == 3 && parts[2] == "ro"});
            }
        } else {
            throw ComposeError(Kind::unsupported_key, path, "unsupported service key",
                               line_of(kv.first));
        }
    }
    if (!has_networks)
        svc.networks.push_back(default_network);
    return svc;
}

}  // namespace

void check_model(const ComposeModel& model) {
    std::set<std::string> services;
    std::map<std::string, std::string> host_ports;
    for (const auto& [name, svc] : model.services) {
        if (!valid_identifier(name))
            throw ComposeError(Kind::syntax, name, "bad service name");
        if (!services.insert(name).second)
            throw ComposeError(Kind::conflict, name, "duplicate service");
    }
    for (const auto& [name, svc] : model.services) {
        std::set<std::string> aliases;
        for (const auto& l : svc.links) {
            if (!services.count(l.target))
                throw ComposeError(Kind::dangling_reference, name + ".links." + l.target,
                                   "no such service");
            if (l.target == name)
                throw ComposeError(Kind::conflict, name + ".links." + l.target,
                                   "service links to itself");
            if (!aliases.insert(l.alias).second)
                throw ComposeError(Kind::conflict, name + ".links." + l.alias,
                                   "duplicate link alias");
        }
        std::set<std::string> nets;
        for (const auto& n : svc.networks) {
            if (n != default_network && !model.networks.count(n))
                throw ComposeError(Kind::dangling_reference, name + ".networks." + n,
                                   "no such network");
            if (!nets.insert(n).second)
                throw ComposeError(Kind::conflict, name + ".networks." + n, "duplicate network");
        }
        std::set<std::string> vols;
        for (const auto& v : svc.volumes) {
            if (!model.volumes.count(v.volume))
                throw ComposeError(Kind::dangling_reference, name + ".volumes." + v.volume,
                                   "no such volume");
            if (!vols.insert(v.volume).second)
                throw ComposeError(Kind::conflict, name + ".volumes." + v.volume,
                                   "volume mounted twice");
        }
        for (const auto& p : svc.ports) {
            auto [it, inserted] = host_ports.emplace(p.host, name);
            if (!inserted)
                throw ComposeError(Kind::conflict, name + ".ports." + p.host + ":" + p.container,
                                   "host port " + p.host + " already published by " + it->second);
        }
        for (const auto& p : svc.offered_ports())
            if (port_handle(p) == name)
                throw ComposeError(Kind::conflict, name,
                                   "service name collides with its port handle");
    }
}

ComposeModel parse_compose(std::string_view text) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(text));
    } catch (const YAML::Exception& e) {
        throw ComposeError(Kind::syntax, "", e.msg, e.mark.line < 0 ? 0 : e.mark.line + 1);
    }
    if (!root.IsMap())
        throw ComposeError(Kind::syntax, "", "document must be a mapping", line_of(root));

    ComposeModel model;
    bool has_services = false;
    for (const auto& kv : root) {
        const auto key = kv.first.as<std::string>();
        const auto& value = kv.second;
        if (key == "version") {
            model.version = scalar(value, key);
            if (model.version.empty() || model.version.front() != '2')
                throw ComposeError(Kind::unsupported_key, key,
                                   "only compose file version 2 is supported", line_of(value));
        } else if (key == "services") {
            has_services = true;
            if (!value.IsMap())
                throw ComposeError(Kind::syntax, key, "expected a mapping", line_of(value));
            for (const auto& s : value) {
                const auto name = s.first.as<std::string>();
                model.services.emplace_back(name, parse_service(name, s.second));
            }
        } else if (key == "networks") {
            if (!value.IsMap() && !value.IsNull())
                throw ComposeError(Kind::syntax, key, "expected a mapping", line_of(value));
            for (const auto& n : value) {
                const auto name = n.first.as<std::string>();
                NetworkDecl decl;
                if (n.second.IsMap()) {
                    for (const auto& d : n.second) {
                        const auto dk = d.first.as<std::string>();
                        if (dk != "driver")
                            throw ComposeError(Kind::unsupported_key, "networks." + name + "." + dk,
                                               "unsupported network key", line_of(d.first));
                        decl.driver = scalar(d.second, "networks." + name + ".driver");
                    }
                } else if (!n.second.IsNull()) {
                    throw ComposeError(Kind::syntax, "networks." + name, "expected a mapping",
                                       line_of(n.second));
                }
                model.networks[name] = decl;
            }
        } else if (key == "volumes") {
            if (!value.IsMap() && !value.IsNull())
                throw ComposeError(Kind::syntax, key, "expected a mapping", line_of(value));
            for (const auto& v : value) {
                const auto name = v.first.as<std::string>();
                VolumeDecl decl;
                if (v.second.IsMap()) {
                    for (const auto& d : v.second) {
                        const auto dk = d.first.as<std::string>();
                        if (dk != "external")
                            throw ComposeError(Kind::unsupported_key, "volumes." + name + "." + dk,
                                               "unsupported volume key", line_of(d.first));
                        const auto flag = scalar(d.second, "volumes." + name + ".external");
                        if (flag != "true" && flag != "false")
                            throw ComposeError(Kind::syntax, "volumes." + name + ".external",
                                               "expected true or false", line_of(d.second));
                        decl.external = flag == "true";
                    }
                } else if (!v.second.IsNull()) {
                    throw ComposeError(Kind::syntax, "volumes." + name, "expected a mapping",
                                       line_of(v.second));
                }
                model.volumes[name] = decl;
            }
        } else {
            throw ComposeError(Kind::unsupported_key, key, "unsupported top-level key",
                               line_of(kv.first));
        }
    }
    if (!has_services || model.services.empty())
        throw ComposeError(Kind::syntax, "services", "no services defined");
    check_model(model);
    return model;
}

ComposeModel load_compose(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in)
        throw ComposeError(Kind::syntax, "", "cannot open " + file.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_compose(ss.str());
}

// ---------------------------------------------------------------------------
// Bigraphs

ContainerSpec stub_spec(const std::string& service, const ComposeModel& model) {
    const auto* svc = model.find(service);
    if (!svc)
        throw std::out_of_range("unknown service '" + service + "'");
    ContainerSpec spec;
    spec.name = service;
    if (!svc->image.empty())
        spec.attrs["image"] = svc->image;

    ProcessSpec proc;
    proc.label = service;
    for (const auto& l : svc->links) {
        proc.consumes.push_back(link_handle(l.alias));
        spec.links.push_back(link_handle(l.alias));
    }
    for (const auto& p : svc->offered_ports()) {
        proc.offers.push_back(port_handle(p));
        spec.exposed_ports.push_back(port_handle(p));
    }
    spec.processes.push_back(std::move(proc));
    for (const auto& n : svc->networks)
        spec.networks.push_back({n, network_handle(n), {}, false});
    for (const auto& v : svc->volumes)
        spec.volumes.push_back({v.volume, volume_handle(v.volume), v.path, v.read_only});
    return spec;
}

Bigraph container_stub(const std::string& service, const ComposeModel& model) {
    try {
        return build_container(stub_spec(service, model));
    } catch (const ContainerSpecError& e) {
        throw ComposeError(Kind::conflict, service, e.what());
    }
}

Bigraph environment_bigraph(const ComposeModel& model) {
    const auto sig = default_signature();
    const auto n = model.services.size();

    // Each site carries exactly the outer names of the matching stub.
    LocalInterface inner;
    for (const auto& [name, _] : model.services)
        inner.push_locality(container_stub(name, model).outer().at(1));

    LocalInterface outer = LocalInterface::empty(1);
    std::set<std::string> external_used;
    for (const auto& [name, svc] : model.services) {
        for (const auto& p : svc.ports)
            outer.add(1, Polarity::negative, port_handle(p.host));
        for (const auto& v : svc.volumes)
            if (model.volumes.at(v.volume).external)
                external_used.insert(v.volume);
    }
    for (const auto& v : external_used) {
        try {
            outer.add(1, Polarity::positive, v);
        } catch (const std::invalid_argument& e) {
            throw ComposeError(Kind::conflict, "volumes." + v, e.what());
        }
    }

    BigraphBuilder builder(sig.signature(), inner, outer);
    for (std::size_t k = 1; k <= n; ++k)
        builder.set_site_parent(k, RootIndex{1});

    std::set<std::string> nets, vols;
    for (const auto& [name, svc] : model.services) {
        nets.insert(svc.networks.begin(), svc.networks.end());
        for (const auto& v : svc.volumes)
            if (!model.volumes.at(v.volume).external)
                vols.insert(v.volume);
    }
    std::map<std::string, EdgeId> net_edges, vol_edges;
    for (const auto& net : nets)
        net_edges[net] = builder.add_edge();
    for (const auto& vol : vols)
        vol_edges[vol] = builder.add_edge();

    for (std::size_t k = 1; k <= n; ++k) {
        const auto& [name, svc] = model.services[k - 1];
        for (const auto& net : svc.networks)
            builder.set_link(inner_name(k, network_handle(net)), net_edges.at(net));
        for (const auto& v : svc.volumes) {
            if (model.volumes.at(v.volume).external)
                builder.set_link(inner_name(k, volume_handle(v.volume)), outer_name(1, v.volume));
            else
                builder.set_link(inner_name(k, volume_handle(v.volume)), vol_edges.at(v.volume));
        }
        for (const auto& l : svc.links)
            builder.set_link(inner_name(k, link_handle(l.alias)),
                             inner_name(model.site_of(l.target), l.target));
        for (const auto& p : svc.ports)
            builder.set_link(outer_name(1, port_handle(p.host)),
                             inner_name(k, port_handle(p.container)));
    }
    return std::move(builder).build();
}

Bigraph assemble(const ComposeModel& model) {
    std::vector<Bigraph> stubs;
    stubs.reserve(model.services.size());
    for (const auto& [name, _] : model.services)
        stubs.push_back(container_stub(name, model));
    return compose(environment_bigraph(model), tensor_all(stubs));
}

}  // namespace ldbig::dc
