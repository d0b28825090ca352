#pragma once

#include "ldbig/bigraph.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ldbig {

/// The container signature: container<0,1>, process_{r,s}<r,s>,
/// request<1,1>, network<1,1>, volume<1,1>.
struct ContainerSignature {
    Control container{"container", 0, 1};
    Control request{"request", 1, 1};
    Control network{"network", 1, 1};
    Control volume{"volume", 1, 1};

    Control process(std::size_t r, std::size_t s) const { return Control{"process", r, s}; }
    Signature signature() const;
};

ContainerSignature default_signature();

/// A process node. Each offered handle becomes a negative port, each
/// consumed name a positive port.
struct ProcessSpec {
    std::vector<std::string> offers;
    std::vector<std::string> consumes;
    /// Explicit (r, s); defaults to (|consumes|, |offers|). Spare positive
    /// ports are closed with idle edges.
    std::optional<std::pair<std::size_t, std::size_t>> arity;
    std::string label;
};

/// A network or volume attachment. `interface_name` is the outer name the
/// node's positive port reaches; it defaults to `name`.
struct Attachment {
    std::string name;
    std::string interface_name;
    std::string host_path;
    bool read_only = false;

    const std::string& outer() const { return interface_name.empty() ? name : interface_name; }
};

struct LinkThrough {
    std::string inner;
    std::string outer;
};

/// Description of a single container.
///
/// Consumed names resolve, in order, to: a handle offered by some process,
/// a network, a volume, a request, a site resource (inner negative name),
/// or a declared link-out name (outer positive name).
struct ContainerSpec {
    std::string name;
    std::vector<ProcessSpec> processes;
    std::vector<Attachment> networks;
    std::vector<Attachment> volumes;
    /// Each request node's positive port consumes the named handle.
    std::vector<std::string> requests;
    /// Offered handles published as outer negative names.
    std::vector<std::string> exposed_ports;
    /// Outer positive names processes may consume.
    std::vector<std::string> links;
    bool has_site = false;
    /// Offered handles visible to the site as inner positive names.
    std::vector<std::string> site_services;
    /// Inner negative names processes may consume.
    std::vector<std::string> site_resources;
    /// Inner positive names forwarded to link-out names.
    std::vector<LinkThrough> link_through;
    /// Copied onto the container node.
    std::map<std::string, std::string> attrs;
};

class ContainerSpecError : public std::runtime_error {
public:
    enum class Kind { unresolved_name, arity_overflow, invalid_spec };

    ContainerSpecError(Kind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

/// Builds the bigraph of one container: a single root holding the container
/// node, with processes, networks, volumes, requests and an optional site
/// nested inside it. The container's handle is the outer negative name
/// `spec.name`.
Bigraph build_container(const ContainerSpec& spec);

}  // namespace ldbig
