#pragma once

#include "ldbig/bigraph.hpp"
#include "ldbig/container_model.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ldbig::dc {

struct LinkSpec {
    std::string target;
    std::string alias;
};

struct PortMapping {
    std::string host;
    std::string container;
};

struct VolumeMount {
    std::string volume;
    std::string path;
    bool read_only = false;
};

struct ServiceSpec {
    std::string image;
    std::vector<LinkSpec> links;
    std::vector<PortMapping> ports;
    std::vector<std::string> expose;
    std::vector<std::string> networks;
    std::vector<VolumeMount> volumes;

    /// Container ports offered by the service (exposed or published),
    /// deduplicated, in first-seen order.
    std::vector<std::string> offered_ports() const;
};

struct NetworkDecl {
    std::string driver;
};

struct VolumeDecl {
    bool external = false;
};

/// The supported docker-compose subset, after reference resolution.
struct ComposeModel {
    std::string version = "2";
    std::vector<std::pair<std::string, ServiceSpec>> services;
    std::map<std::string, NetworkDecl> networks;
    std::map<std::string, VolumeDecl> volumes;

    const ServiceSpec* find(const std::string& service) const;
    /// 1-based position of the service, i.e. its environment site.
    std::size_t site_of(const std::string& service) const;
};

/// Network every service without a `networks:` key is attached to.
inline constexpr const char* default_network = "default";

class ComposeError : public std::runtime_error {
public:
    enum class Kind { syntax, unsupported_key, dangling_reference, conflict };

    ComposeError(Kind kind, std::string path, const std::string& message, int line = 0);

    Kind kind() const { return kind_; }
    /// Dotted key path of the offending entry, e.g. "wp.links.nosuch".
    const std::string& path() const { return path_; }
    /// 1-based source line, 0 when unknown.
    int line() const { return line_; }
    const std::string& message() const { return message_; }

private:
    Kind kind_;
    std::string path_;
    std::string message_;
    int line_;
};

const char* to_string(ComposeError::Kind kind);

ComposeModel parse_compose(std::string_view yaml);
ComposeModel load_compose(const std::filesystem::path& file);
/// Rejects dangling references and naming conflicts; parse_compose already
/// calls this, programmatic models should too.
void check_model(const ComposeModel& model);

// Interface names shared by the environment and the stubs.
std::string network_handle(const std::string& network);
std::string volume_handle(const std::string& volume);
std::string link_handle(const std::string& alias);
std::string port_handle(const std::string& port);

/// ContainerSpec realizing one service: one process consuming the link
/// aliases and offering the container ports, plus network and volume nodes.
ContainerSpec stub_spec(const std::string& service, const ComposeModel& model);
Bigraph container_stub(const std::string& service, const ComposeModel& model);

/// The context with one site per service, shared networks closed as edges,
/// external volumes as outer positive names and published host ports as
/// outer negative names.
Bigraph environment_bigraph(const ComposeModel& model);

/// environment ∘ (stub_1 ⊗ ... ⊗ stub_n), in declaration order.
Bigraph assemble(const ComposeModel& model);

}  // namespace ldbig::dc
