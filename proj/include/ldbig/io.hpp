#pragma once

#include "ldbig/bigraph.hpp"
#include "ldbig/container_model.hpp"
#include "ldbig/sorting.hpp"

#include <nlohmann/json.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace ldbig::io {

using json = nlohmann::json;

class FormatError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Text forms used by the JSON schema: `inner:a@1+`, `outer:p@1-`,
/// `port:3#0`, `edge:2`, and `root:1` / `node:3` for parents.
Point parse_point(const std::string& text);
Link parse_link(const std::string& text);
Parent parse_parent(const std::string& text);

json to_json(const LocalInterface& iface);
LocalInterface interface_from_json(const json& j);

/// {signature, inner, outer, nodes:[{id,control,arity,parent,attrs}],
///  sites:[parent], edges:[id], links:[{point,link}]}
json to_json(const Bigraph& b);
/// `fallback` is used when the document carries no signature.
Bigraph bigraph_from_json(const json& j, const Signature& fallback = {});

ContainerSpec container_spec_from_json(const json& j);
json to_json(const ContainerSpec& spec);

/// A JSON list of bigraph documents, each with a `name` and an optional
/// `anchor` ("anywhere" or "top"). Patterns without a signature get the
/// container signature.
std::vector<sorting::Pattern> patterns_from_json(const json& j);
json to_json(const sorting::Occurrence& occ);

struct DotOptions {
    std::string graph_name = "bigraph";
};

/// Graphviz rendering: roots and nodes with content become nested clusters,
/// sites are grey boxes, names sit outside, and every point -> link pair is
/// a directed arc.
std::string to_dot(const Bigraph& b, const DotOptions& options = {});

}  // namespace ldbig::io
