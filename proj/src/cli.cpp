#include "ldbig/cli.hpp"

#include "ldbig/algebra.hpp"
#include "ldbig/analyses.hpp"
#include "ldbig/compose.hpp"
#include "ldbig/io.hpp"
#include "ldbig/sorting.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

namespace ldbig::cli {

using nlohmann::json;

const char* to_string(Status status) {
    switch (status) {
    case Status::ok:
        return "ok";
    case Status::violations:
        return "violations";
    case Status::input_error:
        return "inputError";
    }
    return "?";
}

int exit_code(Status status) {
    switch (status) {
    case Status::ok:
        return 0;
    case Status::violations:
        return 1;
    case Status::input_error:
        return 2;
    }
    return 2;
}

json to_json(const Report& report) {
    json findings = json::array();
    for (const auto& f : report.findings)
        findings.push_back({{"kind", f.kind},
                            {"severity", f.severity},
                            {"message", f.message},
                            {"payload", f.payload}});
    return json{{"command", report.command},
                {"status", to_string(report.status)},
                {"findings", findings}};
}

Report report_from_json(const json& j) {
    Report r;
    r.command = j.at("command").get<std::string>();
    const auto status = j.at("status").get<std::string>();
    if (status == "ok")
        r.status = Status::ok;
    else if (status == "violations")
        r.status = Status::violations;
    else if (status == "inputError")
        r.status = Status::input_error;
    else
        throw std::invalid_argument("unknown report status '" + status + "'");
    for (const auto& f : j.at("findings"))
        r.findings.push_back({f.at("kind").get<std::string>(), f.at("severity").get<std::string>(),
                              f.at("message").get<std::string>(), f.value("payload", json{})});
    return r;
}

namespace {

class InputError : public std::runtime_error {
public:
    InputError(const std::string& what, json payload = json::object())
        : std::runtime_error(what), payload_(std::move(payload)) {}
    const json& payload() const { return payload_; }

private:
    json payload_;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw InputError(path + ": cannot open file", {{"file", path}});
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

dc::ComposeModel load_model(const std::string& path) {
    try {
        return dc::parse_compose(read_file(path));
    } catch (const dc::ComposeError& e) {
        std::string where = path;
        if (e.line() > 0)
            where += ":" + std::to_string(e.line());
        json payload{{"file", path}, {"error", dc::to_string(e.kind())}, {"path", e.path()}};
        if (e.line() > 0)
            payload["line"] = e.line();
        throw InputError(where + ": " + dc::to_string(e.kind()) + ": " + e.what(), payload);
    }
}

Bigraph assemble_model(const dc::ComposeModel& model, const std::string& path) {
    try {
        return dc::assemble(model);
    } catch (const std::exception& e) {
        throw InputError(path + ": cannot assemble: " + e.what(), {{"file", path}});
    }
}

void sort_findings(std::vector<Finding>& findings) {
    std::stable_sort(findings.begin(), findings.end(), [](const Finding& a, const Finding& b) {
        auto ka = a.payload.dump();
        auto kb = b.payload.dump();
        return std::tie(a.kind, ka) < std::tie(b.kind, kb);
    });
}

Finding from_violation(const analysis::Violation& v) {
    using analysis::Violation;
    if (v.kind == Violation::Kind::links_unreachable)
        return {analysis::to_string(v.kind), "warning",
                "container '" + v.first + "' links to '" + v.second +
                    "' but they share no network",
                {{"source", v.first}, {"target", v.second}}};
    json path = json::array();
    std::string shown;
    for (const auto& n : v.path) {
        path.push_back(analysis::to_string(n));
        shown += (shown.empty() ? "" : " -> ") + n.name;
    }
    return {analysis::to_string(v.kind), "warning",
            "information may flow from '" + v.first + "' to '" + v.second + "': " + shown,
            {{"high", v.first}, {"low", v.second}, {"path", path}}};
}

void print(const Report& report, bool as_json, Color color, std::ostream& out) {
    if (as_json) {
        out << to_json(report).dump(2) << "\n";
        return;
    }
    auto paint = [&](const char* code, const std::string& s) {
        return color == Color::always ? std::string("\033[") + code + "m" + s + "\033[0m" : s;
    };
    if (report.findings.empty()) {
        out << paint("32", "ok") << ": " << report.command << ": no findings\n";
        return;
    }
    for (const auto& f : report.findings)
        out << paint(f.severity == "error" ? "31" : "33", f.severity) << ": " << f.kind << ": "
            << f.message << "\n";
    if (report.status == Status::violations)
        out << report.findings.size() << " finding(s)\n";
}

Report finish(Report report) {
    sort_findings(report.findings);
    report.status = report.findings.empty() ? Status::ok : Status::violations;
    return report;
}

Report cmd_validate(const std::string& file) {
    Report r{"validate", Status::ok, {}};
    auto b = assemble_model(load_model(file), file);
    for (const auto& issue : validate(b))
        r.findings.push_back({"wellFormedness", "warning", issue.clause + ": " + issue.element + ": " +
                                                               issue.message,
                              {{"clause", issue.clause}, {"element", issue.element}}});
    return finish(std::move(r));
}

Report cmd_links(const std::string& file) {
    Report r{"check-links", Status::ok, {}};
    auto b = assemble_model(load_model(file), file);
    for (const auto& v : analysis::check_links(b))
        r.findings.push_back(from_violation(v));
    return finish(std::move(r));
}

Report cmd_security(const std::string& file, const std::string& order_file) {
    Report r{"check-security", Status::ok, {}};
    auto b = assemble_model(load_model(file), file);
    analysis::SecurityOrder order;
    try {
        order = analysis::parse_order(read_file(order_file));
    } catch (const analysis::OrderParseError& e) {
        throw InputError(order_file + ":" + std::to_string(e.line()) + ": " + e.what(),
                         {{"file", order_file}, {"line", e.line()}});
    }
    try {
        for (const auto& v : analysis::check_security(b, order))
            r.findings.push_back(from_violation(v));
    } catch (const analysis::UnknownNetwork& e) {
        throw InputError(order_file + ": " + e.what(), {{"file", order_file}});
    } catch (const analysis::CyclicOrder& e) {
        throw InputError(order_file + ": " + e.what(), {{"file", order_file}});
    }
    return finish(std::move(r));
}

Report cmd_sorts(const std::string& file, const std::string& patterns_file) {
    Report r{"check-sorts", Status::ok, {}};
    auto b = assemble_model(load_model(file), file);
    std::vector<sorting::Pattern> patterns;
    try {
        patterns = io::patterns_from_json(json::parse(read_file(patterns_file)));
    } catch (const json::exception& e) {
        throw InputError(patterns_file + ": " + e.what(), {{"file", patterns_file}});
    } catch (const io::FormatError& e) {
        throw InputError(patterns_file + ": " + e.what(), {{"file", patterns_file}});
    }
    sorting::SortingResult result;
    try {
        result = sorting::check_sorting(b, patterns);
    } catch (const SignatureMismatch& e) {
        throw InputError(patterns_file + ": " + e.what(), {{"file", patterns_file}});
    }
    for (const auto& [name, occurrences] : result.counterexamples) {
        json occ = json::array();
        for (const auto& o : occurrences)
            occ.push_back(io::to_json(o));
        r.findings.push_back({"forbiddenPattern", "warning",
                              "pattern '" + name + "' occurs " + std::to_string(occurrences.size()) +
                                  " time(s)",
                              {{"pattern", name}, {"occurrences", occ}}});
    }
    return finish(std::move(r));
}

void cmd_export(const std::string& file, const std::string& format, const std::string& stage,
                std::ostream& out) {
    auto model = load_model(file);
    if (stage == "stubs") {
        if (format == "json") {
            json docs = json::array();
            for (const auto& [name, _] : model.services) {
                auto doc = io::to_json(dc::container_stub(name, model));
                doc["name"] = name;
                docs.push_back(std::move(doc));
            }
            out << docs.dump(2) << "\n";
            return;
        }
        std::vector<Bigraph> stubs;
        for (const auto& [name, _] : model.services)
            stubs.push_back(dc::container_stub(name, model));
        out << io::to_dot(tensor_all(stubs), {"stubs"});
        return;
    }
    Bigraph b = stage == "environment" ? dc::environment_bigraph(model)
                                       : assemble_model(model, file);
    if (format == "json")
        out << io::to_json(b).dump(2) << "\n";
    else
        out << io::to_dot(b, {stage});
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, Color color) {
    CLI::App app{"Static checks for docker-compose files via local directed bigraphs", "ldbig"};
    app.require_subcommand(1);
    bool as_json = false;
    app.add_flag("--json", as_json, "Print the report as JSON");

    std::string file, order_file, patterns_file, format = "json", stage = "composite";
    auto* validate_cmd = app.add_subcommand("validate", "Parse, assemble and check well-formedness");
    validate_cmd->add_option("file", file, "docker-compose file")->required();
    auto* links_cmd = app.add_subcommand("check-links", "Check that linked containers share a network");
    links_cmd->add_option("file", file, "docker-compose file")->required();
    auto* security_cmd = app.add_subcommand("check-security", "Check network security levels");
    security_cmd->add_option("file", file, "docker-compose file")->required();
    security_cmd->add_option("--order", order_file, "Order file with HIGH > LOW lines")->required();
    auto* sorts_cmd = app.add_subcommand("check-sorts", "Search for forbidden patterns");
    sorts_cmd->add_option("file", file, "docker-compose file")->required();
    sorts_cmd->add_option("--forbidden", patterns_file, "JSON list of patterns")->required();
    auto* export_cmd = app.add_subcommand("export", "Print a bigraph as JSON or DOT");
    export_cmd->add_option("file", file, "docker-compose file")->required();
    export_cmd->add_option("--format", format, "dot or json")
        ->check(CLI::IsMember({"dot", "json"}));
    export_cmd->add_option("--stage", stage, "environment, stubs or composite")
        ->check(CLI::IsMember({"environment", "stubs", "composite"}));
    for (auto* sub : {validate_cmd, links_cmd, security_cmd, sorts_cmd, export_cmd})
        sub->add_flag("--json", as_json, "Print the report as JSON");

    std::vector<std::string> argv_store{"ldbig"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store)
        argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "ldbig: " << e.what() << "\n" << "run 'ldbig --help' for usage\n";
        return 2;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    Report report;
    try {
        if (validate_cmd->parsed()) {
            report = cmd_validate(file);
        } else if (links_cmd->parsed()) {
            report = cmd_links(file);
        } else if (security_cmd->parsed()) {
            report = cmd_security(file, order_file);
        } else if (sorts_cmd->parsed()) {
            report = cmd_sorts(file, patterns_file);
        } else {
            cmd_export(file, format, stage, out);
            return 0;
        }
    } catch (const InputError& e) {
        report = Report{command, Status::input_error, {{"inputError", "error", e.what(), e.payload()}}};
    } catch (const std::exception& e) {
        report = Report{command, Status::input_error, {{"inputError", "error", e.what(), json::object()}}};
    }
    print(report, as_json, color, out);
    return exit_code(report.status);
}

}  // namespace ldbig::cli
