#pragma once

#include <nlohmann/json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace ldbig::cli {

enum class Status { ok, violations, input_error };

struct Finding {
    std::string kind;
    std::string severity;
    std::string message;
    nlohmann::json payload;
};

/// Outcome of one command. status is ok exactly when findings is empty,
/// except for input errors which carry a single error finding.
struct Report {
    std::string command;
    Status status = Status::ok;
    std::vector<Finding> findings;
};

const char* to_string(Status status);
int exit_code(Status status);

nlohmann::json to_json(const Report& report);
Report report_from_json(const nlohmann::json& j);

enum class Color { never, always };

/// Runs the linter. `args` excludes the program name. Reports go to `out`,
/// usage errors to `err`. Returns the process exit code: 0 no findings,
/// 1 findings, 2 input or usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        Color color = Color::never);

}  // namespace ldbig::cli
