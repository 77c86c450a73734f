#pragma once

#include <functional>
#include <json.hpp>
#include <stdexcept>
#include <string>
#include <vector>

#include "modeguide/run_record.hpp"

namespace modeguide {

// invalid flags or ranges: exit 2
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// command cannot run on this input: exit 4
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum ExitCode { kExitOk = 0, kExitFailed = 1, kExitUsage = 2, kExitNonConvergence = 3, kExitPrecondition = 4 };

const std::vector<std::string>& command_names();

// Every flag with its default. Commands read only what they need.
nlohmann::json default_config();

// start:stop:step, or a single value
std::vector<double> parse_range(const std::string& s);

using LogFn = std::function<void(const std::string&)>;

// Runs a command and returns its record (timestamp empty). Consults MODEGUIDE_CACHE.
RunRecord run_command(const std::string& command, const nlohmann::json& config, const LogFn& log = {});
// Recomputes a record's outputs from its config, bypassing the cache.
RunRecord replay(const RunRecord& record, const LogFn& log = {});

struct Rendered {
  std::string primary;  // CSV table or JSON record
  std::string fits;     // CSV, empty when the command has no fits
  std::string plot;     // gnuplot script, empty when not applicable
  std::string extension;
};

Rendered render(const RunRecord& record, const std::string& format);

// exit code implied by the outputs (verify reports failures through it)
int outcome(const RunRecord& record);

// writes <command>.<ext>, fits, plot and the sidecar <command>.record.json with timestamp
void write_outputs(const RunRecord& record, const Rendered& r, const std::string& dir,
                   const std::string& timestamp);

std::string utc_timestamp();

}  // namespace modeguide
