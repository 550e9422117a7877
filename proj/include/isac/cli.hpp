#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "isac/montecarlo.hpp"
#include "isac/region.hpp"
#include "isac/table.hpp"
#include "json.hpp"

namespace isac::cli {

/// Invalid configuration; `path` is the dotted field path (e.g. "sim.trials").
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string path, const std::string& what)
        : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

enum class Command { fisher, bounds, rate, region, simulate };

std::optional<Command> parse_command(const std::string& name);
std::string to_string(Command c);

/// Declarative run description. Defaults reproduce the spectrum-sensing
/// example: a = b = 3, P = 2, sigma2 = 0.5, BPSK.
struct RunConfig {
    struct Model {
        std::string family = "two_band_gaussian";
        double a = 3.0, b = 3.0;
        double power = 2.0;
        double sigma2 = 0.5;
        std::string modulation = "bpsk";
    } model;
    struct Design {
        double t1 = 0.0;
    } design;
    Sweep sweep;
    struct Fisher {
        std::vector<double> states{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    } fisher;
    struct Bounds {
        std::vector<double> n_list{100, 1000, 10000, 100000};
    } bounds;
    SimConfig sim;
    struct Output {
        std::string format = "csv";
        std::string path;  // empty: standard output
    } output;
};

/// Strict parse: unknown keys and out-of-range values raise ConfigError.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

TwoBandModel build_model(const RunConfig& config);

struct CommandResult {
    Table table;
    std::string summary;
};

/// Run one subcommand and return its table and one-line summary.
CommandResult run(Command command, const RunConfig& config);

/// Serialise a table in the configured format.
std::string render(const Table& table, const RunConfig& config);

/// Full front end: `isac_cli <subcommand> [--config PATH] [--out PATH] [--seed N]`.
/// Exit 0 on success, 2 on configuration errors, 3 on numeric failures.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace isac::cli
