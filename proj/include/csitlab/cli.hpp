#ifndef CSITLAB_CLI_HPP
#define CSITLAB_CLI_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "csitlab/dmc_state.hpp"

#include "json.hpp"

namespace csitlab::cli {

struct Metric {
    std::string name;
    double value = 0.0;
    std::optional<double> lo;
    std::optional<double> hi;
};

// One sweep point: label columns first, then metric columns (a metric with a
// confidence interval expands to name, name_lo, name_hi).
struct SweepRow {
    std::vector<std::pair<std::string, std::string>> keys;
    std::vector<Metric> metrics;
};

// Wide-format CSV: UTF-8, comma separated, '.' decimal, LF line ends. The
// body is a pure function of the rows, so identical configs and seeds
// rewrite identical bytes.
void emit_plotdata(const std::vector<SweepRow>& rows,
                   const std::filesystem::path& path);

std::string format_double(double v);

// Channel referenced by the config: a path, an inline object, or (absent)
// the built-in two-state demo channel.
DiscreteChannelSpec channel_from_config(const nlohmann::json& config);

// The bundled demo: two states G/B, binary input and output, where input 1
// flips the output odds only in the good state.
DiscreteChannelSpec demo_channel();

// Executes one subcommand against a resolved config; writes CSV sweeps and a
// JSON summary under the config's output directory. Returns a process exit
// status.
int run(const std::string& subcommand, nlohmann::json config);

// Argument parsing front end: subcommand, optional config path, then
// --key value overrides applied to the config by dotted path.
int main(int argc, const char* const* argv);

} // namespace csitlab::cli

#endif
