#ifndef GCRM_CLI_HPP
#define GCRM_CLI_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace gcrm::cli {

/// One experiment invocation. Parameters stay as key=value text; each
/// subcommand parses and validates what it needs.
struct ExperimentConfig {
    std::string subcommand;
    std::map<std::string, std::string> params;
    std::uint64_t seed = 0;
    long long samples = 100000;
    std::string output_path; // empty means stdout
};

inline constexpr int kExitPass = 0;
inline constexpr int kExitGateFailure = 1;
inline constexpr int kExitConfigError = 2;

/// Parse argv into a config. Accepts `subcommand --key value ...`; `--config
/// FILE` loads key=value lines first, explicit flags win. GCRM_SEED supplies
/// the default seed. Throws std::invalid_argument on malformed input.
ExperimentConfig parse_command_line(const std::vector<std::string>& args);

/// Run the experiment deterministically from its seed, write the CSV report
/// (header `experiment,param_json,n_index,estimate,exact,std_error,z_score`)
/// to the configured path or stdout, and return the exit status: 0 all gates
/// pass, 1 any gate fails, 2 configuration error (diagnostic on stderr).
int run(const ExperimentConfig& config);

/// Names of all registered subcommands.
std::vector<std::string> subcommand_names();

/// Real-number parser used for CLI values; accepts plain literals and the
/// form `logX` for log(X), e.g. `log4`.
double parse_real(const std::string& text);

} // namespace gcrm::cli

#endif
