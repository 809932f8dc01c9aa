#include <iostream>
#include <string>
#include <vector>

#include "gcrm/cli.hpp"

namespace {

void print_usage() {
    std::cerr << "usage: gcrm <subcommand> [--key value ...] [--config FILE] "
                 "[--seed N] [--samples N] [--out FILE]\n"
              << "subcommands:";
    for (const std::string& name : gcrm::cli::subcommand_names())
        std::cerr << " " << name;
    std::cerr << "\n";
}

} // namespace

int main(int argc, char* argv[]) {
    std::vector<std::string> args(argv + 1, argv + argc);
    if (args.empty() || args[0] == "--help" || args[0] == "-h" || args[0] == "help") {
        print_usage();
        return args.empty() ? gcrm::cli::kExitConfigError : gcrm::cli::kExitPass;
    }
    try {
        gcrm::cli::ExperimentConfig config = gcrm::cli::parse_command_line(args);
        return gcrm::cli::run(config);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return gcrm::cli::kExitConfigError;
    }
}
