#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "cntrap/config.hpp"

// CLI command bodies. Each *_csv function is pure: the same config gives the
// same bytes. The cmd_* wrappers write files and return the process exit code.
namespace cntrap::commands {

enum ExitCode { ok = 0, config_error = 2, numeric_failure = 3 };

struct RunOptions {
    std::string out_dir = ".";
    int jobs = 1;
};

// Evenly spaced (linear) or geometric (log) grid; n == 1 gives {lo}.
std::vector<double> grid(double lo, double hi, int n, config::Scale scale);

std::string conductivity_csv(const config::RunConfig& c);
// Sets all_failed when no row succeeded.
std::string spinflip_csv(const config::RunConfig& c, int jobs, bool* all_failed = nullptr);
// One CSV per sweep.profile_y0_nm entry, in that order.
std::vector<std::string> profile_csvs(const config::RunConfig& c, int jobs);
std::string tunneling_csv(const config::RunConfig& c, int jobs);
std::string summary_text(const config::RunConfig& c, int jobs);

int cmd_conductivity(const config::RunConfig& c, const RunOptions& o, std::ostream& log);
int cmd_spinflip_sweep(const config::RunConfig& c, const RunOptions& o, std::ostream& log);
int cmd_potential_profile(const config::RunConfig& c, const RunOptions& o, std::ostream& log);
int cmd_tunneling_sweep(const config::RunConfig& c, const RunOptions& o, std::ostream& log);
// Prints the report to out and also writes summary.txt.
int cmd_summary(const config::RunConfig& c, const RunOptions& o, std::ostream& out, std::ostream& log);

// Maps exceptions from a command body to exit codes, logging the message.
int guarded(std::ostream& log, const std::function<int()>& body);

}  // namespace cntrap::commands
