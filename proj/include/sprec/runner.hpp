#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace sprec {

inline constexpr int kExitOk = 0;
inline constexpr int kExitScenario = 1;
inline constexpr int kExitRuntime = 2;

// Subcommands: psd, ber, papr, precoder-info, filter.
struct RunOptions {
    std::string command;
    std::string scenario;  // bundled name or path
    std::optional<std::uint64_t> seed;
    std::optional<std::filesystem::path> out;
    int threads = 1;
    bool plot = true;
};

// Output directory: --out, then the scenario's `out`, then
// $SPREC_OUT_DIR/<id>, then results/<id>.
std::filesystem::path output_dir(const RunOptions& opt, const std::string& scenario_id,
                                 const std::string& scenario_out);

// Runs one subcommand and returns the process exit code. Diagnostics go to
// `err`; precoder-info and filter print to `out`.
int run_command(const RunOptions& opt, std::ostream& out, std::ostream& err);

// Lists bundled scenarios with their descriptions.
void list_scenarios(std::ostream& out);

std::uint64_t fnv1a64(std::string_view data);

}  // namespace sprec
