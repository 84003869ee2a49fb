#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "outagekit/fit.hpp"
#include "outagekit/harness.hpp"

namespace outagekit {

struct SweepSettings {
    std::vector<double> eta_grid;  // empty: a default grid is derived from the scheme
    std::size_t replications = 100000;
    std::uint64_t seed = 1;
    EstimatorKind estimator = EstimatorKind::Auto;
    unsigned threads = 1;
    bool far_field = true;
    double window_side = 0.0;
    std::optional<FitWindow> fit_window;  // empty: the default window
};

struct RunConfig {
    NodeModel model = PppModel{};
    MacScheme mac = Aloha{0.1};
    LinkSpec link;
    PathLoss pathloss;
    SweepSettings sweep;
    std::filesystem::path output_directory = "out";

    /// Cross-field checks; throws ParameterError or NotImplementedError.
    void validate() const;
    /// The explicit grid, or 8 log-spaced points below min(eta_max, 0.1) when an
    /// asymptote is known, or m = 2..9 for lattice schedules.
    std::vector<double> resolved_grid() const;
    SweepConfig sweep_config() const;
};

/// Looks up an environment variable; the default reads the process environment.
using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;
EnvLookup process_environment();

/// Parses INI text. Keys may be overridden by OUTAGEKIT_<SECTION>_<KEY>
/// variables. Syntax errors, unknown keys and malformed values raise
/// ConfigParseError; values are not cross-checked here (see RunConfig::validate).
RunConfig parse_config(std::string_view text, const EnvLookup& env = process_environment());
RunConfig load_config(const std::filesystem::path& path, const EnvLookup& env = process_environment());

/// Every recognised `section.key` with its default, in documentation order.
std::vector<std::pair<std::string, std::string>> config_keys();

}  // namespace outagekit
