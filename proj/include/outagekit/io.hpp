#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "outagekit/asymptotics.hpp"
#include "outagekit/harness.hpp"
#include "outagekit/pointprocess.hpp"

namespace outagekit {

/// Shortest decimal text with 9 significant digits, independent of the locale.
std::string format_number(double x);

/// One row of a curve file; analytic rows carry std_err 0 and n_reps 0.
struct CurveRow {
    double eta = 0.0;
    double p_success = 1.0;
    double std_err = 0.0;
    std::size_t n_reps = 0;
    std::string estimator;
};

struct Curve {
    std::string label;
    std::string scheme;
    double alpha = 4.0;
    double theta = 1.0;
    std::uint64_t seed = 0;
    std::vector<CurveRow> rows;
};

Curve to_curve(const SweepResult& sweep, std::string label = {});
/// The closed-form column of a sweep, if every point has one.
std::optional<Curve> exact_curve(const SweepResult& sweep, std::string label = {});

/// Header `eta,p_success,std_err,n_reps,estimator,scheme,alpha,theta,seed`.
void write_curve_csv(std::ostream& os, const Curve& curve);
void write_sweep_csv(std::ostream& os, const SweepResult& sweep);

/// Header `scheme,gamma,kappa,provenance,alpha,theta`.
struct AsymptoticRow {
    AsymptoticResult result;
    double alpha = 4.0;
    double theta = 1.0;
};
void write_asymptotic_csv(std::ostream& os, const std::vector<AsymptoticRow>& rows);

/// Header `eta,lower,upper`.
void write_envelope_csv(std::ostream& os, const std::vector<EnvelopePoint>& envelope);

/// Generic numeric table.
void write_table_csv(std::ostream& os, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows);

/// Header `x,y[,z]` (plus `active` when flags are given); metadata goes to `<path>.meta`.
void write_pattern_csv(const std::filesystem::path& path, const PointPattern& pattern,
                       const std::vector<bool>* active = nullptr);
/// Reads a pattern written by write_pattern_csv (points, window and model tag).
PointPattern read_pattern_csv(const std::filesystem::path& path);

using KeyValueList = std::vector<std::pair<std::string, std::string>>;
/// `key = value` lines.
void write_key_values(const std::filesystem::path& path, const KeyValueList& entries);
KeyValueList read_key_values(const std::filesystem::path& path);

/// Opens a file for writing, creating parent directories; throws Error on failure.
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace outagekit
