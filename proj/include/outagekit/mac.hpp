#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "outagekit/pointprocess.hpp"

namespace outagekit {

struct Aloha {
    double p = 1.0;
};
struct CsmaMatern {
    double target_eta = 0.5;
};
struct TdmaLattice {
    int m = 1;
    int dimension = 2;
};
struct ClusterMac {
    double b = 1.0;
    double eta = 1.0;
};
struct UnreasonableTdma {
    int m = 2;
};

using MacScheme = std::variant<Aloha, CsmaMatern, TdmaLattice, ClusterMac, UnreasonableTdma>;

std::string scheme_name(const MacScheme& scheme);
void validate(const MacScheme& scheme);

/// The tuning value eta carried by the scheme (m^-d for the lattice schedules).
double scheme_eta(const MacScheme& scheme);

/// Same scheme family at another eta. Lattice schedules round m = eta^(-1/d).
MacScheme with_eta(const MacScheme& scheme, double eta);

struct TransmitterSet {
    PointPattern pattern;
    double eta = 0.0;
    MacScheme scheme;
    std::vector<std::size_t> source_index;  // position of each transmitter in the input pattern
    double hardcore_radius = 0.0;           // solved radius for CSMA
};

TransmitterSet aloha(const PointPattern& pattern, double p, std::uint64_t seed);
TransmitterSet csma_matern(const PointPattern& pattern, double target_eta, std::uint64_t seed);
TransmitterSet tdma_lattice(const PointPattern& pattern, int m, std::uint64_t seed);
TransmitterSet cluster_mac(const PointPattern& pattern, double b, double eta, std::uint64_t seed);
TransmitterSet unreasonable_tdma(const PointPattern& pattern, int m, std::uint64_t seed);

/// Dispatches on the scheme.
TransmitterSet apply_mac(const PointPattern& pattern, const MacScheme& scheme, std::uint64_t seed);

/// Generates a transmitter set for a given eta and seed.
using TransmitterFamily = std::function<TransmitterSet(double eta, std::uint64_t seed)>;

struct ConditionRow {
    double eta = 0.0;
    double k_unit_square = 0.0;     // K_eta([0,1]^2)
    double k_unit_square_se = 0.0;
    double scaled_k = 0.0;          // eta * K_eta(R eta^-1/2)
    double scaled_k_se = 0.0;
    double mean_points = 0.0;
    bool flagged = false;           // too few points for a reliable estimate
};

struct ConditionReport {
    std::vector<ConditionRow> rows;
    double radius_factor = 1.075;
    double k_growth_exponent = 0.0;  // slope of log K([0,1]^2) against log(1/eta)
    bool c1_bounded = false;
    bool c2_positive = false;
    bool reasonable = false;
    std::string notes;
};

struct ConditionOptions {
    std::size_t patterns_per_eta = 40;
    std::uint64_t seed = 1;
    double radius_factor = 1.075;
};

ConditionReport check_conditions(const TransmitterFamily& family, std::span<const double> eta_grid,
                                 const ConditionOptions& options = {});

}  // namespace outagekit
