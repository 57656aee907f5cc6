#pragma once

#include "lrce/measure.hpp"
#include "lrce/model.hpp"

#include <cstdint>
#include <vector>

namespace lrce {

/// Counter-based generator: the n-th draw of stream `key` is a pure function of (key, n),
/// so every firm owns an independent, partition-free stream.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next();
    /// Uniform on [0, 1) with 53 random bits.
    double uniform();

    static std::uint64_t mix(std::uint64_t x);

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// Periods needed for an initially empty industry to reach 99.9% of its steady-state mass.
int default_burn_in(double exit_probability);

struct SimConfig {
    std::int64_t entrants_per_period = 1000;
    int periods = 500;
    /// Negative selects default_burn_in(rho).
    int burn_in = -1;
    std::uint64_t seed = 1;
    Threshold threshold;
    double price = 0.0;
    /// Discount applied to cohort profits; negative uses the model's discount factor.
    double discount = -1.0;
    int batches = 64;
    unsigned workers = 0;
};

struct PanelStats {
    int periods = 0;
    int burn_in = 0;
    std::int64_t entrants_per_period = 0;
    /// Firm-period counts per grid cell over the measured window [burn_in, periods).
    std::vector<std::int64_t> histogram;
    std::int64_t firm_periods = 0;
    double mean_firm_count = 0.0;
    /// Active firms in period t, and those of them that continue into t + 1 (all periods).
    std::vector<std::int64_t> active;
    std::vector<std::int64_t> continuing;
    std::int64_t endogenous_exits = 0;
    std::int64_t exogenous_exits = 0;
    double exit_rate = 0.0;
    /// Discounted lifetime profit of every entrant, mean and batch-means standard error.
    std::int64_t cohort_size = 0;
    double cohort_npv_mean = 0.0;
    double cohort_npv_se = 0.0;
};

/// Firm-level forward simulation at a fixed price and exit threshold. Deterministic in the seed
/// and independent of the number of workers.
PanelStats simulate_panel(const SimConfig& cfg, const DiscretizedModel& d);

struct VerificationOptions {
    double max_total_variation = 0.01;
    double max_npv_z = 3.0;
    double entry_cost = 0.0;
    /// Histogram bins formed by merging adjacent cells; 0 keeps one bin per cell.
    Index bins = 0;
};

struct VerificationReport {
    double total_variation = 0.0;
    double npv_z = 0.0;
    /// Per-bin z-scores of the empirical share against the analytic share (iid approximation).
    std::vector<double> bin_z;
    Index worst_bin = 0;
    bool total_variation_ok = false;
    bool npv_ok = false;
    bool passed = false;
};

VerificationReport verify_against_steady_state(const PanelStats& stats, const TypeMeasure& analytic,
                                               const VerificationOptions& opt = {});

} // namespace lrce
