#include "lrce/simulation.hpp"

#include "lrce/errors.hpp"
#include "lrce/firm.hpp"
#include "lrce/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace lrce {

namespace {

/// Neumaier-compensated running sum.
struct CompensatedSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) {
        const double t = sum + x;
        carry += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + carry; }
};

std::vector<double> cumulative(const Eigen::Ref<const Vector>& w) {
    std::vector<double> cdf(static_cast<std::size_t>(w.size()));
    double acc = 0.0;
    for (Index j = 0; j < w.size(); ++j) cdf[static_cast<std::size_t>(j)] = acc += w[j];
    cdf.back() = 1.0;
    return cdf;
}

Index draw(const std::vector<double>& cdf, double u) {
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    return std::min<Index>(static_cast<Index>(it - cdf.begin()), static_cast<Index>(cdf.size()) - 1);
}

struct BatchTotals {
    std::vector<std::int64_t> histogram;
    std::vector<std::int64_t> active;
    std::vector<std::int64_t> continuing;
    std::int64_t endogenous = 0;
    std::int64_t exogenous = 0;
    std::int64_t firms = 0;
    CompensatedSum npv;
};

} // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(mix(seed ^ mix(stream + 0x632BE59BD9B4E019ULL))) {}

std::uint64_t CounterRng::mix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t CounterRng::next() { return mix(key_ + (++counter_) * 0x9E3779B97F4A7C15ULL); }

double CounterRng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

int default_burn_in(double exit_probability) {
    if (exit_probability >= 1.0) return 1;
    return static_cast<int>(std::ceil(std::log(0.001) / std::log(1.0 - exit_probability)));
}

PanelStats simulate_panel(const SimConfig& cfg, const DiscretizedModel& d) {
    const auto& prim = d.primitives();
    const int burn_in = cfg.burn_in >= 0 ? cfg.burn_in : default_burn_in(prim.exit_probability);
    if (cfg.entrants_per_period < 1) throw ConfigError("/simulation/entrants", "need at least one entrant per period");
    if (!(cfg.periods > burn_in)) throw ConfigError("/simulation/periods", "periods must exceed the burn-in");
    if (cfg.batches < 2) throw ConfigError("/simulation/batches", "need at least two batches");

    const Index g = d.cells();
    const double rho = prim.exit_probability;
    const double discount = cfg.discount >= 0.0 ? cfg.discount : prim.discount;
    const Vector profit = firm_statics(cfg.price, prim.cost, d.types()).profit;
    const Vector stay = d.stay_weights(cfg.threshold);
    const std::vector<double> entry_cdf = cumulative(d.entrants());
    std::vector<std::vector<double>> row_cdf(static_cast<std::size_t>(g));
    for (Index i = 0; i < g; ++i) row_cdf[static_cast<std::size_t>(i)] = cumulative(d.transition().row(i).transpose());

    const std::int64_t firms = cfg.entrants_per_period * cfg.periods;
    const auto periods = static_cast<std::size_t>(cfg.periods);
    std::vector<BatchTotals> batches(static_cast<std::size_t>(cfg.batches));

    parallel_for(batches.size(), [&](std::size_t b) {
        BatchTotals& acc = batches[b];
        acc.histogram.assign(static_cast<std::size_t>(g), 0);
        acc.active.assign(periods, 0);
        acc.continuing.assign(periods, 0);
        const std::int64_t first = firms * static_cast<std::int64_t>(b) / cfg.batches;
        const std::int64_t last = firms * static_cast<std::int64_t>(b + 1) / cfg.batches;
        for (std::int64_t f = first; f < last; ++f) {
            CounterRng rng(cfg.seed, static_cast<std::uint64_t>(f));
            std::int64_t t = f / cfg.entrants_per_period;
            Index type = draw(entry_cdf, rng.uniform());
            double weight = 1.0;
            double npv = 0.0;
            for (;;) {
                const bool observed = t < cfg.periods;
                const bool measured = observed && t >= burn_in;
                if (observed) ++acc.active[static_cast<std::size_t>(t)];
                if (measured) ++acc.histogram[static_cast<std::size_t>(type)];
                npv += weight * profit[type];

                const double s = stay[type];
                const bool stays = s >= 1.0 || (s > 0.0 && rng.uniform() < s);
                const bool survives = rng.uniform() >= rho;
                if (!stays) {
                    if (measured) ++acc.endogenous;
                    break;
                }
                if (!survives) {
                    if (measured) ++acc.exogenous;
                    break;
                }
                if (observed) ++acc.continuing[static_cast<std::size_t>(t)];
                type = draw(row_cdf[static_cast<std::size_t>(type)], rng.uniform());
                weight *= discount;
                ++t;
            }
            acc.npv.add(npv);
            ++acc.firms;
        }
    }, cfg.workers);

    PanelStats out;
    out.periods = cfg.periods;
    out.burn_in = burn_in;
    out.entrants_per_period = cfg.entrants_per_period;
    out.histogram.assign(static_cast<std::size_t>(g), 0);
    out.active.assign(periods, 0);
    out.continuing.assign(periods, 0);
    CompensatedSum total_npv;
    std::vector<double> batch_means;
    for (const auto& acc : batches) {
        for (std::size_t j = 0; j < acc.histogram.size(); ++j) out.histogram[j] += acc.histogram[j];
        for (std::size_t t = 0; t < periods; ++t) {
            out.active[t] += acc.active[t];
            out.continuing[t] += acc.continuing[t];
        }
        out.endogenous_exits += acc.endogenous;
        out.exogenous_exits += acc.exogenous;
        out.cohort_size += acc.firms;
        total_npv.add(acc.npv.value());
        if (acc.firms > 0) batch_means.push_back(acc.npv.value() / static_cast<double>(acc.firms));
    }
    for (auto c : out.histogram) out.firm_periods += c;
    out.mean_firm_count = static_cast<double>(out.firm_periods) / static_cast<double>(cfg.periods - burn_in);
    out.exit_rate = out.firm_periods > 0
                        ? static_cast<double>(out.endogenous_exits + out.exogenous_exits) /
                              static_cast<double>(out.firm_periods)
                        : 0.0;
    out.cohort_npv_mean = total_npv.value() / static_cast<double>(out.cohort_size);

    CompensatedSum spread;
    for (double m : batch_means) spread.add((m - out.cohort_npv_mean) * (m - out.cohort_npv_mean));
    const double nb = static_cast<double>(batch_means.size());
    out.cohort_npv_se = nb > 1.0 ? std::sqrt(spread.value() / (nb - 1.0) / nb) : 0.0;
    return out;
}

VerificationReport verify_against_steady_state(const PanelStats& stats, const TypeMeasure& analytic,
                                               const VerificationOptions& opt) {
    const Index g = analytic.weights.size();
    if (static_cast<Index>(stats.histogram.size()) != g)
        throw NumericalError("histogram and analytic measure have different grids");
    if (stats.firm_periods <= 0) throw NumericalError("simulation recorded no firm-periods");
    const Index bins = opt.bins > 0 ? std::min(opt.bins, g) : g;

    Vector empirical = Vector::Zero(bins);
    Vector expected = Vector::Zero(bins);
    const double total = analytic.mass();
    for (Index j = 0; j < g; ++j) {
        const Index b = j * bins / g;
        empirical[b] += static_cast<double>(stats.histogram[static_cast<std::size_t>(j)]);
        expected[b] += analytic.weights[j] / total;
    }
    const double n = static_cast<double>(stats.firm_periods);
    empirical /= n;

    VerificationReport r;
    r.total_variation = 0.5 * (empirical - expected).cwiseAbs().sum();
    r.bin_z.resize(static_cast<std::size_t>(bins));
    double worst = -1.0;
    for (Index b = 0; b < bins; ++b) {
        const double var = expected[b] * (1.0 - expected[b]) / n;
        const double z = var > 0.0 ? (empirical[b] - expected[b]) / std::sqrt(var)
                                   : (empirical[b] > 0.0 ? INFINITY : 0.0);
        r.bin_z[static_cast<std::size_t>(b)] = z;
        if (std::abs(z) > worst) {
            worst = std::abs(z);
            r.worst_bin = b;
        }
    }
    r.npv_z = stats.cohort_npv_se > 0.0 ? (stats.cohort_npv_mean - opt.entry_cost) / stats.cohort_npv_se
                                        : (stats.cohort_npv_mean == opt.entry_cost ? 0.0 : INFINITY);
    r.total_variation_ok = r.total_variation < opt.max_total_variation;
    r.npv_ok = std::abs(r.npv_z) <= opt.max_npv_z;
    r.passed = r.total_variation_ok && r.npv_ok;
    return r;
}

} // namespace lrce
