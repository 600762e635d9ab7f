#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <numeric>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

#include "dacdist/codec.hpp"
#include "dacdist/overlap_spec.hpp"

namespace dacdist {

/// Empirical density over uniform half-open bins [k/bins, (k+1)/bins).
/// density[k] = counts[k] * bins / samples, so the mean of density is one.
struct Histogram {
    std::size_t bins = 0;
    std::vector<std::uint64_t> counts;
    std::vector<double> density;

    std::uint64_t total() const {
        return std::accumulate(counts.begin(), counts.end(),
                               std::uint64_t{0});
    }
    double bin_center(std::size_t k) const {
        return (static_cast<double>(k) + 0.5) / static_cast<double>(bins);
    }
};

inline constexpr std::size_t kAutoSeqLen = 0;

struct SampleConfig {
    std::uint64_t samples = 1000000;
    std::size_t seq_len = kAutoSeqLen;  // kAutoSeqLen picks from q
    std::uint64_t seed = 0;
    std::size_t bins = 200;
    unsigned workers = 0;  // 0 = hardware concurrency
};

/// Smallest sequence length with q^L <= 1e-12, capped at 4096. The codeword
/// midpoint then sits within 1e-12 of the infinite-sequence value, far
/// below any bin width in use.
inline std::size_t auto_seq_len(const OverlapSpec& spec) {
    spec.require_distribution_range();
    constexpr double kTarget = 1e-12;
    constexpr std::size_t kCap = 4096;
    auto len = static_cast<std::size_t>(
        std::ceil(std::log(kTarget) / std::log(spec.q)));
    while (len > 1 && std::pow(spec.q, static_cast<double>(len - 1)) <= kTarget)
        --len;
    while (std::pow(spec.q, static_cast<double>(len)) > kTarget) ++len;
    return std::min(len, kCap);
}

namespace detail {

/// SplitMix64 finalizer; the whole sampler is built from it as a
/// counter-based hash so that every (seed, sample, word) triple yields the
/// same bits regardless of threading.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Equiprobable bit stream for one sample index.
class BitStream {
public:
    BitStream(std::uint64_t seed, std::uint64_t index)
        : base_(mix64(seed ^ mix64(index))) {}

    Bit next() {
        if (used_ == 64) {
            word_ = mix64(base_ + counter_++);
            used_ = 0;
        }
        return static_cast<Bit>((word_ >> used_++) & 1u);
    }

private:
    std::uint64_t base_;
    std::uint64_t word_ = 0;
    std::uint64_t counter_ = 0;
    int used_ = 64;
};

inline void count_range(const OverlapSpec& spec, const SampleConfig& config,
                        std::size_t seq_len, std::uint64_t first,
                        std::uint64_t last, std::vector<std::uint64_t>& counts) {
    const auto bins = static_cast<double>(config.bins);
    for (std::uint64_t i = first; i < last; ++i) {
        BitStream stream(config.seed, i);
        IntervalState iv;
        for (std::size_t k = 0; k < seq_len; ++k)
            iv = iv.child(stream.next(), spec.q);
        const double u = codeword_value(iv);
        auto bin = static_cast<std::size_t>(u * bins);
        if (bin >= config.bins) bin = config.bins - 1;
        ++counts[bin];
    }
}

}  // namespace detail

/// Encode `samples` random equiprobable sequences and histogram the
/// codeword values. Counter-based per-sample streams plus integer count
/// merging keep the result bit-identical across thread counts.
inline Histogram sample_histogram(const OverlapSpec& spec,
                                  const SampleConfig& config) {
    spec.require_distribution_range();
    if (config.samples < 1)
        throw std::invalid_argument("sample_histogram: samples must be >= 1");
    if (config.bins < 2)
        throw std::invalid_argument("sample_histogram: bins must be >= 2");
    const std::size_t seq_len = config.seq_len == kAutoSeqLen
                                    ? auto_seq_len(spec)
                                    : config.seq_len;

    unsigned workers =
        config.workers ? config.workers : std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    if (config.samples < 10000 && !config.workers) workers = 1;

    std::vector<std::vector<std::uint64_t>> partial(
        workers, std::vector<std::uint64_t>(config.bins, 0));
    {
        std::vector<std::future<void>> jobs;
        const std::uint64_t chunk = (config.samples + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::uint64_t first = w * chunk;
            const std::uint64_t last = std::min(first + chunk, config.samples);
            if (first >= last) break;
            jobs.push_back(std::async(std::launch::async, [&, w, first, last] {
                detail::count_range(spec, config, seq_len, first, last,
                                    partial[w]);
            }));
        }
        for (auto& j : jobs) j.get();
    }

    Histogram h;
    h.bins = config.bins;
    h.counts.assign(config.bins, 0);
    for (const auto& p : partial)
        for (std::size_t k = 0; k < config.bins; ++k) h.counts[k] += p[k];
    h.density.resize(config.bins);
    const double scale =
        static_cast<double>(config.bins) / static_cast<double>(config.samples);
    for (std::size_t k = 0; k < config.bins; ++k)
        h.density[k] = static_cast<double>(h.counts[k]) * scale;
    return h;
}

enum class DensityMetric { L1, MSE, LINF };

/// Distance between two density curves on the same grid: L1 and MSE are
/// means over the grid, LINF the maximum absolute difference.
inline double distance(std::span<const double> a, std::span<const double> b,
                       DensityMetric metric) {
    if (a.size() != b.size() || a.empty())
        throw std::invalid_argument("distance: size mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = std::abs(a[i] - b[i]);
        switch (metric) {
            case DensityMetric::L1: acc += d; break;
            case DensityMetric::MSE: acc += d * d; break;
            case DensityMetric::LINF: acc = std::max(acc, d); break;
        }
    }
    if (metric == DensityMetric::LINF) return acc;
    return acc / static_cast<double>(a.size());
}

/// Average grid values (N+1 points over N cells) into `bins` uniform bins;
/// grid point n falls in the half-open bin containing u = n/N.
inline std::vector<double> bin_average(std::span<const double> grid_values,
                                       std::size_t bins) {
    if (grid_values.size() < 2 || bins < 1)
        throw std::invalid_argument("bin_average: bad sizes");
    const std::size_t n_cells = grid_values.size() - 1;
    std::vector<double> sums(bins, 0.0);
    std::vector<std::size_t> hits(bins, 0);
    for (std::size_t n = 0; n <= n_cells; ++n) {
        const double u =
            static_cast<double>(n) / static_cast<double>(n_cells);
        auto k = static_cast<std::size_t>(u * static_cast<double>(bins));
        if (k >= bins) k = bins - 1;
        sums[k] += grid_values[n];
        ++hits[k];
    }
    for (std::size_t k = 0; k < bins; ++k)
        sums[k] = hits[k] ? sums[k] / static_cast<double>(hits[k]) : 0.0;
    return sums;
}

}  // namespace dacdist
