#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace dacdist {

/// Density values f(n/N) on the uniform closed grid n = 0..N. The working
/// normalization is the discrete one: sum of all values equals N (the cell
/// count), which makes the rectangle-rule integral over [0,1] equal one.
struct DiscretizedDistribution {
    std::size_t n_cells = 0;             // N; grid has N+1 points
    std::vector<double> values;          // values[n] ~ f(n * (1/N))

    double delta() const { return 1.0 / static_cast<double>(n_cells); }
    double u_at(std::size_t n) const { return static_cast<double>(n) * delta(); }

    double sum() const {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }

    double peak() const {
        return values.empty() ? 0.0
                              : *std::max_element(values.begin(), values.end());
    }

    /// Value at the grid point nearest to u.
    double value_near(double u) const {
        double idx = std::round(u * static_cast<double>(n_cells));
        auto n = static_cast<std::size_t>(
            std::clamp(idx, 0.0, static_cast<double>(n_cells)));
        return values[n];
    }
};

/// Rescale so the plain grid sum equals N.
inline DiscretizedDistribution normalize(DiscretizedDistribution dist) {
    const double omega = dist.sum();
    if (!(omega > 0.0))
        throw std::invalid_argument("normalize: degenerate distribution");
    const double scale = static_cast<double>(dist.n_cells) / omega;
    for (double& v : dist.values) v *= scale;
    return dist;
}

/// Mean squared difference over the N+1 grid points.
inline double mse(const DiscretizedDistribution& a,
                  const DiscretizedDistribution& b) {
    if (a.n_cells != b.n_cells || a.values.size() != b.values.size())
        throw std::invalid_argument("mse: size mismatch");
    double acc = 0.0;
    for (std::size_t n = 0; n < a.values.size(); ++n) {
        const double d = a.values[n] - b.values[n];
        acc += d * d;
    }
    return acc / static_cast<double>(a.values.size());
}

}  // namespace dacdist
