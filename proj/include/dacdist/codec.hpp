#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "dacdist/overlap_spec.hpp"

namespace dacdist {

using Bit = std::uint8_t;
using BitSequence = std::vector<Bit>;

/// Current coding interval [low, low + width). Encoding k symbols leaves
/// width = q^k, so the interval never renormalizes; callers keep sequences
/// short enough that width stays above ~1e-12.
struct IntervalState {
    double low = 0.0;
    double width = 1.0;

    /// Sub-interval selected by one symbol: bit 0 keeps the low fraction
    /// [low, low + q*width), bit 1 the high fraction [low + (1-q)*width,
    /// low + width).
    IntervalState child(Bit bit, double q) const {
        if (bit == 0) return {low, width * q};
        return {low + width * (1.0 - q), width * q};
    }
};

/// Decoder symbol: 0, 1, or the ambiguous outcome when the codeword value
/// falls inside the overlap band [1-q, q).
enum class TernarySymbol { Zero, Ambiguous, One };

/// One candidate decoding path: symbols decoded so far, the interval they
/// select, and the Hamming distance to the side-information prefix.
struct DecoderPath {
    BitSequence symbols;
    IntervalState interval;
    std::uint32_t metric = 0;
};

inline IntervalState encode(std::span<const Bit> bits, const OverlapSpec& spec) {
    if (bits.empty()) throw std::invalid_argument("encode: empty sequence");
    IntervalState iv;
    for (Bit b : bits) iv = iv.child(b, spec.q);
    return iv;
}

/// Representative point of the final interval: the midpoint. Any point of
/// the interval would do; the midpoint keeps the truncation error below
/// width/2 (symmetric, bounded by width).
inline double codeword_value(const IntervalState& iv) {
    return iv.low + iv.width / 2.0;
}

inline TernarySymbol classify(double u, const OverlapSpec& spec) {
    if (!(u >= 0.0) || !(u < 1.0))
        throw std::invalid_argument("classify: codeword value outside [0, 1)");
    if (u < 1.0 - spec.q) return TernarySymbol::Zero;
    if (u < spec.q) return TernarySymbol::Ambiguous;
    return TernarySymbol::One;
}

inline std::uint32_t hamming(std::span<const Bit> a, std::span<const Bit> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("hamming: length mismatch");
    std::uint32_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] != b[i]) ? 1u : 0u;
    return d;
}

/// Breadth-limited tree-search decoder. The codeword value u is rescaled
/// into the interval of every live path and classified; an ambiguous
/// outcome spawns both branches. After each symbol at most M paths with the
/// smallest Hamming metric against the side information survive; ties keep
/// the stable creation order (0-branch before 1-branch, parents in rank
/// order), so results are deterministic. Returns the best full-length path.
inline DecoderPath decode(double u, const OverlapSpec& spec,
                          std::span<const Bit> side_info, std::size_t length,
                          std::size_t max_paths) {
    if (max_paths < 1) throw std::invalid_argument("decode: M must be >= 1");
    if (length != side_info.size())
        throw std::invalid_argument("decode: length mismatch with side information");
    if (!(u >= 0.0) || !(u < 1.0))
        throw std::invalid_argument("decode: codeword value outside [0, 1)");

    const double top = std::nextafter(1.0, 0.0);
    std::vector<DecoderPath> live{DecoderPath{}};
    std::vector<DecoderPath> next;
    live.front().symbols.reserve(length);

    auto extend = [&](const DecoderPath& p, Bit bit, Bit want) {
        DecoderPath child;
        child.symbols = p.symbols;
        child.symbols.push_back(bit);
        child.interval = p.interval.child(bit, spec.q);
        child.metric = p.metric + (bit != want ? 1u : 0u);
        next.push_back(std::move(child));
    };

    for (std::size_t i = 0; i < length; ++i) {
        next.clear();
        next.reserve(2 * live.size());
        for (const DecoderPath& p : live) {
            // Local coordinate of u inside this path's interval; clamped
            // against rounding at depth, where u can graze the interval edge.
            double local = (u - p.interval.low) / p.interval.width;
            local = std::clamp(local, 0.0, top);
            switch (classify(local, spec)) {
                case TernarySymbol::Zero: extend(p, 0, side_info[i]); break;
                case TernarySymbol::One: extend(p, 1, side_info[i]); break;
                case TernarySymbol::Ambiguous:
                    extend(p, 0, side_info[i]);
                    extend(p, 1, side_info[i]);
                    break;
            }
        }
        std::stable_sort(next.begin(), next.end(),
                         [](const DecoderPath& a, const DecoderPath& b) {
                             return a.metric < b.metric;
                         });
        if (next.size() > max_paths) next.resize(max_paths);
        live.swap(next);
    }
    return live.front();
}

inline constexpr std::size_t kUnboundedPaths =
    std::numeric_limits<std::size_t>::max();

}  // namespace dacdist
