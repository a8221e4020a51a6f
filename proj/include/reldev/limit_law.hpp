#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "reldev/nu_measure.hpp"

namespace reldev {

inline constexpr std::uint64_t kDefaultLimitSeed = 0x5eed2021ULL;

/// Monte-Carlo description of R = W(1) / integral |W(l) - l W(1)| dnu(l).
struct RatioSampler {
    NuMeasure nu = NuMeasure::standard();
    std::size_t grid_size = 1000;
    std::size_t n_paths = 100000;
    std::uint64_t seed = kDefaultLimitSeed;

    /// Throws ArgumentError for grid_size < 100 or n_paths == 0.
    void validate() const;
    std::string fingerprint() const;
};

/// Raw draws: per path the numerator W(1) and denominator of R.
struct RatioDraws {
    std::vector<double> numerators;
    std::vector<double> denominators;
    /// Paths redrawn because the denominator underflowed to 0.
    std::size_t resampled = 0;
    /// Largest distance between a discrete nu support point and its grid node.
    double snap_distance = 0.0;

    std::vector<double> ratios() const;
};

/// Brownian paths on a grid of grid_size increments, one counter-based stream
/// per path, so the result depends only on the sampler fields.
RatioDraws simulate_ratio_draws(const RatioSampler& s);

/// The n_paths ratios W(1) / denominator in path order.
std::vector<double> simulate_ratio_samples(const RatioSampler& s);

/// Type-7 empirical quantile, p in (0, 1]. Throws ArgumentError on empty input.
double quantile(std::span<const double> samples, double p);

/// Fraction of samples strictly greater than t.
double p_value(std::span<const double> samples, double t);

/// Distribution of R used by the decision rule.
///
/// W(1) is independent of the bridge W(l) - l W(1), so given the denominator
/// V the ratio is N(0, 1 / V^2). The law is kept as the mixture of those
/// normals over the simulated denominators; its CDF is smooth and has far lower
/// Monte-Carlo error than the empirical CDF of the raw ratios.
class RatioLaw {
public:
    explicit RatioLaw(std::vector<double> denominators, std::string fingerprint = {});

    double cdf(double t) const;
    /// P(R > t); 0 for +inf and 1 for -inf.
    double exceedance(double t) const;
    /// (1 - alpha) quantile, q such that exceedance(q) = alpha.
    double critical_value(double alpha) const;
    double quantile(double p) const;

    const std::string& fingerprint() const noexcept { return fingerprint_; }
    std::span<const double> denominators() const noexcept { return denominators_; }

private:
    struct Memo;

    std::vector<double> denominators_;
    std::string fingerprint_;
    // Critical values by alpha; shared by copies of the same law.
    std::shared_ptr<Memo> memo_;
};

RatioLaw make_ratio_law(const RatioSampler& s);

/// Quantile cache file (JSON, "format": "reldev-ratio-law", "version": 1).
///
/// Layout: the sampler key plus, for both the raw ratios and the
/// denominators, 1024 evenly spaced order statistics and the 100 extreme
/// values of the relevant tail (largest ratios, smallest denominators).
void write_law_cache(const std::filesystem::path& file, const RatioSampler& s, const RatioDraws& draws);

/// Rebuilds the law from a cache file. Throws ConfigError if the file's key
/// does not match `s` or the format is unknown.
RatioLaw read_law_cache(const std::filesystem::path& file, const RatioSampler& s);

/// Process-wide memoized law for `s`. When `cache_file` is non-empty it is read
/// if present and matching, and written after a fresh simulation otherwise.
std::shared_ptr<const RatioLaw> cached_ratio_law(const RatioSampler& s, const std::filesystem::path& cache_file = {});

}  // namespace reldev
