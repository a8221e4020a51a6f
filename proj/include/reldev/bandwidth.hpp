#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "reldev/estimation.hpp"
#include "reldev/kernels.hpp"

namespace reldev {

enum class BandwidthGrid {
    /// Full grid for n <= 500, thinned grid above.
    Auto,
    /// {1/n, 2/n, ..., floor(n/2)/n}.
    Full,
    /// Geometric grid of at most `max_candidates` values between 2/n and 1/2.
    Thinned,
};

struct CvConfig {
    std::size_t folds = 10;
    /// Explicit candidates; when empty the grid comes from `policy`.
    std::vector<double> candidates;
    BandwidthGrid policy = BandwidthGrid::Auto;
    std::size_t max_candidates = 60;
    std::uint64_t seed = 0xc0ffee;
};

struct CvEntry {
    double bandwidth;
    double mse;
    bool feasible;
};

struct CvResult {
    double bandwidth;
    std::vector<CvEntry> table;
};

std::vector<double> bandwidth_candidates(std::size_t n, const CvConfig& cfg);

/// Random partition of {1..n} into `folds` sets whose sizes differ by at most one.
std::vector<std::vector<std::size_t>> cv_partition(std::size_t n, std::size_t folds, std::uint64_t seed);

/// Jackknife predictions at j / n for j in `held_out`, fitted on all other observations.
/// Throws DegenerateWindow when a prediction window is degenerate.
std::vector<double> cv_fold_predictions(const TimeSeries& x, const Kernel& k, double h,
                                        const std::vector<std::size_t>& held_out);

/// Feasible entry of minimal score among those with bandwidth > `above`,
/// ties within 1e-12 going to the largest bandwidth.
std::optional<double> best_bandwidth(const std::vector<CvEntry>& table, double above = 0.0);

/// k-fold cross-validation for the Jackknife bandwidth. The score for h is
/// (1 - h)^-1 times the summed squared prediction errors over all folds.
/// Candidates whose narrow (h / sqrt 2) window holds fewer than 4 training
/// points for some prediction, or hits a degenerate window, are marked
/// infeasible. Among scores equal within 1e-12 the largest h wins.
CvResult cross_validate_bandwidth(const TimeSeries& x, const Kernel& k, const CvConfig& cfg = {});

}  // namespace reldev
