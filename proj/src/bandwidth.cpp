#include "reldev/bandwidth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "reldev/errors.hpp"
#include "reldev/parallel.hpp"
#include "reldev/random.hpp"

namespace reldev {

namespace {

constexpr std::size_t kMinNarrowWindowPoints = 4;
constexpr double kTieTolerance = 1e-12;

LocalLinearSmoother training_smoother(const TimeSeries& x, const Kernel& k, const std::vector<bool>& held) {
    std::vector<double> positions;
    std::vector<double> values;
    for (std::size_t i = 1; i <= x.size(); ++i) {
        if (!held[i - 1]) {
            positions.push_back(x.design_point(i));
            values.push_back(x.at(i));
        }
    }
    return LocalLinearSmoother(std::move(positions), std::move(values), k);
}

std::vector<bool> membership(std::size_t n, const std::vector<std::size_t>& held_out) {
    std::vector<bool> held(n, false);
    for (std::size_t j : held_out) {
        if (j < 1 || j > n) {
            throw ArgumentError("held-out index outside [1, n]");
        }
        held[j - 1] = true;
    }
    return held;
}

}  // namespace

std::vector<double> bandwidth_candidates(std::size_t n, const CvConfig& cfg) {
    if (!cfg.candidates.empty()) {
        for (double h : cfg.candidates) {
            check_bandwidth(h);
        }
        std::vector<double> out = cfg.candidates;
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }
    const double dn = static_cast<double>(n);
    BandwidthGrid policy = cfg.policy;
    if (policy == BandwidthGrid::Auto) {
        policy = n > 500 ? BandwidthGrid::Thinned : BandwidthGrid::Full;
    }
    std::vector<double> out;
    if (policy == BandwidthGrid::Full || n / 2 <= cfg.max_candidates) {
        for (std::size_t i = 1; i <= n / 2; ++i) {
            out.push_back(static_cast<double>(i) / dn);
        }
        return out;
    }
    const std::size_t m = std::max<std::size_t>(cfg.max_candidates, 2);
    const double lo = 2.0 / dn;
    const double hi = 0.5;
    for (std::size_t i = 0; i < m; ++i) {
        out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(m - 1)));
    }
    out.back() = hi;
    return out;
}

std::vector<std::vector<std::size_t>> cv_partition(std::size_t n, std::size_t folds, std::uint64_t seed) {
    if (folds < 2 || n < folds) {
        throw ArgumentError("cross-validation needs 2 <= folds <= n");
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{1});
    Engine engine = make_engine(seed, 0);
    std::shuffle(order.begin(), order.end(), engine);
    std::vector<std::vector<std::size_t>> sets(folds);
    for (std::size_t i = 0; i < n; ++i) {
        sets[i % folds].push_back(order[i]);
    }
    for (auto& s : sets) {
        std::sort(s.begin(), s.end());
    }
    return sets;
}

std::vector<double> cv_fold_predictions(const TimeSeries& x, const Kernel& k, double h,
                                        const std::vector<std::size_t>& held_out) {
    const LocalLinearSmoother train = training_smoother(x, k, membership(x.size(), held_out));
    std::vector<double> out;
    out.reserve(held_out.size());
    for (std::size_t j : held_out) {
        out.push_back(train.jackknife(x.design_point(j), h));
    }
    return out;
}

std::optional<double> best_bandwidth(const std::vector<CvEntry>& table, double above) {
    const CvEntry* best = nullptr;
    for (const CvEntry& e : table) {
        if (!e.feasible || !(e.bandwidth > above)) {
            continue;
        }
        if (best == nullptr) {
            best = &e;
            continue;
        }
        const double scale = std::max({1.0, std::abs(e.mse), std::abs(best->mse)});
        if (e.mse < best->mse - kTieTolerance * scale) {
            best = &e;
        } else if (std::abs(e.mse - best->mse) <= kTieTolerance * scale && e.bandwidth > best->bandwidth) {
            best = &e;
        }
    }
    if (best == nullptr) {
        return std::nullopt;
    }
    return best->bandwidth;
}

CvResult cross_validate_bandwidth(const TimeSeries& x, const Kernel& k, const CvConfig& cfg) {
    const std::size_t n = x.size();
    if (n < 4 * cfg.folds) {
        throw ArgumentError("cross-validation needs n >= 4 * folds");
    }
    const std::vector<double> candidates = bandwidth_candidates(n, cfg);
    const auto sets = cv_partition(n, cfg.folds, cfg.seed);

    std::vector<LocalLinearSmoother> trainers;
    trainers.reserve(sets.size());
    for (const auto& s : sets) {
        trainers.push_back(training_smoother(x, k, membership(n, s)));
    }

    std::vector<CvEntry> table(candidates.size());
    parallel_for(candidates.size(), [&](std::size_t c) {
        const double h = candidates[c];
        const double narrow = h / std::numbers::sqrt2;
        double sse = 0.0;
        bool feasible = true;
        for (std::size_t f = 0; f < sets.size() && feasible; ++f) {
            for (std::size_t j : sets[f]) {
                const double t = x.design_point(j);
                if (trainers[f].count_in_window(t, narrow) < kMinNarrowWindowPoints) {
                    feasible = false;
                    break;
                }
                try {
                    const double r = x.at(j) - trainers[f].jackknife(t, h);
                    sse += r * r;
                } catch (const DegenerateWindow&) {
                    feasible = false;
                    break;
                }
            }
        }
        table[c] = CvEntry{h, feasible ? sse / (1.0 - h) : std::numeric_limits<double>::infinity(), feasible};
    });

    const auto best = best_bandwidth(table);
    if (!best) {
        throw NoFeasibleBandwidth("no bandwidth candidate is feasible on every fold");
    }
    return CvResult{*best, std::move(table)};
}

}  // namespace reldev
