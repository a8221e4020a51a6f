#include "reldev/limit_law.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "reldev/errors.hpp"
#include "reldev/parallel.hpp"
#include "reldev/random.hpp"

namespace reldev {

namespace {

constexpr std::size_t kSummaryPoints = 1024;
constexpr std::size_t kTailPoints = 100;
constexpr std::uint64_t kRetryStride = std::uint64_t{1} << 40;
constexpr const char* kCacheFormat = "reldev-ratio-law";
constexpr int kCacheVersion = 1;

struct PathPlan {
    // Discrete: node index and weight per support point.
    std::vector<std::size_t> nodes;
    std::vector<double> weights;
    // Continuous: first node of the trapezoid over [zeta, 1].
    std::size_t first_node = 0;
    bool continuous = false;
    double snap_distance = 0.0;
};

PathPlan plan_paths(const RatioSampler& s) {
    PathPlan plan;
    const double g = static_cast<double>(s.grid_size);
    if (s.nu.kind() == NuMeasure::Kind::Discrete) {
        for (std::size_t j = 0; j < s.nu.points().size(); ++j) {
            const double lambda = s.nu.points()[j];
            auto node = static_cast<std::size_t>(std::llround(lambda * g));
            node = std::clamp<std::size_t>(node, 1, s.grid_size - 1);
            plan.snap_distance = std::max(plan.snap_distance, std::abs(static_cast<double>(node) / g - lambda));
            plan.nodes.push_back(node);
            plan.weights.push_back(s.nu.weights()[j]);
        }
    } else {
        plan.continuous = true;
        plan.first_node = static_cast<std::size_t>(std::ceil(s.nu.zeta() * g - 1e-9));
        plan.snap_distance = static_cast<double>(plan.first_node) / g - s.nu.zeta();
    }
    return plan;
}

// Denominator of R for one path stored as W(k / G), k = 0..G.
double path_denominator(const PathPlan& plan, std::span<const double> w, std::size_t grid, double zeta) {
    const double g = static_cast<double>(grid);
    const double w1 = w[grid];
    if (!plan.continuous) {
        double total = 0.0;
        for (std::size_t j = 0; j < plan.nodes.size(); ++j) {
            const double lambda = static_cast<double>(plan.nodes[j]) / g;
            total += plan.weights[j] * std::abs(w[plan.nodes[j]] - lambda * w1);
        }
        return total;
    }
    double total = 0.0;
    double previous = std::abs(w[plan.first_node] - static_cast<double>(plan.first_node) / g * w1);
    for (std::size_t k = plan.first_node + 1; k <= grid; ++k) {
        const double current = std::abs(w[k] - static_cast<double>(k) / g * w1);
        total += 0.5 * (previous + current) / g;
        previous = current;
    }
    return total / (1.0 - zeta);
}

double normal_upper_tail(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

std::vector<std::size_t> summary_ranks(std::size_t count) {
    std::vector<std::size_t> ranks;
    ranks.reserve(kSummaryPoints);
    for (std::size_t k = 0; k < kSummaryPoints; ++k) {
        const double pos = static_cast<double>(k) * static_cast<double>(count - 1) / (kSummaryPoints - 1);
        ranks.push_back(static_cast<std::size_t>(std::llround(pos)));
    }
    return ranks;
}

nlohmann::json summarize(std::vector<double> values, bool upper_tail) {
    std::sort(values.begin(), values.end());
    nlohmann::json order = nlohmann::json::array();
    for (std::size_t r : summary_ranks(values.size())) {
        order.push_back(values[r]);
    }
    nlohmann::json tail = nlohmann::json::array();
    const std::size_t take = std::min(kTailPoints, values.size());
    for (std::size_t i = 0; i < take; ++i) {
        tail.push_back(upper_tail ? values[values.size() - take + i] : values[i]);
    }
    return {{"order_statistics", order}, {upper_tail ? "upper_tail" : "lower_tail", tail}};
}

}  // namespace

void RatioSampler::validate() const {
    if (grid_size < 100) {
        throw ArgumentError("ratio sampler grid_size must be at least 100");
    }
    if (n_paths == 0) {
        throw ArgumentError("ratio sampler needs at least one path");
    }
}

std::string RatioSampler::fingerprint() const {
    std::ostringstream os;
    os << "v" << kCacheVersion << '|' << nu.fingerprint() << "|grid=" << grid_size << "|paths=" << n_paths
       << "|seed=" << seed;
    return os.str();
}

std::vector<double> RatioDraws::ratios() const {
    std::vector<double> out(numerators.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = numerators[i] / denominators[i];
    }
    return out;
}

RatioDraws simulate_ratio_draws(const RatioSampler& s) {
    s.validate();
    const PathPlan plan = plan_paths(s);
    RatioDraws draws;
    draws.numerators.resize(s.n_paths);
    draws.denominators.resize(s.n_paths);
    draws.snap_distance = plan.snap_distance;

    const std::size_t grid = s.grid_size;
    const double step_sd = 1.0 / std::sqrt(static_cast<double>(grid));
    const std::size_t chunks = std::min<std::size_t>(s.n_paths, 64 * worker_count());
    std::vector<std::size_t> retries(chunks, 0);

    parallel_for(chunks, [&](std::size_t chunk) {
        const std::size_t begin = s.n_paths * chunk / chunks;
        const std::size_t end = s.n_paths * (chunk + 1) / chunks;
        std::vector<double> w(grid + 1, 0.0);
        for (std::size_t path = begin; path < end; ++path) {
            for (std::uint64_t attempt = 0;; ++attempt) {
                Engine engine = make_engine(s.seed, path + attempt * kRetryStride);
                std::normal_distribution<double> normal(0.0, step_sd);
                for (std::size_t k = 1; k <= grid; ++k) {
                    w[k] = w[k - 1] + normal(engine);
                }
                const double denominator = path_denominator(plan, w, grid, s.nu.zeta());
                if (denominator > 0.0) {
                    draws.numerators[path] = w[grid];
                    draws.denominators[path] = denominator;
                    break;
                }
                ++retries[chunk];
            }
        }
    });
    for (std::size_t r : retries) {
        draws.resampled += r;
    }
    return draws;
}

std::vector<double> simulate_ratio_samples(const RatioSampler& s) { return simulate_ratio_draws(s).ratios(); }

double quantile(std::span<const double> samples, double p) {
    if (samples.empty()) {
        throw ArgumentError("quantile of an empty sample");
    }
    if (!(p > 0.0 && p <= 1.0)) {
        throw ArgumentError("quantile level must lie in (0, 1]");
    }
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const double h = static_cast<double>(sorted.size() - 1) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size()) {
        return sorted.back();
    }
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

double p_value(std::span<const double> samples, double t) {
    if (samples.empty()) {
        throw ArgumentError("p-value from an empty sample");
    }
    if (t == std::numeric_limits<double>::infinity()) {
        return 0.0;
    }
    if (t == -std::numeric_limits<double>::infinity()) {
        return 1.0;
    }
    const auto above = std::count_if(samples.begin(), samples.end(), [t](double v) { return v > t; });
    return static_cast<double>(above) / static_cast<double>(samples.size());
}

struct RatioLaw::Memo {
    std::mutex mutex;
    std::map<double, double> critical_values;
};

RatioLaw::RatioLaw(std::vector<double> denominators, std::string fingerprint)
    : denominators_(std::move(denominators)), fingerprint_(std::move(fingerprint)), memo_(std::make_shared<Memo>()) {
    if (denominators_.empty()) {
        throw ArgumentError("ratio law needs at least one denominator");
    }
    for (double v : denominators_) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw ArgumentError("ratio law denominators must be positive and finite");
        }
    }
    std::sort(denominators_.begin(), denominators_.end());
}

double RatioLaw::exceedance(double t) const {
    if (std::isnan(t)) {
        throw ArgumentError("exceedance of NaN");
    }
    if (t == std::numeric_limits<double>::infinity()) {
        return 0.0;
    }
    if (t == -std::numeric_limits<double>::infinity()) {
        return 1.0;
    }
    double total = 0.0;
    for (double v : denominators_) {
        total += normal_upper_tail(t * v);
    }
    return total / static_cast<double>(denominators_.size());
}

double RatioLaw::cdf(double t) const { return 1.0 - exceedance(t); }

double RatioLaw::critical_value(double alpha) const {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ArgumentError("alpha must lie in (0, 1)");
    }
    {
        std::lock_guard<std::mutex> lock(memo_->mutex);
        if (auto it = memo_->critical_values.find(alpha); it != memo_->critical_values.end()) {
            return it->second;
        }
    }
    double lo = -1.0;
    double hi = 1.0;
    while (exceedance(hi) > alpha) {
        lo = hi;
        hi *= 2.0;
    }
    while (exceedance(lo) < alpha) {
        hi = lo;
        lo *= 2.0;
    }
    for (int iter = 0; iter < 200 && hi - lo > 1e-12 * std::max(1.0, std::abs(hi)); ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (exceedance(mid) > alpha) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double q = 0.5 * (lo + hi);
    std::lock_guard<std::mutex> lock(memo_->mutex);
    memo_->critical_values.emplace(alpha, q);
    return q;
}

double RatioLaw::quantile(double p) const {
    if (!(p > 0.0 && p < 1.0)) {
        throw ArgumentError("quantile level must lie in (0, 1)");
    }
    return critical_value(1.0 - p);
}

RatioLaw make_ratio_law(const RatioSampler& s) {
    RatioDraws draws = simulate_ratio_draws(s);
    return RatioLaw(std::move(draws.denominators), s.fingerprint());
}

void write_law_cache(const std::filesystem::path& file, const RatioSampler& s, const RatioDraws& draws) {
    const RatioLaw law(draws.denominators, s.fingerprint());
    nlohmann::json quantiles = nlohmann::json::object();
    for (double alpha : {0.10, 0.05, 0.025, 0.01}) {
        std::ostringstream key;
        key << 1.0 - alpha;
        quantiles[key.str()] = law.critical_value(alpha);
    }
    nlohmann::json doc = {
        {"format", kCacheFormat},
        {"version", kCacheVersion},
        {"key",
         {{"fingerprint", s.fingerprint()},
          {"nu", s.nu.fingerprint()},
          {"zeta", s.nu.zeta()},
          {"grid_size", s.grid_size},
          {"n_paths", s.n_paths},
          {"seed", s.seed}}},
        {"n_samples", draws.denominators.size()},
        {"resampled", draws.resampled},
        {"snap_distance", draws.snap_distance},
        {"quantiles", quantiles},
        {"ratio", summarize(draws.ratios(), true)},
        {"denominator", summarize(draws.denominators, false)},
    };
    std::ofstream out(file);
    if (!out) {
        throw ConfigError("cannot write quantile cache " + file.string());
    }
    out << doc.dump(1) << '\n';
}

RatioLaw read_law_cache(const std::filesystem::path& file, const RatioSampler& s) {
    std::ifstream in(file);
    if (!in) {
        throw ConfigError("cannot read quantile cache " + file.string());
    }
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("malformed quantile cache " + file.string() + ": " + e.what());
    }
    if (doc.value("format", "") != kCacheFormat || doc.value("version", 0) != kCacheVersion) {
        throw ConfigError("unsupported quantile cache format in " + file.string());
    }
    if (doc["key"].value("fingerprint", "") != s.fingerprint()) {
        throw ConfigError("quantile cache " + file.string() + " was built for a different sampler");
    }
    const auto count = doc.at("n_samples").get<std::size_t>();
    const auto& den = doc.at("denominator");
    const auto order = den.at("order_statistics").get<std::vector<double>>();
    const auto tail = den.at("lower_tail").get<std::vector<double>>();
    if (count < 2 || order.size() != kSummaryPoints) {
        throw ConfigError("quantile cache " + file.string() + " has an unexpected layout");
    }

    // Knots of the denominator quantile function: (rank, value).
    std::map<std::size_t, double> knots;
    const std::vector<std::size_t> ranks = summary_ranks(count);
    for (std::size_t k = 0; k < ranks.size(); ++k) {
        knots[ranks[k]] = order[k];
    }
    for (std::size_t i = 0; i < tail.size(); ++i) {
        knots[i] = tail[i];
    }
    std::vector<double> rank_axis;
    std::vector<double> value_axis;
    for (const auto& [rank, value] : knots) {
        rank_axis.push_back(static_cast<double>(rank));
        value_axis.push_back(value);
    }

    const std::size_t m = std::min<std::size_t>(count, 16384);
    std::vector<double> reconstructed(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double rank = (static_cast<double>(i) + 0.5) / static_cast<double>(m) * static_cast<double>(count - 1);
        auto hi = std::upper_bound(rank_axis.begin(), rank_axis.end(), rank);
        if (hi == rank_axis.end()) {
            reconstructed[i] = value_axis.back();
            continue;
        }
        const auto j = static_cast<std::size_t>(hi - rank_axis.begin());
        const double frac = (rank - rank_axis[j - 1]) / (rank_axis[j] - rank_axis[j - 1]);
        reconstructed[i] = value_axis[j - 1] + frac * (value_axis[j] - value_axis[j - 1]);
    }
    return RatioLaw(std::move(reconstructed), s.fingerprint());
}

std::shared_ptr<const RatioLaw> cached_ratio_law(const RatioSampler& s, const std::filesystem::path& cache_file) {
    static std::mutex mutex;
    static std::map<std::string, std::shared_ptr<const RatioLaw>> memo;

    const std::string key = s.fingerprint();
    std::lock_guard<std::mutex> lock(mutex);
    if (auto it = memo.find(key); it != memo.end()) {
        return it->second;
    }
    std::shared_ptr<const RatioLaw> law;
    if (!cache_file.empty() && std::filesystem::exists(cache_file)) {
        try {
            law = std::make_shared<const RatioLaw>(read_law_cache(cache_file, s));
        } catch (const ConfigError&) {
            law.reset();
        }
    }
    if (!law) {
        RatioDraws draws = simulate_ratio_draws(s);
        if (!cache_file.empty()) {
            write_law_cache(cache_file, s, draws);
        }
        law = std::make_shared<const RatioLaw>(std::move(draws.denominators), key);
    }
    memo.emplace(key, law);
    return law;
}

}  // namespace reldev
