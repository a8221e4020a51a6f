// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
//   acceptance [--only 1,6,7,8] [--scenarios DIR]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "properties.hpp"
#include "reldev/limit_law.hpp"
#include "reldev/simulation.hpp"

using namespace reldev;

namespace {

// Pinned settings.
constexpr std::uint64_t kSeed = 2026;
constexpr std::size_t kReps = 1000;
constexpr std::size_t kSmokeReps = 200;

constexpr double kDistanceTarget = 1.392;
constexpr double kDistanceTol = 1e-3;
constexpr double kDistanceSeconds = 1.0;

constexpr double kWindowTarget = 0.039;
constexpr double kWindowTol = 0.025;
constexpr double kWindowSmokeTol = 0.04;
constexpr double kPowerFloor = 0.65;
constexpr double kMu2Target = 0.051;
constexpr double kMu2Tol = 0.025;
constexpr double kLrvCeiling = 0.02;
constexpr double kSnLow = 0.005;
constexpr double kSnHigh = 0.06;

constexpr double kMedianTol = 0.02;
constexpr double kSeedRelTol = 0.005;
constexpr double kGridRelTol = 0.01;

struct Line {
    bool pass;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string pct(double v) { return fmt("%.1f%%", 100.0 * v); }

class Runner {
public:
    explicit Runner(std::filesystem::path dir) : dir_(std::move(dir)) {}

    ExperimentResult rate(const std::string& id, std::size_t reps) {
        const Scenario s = load_scenario(dir_ / (id + ".json"));
        const auto law = cached_ratio_law(s.test.sampler(), s.test.law_cache);
        ExperimentResult r = rejection_rate_experiment(s, reps, kSeed, *law);
        std::fprintf(stderr, "  %-18s reps=%zu rate=%s se=%s failures=%zu (%.1f s)\n", id.c_str(), r.reps,
                     pct(r.rate).c_str(), pct(r.se).c_str(), r.failures, r.wall_seconds);
        return r;
    }

    const ExperimentResult& cached(const std::string& id) {
        auto it = memo_.find(id);
        if (it == memo_.end()) {
            it = memo_.emplace(id, rate(id, kReps)).first;
        }
        return it->second;
    }

private:
    std::filesystem::path dir_;
    std::map<std::string, ExperimentResult> memo_;
};

Line distance_fidelity() {
    const auto t0 = Clock::now();
    const double d = std::sqrt(
        true_distance_sq(MeanSpec::mu2(), BenchmarkFunctional::constant(10.0), TauMeasure::lebesgue()));
    const double secs = seconds_since(t0);
    return {std::abs(d - kDistanceTarget) <= kDistanceTol && secs < kDistanceSeconds,
            "d0=" + fmt("%.6f", d) + " target " + fmt("%.3f", kDistanceTarget) + "+-" + fmt("%g", kDistanceTol) +
                " in " + fmt("%.4f", secs) + " s"};
}

Line window_boundary(Runner& run) {
    const ExperimentResult smoke = run.rate("mu1_window_a143", kSmokeReps);
    const ExperimentResult& full = run.cached("mu1_window_a143");
    const bool smoke_ok = std::abs(smoke.rate - kWindowTarget) <= kWindowSmokeTol;
    const bool full_ok = std::abs(full.rate - kWindowTarget) <= kWindowTol;
    return {smoke_ok && full_ok, "rate=" + pct(full.rate) + " (1000 reps), smoke=" + pct(smoke.rate) +
                                     " (200 reps), target " + pct(kWindowTarget) + "+-2.5pp / +-4pp"};
}

Line window_power(Runner& run) {
    std::vector<double> rates;
    std::string detail;
    for (const char* id : {"mu1_window_a143", "mu1_window_a186", "mu1_window_a226", "mu1_window_a264"}) {
        rates.push_back(run.cached(id).rate);
        detail += (detail.empty() ? "" : " < ") + pct(rates.back());
    }
    bool monotone = true;
    for (std::size_t i = 1; i < rates.size(); ++i) {
        monotone = monotone && rates[i] > rates[i - 1];
    }
    return {monotone && rates.back() > kPowerFloor, "a=1.43..2.64: " + detail + ", need last > " + pct(kPowerFloor)};
}

Line mu2_boundary(Runner& run) {
    const ExperimentResult& r = run.cached("mu2_boundary");
    return {std::abs(r.rate - kMu2Target) <= kMu2Tol,
            "rate=" + pct(r.rate) + " target " + pct(kMu2Target) + "+-2.5pp"};
}

Line lrv_conservatism(Runner& run) {
    const double lrv = run.cached("mu1_mean_a257_lrv").rate;
    const double sn = run.cached("mu1_mean_a257_sn").rate;
    return {lrv <= kLrvCeiling && sn >= kSnLow && sn <= kSnHigh,
            "lrv=" + pct(lrv) + " (need <= " + pct(kLrvCeiling) + "), sn=" + pct(sn) + " (need " + pct(kSnLow) +
                ".." + pct(kSnHigh) + ")"};
}

Line limit_law() {
    RatioSampler base;
    const std::vector<double> samples = simulate_ratio_samples(base);
    const double median = quantile(samples, 0.5);

    RatioSampler other = base;
    other.seed = base.seed ^ 0x9e3779b97f4a7c15ULL;
    RatioSampler fine = base;
    fine.grid_size = 4000;
    const double q = make_ratio_law(base).critical_value(0.05);
    const double q_other = make_ratio_law(other).critical_value(0.05);
    const double q_fine = make_ratio_law(fine).critical_value(0.05);
    const double seed_rel = std::abs(q - q_other) / q;
    const double grid_rel = std::abs(q - q_fine) / q;
    return {std::abs(median) < kMedianTol && seed_rel <= kSeedRelTol && grid_rel <= kGridRelTol,
            "median=" + fmt("%.4f", median) + " q95=" + fmt("%.5f", q) + " other seed " + fmt("%.5f", q_other) + " (" +
                fmt("%.3f%%", 100 * seed_rel) + ") grid 4000 " + fmt("%.5f", q_fine) + " (" +
                fmt("%.3f%%", 100 * grid_rel) + ")"};
}

Line property_suite() {
    const props::PropertyResult results[] = {
        props::affine_exactness(kSeed, 200),
        props::quadratic_bias(),
        props::permutation_bijectivity(kSeed, 2000),
        props::normal_equation_oracle(kSeed, 2000),
    };
    bool ok = true;
    std::string detail;
    for (const auto& r : results) {
        ok = ok && r.ok();
        detail += (detail.empty() ? "" : "; ") + r.name + " " + std::to_string(r.failures) + "/" +
                  std::to_string(r.cases);
    }
    return {ok, "failures/cases: " + detail};
}

Line fold_leakage() {
    const props::PropertyResult r = props::fold_leakage(kSeed, 500);
    return {r.ok(), std::to_string(r.failures) + " changed predictions in " + std::to_string(r.cases) + " perturbations"};
}

std::set<int> parse_only(const std::string& s) {
    std::set<int> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');) {
        out.insert(std::stoi(item));
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> only;
    std::filesystem::path dir = RELDEV_SCENARIO_DIR;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--only" && i + 1 < argc) {
            only = parse_only(argv[++i]);
        } else if (a == "--scenarios" && i + 1 < argc) {
            dir = argv[++i];
        } else {
            std::fprintf(stderr, "usage: acceptance [--only 1,2,...] [--scenarios DIR]\n");
            return 2;
        }
    }

    Runner run(dir);
    const std::vector<std::pair<std::string, std::function<Line()>>> criteria = {
        {"distance fidelity", distance_fidelity},
        {"boundary calibration, mu1 window benchmark", [&] { return window_boundary(run); }},
        {"power ordering, mu1 window benchmark", [&] { return window_power(run); }},
        {"boundary calibration, mu2 constant benchmark", [&] { return mu2_boundary(run); }},
        {"LRV-test conservatism, mu1 mean benchmark", [&] { return lrv_conservatism(run); }},
        {"limit-law determinism and symmetry", limit_law},
        {"estimator property suite", property_suite},
        {"cv fold leakage", fold_leakage},
    };

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!only.empty() && !only.count(id)) {
            continue;
        }
        const auto t0 = Clock::now();
        Line line;
        try {
            line = criteria[i].second();
        } catch (const std::exception& e) {
            line = {false, std::string("exception: ") + e.what()};
        }
        failed += !line.pass;
        std::printf("[%s] %d %s: %s (%.1f s)\n", line.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(),
                    line.detail.c_str(), seconds_since(t0));
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
