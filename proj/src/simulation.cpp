#include "reldev/simulation.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>

#include "reldev/errors.hpp"
#include "reldev/io.hpp"
#include "reldev/parallel.hpp"
#include "reldev/quadrature.hpp"
#include "reldev/random.hpp"

namespace reldev {

MeanSpec MeanSpec::mu1(double a) {
    MeanSpec m;
    m.kind = Kind::Mu1;
    m.a = a;
    m.label = "mu1:" + nlohmann::json(a).dump();
    return m;
}

MeanSpec MeanSpec::mu2() {
    MeanSpec m;
    m.kind = Kind::Mu2;
    m.label = "mu2";
    return m;
}

MeanSpec MeanSpec::user_function(std::function<double(double)> f, std::string label) {
    if (!f) {
        throw ArgumentError("user mean needs a function");
    }
    MeanSpec m;
    m.kind = Kind::User;
    m.user = std::move(f);
    m.label = std::move(label);
    return m;
}

std::vector<double> MeanSpec::kinks() const {
    switch (kind) {
        case Kind::Mu1:
            return {0.25};
        case Kind::Mu2:
            return {0.25, 0.75};
        case Kind::User:
            break;
    }
    return {};
}

double eval_mean(const MeanSpec& m, double x) {
    switch (m.kind) {
        case MeanSpec::Kind::Mu1: {
            const double base = 10.0 + 0.5 * std::sin(8.0 * std::numbers::pi * x);
            return x > 0.25 ? base + m.a * (x - 0.25) * (x - 0.25) : base;
        }
        case MeanSpec::Kind::Mu2:
            if (x <= 0.25) {
                return 9.0;
            }
            if (x <= 0.75) {
                return 10.5 - 1.5 * std::sin(2.0 * std::numbers::pi * x);
            }
            return 12.0;
        case MeanSpec::Kind::User:
            break;
    }
    return m.user(x);
}

VarianceSpec VarianceSpec::standard(int index) {
    if (index < 0 || index > 3) {
        throw ArgumentError("variance profile index must be 0..3");
    }
    VarianceSpec v;
    v.index = index;
    v.label = "sigma" + std::to_string(index);
    return v;
}

VarianceSpec VarianceSpec::user_function(std::function<double(double)> f, std::string label) {
    VarianceSpec v;
    v.user = std::move(f);
    v.label = std::move(label);
    return v;
}

double eval_variance(const VarianceSpec& v, double t) {
    if (v.user) {
        const double s2 = v.user(t);
        if (!(s2 >= 0.0)) {
            throw ArgumentError("variance function returned a negative value");
        }
        return s2;
    }
    switch (v.index) {
        case 0:
            return 1.0;
        case 1:
            return 0.5 + t;
        case 2:
            return 1.0 - 0.5 * std::cos(2.0 * std::numbers::pi * t);
        case 3:
            return t >= 0.5 ? 1.5 : 0.5;
        default:
            throw ArgumentError("variance profile index must be 0..3");
    }
}

std::vector<double> gen_errors(const ErrorSpec& e, std::size_t n) {
    if (n < 1) {
        throw ArgumentError("need n >= 1");
    }
    Engine engine = make_engine(e.seed, 0);
    std::normal_distribution<double> normal;
    const double dn = static_cast<double>(n);
    std::vector<double> out(n);
    switch (e.kind) {
        case ErrorSpec::Kind::IID:
            for (std::size_t i = 1; i <= n; ++i) {
                out[i - 1] = std::sqrt(eval_variance(e.variance, static_cast<double>(i) / dn)) * normal(engine);
            }
            break;
        case ErrorSpec::Kind::MA: {
            double previous = normal(engine);
            for (std::size_t i = 1; i <= n; ++i) {
                const double eta = normal(engine);
                out[i - 1] = std::sqrt(eval_variance(e.variance, static_cast<double>(i) / dn)) *
                             (eta + 0.5 * previous) / 2.0;
                previous = eta;
            }
            break;
        }
        case ErrorSpec::Kind::AR: {
            double eps = 0.0;
            const double s0 = std::sqrt(eval_variance(e.variance, 0.0));
            for (std::size_t b = 0; b < e.burn_in; ++b) {
                eps = s0 * (normal(engine) + 0.5 * eps) / 2.0;
            }
            for (std::size_t i = 1; i <= n; ++i) {
                eps = std::sqrt(eval_variance(e.variance, static_cast<double>(i) / dn)) *
                      (normal(engine) + 0.5 * eps) / 2.0;
                out[i - 1] = eps;
            }
            break;
        }
    }
    return out;
}

TimeSeries simulate_series(const MeanSpec& m, const ErrorSpec& e, std::size_t n) {
    std::vector<double> x = gen_errors(e, n);
    const double dn = static_cast<double>(n);
    for (std::size_t i = 1; i <= n; ++i) {
        x[i - 1] += eval_mean(m, static_cast<double>(i) / dn);
    }
    return TimeSeries(std::move(x));
}

double true_benchmark(const BenchmarkFunctional& g, const MeanSpec& m) {
    const auto mu = [&m](double x) { return eval_mean(m, x); };
    const std::vector<double> kinks = m.kinks();
    if (const auto* c = std::get_if<ConstantBenchmark>(&g.kind())) {
        return c->value;
    }
    if (const auto* w = std::get_if<WindowAverageBenchmark>(&g.kind())) {
        return integrate_piecewise(mu, w->t0, w->t1, kinks) / (w->t1 - w->t0);
    }
    if (const auto* p = std::get_if<PointEvalBenchmark>(&g.kind())) {
        return mu(p->t);
    }
    const auto& l = std::get<GeneralLinearBenchmark>(g.kind());
    return integrate_piecewise([&](double x) { return mu(x) * l.representer(x); }, 0.0, 1.0, kinks);
}

double true_distance_sq(const MeanSpec& m, const BenchmarkFunctional& g, const TauMeasure& tau) {
    const double gm = true_benchmark(g, m);
    const std::vector<double> kinks = m.kinks();
    return tau_integrate(
        tau,
        [&](double x) {
            const double d = eval_mean(m, x) - gm;
            return d * d;
        },
        kinks);
}

namespace {

void reject_unknown(const nlohmann::json& j, const std::set<std::string>& known, const std::string& where) {
    if (!j.is_object()) {
        throw ConfigError(where + " must be a JSON object");
    }
    for (const auto& [key, value] : j.items()) {
        if (!known.contains(key)) {
            throw ConfigError("unknown field '" + key + "' in " + where);
        }
    }
}

MeanSpec mean_from_json(const nlohmann::json& j) {
    reject_unknown(j, {"kind", "a", "file"}, "mean");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "mu1") {
        return MeanSpec::mu1(j.at("a").get<double>());
    }
    if (kind == "mu2") {
        return MeanSpec::mu2();
    }
    if (kind == "table") {
        const std::string file = j.at("file").get<std::string>();
        std::vector<double> xs;
        std::vector<double> ys;
        for (const auto& r : read_numeric_table(file)) {
            if (r.size() < 2) {
                throw ConfigError("mean table needs two columns x,mu");
            }
            xs.push_back(r[0]);
            ys.push_back(r[1]);
        }
        return MeanSpec::user_function(interpolate_table(std::move(xs), std::move(ys)), "table:" + file);
    }
    throw ConfigError("unknown mean kind '" + kind + "'");
}

ErrorSpec errors_from_json(const nlohmann::json& j) {
    reject_unknown(j, {"kind", "variance", "burn_in"}, "errors");
    ErrorSpec e;
    const std::string kind = j.value("kind", std::string("iid"));
    if (kind == "iid") {
        e.kind = ErrorSpec::Kind::IID;
    } else if (kind == "ma") {
        e.kind = ErrorSpec::Kind::MA;
    } else if (kind == "ar") {
        e.kind = ErrorSpec::Kind::AR;
    } else {
        throw ConfigError("unknown error kind '" + kind + "'");
    }
    e.variance = VarianceSpec::standard(j.value("variance", 0));
    e.burn_in = j.value("burn_in", std::size_t{100});
    return e;
}

BandwidthGrid grid_from_string(const std::string& s) {
    if (s == "auto") {
        return BandwidthGrid::Auto;
    }
    if (s == "full") {
        return BandwidthGrid::Full;
    }
    if (s == "thinned") {
        return BandwidthGrid::Thinned;
    }
    throw ConfigError("unknown bandwidth grid '" + s + "'");
}

}  // namespace

Scenario scenario_from_json(const nlohmann::json& j) {
    reject_unknown(j,
                   {"id", "n", "mean", "errors", "benchmark", "tau", "nu", "delta", "alpha", "block", "block_cover",
                    "bandwidth", "cv", "method", "lrv", "law"},
                   "scenario");
    Scenario s;
    s.source = j;
    try {
        s.id = j.value("id", s.id);
        s.n = j.value("n", s.n);
        if (j.contains("mean")) {
            s.mean = mean_from_json(j.at("mean"));
        }
        if (j.contains("errors")) {
            s.errors = errors_from_json(j.at("errors"));
        }
        s.method = j.value("method", s.method);
        if (s.method != "sn" && s.method != "lrv") {
            throw ConfigError("method must be sn or lrv");
        }
        TestConfig& t = s.test;
        if (j.contains("benchmark")) {
            t.benchmark = parse_benchmark(j.at("benchmark").get<std::string>());
        }
        if (j.contains("tau")) {
            t.tau = parse_tau(j.at("tau").get<std::string>());
        }
        if (j.contains("nu")) {
            t.nu = parse_nu(j.at("nu").get<std::string>());
        }
        t.delta = j.value("delta", t.delta);
        t.alpha = j.value("alpha", t.alpha);
        t.block_width = j.value("block", t.block_width);
        t.min_block_cover = j.value("block_cover", t.min_block_cover);
        t.cv.policy = BandwidthGrid::Thinned;
        if (j.contains("bandwidth")) {
            const auto& b = j.at("bandwidth");
            if (b.is_number()) {
                t.bandwidth = b.get<double>();
            } else if (b.get<std::string>() != "cv") {
                throw ConfigError("bandwidth must be a number or \"cv\"");
            }
        }
        if (j.contains("cv")) {
            const auto& c = j.at("cv");
            reject_unknown(c, {"folds", "grid", "max_candidates"}, "cv");
            t.cv.folds = c.value("folds", t.cv.folds);
            t.cv.max_candidates = c.value("max_candidates", t.cv.max_candidates);
            if (c.contains("grid")) {
                t.cv.policy = grid_from_string(c.at("grid").get<std::string>());
            }
        }
        if (j.contains("lrv")) {
            const auto& l = j.at("lrv");
            reject_unknown(l, {"window", "sub_block", "t_points"}, "lrv");
            s.lrv.window = l.value("window", s.lrv.window);
            s.lrv.sub_block = l.value("sub_block", s.lrv.sub_block);
            s.lrv.t_points = l.value("t_points", s.lrv.t_points);
        }
        if (j.contains("law")) {
            const auto& l = j.at("law");
            reject_unknown(l, {"grid", "paths", "seed", "cache"}, "law");
            t.law_grid_size = l.value("grid", t.law_grid_size);
            t.law_paths = l.value("paths", t.law_paths);
            t.law_seed = l.value("seed", t.law_seed);
            t.law_cache = l.value("cache", std::string());
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("scenario: ") + e.what());
    }
    return s;
}

Scenario load_scenario(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) {
        throw ConfigError("cannot open scenario " + file.string());
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("scenario " + file.string() + ": " + e.what());
    }
    if (!j.contains("id")) {
        j["id"] = file.stem().string();
    }
    return scenario_from_json(j);
}

ExperimentResult rejection_rate_experiment(const Scenario& s, std::size_t reps, std::uint64_t seed,
                                           const RatioLaw& law) {
    if (reps < 1) {
        throw ArgumentError("need at least one replication");
    }
    const auto start = std::chrono::steady_clock::now();
    ExperimentResult result;
    result.reps = reps;
    result.log.resize(reps);
    parallel_for(reps, [&](std::size_t r) {
        ReplicationLog& entry = result.log[r];
        entry.rep = r;
        entry.seed = derive_seed(seed, r);
        try {
            ErrorSpec errors = s.errors;
            errors.seed = entry.seed;
            const TimeSeries x = simulate_series(s.mean, errors, s.n);
            TestConfig cfg = s.test;
            cfg.cv.seed = derive_seed(entry.seed, 1);
            const TestOutcome out = s.method == "lrv" ? run_lrv_test(x, cfg, s.lrv) : run_test(x, cfg, law);
            entry.ok = true;
            entry.reject = out.reject;
            entry.statistic = out.statistic;
            entry.bandwidth = out.bandwidth;
        } catch (const Error& e) {
            entry.error = e.what();
        }
    });
    for (const ReplicationLog& e : result.log) {
        if (!e.ok) {
            ++result.failures;
        } else if (e.reject) {
            ++result.rejections;
        }
    }
    if (result.failures * 100 > reps) {
        throw NumericError("experiment " + s.id + ": " + std::to_string(result.failures) + " of " +
                           std::to_string(reps) + " replications failed; first error: " +
                           std::find_if(result.log.begin(), result.log.end(), [](const auto& e) {
                               return !e.ok;
                           })->error);
    }
    const std::size_t ok = reps - result.failures;
    result.rate = static_cast<double>(result.rejections) / static_cast<double>(ok);
    result.se = std::sqrt(result.rate * (1.0 - result.rate) / static_cast<double>(ok));
    result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

ExperimentResult rejection_rate_experiment(const Scenario& s, std::size_t reps, std::uint64_t seed) {
    if (s.method == "lrv") {
        return rejection_rate_experiment(s, reps, seed, RatioLaw({1.0}));
    }
    const auto law = cached_ratio_law(s.test.sampler(), s.test.law_cache);
    return rejection_rate_experiment(s, reps, seed, *law);
}

void append_result_csv(const std::filesystem::path& file, const Scenario& s, const ExperimentResult& r,
                       std::uint64_t seed) {
    const bool fresh = !std::filesystem::exists(file) || std::filesystem::file_size(file) == 0;
    std::ofstream out(file, std::ios::app);
    if (!out) {
        throw DataError("cannot write " + file.string());
    }
    if (fresh) {
        out << "scenario_id,method,n,delta,rate,se,reps,seed,wall_seconds\n";
    }
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s,%s,%zu,%.17g,%.17g,%.17g,%zu,%llu,%.3f\n", s.id.c_str(), s.method.c_str(), s.n,
                  s.test.delta, r.rate, r.se, r.reps, static_cast<unsigned long long>(seed), r.wall_seconds);
    out << buf;
}

}  // namespace reldev
