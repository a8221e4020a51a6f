#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "reldev/benchmarks.hpp"
#include "reldev/estimation.hpp"
#include "reldev/lrv.hpp"
#include "reldev/measures.hpp"
#include "reldev/selfnorm.hpp"

namespace reldev {

struct MeanSpec {
    enum class Kind { Mu1, Mu2, User };

    Kind kind = Kind::Mu2;
    double a = 0.0;
    std::function<double(double)> user;
    std::string label;

    /// 10 + sin(8 pi x) / 2 + a (x - 1/4)^2 1(x > 1/4).
    static MeanSpec mu1(double a);
    /// 9 on [0, 1/4], 10.5 - 1.5 sin(2 pi x) on (1/4, 3/4], 12 above.
    static MeanSpec mu2();
    static MeanSpec user_function(std::function<double(double)> f, std::string label = "user");

    /// Points where the mean is not smooth.
    std::vector<double> kinks() const;
};

double eval_mean(const MeanSpec& m, double x);

struct VarianceSpec {
    /// 0..3 for the built-in profiles; ignored when `user` is set.
    int index = 0;
    std::function<double(double)> user;
    std::string label;

    static VarianceSpec standard(int index);
    static VarianceSpec user_function(std::function<double(double)> f, std::string label = "user");
};

/// sigma~^2(t): 1, 1/2 + t, 1 - cos(2 pi t) / 2, 1/2 + 1(t >= 1/2).
double eval_variance(const VarianceSpec& v, double t);

struct ErrorSpec {
    enum class Kind { IID, MA, AR };

    Kind kind = Kind::IID;
    VarianceSpec variance;
    std::uint64_t seed = 0;
    /// AR only: steps run from eps = 0 at the t = 0 variance before index 1.
    std::size_t burn_in = 100;
};

/// eps_1..eps_n. IID: s(i/n) eta_i; MA: s(i/n)(eta_i + eta_{i-1}/2)/2;
/// AR: s(i/n)(eta_i + eps_{i-1}/2)/2, with s = sqrt(sigma~^2).
std::vector<double> gen_errors(const ErrorSpec& e, std::size_t n);

/// mu(i/n) + eps_i.
TimeSeries simulate_series(const MeanSpec& m, const ErrorSpec& e, std::size_t n);

/// Population value g(mu).
double true_benchmark(const BenchmarkFunctional& g, const MeanSpec& m);
/// d_0^2 = integral of (mu - g(mu))^2 against tau.
double true_distance_sq(const MeanSpec& m, const BenchmarkFunctional& g, const TauMeasure& tau);

struct Scenario {
    std::string id = "scenario";
    std::size_t n = 500;
    MeanSpec mean;
    ErrorSpec errors;
    std::string method = "sn";
    TestConfig test;
    LrvConfig lrv;
    /// Original JSON description, echoed into outputs.
    nlohmann::json source;
};

/// Reads the scenario fields (id, n, mean, errors, benchmark, tau, nu, delta,
/// alpha, block, bandwidth, cv, method, lrv, law). Missing fields keep their
/// defaults; unknown fields are a ConfigError.
Scenario scenario_from_json(const nlohmann::json& j);
Scenario load_scenario(const std::filesystem::path& file);

struct ReplicationLog {
    std::size_t rep = 0;
    std::uint64_t seed = 0;
    bool ok = false;
    bool reject = false;
    double statistic = 0.0;
    double bandwidth = 0.0;
    std::string error;
};

struct ExperimentResult {
    double rate = 0.0;
    double se = 0.0;
    std::size_t reps = 0;
    std::size_t rejections = 0;
    std::size_t failures = 0;
    double wall_seconds = 0.0;
    std::vector<ReplicationLog> log;
};

/// Runs the scenario's test on `reps` datasets, replication r drawing its data
/// and CV split from streams derived from (seed, r). The rate is taken over the
/// successful replications. Throws NumericError when more than 1% of the
/// replications fail.
ExperimentResult rejection_rate_experiment(const Scenario& s, std::size_t reps, std::uint64_t seed);
/// Same with an explicit limit law for the self-normalized method.
ExperimentResult rejection_rate_experiment(const Scenario& s, std::size_t reps, std::uint64_t seed,
                                           const RatioLaw& law);

/// Appends one row (scenario id, method, n, delta, rate, se, reps, seed, wall time),
/// writing the header first when the file is new.
void append_result_csv(const std::filesystem::path& file, const Scenario& s, const ExperimentResult& r,
                       std::uint64_t seed);

}  // namespace reldev
