// Medium-weight Monte Carlo property tests. Everything is seeded, so runs
// are deterministic; the bands below hold with large margins at these seeds.

#include <doctest.h>

#include <cmath>

#include "lcr/experiments.hpp"
#include "lcr/numeric.hpp"

using namespace lcr;
namespace ex = lcr::experiments;

TEST_CASE("null distribution of the studentized statistic is standard normal") {
    const int n = 500;
    const double gamma = ex::resolve_gamma(ex::GammaRule::half_log, n);
    const auto calib = ex::run_null_calibration(n, gamma, 0.0, 1000, 20240801, 1, 2);
    REQUIRE(calib.ks_defined);
    CHECK(calib.skipped == 0);
    CHECK(calib.ks_pvalue > 0.01);
    // Location and scale sanity on top of the distributional test.
    CHECK(std::abs(mean(calib.psi_sorted)) < 0.15);
    CHECK(sample_sd(calib.psi_sorted) == doctest::Approx(1.0).epsilon(0.15));
}

TEST_CASE("estimator error shrinks with n in the moderate-density design") {
    const auto small = ex::run_estimation_cell(200, ex::resolve_gamma(ex::GammaRule::quarter_log, 200),
                                               0.5, 40, 11, 1, 2, false);
    const auto large = ex::run_estimation_cell(800, ex::resolve_gamma(ex::GammaRule::quarter_log, 800),
                                               0.5, 40, 11, 2, 2, false);
    CHECK(small.mean_abs_err > 0.0);
    CHECK(large.mean_abs_err < small.mean_abs_err);
}

TEST_CASE("pair comparison: the default pair dominates in the sparse design") {
    const int n = 500;
    const double gamma = ex::resolve_gamma(ex::GammaRule::log_minus_loglog, n);
    const auto rep = ex::run_pair_comparison(n, gamma, 0.5, 200, 31, 2);
    REQUIRE(rep.rows.size() == 3);
    // Shared graphs make the per-replication difference the right yardstick.
    for (int k : {1, 2}) {
        const auto& pk = rep.rows[k];
        CHECK(pk.mse_diff_vs_default > 2.0 * pk.se_diff_vs_default);
    }
    // The empirical signal-to-noise ordering backs the same story.
    const auto& p1 = rep.rows[0];
    CHECK(p1.empirical_snr >= rep.rows[1].empirical_snr);
    CHECK(p1.empirical_snr >= rep.rows[2].empirical_snr);
}

TEST_CASE("pair comparison: all three pairs tie in the dense design") {
    const int n = 500;
    const double gamma = ex::resolve_gamma(ex::GammaRule::quarter_log, n);
    const auto rep = ex::run_pair_comparison(n, gamma, 0.0, 100, 32, 2);
    REQUIRE(rep.rows.size() == 3);
    const auto& p1 = rep.rows[0];
    for (int k : {1, 2}) {
        const auto& pk = rep.rows[k];
        const double se = std::sqrt(p1.se_sq_err * p1.se_sq_err + pk.se_sq_err * pk.se_sq_err);
        CHECK(std::abs(pk.mse - p1.mse) <= 2.0 * se);
    }
}
