#include <doctest.h>

#include <cmath>
#include <sstream>

#include "lcr/experiments.hpp"
#include "lcr/numeric.hpp"

using namespace lcr;
namespace ex = lcr::experiments;

TEST_CASE("design rules resolve the documented grids") {
    CHECK(ex::resolve_gamma(ex::GammaRule::quarter_log, 500) ==
          doctest::Approx(-std::log(500.0) / 4.0));
    CHECK(ex::resolve_gamma(ex::GammaRule::log_minus_loglog, 500) ==
          doctest::Approx(-std::log(500.0) + std::log(std::log(500.0))));
    CHECK(ex::resolve_rho(ex::RhoRule::loglog, 500) ==
          doctest::Approx(std::log(std::log(500.0))));
    CHECK(ex::resolve_rho(ex::RhoRule::explicit_value, 500, 0.25) == 0.25);
    CHECK(ex::gamma_rule_from_name("g2") == ex::GammaRule::half_log);
    CHECK_THROWS_AS(ex::gamma_rule_from_name("nope"), std::invalid_argument);
}

TEST_CASE("heterogeneity draws are centered and reproducible") {
    const auto p1 = ex::draw_params(200, -1.0, 0.3, 99);
    const auto p2 = ex::draw_params(200, -1.0, 0.3, 99);
    CHECK(p1.alpha() == p2.alpha());
    CHECK(p1.beta() == p2.beta());
    CHECK(p1.gamma() == doctest::Approx(-1.0).epsilon(1e-12));
    double asum = 0;
    for (double a : p1.alpha()) asum += a;
    CHECK(std::abs(asum) < 1e-9);
    // Alpha is standard normal, beta uniform on (-1,1): sd ~ 1 and ~ 0.577.
    std::vector<double> av(p1.alpha().begin(), p1.alpha().end());
    std::vector<double> bv(p1.beta().begin(), p1.beta().end());
    CHECK(sample_sd(av) == doctest::Approx(1.0).epsilon(0.25));
    CHECK(sample_sd(bv) == doctest::Approx(0.577).epsilon(0.25));
    for (double b : bv) CHECK(std::abs(b) < 1.2);
}

TEST_CASE("estimation cell is deterministic across worker counts") {
    ex::EstimationCell ref;
    std::string ref_bytes;
    for (int threads : {1, 4, 8}) {
        const auto cell = ex::run_estimation_cell(60, -1.0, 0.4, 12, 777, 5, threads, true);
        ex::EstimationTable t;
        t.rows.push_back({"explicit", "explicit", cell});
        std::ostringstream os;
        ex::write_estimation_csv(os, t);
        if (threads == 1) {
            ref = cell;
            ref_bytes = os.str();
        } else {
            CHECK(os.str() == ref_bytes);
            CHECK(cell.mean_abs_err == ref.mean_abs_err);
            CHECK(cell.mle_mean_abs_err == ref.mle_mean_abs_err);
        }
    }
    CHECK(ref.reps == 12);
    CHECK(ref.mean_abs_err >= 0.0);
}

TEST_CASE("power cell smoke with the likelihood-ratio column") {
    const auto cell = ex::run_power_cell(60, -1.0, 0.0, 0.0, 0.05, 10, 31, 1, 2, true);
    CHECK(cell.reps == 10);
    CHECK(cell.reject_rate_psi >= 0.0);
    CHECK(cell.reject_rate_psi <= 1.0);
    CHECK(cell.lrt_defined + static_cast<int>(cell.lrt_undefined_frac * 10 + 0.5) == 10);
}

TEST_CASE("null calibration handles tiny rep counts") {
    const auto one = ex::run_null_calibration(40, -1.0, 0.0, 1, 5, 1, 1);
    CHECK_FALSE(one.ks_defined);
    const auto some = ex::run_null_calibration(40, -1.0, 0.0, 12, 5, 1, 2);
    CHECK(some.ks_defined);
    CHECK(some.psi_sorted.size() + some.skipped == 12);
    CHECK(std::is_sorted(some.psi_sorted.begin(), some.psi_sorted.end()));
    std::ostringstream os;
    ex::write_qq_data(os, some);
    CHECK(os.str().find("normal_quantile") == 0);
}

TEST_CASE("pair comparison: zero reps yields an empty report") {
    const auto empty = ex::run_pair_comparison(30, -1.0, 0.3, 0, 1, 1);
    CHECK(empty.rows.empty());
    const auto small = ex::run_pair_comparison(30, -1.0, 0.3, 6, 1, 2);
    REQUIRE(small.rows.size() == 3);
    CHECK(small.rows[0].pair_id == 1);
    CHECK(small.rows[1].c0 == 2);
}

TEST_CASE("variance runners produce ratios") {
    const auto vr = ex::run_variance_ratio(50, -1.0, 0.0, 6, 13, 1, 2);
    CHECK(vr.ratios.size() + vr.skipped == 6);
    for (double r : vr.ratios) CHECK(r > 0.0);

    const auto uv = ex::run_ustat_variance(40, -1.0, 0.0, 8, 13, 1, 2);
    CHECK(uv.v_exact > 0.0);
    CHECK(uv.empirical_var > 0.0);
}

TEST_CASE("bench: empty grid yields an empty table") {
    const auto rep = ex::bench_counting({}, 10.0, 1);
    CHECK(rep.rows.empty());
    CHECK(rep.fitted_exponent == 0.0);
}

TEST_CASE("misspec runner wiring") {
    const auto rep = ex::run_misspec_bias(40, -1.0, 0.5, {0.0, 0.3}, 5, 3, 2);
    REQUIRE(rep.cells.size() == 2);
    CHECK(rep.cells[0].theta == 0.0);
    CHECK(rep.cells[1].theta == 0.3);
    std::ostringstream os;
    ex::write_misspec_csv(os, rep);
    CHECK(os.str().find("theta") != std::string::npos);
}
