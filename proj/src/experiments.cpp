#include "lcr/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "lcr/mle.hpp"
#include "lcr/numeric.hpp"
#include "lcr/rng.hpp"

namespace lcr::experiments {

double resolve_gamma(GammaRule rule, int n, double explicit_value) {
    const double ln = std::log(static_cast<double>(n));
    switch (rule) {
        case GammaRule::quarter_log: return -ln / 4.0;
        case GammaRule::half_log: return -ln / 2.0;
        case GammaRule::log_minus_loglog: return -ln + std::log(ln);
        case GammaRule::explicit_value: return explicit_value;
    }
    return explicit_value;
}

double resolve_rho(RhoRule rule, int n, double explicit_value) {
    const double ln = std::log(static_cast<double>(n));
    switch (rule) {
        case RhoRule::minus_quarter_log: return -ln / 4.0;
        case RhoRule::zero: return 0.0;
        case RhoRule::half: return 0.5;
        case RhoRule::loglog: return std::log(ln);
        case RhoRule::quarter_log: return ln / 4.0;
        case RhoRule::explicit_value: return explicit_value;
    }
    return explicit_value;
}

const char* gamma_rule_name(GammaRule r) {
    switch (r) {
        case GammaRule::quarter_log: return "-log(n)/4";
        case GammaRule::half_log: return "-log(n)/2";
        case GammaRule::log_minus_loglog: return "-log(n)+loglog(n)";
        case GammaRule::explicit_value: return "explicit";
    }
    return "?";
}

const char* rho_rule_name(RhoRule r) {
    switch (r) {
        case RhoRule::minus_quarter_log: return "-log(n)/4";
        case RhoRule::zero: return "0";
        case RhoRule::half: return "0.5";
        case RhoRule::loglog: return "loglog(n)";
        case RhoRule::quarter_log: return "log(n)/4";
        case RhoRule::explicit_value: return "explicit";
    }
    return "?";
}

GammaRule gamma_rule_from_name(const std::string& s) {
    if (s == "g1" || s == "-log(n)/4") return GammaRule::quarter_log;
    if (s == "g2" || s == "-log(n)/2") return GammaRule::half_log;
    if (s == "g3" || s == "-log(n)+loglog(n)") return GammaRule::log_minus_loglog;
    if (s == "explicit") return GammaRule::explicit_value;
    throw std::invalid_argument("unknown gamma rule: " + s);
}

RhoRule rho_rule_from_name(const std::string& s) {
    if (s == "r1" || s == "-log(n)/4") return RhoRule::minus_quarter_log;
    if (s == "r2" || s == "0") return RhoRule::zero;
    if (s == "r3" || s == "0.5") return RhoRule::half;
    if (s == "r4" || s == "loglog(n)") return RhoRule::loglog;
    if (s == "r5" || s == "log(n)/4") return RhoRule::quarter_log;
    if (s == "explicit") return RhoRule::explicit_value;
    throw std::invalid_argument("unknown rho rule: " + s);
}

std::uint64_t rep_seed(std::uint64_t master, std::uint64_t cell_index,
                       std::uint64_t rep_index) {
    return derive_stream(master, cell_index, rep_index);
}

model::ModelParams draw_params(int n, double gamma, double rho, std::uint64_t rep_seed_value) {
    std::vector<double> alpha(n), beta(n);
    Rng ra(derive_stream(rep_seed_value, 1));
    Rng rb(derive_stream(rep_seed_value, 2));
    double am = 0.0, bm = 0.0;
    for (int i = 0; i < n; ++i) {
        alpha[i] = norm_quantile(std::max(1e-16, std::min(1.0 - 1e-16, ra.next_double())));
        beta[i] = 2.0 * rb.next_double() - 1.0;
        am += alpha[i];
        bm += beta[i];
    }
    am /= n;
    bm /= n;
    // Centered empirically before construction so gamma keeps its nominal
    // value (the constructor would otherwise fold the means into it).
    for (int i = 0; i < n; ++i) {
        alpha[i] -= am;
        beta[i] -= bm;
    }
    return model::ModelParams(n, rho, gamma, std::move(alpha), std::move(beta));
}

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
    threads = std::max(1, std::min(threads, count));
    if (threads == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&]() {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= count) return;
                fn(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::uint64_t graph_seed(std::uint64_t rep_seed_value) { return derive_stream(rep_seed_value, 3); }

double se_of_rate(double rate, int reps) {
    if (reps <= 0) return 0.0;
    return std::sqrt(std::max(0.0, rate * (1.0 - rate)) / reps);
}

}  // namespace

EstimationCell run_estimation_cell(int n, double gamma, double rho, int reps,
                                   std::uint64_t master_seed, std::uint64_t cell_index,
                                   int threads, bool with_mle, std::optional<double> theta) {
    const auto t0 = Clock::now();
    EstimationCell cell;
    cell.n = n;
    cell.gamma = gamma;
    cell.rho = rho;
    cell.reps = reps;
    cell.cell_seed = derive_stream(master_seed, cell_index, 0);
    cell.with_mle = with_mle;

    struct Rep {
        double abs_err = 0.0;
        bool degenerate = false;
        bool mle_exists = false;
        double mle_abs_err = 0.0;
    };
    std::vector<Rep> out(reps);
    parallel_for(reps, threads, [&](int r) {
        const std::uint64_t rs = rep_seed(master_seed, cell_index, r + 1);
        model::ModelParams params = draw_params(n, gamma, rho, rs);
        graph::DirectedGraph g;
        if (theta) {
            model::MisspecParams mp(params, *theta, {});
            g = model::sample_misspecified(mp, graph_seed(rs));
        } else {
            g = model::sample(params, graph_seed(rs));
        }
        const inference::LcrResult lcr = inference::estimate(g);
        Rep rep;
        rep.degenerate = lcr.degenerate();
        rep.abs_err = lcr.rho_star ? std::abs(*lcr.rho_star - rho) : lcr.threshold;
        if (with_mle) {
            const mle::ExistenceCheck ec = mle::existence_check(g);
            if (!ec.definitely_nonexistent) {
                const mle::MleFit fit = mle::fit(g);
                if (fit.converged && !fit.diverged) {
                    rep.mle_exists = true;
                    rep.mle_abs_err = std::abs(fit.rho - rho);
                }
            }
        }
        out[r] = rep;
    });

    std::vector<double> errs, mle_errs;
    errs.reserve(reps);
    for (const Rep& r : out) {
        errs.push_back(r.abs_err);
        if (r.degenerate) ++cell.lcr_degenerate;
        if (r.mle_exists) {
            ++cell.mle_exists;
            mle_errs.push_back(r.mle_abs_err);
        }
    }
    cell.mean_abs_err = mean(errs);
    cell.se_abs_err = reps > 1 ? sample_sd(errs) / std::sqrt(static_cast<double>(reps)) : 0.0;
    if (with_mle) {
        cell.mle_nonexist_frac =
            reps > 0 ? 1.0 - static_cast<double>(cell.mle_exists) / reps : 0.0;
        cell.mle_mean_abs_err = mean(mle_errs);
        cell.mle_se_abs_err = mle_errs.size() > 1
                                  ? sample_sd(mle_errs) / std::sqrt(double(mle_errs.size()))
                                  : 0.0;
    }
    cell.wall_seconds = seconds_since(t0);
    return cell;
}

EstimationTable run_estimation_table(const std::vector<int>& n_grid,
                                     const std::vector<GammaRule>& gamma_rules,
                                     const std::vector<RhoRule>& rho_rules, int reps,
                                     std::uint64_t master_seed, int threads, bool with_mle) {
    const auto t0 = Clock::now();
    EstimationTable table;
    std::uint64_t cell_index = 0;
    for (int n : n_grid) {
        for (GammaRule gr : gamma_rules) {
            for (RhoRule rr : rho_rules) {
                ++cell_index;
                EstimationTableRow row;
                row.gamma_rule = gamma_rule_name(gr);
                row.rho_rule = rho_rule_name(rr);
                row.cell = run_estimation_cell(n, resolve_gamma(gr, n), resolve_rho(rr, n),
                                               reps, master_seed, cell_index, threads, with_mle);
                table.rows.push_back(std::move(row));
            }
        }
    }
    table.wall_seconds = seconds_since(t0);
    return table;
}

PowerCell run_power_cell(int n, double gamma, double rho_true, double rho0, double level,
                         int reps, std::uint64_t master_seed, std::uint64_t cell_index,
                         int threads, bool with_lrt) {
    const auto t0 = Clock::now();
    PowerCell cell;
    cell.n = n;
    cell.gamma = gamma;
    cell.rho = rho_true;
    cell.rho0 = rho0;
    cell.level = level;
    cell.reps = reps;
    cell.cell_seed = derive_stream(master_seed, cell_index, 0);
    cell.with_lrt = with_lrt;

    struct Rep {
        bool usable = false;
        bool reject_psi = false;
        bool has_phi = false;
        bool reject_phi = false;
        bool lrt_defined = false;
        bool lrt_reject = false;
    };
    std::vector<Rep> out(reps);
    parallel_for(reps, threads, [&](int r) {
        const std::uint64_t rs = rep_seed(master_seed, cell_index, r + 1);
        model::ModelParams params = draw_params(n, gamma, rho_true, rs);
        graph::DirectedGraph g = model::sample(params, graph_seed(rs));
        const inference::TestResult tr = inference::test(g, rho0, level);
        Rep rep;
        rep.usable = tr.psi_star.has_value();
        rep.reject_psi = tr.reject_psi.value_or(false);
        rep.has_phi = tr.phi_star.has_value();
        rep.reject_phi = tr.reject_phi.value_or(false);
        if (with_lrt) {
            const mle::LrtResult lr = mle::lrt(g);
            rep.lrt_defined = lr.defined;
            rep.lrt_reject = lr.defined && lr.p_value <= level;
        }
        out[r] = rep;
    });

    int psi_n = 0, psi_rej = 0, phi_n = 0, phi_rej = 0, lrt_n = 0, lrt_rej = 0;
    for (const Rep& r : out) {
        if (r.usable) {
            ++psi_n;
            if (r.reject_psi) ++psi_rej;
        } else {
            ++cell.degenerate;
        }
        if (r.has_phi) {
            ++phi_n;
            if (r.reject_phi) ++phi_rej;
        }
        if (r.lrt_defined) {
            ++lrt_n;
            if (r.lrt_reject) ++lrt_rej;
        }
    }
    cell.reject_rate_psi = psi_n > 0 ? static_cast<double>(psi_rej) / psi_n : 0.0;
    cell.se_psi = se_of_rate(cell.reject_rate_psi, psi_n);
    cell.reject_rate_phi = phi_n > 0 ? static_cast<double>(phi_rej) / phi_n : 0.0;
    cell.se_phi = se_of_rate(cell.reject_rate_phi, phi_n);
    cell.lrt_defined = lrt_n;
    cell.lrt_undefined_frac = reps > 0 ? 1.0 - static_cast<double>(lrt_n) / reps : 0.0;
    cell.lrt_reject_rate = lrt_n > 0 ? static_cast<double>(lrt_rej) / lrt_n : 0.0;
    cell.lrt_se = se_of_rate(cell.lrt_reject_rate, lrt_n);
    cell.wall_seconds = seconds_since(t0);
    return cell;
}

PowerStudy run_power_study(int n, GammaRule gamma_rule, const std::vector<double>& rho_grid,
                           double rho0, double level, int reps, std::uint64_t master_seed,
                           int threads, bool with_lrt) {
    const auto t0 = Clock::now();
    PowerStudy study;
    const double gamma = resolve_gamma(gamma_rule, n);
    std::uint64_t cell_index = 0;
    for (double rho : rho_grid) {
        ++cell_index;
        study.cells.push_back(run_power_cell(n, gamma, rho, rho0, level, reps, master_seed,
                                             cell_index, threads, with_lrt));
    }
    study.wall_seconds = seconds_since(t0);
    return study;
}

NullCalibration run_null_calibration(int n, double gamma, double rho, int reps,
                                     std::uint64_t master_seed, std::uint64_t cell_index,
                                     int threads) {
    const auto t0 = Clock::now();
    NullCalibration calib;
    calib.n = n;
    calib.gamma = gamma;
    calib.rho = rho;
    calib.reps = reps;
    calib.cell_seed = derive_stream(master_seed, cell_index, 0);

    std::vector<double> psi(reps, std::numeric_limits<double>::quiet_NaN());
    parallel_for(reps, threads, [&](int r) {
        const std::uint64_t rs = rep_seed(master_seed, cell_index, r + 1);
        model::ModelParams params = draw_params(n, gamma, rho, rs);
        graph::DirectedGraph g = model::sample(params, graph_seed(rs));
        const inference::TestResult tr = inference::test(g, rho, 0.05);
        if (tr.psi_star) psi[r] = *tr.psi_star;
    });
    for (double v : psi) {
        if (std::isnan(v))
            ++calib.skipped;
        else
            calib.psi_sorted.push_back(v);
    }
    std::sort(calib.psi_sorted.begin(), calib.psi_sorted.end());
    const std::size_t m = calib.psi_sorted.size();
    calib.normal_quantiles.resize(m);
    for (std::size_t i = 0; i < m; ++i)
        calib.normal_quantiles[i] = norm_quantile((i + 0.5) / static_cast<double>(m));
    if (m >= 2) {
        calib.ks_defined = true;
        calib.ks_stat = ks_statistic_normal(calib.psi_sorted);
        calib.ks_pvalue = ks_pvalue(calib.ks_stat, m);
    }
    calib.wall_seconds = seconds_since(t0);
    return calib;
}

MisspecReport run_misspec_bias(int n, double gamma, double rho,
                               const std::vector<double>& theta_grid, int reps,
                               std::uint64_t master_seed, int threads) {
    const auto t0 = Clock::now();
    MisspecReport report;
    std::uint64_t cell_index = 0;
    for (double theta : theta_grid) {
        ++cell_index;
        MisspecCell mc;
        mc.theta = theta;
        mc.cell = run_estimation_cell(n, gamma, rho, reps, master_seed, cell_index, threads,
                                      false, theta);
        report.cells.push_back(std::move(mc));
    }
    report.wall_seconds = seconds_since(t0);
    return report;
}

PairComparison run_pair_comparison(int n, double gamma, double rho, int reps,
                                   std::uint64_t master_seed, int threads) {
    const auto t0 = Clock::now();
    PairComparison report;
    report.n = n;
    report.gamma = gamma;
    report.rho = rho;
    report.reps = reps;
    report.cell_seed = derive_stream(master_seed, 1, 0);
    if (reps <= 0) return report;
    const auto pairs = cycles::quad_pairs();

    struct Rep {
        double sq_err[3] = {0, 0, 0};
        double qa[3] = {0, 0, 0};
        double u[3] = {0, 0, 0};
        bool degenerate[3] = {false, false, false};
    };
    std::vector<Rep> out(reps);
    parallel_for(reps, threads, [&](int r) {
        const std::uint64_t rs = rep_seed(master_seed, 1, r + 1);
        model::ModelParams params = draw_params(n, gamma, rho, rs);
        graph::DirectedGraph g = model::sample(params, graph_seed(rs));
        Rep rep;
        for (int k = 0; k < 3; ++k) {
            const inference::LcrResult lcr = inference::estimate(g, pairs[k]);
            rep.degenerate[k] = lcr.degenerate();
            const double err = lcr.rho_star ? (*lcr.rho_star - rho) : lcr.threshold;
            rep.sq_err[k] = err * err;
            rep.qa[k] = static_cast<double>(lcr.qa);
            rep.u[k] = static_cast<double>(lcr.qa) -
                       std::exp(pairs[k].c0 * rho) * static_cast<double>(lcr.qb);
        }
        out[r] = rep;
    });

    for (int k = 0; k < 3; ++k) {
        PairComparisonRow row;
        row.pair_id = pairs[k].class_id;
        row.c0 = pairs[k].c0;
        std::vector<double> sq, diff, qa, u;
        for (const Rep& r : out) {
            sq.push_back(r.sq_err[k]);
            diff.push_back(r.sq_err[k] - r.sq_err[0]);
            qa.push_back(r.qa[k]);
            u.push_back(r.u[k]);
            if (r.degenerate[k]) ++row.degenerate;
        }
        row.mse = mean(sq);
        row.se_sq_err = reps > 1 ? sample_sd(sq) / std::sqrt(static_cast<double>(reps)) : 0.0;
        if (k > 0) {
            row.mse_diff_vs_default = mean(diff);
            row.se_diff_vs_default =
                reps > 1 ? sample_sd(diff) / std::sqrt(static_cast<double>(reps)) : 0.0;
        }
        const double sd_u = sample_sd(u);
        row.empirical_snr = sd_u > 0 ? mean(qa) / sd_u : 0.0;
        report.rows.push_back(row);
    }
    report.wall_seconds = seconds_since(t0);
    return report;
}

VarianceRatioReport run_variance_ratio(int n, double gamma, double rho, int reps,
                                       std::uint64_t master_seed, std::uint64_t cell_index,
                                       int threads) {
    const auto t0 = Clock::now();
    VarianceRatioReport report;
    report.n = n;
    report.gamma = gamma;
    report.rho = rho;
    report.reps = reps;
    std::vector<double> ratios(reps, std::numeric_limits<double>::quiet_NaN());
    parallel_for(reps, threads, [&](int r) {
        const std::uint64_t rs = rep_seed(master_seed, cell_index, r + 1);
        model::ModelParams params = draw_params(n, gamma, rho, rs);
        const inference::TheoryDiagnostics diag = inference::theory_diagnostics(params);
        if (!(diag.v_exact > 0)) return;
        graph::DirectedGraph g = model::sample(params, graph_seed(rs));
        const inference::LcrResult lcr = inference::estimate(g);
        if (!lcr.rho_plugin()) return;
        const inference::VarianceEstimates var =
            inference::variance_hat(g, *lcr.rho_plugin(), lcr.qa);
        ratios[r] = var.v_hat / diag.v_exact;
    });
    for (double v : ratios) {
        if (std::isnan(v))
            ++report.skipped;
        else
            report.ratios.push_back(v);
    }
    report.wall_seconds = seconds_since(t0);
    return report;
}

UStatVarianceReport run_ustat_variance(int n, double gamma, double rho, int reps,
                                       std::uint64_t master_seed, std::uint64_t cell_index,
                                       int threads) {
    const auto t0 = Clock::now();
    UStatVarianceReport report;
    report.n = n;
    report.gamma = gamma;
    report.rho = rho;
    report.reps = reps;
    // One fixed parameter draw; the replication randomness is the graph only.
    model::ModelParams params = draw_params(n, gamma, rho,
                                            rep_seed(master_seed, cell_index, 0));
    const inference::TheoryDiagnostics diag = inference::theory_diagnostics(params);
    report.v_exact = diag.v_exact;
    const double erho = std::exp(rho);
    std::vector<double> u(reps);
    const auto pair = cycles::default_pair();
    parallel_for(reps, threads, [&](int r) {
        const std::uint64_t rs = rep_seed(master_seed, cell_index, r + 1);
        graph::DirectedGraph g = model::sample(params, graph_seed(rs));
        const cycles::PairCounts counts = cycles::fast_count_pair(g, pair);
        u[r] = static_cast<double>(counts.qa) - erho * static_cast<double>(counts.qb);
    });
    report.empirical_var = sample_variance(u);
    report.ratio = report.v_exact > 0 ? report.empirical_var / report.v_exact : 0.0;
    report.wall_seconds = seconds_since(t0);
    return report;
}

BenchReport bench_counting(const std::vector<int>& n_grid, double expected_degree,
                           std::uint64_t seed) {
    BenchReport report;
    const auto pair = cycles::default_pair();
    for (int n : n_grid) {
        const double gamma = std::log(expected_degree) - std::log(static_cast<double>(n));
        model::ModelParams params = draw_params(n, gamma, 0.5, derive_stream(seed, n));
        graph::DirectedGraph g = model::sample(params, derive_stream(seed, n, 1));

        BenchRow row;
        row.n = n;
        row.gamma = gamma;
        row.expected_degree = expected_degree;
        double best_count = 1e300, best_var = 1e300;
        std::int64_t qa = 0;
        for (int it = 0; it < 5; ++it) {
            auto t0 = Clock::now();
            const cycles::PairCounts counts = cycles::fast_count_pair(g, pair);
            best_count = std::min(best_count, seconds_since(t0));
            qa = counts.qa;
            const double rho_plugin =
                (counts.qa > 0 && counts.qb > 0)
                    ? std::log(double(counts.qa)) - std::log(double(counts.qb))
                    : 0.0;
            t0 = Clock::now();
            (void)inference::variance_hat(g, rho_plugin, qa);
            best_var = std::min(best_var, seconds_since(t0));
        }
        row.seconds_count = best_count;
        row.seconds_variance = best_var;
        report.rows.push_back(row);
    }
    // Least-squares slope of log total time on log n.
    if (report.rows.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double m = static_cast<double>(report.rows.size());
        for (const BenchRow& r : report.rows) {
            const double x = std::log(static_cast<double>(r.n));
            const double y = std::log(r.seconds_count + r.seconds_variance);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        report.fitted_exponent = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    }
    return report;
}

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace {
void put(std::ostream& out, const std::string& s, bool last = false) {
    out << s << (last ? "\n" : "\t");
}
}  // namespace

void write_estimation_csv(std::ostream& out, const EstimationTable& table) {
    out << "n\tgamma_rule\trho_rule\tgamma\trho\treps\tcell_seed\tmean_abs_err\tse_abs_err\t"
           "lcr_degenerate\tmle_exists\tmle_nonexist_frac\tmle_mean_abs_err\tmle_se_abs_err\n";
    for (const auto& row : table.rows) {
        const EstimationCell& c = row.cell;
        out << c.n << '\t' << row.gamma_rule << '\t' << row.rho_rule << '\t';
        put(out, format_double(c.gamma));
        put(out, format_double(c.rho));
        out << c.reps << '\t' << c.cell_seed << '\t';
        put(out, format_double(c.mean_abs_err));
        put(out, format_double(c.se_abs_err));
        out << c.lcr_degenerate << '\t';
        if (c.with_mle) {
            out << c.mle_exists << '\t';
            put(out, format_double(c.mle_nonexist_frac));
            put(out, format_double(c.mle_mean_abs_err));
            put(out, format_double(c.mle_se_abs_err), true);
        } else {
            out << "NA\tNA\tNA\tNA\n";
        }
    }
}

void write_power_csv(std::ostream& out, const PowerStudy& study) {
    out << "n\tgamma\trho\trho0\tlevel\treps\tcell_seed\treject_psi\tse_psi\treject_phi\t"
           "se_phi\tdegenerate\tlrt_defined\tlrt_undefined_frac\tlrt_reject\tlrt_se\n";
    for (const PowerCell& c : study.cells) {
        out << c.n << '\t';
        put(out, format_double(c.gamma));
        put(out, format_double(c.rho));
        put(out, format_double(c.rho0));
        put(out, format_double(c.level));
        out << c.reps << '\t' << c.cell_seed << '\t';
        put(out, format_double(c.reject_rate_psi));
        put(out, format_double(c.se_psi));
        put(out, format_double(c.reject_rate_phi));
        put(out, format_double(c.se_phi));
        out << c.degenerate << '\t';
        if (c.with_lrt) {
            out << c.lrt_defined << '\t';
            put(out, format_double(c.lrt_undefined_frac));
            put(out, format_double(c.lrt_reject_rate));
            put(out, format_double(c.lrt_se), true);
        } else {
            out << "NA\tNA\tNA\tNA\n";
        }
    }
}

void write_misspec_csv(std::ostream& out, const MisspecReport& report) {
    out << "n\tgamma\trho\ttheta\treps\tcell_seed\tmean_abs_err\tse_abs_err\tdegenerate\n";
    for (const MisspecCell& mc : report.cells) {
        const EstimationCell& c = mc.cell;
        out << c.n << '\t';
        put(out, format_double(c.gamma));
        put(out, format_double(c.rho));
        put(out, format_double(mc.theta));
        out << c.reps << '\t' << c.cell_seed << '\t';
        put(out, format_double(c.mean_abs_err));
        put(out, format_double(c.se_abs_err));
        out << c.lcr_degenerate << '\n';
    }
}

void write_pair_comparison_csv(std::ostream& out, const PairComparison& report) {
    out << "n\tgamma\trho\treps\tpair_id\tc0\tmse\tse_sq_err\tmse_diff_vs_default\t"
           "se_diff_vs_default\tempirical_snr\tdegenerate\n";
    for (const PairComparisonRow& r : report.rows) {
        out << report.n << '\t';
        put(out, format_double(report.gamma));
        put(out, format_double(report.rho));
        out << report.reps << '\t' << r.pair_id << '\t' << r.c0 << '\t';
        put(out, format_double(r.mse));
        put(out, format_double(r.se_sq_err));
        put(out, format_double(r.mse_diff_vs_default));
        put(out, format_double(r.se_diff_vs_default));
        put(out, format_double(r.empirical_snr));
        out << r.degenerate << '\n';
    }
}

void write_qq_data(std::ostream& out, const NullCalibration& calib) {
    out << "normal_quantile\tpsi_star\n";
    for (std::size_t i = 0; i < calib.psi_sorted.size(); ++i) {
        put(out, format_double(calib.normal_quantiles[i]));
        put(out, format_double(calib.psi_sorted[i]), true);
    }
}

void write_bench_csv(std::ostream& out, const BenchReport& report) {
    out << "n\tgamma\texpected_degree\tseconds_count\tseconds_variance\n";
    for (const BenchRow& r : report.rows) {
        out << r.n << '\t';
        put(out, format_double(r.gamma));
        put(out, format_double(r.expected_degree));
        put(out, format_double(r.seconds_count));
        put(out, format_double(r.seconds_variance), true);
    }
}

}  // namespace lcr::experiments
