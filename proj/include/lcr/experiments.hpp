#ifndef LCR_EXPERIMENTS_HPP
#define LCR_EXPERIMENTS_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lcr/graph.hpp"
#include "lcr/inference.hpp"
#include "lcr/model.hpp"

namespace lcr::experiments {

// Scenario rules from the simulation designs; "explicit" carries a literal
// value. Heterogeneity is always alpha ~ N(0,1), beta ~ U(-1,1), both
// empirically centered per replication before the graph is drawn.
enum class GammaRule { quarter_log, half_log, log_minus_loglog, explicit_value };
enum class RhoRule { minus_quarter_log, zero, half, loglog, quarter_log, explicit_value };

double resolve_gamma(GammaRule rule, int n, double explicit_value = 0.0);
double resolve_rho(RhoRule rule, int n, double explicit_value = 0.0);
const char* gamma_rule_name(GammaRule r);
const char* rho_rule_name(RhoRule r);
GammaRule gamma_rule_from_name(const std::string& s);
RhoRule rho_rule_from_name(const std::string& s);

struct ExperimentDesign {
    int n = 500;
    GammaRule gamma_rule = GammaRule::quarter_log;
    double gamma_value = 0.0;
    RhoRule rho_rule = RhoRule::zero;
    double rho_value = 0.0;
    int reps = 100;
    std::uint64_t seed = 1;
    std::optional<double> theta;  // two-community contamination when present

    double gamma(int for_n) const { return resolve_gamma(gamma_rule, for_n, gamma_value); }
    double rho(int for_n) const { return resolve_rho(rho_rule, for_n, rho_value); }
};

// Replication sub-seed: derive(master, cell_index, rep_index); every cell and
// replication is reproducible in isolation.
std::uint64_t rep_seed(std::uint64_t master, std::uint64_t cell_index, std::uint64_t rep_index);

// Draw the heterogeneity vectors for one replication (empirically centered).
model::ModelParams draw_params(int n, double gamma, double rho, std::uint64_t rep_seed_value);

// Deterministic parallel map: results are slotted by replication index and
// reduced in index order, so the report bytes do not depend on the worker
// count.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

struct EstimationCell {
    int n = 0;
    double gamma = 0.0, rho = 0.0;
    int reps = 0;
    std::uint64_t cell_seed = 0;
    double mean_abs_err = 0.0;  // mean |rho_star - rho|
    double se_abs_err = 0.0;    // Monte Carlo standard error
    int lcr_degenerate = 0;     // saturated/undefined estimates (still counted)
    bool with_mle = false;
    int mle_exists = 0;
    double mle_nonexist_frac = 0.0;
    double mle_mean_abs_err = 0.0;  // over existing fits only
    double mle_se_abs_err = 0.0;
    double wall_seconds = 0.0;  // excluded from deterministic serialization
};

EstimationCell run_estimation_cell(int n, double gamma, double rho, int reps,
                                   std::uint64_t master_seed, std::uint64_t cell_index,
                                   int threads, bool with_mle,
                                   std::optional<double> theta = std::nullopt);

struct EstimationTableRow {
    std::string gamma_rule, rho_rule;
    EstimationCell cell;
};

struct EstimationTable {
    std::vector<EstimationTableRow> rows;
    double wall_seconds = 0.0;
};

EstimationTable run_estimation_table(const std::vector<int>& n_grid,
                                     const std::vector<GammaRule>& gamma_rules,
                                     const std::vector<RhoRule>& rho_rules, int reps,
                                     std::uint64_t master_seed, int threads, bool with_mle);

struct PowerCell {
    int n = 0;
    double gamma = 0.0, rho = 0.0, rho0 = 0.0, level = 0.05;
    int reps = 0;
    std::uint64_t cell_seed = 0;
    double reject_rate_psi = 0.0, se_psi = 0.0;
    double reject_rate_phi = 0.0, se_phi = 0.0;
    int degenerate = 0;  // replications with no usable test statistic
    bool with_lrt = false;
    int lrt_defined = 0;
    double lrt_undefined_frac = 0.0;
    double lrt_reject_rate = 0.0;  // over defined replications
    double lrt_se = 0.0;
    double wall_seconds = 0.0;
};

PowerCell run_power_cell(int n, double gamma, double rho_true, double rho0, double level,
                         int reps, std::uint64_t master_seed, std::uint64_t cell_index,
                         int threads, bool with_lrt);

struct PowerStudy {
    std::vector<PowerCell> cells;
    double wall_seconds = 0.0;
};

PowerStudy run_power_study(int n, GammaRule gamma_rule, const std::vector<double>& rho_grid,
                           double rho0, double level, int reps, std::uint64_t master_seed,
                           int threads, bool with_lrt);

struct NullCalibration {
    int n = 0;
    double gamma = 0.0, rho = 0.0;
    int reps = 0;
    std::uint64_t cell_seed = 0;
    std::vector<double> psi_sorted;        // usable statistics, ascending
    std::vector<double> normal_quantiles;  // matching theoretical quantiles
    int skipped = 0;                       // degenerate replications
    bool ks_defined = false;
    double ks_stat = 0.0;
    double ks_pvalue = 1.0;
    double wall_seconds = 0.0;
};

NullCalibration run_null_calibration(int n, double gamma, double rho, int reps,
                                     std::uint64_t master_seed, std::uint64_t cell_index,
                                     int threads);

struct MisspecCell {
    double theta = 0.0;
    EstimationCell cell;
};

struct MisspecReport {
    std::vector<MisspecCell> cells;
    double wall_seconds = 0.0;
};

MisspecReport run_misspec_bias(int n, double gamma, double rho,
                               const std::vector<double>& theta_grid, int reps,
                               std::uint64_t master_seed, int threads);

struct PairComparisonRow {
    int pair_id = 0;
    int c0 = 0;
    double mse = 0.0;      // mean squared error of rho_star
    double se_sq_err = 0.0;  // MC standard error of the squared error
    // Paired against the default pair on the shared graphs (0 for pair 1):
    double mse_diff_vs_default = 0.0;
    double se_diff_vs_default = 0.0;
    double empirical_snr = 0.0;  // mean(Qa) / sd(Qa - e^{c0 rho} Qb)
    int degenerate = 0;
};

struct PairComparison {
    int n = 0;
    double gamma = 0.0, rho = 0.0;
    int reps = 0;
    std::uint64_t cell_seed = 0;
    std::vector<PairComparisonRow> rows;
    double wall_seconds = 0.0;
};

PairComparison run_pair_comparison(int n, double gamma, double rho, int reps,
                                   std::uint64_t master_seed, int threads);

// Plug-in variance against the population value, fresh heterogeneity per
// replication; ratios are reported per replication.
struct VarianceRatioReport {
    int n = 0;
    double gamma = 0.0, rho = 0.0;
    int reps = 0;
    std::vector<double> ratios;  // v_hat / v_exact, indexed by replication
    int skipped = 0;
    double wall_seconds = 0.0;
};

VarianceRatioReport run_variance_ratio(int n, double gamma, double rho, int reps,
                                       std::uint64_t master_seed, std::uint64_t cell_index,
                                       int threads);

// Empirical Var(Qa - e^rho Qb) over replications at one fixed parameter draw,
// against the population value.
struct UStatVarianceReport {
    int n = 0;
    double gamma = 0.0, rho = 0.0;
    int reps = 0;
    double v_exact = 0.0;
    double empirical_var = 0.0;
    double ratio = 0.0;
    double wall_seconds = 0.0;
};

UStatVarianceReport run_ustat_variance(int n, double gamma, double rho, int reps,
                                       std::uint64_t master_seed, std::uint64_t cell_index,
                                       int threads);

struct BenchRow {
    int n = 0;
    double gamma = 0.0;
    double expected_degree = 0.0;
    double seconds_count = 0.0;
    double seconds_variance = 0.0;
};

struct BenchReport {
    std::vector<BenchRow> rows;
    double fitted_exponent = 0.0;  // slope of log total time on log n
};

// Single-threaded timing of the counting kernels at fixed expected degree.
BenchReport bench_counting(const std::vector<int>& n_grid, double expected_degree,
                           std::uint64_t seed);

// Deterministic delimiter-separated serialization (no timing fields).
void write_estimation_csv(std::ostream& out, const EstimationTable& table);
void write_power_csv(std::ostream& out, const PowerStudy& study);
void write_misspec_csv(std::ostream& out, const MisspecReport& report);
void write_pair_comparison_csv(std::ostream& out, const PairComparison& report);
void write_qq_data(std::ostream& out, const NullCalibration& calib);
void write_bench_csv(std::ostream& out, const BenchReport& report);

std::string format_double(double x);  // shortest stable decimal form ("%.17g")

}  // namespace lcr::experiments

#endif
