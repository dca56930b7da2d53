#ifndef LCR_INFERENCE_HPP
#define LCR_INFERENCE_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "lcr/cycles.hpp"
#include "lcr/graph.hpp"
#include "lcr/model.hpp"

namespace lcr::inference {

enum class CountStatus : unsigned char {
    ok,         // both counts positive
    qa_zero,    // numerator count zero: estimate saturates low
    qb_zero,    // denominator count zero: estimate saturates high
    both_zero,  // no estimate at all
};

// Hard-thresholding H(x; t): x for |x| <= t, sign(x) * t otherwise.
double hard_threshold(double x, double t);

struct LcrResult {
    std::int64_t qa = 0;
    std::int64_t qb = 0;
    std::optional<double> rho_hat;   // log(qa/qb)/c0; absent when a count is zero
    std::optional<double> rho_star;  // thresholded estimate; absent only when both counts vanish
    double threshold = 0.0;          // 2 ln n (natural log)
    int pair_id = 1;
    int c0 = 1;
    CountStatus status = CountStatus::ok;

    bool degenerate() const { return status != CountStatus::ok; }
    // Plug-in value used wherever e^{rho_hat} is needed: rho_hat when both
    // counts are positive, otherwise the saturated endpoint.
    std::optional<double> rho_plugin() const { return rho_hat ? rho_hat : rho_star; }
};

LcrResult estimate(const graph::DirectedGraph& g, const cycles::CancellationPair& pair);
LcrResult estimate(const graph::DirectedGraph& g);  // default pair

// Exact exclusion sums used by the plug-in variance: counts of 01 / 11
// ordered pairs avoiding {i, j}, and the three one-way two-factor path sums.
struct RstHat {
    std::int64_t r = 0;
    std::int64_t s = 0;
    std::int64_t t = 0;
};

RstHat rst_hat(const graph::DirectedGraph& g, int i, int j);

struct VarianceEstimates {
    double v_hat = 0.0;            // plug-in variance of the count difference
    double w_hat = 0.0;            // simplified variant: double-edge term only
    double snr_hat = 0.0;          // qa / sqrt(v_hat); 0 when flagged
    double snr_hat_simple = 0.0;   // qa / sqrt(w_hat); 0 when flagged
    bool zero_variance = false;    // v_hat == 0: SNR undefined, flagged
    bool zero_w = false;           // w_hat == 0
};

// Plug-in variance at the given rho value. Only ordered pairs carrying a 11
// or 10 dyad contribute; cost O(E d + n).
VarianceEstimates variance_hat(const graph::DirectedGraph& g, double rho_plugin,
                               std::int64_t qa);
// Spec-shaped convenience: recounts the default pair's numerator internally.
VarianceEstimates variance_hat(const graph::DirectedGraph& g, double rho_plugin);

struct TestResult {
    double rho0 = 0.0;
    double level = 0.05;
    double z_crit = 0.0;
    std::optional<double> psi_star;      // snr_hat * (rho_star - rho0)
    std::optional<double> phi_star;      // snr_hat_simple * (rho_hat - rho0), unthresholded
    std::optional<double> p_value_psi;   // two-sided standard-normal tails
    std::optional<double> p_value_phi;
    std::optional<bool> reject_psi;      // |psi| >= z_{alpha/2}
    std::optional<bool> reject_phi;
    bool degenerate = false;             // no decision possible
    std::string flag;                    // short reason when degenerate / partial
};

// Full pipeline on the default pair: estimate -> variance_hat -> statistics.
TestResult test(const graph::DirectedGraph& g, double rho0, double level);
// Reuses precomputed pieces.
TestResult make_test(const LcrResult& lcr, const VarianceEstimates& var, double rho0,
                     double level);

enum class Regime : unsigned char { S, L1, L2 };
const char* regime_name(Regime r);

struct DiagnosticsConfig {
    double small_threshold = 0.2;     // "-> 0" rendered as: below this
    double large_threshold = 5.0;     // "-> infinity" rendered as: above this
    double sp2_band_low = 1.0 / 3.0;  // acceptable |mu|_1 / |nu|_1 ratio band
    double sp2_band_high = 3.0;
    double regime_margin = 5.0;       // case split factor around e^{rho_tilde}
    int exact_capacity = 1200;        // max n for the exact population sums
};

struct TheoryDiagnostics {
    double v_exact = 0.0;     // population variance proxy of the count difference
    double eqa = 0.0;         // expected numerator count
    double eqb = 0.0;         // expected denominator count
    double snr_exact = 0.0;   // eqa / sqrt(v_exact)
    double r_n = 0.0;         // max(1/(e^rho |eta|_1^2), (mu,eta)(nu,eta)/|eta|_1^4)
    double r_n_minus = 0.0;   // regime-split lower-bound rate
    double rho_tilde = 0.0;   // log(|eta|_1^2 / ((mu,eta)(nu,eta)))
    double c_mu_nu_eta = 0.0; // |eta|_1^4 / ((mu,eta)(nu,eta)|mu|_1|nu|_1), always <= 1
    Regime regime = Regime::S;
    bool g1_ok = false;
    bool g2_ok = false;
    bool sp1_ok = false;
    bool sp2_ok = false;  // evaluated only in case L; true otherwise
    bool exact_mode = true;  // false: n over capacity, asymptotic formulas used
};

// Population quantities for the default pair. Exact mode computes the
// exclusion sums through dense products with inclusion-exclusion corrections;
// above the capacity it falls back to the first-order closed forms, flagged.
TheoryDiagnostics theory_diagnostics(const model::ModelParams& params,
                                     const DiagnosticsConfig& config = {});

}  // namespace lcr::inference

#endif
