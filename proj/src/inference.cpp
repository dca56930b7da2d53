#include "lcr/inference.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "lcr/numeric.hpp"

namespace lcr::inference {

double hard_threshold(double x, double t) {
    if (std::abs(x) <= t) return x;
    return x > 0 ? t : -t;
}

LcrResult estimate(const graph::DirectedGraph& g, const cycles::CancellationPair& pair) {
    const cycles::PairCounts counts = cycles::fast_count_pair(g, pair);
    LcrResult res;
    res.qa = counts.qa;
    res.qb = counts.qb;
    res.pair_id = pair.class_id;
    res.c0 = pair.c0;
    res.threshold = g.n() >= 2 ? 2.0 * std::log(static_cast<double>(g.n())) : 0.0;
    if (counts.qa > 0 && counts.qb > 0) {
        res.rho_hat = (std::log(static_cast<double>(counts.qa)) -
                       std::log(static_cast<double>(counts.qb))) /
                      pair.c0;
        res.rho_star = hard_threshold(*res.rho_hat, res.threshold);
        res.status = CountStatus::ok;
    } else if (counts.qa == 0 && counts.qb > 0) {
        res.status = CountStatus::qa_zero;
        res.rho_star = -res.threshold;
    } else if (counts.qa > 0 && counts.qb == 0) {
        res.status = CountStatus::qb_zero;
        res.rho_star = res.threshold;
    } else {
        res.status = CountStatus::both_zero;
    }
    return res;
}

LcrResult estimate(const graph::DirectedGraph& g) { return estimate(g, cycles::default_pair()); }

namespace {

bool contains(const std::vector<int>& sorted, int x) {
    return std::binary_search(sorted.begin(), sorted.end(), x);
}

std::int64_t sorted_intersection_size(const std::vector<int>& a, const std::vector<int>& b) {
    std::int64_t c = 0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j])
            ++i;
        else if (a[i] > b[j])
            ++j;
        else {
            ++c;
            ++i;
            ++j;
        }
    }
    return c;
}

// Count of ordered one-way pairs avoiding {i, j}: global total minus the
// pairs incident to either endpoint, adding back the dyad {i, j} itself when
// it was subtracted twice.
std::int64_t r_hat_value(const graph::DirectedGraph& g, int i, int j, EdgeType st) {
    std::int64_t r = g.oneway_dyads();
    r -= static_cast<std::int64_t>(g.in_oneway(i).size()) + g.in_oneway(j).size() +
         g.out_oneway(i).size() + g.out_oneway(j).size();
    if (st == EdgeType::e10 || st == EdgeType::e01) r += 1;
    return r;
}

std::int64_t s_hat_value(const graph::DirectedGraph& g, int i, int j, EdgeType st) {
    std::int64_t s = 2 * g.mutual_dyads();
    s -= 2 * (static_cast<std::int64_t>(g.mutual(i).size()) + g.mutual(j).size());
    if (st == EdgeType::e11) s += 2;
    return s;
}

// Three two-factor one-way path sums with k, l excluded from {i, j}. All
// three reduce to degree sums over the one-way neighbourhoods minus the size
// of out1(j) intersect in1(i); the endpoints never lie in that intersection.
std::int64_t t_hat_value(const graph::DirectedGraph& g, int i, int j, EdgeType st) {
    const auto& out_j = g.out_oneway(j);
    const auto& in_i = g.in_oneway(i);
    std::int64_t out_sum = 0, in_sum = 0;
    for (int k : out_j) out_sum += static_cast<std::int64_t>(g.out_oneway(k).size());
    for (int l : in_i) in_sum += static_cast<std::int64_t>(g.in_oneway(l).size());
    const std::int64_t inter = sorted_intersection_size(out_j, in_i);
    const std::int64_t ji_oneway = (st == EdgeType::e01) ? 1 : 0;  // j -> i only
    const std::int64_t a = static_cast<std::int64_t>(out_j.size()) - ji_oneway;
    const std::int64_t b = static_cast<std::int64_t>(in_i.size()) - ji_oneway;
    return out_sum + in_sum -
           ji_oneway * (static_cast<std::int64_t>(g.out_oneway(i).size()) +
                        static_cast<std::int64_t>(g.in_oneway(j).size())) +
           a * b - 3 * inter;
}

// Row-major bitsets of the one-way adjacency, used to take all the
// out1(j) intersect in1(i) sizes with word operations.
struct OnewayBitsets {
    int words = 0;
    std::vector<std::uint64_t> out_bits, in_bits;

    explicit OnewayBitsets(const graph::DirectedGraph& g) {
        const int n = g.n();
        words = (n + 63) / 64;
        out_bits.assign(static_cast<std::size_t>(n) * words, 0);
        in_bits.assign(static_cast<std::size_t>(n) * words, 0);
        for (int v = 0; v < n; ++v) {
            for (int k : g.out_oneway(v))
                out_bits[static_cast<std::size_t>(v) * words + k / 64] |= 1ULL << (k % 64);
            for (int k : g.in_oneway(v))
                in_bits[static_cast<std::size_t>(v) * words + k / 64] |= 1ULL << (k % 64);
        }
    }

    std::int64_t intersection(int j_out, int i_in) const {
        const std::uint64_t* a = &out_bits[static_cast<std::size_t>(j_out) * words];
        const std::uint64_t* b = &in_bits[static_cast<std::size_t>(i_in) * words];
        std::int64_t c = 0;
        for (int w = 0; w < words; ++w) c += std::popcount(a[w] & b[w]);
        return c;
    }
};

constexpr int kBitsetCapacity = 16384;  // 2 * n^2/8 bytes of scratch beyond this

}  // namespace

RstHat rst_hat(const graph::DirectedGraph& g, int i, int j) {
    if (i == j) throw std::domain_error("rst_hat requires two distinct nodes");
    const EdgeType st = g.state(i, j);
    return RstHat{r_hat_value(g, i, j, st), s_hat_value(g, i, j, st), t_hat_value(g, i, j, st)};
}

VarianceEstimates variance_hat(const graph::DirectedGraph& g, double rho_plugin,
                               std::int64_t qa) {
    if (!std::isfinite(rho_plugin))
        throw std::invalid_argument("variance_hat needs a finite rho value");
    const double erho = std::exp(rho_plugin);
    KahanSum v10;
    double w = 0.0;
    // Double-edge term: both orders of a mutual dyad contribute 2 r^2 and the
    // exclusion count is symmetric in (i, j).
    for (int i = 0; i < g.n(); ++i) {
        for (int j : g.mutual(i)) {
            if (j < i) continue;
            const std::int64_t r = r_hat_value(g, i, j, EdgeType::e11);
            w += 4.0 * static_cast<double>(r) * static_cast<double>(r);
        }
    }
    // One-way term: the ordered pair (i, j) with an i->j one-way edge. The
    // dyad state is 10, so the transpose corrections in the closed forms
    // vanish and each edge costs one bitset intersection.
    const int n = g.n();
    std::vector<std::int64_t> out_sum(n, 0), in_sum(n, 0);
    for (int v = 0; v < n; ++v) {
        for (int k : g.out_oneway(v)) out_sum[v] += g.out_oneway(k).size();
        for (int l : g.in_oneway(v)) in_sum[v] += g.in_oneway(l).size();
    }
    const bool use_bits = n <= kBitsetCapacity;
    std::optional<OnewayBitsets> bits;
    if (use_bits) bits.emplace(g);
    for (int i = 0; i < n; ++i) {
        for (int j : g.out_oneway(i)) {
            const std::int64_t s = s_hat_value(g, i, j, EdgeType::e10);
            const std::int64_t inter =
                use_bits ? bits->intersection(j, i)
                         : sorted_intersection_size(g.out_oneway(j), g.in_oneway(i));
            const std::int64_t a = static_cast<std::int64_t>(g.out_oneway(j).size());
            const std::int64_t b = static_cast<std::int64_t>(g.in_oneway(i).size());
            const std::int64_t t = out_sum[j] + in_sum[i] + a * b - 3 * inter;
            const double d = static_cast<double>(s) - erho * static_cast<double>(t);
            v10.add(d * d);
        }
    }
    VarianceEstimates out;
    out.w_hat = w;
    out.v_hat = w + v10.value();
    out.zero_variance = !(out.v_hat > 0.0);
    out.zero_w = !(out.w_hat > 0.0);
    if (!out.zero_variance) out.snr_hat = static_cast<double>(qa) / std::sqrt(out.v_hat);
    if (!out.zero_w) out.snr_hat_simple = static_cast<double>(qa) / std::sqrt(out.w_hat);
    return out;
}

VarianceEstimates variance_hat(const graph::DirectedGraph& g, double rho_plugin) {
    const std::int64_t qa = cycles::fast_count(g, cycles::default_pair().a);
    return variance_hat(g, rho_plugin, qa);
}

TestResult make_test(const LcrResult& lcr, const VarianceEstimates& var, double rho0,
                     double level) {
    if (!(level > 0.0 && level < 1.0)) throw std::domain_error("level must be in (0,1)");
    TestResult tr;
    tr.rho0 = rho0;
    tr.level = level;
    tr.z_crit = z_alpha_half(level);

    if (lcr.status == CountStatus::both_zero) {
        tr.degenerate = true;
        tr.flag = "both cycle counts are zero";
        return tr;
    }
    if (lcr.degenerate()) tr.flag = "estimate saturated at the threshold";

    if (!var.zero_variance && lcr.rho_star) {
        tr.psi_star = var.snr_hat * (*lcr.rho_star - rho0);
        tr.p_value_psi = norm_two_sided_p(*tr.psi_star);
        tr.reject_psi = std::abs(*tr.psi_star) >= tr.z_crit;
    }
    if (!var.zero_w && lcr.rho_hat) {
        tr.phi_star = var.snr_hat_simple * (*lcr.rho_hat - rho0);
        tr.p_value_phi = norm_two_sided_p(*tr.phi_star);
        tr.reject_phi = std::abs(*tr.phi_star) >= tr.z_crit;
    }
    if (!tr.psi_star && !tr.phi_star) {
        tr.degenerate = true;
        if (tr.flag.empty()) tr.flag = "variance estimate is zero";
    } else if (var.zero_variance || var.zero_w) {
        if (!tr.flag.empty()) tr.flag += "; ";
        tr.flag += "one variance estimate is zero";
    }
    return tr;
}

TestResult test(const graph::DirectedGraph& g, double rho0, double level) {
    const LcrResult lcr = estimate(g);
    if (lcr.status == CountStatus::both_zero) {
        VarianceEstimates var;
        var.zero_variance = var.zero_w = true;
        return make_test(lcr, var, rho0, level);
    }
    const VarianceEstimates var = variance_hat(g, *lcr.rho_plugin(), lcr.qa);
    return make_test(lcr, var, rho0, level);
}

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::S: return "S";
        case Regime::L1: return "L1";
        case Regime::L2: return "L2";
    }
    return "?";
}

namespace {

using Eigen::MatrixXd;

// Exclusion-corrected three-step sums: target(i,j) = sum over k, l not in
// {i,j}, k != l of P(j,k) Q(k,l) R(l,i). The dense product with zeroed
// diagonals already drops k=j, k=l and l=i; the k=i and l=j slices are
// removed by inclusion-exclusion.
MatrixXd corrected_path3(const MatrixXd& P, const MatrixXd& Q, const MatrixXd& R) {
    const auto n = P.rows();
    MatrixXd QR = Q * R;
    MatrixXd M = P * QR;
    Eigen::VectorXd diag_qr(n), diag_pq(n);
    for (Eigen::Index i = 0; i < n; ++i) diag_qr(i) = Q.row(i).dot(R.col(i));
    for (Eigen::Index j = 0; j < n; ++j) diag_pq(j) = P.row(j).dot(Q.col(j));
    MatrixXd out(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i == j) {
                out(i, j) = 0.0;
                continue;
            }
            out(i, j) = M(j, i) - P(j, i) * diag_qr(i) - diag_pq(j) * R(j, i) +
                        P(j, i) * Q(i, j) * R(j, i);
        }
    return out;
}

}  // namespace

TheoryDiagnostics theory_diagnostics(const model::ModelParams& params,
                                     const DiagnosticsConfig& config) {
    const int n = params.n();
    const model::PlrQuantities q = model::plr(params);
    const double rho = params.rho();
    const double erho = std::exp(rho);

    double mu1 = 0, nu1 = 0, eta1 = 0, mu_eta = 0, nu_eta = 0;
    double mu_max = 0, nu_max = 0, eta_max = 0;
    for (int i = 0; i < n; ++i) {
        mu1 += q.mu[i];
        nu1 += q.nu[i];
        eta1 += q.eta[i];
        mu_eta += q.mu[i] * q.eta[i];
        nu_eta += q.nu[i] * q.eta[i];
        mu_max = std::max(mu_max, q.mu[i]);
        nu_max = std::max(nu_max, q.nu[i]);
        eta_max = std::max(eta_max, q.eta[i]);
    }

    TheoryDiagnostics d;
    d.rho_tilde = std::log(eta1 * eta1 / (mu_eta * nu_eta));
    d.c_mu_nu_eta = (eta1 * eta1 * eta1 * eta1) / (mu_eta * nu_eta * mu1 * nu1);
    d.r_n = std::max(1.0 / (erho * eta1 * eta1), mu_eta * nu_eta / (eta1 * eta1 * eta1 * eta1));

    const double log_margin = std::log(config.regime_margin);
    if (rho <= d.rho_tilde - log_margin)
        d.regime = Regime::S;
    else if (rho >= d.rho_tilde + log_margin)
        d.regime = Regime::L2;
    else
        d.regime = Regime::L1;
    d.r_n_minus = (d.regime == Regime::S) ? 1.0 / (erho * eta1 * eta1) : 1.0 / (mu1 * nu1);

    const double erho_half = std::exp(rho / 2.0);
    d.g1_ok = std::max({mu_max, nu_max, erho_half * eta_max}) < config.small_threshold;
    d.g2_ok = std::min(erho_half * eta1, eta1) > config.large_threshold;
    d.sp1_ok = (mu_max * mu_max * nu_max * nu_max) / (mu_eta * nu_eta) < config.small_threshold;
    if (d.regime == Regime::S) {
        d.sp2_ok = true;  // the balance condition applies only in case L
    } else {
        const double ratio = mu1 / nu1;
        d.sp2_ok = ratio >= config.sp2_band_low && ratio <= config.sp2_band_high;
    }

    if (n > config.exact_capacity) {
        // First-order closed forms for the expected counts and the variance.
        d.exact_mode = false;
        d.eqa = erho * eta1 * eta1 * mu1 * nu1;
        d.eqb = eta1 * eta1 * mu1 * nu1;
        d.v_exact = 2.0 * erho * eta1 * eta1 * mu1 * mu1 * nu1 * nu1 +
                    erho * erho * mu_eta * nu_eta * mu1 * mu1 * nu1 * nu1 +
                    3.0 * erho * erho * mu_eta * eta1 * eta1 * mu1 * nu1 * nu1 +
                    3.0 * erho * erho * nu_eta * eta1 * eta1 * mu1 * mu1 * nu1 -
                    3.0 * erho * erho * eta1 * eta1 * eta1 * eta1 * mu1 * nu1;
        d.snr_exact = d.v_exact > 0 ? d.eqa / std::sqrt(d.v_exact) : 0.0;
        return d;
    }

    d.exact_mode = true;
    MatrixXd Z(n, n), P10(n, n), P11(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) {
                Z(i, j) = P10(i, j) = P11(i, j) = 0.0;
                continue;
            }
            const double k = 1.0 / (1.0 + q.mu[i] * q.nu[j] + q.mu[j] * q.nu[i] +
                                    erho * q.eta[i] * q.eta[j]);
            Z(i, j) = k;
            P10(i, j) = k * q.mu[i] * q.nu[j];
            P11(i, j) = k * erho * q.eta[i] * q.eta[j];
        }
    }
    const MatrixXd P01 = P10.transpose();

    KahanSum v_sum, eqa_sum, eqb_sum;
    {
        const MatrixXd r = corrected_path3(Z, P01, Z);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                v_sum.add(2.0 * r(i, j) * r(i, j) * P11(i, j));
                eqa_sum.add(P11(i, j) * r(i, j));
            }
    }
    MatrixXd t = corrected_path3(P10, P10, Z);
    t += corrected_path3(Z, P10, P10);
    {
        const MatrixXd t3 = corrected_path3(P10, Z, P10);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                eqb_sum.add(P10(i, j) * t3(i, j));
            }
        t += t3;
    }
    const MatrixXd s = corrected_path3(Z, P11, Z);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const double diff = s(i, j) - erho * t(i, j);
            v_sum.add(diff * diff * P10(i, j));
        }

    d.v_exact = v_sum.value();
    d.eqa = eqa_sum.value();
    d.eqb = eqb_sum.value();
    d.snr_exact = d.v_exact > 0 ? d.eqa / std::sqrt(d.v_exact) : 0.0;
    return d;
}

}  // namespace lcr::inference
