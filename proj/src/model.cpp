#include "lcr/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

#include "lcr/rng.hpp"

namespace lcr::model {

namespace {

void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + " must be finite");
}

void require_bounded(double x, const char* what) {
    if (std::abs(x) > ModelParams::kParamBound)
        throw std::domain_error(std::string(what) + " exceeds the supported bound of 50");
}

}  // namespace

ModelParams::ModelParams(int n, double rho, double gamma, std::vector<double> alpha,
                         std::vector<double> beta)
    : n_(n), rho_(rho), gamma_(gamma), alpha_(std::move(alpha)), beta_(std::move(beta)) {
    if (n_ < 3) throw std::invalid_argument("node count must be at least 3");
    if (static_cast<int>(alpha_.size()) != n_ || static_cast<int>(beta_.size()) != n_)
        throw std::invalid_argument("alpha and beta must have length n");
    require_finite(rho_, "rho");
    require_finite(gamma_, "gamma");
    for (double a : alpha_) require_finite(a, "alpha");
    for (double b : beta_) require_finite(b, "beta");

    double asum = 0.0, bsum = 0.0;
    for (double a : alpha_) asum += a;
    for (double b : beta_) bsum += b;
    alpha_shift_ = asum / n_;
    beta_shift_ = bsum / n_;
    // Shifting alpha by -c changes every exponent gamma + alpha_i + beta_j by
    // -c, so the shift must be pushed into gamma to keep the distribution
    // identical; same for beta.
    if (std::abs(alpha_shift_) > 0.0)
        for (double& a : alpha_) a -= alpha_shift_;
    if (std::abs(beta_shift_) > 0.0)
        for (double& b : beta_) b -= beta_shift_;
    gamma_ += alpha_shift_ + beta_shift_;

    require_bounded(rho_, "rho");
    require_bounded(gamma_, "gamma");
    for (double a : alpha_) require_bounded(a, "alpha");
    for (double b : beta_) require_bounded(b, "beta");
}

PlrQuantities plr(const ModelParams& params) {
    const int n = params.n();
    PlrQuantities q;
    q.mu.resize(n);
    q.nu.resize(n);
    q.eta.resize(n);
    const double half_gamma = params.gamma() / 2.0;
    for (int i = 0; i < n; ++i) {
        q.mu[i] = std::exp(half_gamma + params.alpha()[i]);
        q.nu[i] = std::exp(half_gamma + params.beta()[i]);
        q.eta[i] = q.mu[i] * q.nu[i];
    }
    return q;
}

namespace {

// The four joint outcomes have unnormalized log weights
// (0, gamma+alpha_i+beta_j, gamma+alpha_j+beta_i, sum of both + rho);
// normalize after subtracting the max so nothing overflows.
DyadDistribution dyad_from_exponents(double x10, double x01, double rho) {
    const double x11 = x10 + x01 + rho;
    const double m = std::max({0.0, x10, x01, x11});
    const double w00 = std::exp(-m);
    const double w10 = std::exp(x10 - m);
    const double w01 = std::exp(x01 - m);
    const double w11 = std::exp(x11 - m);
    const double z = w00 + w10 + w01 + w11;
    return DyadDistribution{w00 / z, w10 / z, w01 / z, w11 / z};
}

void check_pair(int n, int i, int j) {
    if (i == j) throw std::domain_error("dyad requires two distinct nodes");
    if (i < 0 || j < 0 || i >= n || j >= n) throw std::domain_error("node id out of range");
}

}  // namespace

DyadDistribution dyad_distribution(const ModelParams& params, int i, int j) {
    check_pair(params.n(), i, j);
    const double x10 = params.gamma() + params.alpha()[i] + params.beta()[j];
    const double x01 = params.gamma() + params.alpha()[j] + params.beta()[i];
    return dyad_from_exponents(x10, x01, params.rho());
}

double omega_tilde_entry(const PlrQuantities& q, double rho, EdgeType code, int i, int j) {
    check_pair(static_cast<int>(q.mu.size()), i, j);
    switch (code) {
        case EdgeType::e00: return 1.0;
        case EdgeType::e10: return q.mu[i] * q.nu[j];
        case EdgeType::e01: return q.mu[j] * q.nu[i];
        case EdgeType::e11: return std::exp(rho) * q.eta[i] * q.eta[j];
    }
    return 0.0;
}

double omega_entry(const PlrQuantities& q, double rho, EdgeType code, int i, int j) {
    const double denom = 1.0 + q.mu[i] * q.nu[j] + q.mu[j] * q.nu[i] +
                         std::exp(rho) * q.eta[i] * q.eta[j];
    return omega_tilde_entry(q, rho, code, i, j) / denom;
}

namespace {

EdgeType draw_state(const DyadDistribution& d, double u) {
    double c = d.p00;
    if (u < c) return EdgeType::e00;
    c += d.p10;
    if (u < c) return EdgeType::e10;
    c += d.p01;
    if (u < c) return EdgeType::e01;
    return EdgeType::e11;
}

// Shared sampler; gamma_extra(i, j) is added to both directed exponents of
// the dyad (used for the within-community contamination term).
template <class GammaExtra>
graph::DirectedGraph sample_impl(const ModelParams& params, std::uint64_t seed,
                                 GammaExtra gamma_extra) {
    const int n = params.n();
    std::vector<std::tuple<int, int, EdgeType>> dyads;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double extra = gamma_extra(i, j);
            const double x10 = params.gamma() + extra + params.alpha()[i] + params.beta()[j];
            const double x01 = params.gamma() + extra + params.alpha()[j] + params.beta()[i];
            const DyadDistribution d = dyad_from_exponents(x10, x01, params.rho());
            Rng rng(derive_stream(seed, static_cast<std::uint64_t>(i),
                                  static_cast<std::uint64_t>(j)));
            const EdgeType st = draw_state(d, rng.next_double());
            if (st != EdgeType::e00) dyads.emplace_back(i, j, st);
        }
    }
    return graph::DirectedGraph::from_dyads(n, dyads);
}

}  // namespace

graph::DirectedGraph sample(const ModelParams& params, std::uint64_t seed) {
    return sample_impl(params, seed, [](int, int) { return 0.0; });
}

MisspecParams::MisspecParams(ModelParams base_params, double theta_value,
                             std::vector<int> community_labels)
    : base(std::move(base_params)), theta(theta_value), community(std::move(community_labels)) {
    const int n = base.n();
    if (community.empty()) {
        community.resize(n);
        for (int i = 0; i < n; ++i) community[i] = (i < n / 2) ? 0 : 1;
    }
    if (static_cast<int>(community.size()) != n)
        throw std::invalid_argument("community labels must have length n");
    for (int c : community)
        if (c != 0 && c != 1) throw std::invalid_argument("community labels must be 0 or 1");
    if (!std::isfinite(theta) || std::abs(theta) > ModelParams::kParamBound)
        throw std::domain_error("theta exceeds the supported bound of 50");
    if (theta != 0.0) {
        bool has0 = false, has1 = false;
        for (int c : community) (c == 0 ? has0 : has1) = true;
        single_community_warning = !(has0 && has1);
    }
}

DyadDistribution dyad_distribution_misspec(const MisspecParams& params, int i, int j) {
    check_pair(params.base.n(), i, j);
    const double extra = (params.community[i] == params.community[j]) ? params.theta : 0.0;
    const double x10 = params.base.gamma() + extra + params.base.alpha()[i] +
                       params.base.beta()[j];
    const double x01 = params.base.gamma() + extra + params.base.alpha()[j] +
                       params.base.beta()[i];
    return dyad_from_exponents(x10, x01, params.base.rho());
}

graph::DirectedGraph sample_misspecified(const MisspecParams& params, std::uint64_t seed) {
    return sample_impl(params.base, seed, [&params](int i, int j) {
        return (params.community[i] == params.community[j]) ? params.theta : 0.0;
    });
}

}  // namespace lcr::model
