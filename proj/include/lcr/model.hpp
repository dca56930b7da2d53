#ifndef LCR_MODEL_HPP
#define LCR_MODEL_HPP

#include <cstdint>
#include <vector>

#include "lcr/edge_type.hpp"
#include "lcr/graph.hpp"

namespace lcr::model {

// Parameter vector theta = (rho, gamma, alpha_1..alpha_n, beta_1..beta_n).
// The constructor recenters alpha and beta to mean zero and absorbs the two
// means into gamma, which leaves every dyad probability unchanged; the applied
// shifts are recorded. All parameters must be finite and, after recentering,
// bounded by kParamBound in absolute value.
class ModelParams {
public:
    static constexpr double kParamBound = 50.0;
    static constexpr double kCenterTol = 1e-9;

    ModelParams(int n, double rho, double gamma, std::vector<double> alpha,
                std::vector<double> beta);

    int n() const { return n_; }
    double rho() const { return rho_; }
    double gamma() const { return gamma_; }
    const std::vector<double>& alpha() const { return alpha_; }
    const std::vector<double>& beta() const { return beta_; }
    double alpha_shift() const { return alpha_shift_; }
    double beta_shift() const { return beta_shift_; }

private:
    int n_;
    double rho_;
    double gamma_;
    std::vector<double> alpha_;
    std::vector<double> beta_;
    double alpha_shift_ = 0.0;  // amount subtracted from every alpha_i
    double beta_shift_ = 0.0;
};

// mu_i = e^{gamma/2 + alpha_i}, nu_i = e^{gamma/2 + beta_i}, eta_i = mu_i nu_i.
struct PlrQuantities {
    std::vector<double> mu;
    std::vector<double> nu;
    std::vector<double> eta;
};

PlrQuantities plr(const ModelParams& params);

// Joint distribution of (A_ij, A_ji) for one ordered pair (i, j).
struct DyadDistribution {
    double p00, p10, p01, p11;
    double prob(EdgeType t) const {
        switch (t) {
            case EdgeType::e00: return p00;
            case EdgeType::e10: return p10;
            case EdgeType::e01: return p01;
            case EdgeType::e11: return p11;
        }
        return 0.0;
    }
};

// Exact four-outcome dyad distribution, evaluated in log space with
// max-subtraction so no intermediate overflows within the parameter bound.
DyadDistribution dyad_distribution(const ModelParams& params, int i, int j);

// Entry of the rank-structured factor for edge type `code` at (i, j):
// 1, mu_i nu_j, mu_j nu_i, or e^rho eta_i eta_j.
double omega_tilde_entry(const PlrQuantities& plr, double rho, EdgeType code, int i, int j);

// Probability that the ordered pair (i, j) has the given type: the factor
// above divided by 1 + mu_i nu_j + mu_j nu_i + e^rho eta_i eta_j.
double omega_entry(const PlrQuantities& plr, double rho, EdgeType code, int i, int j);

// Draw a graph. Every unordered dyad {i<j} uses its own derived RNG substream
// keyed by (seed, i, j) and consumes exactly one uniform, so the result does
// not depend on traversal or scheduling order.
graph::DirectedGraph sample(const ModelParams& params, std::uint64_t seed);

// Two-community contamination: dyads within the same community have gamma
// replaced by gamma + theta in both directed terms. theta = 0 reproduces
// sample() exactly.
struct MisspecParams {
    MisspecParams(ModelParams base_params, double theta_value, std::vector<int> community_labels);

    ModelParams base;
    double theta;
    std::vector<int> community;  // entries in {0, 1}; defaults to a 50/50 split by index
    bool single_community_warning = false;  // theta != 0 with only one label present
};

DyadDistribution dyad_distribution_misspec(const MisspecParams& params, int i, int j);
graph::DirectedGraph sample_misspecified(const MisspecParams& params, std::uint64_t seed);

}  // namespace lcr::model

#endif
