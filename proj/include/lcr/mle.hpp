#ifndef LCR_MLE_HPP
#define LCR_MLE_HPP

#include <optional>
#include <vector>

#include "lcr/graph.hpp"
#include "lcr/model.hpp"

namespace lcr::mle {

// Degree-boundary screen: a node with in- or out-degree 0 or n-1 certifies
// that the likelihood supremum is on the boundary; the converse is unknown
// (the full polyhedral conditions are out of scope).
struct ExistenceCheck {
    std::vector<bool> node_flags;
    bool definitely_nonexistent = false;
};

ExistenceCheck existence_check(const graph::DirectedGraph& g);

struct SolverConfig {
    double tol = 1e-8;      // gradient max-norm at convergence
    int max_iter = 500;     // coordinate-ascent sweeps
    double bound = 30.0;    // |parameter| beyond this declares divergence
    bool fix_rho = false;   // restricted fit with rho frozen
    double rho_fixed = 0.0;
};

struct MleFit {
    int n = 0;
    double rho = 0.0;
    double gamma = 0.0;
    std::vector<double> alpha;  // recentered
    std::vector<double> beta;
    bool converged = false;
    bool diverged = false;  // a parameter escaped the bound
    int iterations = 0;
    double max_abs_param = 0.0;
    double log_likelihood = 0.0;
    double grad_max_norm = 0.0;
    ExistenceCheck existence;
};

// Block-coordinate ascent with damped one-dimensional Newton steps on the
// exact dyad-factorized likelihood; alpha/beta recentered (means absorbed
// into gamma) after every sweep. The likelihood never decreases.
MleFit fit(const graph::DirectedGraph& g, const SolverConfig& config = {});

double log_likelihood(const graph::DirectedGraph& g, double rho, double gamma,
                      const std::vector<double>& alpha, const std::vector<double>& beta);

struct LrtResult {
    bool defined = false;
    double statistic = 0.0;
    double p_value = 1.0;  // upper chi-square(1) tail; the reference law is conjectural
    std::string flag;
    MleFit full;
    MleFit restricted;
};

// Likelihood-ratio statistic for rho = 0 (the only null the classical
// algorithm supports); undefined when either fit fails.
LrtResult lrt(const graph::DirectedGraph& g, const SolverConfig& config = {});

}  // namespace lcr::mle

#endif
