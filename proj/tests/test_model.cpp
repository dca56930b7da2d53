#include <doctest.h>

#include <cmath>
#include <vector>

#include "lcr/model.hpp"
#include "lcr/rng.hpp"

using namespace lcr;
using model::ModelParams;

namespace {

ModelParams flat_params(int n, double rho, double gamma) {
    return ModelParams(n, rho, gamma, std::vector<double>(n, 0.0), std::vector<double>(n, 0.0));
}

}  // namespace

TEST_CASE("constructor recenters alpha/beta and folds the means into gamma") {
    std::vector<double> alpha = {1.0, 2.0, 3.0};
    std::vector<double> beta = {-1.0, 0.0, 0.5};
    ModelParams p(3, 0.3, -1.0, alpha, beta);
    double asum = 0, bsum = 0;
    for (int i = 0; i < 3; ++i) {
        asum += p.alpha()[i];
        bsum += p.beta()[i];
    }
    CHECK(std::abs(asum) < 1e-9);
    CHECK(std::abs(bsum) < 1e-9);
    CHECK(p.alpha_shift() == doctest::Approx(2.0));
    CHECK(p.beta_shift() == doctest::Approx(-1.0 / 6.0));
    CHECK(p.gamma() == doctest::Approx(-1.0 + 2.0 - 1.0 / 6.0));

    // Reparameterization invariance: the dyad distributions are unchanged.
    ModelParams centered(3, 0.3, -1.0 + 2.0 - 1.0 / 6.0,
                         {1.0 - 2.0, 2.0 - 2.0, 3.0 - 2.0},
                         {-1.0 + 1.0 / 6.0, 0.0 + 1.0 / 6.0, 0.5 + 1.0 / 6.0});
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (i == j) continue;
            const auto a = model::dyad_distribution(p, i, j);
            const auto b = model::dyad_distribution(centered, i, j);
            CHECK(a.p10 == doctest::Approx(b.p10).epsilon(1e-14));
            CHECK(a.p11 == doctest::Approx(b.p11).epsilon(1e-14));
        }
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(flat_params(2, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(flat_params(5, 60.0, 0), std::domain_error);
    CHECK_THROWS_AS(ModelParams(3, 0, 0, {1, 2}, {0, 0, 0}), std::invalid_argument);
    std::vector<double> bad = {0.0, 1.0 / 0.0, 0.0};
    CHECK_THROWS_AS(ModelParams(3, 0, 0, bad, {0, 0, 0}), std::invalid_argument);
}

TEST_CASE("dyad distribution: symmetric null gives 1/4 each") {
    ModelParams p = flat_params(4, 0.0, 0.0);
    const auto d = model::dyad_distribution(p, 0, 2);
    CHECK(d.p00 == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(d.p10 == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(d.p01 == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(d.p11 == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("dyad distribution matches the high-precision oracle") {
    // Frozen from a 50-digit evaluation of the joint-Bernoulli formula at
    // rho=0.5, gamma=-1, alpha_i=0.2, alpha_j=0, beta_i=0, beta_j=-0.1.
    ModelParams p(3, 0.5, -1.0, {0.2, 0.0, -0.2}, {0.0, -0.1, 0.1});
    const auto d = model::dyad_distribution(p, 0, 1);
    CHECK(d.p00 == doctest::Approx(0.49479327432965464).epsilon(1e-13));
    CHECK(d.p10 == doctest::Approx(0.20116793318614460).epsilon(1e-13));
    CHECK(d.p01 == doctest::Approx(0.18202427325578151).epsilon(1e-13));
    CHECK(d.p11 == doctest::Approx(0.12201451922841925).epsilon(1e-13));
}

TEST_CASE("dyad distribution normalizes and is stable at extreme parameters") {
    // Hand-built near-bound cases (already centered so the constructor does
    // not push gamma out of range), then moderate random draws.
    std::vector<ModelParams> cases;
    cases.emplace_back(3, 50.0, 50.0, std::vector<double>{50, -25, -25},
                       std::vector<double>{50, -25, -25});
    cases.emplace_back(3, -50.0, -50.0, std::vector<double>{-50, 25, 25},
                       std::vector<double>{50, -25, -25});
    cases.emplace_back(3, 50.0, -50.0, std::vector<double>{45, -45, 0},
                       std::vector<double>{-45, 45, 0});
    Rng rng(11);
    for (int t = 0; t < 50; ++t) {
        const int n = 5;
        std::vector<double> a(n), b(n);
        double am = 0, bm = 0;
        for (int i = 0; i < n; ++i) {
            a[i] = 60.0 * rng.next_double() - 30.0;
            b[i] = 60.0 * rng.next_double() - 30.0;
            am += a[i];
            bm += b[i];
        }
        for (int i = 0; i < n; ++i) {
            a[i] -= am / n;
            b[i] -= bm / n;
        }
        cases.emplace_back(n, 80.0 * rng.next_double() - 40.0, 30.0 * rng.next_double() - 15.0,
                           a, b);
    }
    for (const auto& p : cases) {
        const auto d = model::dyad_distribution(p, 0, 1);
        CHECK(std::isfinite(d.p00));
        CHECK(d.p00 + d.p10 + d.p01 + d.p11 == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(d.p00 >= 0.0);
        CHECK(d.p11 <= 1.0);
    }
}

TEST_CASE("dyad symmetry: swapping the pair swaps the one-way outcomes") {
    ModelParams p(4, 0.7, -0.5, {0.4, -0.1, 0.2, -0.5}, {0.1, 0.3, -0.2, -0.2});
    const auto d = model::dyad_distribution(p, 1, 3);
    const auto e = model::dyad_distribution(p, 3, 1);
    CHECK(d.p00 == doctest::Approx(e.p00).epsilon(1e-14));
    CHECK(d.p11 == doctest::Approx(e.p11).epsilon(1e-14));
    CHECK(d.p10 == doctest::Approx(e.p01).epsilon(1e-14));
    CHECK(d.p01 == doctest::Approx(e.p10).epsilon(1e-14));
}

TEST_CASE("dyad domain errors") {
    ModelParams p = flat_params(4, 0, 0);
    CHECK_THROWS_AS(model::dyad_distribution(p, 2, 2), std::domain_error);
    CHECK_THROWS_AS(model::dyad_distribution(p, 0, 4), std::domain_error);
}

TEST_CASE("plr quantities") {
    ModelParams id = flat_params(3, 0, 0);
    const auto q0 = model::plr(id);
    for (int i = 0; i < 3; ++i) {
        CHECK(q0.mu[i] == 1.0);
        CHECK(q0.nu[i] == 1.0);
        CHECK(q0.eta[i] == 1.0);
    }

    // gamma=-2, alpha_i=1, beta_i=0 is uncentered; build the centered
    // equivalent directly: mu_i = e^{gamma/2 + alpha_i} = e^0 = 1.
    ModelParams p(3, 0, -2.0 + 1.0, std::vector<double>(3, 0.0), std::vector<double>(3, 0.0));
    const auto q = model::plr(p);
    CHECK(q.mu[0] == doctest::Approx(std::exp(-0.5)));
    CHECK(q.nu[0] == doctest::Approx(std::exp(-0.5)));

    Rng rng(3);
    std::vector<double> a(5), b(5);
    for (int i = 0; i < 5; ++i) {
        a[i] = rng.next_double() - 0.5;
        b[i] = rng.next_double() - 0.5;
    }
    ModelParams r(5, 0.2, -1.0, a, b);
    const auto qr = model::plr(r);
    for (int i = 0; i < 5; ++i)
        CHECK(qr.eta[i] / (qr.mu[i] * qr.nu[i]) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("omega tilde and omega entries") {
    ModelParams p(4, 0.3, -0.8, {0.2, -0.2, 0.1, -0.1}, {0.05, -0.05, 0.3, -0.3});
    const auto q = model::plr(p);

    CHECK(model::omega_tilde_entry(q, p.rho(), EdgeType::e00, 0, 3) == 1.0);
    CHECK(model::omega_tilde_entry(q, p.rho(), EdgeType::e10, 0, 1) ==
          doctest::Approx(q.mu[0] * q.nu[1]).epsilon(1e-15));
    CHECK(model::omega_tilde_entry(q, p.rho(), EdgeType::e01, 0, 1) ==
          doctest::Approx(q.mu[1] * q.nu[0]).epsilon(1e-15));
    CHECK_THROWS_AS(model::omega_tilde_entry(q, p.rho(), EdgeType::e10, 1, 1),
                    std::domain_error);

    // The four omega entries sum to one and match the dyad distribution.
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            if (i == j) continue;
            double s = 0.0;
            const auto d = model::dyad_distribution(p, i, j);
            for (EdgeType t : kAllEdgeTypes) {
                const double w = model::omega_entry(q, p.rho(), t, i, j);
                CHECK(w == doctest::Approx(d.prob(t)).epsilon(1e-12));
                s += w;
            }
            CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
        }
}

TEST_CASE("omega tilde worked example: mu=(2,3), nu=(5,7)") {
    model::PlrQuantities q;
    q.mu = {2.0, 3.0};
    q.nu = {5.0, 7.0};
    q.eta = {10.0, 21.0};
    CHECK(model::omega_tilde_entry(q, 0.0, EdgeType::e10, 0, 1) == doctest::Approx(14.0));
    CHECK(model::omega_tilde_entry(q, 0.0, EdgeType::e11, 0, 1) == doctest::Approx(210.0));
}

TEST_CASE("sampling determinism and extreme regimes") {
    ModelParams hot = flat_params(20, 50.0, 50.0);
    const auto g1 = model::sample(hot, 9);
    CHECK(g1.mutual_dyads() == 20 * 19 / 2);
    CHECK(g1.oneway_dyads() == 0);

    ModelParams cold = flat_params(20, 0.0, -50.0);
    const auto g2 = model::sample(cold, 9);
    CHECK(g2.directed_edges() == 0);

    ModelParams mid = flat_params(30, 0.4, -1.0);
    const auto a = model::sample(mid, 1234);
    const auto b = model::sample(mid, 1234);
    CHECK(a.to_edge_list() == b.to_edge_list());
    const auto c = model::sample(mid, 1235);
    CHECK(a.to_edge_list() != c.to_edge_list());
}

TEST_CASE("empirical dyad frequencies match the exact distribution at 3 sigma") {
    const int n = 200;
    ModelParams p = flat_params(n, 0.0, -2.0);
    const auto g = model::sample(p, 77);
    const auto d = model::dyad_distribution(p, 0, 1);
    const double dyads = n * (n - 1) / 2.0;
    // Unordered dyad states: one-way pools the two directions.
    const double n11 = static_cast<double>(g.mutual_dyads());
    const double n1w = static_cast<double>(g.oneway_dyads());
    const double n00 = dyads - n11 - n1w;
    auto within = [&](double count, double prob) {
        const double se = std::sqrt(prob * (1.0 - prob) * dyads);
        return std::abs(count - prob * dyads) <= 3.0 * se;
    };
    CHECK(within(n11, d.p11));
    CHECK(within(n1w, d.p10 + d.p01));
    CHECK(within(n00, d.p00));
}

TEST_CASE("misspecified sampler: theta=0 reproduces sample() exactly") {
    ModelParams base(10, 0.4, -1.2, std::vector<double>(10, 0.0), std::vector<double>(10, 0.0));
    model::MisspecParams mp(base, 0.0, {});
    const auto a = model::sample(base, 5);
    const auto b = model::sample_misspecified(mp, 5);
    CHECK(a.to_edge_list() == b.to_edge_list());
}

TEST_CASE("misspecified sampler: strong within-community boost") {
    ModelParams base = flat_params(12, 0.0, 0.0);
    model::MisspecParams one(base, 50.0, std::vector<int>(12, 0));
    CHECK(one.single_community_warning);
    const auto g = model::sample_misspecified(one, 3);
    CHECK(g.mutual_dyads() == 12 * 11 / 2);

    // Default split is 50/50 by index; cross-community dyads keep the base law.
    model::MisspecParams half(base, 50.0, {});
    CHECK_FALSE(half.single_community_warning);
    const auto h = model::sample_misspecified(half, 3);
    int cross_mutual = 0;
    for (int i = 0; i < 6; ++i)
        for (int j = 6; j < 12; ++j)
            if (h.state(i, j) == EdgeType::e11) ++cross_mutual;
    CHECK(cross_mutual < 36);  // 36 cross dyads; base law keeps p11 = 1/4
    for (int i = 0; i < 6; ++i)
        for (int j = i + 1; j < 6; ++j) CHECK(h.state(i, j) == EdgeType::e11);
}

TEST_CASE("misspecified dyad distribution follows the quoted kernel verbatim") {
    ModelParams base(4, 0.3, -0.6, {0.1, -0.1, 0.2, -0.2}, {0.0, 0.1, -0.1, 0.0});
    model::MisspecParams mp(base, 0.25, {0, 0, 1, 1});
    // Same community: both directed exponents shift by theta.
    const auto d = model::dyad_distribution_misspec(mp, 0, 1);
    const double x10 = base.gamma() + 0.25 + base.alpha()[0] + base.beta()[1];
    const double x01 = base.gamma() + 0.25 + base.alpha()[1] + base.beta()[0];
    const double x11 = x10 + x01 + base.rho();
    const double z = 1.0 + std::exp(x10) + std::exp(x01) + std::exp(x11);
    CHECK(d.p10 == doctest::Approx(std::exp(x10) / z).epsilon(1e-13));
    CHECK(d.p11 == doctest::Approx(std::exp(x11) / z).epsilon(1e-13));
    // Cross community: the base law.
    const auto e = model::dyad_distribution_misspec(mp, 0, 2);
    const auto f = model::dyad_distribution(base, 0, 2);
    CHECK(e.p10 == doctest::Approx(f.p10).epsilon(1e-14));
}
