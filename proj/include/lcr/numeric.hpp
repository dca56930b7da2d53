#ifndef LCR_NUMERIC_HPP
#define LCR_NUMERIC_HPP

#include <cstddef>
#include <vector>

namespace lcr {

// Standard normal CDF via erfc; absolute accuracy better than 1e-14
// (erfc is correctly rounded to < 1 ulp in glibc).
double norm_cdf(double x);

// Two-sided tail probability P(|N(0,1)| >= |z|).
double norm_two_sided_p(double z);

// Standard normal quantile, |error| < 1e-12 absolute over p in (0,1):
// rational initial approximation polished by one Newton step on norm_cdf.
double norm_quantile(double p);

// Upper z critical value for a two-sided level-alpha test, z_{alpha/2}.
double z_alpha_half(double alpha);

// Upper tail of the chi-square distribution with 1 degree of freedom.
double chi2_1_sf(double x);

// Neumaier compensated accumulator; deterministic given input order.
class KahanSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

double mean(const std::vector<double>& v);
// Unbiased sample variance (divides by size-1); 0 for fewer than 2 points.
double sample_variance(const std::vector<double>& v);
double sample_sd(const std::vector<double>& v);

// Kolmogorov-Smirnov distance of a sample against the standard normal.
// Sorts a copy of the sample.
double ks_statistic_normal(std::vector<double> sample);

// Asymptotic KS p-value with Stephens' small-sample correction:
// lambda = (sqrt(n) + 0.12 + 0.11/sqrt(n)) * d.
double ks_pvalue(double d, std::size_t n);

}  // namespace lcr

#endif
