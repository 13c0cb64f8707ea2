#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace omicsprep {

/// Two-group response with a batch (plate) label per observation.
struct LmmData {
  std::vector<double> y;
  std::vector<int> group;           ///< 0 = control, 1 = case
  std::vector<std::size_t> batch;   ///< arbitrary labels, need not be dense
};

enum class FitMethod { ols, ml, reml };
std::string_view method_name(FitMethod method);

/// Reference distribution for the Wald statistic of the group effect.
enum class WaldReference {
  normal,
  /// Student t with between/within denominator df: n - K - 1 when the group
  /// varies inside at least one batch, K - 2 when it is constant within every
  /// batch (the contrast is then a between-batch comparison).
  containment_t,
};

struct LmmOptions {
  double lambda_max = 1e6;   ///< upper end of sigma_b^2 / sigma_e^2
  double tolerance = 1e-8;   ///< absolute, on log(1 + lambda)
  int max_iterations = 200;
  std::size_t grid_points = 64;
  WaldReference reference = WaldReference::containment_t;
};

struct LmmFit {
  double mu_hat = 0.0;
  double beta_hat = 0.0;
  double sigma_b = 0.0;
  double sigma_e = 0.0;
  double se_beta = 0.0;
  double statistic = 0.0;
  double p_value = 1.0;
  double df = 0.0;  ///< denominator df of the reference; infinity for normal
  FitMethod method = FitMethod::reml;
  bool converged = true;
  double log_likelihood = 0.0;  ///< ML or REML log-likelihood at the optimum
  double lambda = 0.0;          ///< sigma_b^2 / sigma_e^2
  int iterations = 0;
};

/// Pooled two-sample t-test expressed as a regression on the group indicator.
/// Throws FitError for n < 3, a single group, or zero pooled variance.
LmmFit fit_ols(std::span<const double> y, std::span<const int> group);

/// Random-intercept model y = mu + beta * group + b_batch + e, fit by
/// profiling the variance ratio: for fixed lambda the fixed effects and
/// sigma_e^2 are closed-form GLS, and lambda is maximised on log(1 + lambda)
/// by a 64-point grid followed by Brent's method around the best grid point.
/// A non-converged search is returned with converged = false.
LmmFit fit_lmm(const LmmData& data, FitMethod method = FitMethod::reml,
               const LmmOptions& options = {});

/// Strict: reject iff p_value < alpha.
bool wald_test(const LmmFit& fit, double alpha);

/// Profiled log-likelihood as a function of lambda, exposed so callers (and
/// tests) can inspect the objective the fitter maximises.
class ProfileLikelihood {
 public:
  ProfileLikelihood(const LmmData& data, FitMethod method);

  /// Profiled (RE)ML log-likelihood in the original units of y.
  double operator()(double lambda) const;

  std::size_t n_batches() const noexcept { return batches_.size(); }
  /// True when the group is constant inside every batch.
  bool group_between_only() const noexcept { return between_only_; }

  struct Solution {
    double mu = 0.0;
    double beta = 0.0;
    double sigma2 = 0.0;   ///< sigma_e^2
    double var_beta = 0.0;
    double objective = 0.0;
  };
  Solution solve(double lambda) const;

 private:
  struct Batch {
    double n = 0.0;
    double g_mean = 0.0;
    double y_mean = 0.0;
    double w_gg = 0.0;  // within-batch centred sums
    double w_gy = 0.0;
    double w_yy = 0.0;
  };
  std::vector<Batch> batches_;
  double n_ = 0.0;
  double y_center_ = 0.0;
  double y_scale_ = 1.0;
  bool reml_ = true;
  bool between_only_ = false;
};

/// Brent's derivative-free minimiser on [lo, hi].
struct MinimizeResult {
  double x = 0.0;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};
MinimizeResult brent_minimize(const std::function<double(double)>& f, double lo,
                              double hi, double tolerance, int max_iterations);

}  // namespace omicsprep
