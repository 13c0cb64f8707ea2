#include "omicsprep/lmm.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <unordered_map>

#include "omicsprep/error.hpp"

namespace omicsprep {
namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

double two_sided_p(double statistic, double df) {
  if (!std::isfinite(statistic)) return 0.0;
  const double z = std::abs(statistic);
  if (std::isinf(df)) {
    return std::clamp(2.0 * boost::math::cdf(boost::math::complement(
                                boost::math::normal_distribution<>(), z)),
                      0.0, 1.0);
  }
  if (!(df > 0.0)) return 1.0;
  return std::clamp(2.0 * boost::math::cdf(boost::math::complement(
                              boost::math::students_t_distribution<>(df), z)),
                    0.0, 1.0);
}

void check_groups(std::span<const int> group, std::size_t n) {
  if (group.size() != n) throw FitError("y and group differ in length");
  std::size_t cases = 0;
  for (int g : group) {
    if (g != 0 && g != 1) throw FitError("group indicator must be 0 or 1");
    cases += static_cast<std::size_t>(g);
  }
  if (cases == 0 || cases == n) {
    throw FitError("both groups must be present to estimate the group effect");
  }
}

}  // namespace

std::string_view method_name(FitMethod method) {
  switch (method) {
    case FitMethod::ols:
      return "ols";
    case FitMethod::ml:
      return "ml";
    case FitMethod::reml:
      return "reml";
  }
  return "reml";
}

LmmFit fit_ols(std::span<const double> y, std::span<const int> group) {
  const std::size_t n = y.size();
  if (n < 3) throw FitError("OLS fit needs at least 3 observations");
  check_groups(group, n);

  double sum[2] = {0.0, 0.0};
  double count[2] = {0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    sum[group[i]] += y[i];
    count[group[i]] += 1.0;
  }
  const double mean0 = sum[0] / count[0];
  const double mean1 = sum[1] / count[1];
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = y[i] - (group[i] ? mean1 : mean0);
    rss += d * d;
  }
  const double df = static_cast<double>(n) - 2.0;
  const double pooled = rss / df;
  if (!(pooled > 0.0)) throw FitError("pooled variance is zero");

  LmmFit fit;
  fit.method = FitMethod::ols;
  fit.mu_hat = mean0;
  fit.beta_hat = mean1 - mean0;
  fit.sigma_b = 0.0;
  fit.sigma_e = std::sqrt(pooled);
  fit.se_beta = std::sqrt(pooled * (1.0 / count[0] + 1.0 / count[1]));
  fit.statistic = fit.beta_hat / fit.se_beta;
  fit.df = df;
  fit.p_value = two_sided_p(fit.statistic, df);
  fit.converged = true;
  const double nd = static_cast<double>(n);
  fit.log_likelihood = -0.5 * nd * (kLog2Pi + std::log(rss / nd) + 1.0);
  return fit;
}

ProfileLikelihood::ProfileLikelihood(const LmmData& data, FitMethod method)
    : reml_(method == FitMethod::reml) {
  if (method == FitMethod::ols) throw FitError("ProfileLikelihood needs ml or reml");
  const std::size_t n = data.y.size();
  if (n < 4) throw FitError("mixed model fit needs at least 4 observations");
  if (data.batch.size() != n) throw FitError("y and batch differ in length");
  check_groups(data.group, n);
  for (double v : data.y) {
    if (!std::isfinite(v)) throw FitError("response contains a non-finite value");
  }

  // Work on a standardised response; results are mapped back in solve().
  n_ = static_cast<double>(n);
  double mean = 0.0;
  for (double v : data.y) mean += v;
  mean /= n_;
  double ss = 0.0;
  for (double v : data.y) ss += (v - mean) * (v - mean);
  if (!(ss > 0.0)) throw FitError("response has zero variance");
  y_center_ = mean;
  y_scale_ = std::sqrt(ss / (n_ - 1.0));

  std::unordered_map<std::size_t, std::size_t> dense;
  std::vector<std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < n; ++i) {
    auto [it, inserted] = dense.try_emplace(data.batch[i], members.size());
    if (inserted) members.emplace_back();
    members[it->second].push_back(i);
  }

  between_only_ = true;
  batches_.reserve(members.size());
  for (const auto& idx : members) {
    Batch b;
    b.n = static_cast<double>(idx.size());
    for (auto i : idx) {
      b.g_mean += data.group[i];
      b.y_mean += (data.y[i] - y_center_) / y_scale_;
    }
    b.g_mean /= b.n;
    b.y_mean /= b.n;
    for (auto i : idx) {
      const double dg = data.group[i] - b.g_mean;
      const double dy = (data.y[i] - y_center_) / y_scale_ - b.y_mean;
      b.w_gg += dg * dg;
      b.w_gy += dg * dy;
      b.w_yy += dy * dy;
    }
    if (b.w_gg > 0.0) between_only_ = false;
    batches_.push_back(b);
  }
}

ProfileLikelihood::Solution ProfileLikelihood::solve(double lambda) const {
  // H_k^{-1} = (I - 11'/n_k) + w_k 11'/n_k with w_k = 1 / (1 + lambda n_k),
  // so every quadratic form splits into a within part and a weighted
  // between part over batch means.
  double total_w = 0.0, g_bar = 0.0, y_bar = 0.0, log_det_h = 0.0;
  for (const auto& b : batches_) {
    const double wn = b.n / (1.0 + lambda * b.n);
    total_w += wn;
    g_bar += wn * b.g_mean;
    y_bar += wn * b.y_mean;
    log_det_h += std::log1p(lambda * b.n);
  }
  g_bar /= total_w;
  y_bar /= total_w;

  double s_gg = 0.0, s_gy = 0.0, s_yy = 0.0;
  for (const auto& b : batches_) {
    const double wn = b.n / (1.0 + lambda * b.n);
    const double dg = b.g_mean - g_bar;
    const double dy = b.y_mean - y_bar;
    s_gg += b.w_gg + wn * dg * dg;
    s_gy += b.w_gy + wn * dg * dy;
    s_yy += b.w_yy + wn * dy * dy;
  }
  if (!(s_gg > 0.0)) throw FitError("group effect is not estimable");

  const double beta = s_gy / s_gg;
  const double rss = std::max(s_yy - beta * s_gy, std::numeric_limits<double>::min());
  const double dof = reml_ ? n_ - 2.0 : n_;
  const double sigma2 = rss / dof;

  double objective = -0.5 * (dof * (kLog2Pi + std::log(sigma2) + 1.0) + log_det_h);
  if (reml_) objective -= 0.5 * std::log(total_w * s_gg);
  // Jacobian of the standardisation, so values are comparable across fits
  // of the same data in its original units.
  objective -= dof * std::log(y_scale_);

  Solution s;
  s.beta = beta * y_scale_;
  s.mu = y_center_ + (y_bar - beta * g_bar) * y_scale_;
  s.sigma2 = sigma2 * y_scale_ * y_scale_;
  s.var_beta = s.sigma2 / s_gg;
  s.objective = objective;
  return s;
}

double ProfileLikelihood::operator()(double lambda) const { return solve(lambda).objective; }

MinimizeResult brent_minimize(const std::function<double(double)>& f, double lo,
                              double hi, double tolerance, int max_iterations) {
  const double golden = 0.5 * (3.0 - std::sqrt(5.0));
  constexpr double rel = 1e-12;
  double a = lo, b = hi;
  double x = a + golden * (b - a);
  double w = x, v = x;
  double fx = f(x);
  double fw = fx, fv = fx;
  double d = 0.0, e = 0.0;

  MinimizeResult result;
  for (int iter = 0; iter < max_iterations; ++iter) {
    const double mid = 0.5 * (a + b);
    const double tol1 = rel * std::abs(x) + tolerance / 3.0;
    const double tol2 = 2.0 * tol1;
    if (std::abs(x - mid) <= tol2 - 0.5 * (b - a)) {
      result = {x, fx, iter, true};
      return result;
    }

    bool golden_step = true;
    if (std::abs(e) > tol1) {
      double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      const double e_prev = e;
      e = d;
      if (std::abs(p) < std::abs(0.5 * q * e_prev) && p > q * (a - x) && p < q * (b - x)) {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = x < mid ? tol1 : -tol1;
        golden_step = false;
      }
    }
    if (golden_step) {
      e = (x < mid ? b : a) - x;
      d = golden * e;
    }

    const double u = x + (std::abs(d) >= tol1 ? d : (d > 0.0 ? tol1 : -tol1));
    const double fu = f(u);
    if (fu <= fx) {
      (u < x ? b : a) = x;
      v = w, fv = fw;
      w = x, fw = fx;
      x = u, fx = fu;
    } else {
      (u < x ? a : b) = u;
      if (fu <= fw || w == x) {
        v = w, fv = fw;
        w = u, fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u, fv = fu;
      }
    }
  }
  result = {x, fx, max_iterations, false};
  return result;
}

LmmFit fit_lmm(const LmmData& data, FitMethod method, const LmmOptions& options) {
  if (method == FitMethod::ols) return fit_ols(data.y, data.group);
  if (!(options.lambda_max > 0.0) || options.grid_points < 2) {
    throw FitError("invalid optimiser options");
  }
  const ProfileLikelihood profile(data, method);

  // Search on t = log(1 + lambda): the grid guards against multiple local
  // optima, Brent refines inside the bracket around the best grid point.
  const double t_max = std::log1p(options.lambda_max);
  const std::size_t m = options.grid_points;
  auto objective_at = [&](double t) { return profile(std::expm1(t)); };

  std::vector<double> grid(m), values(m);
  std::size_t best = 0;
  for (std::size_t k = 0; k < m; ++k) {
    grid[k] = t_max * static_cast<double>(k) / static_cast<double>(m - 1);
    values[k] = objective_at(grid[k]);
    if (values[k] > values[best]) best = k;
  }

  double t_hat = grid[best];
  double f_hat = values[best];
  bool converged = true;
  int iterations = 0;
  const double lo = grid[best == 0 ? 0 : best - 1];
  const double hi = grid[std::min(best + 1, m - 1)];
  if (hi > lo) {
    const auto r = brent_minimize([&](double t) { return -objective_at(t); }, lo, hi,
                                  options.tolerance, options.max_iterations);
    converged = r.converged;
    iterations = r.iterations;
    if (-r.value > f_hat) {
      t_hat = r.x;
      f_hat = -r.value;
    }
  }
  // A profile that does not rise above its value at lambda = 0 (flat, as with
  // one batch or singleton batches) resolves to the boundary.
  if (values.front() >= f_hat - 1e-10) {
    t_hat = 0.0;
    f_hat = values.front();
  }

  const double lambda = std::expm1(t_hat);
  const auto sol = profile.solve(lambda);

  LmmFit fit;
  fit.method = method;
  fit.mu_hat = sol.mu;
  fit.beta_hat = sol.beta;
  fit.sigma_e = std::sqrt(sol.sigma2);
  fit.sigma_b = std::sqrt(sol.sigma2 * lambda);
  fit.lambda = lambda;
  fit.se_beta = std::sqrt(sol.var_beta);
  fit.statistic = sol.beta / fit.se_beta;
  fit.log_likelihood = sol.objective;
  fit.converged = converged;
  fit.iterations = iterations;

  const double n = static_cast<double>(data.y.size());
  const double k = static_cast<double>(profile.n_batches());
  if (options.reference == WaldReference::normal) {
    fit.df = std::numeric_limits<double>::infinity();
  } else {
    fit.df = profile.group_between_only() ? k - 2.0 : n - k - 1.0;
  }
  fit.p_value = two_sided_p(fit.statistic, fit.df);
  return fit;
}

bool wald_test(const LmmFit& fit, double alpha) { return fit.p_value < alpha; }

}  // namespace omicsprep
