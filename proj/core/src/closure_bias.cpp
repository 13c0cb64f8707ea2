#include "omicsprep/closure_bias.hpp"

#include <cmath>

#include "omicsprep/error.hpp"
#include "omicsprep/feature_matrix.hpp"
#include "omicsprep/rng.hpp"
#include "omicsprep/stats.hpp"
#include "omicsprep/transforms.hpp"

namespace omicsprep {
namespace {

struct Correlations {
  std::vector<double> matrix;
  double mean_offdiag = 0.0;
};

Correlations correlations(const FeatureMatrix& m) {
  const std::size_t p = m.n_features();
  std::vector<std::vector<double>> cols(p);
  for (std::size_t j = 0; j < p; ++j) cols[j] = m.column(j);

  Correlations out{std::vector<double>(p * p, 0.0), 0.0};
  double sum = 0.0;
  for (std::size_t a = 0; a < p; ++a) {
    out.matrix[a * p + a] = 1.0;
    for (std::size_t b = a + 1; b < p; ++b) {
      const double r = stats::pearson(cols[a], cols[b]);
      out.matrix[a * p + b] = r;
      out.matrix[b * p + a] = r;
      sum += r;
    }
  }
  out.mean_offdiag = sum / static_cast<double>(p * (p - 1) / 2);
  return out;
}

}  // namespace

BiasReport closure_bias_experiment(std::size_t p, std::size_t n, std::uint64_t seed) {
  if (p < 2) throw ConfigError("closure bias experiment needs p >= 2");
  if (n < 100) throw ConfigError("closure bias experiment needs n >= 100");

  const CounterStream stream(seed, hash_label("closure_bias"));
  std::vector<double> values(n * p);
  for (std::size_t k = 0; k < values.size(); ++k) values[k] = std::exp(stream.normal(k));

  const FeatureMatrix raw(n, p, std::move(values), numbered_labels("s", n),
                          numbered_labels("x", p));
  const FeatureMatrix closed = closure(raw);

  auto before = correlations(raw);
  auto after = correlations(closed);
  return {p, n, std::move(before.matrix), std::move(after.matrix),
          before.mean_offdiag, after.mean_offdiag};
}

}  // namespace omicsprep
