#include "support/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace testsupport {

namespace {

// Lower regularized incomplete gamma by series expansion (x < a + 1).
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < 500; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized incomplete gamma by Lentz continued fraction (x >= a + 1).
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gamma_q(double a, double x) {
  if (a <= 0.0 || x < 0.0) {
    throw std::invalid_argument("gamma_q domain");
  }
  if (x == 0.0) return 1.0;
  return x < a + 1.0 ? 1.0 - gamma_p_series(a, x) : gamma_q_cf(a, x);
}

double chi2_sf(double x, double k) { return gamma_q(k / 2.0, x / 2.0); }

double chi2_gof_pvalue(std::span<const std::int64_t> observed,
                       std::span<const double> probs) {
  if (observed.size() != probs.size() || observed.empty()) {
    throw std::invalid_argument("chi2_gof_pvalue shape mismatch");
  }
  const double n = static_cast<double>(
      std::accumulate(observed.begin(), observed.end(), std::int64_t{0}));
  // Pool small-expectation cells, largest expectations first so pooling only
  // merges the sparse tail.
  std::vector<std::size_t> order(observed.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return probs[a] > probs[b]; });
  std::vector<double> exp_cells;
  std::vector<double> obs_cells;
  double pool_exp = 0.0;
  double pool_obs = 0.0;
  for (std::size_t idx : order) {
    const double e = n * probs[idx];
    const double o = static_cast<double>(observed[idx]);
    if (e >= 5.0) {
      exp_cells.push_back(e);
      obs_cells.push_back(o);
    } else {
      pool_exp += e;
      pool_obs += o;
    }
  }
  if (pool_exp > 0.0) {
    exp_cells.push_back(pool_exp);
    obs_cells.push_back(pool_obs);
  }
  if (exp_cells.size() < 2) {
    throw std::invalid_argument("chi2_gof_pvalue: not enough cells after pooling");
  }
  double stat = 0.0;
  for (std::size_t c = 0; c < exp_cells.size(); ++c) {
    const double d = obs_cells[c] - exp_cells[c];
    stat += d * d / exp_cells[c];
  }
  return chi2_sf(stat, static_cast<double>(exp_cells.size() - 1));
}

double kolmogorov_q(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += sign * term;
    sign = -sign;
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_pvalue_from_cdf(std::span<const double> sorted_cdf_values) {
  const std::size_t n = sorted_cdf_values.size();
  if (n < 5) {
    throw std::invalid_argument("ks test needs at least 5 samples");
  }
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = sorted_cdf_values[i];
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
  }
  const double sn = std::sqrt(static_cast<double>(n));
  return kolmogorov_q((sn + 0.12 + 0.11 / sn) * d);
}

double beta_cdf_int(std::int64_t a, std::int64_t b, double x) {
  if (a < 1 || b < 1) {
    throw std::invalid_argument("beta_cdf_int needs integer parameters >= 1");
  }
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  // I_x(a, b) = sum_{j=a}^{a+b-1} C(a+b-1, j) x^j (1-x)^(a+b-1-j)
  const std::int64_t m = a + b - 1;
  double sum = 0.0;
  for (std::int64_t j = a; j <= m; ++j) {
    double log_term = std::lgamma(m + 1.0) - std::lgamma(j + 1.0) -
                      std::lgamma(m - j + 1.0) + j * std::log(x) +
                      (m - j) * std::log1p(-x);
    sum += std::exp(log_term);
  }
  return std::clamp(sum, 0.0, 1.0);
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("total_variation shape mismatch");
  }
  double tv = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    tv += std::abs(p[i] - q[i]);
  }
  return 0.5 * tv;
}

double mean(std::span<const double> xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double variance(std::span<const double> xs) {
  const double m = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return s / static_cast<double>(xs.size());
}

}  // namespace testsupport
