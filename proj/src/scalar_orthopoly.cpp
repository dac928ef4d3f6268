#include "mvop/scalar_orthopoly.hpp"

#include "mvop/errors.hpp"
#include "mvop/tridiagonal_eigen.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <tuple>

namespace mvop {
namespace {

// log Gamma for strictly positive arguments; every call site guarantees x > 0.
double log_gamma_pos(double x) {
  if (!(x > 0.0)) {
    throw NumericalError("log_gamma_pos: non-positive argument " + std::to_string(x));
  }
  return std::lgamma(x);
}

void check_index(int n, const char* who) {
  if (n < 0) throw ParameterError(std::string(who) + ": degree must be non-negative");
}

}  // namespace

JacobiParams::JacobiParams(double alpha, double beta) : alpha_(alpha), beta_(beta) {
  if (!(alpha > -1.0) || !(beta > -1.0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
    throw ParameterError("Jacobi exponents must satisfy alpha > -1 and beta > -1 (got alpha=" +
                         std::to_string(alpha) + ", beta=" + std::to_string(beta) + ")");
  }
}

double jacobi_weight(const JacobiParams& params, double x) {
  return std::pow(1.0 - x, params.alpha()) * std::pow(1.0 + x, params.beta());
}

void jacobi_eval_all(const JacobiParams& params, double x, std::span<double> out) {
  if (out.empty()) return;
  const double a = params.alpha();
  const double b = params.beta();
  out[0] = 1.0;
  if (out.size() == 1) return;
  out[1] = (a + 1.0) + 0.5 * (a + b + 2.0) * (x - 1.0);
  const double ab2 = a * a - b * b;
  for (std::size_t k = 2; k < out.size(); ++k) {
    const double n = static_cast<double>(k);
    const double s = 2.0 * n + a + b;
    const double c1 = 2.0 * n * (n + a + b) * (s - 2.0);
    const double c2 = (s - 1.0) * ab2;
    const double c3 = (s - 2.0) * (s - 1.0) * s;
    const double c4 = 2.0 * (n + a - 1.0) * (n + b - 1.0) * s;
    out[k] = ((c2 + c3 * x) * out[k - 1] - c4 * out[k - 2]) / c1;
  }
}

double jacobi_eval(const JacobiParams& params, int n, double x) {
  check_index(n, "jacobi_eval");
  if (n == 0) return 1.0;
  std::vector<double> buf(static_cast<std::size_t>(n) + 1);
  jacobi_eval_all(params, x, buf);
  return buf.back();
}

double jacobi_deriv(const JacobiParams& params, int n, double x, int order) {
  check_index(n, "jacobi_deriv");
  if (order != 1 && order != 2) throw ParameterError("jacobi_deriv: order must be 1 or 2");
  if (n < order) return 0.0;
  const double ab = params.alpha() + params.beta();
  double factor = 0.5 * (n + ab + 1.0);
  if (order == 2) factor *= 0.5 * (n + ab + 2.0);
  return factor * jacobi_eval(params.shifted(order), n - order, x);
}

JacobiTable jacobi_table(const JacobiParams& params, int nmax, double x) {
  check_index(nmax, "jacobi_table");
  const auto len = static_cast<std::size_t>(nmax) + 1;
  JacobiTable t{std::vector<double>(len), std::vector<double>(len, 0.0),
                std::vector<double>(len, 0.0)};
  jacobi_eval_all(params, x, t.value);
  const double ab = params.alpha() + params.beta();
  if (nmax >= 1) {
    std::vector<double> shifted(len - 1);
    jacobi_eval_all(params.shifted(1), x, shifted);
    for (std::size_t k = 1; k < len; ++k) t.deriv1[k] = 0.5 * (k + ab + 1.0) * shifted[k - 1];
  }
  if (nmax >= 2) {
    std::vector<double> shifted(len - 2);
    jacobi_eval_all(params.shifted(2), x, shifted);
    for (std::size_t k = 2; k < len; ++k) {
      t.deriv2[k] = 0.25 * (k + ab + 1.0) * (k + ab + 2.0) * shifted[k - 2];
    }
  }
  return t;
}

double jacobi_zeroth_moment(double a, double b) {
  return std::exp((a + b + 1.0) * std::numbers::ln2 + log_gamma_pos(a + 1.0) +
                  log_gamma_pos(b + 1.0) - log_gamma_pos(a + b + 2.0));
}

// log h_n = log h_0 + sum_k log(h_k / h_{k-1}) with
//   h_k / h_{k-1} = (a+k)(b+k)(a+b+2k-1) / (k (a+b+k)(a+b+2k+1)).
// The ratios stay near one, so the sum is far more accurate than a difference
// of large log-Gamma values and still cannot overflow.
double scalar_jacobi_norm(const JacobiParams& params, int n) {
  check_index(n, "scalar_jacobi_norm");
  return scalar_jacobi_norms(params, n).back();
}

std::vector<double> scalar_jacobi_norms(const JacobiParams& params, int nmax) {
  check_index(nmax, "scalar_jacobi_norms");
  const double a = params.alpha();
  const double b = params.beta();
  std::vector<double> out(static_cast<std::size_t>(nmax) + 1);
  double log_h = std::log(jacobi_zeroth_moment(a, b));
  out[0] = std::exp(log_h);
  for (int k = 1; k <= nmax; ++k) {
    if (k == 1) {
      log_h += std::log((a + 1.0) * (b + 1.0) / (a + b + 3.0));
    } else {
      log_h += std::log((a + k) * (b + k) * (a + b + 2.0 * k - 1.0) /
                        (k * (a + b + k) * (a + b + 2.0 * k + 1.0)));
    }
    out[k] = std::exp(log_h);
  }
  return out;
}

// k_n / k_{n-1} = (a+b+2n)(a+b+2n-1) / (2n (a+b+n)); at n = 1 this is (a+b+2)/2.
double log_leading_coefficient(const JacobiParams& params, int n) {
  check_index(n, "log_leading_coefficient");
  const double ab = params.alpha() + params.beta();
  double acc = 0.0;
  for (int k = 1; k <= n; ++k) {
    if (k == 1) {
      acc += std::log(0.5 * (ab + 2.0));
    } else {
      acc += std::log((ab + 2.0 * k) * (ab + 2.0 * k - 1.0) / (2.0 * k * (ab + k)));
    }
  }
  return acc;
}

namespace {

QuadratureRule golub_welsch(double a, double b, int m) {
  std::vector<double> diag(static_cast<std::size_t>(m));
  std::vector<double> off(static_cast<std::size_t>(m - 1));
  const double ab = a + b;
  for (int k = 0; k < m; ++k) {
    if (k == 0) {
      diag[0] = (b - a) / (ab + 2.0);
    } else {
      const double s = 2.0 * k + ab;
      diag[k] = (b * b - a * a) / (s * (s + 2.0));
    }
  }
  for (int k = 1; k < m; ++k) {
    const double s = 2.0 * k + ab;
    double v;
    if (k == 1) {
      // (k + a + b) / (s - 1) cancels; keeps a + b = -1 well defined
      v = 4.0 * (1.0 + a) * (1.0 + b) / ((ab + 2.0) * (ab + 2.0) * (ab + 3.0));
    } else {
      v = 4.0 * k * (k + a) * (k + b) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
    }
    off[k - 1] = std::sqrt(v);
  }

  Eigen::MatrixXd first_row = Eigen::MatrixXd::Zero(1, m);
  first_row(0, 0) = 1.0;
  try {
    tridiagonal_ql(diag, off, first_row);
  } catch (const NumericalError& err) {
    throw NumericalError("gauss_jacobi_rule(a=" + std::to_string(a) + ", b=" + std::to_string(b) +
                         ", m=" + std::to_string(m) + "): " + err.what());
  }

  const double mu0 = jacobi_zeroth_moment(a, b);
  QuadratureRule rule;
  rule.domain = {-1.0, 1.0};
  rule.endpoint_exponents = {a, b};
  rule.nodes = std::move(diag);
  rule.weights.resize(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) rule.weights[k] = mu0 * first_row(0, k) * first_row(0, k);
  return rule;
}

}  // namespace

QuadratureRule gauss_jacobi_rule(double a, double b, int m) {
  if (!(a > -1.0) || !(b > -1.0)) {
    throw ParameterError("gauss_jacobi_rule: exponents must exceed -1");
  }
  if (m < 1) throw ParameterError("gauss_jacobi_rule: need at least one node");

  static std::mutex cache_mutex;
  static std::map<std::tuple<double, double, int>, QuadratureRule> cache;
  const auto key = std::make_tuple(a, b, m);
  {
    std::lock_guard lock(cache_mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  QuadratureRule rule = golub_welsch(a, b, m);
  std::lock_guard lock(cache_mutex);
  return cache.try_emplace(key, std::move(rule)).first->second;
}

QuadratureRule map_rule(const QuadratureRule& rule, double lo, double hi) {
  if (!(lo < hi)) throw ParameterError("map_rule: need lo < hi");
  const auto [from_lo, from_hi] = rule.domain;
  if (from_lo == lo && from_hi == hi) return rule;
  const double ratio = (hi - lo) / (from_hi - from_lo);
  const double power =
      rule.endpoint_exponents.first + rule.endpoint_exponents.second + 1.0;
  const double wscale = std::pow(ratio, power);

  QuadratureRule out;
  out.domain = {lo, hi};
  out.endpoint_exponents = rule.endpoint_exponents;
  out.nodes.reserve(rule.size());
  out.weights.reserve(rule.size());
  for (std::size_t k = 0; k < rule.size(); ++k) {
    out.nodes.push_back(lo + (rule.nodes[k] - from_lo) * ratio);
    out.weights.push_back(rule.weights[k] * wscale);
  }
  return out;
}

double chebyshev_U(int n, double x) {
  if (n < -1) throw ParameterError("chebyshev_U: n must be >= -1");
  if (n == -1) return 0.0;
  double prev = 0.0;  // U_{-1}
  double cur = 1.0;   // U_0
  for (int k = 0; k < n; ++k) {
    const double next = 2.0 * x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace mvop
