#include "boussinesq/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <map>
#include <mutex>

#include "boussinesq/error.hpp"

namespace boussinesq {

namespace {

template <std::size_t N>
GaussLegendreRule build_rule() {
  using rule = boost::math::quadrature::gauss<double, N>;
  const auto& abscissa = rule::abscissa();
  const auto& weights = rule::weights();
  GaussLegendreRule out;
  out.nodes.resize(N);
  out.weights.resize(N);
  // Boost stores the non-negative half; N is even for every supported order.
  const std::size_t half = N / 2;
  for (std::size_t i = 0; i < half; ++i) {
    out.nodes[half + i] = abscissa[i];
    out.weights[half + i] = weights[i];
    out.nodes[half - 1 - i] = -abscissa[i];
    out.weights[half - 1 - i] = weights[i];
  }
  return out;
}

// Legendre polynomials P_0..P_{kmax} at x.
std::vector<double> legendre_values(double x, std::size_t kmax) {
  std::vector<double> p(kmax + 1);
  p[0] = 1.0;
  if (kmax >= 1) p[1] = x;
  for (std::size_t k = 1; k < kmax; ++k) {
    p[k + 1] = ((2.0 * k + 1.0) * x * p[k] - static_cast<double>(k) * p[k - 1]) / (k + 1.0);
  }
  return p;
}

std::vector<double> build_cumulative(const GaussLegendreRule& rule) {
  const std::size_t q = rule.order();
  std::vector<double> s(q * q);
  std::vector<std::vector<double>> p(q);
  for (std::size_t i = 0; i < q; ++i) p[i] = legendre_values(rule.nodes[i], q);
  // l_j(x) = w_j * sum_k (k + 1/2) P_k(x_j) P_k(x), and
  // int_{-1}^{y} P_k = (P_{k+1}(y) - P_{k-1}(y)) / (2k + 1) for k >= 1.
  for (std::size_t i = 0; i < q; ++i) {
    for (std::size_t j = 0; j < q; ++j) {
      double acc = 0.5 * (rule.nodes[i] + 1.0);
      for (std::size_t k = 1; k < q; ++k) {
        acc += 0.5 * p[j][k] * (p[i][k + 1] - p[i][k - 1]);
      }
      s[i * q + j] = rule.weights[j] * acc;
    }
  }
  return s;
}

}  // namespace

const GaussLegendreRule& gauss_legendre(std::size_t order) {
  static const GaussLegendreRule r4 = build_rule<4>();
  static const GaussLegendreRule r8 = build_rule<8>();
  static const GaussLegendreRule r16 = build_rule<16>();
  static const GaussLegendreRule r32 = build_rule<32>();
  switch (order) {
    case 4: return r4;
    case 8: return r8;
    case 16: return r16;
    case 32: return r32;
    default:
      throw LabError(ErrorKind::InvalidArgument,
                     "unsupported Gauss-Legendre order " + std::to_string(order));
  }
}

QuadratureNodes composite_gauss_legendre(double a, double b, std::size_t panels,
                                         std::size_t order) {
  if (panels == 0) throw LabError(ErrorKind::InvalidArgument, "zero panels");
  const auto& rule = gauss_legendre(order);
  QuadratureNodes out;
  out.points.reserve(panels * order);
  out.weights.reserve(panels * order);
  const double width = (b - a) / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double left = a + width * static_cast<double>(p);
    for (std::size_t i = 0; i < order; ++i) {
      out.points.push_back(left + 0.5 * width * (rule.nodes[i] + 1.0));
      out.weights.push_back(0.5 * width * rule.weights[i]);
    }
  }
  return out;
}

const std::vector<double>& cumulative_integration_matrix(std::size_t order) {
  static std::mutex mutex;
  static std::map<std::size_t, std::vector<double>> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end()) {
    it = cache.emplace(order, build_cumulative(gauss_legendre(order))).first;
  }
  return it->second;
}

double adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                          double tol) {
  if (b <= a) return 0.0;
  double error = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, a, b, 30, tol, &error);
  if (!(error <= std::max(1e-6 * std::abs(value), 1e-300))) {
    throw LabError(ErrorKind::QuadratureNotConverged,
                   "adaptive integral error estimate " + std::to_string(error));
  }
  return value;
}

void cubic_lagrange_weights(double s, double out[4]) {
  // Nodes at 0, 1, 2, 3 (in units of the spacing), evaluated at s.
  out[0] = -(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0;
  out[1] = s * (s - 2.0) * (s - 3.0) / 2.0;
  out[2] = -s * (s - 1.0) * (s - 3.0) / 2.0;
  out[3] = s * (s - 1.0) * (s - 2.0) / 6.0;
}

}  // namespace boussinesq
