#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace boussinesq {

/// Gauss–Legendre nodes and weights on [-1, 1], ascending.
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t order() const { return nodes.size(); }
};

/// Supported orders: 4, 8, 16, 32.
const GaussLegendreRule& gauss_legendre(std::size_t order);

struct QuadratureNodes {
  std::vector<double> points;
  std::vector<double> weights;
};

/// Composite rule: `panels` equal panels on [a, b], `order` nodes each.
QuadratureNodes composite_gauss_legendre(double a, double b, std::size_t panels,
                                         std::size_t order = 16);

/// Row i holds the weights giving the integral from -1 to node i of the
/// polynomial interpolant through the rule's nodes (row-major, order x order).
const std::vector<double>& cumulative_integration_matrix(std::size_t order);

/// Adaptive Gauss–Kronrod integral of f on [a, b] to relative tolerance tol.
double adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                          double tol = 1e-12);

/// Cubic Lagrange weights at offset s (in units of the spacing) from four
/// equispaced nodes at 0, 1, 2, 3.
void cubic_lagrange_weights(double s, double out[4]);

}  // namespace boussinesq
