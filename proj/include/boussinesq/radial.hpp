#pragma once

#include <functional>
#include <span>
#include <vector>

#include "boussinesq/symbols.hpp"

namespace boussinesq {

/// A radial Fourier symbol m(|xi|) supported (numerically) on [r_min, r_max].
/// oscillation_rate bounds |d/dr phase| of m itself, used to size the mesh.
struct RadialSymbol {
  std::function<double(double)> value;
  double r_min = 0.0;
  double r_max = 1.0;
  double oscillation_rate = 0.0;
  /// Narrowest smooth-cutoff transition inside the support (0 if none); the
  /// spatial tail length scales like its inverse.
  double transition_width = 0.0;
};

/// Samples g(rho) of a radial function on a |x| mesh, with weights such that
/// sum_i w_i h(rho_i) approximates the integral of h(|x|) over R^n.
struct RadialProfile {
  int dim = 1;
  std::vector<double> radii;
  std::vector<double> values;
  std::vector<double> weights;
  /// Roundoff level of the quadrature sums; tails below it are unresolvable.
  double noise_floor = 0.0;

  double lr_norm(double r) const;
  double linf_norm() const;
  /// Largest |g| on the outermost tenth of the mesh relative to the peak.
  double tail_ratio() const;
};

/// Surface area of the unit sphere in R^n.
double unit_sphere_area(int n);

/// J~_{n/2-1}(s) = s^{1-n/2} J_{n/2-1}(s); large-argument J0 uses the Hankel series.
double modified_bessel(int n, double s);

/// Build a RadialSymbol for a localized kernel at time t. Throws
/// NonIntegrable when the symbol lacks decay (zone High/All without damping).
RadialSymbol kernel_symbol(const MultiplierSpec& spec, double t);

struct RadialOptions {
  double rel_tol = 1e-6;     // panel-doubling agreement, relative to the peak
  double tail_tol = 1e-10;   // decay required at the mesh end
  int max_refinements = 8;
};

/// Inverse (unitary) Fourier transform of a radial symbol at the given radii via
/// g(rho) = int m(r) r^{n-1} J~_{n/2-1}(r rho) dr. The returned weights are
/// trapezoid weights on the supplied radii.
RadialProfile radial_inverse_transform(const RadialSymbol& symbol, int n,
                                       std::span<const double> radii,
                                       const RadialOptions& options = {});

RadialProfile radial_inverse_transform(const MultiplierSpec& spec, double t,
                                       std::span<const double> radii,
                                       const RadialOptions& options = {});

/// Whole-space kernel profile on an automatic mesh extended until the tail is
/// below options.tail_tol of the peak (or below the roundoff floor of the
/// quadrature sums); throws NotDecayed otherwise.
RadialProfile radial_kernel_profile(const RadialSymbol& symbol, int n,
                                    const RadialOptions& options = {});
RadialProfile radial_kernel_profile(const MultiplierSpec& spec, double t,
                                    const RadialOptions& options = {});

/// Plancherel: ||F^{-1} m||_{L2} from the frequency side.
double radial_l2_norm(const RadialSymbol& symbol, int n);

}  // namespace boussinesq
