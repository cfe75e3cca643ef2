#pragma once

#include <span>
#include <string>
#include <vector>

#include "boussinesq/fit.hpp"
#include "boussinesq/grid.hpp"
#include "boussinesq/radial.hpp"
#include "boussinesq/symbols.hpp"

namespace boussinesq {

enum class NormMethod { RadialQuadrature, Plancherel, LatticeTransform };
std::string_view to_string(NormMethod method);

struct KernelNormSeries {
  MultiplierSpec spec;
  double r = 1.0;  // Lebesgue index, may be infinity
  std::vector<double> times;
  std::vector<double> norms;
  NormMethod method = NormMethod::RadialQuadrature;
};

/// F^{-1}(e^{-c1 |xi|^2 t} |xi|^alpha sin(c2 |xi|^2 g_H t) / g_H * chi_H) with
/// g_H = sqrt((1 - eps^2) + |xi|^{-2}), sampled at the given radii.
RadialProfile oscillating_integral_M(const ModelParams& params, double t, double alpha, double c1,
                                     double c2, std::span<const double> radii);
/// The same integral on an automatic whole-space mesh.
RadialProfile oscillating_integral_M(const ModelParams& params, double t, double alpha, double c1,
                                     double c2);

/// Whole-space L1, L2 and L-infinity norms of a localized kernel at one time.
/// L1 and L-infinity come from one radial profile; L2 from Plancherel.
struct KernelNorms {
  double l1 = 0.0;
  double l2 = 0.0;
  double linf = 0.0;
};
KernelNorms kernel_norms(const MultiplierSpec& spec, double t);

/// Lr norm series: r = 1 and r = infinity (and other r, reported only) by
/// radial quadrature, r = 2 by Plancherel.
KernelNormSeries kernel_norm_series(const MultiplierSpec& spec, double r,
                                    std::span<const double> times);

/// Lattice cross-check: apply the symbol to a discrete delta on the grid and
/// take the lattice Lr norm of the result.
KernelNormSeries kernel_norm_series_lattice(const MultiplierSpec& spec, double r,
                                            std::span<const double> times, const Grid& grid);

DecayFit fit_decay(const KernelNormSeries& series, FitScale scale, double min_r_squared = 0.98);

/// Predicted exponent of ||F^{-1}(|xi|^alpha K_j chi_zone)||_{Lr}: in powers of
/// t for the high zone, of (1+t) for the low zone. Only K0/K1 and E0/E1 with
/// zone Low or High are covered.
double kernel_rate_exponent(const MultiplierSpec& spec, double r, Bracket convention);

/// log-linear fit of the Plancherel L2 norm of the middle-zone kernel.
struct MiddleZoneKernelDecay {
  KernelNormSeries series;
  DecayFit fit;
};
MiddleZoneKernelDecay middle_zone_kernel_decay(MultiplierSpec spec, std::span<const double> times);

/// || F^{-1}(e^{-eps |xi|^2 t} chi_H) ||_{L-infinity}, the heat factor of the high zone.
double high_zone_heat_sup(const ModelParams& params, double t);

struct KernelCsvRow {
  MultiplierSpec spec;
  double r = 1.0;
  double t = 0.0;
  double norm = 0.0;
  double bound = 0.0;
};

/// Columns: kind, zone, alpha, r, n, eps, t, norm, bound.
void write_kernel_csv(const std::string& path, std::span<const KernelCsvRow> rows);

}  // namespace boussinesq
