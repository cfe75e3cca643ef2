#pragma once

#include <complex>
#include <string>
#include <string_view>

namespace boussinesq {

/// Dimension, viscosity and nonlinearity exponent. eps = 0 selects the
/// inviscid model.
struct ModelParams {
  int n = 1;
  double eps = 0.25;
  double p = 3.0;

  /// Throws LabError(InvalidArgument) unless n in {1,2,3}, 0 <= eps < 1, p > 1.
  void validate() const;
};

/// lambda_pm = real_part +/- i * imag_part.
struct CharacteristicRoots {
  double real_part = 0.0;
  double imag_part = 0.0;

  std::complex<double> plus() const { return {real_part, imag_part}; }
  std::complex<double> minus() const { return {real_part, -imag_part}; }
};

enum class KernelKind { K0, K1, DtK0, DtK1, E0, E1 };
enum class Zone { Low, Mid, High, All };

std::string_view to_string(KernelKind kind);
std::string_view to_string(Zone zone);
KernelKind kernel_kind_from_string(std::string_view s);
Zone zone_from_string(std::string_view s);

/// Radial frequency thresholds of the low/middle/high partition.
struct ZoneCutoffs {
  double low_inner = 0.5;
  double low_outer = 1.0;
  double high_inner = 2.0;
  double high_outer = 4.0;

  static ZoneCutoffs for_eps(double eps);
};

struct MultiplierSpec {
  KernelKind kind = KernelKind::K0;
  double alpha = 0.0;
  Zone zone = Zone::All;
  ModelParams params;

  /// E0/E1 always evaluate with eps = 0.
  double effective_eps() const;
};

CharacteristicRoots characteristic_roots(double xi_norm, const ModelParams& params);

/// Dispersion frequency |xi| sqrt((1 - eps^2)|xi|^2 + 1).
double dispersion(double xi_norm, double eps);

/// sin(z)/z, switching to a Taylor series for |z| < 1e-4.
double sinc(double z);

/// C-infinity step: 0 for s <= 0, 1 for s >= 1.
double smooth_step(double s);

/// Zone weight in [0,1]; Zone::All returns 1.
double cutoff(Zone zone, double xi_norm, const ModelParams& params);

/// Unlocalized kernel value (no |xi|^alpha, no cutoff).
double kernel_value(KernelKind kind, double t, double xi_norm, double eps);

/// |xi|^alpha * chi_zone(|xi|) * kernel(t, |xi|). All kernels are real.
double eval_symbol(const MultiplierSpec& spec, double t, double xi_norm);

}  // namespace boussinesq
