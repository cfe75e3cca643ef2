#include "boussinesq/symbols.hpp"

#include <cmath>

#include "boussinesq/error.hpp"

namespace boussinesq {

void ModelParams::validate() const {
  if (n < 1 || n > 3) {
    throw LabError(ErrorKind::InvalidArgument, "dimension n must be 1, 2 or 3");
  }
  if (!(eps >= 0.0 && eps < 1.0)) {
    throw LabError(ErrorKind::InvalidArgument, "viscosity eps must satisfy 0 <= eps < 1");
  }
  if (!(p > 1.0)) {
    throw LabError(ErrorKind::InvalidArgument, "nonlinearity exponent p must exceed 1");
  }
}

std::string_view to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::K0: return "K0";
    case KernelKind::K1: return "K1";
    case KernelKind::DtK0: return "DtK0";
    case KernelKind::DtK1: return "DtK1";
    case KernelKind::E0: return "E0";
    case KernelKind::E1: return "E1";
  }
  return "?";
}

std::string_view to_string(Zone zone) {
  switch (zone) {
    case Zone::Low: return "Low";
    case Zone::Mid: return "Mid";
    case Zone::High: return "High";
    case Zone::All: return "All";
  }
  return "?";
}

KernelKind kernel_kind_from_string(std::string_view s) {
  for (auto k : {KernelKind::K0, KernelKind::K1, KernelKind::DtK0, KernelKind::DtK1,
                 KernelKind::E0, KernelKind::E1}) {
    if (to_string(k) == s) return k;
  }
  throw LabError(ErrorKind::InvalidArgument, "unknown kernel kind " + std::string(s));
}

Zone zone_from_string(std::string_view s) {
  for (auto z : {Zone::Low, Zone::Mid, Zone::High, Zone::All}) {
    if (to_string(z) == s) return z;
  }
  throw LabError(ErrorKind::InvalidArgument, "unknown zone " + std::string(s));
}

ZoneCutoffs ZoneCutoffs::for_eps(double eps) {
  const double a = 1.0 - eps * eps;
  return {0.5 * a * a, a * a, 2.0 / (a * a), 4.0 / (a * a)};
}

double MultiplierSpec::effective_eps() const {
  return (kind == KernelKind::E0 || kind == KernelKind::E1) ? 0.0 : params.eps;
}

CharacteristicRoots characteristic_roots(double xi_norm, const ModelParams& params) {
  return {-params.eps * xi_norm * xi_norm, dispersion(xi_norm, params.eps)};
}

double dispersion(double xi_norm, double eps) {
  return xi_norm * std::sqrt((1.0 - eps * eps) * xi_norm * xi_norm + 1.0);
}

double sinc(double z) {
  if (std::abs(z) < 1e-4) {
    const double z2 = z * z;
    return 1.0 - z2 / 6.0 * (1.0 - z2 / 20.0 * (1.0 - z2 / 42.0));
  }
  return std::sin(z) / z;
}

double smooth_step(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / s);
  const double b = std::exp(-1.0 / (1.0 - s));
  return a / (a + b);
}

namespace {

double low_weight(double xi, const ZoneCutoffs& c) {
  return 1.0 - smooth_step((xi - c.low_inner) / (c.low_outer - c.low_inner));
}

double high_weight(double xi, const ZoneCutoffs& c) {
  return smooth_step((xi - c.high_inner) / (c.high_outer - c.high_inner));
}

double zone_weight(Zone zone, double xi, double eps) {
  if (zone == Zone::All) return 1.0;
  const auto c = ZoneCutoffs::for_eps(eps);
  switch (zone) {
    case Zone::Low: return low_weight(xi, c);
    case Zone::High: return high_weight(xi, c);
    case Zone::Mid: return 1.0 - low_weight(xi, c) - high_weight(xi, c);
    case Zone::All: break;
  }
  return 1.0;
}

}  // namespace

double cutoff(Zone zone, double xi_norm, const ModelParams& params) {
  return zone_weight(zone, xi_norm, params.eps);
}

double kernel_value(KernelKind kind, double t, double xi_norm, double eps) {
  const double xi2 = xi_norm * xi_norm;
  if (kind == KernelKind::E0 || kind == KernelKind::E1) eps = 0.0;
  const double omega = dispersion(xi_norm, eps);
  const double damping = std::exp(-eps * xi2 * t);
  const double k1 = damping * t * sinc(omega * t);
  const double k0 = damping * (std::cos(omega * t) + eps * xi2 * t * sinc(omega * t));
  switch (kind) {
    case KernelKind::K0:
    case KernelKind::E0: return k0;
    case KernelKind::K1:
    case KernelKind::E1: return k1;
    case KernelKind::DtK0: return -(xi2 + xi2 * xi2) * k1;
    case KernelKind::DtK1: return k0 - 2.0 * eps * xi2 * k1;
  }
  return 0.0;
}

double eval_symbol(const MultiplierSpec& spec, double t, double xi_norm) {
  const double eps = spec.effective_eps();
  const double weight = zone_weight(spec.zone, xi_norm, eps);
  if (weight == 0.0) return 0.0;
  const double power = spec.alpha == 0.0 ? 1.0 : std::pow(xi_norm, spec.alpha);
  return power * weight * kernel_value(spec.kind, t, xi_norm, eps);
}

}  // namespace boussinesq
