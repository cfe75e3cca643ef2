#include "boussinesq/kernels.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>

#include "boussinesq/error.hpp"

namespace boussinesq {

std::string_view to_string(NormMethod method) {
  switch (method) {
    case NormMethod::RadialQuadrature: return "RadialQuadrature";
    case NormMethod::Plancherel: return "Plancherel";
    case NormMethod::LatticeTransform: return "LatticeTransform";
  }
  return "?";
}

namespace {

RadialSymbol m_symbol(const ModelParams& params, double t, double alpha, double c1, double c2) {
  if (!(t > 0.0)) throw LabError(ErrorKind::InvalidArgument, "M needs t > 0");
  if (!(c1 > 0.0)) throw LabError(ErrorKind::NonIntegrable, "M needs c1 > 0 for decay");
  if (c2 == 0.0) throw LabError(ErrorKind::InvalidArgument, "M needs c2 != 0");
  const double eps = params.eps;
  const auto cut = ZoneCutoffs::for_eps(eps);
  RadialSymbol symbol;
  symbol.value = [=](double r) {
    const double w = cutoff(Zone::High, r, params);
    if (w == 0.0) return 0.0;
    const double g = std::sqrt((1.0 - eps * eps) + 1.0 / (r * r));
    return std::exp(-c1 * r * r * t) * std::pow(r, alpha) * std::sin(c2 * r * r * g * t) / g * w;
  };
  double peak = 0.0;
  double r = cut.high_inner;
  while (true) {
    const double e = std::pow(r, alpha + 2.0) * std::exp(-c1 * r * r * t);
    peak = std::max(peak, e);
    if (e < 1e-15 * peak) break;
    r *= 1.02;
  }
  symbol.r_min = cut.high_inner;
  symbol.r_max = r;
  const double a = 1.0 - eps * eps;
  symbol.oscillation_rate = t * std::abs(c2) * (1.0 + 2.0 * a * r * r) / std::sqrt(a * r * r + 1.0);
  symbol.transition_width = cut.high_outer - cut.high_inner;
  return symbol;
}

double profile_norm(const RadialProfile& p, double r) {
  return std::isinf(r) ? p.linf_norm() : p.lr_norm(r);
}

int kernel_order(KernelKind kind) {
  switch (kind) {
    case KernelKind::K0:
    case KernelKind::E0: return 0;
    case KernelKind::K1:
    case KernelKind::E1: return 1;
    default:
      throw LabError(ErrorKind::InvalidArgument, "rate exponents cover K0, K1, E0, E1 only");
  }
}

}  // namespace

RadialProfile oscillating_integral_M(const ModelParams& params, double t, double alpha, double c1,
                                     double c2, std::span<const double> radii) {
  return radial_inverse_transform(m_symbol(params, t, alpha, c1, c2), params.n, radii);
}

RadialProfile oscillating_integral_M(const ModelParams& params, double t, double alpha, double c1,
                                     double c2) {
  return radial_kernel_profile(m_symbol(params, t, alpha, c1, c2), params.n);
}

KernelNorms kernel_norms(const MultiplierSpec& spec, double t) {
  const RadialSymbol symbol = kernel_symbol(spec, t);
  const RadialProfile profile = radial_kernel_profile(symbol, spec.params.n);
  return {profile.lr_norm(1.0), radial_l2_norm(symbol, spec.params.n), profile.linf_norm()};
}

KernelNormSeries kernel_norm_series(const MultiplierSpec& spec, double r,
                                    std::span<const double> times) {
  if (!(r >= 1.0)) throw LabError(ErrorKind::InvalidArgument, "Lebesgue index must be >= 1");
  KernelNormSeries series;
  series.spec = spec;
  series.r = r;
  series.times.assign(times.begin(), times.end());
  series.method = r == 2.0 ? NormMethod::Plancherel : NormMethod::RadialQuadrature;
  for (double t : times) {
    const RadialSymbol symbol = kernel_symbol(spec, t);
    if (r == 2.0) {
      series.norms.push_back(radial_l2_norm(symbol, spec.params.n));
    } else {
      series.norms.push_back(profile_norm(radial_kernel_profile(symbol, spec.params.n), r));
    }
  }
  return series;
}

KernelNormSeries kernel_norm_series_lattice(const MultiplierSpec& spec, double r,
                                            std::span<const double> times, const Grid& grid) {
  if (spec.params.n != grid.dim()) {
    throw LabError(ErrorKind::SizeMismatch, "grid dimension differs from the model dimension");
  }
  KernelNormSeries series;
  series.spec = spec;
  series.r = r;
  series.times.assign(times.begin(), times.end());
  series.method = NormMethod::LatticeTransform;
  // Lattice transform of a unit-mass delta at the origin, rescaled by (2 pi)^{n/2}
  // so the result samples F^{-1}(symbol) as the radial path does.
  const double flat = std::pow(2.0 * M_PI, 0.5 * grid.dim()) /
                      (std::sqrt(static_cast<double>(grid.size())) * grid.cell_volume());
  const auto& xi = grid.frequency_norms();
  for (double t : times) {
    Field spectral(grid, Representation::Spectral);
    for (std::size_t i = 0; i < xi.size(); ++i) spectral.values()[i] = flat * eval_symbol(spec, t, xi[i]);
    const Field kernel = inverse_transform(spectral);
    series.norms.push_back(std::isinf(r) ? norm(kernel, NormKind::Linf()) : norm(kernel, NormKind::Lq(r)));
  }
  return series;
}

DecayFit fit_decay(const KernelNormSeries& series, FitScale scale, double min_r_squared) {
  return fit_decay(series.times, series.norms, scale, min_r_squared);
}

double kernel_rate_exponent(const MultiplierSpec& spec, double r, Bracket convention) {
  const int j = kernel_order(spec.kind);
  const double n = spec.params.n;
  const double inv_r = std::isinf(r) ? 0.0 : 1.0 / r;
  const double base = j - 0.5 * n * (1.0 - inv_r) - 0.5 * spec.alpha;
  switch (spec.zone) {
    case Zone::High: return base;
    case Zone::Low: return base + 0.5 * inv_r * bracket(0.5 * n - j, convention);
    default:
      throw LabError(ErrorKind::InvalidArgument, "rate exponents cover the Low and High zones");
  }
}

MiddleZoneKernelDecay middle_zone_kernel_decay(MultiplierSpec spec, std::span<const double> times) {
  spec.zone = Zone::Mid;
  MiddleZoneKernelDecay out;
  out.series = kernel_norm_series(spec, 2.0, times);
  out.fit = fit_line(out.series.times, out.series.norms, FitScale::LogLinear);
  return out;
}

double high_zone_heat_sup(const ModelParams& params, double t) {
  // The symbol is nonnegative, so the supremum is attained at the origin.
  MultiplierSpec spec;
  spec.kind = KernelKind::K0;
  spec.zone = Zone::High;
  spec.params = params;
  RadialSymbol symbol = kernel_symbol(spec, t);
  const double eps = params.eps;
  symbol.value = [=](double r) { return std::exp(-eps * r * r * t) * cutoff(Zone::High, r, params); };
  symbol.oscillation_rate = 0.0;
  const double origin[1] = {0.0};
  return radial_inverse_transform(symbol, params.n, origin).values[0];
}

void write_kernel_csv(const std::string& path, std::span<const KernelCsvRow> rows) {
  std::ofstream out(path);
  if (!out) throw LabError(ErrorKind::Io, "cannot open " + path);
  out << "kind,zone,alpha,r,n,eps,t,norm,bound\n";
  out << std::setprecision(17);
  for (const auto& row : rows) {
    out << to_string(row.spec.kind) << ',' << to_string(row.spec.zone) << ',' << row.spec.alpha << ','
        << (std::isinf(row.r) ? std::string("inf") : std::to_string(row.r)) << ','
        << row.spec.params.n << ',' << row.spec.params.eps << ',' << row.t << ',' << row.norm << ','
        << row.bound << '\n';
  }
}

}  // namespace boussinesq
