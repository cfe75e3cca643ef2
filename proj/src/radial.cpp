#include "boussinesq/radial.hpp"

#include <boost/math/special_functions/bessel.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include "boussinesq/error.hpp"
#include "boussinesq/quadrature.hpp"

namespace boussinesq {

double unit_sphere_area(int n) {
  switch (n) {
    case 1: return 2.0;
    case 2: return 2.0 * M_PI;
    case 3: return 4.0 * M_PI;
    default: return 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n);
  }
}

namespace {

// Hankel asymptotic series for J0; below the switch point boost is used.
constexpr double kJ0AsymptoticFrom = 25.0;
constexpr int kJ0Terms = 10;

struct J0Coefficients {
  double p[kJ0Terms];
  double q[kJ0Terms];
  J0Coefficients() {
    double a = 1.0;
    double c[2 * kJ0Terms];
    for (int k = 0; k < 2 * kJ0Terms; ++k) {
      c[k] = a;
      const double odd = 2.0 * k + 1.0;
      a *= -odd * odd / (8.0 * (k + 1));
    }
    for (int k = 0; k < kJ0Terms; ++k) {
      const double sign = k % 2 == 0 ? 1.0 : -1.0;
      p[k] = sign * c[2 * k];
      q[k] = sign * c[2 * k + 1];
    }
  }
};

const J0Coefficients kJ0Coeff;

double j0_from_trig(double s, double c, double sn) {
  if (s < kJ0AsymptoticFrom) return boost::math::cyl_bessel_j(0, s);
  const double inv2 = 1.0 / (s * s);
  double p = 0.0;
  double q = 0.0;
  for (int k = kJ0Terms - 1; k >= 0; --k) {
    p = p * inv2 + kJ0Coeff.p[k];
    q = q * inv2 + kJ0Coeff.q[k];
  }
  q /= s;
  // cos(s - pi/4) and sin(s - pi/4)
  const double cchi = M_SQRT1_2 * (c + sn);
  const double schi = M_SQRT1_2 * (sn - c);
  return std::sqrt(2.0 / (M_PI * s)) * (p * cchi - q * schi);
}

}  // namespace

double modified_bessel(int n, double s) {
  static const double root_2_over_pi = std::sqrt(2.0 / M_PI);
  switch (n) {
    case 1: return root_2_over_pi * std::cos(s);
    case 2: return j0_from_trig(std::abs(s), std::cos(std::abs(s)), std::sin(std::abs(s)));
    case 3: return root_2_over_pi * sinc(s);
    default:
      throw LabError(ErrorKind::InvalidArgument, "radial transform supports n = 1, 2, 3");
  }
}

double RadialProfile::lr_norm(double r) const {
  if (std::isinf(r)) return linf_norm();
  double acc = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    acc += weights[i] * std::pow(std::abs(values[i]), r);
  }
  return std::pow(acc, 1.0 / r);
}

double RadialProfile::linf_norm() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double RadialProfile::tail_ratio() const {
  if (radii.empty()) return 0.0;
  const double peak = linf_norm();
  if (peak == 0.0) return 0.0;
  const double start = 0.9 * radii.back();
  double tail = 0.0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (radii[i] >= start) tail = std::max(tail, std::abs(values[i]));
  }
  return tail / peak;
}

namespace {

double group_speed(double r, double eps) {
  const double a = 1.0 - eps * eps;
  return (1.0 + 2.0 * a * r * r) / std::sqrt(1.0 + a * r * r);
}

// Rough magnitude envelope of any localized kernel, used to truncate the
// Gaussian-damped high-frequency range.
double envelope(double r, double alpha, double eps, double t) {
  return std::pow(std::max(r, 1.0), alpha + 4.0) * std::exp(-eps * r * r * t);
}

std::vector<double> trapezoid_weights(int n, std::span<const double> radii) {
  const std::size_t m = radii.size();
  std::vector<double> w(m, 0.0);
  if (m < 2) return w;
  const double area = unit_sphere_area(n);
  for (std::size_t i = 0; i < m; ++i) {
    const double left = i == 0 ? radii[0] : radii[i - 1];
    const double right = i + 1 == m ? radii[m - 1] : radii[i + 1];
    w[i] = area * std::pow(radii[i], n - 1) * 0.5 * (right - left);
  }
  return w;
}

// Sums a_k J~(r_k rho) over quadrature nodes for every radius. Along runs of
// equally spaced radii, cos/sin of r_k rho advance by a complex rotation.
std::vector<double> evaluate(const RadialSymbol& symbol, int n, std::span<const double> radii,
                             std::size_t panels, double* noise_floor = nullptr) {
  const auto nodes = composite_gauss_legendre(symbol.r_min, symbol.r_max, panels, 16);
  const std::vector<double>& r = nodes.points;
  const std::size_t count = r.size();
  std::vector<double> amp(count);
  std::vector<double> amp_over_r(count);
  double total = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    amp[k] = symbol.value(r[k]) * std::pow(r[k], n - 1) * nodes.weights[k];
    amp_over_r[k] = r[k] > 0.0 ? amp[k] / r[k] : 0.0;
    total += std::abs(amp[k]);
  }
  if (noise_floor) *noise_floor = 64.0 * std::numeric_limits<double>::epsilon() * total;

  const std::size_t m = radii.size();
  // Re-anchor periodically to bound the drift of the recurrence.
  constexpr std::size_t kReanchor = 256;
  const double root_2_over_pi = std::sqrt(2.0 / M_PI);

  std::vector<double> c(count), sn(count), wc(count), ws(count);
  std::vector<double> out(m, 0.0);
  std::size_t since = kReanchor;
  double step = -1.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double rho = radii[j];
    const double h = j > 0 ? rho - radii[j - 1] : -1.0;
    const bool uniform = j > 0 && step > 0.0 && std::abs(h - step) <= 1e-12 * step;
    if (!uniform || since >= kReanchor) {
      for (std::size_t k = 0; k < count; ++k) {
        c[k] = std::cos(r[k] * rho);
        sn[k] = std::sin(r[k] * rho);
      }
      const double next = j + 1 < m ? radii[j + 1] - rho : 0.0;
      if (next > 0.0 && next != step) {
        for (std::size_t k = 0; k < count; ++k) {
          wc[k] = std::cos(r[k] * next);
          ws[k] = std::sin(r[k] * next);
        }
      }
      step = next;
      since = 0;
    } else {
      const double* wcp = wc.data();
      const double* wsp = ws.data();
      double* cp = c.data();
      double* sp = sn.data();
      for (std::size_t k = 0; k < count; ++k) {
        const double nc = cp[k] * wcp[k] - sp[k] * wsp[k];
        sp[k] = sp[k] * wcp[k] + cp[k] * wsp[k];
        cp[k] = nc;
      }
      ++since;
    }

    double acc = 0.0;
    switch (n) {
      case 1:
        for (std::size_t k = 0; k < count; ++k) acc += amp[k] * c[k];
        acc *= root_2_over_pi;
        break;
      case 3:
        if (rho == 0.0) {
          for (std::size_t k = 0; k < count; ++k) acc += amp[k];
        } else {
          for (std::size_t k = 0; k < count; ++k) acc += amp_over_r[k] * sn[k];
          acc /= rho;
        }
        acc *= root_2_over_pi;
        break;
      default:
        for (std::size_t k = 0; k < count; ++k) {
          acc += amp[k] * j0_from_trig(r[k] * rho, c[k], sn[k]);
        }
        break;
    }
    out[j] = acc;
  }
  return out;
}

}  // namespace

RadialSymbol kernel_symbol(const MultiplierSpec& spec, double t) {
  const double eps = spec.effective_eps();
  const auto cut = ZoneCutoffs::for_eps(eps);
  RadialSymbol symbol;
  symbol.value = [spec, t](double r) { return eval_symbol(spec, t, r); };

  double lo = 0.0;
  double hi = 0.0;
  bool bounded = true;
  switch (spec.zone) {
    case Zone::Low: hi = cut.low_outer; break;
    case Zone::Mid: lo = cut.low_inner; hi = cut.high_outer; break;
    case Zone::High: lo = cut.high_inner; bounded = false; break;
    case Zone::All: bounded = false; break;
  }
  switch (spec.zone) {
    case Zone::Low:
    case Zone::Mid: symbol.transition_width = cut.low_outer - cut.low_inner; break;
    case Zone::High: symbol.transition_width = cut.high_outer - cut.high_inner; break;
    case Zone::All: break;
  }
  if (!bounded) {
    if (!(eps > 0.0 && t > 0.0)) {
      throw LabError(ErrorKind::NonIntegrable,
                     "symbol has no high-frequency decay (needs eps > 0 and t > 0)");
    }
    double peak = 0.0;
    double r = std::max(lo, 1e-3);
    while (true) {
      const double e = envelope(r, spec.alpha, eps, t);
      peak = std::max(peak, e);
      if (e < 1e-15 * peak && r > lo) break;
      r *= 1.02;
    }
    hi = r;
  }
  symbol.r_min = lo;
  symbol.r_max = hi;
  symbol.oscillation_rate = t * group_speed(hi, eps);
  return symbol;
}

RadialProfile radial_inverse_transform(const RadialSymbol& symbol, int n,
                                       std::span<const double> radii,
                                       const RadialOptions& options) {
  if (n < 1 || n > 3) throw LabError(ErrorKind::InvalidArgument, "n must be 1, 2 or 3");
  const double x_max = radii.empty() ? 0.0 : *std::max_element(radii.begin(), radii.end());
  const double phase = (symbol.r_max - symbol.r_min) * (x_max + symbol.oscillation_rate);
  std::size_t panels = static_cast<std::size_t>(std::ceil(phase / (4.0 * M_PI))) + 4;

  // Refinement is judged on every fourth radius (plus the last one).
  std::vector<double> probe;
  for (std::size_t i = 0; i < radii.size(); i += 4) probe.push_back(radii[i]);
  if (!radii.empty() && (radii.size() - 1) % 4 != 0) probe.push_back(radii.back());

  double floor = 0.0;
  std::vector<double> values = evaluate(symbol, n, radii, panels, &floor);
  for (int level = 0; level < options.max_refinements; ++level) {
    const std::vector<double> fine = evaluate(symbol, n, probe, 2 * panels);
    double peak = 0.0;
    double diff = 0.0;
    for (std::size_t k = 0; k < probe.size(); ++k) {
      const std::size_t i = std::min(4 * k, radii.size() - 1);
      peak = std::max(peak, std::abs(fine[k]));
      diff = std::max(diff, std::abs(fine[k] - values[i]));
    }
    if (diff <= std::max(options.rel_tol * peak, floor) || peak == 0.0) {
      RadialProfile profile;
      profile.dim = n;
      profile.radii.assign(radii.begin(), radii.end());
      profile.values = std::move(values);
      profile.weights = trapezoid_weights(n, radii);
      profile.noise_floor = floor;
      return profile;
    }
    panels *= 2;
    values = evaluate(symbol, n, radii, panels, &floor);
  }
  throw LabError(ErrorKind::QuadratureNotConverged,
                 "radial quadrature did not settle within the refinement budget");
}

RadialProfile radial_inverse_transform(const MultiplierSpec& spec, double t,
                                       std::span<const double> radii,
                                       const RadialOptions& options) {
  return radial_inverse_transform(kernel_symbol(spec, t), spec.params.n, radii, options);
}

RadialProfile radial_kernel_profile(const RadialSymbol& symbol, int n,
                                    const RadialOptions& options) {
  const double dx = 0.5 / symbol.r_max;
  const double width = std::max(symbol.r_max - symbol.r_min, 1e-3);
  double extent = symbol.oscillation_rate + 30.0 * dx +
                  (symbol.transition_width > 0.0 ? 300.0 / symbol.transition_width : 60.0 / width);

  for (int attempt = 0; attempt < 6; ++attempt) {
    std::vector<double> radii = {0.0};
    for (double f : {1e-3, 3e-3, 1e-2, 3e-2, 0.1, 0.3}) radii.push_back(f * dx);
    const auto steps = static_cast<std::size_t>(std::ceil(extent / dx));
    for (std::size_t i = 1; i <= steps; ++i) radii.push_back(dx * static_cast<double>(i));

    RadialProfile profile = radial_inverse_transform(symbol, n, radii, options);
    const double peak = profile.linf_norm();
    if (profile.tail_ratio() * peak <= std::max(options.tail_tol * peak, profile.noise_floor)) {
      return profile;
    }
    extent *= 2.0;
  }
  throw LabError(ErrorKind::NotDecayed, "radial profile tail did not decay below tolerance");
}

RadialProfile radial_kernel_profile(const MultiplierSpec& spec, double t,
                                    const RadialOptions& options) {
  return radial_kernel_profile(kernel_symbol(spec, t), spec.params.n, options);
}

double radial_l2_norm(const RadialSymbol& symbol, int n) {
  const double phase = (symbol.r_max - symbol.r_min) * symbol.oscillation_rate;
  std::size_t panels = static_cast<std::size_t>(std::ceil(phase / M_PI)) + 8;
  auto integrate = [&](std::size_t p) {
    const auto nodes = composite_gauss_legendre(symbol.r_min, symbol.r_max, p, 16);
    double acc = 0.0;
    for (std::size_t k = 0; k < nodes.points.size(); ++k) {
      const double r = nodes.points[k];
      const double m = symbol.value(r);
      acc += nodes.weights[k] * m * m * std::pow(r, n - 1);
    }
    return acc;
  };
  double coarse = integrate(panels);
  for (int level = 0; level < 8; ++level) {
    panels *= 2;
    const double fine = integrate(panels);
    if (std::abs(fine - coarse) <= 1e-10 * std::abs(fine)) {
      return std::sqrt(fine * unit_sphere_area(n));
    }
    coarse = fine;
  }
  throw LabError(ErrorKind::QuadratureNotConverged, "Plancherel quadrature did not settle");
}

}  // namespace boussinesq
