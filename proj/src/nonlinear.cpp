#include "boussinesq/nonlinear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "boussinesq/error.hpp"
#include "boussinesq/parallel.hpp"
#include "boussinesq/quadrature.hpp"

namespace boussinesq {

namespace {

double inv(double q) { return std::isinf(q) ? 0.0 : 1.0 / q; }

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

}  // namespace

double kappa(int n, double m, double q, Bracket convention) {
  return 0.5 * (1.0 / m - inv(q)) * bracket(0.5 * n - 1.0, convention) + 0.0;
}

ExponentCheck exponent_check(int n, double m, double q, double s, double p, Bracket convention) {
  ExponentCheck c;
  c.n = n;
  c.m = m;
  c.q = q;
  c.s = s;
  c.p = p;
  c.kappa = kappa(n, m, q, convention);
  const double room = n - 2.0 * m * (1.0 + c.kappa);
  c.dimension_ok = room > 0.0;
  c.lower_bound = c.dimension_ok
                      ? 1.0 + std::max((n * (1.0 - m * inv(q)) + m * s) / room, s)
                      : std::numeric_limits<double>::infinity();

  if (!(q > 1.0 && std::isfinite(q))) c.violations.push_back("q must lie in (1, inf), got " + fmt(q));
  if (!(m >= 1.0 && m < q)) c.violations.push_back("m must lie in [1, q), got m = " + fmt(m));
  if (!(s > n * inv(q))) c.violations.push_back("s > n/q fails: s = " + fmt(s) + ", n/q = " + fmt(n * inv(q)));
  if (!(p >= q / m)) c.violations.push_back("p >= q/m fails: p = " + fmt(p) + ", q/m = " + fmt(q / m));
  if (!c.dimension_ok) {
    c.violations.push_back("n > 2m(1 + kappa) fails: n = " + std::to_string(n) +
                           ", 2m(1 + kappa) = " + fmt(2.0 * m * (1.0 + c.kappa)));
  } else if (!(p > c.lower_bound)) {
    c.violations.push_back("p > " + fmt(c.lower_bound) + " fails: p = " + fmt(p));
  }
  c.admissible = c.violations.empty();
  return c;
}

std::string_view to_string(Nonlinearity variant) {
  return variant == Nonlinearity::AbsPow ? "AbsPow" : "SignedPow";
}

Nonlinearity nonlinearity_from_string(std::string_view s) {
  if (s == "AbsPow") return Nonlinearity::AbsPow;
  if (s == "SignedPow") return Nonlinearity::SignedPow;
  throw LabError(ErrorKind::InvalidArgument, "unknown nonlinearity " + std::string(s));
}

Field nonlinearity(const Field& u, double p, Nonlinearity variant) {
  if (!(p > 1.0)) throw LabError(ErrorKind::InvalidArgument, "nonlinearity exponent must exceed 1");
  Field phys = to_physical(u);
  const double residue = imaginary_residue(phys);
  double scale = 1.0;
  for (const auto& v : phys.values()) scale = std::max(scale, std::abs(v.real()));
  if (!(residue < 1e-10 * scale)) {
    throw LabError(ErrorKind::ComplexResidue, "field has imaginary part " + fmt(residue));
  }
  for (auto& v : phys.values()) {
    const double x = v.real();
    const double a = std::abs(x);
    double y = a < 1e-300 ? 0.0 : std::exp(p * std::log(a));
    if (variant == Nonlinearity::SignedPow && x < 0.0) y = -y;
    v = y;
  }
  return phys;
}

Field dealias(const Field& f) {
  Field spec = to_spectral(f);
  const Grid& grid = spec.grid();
  const int limit = grid.points_per_axis() / 3;
  int idx[3] = {0, 0, 0};
  for (std::size_t i = 0; i < spec.size(); ++i) {
    grid.unravel(i, idx);
    for (int d = 0; d < grid.dim(); ++d) {
      if (std::abs(grid.signed_index(idx[d])) > limit) {
        spec.values()[i] = 0.0;
        break;
      }
    }
  }
  return f.representation() == Representation::Physical ? inverse_transform(spec) : spec;
}

std::vector<double> History::times() const {
  std::vector<double> t(samples.size());
  for (std::size_t k = 0; k < t.size(); ++k) t[k] = dt * static_cast<double>(k);
  return t;
}

Field History::at(double t) const {
  if (samples.size() < 4) throw LabError(ErrorKind::HistoryGap, "history needs at least 4 samples");
  const double end = end_time();
  if (t < 0.0 || t > end * (1.0 + 1e-12)) {
    throw LabError(ErrorKind::HistoryGap, "time " + fmt(t) + " outside the history [0, " + fmt(end) + "]");
  }
  const auto last = static_cast<long>(samples.size()) - 1;
  const long k = static_cast<long>(std::floor(t / dt));
  const long start = std::clamp(k - 1, 0L, last - 3);
  double w[4];
  cubic_lagrange_weights(t / dt - static_cast<double>(start), w);
  Field out(samples.front().grid(), samples.front().representation());
  for (int l = 0; l < 4; ++l) {
    const auto& src = samples[static_cast<std::size_t>(start + l)].values();
    for (std::size_t i = 0; i < out.size(); ++i) out.values()[i] += w[l] * src[i];
  }
  return out;
}

std::vector<double> history_mesh(double T, int nodes_per_unit) {
  if (!(T > 0.0) || nodes_per_unit < 1) throw LabError(ErrorKind::InvalidArgument, "need T > 0");
  const auto steps = static_cast<std::size_t>(std::max(3.0, std::ceil(T * nodes_per_unit - 1e-9)));
  std::vector<double> t(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) t[k] = T * static_cast<double>(k) / static_cast<double>(steps);
  return t;
}

namespace {

std::vector<cplx> source_modes(const Field& u, double p, Nonlinearity variant) {
  return dealias(transform(nonlinearity(u, p, variant))).values();
}

}  // namespace

Field duhamel_step(const History& u_prev, const CauchyData& data, double t, const ModelParams& params,
                   Nonlinearity variant, const DuhamelControl& control) {
  params.validate();
  if (t < 0.0) throw LabError(ErrorKind::InvalidArgument, "time must be >= 0");
  Field linear = to_physical(evolve_linear(data, t, params).v);
  if (t == 0.0) return linear;
  const Grid& grid = data.grid();
  const auto& xi = grid.frequency_norms();

  auto integral = [&](std::size_t panels) {
    const QuadratureNodes nodes = composite_gauss_legendre(0.0, t, panels, 16);
    std::vector<cplx> acc(grid.size(), cplx(0.0));
    for (std::size_t k = 0; k < nodes.points.size(); ++k) {
      const double tau = nodes.points[k];
      const std::vector<cplx> f = source_modes(u_prev.at(tau), params.p, variant);
      for (std::size_t i = 0; i < acc.size(); ++i) {
        const double g = -xi[i] * xi[i] * kernel_value(KernelKind::K1, t - tau, xi[i], params.eps);
        acc[i] += nodes.weights[k] * g * f[i];
      }
    }
    return acc;
  };

  std::size_t panels = std::max<std::size_t>(1, control.panels);
  std::vector<cplx> coarse = integral(panels);
  for (int level = 0;; ++level) {
    if (level >= control.max_doublings) {
      throw LabError(ErrorKind::QuadratureNotConverged, "Duhamel quadrature did not converge");
    }
    panels *= 2;
    std::vector<cplx> fine = integral(panels);
    double diff = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < fine.size(); ++i) {
      diff = std::max(diff, std::abs(fine[i] - coarse[i]));
      scale = std::max(scale, std::abs(fine[i]));
    }
    coarse = std::move(fine);
    if (diff <= control.rel_tol * scale) break;
  }
  linear += inverse_transform(Field(grid, Representation::Spectral, std::move(coarse)));
  return linear;
}

History duhamel_integral(const History& u_prev, const ModelParams& params, Nonlinearity variant) {
  params.validate();
  const std::size_t count = u_prev.samples.size();
  if (count < 4) throw LabError(ErrorKind::HistoryGap, "history needs at least 4 samples");
  const Grid& grid = u_prev.samples.front().grid();
  const auto& xi = grid.frequency_norms();
  const std::size_t modes = grid.size();
  const double dt = u_prev.dt;
  const double eps = params.eps;

  std::vector<std::vector<cplx>> source(count);
  parallel_for(0, count, [&](std::size_t k) { source[k] = source_modes(u_prev.samples[k], params.p, variant); });

  std::vector<std::vector<cplx>> out(count, std::vector<cplx>(modes, cplx(0.0)));
  const GaussLegendreRule& rule = gauss_legendre(16);
  parallel_for(0, modes, [&](std::size_t i) {
    const double x = xi[i];
    const double x2 = x * x;
    if (x2 == 0.0) return;
    // Weights of the four stencil samples for a step starting at stencil offset s0.
    double wv[3][4] = {};
    double wt[3][4] = {};
    const auto panels = static_cast<std::size_t>(std::max(1.0, std::ceil(dispersion(x, eps) * dt)));
    const double h = dt / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
      for (std::size_t k = 0; k < rule.order(); ++k) {
        const double sigma = h * (static_cast<double>(p) + 0.5 * (rule.nodes[k] + 1.0));
        const double w = 0.5 * h * rule.weights[k];
        const double k0 = kernel_value(KernelKind::K0, dt - sigma, x, eps);
        const double k1 = kernel_value(KernelKind::K1, dt - sigma, x, eps);
        const double gv = -x2 * k1;
        const double gt = -x2 * (k0 - 2.0 * eps * x2 * k1);
        for (int s0 = 0; s0 < 3; ++s0) {
          double lw[4];
          cubic_lagrange_weights(s0 + sigma / dt, lw);
          for (int l = 0; l < 4; ++l) {
            wv[s0][l] += w * gv * lw[l];
            wt[s0][l] += w * gt * lw[l];
          }
        }
      }
    }
    const double k0 = kernel_value(KernelKind::K0, dt, x, eps);
    const double k1 = kernel_value(KernelKind::K1, dt, x, eps);
    const double dk0 = -(x2 + x2 * x2) * k1;
    const double dk1 = k0 - 2.0 * eps * x2 * k1;
    cplx v = 0.0;
    cplx vt = 0.0;
    const long last = static_cast<long>(count) - 1;
    for (long k = 0; k < last; ++k) {
      const long start = std::clamp(k - 1, 0L, last - 3);
      const auto s0 = static_cast<int>(k - start);
      cplx fv = 0.0;
      cplx ft = 0.0;
      for (int l = 0; l < 4; ++l) {
        const cplx f = source[static_cast<std::size_t>(start + l)][i];
        fv += wv[s0][l] * f;
        ft += wt[s0][l] * f;
      }
      const cplx nv = k0 * v + k1 * vt + fv;
      const cplx nt = dk0 * v + dk1 * vt + ft;
      v = nv;
      vt = nt;
      out[static_cast<std::size_t>(k + 1)][i] = v;
    }
  });

  History result;
  result.dt = dt;
  result.samples.resize(count, Field(grid, Representation::Physical));
  parallel_for(0, count, [&](std::size_t k) {
    result.samples[k] = inverse_transform(Field(grid, Representation::Spectral, std::move(out[k])));
  });
  return result;
}

History linear_history(const CauchyData& data, const ModelParams& params, double T, int nodes_per_unit) {
  const std::vector<double> mesh = history_mesh(T, nodes_per_unit);
  History h;
  h.dt = mesh[1] - mesh[0];
  h.samples.reserve(mesh.size());
  for (double t : mesh) h.samples.push_back(to_physical(evolve_linear(data, t, params).v));
  return h;
}

namespace {

History difference(const History& a, const History& b) {
  if (a.samples.size() != b.samples.size()) {
    throw LabError(ErrorKind::SizeMismatch, "histories have different meshes");
  }
  History d;
  d.dt = a.dt;
  d.samples.reserve(a.samples.size());
  for (std::size_t k = 0; k < a.samples.size(); ++k) d.samples.push_back(a.samples[k] - b.samples[k]);
  return d;
}

History sum(const History& a, const History& b) {
  History d = a;
  for (std::size_t k = 0; k < a.samples.size(); ++k) d.samples[k] += b.samples[k];
  return d;
}

}  // namespace

SolutionNormXT xt_norm(const History& u, const ModelParams& params, double m, double q, double s,
                       double T, Bracket convention) {
  SolutionNormXT out;
  out.T = T;
  const int n = params.n;
  const double kap = kappa(n, m, q, convention);
  out.lq_weight_exponent = -1.0 + 0.5 * n * (1.0 / m - inv(q)) - kap;
  out.hs_weight_exponent = out.lq_weight_exponent + 0.5 * s;
  std::size_t count = 0;
  while (count < u.samples.size() && u.dt * static_cast<double>(count) <= T * (1.0 + 1e-12)) ++count;
  std::vector<double> lq(count);
  std::vector<double> hs(count);
  parallel_for(0, count, [&](std::size_t k) {
    const double w = 1.0 + u.dt * static_cast<double>(k);
    lq[k] = std::pow(w, out.lq_weight_exponent) * norm(u.samples[k], NormKind::Lq(q));
    hs[k] = std::pow(w, out.hs_weight_exponent) * norm(u.samples[k], NormKind::SobolevDotHsq(s, q));
  });
  for (std::size_t k = 0; k < count; ++k) {
    out.lq_part = std::max(out.lq_part, lq[k]);
    out.hs_part = std::max(out.hs_part, hs[k]);
    out.value = std::max(out.value, lq[k] + hs[k]);
  }
  return out;
}

double data_norm(const CauchyData& data, double m, double q, double s) {
  return norm(data.v0, NormKind::Lq(m)) + bessel_potential_norm(data.v0, s, q) +
         norm(data.v1, NormKind::Lq(m)) + bessel_potential_norm(data.v1, std::max(s - 2.0, 0.0), q);
}

PicardResult picard_solve(const CauchyData& data, const ModelParams& params, double T,
                          const PicardOptions& options) {
  params.validate();
  const double m = options.m;
  const double q = options.q;
  const double s = options.s;
  if (!(q > 1.0 && std::isfinite(q)) || !(m >= 1.0 && m < q)) {
    throw LabError(ErrorKind::ConfigInvalid, "nonlinear runs need q in (1, inf) and m in [1, q)");
  }
  if (options.tol <= 0.0 || options.max_iter < 1) {
    throw LabError(ErrorKind::InvalidArgument, "need tol > 0 and max_iter >= 1");
  }
  PicardResult out;
  out.check = exponent_check(params.n, m, q, s, params.p);
  if (!out.check.admissible && !options.allow_inadmissible) {
    std::string why;
    for (const auto& v : out.check.violations) why += (why.empty() ? "" : "; ") + v;
    throw LabError(ErrorKind::ConfigInvalid, "inadmissible exponent: " + why);
  }
  out.data_norm = data_norm(data, m, q, s);
  out.linear = linear_history(data, params, T, options.nodes_per_unit);
  out.linear_xt_value = xt_norm(out.linear, params, m, q, s, T).value;

  History u = out.linear;
  int rising = 0;
  for (int iter = 0; iter < options.max_iter; ++iter) {
    const History integral = duhamel_integral(u, params, options.variant);
    History next = sum(out.linear, integral);
    const double dist = iter == 0 ? xt_norm(integral, params, m, q, s, T).value
                                  : xt_norm(difference(next, u), params, m, q, s, T).value;
    if (iter == 0) out.first_correction = dist;
    if (!out.trace.distances.empty() && dist >= out.trace.distances.back()) {
      if (++rising >= 3) {
        throw LabError(ErrorKind::NotContracting,
                       "Picard distances grew three times in a row (last " + fmt(dist) + ")");
      }
    } else {
      rising = 0;
    }
    out.trace.distances.push_back(dist);
    out.trace.iterations_used = iter + 1;
    u = std::move(next);
    if (dist < options.tol) {
      out.trace.converged = true;
      break;
    }
  }
  const History image = sum(out.linear, duhamel_integral(u, params, options.variant));
  out.fixed_point_residual = xt_norm(difference(image, u), params, m, q, s, T).value;
  out.xt_value = xt_norm(u, params, m, q, s, T).value;
  out.u = std::move(u);
  return out;
}

NonlinearDecay decay_verify(const History& u, const ModelParams& params, double m, double q, double s,
                            Bracket convention) {
  const double T = u.end_time();
  if (T < 20.0 - 1e-9) throw LabError(ErrorKind::InvalidArgument, "decay fits need T >= 20");
  NonlinearDecay out;
  out.predicted_lq = 1.0 - 0.5 * params.n * (1.0 / m - inv(q)) + kappa(params.n, m, q, convention);
  out.predicted_hs = out.predicted_lq - 0.5 * s;
  for (double t : log_spaced(5.0, T, 16)) {
    const auto k = static_cast<std::size_t>(std::lround(t / u.dt));
    const double tk = u.dt * static_cast<double>(k);
    if (!out.times.empty() && tk <= out.times.back()) continue;
    out.times.push_back(tk);
    out.lq_norms.push_back(norm(u.samples[k], NormKind::Lq(q)));
    out.hs_norms.push_back(norm(u.samples[k], NormKind::SobolevDotHsq(s, q)));
  }
  out.lq_fit = fit_decay(out.times, out.lq_norms, FitScale::LogOnePlusT);
  out.hs_fit = fit_decay(out.times, out.hs_norms, FitScale::LogOnePlusT);
  return out;
}

std::string_view to_string(IntegralBranch branch) {
  switch (branch) {
    case IntegralBranch::MaxAboveOne: return "max>1";
    case IntegralBranch::MaxEqualsOne: return "max=1";
    case IntegralBranch::MaxBelowOne: return "max<1";
  }
  return "?";
}

double lemma_integral(double alpha, double beta, double t) {
  if (t <= 0.0) return 0.0;
  auto f = [&](double tau) { return std::pow(1.0 + t - tau, -alpha) * std::pow(1.0 + tau, -beta); };
  return adaptive_integrate(f, 0.0, 0.5 * t, 1e-11) + adaptive_integrate(f, 0.5 * t, t, 1e-11);
}

IntegralBoundCheck integral_bound_check(double alpha, double beta, const std::vector<double>& times) {
  if (times.size() < 8) throw LabError(ErrorKind::InvalidArgument, "need at least 8 times");
  if (times.back() < 1e3) throw LabError(ErrorKind::InvalidArgument, "integral check needs t_max >= 1e3");
  IntegralBoundCheck out;
  out.alpha = alpha;
  out.beta = beta;
  out.times = times;
  const double top = std::max(alpha, beta);
  const bool with_log = top == 1.0;
  if (top > 1.0) {
    out.branch = IntegralBranch::MaxAboveOne;
    out.predicted_exponent = -std::min(alpha, beta);
  } else if (with_log) {
    out.branch = IntegralBranch::MaxEqualsOne;
    out.predicted_exponent = -std::min(alpha, beta);
  } else {
    out.branch = IntegralBranch::MaxBelowOne;
    out.predicted_exponent = 1.0 - alpha - beta;
  }
  std::vector<double> reduced;
  out.ratio_min = std::numeric_limits<double>::infinity();
  for (double t : times) {
    const double value = lemma_integral(alpha, beta, t);
    const double log_factor = with_log ? std::log(M_E + t) : 1.0;
    out.values.push_back(value);
    reduced.push_back(value / log_factor);
    const double ratio = value / (std::pow(1.0 + t, out.predicted_exponent) * log_factor);
    out.ratio_min = std::min(out.ratio_min, ratio);
    out.ratio_max = std::max(out.ratio_max, ratio);
  }
  out.fit = fit_line(times, reduced, FitScale::LogOnePlusT);
  const double t_end = times.back();
  const double step = 1.01;
  out.end_slope = std::log(lemma_integral(alpha, beta, step * t_end) / out.values.back()) / std::log(step);
  if (with_log) out.end_slope -= std::log(std::log(M_E + step * t_end) / std::log(M_E + t_end)) / std::log(step);
  return out;
}

}  // namespace boussinesq
