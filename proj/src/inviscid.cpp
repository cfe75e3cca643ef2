#include "boussinesq/inviscid.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <sstream>

#include "boussinesq/error.hpp"
#include "boussinesq/parallel.hpp"
#include "boussinesq/quadrature.hpp"

namespace boussinesq {

namespace {

constexpr std::size_t kNodesPerPanel = 16;

double e0(double omega, double t) { return std::cos(omega * t); }
double e1(double omega, double t) { return t * sinc(omega * t); }

Field from_modes(const Grid& grid, std::vector<cplx> values, Representation target) {
  Field spec(grid, Representation::Spectral, std::move(values));
  return target == Representation::Physical ? inverse_transform(spec) : spec;
}

double sup_abs(const std::vector<cplx>& v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, std::abs(x));
  return m;
}

// Modes whose data sits at round-off level relative to the peak are skipped.
std::vector<char> active_modes(std::initializer_list<const Field*> spectra) {
  const std::size_t size = (*spectra.begin())->size();
  double peak = 0.0;
  for (const Field* f : spectra) peak = std::max(peak, sup_abs(f->values()));
  std::vector<char> active(size, 0);
  const double floor = 1e-16 * peak;
  for (const Field* f : spectra) {
    for (std::size_t i = 0; i < size; ++i) {
      if (std::abs(f->values()[i]) > floor) active[i] = 1;
    }
  }
  return active;
}

double sup_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Per-mode quadrature of an integrand on [0, t] with global panel doubling.
// integrand(i, nodes) returns the quadrature sum for mode i.
template <typename ModeSum>
std::vector<cplx> doubled_quadrature(std::size_t modes, double t, const QuadratureControl& control,
                                     ModeSum&& mode_sum) {
  if (control.panels < 1) throw LabError(ErrorKind::InvalidArgument, "need at least one panel");
  auto run = [&](std::size_t panels) {
    const QuadratureNodes nodes = composite_gauss_legendre(0.0, t, panels, kNodesPerPanel);
    std::vector<cplx> out(modes);
    parallel_for(0, modes, [&](std::size_t i) { out[i] = mode_sum(i, nodes); });
    return out;
  };
  std::size_t panels = control.panels;
  std::vector<cplx> coarse = run(panels);
  for (int level = 0; level < control.max_doublings; ++level) {
    panels *= 2;
    std::vector<cplx> fine = run(panels);
    const double scale = sup_abs(fine);
    if (sup_diff(fine, coarse) <= control.rel_tol * scale || scale == 0.0) return fine;
    coarse = std::move(fine);
  }
  throw LabError(ErrorKind::QuadratureNotConverged,
                 "panel doubling did not reach relative " + std::to_string(control.rel_tol));
}

}  // namespace

LinearState evolve_inviscid(const CauchyData& data, double t) {
  if (t < 0.0) throw LabError(ErrorKind::InvalidArgument, "time must be >= 0");
  const Field s0 = to_spectral(data.v0);
  const Field s1 = to_spectral(data.v1);
  const auto& xi = s0.grid().frequency_norms();
  std::vector<cplx> v(xi.size());
  std::vector<cplx> vt(xi.size());
  parallel_for(0, xi.size(), [&](std::size_t i) {
    const double omega = dispersion(xi[i], 0.0);
    const double c = e0(omega, t);
    const double s = e1(omega, t);
    v[i] = c * s0.values()[i] + s * s1.values()[i];
    vt[i] = -omega * omega * s * s0.values()[i] + c * s1.values()[i];
  });
  const auto rep = data.v0.representation();
  return {from_modes(s0.grid(), std::move(v), rep), from_modes(s0.grid(), std::move(vt), rep)};
}

Field corrector(const CauchyData& data, double t, const QuadratureControl& control) {
  if (t < 0.0) throw LabError(ErrorKind::InvalidArgument, "time must be >= 0");
  const Field s0 = to_spectral(data.v0);
  const Field s1 = to_spectral(data.v1);
  const Grid& grid = s0.grid();
  if (t == 0.0) return Field(grid, data.v0.representation());
  const auto& xi = grid.frequency_norms();
  const std::vector<char> active = active_modes({&s0, &s1});
  std::vector<cplx> modes = doubled_quadrature(
      xi.size(), t, control, [&](std::size_t i, const QuadratureNodes& nodes) {
        const cplx a0 = s0.values()[i];
        const cplx a1 = s1.values()[i];
        const double x2 = xi[i] * xi[i];
        if (x2 == 0.0 || !active[i]) return cplx(0.0);
        const double omega = dispersion(xi[i], 0.0);
        cplx acc = 0.0;
        for (std::size_t k = 0; k < nodes.points.size(); ++k) {
          const double tau = nodes.points[k];
          const cplx vt0 = -omega * omega * e1(omega, tau) * a0 + e0(omega, tau) * a1;
          acc += nodes.weights[k] * e1(omega, t - tau) * (-2.0 * x2) * vt0;
        }
        return acc;
      });
  return from_modes(grid, std::move(modes), data.v0.representation());
}

CorrectorDefect corrector_defect(const CauchyData& data, double t, const QuadratureControl& control) {
  if (!(t > 0.0)) throw LabError(ErrorKind::InvalidArgument, "defect needs t > 0");
  const Field s0 = to_spectral(data.v0);
  const Field s1 = to_spectral(data.v1);
  const Grid& grid = s0.grid();
  const auto& xi = grid.frequency_norms();
  const std::vector<cplx> tilde = to_spectral(corrector(data, t, control)).values();
  const std::vector<char> active = active_modes({&s0, &s1});

  // Second derivative from d/dt int_0^t E0(s) F(t - s) ds = E0(t) F(0) + int_0^t E0(s) F'(t - s) ds,
  // with F = -2 |xi|^2 v_t^0 and F' = 2 |xi|^2 omega^2 v^0.
  std::vector<cplx> tilde_tt = doubled_quadrature(
      xi.size(), t, control, [&](std::size_t i, const QuadratureNodes& nodes) {
        const cplx a0 = s0.values()[i];
        const cplx a1 = s1.values()[i];
        const double x2 = xi[i] * xi[i];
        if (x2 == 0.0 || !active[i]) return cplx(0.0);
        const double omega = dispersion(xi[i], 0.0);
        cplx acc = e0(omega, t) * (-2.0 * x2) * a1;
        for (std::size_t k = 0; k < nodes.points.size(); ++k) {
          const double s = nodes.points[k];
          const cplx v0 = e0(omega, t - s) * a0 + e1(omega, t - s) * a1;
          acc += nodes.weights[k] * e0(omega, s) * (2.0 * x2 * omega * omega) * v0;
        }
        return acc;
      });

  std::vector<cplx> residual(xi.size());
  std::vector<cplx> source(xi.size());
  for (std::size_t i = 0; i < xi.size(); ++i) {
    const double x2 = xi[i] * xi[i];
    const double omega = dispersion(xi[i], 0.0);
    const cplx a0 = s0.values()[i];
    const cplx a1 = s1.values()[i];
    const cplx vt0 = -omega * omega * e1(omega, t) * a0 + e0(omega, t) * a1;
    source[i] = -2.0 * x2 * vt0;
    residual[i] = tilde_tt[i] + omega * omega * tilde[i] - source[i];
  }
  CorrectorDefect out;
  out.residual = norm(from_modes(grid, std::move(residual), Representation::Physical), NormKind::Linf());
  out.source_sup = norm(from_modes(grid, std::move(source), Representation::Physical), NormKind::Linf());
  return out;
}

std::vector<double> gap_schedule(double T, std::size_t intervals) {
  if (!(T > 0.0) || intervals < 1) throw LabError(ErrorKind::InvalidArgument, "need T > 0");
  std::vector<double> times(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i) times[i] = T * i / intervals;
  times.back() = T;
  return times;
}

namespace {

double sup_gap(const Field& a, const Field& b) {
  const Field pa = to_physical(a);
  const Field pb = to_physical(b);
  double m = 0.0;
  for (std::size_t i = 0; i < pa.size(); ++i) m = std::max(m, std::abs(pa.values()[i] - pb.values()[i]));
  return m;
}

ModelParams viscous(const CauchyData& data, double eps) {
  ModelParams p;
  p.n = data.grid().dim();
  p.eps = eps;
  return p;
}

}  // namespace

double first_order_gap(const CauchyData& data, double T, double eps) {
  double gap = 0.0;
  for (double t : gap_schedule(T)) {
    gap = std::max(gap, sup_gap(evolve_linear(data, t, viscous(data, eps)).v, evolve_inviscid(data, t).v));
  }
  return gap;
}

double second_order_gap(const CauchyData& data, double T, double eps, const QuadratureControl& control) {
  double gap = 0.0;
  for (double t : gap_schedule(T)) {
    Field approx = evolve_inviscid(data, t).v;
    approx += eps * to_physical(corrector(data, t, control));
    gap = std::max(gap, sup_gap(evolve_linear(data, t, viscous(data, eps)).v, approx));
  }
  return gap;
}

std::string_view to_string(LimitOrder order) { return order == LimitOrder::First ? "first" : "second"; }

std::pair<double, double> regularity_indices(int n, LimitOrder order) {
  const double shift = order == LimitOrder::First ? 0.0 : 2.0;
  return {n + 2.0 + shift + 0.5, n + shift + 0.5};
}

double regularity_norm(const CauchyData& data, LimitOrder order) {
  const auto [s0, s1] = regularity_indices(data.grid().dim(), order);
  return bessel_potential_norm(data.v0, s0, 1.0) + bessel_potential_norm(data.v1, s1, 1.0);
}

EpsSweep eps_sweep(const CauchyData& data, double T, std::span<const double> eps_values,
                   LimitOrder order, const QuadratureControl& control) {
  if (eps_values.size() < 3) throw LabError(ErrorKind::InvalidArgument, "sweep needs >= 3 eps values");
  for (std::size_t i = 0; i < eps_values.size(); ++i) {
    if (!(eps_values[i] > 0.0 && eps_values[i] <= 0.5)) {
      throw LabError(ErrorKind::InvalidArgument, "sweep eps values must lie in (0, 0.5]");
    }
    if (i > 0 && !(eps_values[i] < eps_values[i - 1])) {
      throw LabError(ErrorKind::InvalidArgument, "sweep eps values must strictly decrease");
    }
  }
  EpsSweep out;
  out.order = order;
  out.T = T;
  out.eps_values.assign(eps_values.begin(), eps_values.end());
  out.data_descriptor = "v0=" + data.d0.label() + ", v1=" + data.d1.label();

  const std::vector<double> times = gap_schedule(T);
  std::vector<Field> inviscid;
  std::vector<Field> profile;
  double profile_sup = 0.0;
  for (double t : times) {
    inviscid.push_back(to_physical(evolve_inviscid(data, t).v));
    if (order == LimitOrder::Second) {
      profile.push_back(to_physical(corrector(data, t, control)));
      profile_sup = std::max(profile_sup, norm(profile.back(), NormKind::Linf()));
    }
  }
  for (double eps : eps_values) {
    double gap = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      Field approx = inviscid[i];
      if (order == LimitOrder::Second) approx += eps * profile[i];
      gap = std::max(gap, sup_gap(evolve_linear(data, times[i], viscous(data, eps)).v, approx));
    }
    out.gaps.push_back(gap);
    if (order == LimitOrder::Second) out.corrector_sup.push_back(eps * profile_sup);
  }
  const DecayFit fit = fit_line(out.eps_values, out.gaps, FitScale::LogLog, 3);
  out.fitted_rate = fit.exponent;
  out.fit_r_squared = fit.r_squared;

  const double power = order == LimitOrder::First ? 1.0 : 2.0;
  out.data_norm = regularity_norm(data, order);
  out.calibrated_C_T = out.gaps[0] / (std::pow(out.eps_values[0], power) * out.data_norm);
  out.ratio_growth = 1.0;
  for (std::size_t i = 1; i < out.gaps.size(); ++i) {
    const double bound = out.calibrated_C_T * std::pow(out.eps_values[i], power) * out.data_norm;
    out.ratio_growth = std::max(out.ratio_growth, out.gaps[i] / bound);
  }
  out.bound_dominates = out.ratio_growth <= kBoundSlack;
  return out;
}

Field WkbProfileSet::boundary_at(int j, double t) const {
  const auto& coeffs = boundary.at(static_cast<std::size_t>(j));
  Field out(coeffs.front().grid(), coeffs.front().representation());
  double power = 1.0;
  for (const auto& c : coeffs) {
    out += power * c;
    power *= t;
  }
  return out;
}

double WkbProfileSet::matching_defect() const {
  double worst = 0.0;
  for (int j = 1; j <= order; ++j) {
    const Field in = to_physical(inner[j].front());
    const Field layer = to_physical(boundary_at(j, 0.0));
    for (std::size_t i = 0; i < in.size(); ++i) {
      worst = std::max(worst, std::abs(in.values()[i] + layer.values()[i]));
    }
  }
  return worst;
}

namespace {

// Copies samples onto the slow grid (the same lattice indices, z = sqrt(eps) x).
Field on_grid(const Field& f, const Grid& grid, double sign) {
  const Field phys = to_physical(f);
  std::vector<cplx> values = phys.values();
  for (auto& v : values) v *= sign;
  return Field(grid, Representation::Physical, std::move(values));
}

Field laplacian(const Field& f) {
  return apply_symbol([](double xi) { return -xi * xi; }, f);
}

}  // namespace

WkbProfileSet wkb_profiles(const CauchyData& data, int J, double T, double eps,
                           std::span<const CauchyData> higher_data, std::size_t intervals) {
  if (J < 1) throw LabError(ErrorKind::InvalidArgument, "expansion order must be >= 1");
  if (J > 4) throw LabError(ErrorKind::OrderTooHigh, "expansion order is capped at 4");
  if (!(eps > 0.0 && eps < 1.0)) throw LabError(ErrorKind::InvalidArgument, "need 0 < eps < 1");
  if (higher_data.size() > static_cast<std::size_t>(J)) {
    throw LabError(ErrorKind::InvalidArgument, "more higher-order data than profiles");
  }
  const Grid& grid = data.grid();
  const auto& xi = grid.frequency_norms();
  const std::size_t modes = xi.size();
  const std::size_t levels = static_cast<std::size_t>(J) + 1;

  // Spectral data per level: level 0 carries the Cauchy data, level j >= 1 the caller's.
  std::vector<Field> a0;
  std::vector<Field> a1;
  a0.push_back(to_spectral(data.v0));
  a1.push_back(to_spectral(data.v1));
  for (std::size_t j = 1; j < levels; ++j) {
    if (j - 1 < higher_data.size()) {
      if (!(higher_data[j - 1].grid() == grid)) {
        throw LabError(ErrorKind::SizeMismatch, "higher-order data must share the grid");
      }
      a0.push_back(to_spectral(higher_data[j - 1].v0));
      a1.push_back(to_spectral(higher_data[j - 1].v1));
    } else {
      a0.emplace_back(grid, Representation::Spectral);
      a1.emplace_back(grid, Representation::Spectral);
    }
  }

  WkbProfileSet out;
  out.order = J;
  out.eps = eps;
  out.times = gap_schedule(T, intervals);
  const std::size_t samples = out.times.size();
  const double width = T / static_cast<double>(intervals);

  const GaussLegendreRule& rule = gauss_legendre(kNodesPerPanel);
  const std::vector<double>& cumulative = cumulative_integration_matrix(kNodesPerPanel);

  std::vector<char> active(modes, 0);
  for (std::size_t j = 0; j < levels; ++j) {
    const std::vector<char> level_active = active_modes({&a0[j], &a1[j]});
    for (std::size_t i = 0; i < modes; ++i) active[i] = active[i] || level_active[i];
  }

  // values[(level * samples + i) * modes + mode]
  std::vector<cplx> values(levels * samples * modes, cplx(0.0));
  parallel_for(0, modes, [&](std::size_t mode) {
    if (!active[mode]) return;
    const double x2 = xi[mode] * xi[mode];
    const double omega = dispersion(xi[mode], 0.0);
    // Sub-panels per interval keep the phase of cos(omega tau) F(tau) below ~2 rad a panel.
    const auto sub = static_cast<std::size_t>(std::max(2.0, std::ceil(2.0 * omega * width / 2.0)));
    const std::size_t panels = intervals * sub;
    const double h = width / static_cast<double>(sub);
    const std::size_t count = panels * kNodesPerPanel;

    std::vector<double> tau(count);
    for (std::size_t p = 0; p < panels; ++p) {
      for (std::size_t k = 0; k < kNodesPerPanel; ++k) {
        tau[p * kNodesPerPanel + k] = h * (static_cast<double>(p) + 0.5 * (rule.nodes[k] + 1.0));
      }
    }
    std::vector<cplx> vt(count);   // v_t of the previous level at the nodes
    std::vector<cplx> src(count);  // source F of the current level
    auto store = [&](std::size_t level, std::size_t i, cplx value) {
      values[(level * samples + i) * modes + mode] = value;
    };

    const cplx b0 = a0[0].values()[mode];
    const cplx b1 = a1[0].values()[mode];
    for (std::size_t k = 0; k < count; ++k) {
      vt[k] = -omega * omega * e1(omega, tau[k]) * b0 + e0(omega, tau[k]) * b1;
    }
    for (std::size_t i = 0; i < samples; ++i) {
      const double t = out.times[i];
      store(0, i, e0(omega, t) * b0 + e1(omega, t) * b1);
    }

    for (std::size_t level = 1; level < levels; ++level) {
      for (std::size_t k = 0; k < count; ++k) src[k] = -2.0 * x2 * vt[k];
      const cplx c0 = a0[level].values()[mode];
      const cplx c1 = a1[level].values()[mode];
      // Running C = int cos(omega s) F ds and S = int sin(omega s) F ds.
      cplx C = 0.0;
      cplx S = 0.0;
      store(level, 0, c0);
      for (std::size_t p = 0; p < panels; ++p) {
        const std::size_t base = p * kNodesPerPanel;
        cplx gc[kNodesPerPanel];
        cplx gs[kNodesPerPanel];
        for (std::size_t k = 0; k < kNodesPerPanel; ++k) {
          gc[k] = std::cos(omega * tau[base + k]) * src[base + k];
          gs[k] = std::sin(omega * tau[base + k]) * src[base + k];
        }
        for (std::size_t k = 0; k < kNodesPerPanel; ++k) {
          cplx ic = 0.0;
          cplx is = 0.0;
          for (std::size_t m = 0; m < kNodesPerPanel; ++m) {
            const double w = cumulative[k * kNodesPerPanel + m];
            ic += w * gc[m];
            is += w * gs[m];
          }
          const double t = tau[base + k];
          const cplx Ck = C + 0.5 * h * ic;
          const cplx Sk = S + 0.5 * h * is;
          const double c = std::cos(omega * t);
          const double s = std::sin(omega * t);
          vt[base + k] = -omega * omega * e1(omega, t) * c0 + e0(omega, t) * c1 + c * Ck + s * Sk;
        }
        for (std::size_t m = 0; m < kNodesPerPanel; ++m) {
          C += 0.5 * h * rule.weights[m] * gc[m];
          S += 0.5 * h * rule.weights[m] * gs[m];
        }
        if ((p + 1) % sub == 0) {
          const std::size_t i = (p + 1) / sub;
          const double t = out.times[i];
          const double c = std::cos(omega * t);
          const double s = std::sin(omega * t);
          const cplx duhamel = omega == 0.0 ? cplx(0.0) : (s * C - c * S) / omega;
          store(level, i, e0(omega, t) * c0 + e1(omega, t) * c1 + duhamel);
        }
      }
    }
  });

  const auto rep = data.v0.representation();
  out.inner.resize(levels);
  for (std::size_t j = 0; j < levels; ++j) {
    for (std::size_t i = 0; i < samples; ++i) {
      std::vector<cplx> slice(values.begin() + static_cast<std::ptrdiff_t>((j * samples + i) * modes),
                              values.begin() + static_cast<std::ptrdiff_t>((j * samples + i + 1) * modes));
      out.inner[j].push_back(from_modes(grid, std::move(slice), rep));
    }
  }

  // Boundary layers as polynomials in t on the slow grid.
  const Grid slow = grid.scaled(std::sqrt(eps));
  const Field zero(slow, Representation::Physical);
  out.boundary.resize(levels);
  out.boundary[0] = {zero};
  auto data_field = [&](const Field& spectral) { return on_grid(spectral, slow, -1.0); };
  out.boundary[1] = {data_field(a0[1]), data_field(a1[1])};
  for (std::size_t j = 0; j + 2 < levels; ++j) {
    const auto& low = out.boundary[j];
    const auto& mid = out.boundary[j + 1];
    std::vector<Field> c = {data_field(a0[j + 2]), data_field(a1[j + 2])};
    const std::size_t degree = std::max(low.size() + 2, mid.size() + 2);
    while (c.size() < degree) c.push_back(zero);
    c[1] -= 2.0 * laplacian(low[0]);
    for (std::size_t p = 0; p < low.size(); ++p) {
      const Field lap = laplacian(low[p]);
      c[p + 1] += (2.0 / static_cast<double>(p + 1)) * lap;
      c[p + 2] -= (1.0 / static_cast<double>((p + 1) * (p + 2))) * laplacian(lap);
    }
    for (std::size_t p = 0; p < mid.size(); ++p) {
      c[p + 2] += (1.0 / static_cast<double>((p + 1) * (p + 2))) * laplacian(mid[p]);
    }
    out.boundary[j + 2] = std::move(c);
  }

  for (std::size_t j = 0; j < levels; ++j) {
    std::ostringstream os;
    if (j == 0) {
      os << "v^{I,0}: Cauchy data (" << data.d0.label() << ", " << data.d1.label() << "); v^{L,0} = 0";
    } else {
      const bool given = j - 1 < higher_data.size();
      os << "v^{I," << j << "}: " << (given ? "caller data" : "zero data") << "; v^{L," << j
         << "}(0, z) = -v_0^{I," << j << "}(x), d/dt v^{L," << j << "}(0, z) = -v_1^{I," << j << "}(x)";
    }
    out.matching.push_back(os.str());
  }
  return out;
}

double inner_expansion_gap(const WkbProfileSet& profiles, const CauchyData& data) {
  ModelParams params;
  params.n = data.grid().dim();
  params.eps = profiles.eps;
  double gap = 0.0;
  for (std::size_t i = 0; i < profiles.times.size(); ++i) {
    Field approx = to_physical(profiles.inner[0][i]);
    double power = 1.0;
    for (int j = 1; j <= profiles.order; ++j) {
      power *= profiles.eps;
      approx += power * to_physical(profiles.inner[j][i]);
    }
    gap = std::max(gap, sup_gap(evolve_linear(data, profiles.times[i], params).v, approx));
  }
  return gap;
}

}  // namespace boussinesq
