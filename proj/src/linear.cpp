#include "boussinesq/linear.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "boussinesq/error.hpp"
#include "boussinesq/parallel.hpp"

namespace boussinesq {

DataDescriptor DataDescriptor::zero() {
  DataDescriptor d;
  d.kind = Kind::Zero;
  d.amplitude = 0.0;
  return d;
}

DataDescriptor DataDescriptor::gaussian(double width, double amplitude) {
  DataDescriptor d;
  d.kind = Kind::Gaussian;
  d.width = width;
  d.amplitude = amplitude;
  return d;
}

DataDescriptor DataDescriptor::band_limited_gaussian(double width, double xi_max, double amplitude) {
  DataDescriptor d;
  d.kind = Kind::BandLimitedGaussian;
  d.width = width;
  d.xi_max = xi_max;
  d.amplitude = amplitude;
  return d;
}

DataDescriptor DataDescriptor::single_mode(std::array<int, 3> mode, double amplitude) {
  DataDescriptor d;
  d.kind = Kind::SingleMode;
  d.mode = mode;
  d.amplitude = amplitude;
  return d;
}

DataDescriptor DataDescriptor::random_band_limited(std::uint64_t seed, double width, double xi_max,
                                                   double amplitude) {
  DataDescriptor d;
  d.kind = Kind::RandomBandLimited;
  d.seed = seed;
  d.width = width;
  d.xi_max = xi_max;
  d.amplitude = amplitude;
  return d;
}

std::string DataDescriptor::label() const {
  std::ostringstream os;
  os << to_string(kind);
  switch (kind) {
    case Kind::Zero:
    case Kind::Custom: break;
    case Kind::Gaussian: os << "(width=" << width << ", amplitude=" << amplitude << ")"; break;
    case Kind::BandLimitedGaussian:
      os << "(width=" << width << ", xi_max=" << xi_max << ", amplitude=" << amplitude << ")";
      break;
    case Kind::SingleMode:
      os << "(k=" << mode[0] << "," << mode[1] << "," << mode[2] << ", amplitude=" << amplitude << ")";
      break;
    case Kind::RandomBandLimited:
      os << "(seed=" << seed << ", width=" << width << ", xi_max=" << xi_max
         << ", amplitude=" << amplitude << ")";
      break;
  }
  return os.str();
}

std::string_view to_string(DataDescriptor::Kind kind) {
  switch (kind) {
    case DataDescriptor::Kind::Zero: return "Zero";
    case DataDescriptor::Kind::Gaussian: return "Gaussian";
    case DataDescriptor::Kind::BandLimitedGaussian: return "BandLimitedGaussian";
    case DataDescriptor::Kind::SingleMode: return "SingleMode";
    case DataDescriptor::Kind::RandomBandLimited: return "RandomBandLimited";
    case DataDescriptor::Kind::Custom: return "Custom";
  }
  return "?";
}

DataDescriptor::Kind data_kind_from_string(std::string_view s) {
  for (auto k : {DataDescriptor::Kind::Zero, DataDescriptor::Kind::Gaussian,
                 DataDescriptor::Kind::BandLimitedGaussian, DataDescriptor::Kind::SingleMode,
                 DataDescriptor::Kind::RandomBandLimited, DataDescriptor::Kind::Custom}) {
    if (to_string(k) == s) return k;
  }
  throw LabError(ErrorKind::InvalidArgument, "unknown data kind '" + std::string(s) + "'");
}

namespace {

Field gaussian_field(const Grid& grid, double width, double amplitude) {
  if (!(width > 0.0)) throw LabError(ErrorKind::InvalidArgument, "Gaussian width must be positive");
  const double inv = 1.0 / (2.0 * width * width);
  return Field::from_function(grid, [&](std::span<const double> x) {
    double r2 = 0.0;
    for (double xi : x) r2 += xi * xi;
    return cplx(amplitude * std::exp(-r2 * inv), 0.0);
  });
}

// Zero every mode with |xi| > xi_max and drop the imaginary rounding residue.
Field band_limit(const Field& f, double xi_max) {
  Field spec = to_spectral(f);
  const auto& xi = f.grid().frequency_norms();
  auto& v = spec.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (xi[i] > xi_max) v[i] = 0.0;
  }
  Field phys = inverse_transform(spec);
  for (auto& value : phys.values()) value = cplx(value.real(), 0.0);
  return phys;
}

}  // namespace

Field make_field(const Grid& grid, const DataDescriptor& d) {
  using Kind = DataDescriptor::Kind;
  switch (d.kind) {
    case Kind::Zero: return Field(grid, Representation::Physical);
    case Kind::Gaussian: return gaussian_field(grid, d.width, d.amplitude);
    case Kind::BandLimitedGaussian:
      return band_limit(gaussian_field(grid, d.width, d.amplitude), d.xi_max);
    case Kind::SingleMode: {
      const double scale = M_PI / grid.half_length();
      return Field::from_function(grid, [&](std::span<const double> x) {
        double phase = 0.0;
        for (std::size_t a = 0; a < x.size(); ++a) phase += scale * d.mode[a] * x[a];
        return cplx(d.amplitude * std::cos(phase), 0.0);
      });
    }
    case Kind::RandomBandLimited: {
      std::mt19937_64 rng(d.seed);
      std::normal_distribution<double> normal(0.0, 1.0);
      Field noise(grid, Representation::Physical);
      for (auto& v : noise.values()) v = cplx(normal(rng), 0.0);
      const double w = d.width;
      const double xi_max = d.xi_max;
      Field shaped = apply_symbol(
          [w, xi_max](double xi) { return xi > xi_max ? 0.0 : std::exp(-0.5 * w * w * xi * xi); },
          noise);
      double peak = 0.0;
      for (const auto& v : shaped.values()) peak = std::max(peak, std::abs(v.real()));
      for (auto& v : shaped.values()) v = cplx(peak > 0.0 ? d.amplitude * v.real() / peak : 0.0, 0.0);
      return shaped;
    }
    case Kind::Custom:
      throw LabError(ErrorKind::InvalidArgument, "Custom data must be supplied as fields");
  }
  return Field(grid, Representation::Physical);
}

CauchyData CauchyData::make(const Grid& grid, const DataDescriptor& d0, const DataDescriptor& d1) {
  return CauchyData{make_field(grid, d0), make_field(grid, d1), d0, d1};
}

CauchyData CauchyData::custom(Field v0, Field v1) {
  if (!(v0.grid() == v1.grid())) {
    throw LabError(ErrorKind::SizeMismatch, "v0 and v1 must share one grid");
  }
  DataDescriptor custom;
  custom.kind = DataDescriptor::Kind::Custom;
  return CauchyData{std::move(v0), std::move(v1), custom, custom};
}

LinearState evolve_linear(const CauchyData& data, double t, const ModelParams& params) {
  params.validate();
  if (t < 0.0) throw LabError(ErrorKind::InvalidArgument, "time must be >= 0");
  const Field s0 = to_spectral(data.v0);
  const Field s1 = to_spectral(data.v1);
  if (!(s0.grid() == s1.grid())) throw LabError(ErrorKind::SizeMismatch, "data grids differ");

  const auto& xi = s0.grid().frequency_norms();
  Field v(s0.grid(), Representation::Spectral);
  Field vt(s0.grid(), Representation::Spectral);
  const double eps = params.eps;
  parallel_for(0, xi.size(), [&](std::size_t i) {
    const double k0 = kernel_value(KernelKind::K0, t, xi[i], eps);
    const double k1 = kernel_value(KernelKind::K1, t, xi[i], eps);
    const double x2 = xi[i] * xi[i];
    const double dk0 = -(x2 + x2 * x2) * k1;
    const double dk1 = k0 - 2.0 * eps * x2 * k1;
    v.values()[i] = k0 * s0.values()[i] + k1 * s1.values()[i];
    vt.values()[i] = dk0 * s0.values()[i] + dk1 * s1.values()[i];
  });
  if (data.v0.representation() == Representation::Physical) {
    return {inverse_transform(v), inverse_transform(vt)};
  }
  return {std::move(v), std::move(vt)};
}

LinearState ode_oracle(const CauchyData& data, double t, const ModelParams& params, double dt) {
  params.validate();
  if (t < 0.0 || !(dt > 0.0)) throw LabError(ErrorKind::InvalidArgument, "need t >= 0 and dt > 0");
  const Grid& grid = data.grid();
  const double xi_max = grid.max_frequency();
  const double eps = params.eps;
  if (2.0 * eps * xi_max * xi_max * dt >= 0.5) {
    throw LabError(ErrorKind::StabilityViolation, "2 eps |xi_max|^2 dt >= 0.5");
  }
  if (dispersion(xi_max, 0.0) * dt >= 2.5) {
    throw LabError(ErrorKind::StabilityViolation, "omega_max dt >= 2.5 (outside RK4 stability)");
  }
  const auto steps = static_cast<std::size_t>(std::ceil(t / dt));
  const double h = steps == 0 ? 0.0 : t / static_cast<double>(steps);

  const Field s0 = to_spectral(data.v0);
  const Field s1 = to_spectral(data.v1);
  const auto& xi = grid.frequency_norms();
  Field v(grid, Representation::Spectral);
  Field vt(grid, Representation::Spectral);
  parallel_for(0, xi.size(), [&](std::size_t i) {
    const double x2 = xi[i] * xi[i];
    const double damp = 2.0 * eps * x2;
    const double stiff = x2 * (1.0 + x2);
    auto accel = [&](cplx y, cplx yp) { return -damp * yp - stiff * y; };
    cplx y = s0.values()[i];
    cplx yp = s1.values()[i];
    for (std::size_t k = 0; k < steps; ++k) {
      const cplx k1y = yp;
      const cplx k1p = accel(y, yp);
      const cplx k2y = yp + 0.5 * h * k1p;
      const cplx k2p = accel(y + 0.5 * h * k1y, k2y);
      const cplx k3y = yp + 0.5 * h * k2p;
      const cplx k3p = accel(y + 0.5 * h * k2y, k3y);
      const cplx k4y = yp + h * k3p;
      const cplx k4p = accel(y + h * k3y, k4y);
      y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
      yp += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    }
    v.values()[i] = y;
    vt.values()[i] = yp;
  });
  if (data.v0.representation() == Representation::Physical) {
    return {inverse_transform(v), inverse_transform(vt)};
  }
  return {std::move(v), std::move(vt)};
}

std::vector<double> mode_energies(const LinearState& state) {
  const Field v = to_spectral(state.v);
  const Field vt = to_spectral(state.v_t);
  const auto& xi = v.grid().frequency_norms();
  std::vector<double> e(xi.size());
  for (std::size_t i = 0; i < xi.size(); ++i) {
    const double x2 = xi[i] * xi[i];
    e[i] = std::norm(vt.values()[i]) + x2 * (1.0 + x2) * std::norm(v.values()[i]);
  }
  return e;
}

std::string_view to_string(Quantity quantity) { return quantity == Quantity::V ? "v" : "v_t"; }

double inverse_r(double m, double q) {
  if (!(m >= 1.0) || !(q >= m)) throw LabError(ErrorKind::InvalidArgument, "need 1 <= m <= q");
  const double inv_q = std::isinf(q) ? 0.0 : 1.0 / q;
  return 1.0 + inv_q - 1.0 / m;
}

double linear_rate_exponent(int n, double m, double q, double s, Quantity quantity, int data_index,
                            Bracket convention, bool large_time) {
  if (data_index != 0 && data_index != 1) {
    throw LabError(ErrorKind::InvalidArgument, "data_index must be 0 or 1");
  }
  const double inv_r = inverse_r(m, q);
  const double base = -0.5 * n * (1.0 - inv_r) - 0.5 * s;
  if (!large_time) {
    return base + data_index - (quantity == Quantity::Vt ? 1.0 : 0.0);
  }
  const double full = bracket(0.5 * n, convention);
  const double less = bracket(0.5 * n - 1.0, convention);
  if (quantity == Quantity::V) {
    return data_index == 0 ? base + 0.5 * inv_r * full : 1.0 + base + 0.5 * inv_r * less;
  }
  return data_index == 0 ? base + 0.5 * inv_r * less : base + 0.5 * inv_r * full;
}

namespace {

bool is_zero(const Field& f) {
  for (const auto& v : f.values()) {
    if (v != cplx(0.0, 0.0)) return false;
  }
  return true;
}

}  // namespace

DecayExperiment decay_experiment(const CauchyData& data, const ModelParams& params,
                                 const NormKind& norm_kind, double m,
                                 std::span<const double> times, Quantity quantity, bool strict) {
  const bool zero0 = is_zero(data.v0);
  const bool zero1 = is_zero(data.v1);
  if (zero0 == zero1) {
    throw LabError(ErrorKind::InvalidArgument,
                   "decay experiment needs exactly one nonzero data component");
  }
  if (times.empty()) throw LabError(ErrorKind::InvalidArgument, "decay experiment needs times");
  for (double t : times) {
    if (t < 1.0) throw LabError(ErrorKind::InvalidArgument, "large-time branch needs t >= 1");
  }
  DecayExperiment out;
  out.data_index = zero0 ? 1 : 0;
  const double q = norm_kind.type == NormKind::Type::Linf ? INFINITY : norm_kind.q;
  const double s = norm_kind.type == NormKind::Type::SobolevDotHsq ? norm_kind.s : 0.0;
  out.predicted_floor =
      linear_rate_exponent(params.n, m, q, s, quantity, out.data_index, Bracket::Floor);
  out.predicted_trunc =
      linear_rate_exponent(params.n, m, q, s, quantity, out.data_index, Bracket::Trunc);

  out.times.assign(times.begin(), times.end());
  for (double t : times) {
    const LinearState state = evolve_linear(data, t, params);
    out.norms.push_back(norm(quantity == Quantity::V ? state.v : state.v_t, norm_kind));
  }
  out.bound = calibrated_bound_check(out.times, out.norms, out.predicted_trunc);
  out.fit = fit_line(out.times, out.norms, FitScale::LogLog);
  out.fit_reliable = out.fit.r_squared >= 0.98;
  if (strict && !out.fit_reliable) {
    throw LabError(ErrorKind::FitUnreliable,
                   "decay fit r^2 = " + std::to_string(out.fit.r_squared) + " below 0.98");
  }
  return out;
}

MiddleZoneSeries middle_zone_solution_decay(const CauchyData& data, const ModelParams& params,
                                            std::span<const double> times) {
  MiddleZoneSeries out;
  out.times.assign(times.begin(), times.end());
  for (double t : times) {
    const LinearState state = evolve_linear(data, t, params);
    const Field mid = apply_symbol(
        [&](double xi) { return cutoff(Zone::Mid, xi, params); }, state.v);
    out.norms.push_back(norm(mid, NormKind::Lq(2.0)));
  }
  out.fit = fit_line(out.times, out.norms, FitScale::LogLinear);
  return out;
}

}  // namespace boussinesq
