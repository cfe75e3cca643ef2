#include "doctest.h"

#include <cmath>
#include <limits>

#include "boussinesq/error.hpp"
#include "boussinesq/kernels.hpp"
#include "boussinesq/quadrature.hpp"

using namespace boussinesq;

TEST_CASE("line fits recover exact power laws and exponentials") {
  const auto t = log_spaced(1.0, 100.0, 12);
  std::vector<double> pw, ex, op;
  for (double s : t) {
    pw.push_back(3.0 * std::pow(s, -0.75));
    ex.push_back(2.0 * std::exp(-0.3 * s));
    op.push_back(std::pow(1.0 + s, 1.5));
  }
  CHECK(fit_line(t, pw, FitScale::LogLog).exponent == doctest::Approx(-0.75).epsilon(1e-10));
  CHECK(fit_line(t, pw, FitScale::LogLog).r_squared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit_line(t, ex, FitScale::LogLinear).exponent == doctest::Approx(-0.3).epsilon(1e-10));
  CHECK(fit_line(t, op, FitScale::LogOnePlusT).exponent == doctest::Approx(1.5).epsilon(1e-10));
  CHECK_THROWS_AS(fit_line(std::vector<double>(t.begin(), t.begin() + 5), std::vector<double>(pw.begin(), pw.begin() + 5), FitScale::LogLog), LabError);
  std::vector<double> bad = pw;
  bad[3] = 0.0;
  CHECK_THROWS_AS(fit_line(t, bad, FitScale::LogLog), LabError);
  std::vector<double> noisy = pw;
  for (std::size_t i = 0; i < noisy.size(); i += 2) noisy[i] *= 10.0;
  CHECK_THROWS_AS(fit_decay(t, noisy, FitScale::LogLog), LabError);
}

TEST_CASE("spacing helpers and integer part") {
  const auto l = log_spaced(1.0, 1000.0, 4);
  CHECK(l[1] == doctest::Approx(10.0));
  CHECK(l.back() == 1000.0);
  const auto u = linear_spaced(0.0, 1.0, 5);
  CHECK(u[2] == doctest::Approx(0.5));
  CHECK(bracket(-0.5, Bracket::Floor) == -1.0);
  CHECK(bracket(-0.5, Bracket::Trunc) == 0.0);
  CHECK(bracket(1.5, Bracket::Floor) == 1.0);
}

TEST_CASE("calibrated bound check") {
  const auto t = log_spaced(1.0, 100.0, 12);
  std::vector<double> v;
  for (double s : t) v.push_back(2.0 * std::pow(s, -1.0) * (1.0 + 0.5 / s));
  CHECK(calibrated_bound_check(t, v, -1.0).holds);
  CHECK_FALSE(calibrated_bound_check(t, v, -1.5).holds);
  CHECK(calibrated_bound_check(t, v, -1.5).worst_ratio > 1.0);
}

TEST_CASE("predicted kernel exponents") {
  const ModelParams p1{1, 0.1, 3.0};
  CHECK(kernel_rate_exponent({KernelKind::K1, 0.0, Zone::High, p1}, INFINITY, Bracket::Trunc) ==
        doctest::Approx(0.5));
  CHECK(kernel_rate_exponent({KernelKind::K0, 2.0, Zone::High, p1}, 1.0, Bracket::Trunc) ==
        doctest::Approx(-1.0));
  const ModelParams p2{2, 0.1, 3.0};
  CHECK(kernel_rate_exponent({KernelKind::K0, 0.0, Zone::Low, p2}, 2.0, Bracket::Floor) ==
        doctest::Approx(-0.25));
  CHECK_THROWS_AS(kernel_rate_exponent({KernelKind::K0, 0.0, Zone::Mid, p1}, 2.0, Bracket::Trunc), LabError);
  CHECK_THROWS_AS(kernel_rate_exponent({KernelKind::DtK0, 0.0, Zone::Low, p1}, 2.0, Bracket::Trunc), LabError);
}

TEST_CASE("high-zone norm series stay under their rates") {
  const auto times = log_spaced(1.0, 20.0, 8);
  const ModelParams p{1, 0.1, 3.0};
  const auto s1 = kernel_norm_series({KernelKind::K1, 0.0, Zone::High, p}, INFINITY, times);
  CHECK(fit_line(s1.times, s1.norms, FitScale::LogLog).exponent <= 0.6);
  const auto s2 = kernel_norm_series({KernelKind::K0, 2.0, Zone::High, p}, 1.0, times);
  CHECK(fit_line(s2.times, s2.norms, FitScale::LogLog).exponent <= -0.9);
  CHECK(s2.method == NormMethod::RadialQuadrature);
  CHECK(kernel_norm_series({KernelKind::K0, 0.0, Zone::High, p}, 2.0, times).method == NormMethod::Plancherel);
}

TEST_CASE("middle-zone kernel decays exponentially") {
  const auto times = linear_spaced(1.0, 20.0, 12);
  const auto m = middle_zone_kernel_decay({KernelKind::K1, 0.0, Zone::Mid, {1, 0.25, 3.0}}, times);
  CHECK(m.fit.exponent < -0.05);
  CHECK(m.fit.r_squared >= 0.98);
}

TEST_CASE("radial norms agree with the lattice transform") {
  const ModelParams p{1, 0.25, 3.0};
  const MultiplierSpec spec{KernelKind::K1, 0.0, Zone::Low, p};
  const std::vector<double> times{2.0, 5.0};
  const Grid g(1, 4096, 200.0);
  for (double r : {1.0, 2.0, std::numeric_limits<double>::infinity()}) {
    const auto radial = kernel_norm_series(spec, r, times);
    const auto lattice = kernel_norm_series_lattice(spec, r, times, g);
    for (std::size_t i = 0; i < times.size(); ++i) {
      CHECK(radial.norms[i] == doctest::Approx(lattice.norms[i]).epsilon(2e-3));
    }
  }
  CHECK_THROWS_AS(kernel_norm_series_lattice({KernelKind::K1, 0.0, Zone::Low, {2, 0.25, 3.0}}, 2.0, times, g),
                  LabError);
}

TEST_CASE("oscillating integral at the origin is the plain radial integral") {
  const ModelParams p{1, 0.25, 3.0};
  const double t = 1.0, c1 = 0.25, c2 = 1.0;
  const std::vector<double> radii{0.0};
  const RadialProfile prof = oscillating_integral_M(p, t, 0.0, c1, c2, radii);
  const double a = 1.0 - p.eps * p.eps;
  auto integrand = [&](double r) {
    const double g = std::sqrt(a + 1.0 / (r * r));
    return std::exp(-c1 * r * r * t) * std::sin(c2 * r * r * g * t) / g * cutoff(Zone::High, r, p);
  };
  const double direct = std::sqrt(2.0 / M_PI) * adaptive_integrate(integrand, 0.5, 20.0, 1e-13);
  CHECK(prof.values[0] == doctest::Approx(direct).epsilon(1e-6));
  CHECK_THROWS_AS(oscillating_integral_M(p, t, 0.0, 0.0, c2, radii), LabError);
}

TEST_CASE("kernels without damping are rejected") {
  const ModelParams p{1, 0.25, 3.0};
  CHECK_THROWS_AS(kernel_norms({KernelKind::E0, 0.0, Zone::High, p}, 1.0), LabError);
  const auto n = kernel_norms({KernelKind::K0, 0.0, Zone::Low, p}, 1.0);
  CHECK(n.l1 > 0.0);
  CHECK(n.l2 > 0.0);
  CHECK(n.linf > 0.0);
}
