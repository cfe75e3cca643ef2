#include "doctest.h"

#include <cmath>
#include <complex>

#include "boussinesq/error.hpp"
#include "boussinesq/symbols.hpp"

using namespace boussinesq;

namespace {

// Closed-form solutions of v'' + 2 eps r^2 v' + r^2 (1 + r^2) v = 0 through the
// complex roots of the characteristic quadratic, computed independently.
struct RootOracle {
  std::complex<double> lp, lm;

  RootOracle(double r, double eps) {
    const double b = 2.0 * eps * r * r;
    const double c = r * r * (1.0 + r * r);
    const std::complex<double> disc = std::sqrt(std::complex<double>(b * b - 4.0 * c, 0.0));
    lp = 0.5 * (-b + disc);
    lm = 0.5 * (-b - disc);
  }
  double k0(double t) const {
    return ((lp * std::exp(lm * t) - lm * std::exp(lp * t)) / (lp - lm)).real();
  }
  double k1(double t) const { return ((std::exp(lp * t) - std::exp(lm * t)) / (lp - lm)).real(); }
};

// Classical RK4 for the same mode ODE.
std::pair<double, double> rk4_mode(double r, double eps, double v, double w, double t, int steps) {
  const double h = t / steps;
  auto f = [&](double a, double b) {
    return std::pair{b, -2.0 * eps * r * r * b - r * r * (1.0 + r * r) * a};
  };
  for (int i = 0; i < steps; ++i) {
    auto [a1, b1] = f(v, w);
    auto [a2, b2] = f(v + 0.5 * h * a1, w + 0.5 * h * b1);
    auto [a3, b3] = f(v + 0.5 * h * a2, w + 0.5 * h * b2);
    auto [a4, b4] = f(v + h * a3, w + h * b3);
    v += h / 6.0 * (a1 + 2 * a2 + 2 * a3 + a4);
    w += h / 6.0 * (b1 + 2 * b2 + 2 * b3 + b4);
  }
  return {v, w};
}

}  // namespace

TEST_CASE("characteristic roots solve the quadratic") {
  auto z = characteristic_roots(0.0, {1, 0.3, 3.0});
  CHECK(z.real_part == 0.0);
  CHECK(z.imag_part == 0.0);

  auto a = characteristic_roots(1.0, {1, 0.5, 3.0});
  CHECK(a.real_part == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(a.imag_part == doctest::Approx(std::sqrt(1.75)).epsilon(1e-14));

  auto b = characteristic_roots(2.0, {1, 0.0, 3.0});
  CHECK(std::abs(b.real_part) < 1e-15);
  CHECK(b.imag_part == doctest::Approx(2.0 * std::sqrt(5.0)).epsilon(1e-14));

  for (double r : {0.1, 0.7, 3.0, 20.0}) {
    for (double eps : {0.0, 0.1, 0.5, 0.9}) {
      const auto roots = characteristic_roots(r, {1, eps, 3.0});
      const auto l = roots.plus();
      const auto res = l * l + 2.0 * eps * r * r * l + r * r * (1.0 + r * r);
      CHECK(std::abs(res) <= 1e-12 * r * r * (1.0 + r * r));
    }
  }
}

TEST_CASE("kernel values agree with the complex-root formulas") {
  for (double eps : {0.1, 0.25, 0.5}) {
    for (double r : {1e-3, 0.2, 1.0, 2.5, 6.0}) {
      const RootOracle o(r, eps);
      for (double t : {0.0, 0.3, 1.0, 4.0, 10.0}) {
        CHECK(kernel_value(KernelKind::K0, t, r, eps) == doctest::Approx(o.k0(t)).epsilon(1e-9).scale(1.0));
        CHECK(kernel_value(KernelKind::K1, t, r, eps) == doctest::Approx(o.k1(t)).epsilon(1e-9).scale(1.0));
      }
    }
  }
}

TEST_CASE("initial values of the kernels") {
  for (double r : {0.0, 0.5, 3.0}) {
    MultiplierSpec k0{KernelKind::K0, 0.0, Zone::All, {1, 0.25, 3.0}};
    MultiplierSpec k1{KernelKind::K1, 0.0, Zone::All, {1, 0.25, 3.0}};
    CHECK(eval_symbol(k0, 0.0, r) == 1.0);
    CHECK(eval_symbol(k1, 0.0, r) == 0.0);
  }
  MultiplierSpec e1{KernelKind::E1, 0.0, Zone::All, {1, 0.25, 3.0}};
  CHECK(eval_symbol(e1, 1.0, 1e-9) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(eval_symbol(e1, 1.0, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("K1 matches a time-stepped mode") {
  const auto [v, w] = rk4_mode(1.0, 0.25, 0.0, 1.0, 1.0, 4000);
  CHECK(kernel_value(KernelKind::K1, 1.0, 1.0, 0.25) == doctest::Approx(v).epsilon(1e-8));
  CHECK(kernel_value(KernelKind::DtK1, 1.0, 1.0, 0.25) == doctest::Approx(w).epsilon(1e-8));
  const auto [v0, w0] = rk4_mode(2.0, 0.1, 1.0, 0.0, 3.0, 20000);
  CHECK(kernel_value(KernelKind::K0, 3.0, 2.0, 0.1) == doctest::Approx(v0).epsilon(1e-8));
  CHECK(kernel_value(KernelKind::DtK0, 3.0, 2.0, 0.1) == doctest::Approx(w0).epsilon(1e-8));
}

TEST_CASE("time-derivative identities hold to finite-difference accuracy") {
  const double h = 1e-3;
  for (double eps : {0.1, 0.25, 0.5}) {
    for (double r : {0.05, 0.4, 1.0, 2.0}) {
      for (double t : {0.5, 2.0, 7.0}) {
        auto k0 = [&](double s) { return kernel_value(KernelKind::K0, s, r, eps); };
        auto k1 = [&](double s) { return kernel_value(KernelKind::K1, s, r, eps); };
        const double d0 = (-k0(t + 2 * h) + 8 * k0(t + h) - 8 * k0(t - h) + k0(t - 2 * h)) / (12 * h);
        const double d1 = (-k1(t + 2 * h) + 8 * k1(t + h) - 8 * k1(t - h) + k1(t - 2 * h)) / (12 * h);
        const double scale0 = (r * r + r * r * r * r) * std::abs(k1(t)) + 1e-3;
        CHECK(std::abs(d0 + (r * r + std::pow(r, 4)) * k1(t)) <= 1e-6 * scale0 + 1e-7);
        CHECK(std::abs(d1 - (k0(t) - 2 * eps * r * r * k1(t))) <= 1e-6);
      }
    }
  }
}

TEST_CASE("inviscid kernels ignore the viscosity") {
  MultiplierSpec e0{KernelKind::E0, 0.0, Zone::All, {1, 0.4, 3.0}};
  const double t = M_PI / std::sqrt(2.0);
  CHECK(eval_symbol(e0, t, 1.0) == doctest::Approx(-1.0).epsilon(1e-13));
  CHECK(e0.effective_eps() == 0.0);
}

TEST_CASE("sinc and smooth step") {
  CHECK(sinc(0.0) == 1.0);
  CHECK(sinc(1e-6) == doctest::Approx(1.0 - 1e-12 / 6.0).epsilon(1e-15));
  CHECK(sinc(2.0) == doctest::Approx(std::sin(2.0) / 2.0).epsilon(1e-15));
  CHECK(smooth_step(-1.0) == 0.0);
  CHECK(smooth_step(1.5) == 1.0);
  double prev = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double v = smooth_step(i / 100.0);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("zone cutoffs form a partition of unity") {
  for (double eps : {0.1, 0.25, 0.5}) {
    const ModelParams params{1, eps, 3.0};
    const auto cut = ZoneCutoffs::for_eps(eps);
    CHECK(cut.low_outer <= cut.high_inner);
    for (int i = 0; i <= 2000; ++i) {
      const double r = 12.0 * i / 2000.0;
      const double lo = cutoff(Zone::Low, r, params);
      const double mid = cutoff(Zone::Mid, r, params);
      const double hi = cutoff(Zone::High, r, params);
      CHECK(lo >= 0.0);
      CHECK(hi >= 0.0);
      CHECK(mid >= 0.0);
      CHECK(lo + mid + hi == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(lo * hi == 0.0);
    }
  }
  CHECK(cutoff(Zone::Low, 0.0, {1, 0.5, 3.0}) == 1.0);
  CHECK(cutoff(Zone::High, 10.0, {1, 0.5, 3.0}) == 1.0);
  CHECK(cutoff(Zone::All, 5.0, {1, 0.5, 3.0}) == 1.0);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(ModelParams({4, 0.2, 3.0}).validate(), LabError);
  CHECK_THROWS_AS(ModelParams({1, 1.0, 3.0}).validate(), LabError);
  CHECK_THROWS_AS(ModelParams({1, 0.2, 1.0}).validate(), LabError);
  CHECK_NOTHROW(ModelParams({2, 0.0, 2.0}).validate());
  CHECK(kernel_kind_from_string(to_string(KernelKind::DtK1)) == KernelKind::DtK1);
  CHECK(zone_from_string(to_string(Zone::Mid)) == Zone::Mid);
  CHECK_THROWS_AS(zone_from_string("Outer"), LabError);
}
