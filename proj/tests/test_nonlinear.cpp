#include "doctest.h"

#include <cmath>

#include "boussinesq/error.hpp"
#include "boussinesq/nonlinear.hpp"

using namespace boussinesq;

namespace {

double max_diff(const Field& a, const Field& b) {
  const Field pa = to_physical(a);
  const Field pb = to_physical(b);
  double m = 0.0;
  for (std::size_t i = 0; i < pa.size(); ++i) m = std::max(m, std::abs(pa.values()[i] - pb.values()[i]));
  return m;
}

CauchyData small_gaussian(double amplitude, int N = 256, double L = 30.0) {
  Grid g(1, N, L);
  return CauchyData::make(g, DataDescriptor::gaussian(1.0, amplitude), DataDescriptor::zero());
}

}  // namespace

TEST_CASE("kappa and the dimension condition") {
  CHECK(kappa(3, 1.0, 2.0) == 0.0);
  CHECK_FALSE(std::signbit(kappa(1, 1.0, 2.0)));
  CHECK(kappa(1, 1.0, 2.0, Bracket::Floor) == doctest::Approx(-0.25));
  CHECK(kappa(6, 1.0, 2.0) == doctest::Approx(0.5));
  const ExponentCheck c = exponent_check(3, 1.0, 2.0, 2.0, 10.0);
  CHECK(c.kappa == 0.0);
  CHECK(c.dimension_ok);
}

TEST_CASE("exponent gate near q = 1") {
  const ExponentCheck lo = exponent_check(3, 1.0, 1.01, 3.0, 4.0);
  CHECK(lo.lower_bound == doctest::Approx(1.0 + 3.0 * (1.0 - 1.0 / 1.01) + 3.0).epsilon(1e-14));
  CHECK(std::round(lo.lower_bound * 100.0) / 100.0 == doctest::Approx(4.03));
  CHECK_FALSE(lo.admissible);
  CHECK_FALSE(lo.violations.empty());
  CHECK(exponent_check(3, 1.0, 1.01, 3.0, 4.1).admissible);
}

TEST_CASE("exponent gate for large q") {
  for (double e : {0.1, 0.05}) {
    const double q = 4.0 / e;
    CHECK(exponent_check(3, 1.0, q, e, q).admissible);
    CHECK_FALSE(exponent_check(3, 1.0, q, e, q - 1e-9).admissible);
  }
  CHECK_FALSE(exponent_check(3, 1.0, 2.0, 0.4, 5.0).admissible);  // s must exceed n/q
  CHECK_FALSE(exponent_check(1, 1.0, 2.0, 1.0, 6.0).dimension_ok);
}

TEST_CASE("power nonlinearities") {
  Grid g(1, 16, 1.0);
  Field u(g, Representation::Physical);
  u.values()[3] = -3.0;
  u.values()[4] = 2.0;
  const Field a = nonlinearity(u, 2.0, Nonlinearity::AbsPow);
  const Field s = nonlinearity(u, 2.0, Nonlinearity::SignedPow);
  CHECK(a.values()[3].real() == doctest::Approx(9.0));
  CHECK(s.values()[3].real() == doctest::Approx(-9.0));
  CHECK(a.values()[4].real() == doctest::Approx(4.0));
  CHECK(a.values()[0] == cplx(0.0, 0.0));
  u.values()[5] = cplx(1.0, 1e-6);
  CHECK_THROWS_AS(nonlinearity(u, 2.0, Nonlinearity::AbsPow), LabError);
  CHECK(nonlinearity_from_string(to_string(Nonlinearity::SignedPow)) == Nonlinearity::SignedPow);
}

TEST_CASE("dealiasing keeps low modes and removes high ones") {
  Grid g(1, 48, M_PI);
  const Field low = Field::from_function(g, [](std::span<const double> x) { return cplx(std::cos(5 * x[0]), 0.0); });
  const Field high = Field::from_function(g, [](std::span<const double> x) { return cplx(std::cos(20 * x[0]), 0.0); });
  CHECK(max_diff(dealias(low), low) < 1e-13);
  CHECK(norm(dealias(high), NormKind::Linf()) < 1e-13);
  CHECK(dealias(to_spectral(low)).representation() == Representation::Spectral);
  const Field sq = nonlinearity(low, 2.0, Nonlinearity::AbsPow);
  CHECK(max_diff(dealias(dealias(sq)), dealias(sq)) < 1e-15);
}

TEST_CASE("history interpolation") {
  Grid g(1, 16, 1.0);
  History h;
  h.dt = 0.1;
  for (int k = 0; k <= 10; ++k) {
    const double t = 0.1 * k;
    Field f(g, Representation::Physical);
    for (auto& v : f.values()) v = t * t * t - 2.0 * t + 1.0;
    h.samples.push_back(f);
  }
  CHECK(h.end_time() == doctest::Approx(1.0));
  for (double t : {0.0, 0.03, 0.47, 0.99, 1.0}) {
    CHECK(h.at(t).values()[2].real() == doctest::Approx(t * t * t - 2.0 * t + 1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(h.at(1.2), LabError);
  const auto mesh = history_mesh(2.0, 100);
  CHECK(mesh.front() == 0.0);
  CHECK(mesh.back() == doctest::Approx(2.0));
  CHECK(mesh[1] - mesh[0] <= 0.01 + 1e-15);
}

TEST_CASE("Duhamel map on trivial inputs") {
  const auto zero = small_gaussian(0.0);
  const ModelParams params{1, 0.5, 3.0};
  const History h0 = linear_history(zero, params, 1.0, 64);
  CHECK(norm(duhamel_step(h0, zero, 0.7, params, Nonlinearity::AbsPow), NormKind::Linf()) == 0.0);
  const auto data = small_gaussian(0.1);
  const History h = linear_history(data, params, 1.0, 64);
  CHECK(max_diff(duhamel_step(h, data, 0.0, params, Nonlinearity::AbsPow), data.v0) < 1e-15);
}

TEST_CASE("step recursion agrees with direct quadrature") {
  const auto data = small_gaussian(0.3);
  const ModelParams params{1, 0.5, 3.0};
  const History lin = linear_history(data, params, 2.0, 128);
  const History integral = duhamel_integral(lin, params, Nonlinearity::AbsPow);
  for (double t : {0.5, 1.25, 2.0}) {
    const Field direct = duhamel_step(lin, data, t, params, Nonlinearity::AbsPow, {64, 1e-11, 4});
    const Field linear_part = lin.at(t);
    CHECK(max_diff(direct - linear_part, integral.at(t)) < 1e-7);
  }
}

TEST_CASE("X(T) norm") {
  const auto zero = small_gaussian(0.0);
  const ModelParams params{1, 0.5, 6.0};
  CHECK(xt_norm(linear_history(zero, params, 2.0, 16), params, 1.0, 2.0, 1.0, 2.0).value == 0.0);

  Grid g(1, 256, 30.0);
  const Field f = make_field(g, DataDescriptor::gaussian(1.0));
  History h;
  h.dt = 0.25;
  for (int k = 0; k <= 8; ++k) h.samples.push_back(f);
  const auto x = xt_norm(h, params, 1.0, 2.0, 0.0, 2.0);
  CHECK(x.value >= norm(f, NormKind::Lq(2.0)) * (1.0 - 1e-14));
  CHECK(x.lq_weight_exponent == doctest::Approx(-1.0 + 0.25 - 0.0));
}

TEST_CASE("X(T) norm of the linear flow stays bounded in T") {
  const auto data = small_gaussian(1.0, 1024, 100.0);
  const ModelParams params{1, 0.5, 6.0};
  const History lin = linear_history(data, params, 20.0, 32);
  const double v5 = xt_norm(lin, params, 1.0, 2.0, 1.0, 5.0).value;
  const double v20 = xt_norm(lin, params, 1.0, 2.0, 1.0, 20.0).value;
  CHECK(v20 >= v5);
  CHECK(v20 <= 1.2 * v5);
}

TEST_CASE("Picard iteration") {
  const ModelParams params{1, 0.5, 3.0};
  PicardOptions opt;
  opt.nodes_per_unit = 64;
  opt.allow_inadmissible = true;

  const PicardResult z = picard_solve(small_gaussian(0.0), params, 2.0, opt);
  CHECK(z.trace.converged);
  CHECK(z.trace.iterations_used == 1);
  CHECK(z.xt_value == 0.0);

  const PicardResult a = picard_solve(small_gaussian(0.4), params, 2.0, opt);
  CHECK(a.trace.converged);
  REQUIRE(a.trace.distances.size() >= 3);
  for (std::size_t k = 1; k < a.trace.distances.size(); ++k) {
    CHECK(a.trace.distances[k] < a.trace.distances[k - 1]);
  }
  CHECK(a.fixed_point_residual < 1e-9);
  CHECK(a.data_norm > 0.0);

  const PicardResult b = picard_solve(small_gaussian(0.2), params, 2.0, opt);
  CHECK(b.first_correction / a.first_correction == doctest::Approx(0.125).epsilon(0.1));

  opt.allow_inadmissible = false;
  CHECK_THROWS_AS(picard_solve(small_gaussian(0.4), params, 2.0, opt), LabError);
  opt.allow_inadmissible = true;
  opt.q = INFINITY;
  CHECK_THROWS_AS(picard_solve(small_gaussian(0.4), params, 2.0, opt), LabError);
}

TEST_CASE("large data stops with NotContracting") {
  const ModelParams params{1, 0.5, 3.0};
  PicardOptions opt;
  opt.nodes_per_unit = 32;
  opt.allow_inadmissible = true;
  opt.max_iter = 30;
  try {
    picard_solve(small_gaussian(6.0), params, 4.0, opt);
    FAIL("expected an error");
  } catch (const LabError& e) {
    CHECK(e.kind() == ErrorKind::NotContracting);
  }
}

TEST_CASE("the lemma integral in closed form") {
  for (double t : {0.5, 3.0, 40.0}) {
    CHECK(lemma_integral(0.0, 0.0, t) == doctest::Approx(t).epsilon(1e-12));
    CHECK(lemma_integral(1.0, 1.0, t) == doctest::Approx(2.0 * std::log1p(t) / (2.0 + t)).epsilon(1e-12));
    CHECK(lemma_integral(2.0, 0.0, t) == doctest::Approx(1.0 - 1.0 / (1.0 + t)).epsilon(1e-12));
  }
}

TEST_CASE("lemma branches") {
  const auto times = log_spaced(10.0, 1000.0, 16);
  const auto a = integral_bound_check(2.0, 2.0, times);
  CHECK(a.branch == IntegralBranch::MaxAboveOne);
  CHECK(a.fit.exponent == doctest::Approx(-2.0).epsilon(0.025));
  const auto b = integral_bound_check(1.0, 1.0, times);
  CHECK(b.branch == IntegralBranch::MaxEqualsOne);
  CHECK(b.ratio_max <= 2.0 * b.ratio_min);
  const auto c = integral_bound_check(0.5, 0.3, times);
  CHECK(c.branch == IntegralBranch::MaxBelowOne);
  CHECK(c.predicted_exponent == doctest::Approx(0.2));
  // the slope approaches the predicted value from above as t grows
  CHECK(c.end_slope < c.fit.exponent);
  CHECK(c.end_slope > c.predicted_exponent);
  CHECK_THROWS_AS(integral_bound_check(0.5, 0.3, log_spaced(10.0, 100.0, 16)), LabError);
}
