#include "doctest.h"

#include <cmath>

#include "boussinesq/error.hpp"
#include "boussinesq/inviscid.hpp"

using namespace boussinesq;

namespace {

double max_diff(const Field& a, const Field& b) {
  const Field pa = to_physical(a);
  const Field pb = to_physical(b);
  double m = 0.0;
  for (std::size_t i = 0; i < pa.size(); ++i) m = std::max(m, std::abs(pa.values()[i] - pb.values()[i]));
  return m;
}

CauchyData band_limited(int N = 1024, double L = 100.0) {
  Grid g(1, N, L);
  return CauchyData::make(g, DataDescriptor::band_limited_gaussian(3.0, 3.0), DataDescriptor::zero());
}

}  // namespace

TEST_CASE("inviscid flow and corrector at t = 0") {
  const auto data = band_limited();
  const LinearState s = evolve_inviscid(data, 0.0);
  CHECK(max_diff(s.v, data.v0) < 1e-15);
  CHECK(norm(corrector(data, 0.0), NormKind::Linf()) == 0.0);
  Grid g(1, 64, 10.0);
  const auto zero = CauchyData::make(g, DataDescriptor::zero(), DataDescriptor::zero());
  CHECK(norm(corrector(zero, 2.0), NormKind::Linf()) == 0.0);
}

TEST_CASE("corrector of a unit mode has a closed form") {
  Grid g(1, 16, M_PI);
  const Field v0 = Field::from_function(g, [](std::span<const double> x) { return cplx(std::cos(x[0]), 0.0); });
  const auto data = CauchyData::custom(v0, Field(g, Representation::Physical));
  const double w = std::sqrt(2.0);
  for (double t : {0.5, 1.0, 3.0}) {
    const double amp = std::sin(w * t) / w - t * std::cos(w * t);
    CHECK(max_diff(corrector(data, t), amp * v0) < 1e-8);
  }
}

TEST_CASE("corrector satisfies its forced equation") {
  const auto data = band_limited();
  const CorrectorDefect d = corrector_defect(data, 5.0);
  CHECK(d.residual < 1e-6);
  CHECK(d.source_sup > 0.0);
}

TEST_CASE("gaps vanish without viscosity and shrink with the corrector") {
  const auto data = band_limited();
  CHECK(first_order_gap(data, 2.0, 0.0) == 0.0);
  CHECK(second_order_gap(data, 2.0, 0.0) == 0.0);
  const double g1 = first_order_gap(data, 2.0, 0.05);
  const double g2 = second_order_gap(data, 2.0, 0.05);
  CHECK(g1 > 0.0);
  CHECK(g2 < g1);
  CHECK(gap_schedule(2.0).size() == 33);
}

TEST_CASE("eps sweeps converge at first and second order") {
  const auto data = band_limited();
  const std::vector<double> eps{0.2, 0.1, 0.05, 0.025};
  const EpsSweep s1 = eps_sweep(data, 5.0, eps, LimitOrder::First);
  CHECK(s1.fitted_rate == doctest::Approx(1.0).epsilon(0.15));
  CHECK(s1.bound_dominates);
  const EpsSweep s2 = eps_sweep(data, 5.0, eps, LimitOrder::Second);
  CHECK(s2.fitted_rate == doctest::Approx(2.0).epsilon(0.1));
  for (std::size_t i = 0; i < eps.size(); ++i) CHECK(s2.gaps[i] < s1.gaps[i]);
  const std::vector<double> unsorted{0.1, 0.2, 0.05};
  CHECK_THROWS_AS(eps_sweep(data, 5.0, unsorted, LimitOrder::First), LabError);
}

TEST_CASE("regularity indices") {
  CHECK(regularity_indices(1, LimitOrder::First) == std::pair{3.5, 1.5});
  CHECK(regularity_indices(2, LimitOrder::Second) == std::pair{6.5, 4.5});
  CHECK(regularity_norm(band_limited(), LimitOrder::Second) > regularity_norm(band_limited(), LimitOrder::First));
}

TEST_CASE("first profile of the expansion is the corrector") {
  const auto data = band_limited();
  const WkbProfileSet w = wkb_profiles(data, 1, 2.0, 0.05);
  REQUIRE(w.inner.size() == 2);
  for (std::size_t i = 0; i < w.times.size(); ++i) {
    CHECK(max_diff(w.inner[1][i], corrector(data, w.times[i])) < 1e-8);
  }
  CHECK(norm(w.boundary_at(1, 1.0), NormKind::Linf()) == 0.0);
  CHECK_THROWS_AS(wkb_profiles(data, 5, 2.0, 0.05), LabError);
}

TEST_CASE("boundary layers match nonzero higher-order data") {
  const auto data = band_limited();
  Grid g = data.grid();
  std::vector<CauchyData> higher;
  higher.push_back(CauchyData::make(g, DataDescriptor::band_limited_gaussian(2.0, 3.0, 0.5),
                                    DataDescriptor::band_limited_gaussian(4.0, 3.0, 0.25)));
  higher.push_back(CauchyData::make(g, DataDescriptor::band_limited_gaussian(3.0, 3.0, 0.5),
                                    DataDescriptor::zero()));
  const WkbProfileSet w = wkb_profiles(data, 3, 1.0, 0.05, higher);
  CHECK(w.matching_defect() < 1e-12);
  CHECK(w.matching.size() >= 3);
}

TEST_CASE("truncated inner expansions improve with order") {
  const auto data = band_limited();
  double prev = INFINITY;
  for (int J = 1; J <= 3; ++J) {
    const double gap = inner_expansion_gap(wkb_profiles(data, J, 2.0, 0.05), data);
    CHECK(gap < prev);
    prev = gap;
  }
}
