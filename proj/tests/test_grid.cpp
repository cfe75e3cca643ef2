#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "boussinesq/error.hpp"
#include "boussinesq/grid.hpp"
#include "boussinesq/radial.hpp"

using namespace boussinesq;

namespace {

Field gaussian(const Grid& g, double a = 0.5) {
  return Field::from_function(g, [a](std::span<const double> x) {
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    return cplx(std::exp(-a * r2), 0.0);
  });
}

double max_abs_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
  return m;
}

}  // namespace

TEST_CASE("grid geometry") {
  Grid g(2, 16, 4.0);
  CHECK(g.size() == 256);
  CHECK(g.spacing() == doctest::Approx(0.5));
  CHECK(g.cell_volume() == doctest::Approx(0.25));
  CHECK(g.signed_index(7) == 7);
  CHECK(g.signed_index(8) == -8);
  CHECK(g.axis_frequency(1) == doctest::Approx(M_PI / 4.0));
  CHECK(g.axis_coordinate(0) == -4.0);
  CHECK(g.scaled(0.5).half_length() == 2.0);
  CHECK_THROWS_AS(Grid(4, 16, 1.0), LabError);
  CHECK_THROWS_AS(Grid(1, 15, 1.0), LabError);
}

TEST_CASE("transform round trip and zero field") {
  Grid g(2, 32, 6.0);
  const Field f = gaussian(g);
  CHECK(max_abs_diff(inverse_transform(transform(f)), f) < 1e-14);
  const Field z(g, Representation::Physical);
  const Field zs = transform(z);
  for (const auto& v : zs.values()) CHECK(v == cplx(0.0, 0.0));
  CHECK_THROWS_AS(transform(transform(f)), LabError);
}

TEST_CASE("Gaussian spectrum has Gaussian magnitude") {
  Grid g(1, 256, 12.0);
  const Field s = transform(gaussian(g));
  const double c = std::abs(s.values()[0]);
  for (int k = 0; k < 256; ++k) {
    const double xi = g.axis_frequency(k);
    CHECK(std::abs(std::abs(s.values()[k]) - c * std::exp(-0.5 * xi * xi)) < 1e-8 * c);
  }
}

TEST_CASE("single lattice mode transforms to a delta") {
  Grid g(1, 64, 5.0);
  const double xi = g.axis_frequency(3);
  const Field f = Field::from_function(g, [xi](std::span<const double> x) {
    return std::exp(cplx(0.0, xi * x[0]));
  });
  const Field s = transform(f);
  for (int k = 0; k < 64; ++k) {
    if (k == 3) {
      CHECK(std::abs(s.values()[k]) == doctest::Approx(8.0));
    } else {
      CHECK(std::abs(s.values()[k]) < 1e-12);
    }
  }
}

TEST_CASE("Lq norms of a Gaussian") {
  Grid g(1, 512, 15.0);
  const Field f = gaussian(g);
  CHECK(norm(f, NormKind::Lq(2.0)) == doctest::Approx(std::pow(M_PI, 0.25)).epsilon(1e-12));
  CHECK(norm(f, NormKind::Lq(1.0)) == doctest::Approx(std::sqrt(2.0 * M_PI)).epsilon(1e-12));
  CHECK(norm(f, NormKind::Linf()) == doctest::Approx(1.0));
  CHECK(spectral_l2(to_spectral(f)) == doctest::Approx(norm(f, NormKind::Lq(2.0))).epsilon(1e-12));
  CHECK(norm(f, NormKind::SobolevDotHsq(0.0, 2.0)) == doctest::Approx(norm(f, NormKind::Lq(2.0))));
  // ||f'||_2^2 = int x^2 e^{-x^2} = sqrt(pi)/2
  CHECK(norm(f, NormKind::SobolevDotHsq(1.0, 2.0)) ==
        doctest::Approx(std::sqrt(std::sqrt(M_PI) / 2.0)).epsilon(1e-10));
  Grid g2(2, 64, 8.0);
  CHECK(norm(gaussian(g2), NormKind::Lq(2.0)) == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-10));
}

TEST_CASE("single cell indicator") {
  Grid g(2, 16, 2.0);
  Field f(g, Representation::Physical);
  f.values()[37] = 1.0;
  const double h = g.spacing();
  CHECK(norm(f, NormKind::Lq(3.0)) == doctest::Approx(std::pow(h * h, 1.0 / 3.0)));
}

TEST_CASE("multipliers at t = 0 and the second derivative") {
  Grid g(1, 256, 15.0);
  const Field f = gaussian(g);
  const ModelParams params{1, 0.25, 3.0};
  const Field id = apply_multiplier({KernelKind::K0, 0.0, Zone::All, params}, 0.0, f);
  CHECK(max_abs_diff(id, f) < 1e-14);
  const Field zero = apply_multiplier({KernelKind::K1, 0.0, Zone::All, params}, 0.0, f);
  CHECK(norm(zero, NormKind::Linf()) < 1e-15);
  const Field lap = apply_symbol([](double r) { return -r * r; }, f);
  const Field exact = Field::from_function(g, [](std::span<const double> x) {
    return cplx((x[0] * x[0] - 1.0) * std::exp(-0.5 * x[0] * x[0]), 0.0);
  });
  CHECK(max_abs_diff(lap, exact) < 1e-12);
}

TEST_CASE("inviscid multiplier on a unit mode") {
  const double L = M_PI;  // xi_1 = 1
  Grid g(1, 32, L);
  const Field f = Field::from_function(g, [](std::span<const double> x) { return cplx(std::cos(x[0]), 0.0); });
  const Field out = apply_multiplier({KernelKind::E0, 0.0, Zone::All, {1, 0.3, 3.0}},
                                     M_PI / std::sqrt(2.0), f);
  CHECK(max_abs_diff(out, -1.0 * f) < 1e-13);
}

TEST_CASE("field serialization round trip") {
  Grid g(2, 16, 3.0);
  Field f = transform(gaussian(g));
  const auto base = (std::filesystem::temp_directory_path() / "bq_field_roundtrip").string();
  write_field(base, f);
  const Field back = read_field(base);
  CHECK(back.grid() == g);
  CHECK(back.representation() == Representation::Spectral);
  CHECK(max_abs_diff(back, f) == 0.0);
  std::filesystem::remove(base + ".bin");
  std::filesystem::remove(base + ".json");
  CHECK_THROWS_AS(read_field(base), LabError);
}

TEST_CASE("radial transform reproduces the Gaussian pair") {
  for (int n : {1, 2, 3}) {
    RadialSymbol sym;
    sym.value = [](double r) { return std::exp(-0.5 * r * r); };
    sym.r_min = 0.0;
    sym.r_max = 9.0;
    std::vector<double> radii;
    for (int i = 0; i <= 60; ++i) radii.push_back(0.1 * i);
    const RadialProfile p = radial_inverse_transform(sym, n, radii);
    for (std::size_t i = 0; i < radii.size(); ++i) {
      CHECK(p.values[i] == doctest::Approx(std::exp(-0.5 * radii[i] * radii[i])).epsilon(1e-8).scale(1.0));
    }
    CHECK(radial_l2_norm(sym, n) == doctest::Approx(std::pow(M_PI, 0.25 * n)).epsilon(1e-10));
  }
}

TEST_CASE("radial weights integrate over the whole space") {
  RadialSymbol sym;
  sym.value = [](double r) { return std::exp(-0.5 * r * r); };
  sym.r_min = 0.0;
  sym.r_max = 9.0;
  for (int n : {1, 2, 3}) {
    const RadialProfile p = radial_kernel_profile(sym, n);
    // ||e^{-|x|^2/2}||_1 = (2 pi)^{n/2}
    CHECK(p.lr_norm(1.0) == doctest::Approx(std::pow(2.0 * M_PI, 0.5 * n)).epsilon(5e-4));
    CHECK(p.linf_norm() == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(unit_sphere_area(n) == doctest::Approx(std::array{2.0, 2.0 * M_PI, 4.0 * M_PI}[n - 1]));
  }
}

TEST_CASE("modified Bessel kernel") {
  CHECK(modified_bessel(1, 0.3) == doctest::Approx(std::sqrt(2.0 / M_PI) * std::cos(0.3)));
  CHECK(modified_bessel(3, 0.3) == doctest::Approx(std::sqrt(2.0 / M_PI) * std::sin(0.3) / 0.3));
  for (double s : {0.0, 0.5, 4.0, 24.0, 26.0, 80.0}) {
    CHECK(modified_bessel(2, s) == doctest::Approx(std::cyl_bessel_j(0.0, s)).epsilon(1e-12).scale(1.0));
  }
}
