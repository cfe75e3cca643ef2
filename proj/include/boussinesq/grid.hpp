#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "boussinesq/symbols.hpp"

namespace boussinesq {

using cplx = std::complex<double>;

/// Periodic box [-L, L)^n with N points per axis, spacing h = 2L/N, and the
/// dual lattice xi_k = pi k / L for k in [-N/2, N/2).
class Grid {
 public:
  Grid(int n, int points_per_axis, double half_length);

  int dim() const { return n_; }
  int points_per_axis() const { return N_; }
  double half_length() const { return L_; }
  double spacing() const { return 2.0 * L_ / N_; }
  double cell_volume() const;
  std::size_t size() const { return size_; }

  /// Signed lattice index along one axis for storage index k (FFT order).
  int signed_index(int k) const { return k < N_ / 2 ? k : k - N_; }
  double axis_frequency(int k) const;
  double axis_coordinate(int i) const { return -L_ + spacing() * i; }

  /// Per-axis storage indices of a flat index (row-major, last axis fastest).
  void unravel(std::size_t flat, int out[3]) const;

  /// |xi| for every storage index, and |x| for every sample.
  const std::vector<double>& frequency_norms() const { return xi_norm_; }
  std::vector<double> coordinate_norms() const;
  /// Largest lattice |xi| (the corner of the Nyquist cube).
  double max_frequency() const;

  /// The same lattice rescaled by a factor (used for slow variables z = sqrt(eps) x).
  Grid scaled(double factor) const { return Grid(n_, N_, L_ * factor); }

  bool operator==(const Grid& other) const {
    return n_ == other.n_ && N_ == other.N_ && L_ == other.L_;
  }

 private:
  int n_;
  int N_;
  double L_;
  std::size_t size_;
  std::vector<double> xi_norm_;
};

enum class Representation { Physical, Spectral };

/// Samples of a function on a Grid, either in physical or spectral form.
class Field {
 public:
  Field(Grid grid, Representation rep);
  Field(Grid grid, Representation rep, std::vector<cplx> values);

  static Field from_function(const Grid& grid,
                             const std::function<cplx(std::span<const double>)>& f);

  const Grid& grid() const { return grid_; }
  Representation representation() const { return rep_; }
  const std::vector<cplx>& values() const { return values_; }
  std::vector<cplx>& values() { return values_; }
  std::size_t size() const { return values_.size(); }

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double scale);

 private:
  void check_compatible(const Field& other) const;

  Grid grid_;
  Representation rep_;
  std::vector<cplx> values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double s, Field a);

/// Unitary DFT f_hat_k = N^{-n/2} sum_j f_j exp(-i xi_k . x_j).
Field transform(const Field& f);
Field inverse_transform(const Field& f);
Field to_spectral(const Field& f);
Field to_physical(const Field& f);

/// Pointwise spectral multiplication by symbol(|xi|); result keeps the input
/// representation.
Field apply_symbol(const std::function<double(double)>& symbol, const Field& f);
Field apply_multiplier(const MultiplierSpec& spec, double t, const Field& f);

/// Largest |Im| over samples (physical representation).
double imaginary_residue(const Field& f);

struct NormKind {
  enum class Type { Lq, Linf, SobolevDotHsq };
  Type type = Type::Lq;
  double q = 2.0;
  double s = 0.0;

  static NormKind Lq(double q);
  static NormKind Linf();
  static NormKind SobolevDotHsq(double s, double q);
};

/// Riemann-sum Lq (q = inf allowed), grid max, and ||(|D|^s f)||_Lq.
double norm(const Field& f, const NormKind& kind);

/// ||<D>^s f||_Lq, the inhomogeneous Bessel-potential norm.
double bessel_potential_norm(const Field& f, double s, double q);

/// sqrt(h^n sum |f_hat|^2) with the unitary normalization.
double spectral_l2(const Field& f);

/// Binary (little-endian float64 re/im pairs, row-major) at base + ".bin",
/// JSON header {n, N, L, representation} at base + ".json".
void write_field(const std::string& base_path, const Field& f);
Field read_field(const std::string& base_path);

}  // namespace boussinesq
