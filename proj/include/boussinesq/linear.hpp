#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "boussinesq/fit.hpp"
#include "boussinesq/grid.hpp"
#include "boussinesq/symbols.hpp"

namespace boussinesq {

/// Named generator for one component of the Cauchy data.
struct DataDescriptor {
  enum class Kind { Zero, Gaussian, BandLimitedGaussian, SingleMode, RandomBandLimited, Custom };

  Kind kind = Kind::Gaussian;
  double width = 1.0;
  double amplitude = 1.0;
  double xi_max = 3.0;              // band limit (BandLimitedGaussian, RandomBandLimited)
  std::array<int, 3> mode{1, 0, 0}; // signed lattice index (SingleMode)
  std::uint64_t seed = 0;           // RandomBandLimited

  static DataDescriptor zero();
  static DataDescriptor gaussian(double width, double amplitude = 1.0);
  static DataDescriptor band_limited_gaussian(double width, double xi_max, double amplitude = 1.0);
  static DataDescriptor single_mode(std::array<int, 3> mode, double amplitude = 1.0);
  static DataDescriptor random_band_limited(std::uint64_t seed, double width, double xi_max,
                                            double amplitude = 1.0);

  std::string label() const;
};

std::string_view to_string(DataDescriptor::Kind kind);
DataDescriptor::Kind data_kind_from_string(std::string_view s);

/// Samples a descriptor on the grid (physical representation, real values).
/// Throws InvalidArgument for Kind::Custom.
Field make_field(const Grid& grid, const DataDescriptor& descriptor);

struct CauchyData {
  Field v0;
  Field v1;
  DataDescriptor d0;
  DataDescriptor d1;

  static CauchyData make(const Grid& grid, const DataDescriptor& d0, const DataDescriptor& d1);
  /// Wraps caller-supplied fields; descriptors become Custom.
  static CauchyData custom(Field v0, Field v1);

  const Grid& grid() const { return v0.grid(); }
};

struct LinearState {
  Field v;
  Field v_t;
};

/// Exact spectral propagation: v_hat = K0 v0_hat + K1 v1_hat, with v_t from the
/// closed-form time derivatives. Output in the representation of the data.
LinearState evolve_linear(const CauchyData& data, double t, const ModelParams& params);

/// Classical RK4 per lattice mode of v'' + 2 eps |xi|^2 v' + |xi|^2 (1 + |xi|^2) v = 0,
/// with step <= dt. StabilityViolation if 2 eps |xi_max|^2 dt >= 0.5 or
/// omega_max dt >= 2.5.
LinearState ode_oracle(const CauchyData& data, double t, const ModelParams& params, double dt);

/// Per-mode energy |v_t_hat|^2 + |xi|^2 (1 + |xi|^2) |v_hat|^2 for every lattice mode.
std::vector<double> mode_energies(const LinearState& state);

enum class Quantity { V, Vt };
std::string_view to_string(Quantity quantity);

/// 1/r from 1 + 1/q = 1/r + 1/m (q may be infinity).
double inverse_r(double m, double q);

/// Decay exponent bounding ||v||, or ||v_t||, in the homogeneous H^s_q norm,
/// for data carried only by v0 (data_index 0) or only by v1 (data_index 1).
/// The large-time branch is in powers of (1+t); the small-time branch in powers of t.
double linear_rate_exponent(int n, double m, double q, double s, Quantity quantity, int data_index,
                            Bracket convention, bool large_time = true);

struct DecayExperiment {
  std::vector<double> times;
  std::vector<double> norms;
  int data_index = 0;
  double predicted_floor = 0.0;
  double predicted_trunc = 0.0;
  DecayFit fit;
  bool fit_reliable = false;
  BoundCheck bound;  // against the truncation-convention exponent, constant fixed at the first sample
};

/// Measures the norm of v (or v_t) at each time, fits the log-log slope and
/// checks the calibrated bound. Exactly one of v0, v1 must be nonzero. With
/// strict = true an unreliable fit throws FitUnreliable.
DecayExperiment decay_experiment(const CauchyData& data, const ModelParams& params,
                                 const NormKind& norm_kind, double m,
                                 std::span<const double> times, Quantity quantity,
                                 bool strict = true);

struct MiddleZoneSeries {
  std::vector<double> times;
  std::vector<double> norms;
  DecayFit fit;
};

/// ||chi_M v(t)||_{L2} on the lattice, fitted log-linearly.
MiddleZoneSeries middle_zone_solution_decay(const CauchyData& data, const ModelParams& params,
                                            std::span<const double> times);

}  // namespace boussinesq
