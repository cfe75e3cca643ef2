#pragma once

#include <string>
#include <vector>

#include "boussinesq/fit.hpp"
#include "boussinesq/grid.hpp"
#include "boussinesq/linear.hpp"
#include "boussinesq/symbols.hpp"

namespace boussinesq {

/// kappa = (1/2)(1/m - 1/q)[n/2 - 1].
double kappa(int n, double m, double q, Bracket convention = Bracket::Trunc);

struct ExponentCheck {
  int n = 1;
  double m = 1.0;
  double q = 2.0;
  double s = 0.0;
  double p = 2.0;
  double kappa = 0.0;
  bool dimension_ok = false;  // n > 2m(1 + kappa)
  double lower_bound = 0.0;   // 1 + max{(n(1 - m/q) + ms) / (n - 2m(1 + kappa)), s}
  bool admissible = false;
  std::vector<std::string> violations;  // one line per failed condition
};

ExponentCheck exponent_check(int n, double m, double q, double s, double p,
                             Bracket convention = Bracket::Trunc);

enum class Nonlinearity { AbsPow, SignedPow };
std::string_view to_string(Nonlinearity variant);
Nonlinearity nonlinearity_from_string(std::string_view s);

/// Pointwise |u|^p or sign(u)|u|^p of the real part, physical representation.
/// ComplexResidue if max |Im u| >= 1e-10 max(1, max |Re u|).
Field nonlinearity(const Field& u, double p, Nonlinearity variant);

/// Zeroes every mode with some axis index beyond a third of N (2/3 rule).
/// Keeps the input representation.
Field dealias(const Field& f);

/// Physical samples on the uniform mesh t_k = k dt, k = 0..K.
struct History {
  double dt = 1.0 / 256.0;
  std::vector<Field> samples;

  double end_time() const { return dt * static_cast<double>(samples.size() - 1); }
  std::vector<double> times() const;
  /// Cubic Lagrange interpolation between mesh samples. HistoryGap outside
  /// [0, end_time()] or with fewer than 4 samples.
  Field at(double t) const;
};

/// Uniform mesh on [0, T] with at least nodes_per_unit steps per unit time.
std::vector<double> history_mesh(double T, int nodes_per_unit);

struct DuhamelControl {
  std::size_t panels = 32;  // Gauss–Legendre panels of 16 nodes on [0, t]
  double rel_tol = 1e-9;
  int max_doublings = 4;
};

/// Phi[u](t) = K0(t) u0 + K1(t) u1 + int_0^t K1(t - tau) Laplacian f(u(tau)) dtau,
/// the integral by direct panel quadrature over interpolated history samples.
Field duhamel_step(const History& u_prev, const CauchyData& data, double t, const ModelParams& params,
                   Nonlinearity variant, const DuhamelControl& control = {});

/// The integral term alone on the whole mesh of u_prev, by the exact per-mode
/// step recursion with cubic interpolation of the dealiased source.
History duhamel_integral(const History& u_prev, const ModelParams& params, Nonlinearity variant);

/// Linear flow sampled on a mesh of [0, T].
History linear_history(const CauchyData& data, const ModelParams& params, double T,
                       int nodes_per_unit = 256);

struct SolutionNormXT {
  double T = 0.0;
  double lq_weight_exponent = 0.0;  // weight (1 + tau)^this on ||u||_{Lq}
  double hs_weight_exponent = 0.0;  // weight (1 + tau)^this on ||u||_{H^s_q}
  double lq_part = 0.0;
  double hs_part = 0.0;
  double value = 0.0;
};

/// Discrete sup over the mesh samples with tau <= T of the weighted sum.
SolutionNormXT xt_norm(const History& u, const ModelParams& params, double m, double q, double s,
                       double T, Bracket convention = Bracket::Trunc);

/// ||u0||_{Lm} + ||u0||_{H^s_q} + ||u1||_{Lm} + ||u1||_{H^{max(s-2,0)}_q}.
double data_norm(const CauchyData& data, double m, double q, double s);

struct PicardOptions {
  double m = 1.0;
  double q = 2.0;
  double s = 1.0;
  double tol = 1e-10;
  int max_iter = 50;
  int nodes_per_unit = 256;
  Nonlinearity variant = Nonlinearity::AbsPow;
  bool allow_inadmissible = false;
};

struct PicardTrace {
  std::vector<double> distances;  // ||u^(k+1) - u^(k)||_{X(T)}
  bool converged = false;
  int iterations_used = 0;
};

struct PicardResult {
  History u;
  History linear;
  PicardTrace trace;
  ExponentCheck check;
  double first_correction = 0.0;      // X(T) norm of the Duhamel term of the linear flow
  double fixed_point_residual = 0.0;  // ||u - Phi[u]||_{X(T)}
  double data_norm = 0.0;
  double xt_value = 0.0;
  double linear_xt_value = 0.0;
};

/// Picard iteration from the linear flow. ConfigInvalid for an inadmissible
/// exponent unless allow_inadmissible; NotContracting when the distance
/// fails to decrease three times in a row.
PicardResult picard_solve(const CauchyData& data, const ModelParams& params, double T,
                          const PicardOptions& options = {});

struct NonlinearDecay {
  DecayFit lq_fit;
  DecayFit hs_fit;
  double predicted_lq = 0.0;  // 1 - (n/2)(1/m - 1/q) + kappa
  double predicted_hs = 0.0;  // predicted_lq - s/2
  std::vector<double> times;
  std::vector<double> lq_norms;
  std::vector<double> hs_norms;
};

/// Fits log-norm against log(1 + t) on 16 mesh samples in [5, T]; needs T >= 20.
NonlinearDecay decay_verify(const History& u, const ModelParams& params, double m, double q, double s,
                            Bracket convention = Bracket::Trunc);

enum class IntegralBranch { MaxAboveOne, MaxEqualsOne, MaxBelowOne };
std::string_view to_string(IntegralBranch branch);

struct IntegralBoundCheck {
  double alpha = 0.0;
  double beta = 0.0;
  IntegralBranch branch = IntegralBranch::MaxAboveOne;
  double predicted_exponent = 0.0;  // of (1 + t), log factor excluded
  std::vector<double> times;
  std::vector<double> values;
  DecayFit fit;  // of values (divided by log(e + t) on the middle branch)
  double end_slope = 0.0;  // local d log / d log t of the same quantity at the last time
  double ratio_min = 0.0;  // values / predicted profile over the window
  double ratio_max = 0.0;
};

/// int_0^t (1 + t - tau)^{-alpha} (1 + tau)^{-beta} dtau by adaptive quadrature.
double lemma_integral(double alpha, double beta, double t);
IntegralBoundCheck integral_bound_check(double alpha, double beta, const std::vector<double>& times);

}  // namespace boussinesq
