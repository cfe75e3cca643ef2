#pragma once

#include <span>
#include <string>
#include <vector>

#include "boussinesq/fit.hpp"
#include "boussinesq/grid.hpp"
#include "boussinesq/linear.hpp"

namespace boussinesq {

/// v0 = E0(t) * v0_0 + E1(t) * v1_0 with v_t from the exact derivative symbols.
LinearState evolve_inviscid(const CauchyData& data, double t);

struct QuadratureControl {
  std::size_t panels = 8;      // Gauss–Legendre panels of 16 nodes on [0, t]
  double rel_tol = 1e-8;       // doubling must change the result by less than this
  int max_doublings = 12;
};

/// The second-order profile 2 int_0^t E1(t - tau) * Laplacian v_t^0(tau) dtau, per
/// mode by composite Gauss–Legendre with panel doubling. QuadratureNotConverged
/// if the doubling budget runs out.
Field corrector(const CauchyData& data, double t, const QuadratureControl& control = {});

/// Residual of corrector_tt - Laplacian corrector + Laplacian^2 corrector - 2 Laplacian v_t^0,
/// with the second time derivative evaluated by an independent quadrature
/// (differentiating int_0^t E0(s) F(t - s) ds). Max-norm over the grid.
struct CorrectorDefect {
  double residual = 0.0;    // max |residual| in physical space
  double source_sup = 0.0;  // max |2 Laplacian v_t^0| for scale
};
CorrectorDefect corrector_defect(const CauchyData& data, double t,
                                 const QuadratureControl& control = {1, 1e-12, 16});

/// 32 uniform intervals on [0, T]: 33 samples including 0 and T.
std::vector<double> gap_schedule(double T, std::size_t intervals = 32);

/// sup over the schedule and the grid of |v^eps - v^0| (identical data for both flows).
double first_order_gap(const CauchyData& data, double T, double eps);
/// sup of |v^eps - v^0 - eps * corrector|.
double second_order_gap(const CauchyData& data, double T, double eps,
                        const QuadratureControl& control = {});

enum class LimitOrder { First, Second };
std::string_view to_string(LimitOrder order);

/// Regularity indices used for the data norm: (n + 2, n) or (n + 4, n + 2),
/// each raised by 1/2 to sit strictly above the threshold.
std::pair<double, double> regularity_indices(int n, LimitOrder order);

/// ||<D>^{s0} v0||_{L1} + ||<D>^{s1} v1||_{L1}.
double regularity_norm(const CauchyData& data, LimitOrder order);

struct EpsSweep {
  LimitOrder order = LimitOrder::First;
  double T = 5.0;
  std::vector<double> eps_values;
  std::vector<double> gaps;
  std::vector<double> corrector_sup;  // eps * sup |corrector| (second order only)
  double fitted_rate = 0.0;
  double fit_r_squared = 0.0;
  double data_norm = 0.0;
  double calibrated_C_T = 0.0;   // gap / (eps^order data_norm) at the coarsest eps
  double ratio_growth = 0.0;     // largest gap / (C_T eps^order data_norm) over the sweep
  bool bound_dominates = false;  // ratio_growth <= kBoundSlack
  std::string data_descriptor;
};

/// Allowed growth of the calibrated ratio across a sweep.
inline constexpr double kBoundSlack = 2.0;

/// eps_values must be strictly decreasing, in (0, 0.5], with at least 3 entries.
EpsSweep eps_sweep(const CauchyData& data, double T, std::span<const double> eps_values,
                   LimitOrder order, const QuadratureControl& control = {});

/// Profiles of the multi-scale expansion through order J (<= 4). Inner
/// profiles are sampled on `times`; boundary-layer profiles are polynomials in
/// t with coefficients on the slow grid z = sqrt(eps) x.
struct WkbProfileSet {
  int order = 1;
  double eps = 0.0;
  std::vector<double> times;
  std::vector<std::vector<Field>> inner;     // inner[j][i] = v^{I,j}(times[i])
  std::vector<std::vector<Field>> boundary;  // boundary[j][p]: coefficient of t^p
  std::vector<std::string> matching;         // which data each profile carries

  /// v^{L,j}(t, z) on the slow grid.
  Field boundary_at(int j, double t) const;
  /// max over j >= 1 of |v^{I,j}(0, x) + v^{L,j}(0, z)| at matched samples.
  double matching_defect() const;
};

/// higher_data[j - 1] holds (v_0^{I,j}, v_1^{I,j}) for j = 1..J; missing
/// entries default to zero. OrderTooHigh if J > 4.
WkbProfileSet wkb_profiles(const CauchyData& data, int J, double T, double eps,
                           std::span<const CauchyData> higher_data = {},
                           std::size_t intervals = 8);

/// sup over the profile times of |v^eps - sum_{j <= J} eps^j v^{I,j}| (zero
/// higher data, so every boundary-layer profile vanishes).
double inner_expansion_gap(const WkbProfileSet& profiles, const CauchyData& data);

}  // namespace boussinesq
