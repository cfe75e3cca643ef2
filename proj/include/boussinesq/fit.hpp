#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace boussinesq {

/// LogLog: log y vs log t. LogLinear: log y vs t. LogOnePlusT: log y vs log(1+t).
enum class FitScale { LogLog, LogLinear, LogOnePlusT };

struct DecayFit {
  double exponent = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double t_min = 0.0;
  double t_max = 0.0;
  std::size_t sample_count = 0;
};

/// Least-squares line through the transformed samples. Throws
/// InvalidArgument for fewer than min_samples samples or non-positive values.
DecayFit fit_line(std::span<const double> times, std::span<const double> values, FitScale scale,
                  std::size_t min_samples = 8);

/// fit_line plus FitUnreliable when r_squared < min_r_squared.
DecayFit fit_decay(std::span<const double> times, std::span<const double> values, FitScale scale,
                   double min_r_squared = 0.98);

/// count points from a to b, geometric.
std::vector<double> log_spaced(double a, double b, std::size_t count);
std::vector<double> linear_spaced(double a, double b, std::size_t count);

/// Integer part used in the rate exponents. Floor: floor(x). Trunc: toward zero.
enum class Bracket { Floor, Trunc };
double bracket(double x, Bracket convention);
std::string_view to_string(Bracket convention);

/// One-sided check of values <= C * w(t)^beta with C fixed by the first sample.
/// Both weights w = t and w = 1 + t are tried; they define the same class of
/// bounds on t >= 1.
struct BoundCheck {
  double constant = 0.0;
  double worst_ratio = 0.0;  // max over samples of value / bound (<= 1 + slack passes)
  bool one_plus_t = false;   // which weight achieved worst_ratio
  bool holds = false;
};

BoundCheck calibrated_bound_check(std::span<const double> times, std::span<const double> values,
                                  double exponent, double slack = 1e-3);

}  // namespace boussinesq
