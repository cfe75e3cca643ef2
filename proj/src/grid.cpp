#include "boussinesq/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <mutex>
#include <tuple>

#include <json.hpp>

#include "boussinesq/error.hpp"

namespace boussinesq {

Grid::Grid(int n, int points_per_axis, double half_length)
    : n_(n), N_(points_per_axis), L_(half_length) {
  if (n < 1 || n > 3) throw LabError(ErrorKind::InvalidArgument, "grid dimension must be 1..3");
  if (N_ < 16 || N_ % 2 != 0) {
    throw LabError(ErrorKind::InvalidArgument, "points per axis must be even and >= 16");
  }
  if (!(L_ > 0.0)) throw LabError(ErrorKind::InvalidArgument, "half length must be positive");
  size_ = 1;
  for (int d = 0; d < n_; ++d) size_ *= static_cast<std::size_t>(N_);

  xi_norm_.resize(size_);
  int idx[3] = {0, 0, 0};
  for (std::size_t flat = 0; flat < size_; ++flat) {
    unravel(flat, idx);
    double acc = 0.0;
    for (int d = 0; d < n_; ++d) {
      const double xi = axis_frequency(idx[d]);
      acc += xi * xi;
    }
    xi_norm_[flat] = std::sqrt(acc);
  }
}

double Grid::cell_volume() const { return std::pow(spacing(), n_); }

double Grid::axis_frequency(int k) const { return M_PI * signed_index(k) / L_; }

void Grid::unravel(std::size_t flat, int out[3]) const {
  for (int d = n_ - 1; d >= 0; --d) {
    out[d] = static_cast<int>(flat % static_cast<std::size_t>(N_));
    flat /= static_cast<std::size_t>(N_);
  }
}

std::vector<double> Grid::coordinate_norms() const {
  std::vector<double> r(size_);
  int idx[3] = {0, 0, 0};
  for (std::size_t flat = 0; flat < size_; ++flat) {
    unravel(flat, idx);
    double acc = 0.0;
    for (int d = 0; d < n_; ++d) {
      const double x = axis_coordinate(idx[d]);
      acc += x * x;
    }
    r[flat] = std::sqrt(acc);
  }
  return r;
}

double Grid::max_frequency() const { return std::sqrt(static_cast<double>(n_)) * M_PI * (N_ / 2) / L_; }

Field::Field(Grid grid, Representation rep)
    : grid_(std::move(grid)), rep_(rep), values_(grid_.size(), cplx(0.0, 0.0)) {}

Field::Field(Grid grid, Representation rep, std::vector<cplx> values)
    : grid_(std::move(grid)), rep_(rep), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw LabError(ErrorKind::SizeMismatch, "field value count does not match grid");
  }
}

Field Field::from_function(const Grid& grid,
                           const std::function<cplx(std::span<const double>)>& f) {
  Field out(grid, Representation::Physical);
  int idx[3] = {0, 0, 0};
  double x[3] = {0.0, 0.0, 0.0};
  for (std::size_t flat = 0; flat < grid.size(); ++flat) {
    grid.unravel(flat, idx);
    for (int d = 0; d < grid.dim(); ++d) x[d] = grid.axis_coordinate(idx[d]);
    out.values_[flat] = f(std::span<const double>(x, static_cast<std::size_t>(grid.dim())));
  }
  return out;
}

void Field::check_compatible(const Field& other) const {
  if (!(grid_ == other.grid_) || rep_ != other.rep_) {
    throw LabError(ErrorKind::SizeMismatch, "fields differ in grid or representation");
  }
}

Field& Field::operator+=(const Field& other) {
  check_compatible(other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  check_compatible(other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

Field& Field::operator*=(double scale) {
  for (auto& v : values_) v *= scale;
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double s, Field a) { return a *= s; }

namespace {

class PlanCache {
 public:
  fftw_plan get(int n, int N, int sign) {
    std::lock_guard lock(mutex_);
    const auto key = std::make_tuple(n, N, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::size_t size = 1;
    int dims[3];
    for (int d = 0; d < n; ++d) {
      dims[d] = N;
      size *= static_cast<std::size_t>(N);
    }
    auto* buffer = fftw_alloc_complex(size);
    fftw_plan plan =
        fftw_plan_dft(n, dims, buffer, buffer, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buffer);
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

// (-1)^(k_1 + ... + k_n): the phase from centring the box at the origin.
void apply_centering_phase(const Grid& grid, std::vector<cplx>& values) {
  int idx[3] = {0, 0, 0};
  for (std::size_t flat = 0; flat < values.size(); ++flat) {
    grid.unravel(flat, idx);
    int parity = 0;
    for (int d = 0; d < grid.dim(); ++d) parity += idx[d];
    if (parity & 1) values[flat] = -values[flat];
  }
}

void execute(const Grid& grid, std::vector<cplx>& values, int sign) {
  fftw_plan plan = plan_cache().get(grid.dim(), grid.points_per_axis(), sign);
  auto* data = reinterpret_cast<fftw_complex*>(values.data());
  fftw_execute_dft(plan, data, data);
  const double scale = 1.0 / std::sqrt(static_cast<double>(grid.size()));
  for (auto& v : values) v *= scale;
}

}  // namespace

Field transform(const Field& f) {
  if (f.representation() != Representation::Physical) {
    throw LabError(ErrorKind::InvalidArgument, "transform expects a physical field");
  }
  std::vector<cplx> values = f.values();
  execute(f.grid(), values, FFTW_FORWARD);
  apply_centering_phase(f.grid(), values);
  return Field(f.grid(), Representation::Spectral, std::move(values));
}

Field inverse_transform(const Field& f) {
  if (f.representation() != Representation::Spectral) {
    throw LabError(ErrorKind::InvalidArgument, "inverse_transform expects a spectral field");
  }
  std::vector<cplx> values = f.values();
  apply_centering_phase(f.grid(), values);
  execute(f.grid(), values, FFTW_BACKWARD);
  return Field(f.grid(), Representation::Physical, std::move(values));
}

Field to_spectral(const Field& f) {
  return f.representation() == Representation::Spectral ? f : transform(f);
}

Field to_physical(const Field& f) {
  return f.representation() == Representation::Physical ? f : inverse_transform(f);
}

Field apply_symbol(const std::function<double(double)>& symbol, const Field& f) {
  Field spec = to_spectral(f);
  const auto& xi = f.grid().frequency_norms();
  auto& v = spec.values();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= symbol(xi[i]);
  return f.representation() == Representation::Physical ? inverse_transform(spec) : spec;
}

Field apply_multiplier(const MultiplierSpec& spec, double t, const Field& f) {
  return apply_symbol([&](double xi) { return eval_symbol(spec, t, xi); }, f);
}

double imaginary_residue(const Field& f) {
  const Field phys = to_physical(f);
  double worst = 0.0;
  for (const auto& v : phys.values()) worst = std::max(worst, std::abs(v.imag()));
  return worst;
}

NormKind NormKind::Lq(double q) { return {Type::Lq, q, 0.0}; }
NormKind NormKind::Linf() { return {Type::Linf, INFINITY, 0.0}; }
NormKind NormKind::SobolevDotHsq(double s, double q) { return {Type::SobolevDotHsq, q, s}; }

namespace {

double lebesgue_norm(const Field& phys, double q) {
  if (std::isinf(q)) {
    double m = 0.0;
    for (const auto& v : phys.values()) m = std::max(m, std::abs(v));
    return m;
  }
  if (q < 1.0) throw LabError(ErrorKind::InvalidArgument, "Lebesgue index must be >= 1");
  double acc = 0.0;
  if (q == 2.0) {
    for (const auto& v : phys.values()) acc += std::norm(v);
  } else if (q == 1.0) {
    for (const auto& v : phys.values()) acc += std::abs(v);
  } else {
    for (const auto& v : phys.values()) acc += std::pow(std::abs(v), q);
  }
  return std::pow(acc * phys.grid().cell_volume(), 1.0 / q);
}

}  // namespace

double norm(const Field& f, const NormKind& kind) {
  switch (kind.type) {
    case NormKind::Type::Linf: return lebesgue_norm(to_physical(f), INFINITY);
    case NormKind::Type::Lq: return lebesgue_norm(to_physical(f), kind.q);
    case NormKind::Type::SobolevDotHsq: {
      if (kind.s < 0.0) throw LabError(ErrorKind::InvalidArgument, "Sobolev order must be >= 0");
      if (kind.s == 0.0) return lebesgue_norm(to_physical(f), kind.q);
      const double s = kind.s;
      const Field weighted = apply_symbol([s](double xi) { return std::pow(xi, s); }, to_spectral(f));
      return lebesgue_norm(inverse_transform(weighted), kind.q);
    }
  }
  return 0.0;
}

double bessel_potential_norm(const Field& f, double s, double q) {
  if (s == 0.0) return lebesgue_norm(to_physical(f), q);
  const Field weighted = apply_symbol(
      [s](double xi) { return std::pow(1.0 + xi * xi, 0.5 * s); }, to_spectral(f));
  return lebesgue_norm(inverse_transform(weighted), q);
}

double spectral_l2(const Field& f) {
  const Field spec = to_spectral(f);
  double acc = 0.0;
  for (const auto& v : spec.values()) acc += std::norm(v);
  return std::sqrt(acc * f.grid().cell_volume());
}

namespace {

std::uint64_t to_little_endian(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
    return r;
  }
  return v;
}

}  // namespace

void write_field(const std::string& base_path, const Field& f) {
  nlohmann::json header = {
      {"n", f.grid().dim()},
      {"N", f.grid().points_per_axis()},
      {"L", f.grid().half_length()},
      {"representation", f.representation() == Representation::Physical ? "Physical" : "Spectral"},
  };
  std::ofstream hout(base_path + ".json");
  if (!hout) throw LabError(ErrorKind::Io, "cannot write " + base_path + ".json");
  hout << header.dump(2) << '\n';

  std::ofstream bout(base_path + ".bin", std::ios::binary);
  if (!bout) throw LabError(ErrorKind::Io, "cannot write " + base_path + ".bin");
  for (const auto& v : f.values()) {
    const std::uint64_t parts[2] = {to_little_endian(std::bit_cast<std::uint64_t>(v.real())),
                                    to_little_endian(std::bit_cast<std::uint64_t>(v.imag()))};
    bout.write(reinterpret_cast<const char*>(parts), sizeof(parts));
  }
}

Field read_field(const std::string& base_path) {
  std::ifstream hin(base_path + ".json");
  if (!hin) throw LabError(ErrorKind::Io, "cannot read " + base_path + ".json");
  const auto header = nlohmann::json::parse(hin);
  const Grid grid(header.at("n").get<int>(), header.at("N").get<int>(),
                  header.at("L").get<double>());
  const auto rep = header.at("representation").get<std::string>() == "Physical"
                       ? Representation::Physical
                       : Representation::Spectral;

  std::ifstream bin(base_path + ".bin", std::ios::binary);
  if (!bin) throw LabError(ErrorKind::Io, "cannot read " + base_path + ".bin");
  std::vector<cplx> values(grid.size());
  for (auto& v : values) {
    std::uint64_t parts[2];
    if (!bin.read(reinterpret_cast<char*>(parts), sizeof(parts))) {
      throw LabError(ErrorKind::SizeMismatch, "field binary shorter than header implies");
    }
    v = cplx(std::bit_cast<double>(to_little_endian(parts[0])),
             std::bit_cast<double>(to_little_endian(parts[1])));
  }
  return Field(grid, rep, std::move(values));
}

}  // namespace boussinesq
