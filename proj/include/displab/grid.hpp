#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace displab {

using cplx = std::complex<double>;

struct Axis {
  double extent = 2.0 * M_PI;  // torus period L
  int points = 16;             // samples n, even

  bool operator==(const Axis&) const = default;
};

/// Periodic sampling lattice for R^{N-k} x R^k: the last `split` axes are
/// the y-block.  Sample points along axis i are a*L_i/n_i, a = 0..n_i-1;
/// the frequency lattice is 2*pi*m/L_i with m = -n_i/2 .. n_i/2 - 1.
class TorusGrid {
 public:
  TorusGrid() = default;
  TorusGrid(std::vector<Axis> axes, int split)
      : axes_(std::move(axes)), split_(split) {
    if (axes_.empty()) throw std::invalid_argument("TorusGrid: no axes");
    if (split_ < 1 || split_ > static_cast<int>(axes_.size()))
      throw std::invalid_argument("TorusGrid: split outside [1, dim]");
    for (const Axis& a : axes_) {
      if (a.points <= 0 || a.points % 2 != 0)
        throw std::invalid_argument("TorusGrid: point counts must be even");
      if (!(a.extent > 0.0))
        throw std::invalid_argument("TorusGrid: extents must be positive");
    }
  }

  /// Isotropic grid: `dim` axes of the same extent and point count.
  static TorusGrid isotropic(int dim, int split, double extent, int points) {
    return TorusGrid(std::vector<Axis>(dim, Axis{extent, points}), split);
  }

  int dim() const { return static_cast<int>(axes_.size()); }
  int split() const { return split_; }            // k
  int x_dim() const { return dim() - split_; }    // N - k
  const Axis& axis(int i) const { return axes_[i]; }
  const std::vector<Axis>& axes() const { return axes_; }

  std::size_t size() const {
    std::size_t n = 1;
    for (const Axis& a : axes_) n *= static_cast<std::size_t>(a.points);
    return n;
  }
  double spacing(int i) const { return axes_[i].extent / axes_[i].points; }
  double cell_volume() const {
    double v = 1.0;
    for (int i = 0; i < dim(); ++i) v *= spacing(i);
    return v;
  }
  double x_cell() const {
    double v = 1.0;
    for (int i = 0; i < x_dim(); ++i) v *= spacing(i);
    return v;
  }
  double y_cell() const {
    double v = 1.0;
    for (int i = x_dim(); i < dim(); ++i) v *= spacing(i);
    return v;
  }

  /// Signed frequency for storage index m along axis i.
  double frequency(int i, int index) const {
    const int n = axes_[i].points;
    const int m = index < n / 2 ? index : index - n;
    return 2.0 * M_PI * m / axes_[i].extent;
  }
  std::vector<double> frequencies(int i) const {
    std::vector<double> f(axes_[i].points);
    for (int a = 0; a < axes_[i].points; ++a) f[a] = frequency(i, a);
    return f;
  }
  double sample_coordinate(int i, int index) const {
    return spacing(i) * index;
  }

  bool operator==(const TorusGrid&) const = default;

 private:
  std::vector<Axis> axes_;
  int split_ = 1;
};

/// Complex scalar field sampled on a torus grid, row-major storage.
/// Fields are plain values; all operations on them are pure.
struct Field {
  TorusGrid grid;
  std::vector<cplx> samples;

  Field() = default;
  explicit Field(const TorusGrid& g) : grid(g), samples(g.size()) {}
  Field(const TorusGrid& g, std::vector<cplx> data)
      : grid(g), samples(std::move(data)) {
    if (samples.size() != grid.size())
      throw std::invalid_argument("Field: sample count does not match grid");
  }

  std::size_t size() const { return samples.size(); }
  cplx& operator[](std::size_t i) { return samples[i]; }
  const cplx& operator[](std::size_t i) const { return samples[i]; }
};

inline Field operator+(const Field& a, const Field& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("Field +: grid mismatch");
  Field out(a.grid);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = a[i] + b[i];
  return out;
}
inline Field operator-(const Field& a, const Field& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("Field -: grid mismatch");
  Field out(a.grid);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = a[i] - b[i];
  return out;
}
inline Field operator*(cplx c, const Field& f) {
  Field out(f.grid);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = c * f[i];
  return out;
}

/// Odometer over the lattice: visit(flat_index, per_axis_indices).
template <class F>
void for_each_index(const TorusGrid& g, F&& visit) {
  const int d = g.dim();
  std::array<int, 8> idx{};
  const std::size_t total = g.size();
  for (std::size_t flat = 0; flat < total; ++flat) {
    visit(flat, idx.data());
    for (int ax = d - 1; ax >= 0; --ax) {
      if (++idx[ax] < g.axis(ax).points) break;
      idx[ax] = 0;
    }
  }
}

// ---------------------------------------------------------------------------
// Flat binary snapshot format: axis count (u64), extents (f64 each), point
// counts (i64 each), split index (i64), then interleaved re/im f64 pairs in
// row-major order.  Native byte order.
// ---------------------------------------------------------------------------

inline void write_field(const Field& f, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_field: cannot open " + path);
  const std::uint64_t d = static_cast<std::uint64_t>(f.grid.dim());
  os.write(reinterpret_cast<const char*>(&d), sizeof d);
  for (int i = 0; i < f.grid.dim(); ++i) {
    const double L = f.grid.axis(i).extent;
    os.write(reinterpret_cast<const char*>(&L), sizeof L);
  }
  for (int i = 0; i < f.grid.dim(); ++i) {
    const std::int64_t n = f.grid.axis(i).points;
    os.write(reinterpret_cast<const char*>(&n), sizeof n);
  }
  const std::int64_t split = f.grid.split();
  os.write(reinterpret_cast<const char*>(&split), sizeof split);
  os.write(reinterpret_cast<const char*>(f.samples.data()),
           static_cast<std::streamsize>(f.samples.size() * sizeof(cplx)));
  if (!os) throw std::runtime_error("write_field: short write to " + path);
}

inline Field read_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_field: cannot open " + path);
  std::uint64_t d = 0;
  is.read(reinterpret_cast<char*>(&d), sizeof d);
  if (!is || d == 0 || d > 8)
    throw std::runtime_error("read_field: bad axis count in " + path);
  std::vector<double> extents(d);
  is.read(reinterpret_cast<char*>(extents.data()),
          static_cast<std::streamsize>(d * sizeof(double)));
  std::vector<std::int64_t> counts(d);
  is.read(reinterpret_cast<char*>(counts.data()),
          static_cast<std::streamsize>(d * sizeof(std::int64_t)));
  std::int64_t split = 0;
  is.read(reinterpret_cast<char*>(&split), sizeof split);
  if (!is) throw std::runtime_error("read_field: truncated header in " + path);
  std::vector<Axis> axes(d);
  for (std::uint64_t i = 0; i < d; ++i)
    axes[i] = Axis{extents[i], static_cast<int>(counts[i])};
  Field f(TorusGrid(std::move(axes), static_cast<int>(split)));
  is.read(reinterpret_cast<char*>(f.samples.data()),
          static_cast<std::streamsize>(f.samples.size() * sizeof(cplx)));
  if (!is) throw std::runtime_error("read_field: truncated data in " + path);
  return f;
}

}  // namespace displab
