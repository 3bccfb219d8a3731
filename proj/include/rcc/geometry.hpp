#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rcc {

/// Default tolerance for feasibility checks on continuous data.
inline constexpr double kFeasTol = 1e-9;
/// Integer coordinates are snapped when within this distance of an integer.
inline constexpr double kIntTol = 1e-6;

/// The domain Z^{d_int} x R^{d_cont}. Coordinates are ordered with the
/// integer block first.
struct MixedIntegerSpace {
  int d_int = 0;
  int d_cont = 0;

  MixedIntegerSpace() = default;
  MixedIntegerSpace(int di, int dc) : d_int(di), d_cont(dc) {
    if (di < 0 || dc < 0 || di + dc < 1)
      throw std::invalid_argument("MixedIntegerSpace: need d_int,d_cont >= 0 and d >= 1");
    if (di > 30) throw std::invalid_argument("MixedIntegerSpace: d_int > 30 not representable");
  }

  int dim() const { return d_int + d_cont; }
  bool is_integer_coord(int j) const { return j < d_int; }
  bool operator==(const MixedIntegerSpace&) const = default;
};

/// Helly number of Z^{d_int} x R^{d_cont}: (d_cont + 1) * 2^{d_int}.
std::int64_t helly_number(const MixedIntegerSpace& space);

/// Largest possible basis size: helly_number(space) - 1.
std::int64_t combinatorial_dimension(const MixedIntegerSpace& space);

/// A point of the mixed-integer space. The first d_int coordinates are held
/// as exact integral doubles (snapped at construction).
class Point {
 public:
  Point() = default;

  /// Validates integrality of the integer block (within kIntTol) and snaps.
  Point(const MixedIntegerSpace& space, std::vector<double> coords);

  int dim() const { return static_cast<int>(coords_.size()); }
  const std::vector<double>& coords() const { return coords_; }
  double operator[](int j) const { return coords_[j]; }

  /// Exact equality on the integer block, |diff| <= cont_tol elsewhere.
  bool approx_equal(const Point& other, int d_int, double cont_tol) const;

 private:
  std::vector<double> coords_;
};

/// Who created a constraint row. Used to trace rows across nodes, dedup
/// unions and build reproducible logs.
struct Provenance {
  enum class Tag : std::uint8_t { Nominal, Sample, Box, Synthetic };

  Tag tag = Tag::Synthetic;
  std::int32_t node = -1;    // origin node id, -1 when not node-owned
  std::int64_t sample = -1;  // draw index for Tag::Sample
  std::int32_t row = -1;     // row index inside the origin set

  auto operator<=>(const Provenance&) const = default;
  std::string to_string() const;
};

/// Half-space a . x <= b.
struct LinearConstraint {
  std::vector<double> a;
  double b = 0.0;
  Provenance provenance;

  LinearConstraint() = default;
  LinearConstraint(std::vector<double> coeff, double bound, Provenance prov = {});

  int dim() const { return static_cast<int>(a.size()); }
};

/// Residual a . x - b; the constraint holds at x iff residual <= tol.
double residual(const LinearConstraint& c, const Point& x);
double residual(const LinearConstraint& c, const std::vector<double>& x);

/// Objective value c . x.
double cost(const std::vector<double>& c, const Point& x);
double cost(const std::vector<double>& c, const std::vector<double>& x);

/// The pair (constraint list, objective) over a mixed-integer space.
struct ConstraintSystem {
  MixedIntegerSpace space;
  std::vector<double> objective;
  std::vector<LinearConstraint> constraints;

  ConstraintSystem() = default;
  ConstraintSystem(MixedIntegerSpace sp, std::vector<double> c);

  void add(LinearConstraint con);
  int dim() const { return space.dim(); }
  std::size_t size() const { return constraints.size(); }

  /// Max residual over all rows at x (-inf when empty).
  double max_residual(const Point& x) const;
  bool feasible(const Point& x, double tol = kFeasTol) const;
};

/// A minimal collection of constraints defining the optimum, together with
/// the optimal cost of the induced problem.
struct Basis {
  std::vector<LinearConstraint> constraints;
  double cost = 0.0;

  std::size_t size() const { return constraints.size(); }
  bool empty() const { return constraints.empty(); }
};

/// Content fingerprint of a row set (order-insensitive). Used to detect
/// unchanged local problems and unchanged bases.
std::uint64_t fingerprint(const std::vector<LinearConstraint>& rows);

}  // namespace rcc
