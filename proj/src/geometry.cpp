#include "rcc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

namespace rcc {

std::int64_t helly_number(const MixedIntegerSpace& space) {
  if (space.d_int > 30) throw std::invalid_argument("helly_number: d_int > 30");
  return static_cast<std::int64_t>(space.d_cont + 1) << space.d_int;
}

std::int64_t combinatorial_dimension(const MixedIntegerSpace& space) {
  return helly_number(space) - 1;
}

Point::Point(const MixedIntegerSpace& space, std::vector<double> coords)
    : coords_(std::move(coords)) {
  if (static_cast<int>(coords_.size()) != space.dim())
    throw std::invalid_argument("Point: dimension mismatch");
  for (int j = 0; j < space.d_int; ++j) {
    const double r = std::round(coords_[j]);
    if (std::abs(coords_[j] - r) > kIntTol)
      throw std::invalid_argument("Point: coordinate " + std::to_string(j) +
                                  " not integral within tolerance");
    coords_[j] = r;
  }
}

bool Point::approx_equal(const Point& other, int d_int, double cont_tol) const {
  if (coords_.size() != other.coords_.size()) return false;
  for (std::size_t j = 0; j < coords_.size(); ++j) {
    if (static_cast<int>(j) < d_int) {
      if (coords_[j] != other.coords_[j]) return false;
    } else if (std::abs(coords_[j] - other.coords_[j]) > cont_tol) {
      return false;
    }
  }
  return true;
}

std::string Provenance::to_string() const {
  switch (tag) {
    case Tag::Nominal:
      return "n" + std::to_string(node) + ":r" + std::to_string(row);
    case Tag::Sample:
      return "n" + std::to_string(node) + ":s" + std::to_string(sample) + ":r" +
             std::to_string(row);
    case Tag::Box:
      return "box:r" + std::to_string(row);
    case Tag::Synthetic:
      return "syn:r" + std::to_string(row);
  }
  return "?";
}

LinearConstraint::LinearConstraint(std::vector<double> coeff, double bound, Provenance prov)
    : a(std::move(coeff)), b(bound), provenance(prov) {
  bool nonzero = false;
  for (double v : a) nonzero |= (v != 0.0);
  if (!nonzero) throw std::invalid_argument("LinearConstraint: all-zero coefficient vector");
}

double residual(const LinearConstraint& c, const std::vector<double>& x) {
  if (c.a.size() != x.size()) throw std::invalid_argument("residual: dimension mismatch");
  double dot = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) dot += c.a[j] * x[j];
  return dot - c.b;
}

double residual(const LinearConstraint& c, const Point& x) { return residual(c, x.coords()); }

double cost(const std::vector<double>& c, const std::vector<double>& x) {
  if (c.size() != x.size()) throw std::invalid_argument("cost: dimension mismatch");
  double dot = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) dot += c[j] * x[j];
  return dot;
}

double cost(const std::vector<double>& c, const Point& x) { return cost(c, x.coords()); }

ConstraintSystem::ConstraintSystem(MixedIntegerSpace sp, std::vector<double> c)
    : space(sp), objective(std::move(c)) {
  if (static_cast<int>(objective.size()) != space.dim())
    throw std::invalid_argument("ConstraintSystem: objective dimension mismatch");
}

void ConstraintSystem::add(LinearConstraint con) {
  if (con.dim() != space.dim())
    throw std::invalid_argument("ConstraintSystem: constraint dimension mismatch");
  constraints.push_back(std::move(con));
}

double ConstraintSystem::max_residual(const Point& x) const {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& c : constraints) worst = std::max(worst, residual(c, x));
  return worst;
}

bool ConstraintSystem::feasible(const Point& x, double tol) const {
  for (const auto& c : constraints)
    if (residual(c, x) > tol) return false;
  return true;
}

namespace {
std::uint64_t hash_row(const LinearConstraint& c) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    h ^= bits;
    h *= 0x100000001b3ULL;
  };
  for (double v : c.a) mix(v);
  mix(c.b);
  return h;
}
}  // namespace

std::uint64_t fingerprint(const std::vector<LinearConstraint>& rows) {
  // Order-insensitive combine so permuted unions fingerprint identically.
  std::uint64_t acc = 0x9e3779b97f4a7c15ULL ^ (0x100000001b3ULL * rows.size());
  for (const auto& r : rows) {
    std::uint64_t h = hash_row(r);
    h *= 0xff51afd7ed558ccdULL;
    h ^= h >> 33;
    acc += h;
  }
  return acc;
}

}  // namespace rcc
