#include "rcc/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rcc {

void UncertainConstraintSet::validate() const {
  if (radius < 0.0) throw std::invalid_argument("UncertainConstraintSet: radius >= 0");
  const int d = dim();
  for (const auto& c : nominal)
    if (c.dim() != d) throw std::invalid_argument("UncertainConstraintSet: row dim mismatch");
  if (kind == Kind::BallCenter && static_cast<int>(center.size()) != d)
    throw std::invalid_argument("UncertainConstraintSet: center dim mismatch");
}

UncertainConstraintSet make_interval_set(int owner,
                                         const std::vector<std::vector<double>>& rows,
                                         const std::vector<double>& bounds, double radius) {
  if (rows.size() != bounds.size())
    throw std::invalid_argument("make_interval_set: rows/bounds mismatch");
  UncertainConstraintSet set;
  set.kind = UncertainConstraintSet::Kind::IntervalMatrix;
  set.owner = owner;
  set.radius = radius;
  set.nominal.reserve(rows.size());
  for (std::size_t l = 0; l < rows.size(); ++l) {
    Provenance prov;
    prov.tag = Provenance::Tag::Nominal;
    prov.node = owner;
    prov.row = static_cast<std::int32_t>(l);
    set.nominal.emplace_back(rows[l], bounds[l], prov);
  }
  set.validate();
  return set;
}

UncertainConstraintSet make_ball_set(int owner, std::vector<LinearConstraint> nominal_rows,
                                     std::vector<double> center, double radius) {
  UncertainConstraintSet set;
  set.kind = UncertainConstraintSet::Kind::BallCenter;
  set.owner = owner;
  set.radius = radius;
  set.center = std::move(center);
  set.nominal = std::move(nominal_rows);
  for (std::size_t l = 0; l < set.nominal.size(); ++l) {
    set.nominal[l].provenance.tag = Provenance::Tag::Nominal;
    set.nominal[l].provenance.node = owner;
    set.nominal[l].provenance.row = static_cast<std::int32_t>(l);
  }
  set.validate();
  return set;
}

Draw expand_draw(const UncertainConstraintSet& set, std::uint64_t base_state,
                 std::int64_t index) {
  Rng rng = derive_stream(base_state, "draw", static_cast<std::uint64_t>(index));
  Draw draw;
  if (set.kind == UncertainConstraintSet::Kind::IntervalMatrix) {
    const std::size_t n = set.rows() * static_cast<std::size_t>(set.dim());
    draw.payload.resize(n);
    for (std::size_t i = 0; i < n; ++i) draw.payload[i] = rng.uniform(-set.radius, set.radius);
  } else {
    // Uniform over the l2-ball: rejection sampling from the bounding square.
    const int d = set.dim();
    draw.payload.resize(d);
    for (;;) {
      double norm2 = 0.0;
      for (int j = 0; j < d; ++j) {
        draw.payload[j] = rng.uniform(-set.radius, set.radius);
        norm2 += draw.payload[j] * draw.payload[j];
      }
      if (norm2 <= set.radius * set.radius) break;
      if (set.radius == 0.0) break;
    }
    for (int j = 0; j < d; ++j) draw.payload[j] += set.center[j];
  }
  return draw;
}

std::vector<LinearConstraint> realize(const UncertainConstraintSet& set, const Draw& draw,
                                      std::int64_t sample_id) {
  const int d = set.dim();
  std::vector<LinearConstraint> rows;
  rows.reserve(set.rows());
  for (std::size_t l = 0; l < set.rows(); ++l) {
    LinearConstraint row = set.nominal[l];
    if (set.kind == UncertainConstraintSet::Kind::IntervalMatrix) {
      const double* dev = draw.payload.data() + l * static_cast<std::size_t>(d);
      for (int j = 0; j < d; ++j) row.a[j] += dev[j];
    } else {
      // b = b_nominal + a . (p - center)
      double shift = 0.0;
      for (int j = 0; j < d; ++j) shift += row.a[j] * (draw.payload[j] - set.center[j]);
      row.b += shift;
    }
    row.provenance.tag = Provenance::Tag::Sample;
    row.provenance.sample = sample_id;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<Draw> draw_multisample(const UncertainConstraintSet& set, std::int64_t count,
                                   Rng& rng) {
  if (count < 1) throw std::invalid_argument("draw_multisample: count >= 1");
  const std::uint64_t base = rng.next_u64();
  std::vector<Draw> draws(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i)
    draws[static_cast<std::size_t>(i)] = expand_draw(set, base, i);
  return draws;
}

namespace {

// Violation test for one draw without materializing realized rows.
bool draw_violates(const UncertainConstraintSet& set, std::uint64_t base_state,
                   std::int64_t index, const std::vector<double>& nominal_dot,
                   const Point& x, double tol) {
  const int d = set.dim();
  Rng rng = derive_stream(base_state, "draw", static_cast<std::uint64_t>(index));
  if (set.kind == UncertainConstraintSet::Kind::IntervalMatrix) {
    for (std::size_t l = 0; l < set.rows(); ++l) {
      double dev_dot = 0.0;
      for (int j = 0; j < d; ++j) dev_dot += rng.uniform(-set.radius, set.radius) * x[j];
      if (nominal_dot[l] + dev_dot - set.nominal[l].b > tol) return true;
    }
    return false;
  }
  const Draw draw = expand_draw(set, base_state, index);
  for (std::size_t l = 0; l < set.rows(); ++l) {
    double shift = 0.0;
    for (int j = 0; j < d; ++j) shift += set.nominal[l].a[j] * (draw.payload[j] - set.center[j]);
    if (nominal_dot[l] - set.nominal[l].b - shift > tol) return true;
  }
  return false;
}

ViolationCertificate make_certificate(const UncertainConstraintSet& set,
                                      std::uint64_t base_state, std::int64_t index,
                                      std::int64_t sample_id_base, const Point& x, double tol) {
  ViolationCertificate cert;
  cert.sample = expand_draw(set, base_state, index);
  cert.sample_index = sample_id_base + index;
  for (auto& row : realize(set, cert.sample, cert.sample_index))
    if (residual(row, x) > tol) cert.violated.push_back(std::move(row));
  return cert;
}

std::vector<double> nominal_dots(const UncertainConstraintSet& set, const Point& x) {
  std::vector<double> dots(set.rows());
  for (std::size_t l = 0; l < set.rows(); ++l) {
    double v = 0.0;
    for (int j = 0; j < set.dim(); ++j) v += set.nominal[l].a[j] * x[j];
    dots[l] = v;
  }
  return dots;
}

}  // namespace

std::vector<ViolationCertificate> scan_multisample_serial(const UncertainConstraintSet& set,
                                                          std::uint64_t base_state,
                                                          std::int64_t count,
                                                          std::int64_t sample_id_base,
                                                          const Point& x, int max_certificates,
                                                          double tol) {
  std::vector<ViolationCertificate> certs;
  if (set.empty() || count < 1 || max_certificates < 1) return certs;
  const std::vector<double> dots = nominal_dots(set, x);
  for (std::int64_t i = 0; i < count; ++i) {
    if (static_cast<int>(certs.size()) >= max_certificates) break;
    if (draw_violates(set, base_state, i, dots, x, tol))
      certs.push_back(make_certificate(set, base_state, i, sample_id_base, x, tol));
  }
  return certs;
}

std::vector<ViolationCertificate> scan_multisample(const UncertainConstraintSet& set,
                                                   std::uint64_t base_state, std::int64_t count,
                                                   std::int64_t sample_id_base, const Point& x,
                                                   int max_certificates, double tol,
                                                   bool parallel) {
#ifdef _OPENMP
  if (parallel && count >= 64) {
    std::vector<ViolationCertificate> certs;
    if (set.empty() || max_certificates < 1) return certs;
    const std::vector<double> dots = nominal_dots(set, x);
    std::vector<unsigned char> flags(static_cast<std::size_t>(count), 0);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < count; ++i)
      flags[static_cast<std::size_t>(i)] =
          draw_violates(set, base_state, i, dots, x, tol) ? 1 : 0;
    for (std::int64_t i = 0; i < count; ++i) {
      if (static_cast<int>(certs.size()) >= max_certificates) break;
      if (flags[static_cast<std::size_t>(i)])
        certs.push_back(make_certificate(set, base_state, i, sample_id_base, x, tol));
    }
    return certs;
  }
#else
  (void)parallel;
#endif
  return scan_multisample_serial(set, base_state, count, sample_id_base, x, max_certificates,
                                 tol);
}

std::vector<LinearConstraint> realize_multisample(const UncertainConstraintSet& set,
                                                  std::uint64_t base_state, std::int64_t count,
                                                  std::int64_t sample_id_base) {
  std::vector<LinearConstraint> rows;
  rows.reserve(set.rows() * static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) {
    const Draw draw = expand_draw(set, base_state, i);
    for (auto& row : realize(set, draw, sample_id_base + i)) rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ViolationCertificate> verify(const Point& x, const UncertainConstraintSet& set,
                                         SampleSchedule& schedule, int max_certificates,
                                         Rng& rng, std::int64_t& sample_id_base, double tol,
                                         bool parallel) {
  if (max_certificates < 1) throw std::invalid_argument("verify: max_certificates >= 1");
  const std::int64_t m = sample_size(schedule);
  const std::uint64_t base = rng.next_u64();
  auto certs =
      scan_multisample(set, base, m, sample_id_base, x, max_certificates, tol, parallel);
  sample_id_base += m;
  schedule.k += 1;
  return certs;
}

}  // namespace rcc
