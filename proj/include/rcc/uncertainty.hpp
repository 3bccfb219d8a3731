#pragma once

#include <cstdint>
#include <vector>

#include "rcc/bounds.hpp"
#include "rcc/geometry.hpp"
#include "rcc/rng.hpp"

namespace rcc {

/// One node's uncertain constraint set F^i(q).
///
/// IntervalMatrix: rows (A^0 + A^q) x <= b where each entry of A^q is drawn
/// uniformly in [-radius, radius].
/// BallCenter: rows a . x <= b_nominal + a . (p - center) where the draw p is
/// uniform in the l2-ball of the given radius around the nominal center
/// (rows whose offsets ride on an uncertain anchor point).
struct UncertainConstraintSet {
  enum class Kind { IntervalMatrix, BallCenter };

  Kind kind = Kind::IntervalMatrix;
  int owner = -1;
  std::vector<LinearConstraint> nominal;  // provenance Tag::Nominal rows
  double radius = 0.0;                    // entrywise (interval) or ball radius
  std::vector<double> center;             // BallCenter only: nominal anchor

  int dim() const { return nominal.empty() ? 0 : nominal.front().dim(); }
  std::size_t rows() const { return nominal.size(); }
  bool empty() const { return nominal.empty(); }

  void validate() const;
};

UncertainConstraintSet make_interval_set(int owner,
                                         const std::vector<std::vector<double>>& rows,
                                         const std::vector<double>& bounds, double radius);

UncertainConstraintSet make_ball_set(int owner, std::vector<LinearConstraint> nominal_rows,
                                     std::vector<double> center, double radius);

/// One realized uncertainty sample. Payload layout depends on the set kind:
/// IntervalMatrix holds row-major deviations (rows x dim), BallCenter holds
/// the realized anchor point.
struct Draw {
  std::vector<double> payload;
};

/// Deterministically expands sample `index` of the multisample anchored at
/// `base_state`. The anchor is one PRNG word, so the whole multisample can
/// be replayed (or scanned in parallel) without materializing it.
Draw expand_draw(const UncertainConstraintSet& set, std::uint64_t base_state,
                 std::int64_t index);

/// Realizes all rows of the set at a draw. Row provenance becomes
/// (owner, sample_id, row, Sample).
std::vector<LinearConstraint> realize(const UncertainConstraintSet& set, const Draw& draw,
                                      std::int64_t sample_id);

/// M independent draws consumed from the stream (advances it by one word).
std::vector<Draw> draw_multisample(const UncertainConstraintSet& set, std::int64_t count,
                                   Rng& rng);

/// A sampled realization whose realized rows are violated at a candidate
/// point, together with the violated rows themselves.
struct ViolationCertificate {
  Draw sample;
  std::int64_t sample_index = -1;  // global per-node draw id
  std::vector<LinearConstraint> violated;
};

/// Scans the multisample anchored at base_state against x in draw order and
/// returns the first up-to-max_certificates violating samples. The parallel
/// kernel computes violation flags with OpenMP and then selects the same
/// leading samples the serial reference does.
std::vector<ViolationCertificate> scan_multisample(const UncertainConstraintSet& set,
                                                   std::uint64_t base_state, std::int64_t count,
                                                   std::int64_t sample_id_base, const Point& x,
                                                   int max_certificates, double tol,
                                                   bool parallel);

/// Serial reference for the scan kernel (used by tests and the benchmark).
std::vector<ViolationCertificate> scan_multisample_serial(const UncertainConstraintSet& set,
                                                          std::uint64_t base_state,
                                                          std::int64_t count,
                                                          std::int64_t sample_id_base,
                                                          const Point& x, int max_certificates,
                                                          double tol);

/// Materializes the realized rows of every sample of a multisample
/// (used to assemble the deterministic problem after a scenario freeze).
std::vector<LinearConstraint> realize_multisample(const UncertainConstraintSet& set,
                                                  std::uint64_t base_state, std::int64_t count,
                                                  std::int64_t sample_id_base);

/// The verification step: draws sample_size(schedule) samples from the
/// stream, scans them in order and returns the first up-to-max_certificates
/// violating ones. Increments schedule.k (a scan happened) and advances
/// sample_id_base by the number of samples drawn.
std::vector<ViolationCertificate> verify(const Point& x, const UncertainConstraintSet& set,
                                         SampleSchedule& schedule, int max_certificates,
                                         Rng& rng, std::int64_t& sample_id_base,
                                         double tol = kFeasTol, bool parallel = false);

}  // namespace rcc
