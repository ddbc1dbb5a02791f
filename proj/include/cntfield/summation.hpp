#pragma once

// Cauchy-type kernel sums  Σ_j q_j / (x_j − z)  over boundary sources.
// Every O(N²) interaction in the solver and in field evaluation goes
// through this interface, so a fast-multipole backend can be dropped in
// without touching the callers. DenseBackend is the reference.

#include <memory>

#include "cntfield/types.hpp"

namespace cntfield {

class SummationBackend {
 public:
  virtual ~SummationBackend() = default;

  /// out_i = Σ_{j ≠ i} charges_j / (sources_j − sources_i).
  virtual void self_sum(const CVector& sources, const CVector& charges, CVector& out) const = 0;

  /// out(i, c) = Σ_j charges(j, c) / (sources_j − targets_i), one column per charge set.
  virtual void target_sum(const CVector& sources, const CMatrix& charges, const CVector& targets,
                          CMatrix& out) const = 0;
};

/// Direct O(N·M) summation. Rows are independent, so results do not depend
/// on the thread count.
class DenseBackend final : public SummationBackend {
 public:
  void self_sum(const CVector& sources, const CVector& charges, CVector& out) const override;
  void target_sum(const CVector& sources, const CMatrix& charges, const CVector& targets,
                  CMatrix& out) const override;
};

std::shared_ptr<const SummationBackend> default_backend();

}  // namespace cntfield
