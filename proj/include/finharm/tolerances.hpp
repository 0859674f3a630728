#pragma once

#include "finharm/error.hpp"

namespace finharm {

/// Numerical knobs shared by every module.
///   rank_tol  - relative singular-value cutoff for rank decisions
///   eq_tol    - projector distance / level-set tolerance
///   entry_tol - absolute threshold below which a matrix entry counts as zero
struct Tolerances {
  double rank_tol = 1e-9;
  double eq_tol = 1e-8;
  double entry_tol = 1e-10;

  void validate() const {
    if (!(rank_tol > 0.0) || !(eq_tol > 0.0) || !(entry_tol > 0.0))
      throw Error(ErrorKind::Tolerance, "all tolerances must be positive");
  }
};

}  // namespace finharm
