#pragma once

#include <vector>

#include "glift/problem.hpp"

namespace glift {

struct CorrectorOptions {
  double tol = 1e-10;
  int max_iter = 25;
  double min_damping = 1.0 / 1024.0;
};

struct Correction {
  Vector y;
  int iterations = 0;
  double residual_norm = 0.0;
  std::vector<double> residual_history;  // |F| before each update and at the end
};

/// Gauss-Newton with the Moore-Penrose left inverse of D_yF:
///   y <- y - lambda * S(x, y) F(x, y),
/// lambda halved until |F| decreases (floor min_damping). A trial point
/// outside domain_y gets one halving before BoundaryEscape.
/// Throws NoConvergence, RankLoss, BoundaryEscape; DomainViolation when the
/// starting point is outside the domains.
Correction newton_correct(const ImplicitProblem& p, const Vector& x, const Vector& y0,
                          const CorrectorOptions& opts = {});

}  // namespace glift
