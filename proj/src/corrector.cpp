#include "glift/corrector.hpp"

#include "glift/error.hpp"
#include "glift/linalg.hpp"

namespace glift {

Correction newton_correct(const ImplicitProblem& p, const Vector& x, const Vector& y0, const CorrectorOptions& opts) {
  if (!(opts.tol > 0.0) || opts.max_iter < 1) throw Error(ErrorKind::InvalidArgument, "corrector options");
  if (!p.domain_x().contains(x)) throw Error(ErrorKind::DomainViolation, "corrector: x outside domain_x");
  if (!p.domain_y().contains(y0)) throw Error(ErrorKind::DomainViolation, "corrector: y0 outside domain_y");

  Correction out;
  out.y = y0;
  Vector r = residual(p, x, out.y);
  double rn = r.norm();
  out.residual_history.push_back(rn);

  for (int k = 0; k < opts.max_iter; ++k) {
    if (rn <= opts.tol) break;
    Matrix s;
    try {
      s = left_inverse(jac_y(p, x, out.y));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::RankDeficient) throw;
      throw Error(ErrorKind::RankLoss, "D_yF lost column rank during correction", e.value());
    }
    const Vector dy = -s * r;

    double lambda = 1.0;
    bool boundary_halved = false;
    Vector y_trial;
    Vector r_trial;
    while (true) {
      y_trial = out.y + lambda * dy;
      if (!p.domain_y().contains(y_trial)) {
        if (boundary_halved) throw Error(ErrorKind::BoundaryEscape, "corrector iterate left domain_y");
        boundary_halved = true;
        lambda *= 0.5;
        continue;
      }
      r_trial = residual(p, x, y_trial);
      if (r_trial.norm() < rn || lambda * 0.5 < opts.min_damping) break;
      lambda *= 0.5;
    }
    out.y = y_trial;
    r = r_trial;
    rn = r.norm();
    out.iterations = k + 1;
    out.residual_history.push_back(rn);
  }

  out.residual_norm = rn;
  if (!(rn <= opts.tol)) {
    throw Error(ErrorKind::NoConvergence, "corrector stopped at |F| = " + std::to_string(rn), rn);
  }
  return out;
}

}  // namespace glift
