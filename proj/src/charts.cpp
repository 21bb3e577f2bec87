#include "glift/charts.hpp"

#include <cmath>
#include <numbers>

#include "glift/error.hpp"
#include "glift/linalg.hpp"

namespace glift {

Chart identity_chart(Eigen::Index dim) {
  Chart c;
  c.name = "identity";
  c.dim = dim;
  c.forward = [](const Vector& p) { return p; };
  c.inverse = [](const Vector& q) { return q; };
  c.jac_forward = [dim](const Vector&) -> Matrix { return Matrix::Identity(dim, dim); };
  c.domain = Domain::whole(dim);
  return c;
}

Chart affine_chart(const Matrix& a, const Vector& b) {
  if (a.rows() != a.cols() || a.rows() != b.size()) throw Error(ErrorKind::DimensionMismatch, "affine chart shapes");
  if (!(smallest_singular_value(a) > rank_tolerance(a.rows(), a.cols(), spectral_norm(a)))) {
    throw Error(ErrorKind::RankDeficient, "affine chart matrix is singular");
  }
  const Eigen::ColPivHouseholderQR<Matrix> qr(a);
  Chart c;
  c.name = "affine";
  c.dim = a.rows();
  c.forward = [a, b](const Vector& p) -> Vector { return a * p + b; };
  c.inverse = [qr, b](const Vector& q) -> Vector { return qr.solve(q - b); };
  c.jac_forward = [a](const Vector&) { return a; };
  c.domain = Domain::whole(a.rows());
  return c;
}

Chart tangent_box_chart(const Box& box) {
  using std::numbers::pi;
  const Vector lo = box.lower();
  const Vector hi = box.upper();
  const Eigen::Index d = box.dim();

  Chart c;
  c.name = "tangent-box";
  c.dim = d;
  c.domain = Domain(box);
  c.forward = [lo, hi, d](const Vector& p) {
    Vector q(d);
    for (Eigen::Index i = 0; i < d; ++i) {
      const bool fl = std::isfinite(lo(i));
      const bool fh = std::isfinite(hi(i));
      if (fl && fh) {
        q(i) = std::tan(pi * (2.0 * p(i) - lo(i) - hi(i)) / (2.0 * (hi(i) - lo(i))));
      } else if (fl) {
        q(i) = std::log(p(i) - lo(i));
      } else if (fh) {
        q(i) = -std::log(hi(i) - p(i));
      } else {
        q(i) = p(i);
      }
    }
    return q;
  };
  c.inverse = [lo, hi, d](const Vector& q) {
    Vector p(d);
    for (Eigen::Index i = 0; i < d; ++i) {
      const bool fl = std::isfinite(lo(i));
      const bool fh = std::isfinite(hi(i));
      if (fl && fh) {
        p(i) = 0.5 * (lo(i) + hi(i)) + (hi(i) - lo(i)) / pi * std::atan(q(i));
      } else if (fl) {
        p(i) = lo(i) + std::exp(q(i));
      } else if (fh) {
        p(i) = hi(i) - std::exp(-q(i));
      } else {
        p(i) = q(i);
      }
    }
    return p;
  };
  c.jac_forward = [lo, hi, d](const Vector& p) {
    Matrix j = Matrix::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      const bool fl = std::isfinite(lo(i));
      const bool fh = std::isfinite(hi(i));
      if (fl && fh) {
        const double w = hi(i) - lo(i);
        const double cu = std::cos(pi * (2.0 * p(i) - lo(i) - hi(i)) / (2.0 * w));
        j(i, i) = pi / w / (cu * cu);
      } else if (fl) {
        j(i, i) = 1.0 / (p(i) - lo(i));
      } else if (fh) {
        j(i, i) = 1.0 / (hi(i) - p(i));
      } else {
        j(i, i) = 1.0;
      }
    }
    return j;
  };
  return c;
}

namespace {

double scalar_derivative(const ScalarMap& f, double v) {
  if (f.derivative) return f.derivative(v);
  const double h = std::cbrt(kEpsilon) * std::max(1.0, std::abs(v));
  return (f.value(v + h) - f.value(v - h)) / (2.0 * h);
}

}  // namespace

double invert_monotone(const ScalarMap& f, double target, double lo, double hi) {
  if (f.inverse) return f.inverse(target);
  // Probe direction from a finite interior point.
  double a = std::isfinite(lo) ? lo : (std::isfinite(hi) ? hi - 1.0 : -1.0);
  double b = std::isfinite(hi) ? hi : (std::isfinite(lo) ? lo + 1.0 : 1.0);
  const bool increasing = scalar_derivative(f, 0.5 * (a + b)) > 0.0;
  auto below = [&](double v) { return increasing ? f.value(v) < target : f.value(v) > target; };

  for (int k = 0; k < 64 && !std::isfinite(lo) && !below(a); ++k) a -= std::ldexp(1.0, k);
  for (int k = 0; k < 64 && !std::isfinite(hi) && below(b); ++k) b += std::ldexp(1.0, k);
  if (!below(a) || below(b)) throw Error(ErrorKind::DomainViolation, "scalar inverse: target not bracketed", target);

  // Newton steps safeguarded by bisection on [a, b].
  double v = 0.5 * (a + b);
  for (int it = 0; it < 200; ++it) {
    const double r = f.value(v) - target;
    if (r == 0.0) return v;
    if ((r < 0.0) == increasing) a = v; else b = v;
    const double d = scalar_derivative(f, v);
    double next = v - r / d;
    if (!(next > a && next < b) || !std::isfinite(next)) next = 0.5 * (a + b);
    if (std::abs(next - v) <= 4.0 * kEpsilon * std::max(1.0, std::abs(v)) || b - a <= kEpsilon * std::max(1.0, std::abs(v))) {
      return next;
    }
    v = next;
  }
  return v;
}

Chart psi_from_scalar_solution(const Chart& phi, const ScalarMap& f, const Box& domain) {
  if (phi.dim != 1 || domain.dim() != 1) throw Error(ErrorKind::DimensionMismatch, "scalar solution charts are 1-d");
  if (!f.value) throw Error(ErrorKind::InvalidArgument, "scalar map has no value function");

  const double lo = domain.lower()(0);
  const double hi = domain.upper()(0);
  const double a = std::isfinite(lo) ? lo : (std::isfinite(hi) ? hi - 100.0 : -50.0);
  const double b = std::isfinite(hi) ? hi : a + 100.0;
  constexpr int kProbe = 2001;
  int sign = 0;
  for (int k = 1; k < kProbe - 1; ++k) {
    const double v = a + (b - a) * k / (kProbe - 1);
    const double d = scalar_derivative(f, v);
    const int s = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
    if (s == 0 || (sign != 0 && s != sign)) {
      throw Error(ErrorKind::NonMonotone, "derivative changes sign or vanishes", v);
    }
    sign = s;
  }

  Chart c;
  c.name = "scalar-solution(" + phi.name + ")";
  c.dim = 1;
  auto phi_domain = phi.domain;
  auto fv = f.value;
  c.domain = Domain(domain, [phi_domain, fv](const Vector& v) {
    return phi_domain.contains(Vector::Constant(1, fv(v(0))));
  });
  auto phi_fwd = phi.forward;
  c.forward = [phi_fwd, fv](const Vector& v) { return phi_fwd(Vector::Constant(1, fv(v(0)))); };
  auto phi_inv = phi.inverse;
  c.inverse = [phi_inv, f, lo, hi](const Vector& s) {
    const double target = phi_inv(s)(0);
    return Vector::Constant(1, invert_monotone(f, target, lo, hi));
  };
  c.jac_forward = [phi, f](const Vector& v) {
    const Vector fvv = Vector::Constant(1, f.value(v(0)));
    return Matrix(chart_jacobian(phi, fvv) * scalar_derivative(f, v(0)));
  };
  return c;
}

Vector chart_forward(const Chart& c, const Vector& p) {
  if (p.size() != c.dim) throw Error(ErrorKind::ChartDomainMismatch, c.name + ": dimension mismatch");
  if (!c.domain.contains(p)) throw Error(ErrorKind::ChartDomainMismatch, c.name + ": point outside chart domain");
  return c.forward(p);
}

Matrix chart_jacobian(const Chart& c, const Vector& p) {
  if (p.size() != c.dim) throw Error(ErrorKind::ChartDomainMismatch, c.name + ": dimension mismatch");
  if (!c.domain.contains(p)) throw Error(ErrorKind::ChartDomainMismatch, c.name + ": point outside chart domain");
  if (c.jac_forward) return c.jac_forward(p);
  return finite_difference_jacobian(c.forward, p, c.domain);
}

namespace {

bool box_contains_box(const Box& outer, const Box& inner) {
  return (outer.lower().array() <= inner.lower().array()).all() &&
         (outer.upper().array() >= inner.upper().array()).all();
}

}  // namespace

ImplicitProblem transformed_problem(const ImplicitProblem& p, const ChartPair& charts) {
  const Chart& phi = charts.phi;
  const Chart& psi = charts.psi;
  if (phi.dim != p.m() || psi.dim != p.n()) throw Error(ErrorKind::ChartDomainMismatch, "chart dimensions do not match");
  if (!box_contains_box(phi.domain.box(), p.domain_x().box()) || !box_contains_box(psi.domain.box(), p.domain_y().box())) {
    throw Error(ErrorKind::ChartDomainMismatch, "chart domains must contain the problem domains");
  }
  if (!phi.domain.contains(p.seed_x()) || !psi.domain.contains(p.seed_y())) {
    throw Error(ErrorKind::ChartDomainMismatch, "seed outside chart domains");
  }

  const auto base = std::make_shared<const ImplicitProblem>(p);
  ImplicitProblem::Definition def;
  def.name = p.name();
  def.params = p.params();
  def.m = p.m();
  def.n = p.n();
  def.l = p.l();
  def.residual = [base, phi, psi](const Vector& xt, const Vector& yt) {
    return base->definition().residual(phi.inverse(xt), psi.inverse(yt));
  };
  def.jac_x = [base, phi, psi](const Vector& xt, const Vector& yt) {
    const Vector x = phi.inverse(xt);
    const Vector y = psi.inverse(yt);
    return Matrix(right_solve(jac_x(*base, x, y), chart_jacobian(phi, x)));
  };
  def.jac_y = [base, phi, psi](const Vector& xt, const Vector& yt) {
    const Vector x = phi.inverse(xt);
    const Vector y = psi.inverse(yt);
    return Matrix(right_solve(jac_y(*base, x, y), chart_jacobian(psi, y)));
  };
  def.domain_x = Domain(Box::unbounded(p.m()), [base, phi](const Vector& xt) {
    return base->domain_x().contains(phi.inverse(xt));
  });
  def.domain_y = Domain(Box::unbounded(p.n()), [base, psi](const Vector& yt) {
    return base->domain_y().contains(psi.inverse(yt));
  });
  def.seed_x = phi.forward(p.seed_x());
  def.seed_y = psi.forward(p.seed_y());
  return ImplicitProblem(std::move(def));
}

RoundtripReport chart_roundtrip_check(const Chart& c, const std::vector<Vector>& samples) {
  RoundtripReport report;
  const Matrix eye = Matrix::Identity(c.dim, c.dim);
  const Domain image = Domain::whole(c.dim);
  auto record_failure = [&](const Vector& p) {
    if (report.failures++ == 0) report.worst_point = p;
  };
  for (const Vector& p : samples) {
    ++report.samples;
    if (!c.domain.contains(p)) {
      record_failure(p);
      continue;
    }
    const Vector q = c.forward(p);
    const double rt = (c.inverse(q) - p).norm() / std::max(1.0, p.norm());
    report.max_roundtrip_error = std::max(report.max_roundtrip_error, rt);

    const Matrix d = chart_jacobian(c, p);
    const double smin = smallest_singular_value(d);
    report.min_sigma = std::min(report.min_sigma, smin);
    double jerr = kInf;
    if (smin > rank_tolerance(d.rows(), d.cols(), spectral_norm(d))) {
      const Matrix dinv = finite_difference_jacobian(c.inverse, q, image);
      jerr = spectral_norm(d * dinv - eye);
    }
    report.max_jacobian_error = std::max(report.max_jacobian_error, jerr);
    if (!(rt <= kRoundtripTol) || !(jerr <= kChartJacobianTol)) record_failure(p);
  }
  report.passed = report.failures == 0;
  return report;
}

}  // namespace glift
