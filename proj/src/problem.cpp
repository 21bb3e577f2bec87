#include "glift/problem.hpp"

#include <cmath>
#include <utility>

#include "glift/error.hpp"
#include "glift/linalg.hpp"

namespace glift {

Box::Box(Vector lower, Vector upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size()) throw Error(ErrorKind::DimensionMismatch, "Box bounds differ in size");
  for (Eigen::Index i = 0; i < lower_.size(); ++i) {
    if (std::isnan(lower_(i)) || std::isnan(upper_(i)) || !(lower_(i) < upper_(i))) {
      throw Error(ErrorKind::InvalidArgument, "Box requires lower < upper componentwise");
    }
  }
}

Box Box::unbounded(Eigen::Index dim) {
  return Box(Vector::Constant(dim, -kInf), Vector::Constant(dim, kInf));
}

bool Box::is_unbounded() const {
  return (lower_.array() == -kInf).all() && (upper_.array() == kInf).all();
}

bool Box::contains(const Vector& p, double margin) const {
  if (p.size() != dim() || !p.allFinite()) return false;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (!(p(i) > lower_(i) + margin) || !(p(i) < upper_(i) - margin)) return false;
  }
  return true;
}

double Box::distance_to_boundary(const Vector& p) const {
  double d = kInf;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    d = std::min({d, p(i) - lower_(i), upper_(i) - p(i)});
  }
  return d;
}

Domain::Domain(Box box, Predicate predicate) : box_(std::move(box)), predicate_(std::move(predicate)) {}

bool Domain::contains(const Vector& p) const {
  if (!box_.contains(p)) return false;
  return !predicate_ || predicate_(p);
}

Matrix finite_difference_jacobian(const std::function<Vector(const Vector&)>& fn, const Vector& point,
                                  const Domain& domain) {
  if (!domain.contains(point)) throw Error(ErrorKind::DomainViolation, "Jacobian requested outside the domain");
  const double root_eps = std::sqrt(kEpsilon);
  Vector center_value;
  auto center = [&]() -> const Vector& {
    if (center_value.size() == 0) center_value = fn(point);
    return center_value;
  };

  Matrix jac;
  for (Eigen::Index i = 0; i < point.size(); ++i) {
    double h = root_eps * std::max(1.0, std::abs(point(i)));
    Vector column;
    for (int attempt = 0; attempt < 40 && column.size() == 0; ++attempt, h *= 0.5) {
      Vector plus = point;
      Vector minus = point;
      plus(i) += h;
      minus(i) -= h;
      const bool has_plus = domain.contains(plus);
      const bool has_minus = domain.contains(minus);
      if (has_plus && has_minus) {
        column = (fn(plus) - fn(minus)) / (plus(i) - minus(i));
      } else if (has_plus) {
        column = (fn(plus) - center()) / (plus(i) - point(i));
      } else if (has_minus) {
        column = (center() - fn(minus)) / (point(i) - minus(i));
      }
    }
    if (column.size() == 0) {
      throw Error(ErrorKind::DomainViolation, "no admissible finite-difference stencil", double(i));
    }
    if (jac.size() == 0) jac.resize(column.size(), point.size());
    jac.col(i) = column;
  }
  if (point.size() == 0) jac.resize(center().size(), 0);
  return jac;
}

ImplicitProblem::ImplicitProblem(Definition def) : def_(std::move(def)) {
  if (def_.m < 1 || def_.n < 1 || def_.l < 1) throw Error(ErrorKind::InvalidArgument, "problem dimensions must be positive");
  if (def_.l < def_.n) throw Error(ErrorKind::DimensionMismatch, "need l >= n for a left inverse to exist");
  if (!def_.residual) throw Error(ErrorKind::InvalidArgument, "problem has no residual function");
  if (def_.domain_x.dim() == 0) def_.domain_x = Domain::whole(def_.m);
  if (def_.domain_y.dim() == 0) def_.domain_y = Domain::whole(def_.n);
  if (def_.domain_x.dim() != def_.m || def_.domain_y.dim() != def_.n) {
    throw Error(ErrorKind::DimensionMismatch, "domain dimensions do not match the problem");
  }
  if (def_.seed_x.size() != def_.m || def_.seed_y.size() != def_.n) {
    throw Error(ErrorKind::DimensionMismatch, "seed dimensions do not match the problem");
  }
}

namespace {

void require_point(const ImplicitProblem& p, const Vector& x, const Vector& y) {
  if (x.size() != p.m() || y.size() != p.n()) throw Error(ErrorKind::DimensionMismatch, "point has wrong dimensions");
  if (!p.domain_x().contains(x)) throw Error(ErrorKind::DomainViolation, "x outside domain_x");
  if (!p.domain_y().contains(y)) throw Error(ErrorKind::DomainViolation, "y outside domain_y");
}

Matrix checked(Matrix j, Eigen::Index rows, Eigen::Index cols, const char* who) {
  if (j.rows() != rows || j.cols() != cols) throw Error(ErrorKind::DimensionMismatch, std::string(who) + " has wrong shape");
  if (!j.allFinite()) throw Error(ErrorKind::NonFinite, std::string(who) + " is not finite");
  return j;
}

}  // namespace

Vector residual(const ImplicitProblem& p, const Vector& x, const Vector& y) {
  require_point(p, x, y);
  Vector r = p.definition().residual(x, y);
  if (r.size() != p.l()) throw Error(ErrorKind::DimensionMismatch, "residual has wrong length");
  if (!r.allFinite()) throw Error(ErrorKind::NonFinite, "residual is not finite");
  return r;
}

Matrix numeric_jac_x(const ImplicitProblem& p, const Vector& x, const Vector& y) {
  require_point(p, x, y);
  const auto& fn = p.definition().residual;
  return checked(finite_difference_jacobian([&](const Vector& xs) { return fn(xs, y); }, x, p.domain_x()), p.l(),
                 p.m(), "D_xF");
}

Matrix numeric_jac_y(const ImplicitProblem& p, const Vector& x, const Vector& y) {
  require_point(p, x, y);
  const auto& fn = p.definition().residual;
  return checked(finite_difference_jacobian([&](const Vector& ys) { return fn(x, ys); }, y, p.domain_y()), p.l(),
                 p.n(), "D_yF");
}

Matrix jac_x(const ImplicitProblem& p, const Vector& x, const Vector& y) {
  if (!p.has_analytic_jac_x()) return numeric_jac_x(p, x, y);
  require_point(p, x, y);
  return checked(p.definition().jac_x(x, y), p.l(), p.m(), "D_xF");
}

Matrix jac_y(const ImplicitProblem& p, const Vector& x, const Vector& y) {
  if (!p.has_analytic_jac_y()) return numeric_jac_y(p, x, y);
  require_point(p, x, y);
  return checked(p.definition().jac_y(x, y), p.l(), p.n(), "D_yF");
}

void validate_seed(const ImplicitProblem& p) {
  const Vector r = residual(p, p.seed_x(), p.seed_y());
  if (r.norm() > kSeedTol) throw Error(ErrorKind::SeedNotOnZ, "|F(seed)| = " + std::to_string(r.norm()), r.norm());
  const Matrix jy = jac_y(p, p.seed_x(), p.seed_y());
  const double smax = spectral_norm(jy);
  const double smin = smallest_singular_value(jy);
  if (!(smin > rank_tolerance(jy.rows(), jy.cols(), smax))) {
    throw Error(ErrorKind::SeedRankDeficient, "D_yF(seed) lacks full column rank", smin);
  }
}

}  // namespace glift
