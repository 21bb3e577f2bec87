#pragma once

#include <functional>
#include <map>
#include <string>

#include "glift/types.hpp"

namespace glift {

/// Product of open intervals (lower_i, upper_i); bounds may be infinite.
class Box {
 public:
  Box() = default;
  Box(Vector lower, Vector upper);

  static Box unbounded(Eigen::Index dim);

  Eigen::Index dim() const { return lower_.size(); }
  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }
  bool is_unbounded() const;

  /// Strict membership: points closer than `margin` to a finite face count as outside.
  bool contains(const Vector& p, double margin = kBoundaryMargin) const;
  /// Distance to the nearest finite face (infinity for the whole space).
  double distance_to_boundary(const Vector& p) const;

 private:
  Vector lower_;
  Vector upper_;
};

/// Open set given by a box intersected with an optional membership predicate.
class Domain {
 public:
  using Predicate = std::function<bool(const Vector&)>;

  Domain() = default;
  explicit Domain(Box box, Predicate predicate = {});

  static Domain whole(Eigen::Index dim) { return Domain(Box::unbounded(dim)); }

  Eigen::Index dim() const { return box_.dim(); }
  const Box& box() const { return box_; }
  bool has_predicate() const { return static_cast<bool>(predicate_); }
  bool contains(const Vector& p) const;

 private:
  Box box_;
  Predicate predicate_;
};

/// Central differences with step sqrt(eps) * max(1, |p_i|). Near the boundary
/// of `domain` one-sided differences are used, then the step is halved; if no
/// admissible stencil exists the call throws DomainViolation.
Matrix finite_difference_jacobian(const std::function<Vector(const Vector&)>& fn, const Vector& point,
                                  const Domain& domain);

/// F(x, y) = 0 with F: domain_x x domain_y -> R^l, together with a seed zero.
class ImplicitProblem {
 public:
  using ResidualFn = std::function<Vector(const Vector& x, const Vector& y)>;
  using JacobianFn = std::function<Matrix(const Vector& x, const Vector& y)>;

  struct Definition {
    std::string name;
    std::map<std::string, double> params;
    Eigen::Index m = 0;
    Eigen::Index n = 0;
    Eigen::Index l = 0;
    ResidualFn residual;
    JacobianFn jac_x;  // optional
    JacobianFn jac_y;  // optional
    Domain domain_x;
    Domain domain_y;
    Vector seed_x;
    Vector seed_y;
  };

  explicit ImplicitProblem(Definition def);

  const std::string& name() const { return def_.name; }
  const std::map<std::string, double>& params() const { return def_.params; }
  Eigen::Index m() const { return def_.m; }
  Eigen::Index n() const { return def_.n; }
  Eigen::Index l() const { return def_.l; }
  const Domain& domain_x() const { return def_.domain_x; }
  const Domain& domain_y() const { return def_.domain_y; }
  const Vector& seed_x() const { return def_.seed_x; }
  const Vector& seed_y() const { return def_.seed_y; }
  bool has_analytic_jac_x() const { return static_cast<bool>(def_.jac_x); }
  bool has_analytic_jac_y() const { return static_cast<bool>(def_.jac_y); }
  const Definition& definition() const { return def_; }

 private:
  Definition def_;
};

Vector residual(const ImplicitProblem& p, const Vector& x, const Vector& y);
Matrix jac_x(const ImplicitProblem& p, const Vector& x, const Vector& y);
Matrix jac_y(const ImplicitProblem& p, const Vector& x, const Vector& y);

/// Finite-difference Jacobians regardless of whether analytic ones exist.
Matrix numeric_jac_x(const ImplicitProblem& p, const Vector& x, const Vector& y);
Matrix numeric_jac_y(const ImplicitProblem& p, const Vector& x, const Vector& y);

/// Throws SeedNotOnZ or SeedRankDeficient; DomainViolation if the seed is not interior.
void validate_seed(const ImplicitProblem& p);

}  // namespace glift
