#include "cntfield/krylov.hpp"

#include <cmath>
#include <string>

#include "cntfield/errors.hpp"

namespace cntfield {

namespace {

// Solution of the k×k upper triangular system, combined with the basis.
Vector combine(const Eigen::MatrixXd& basis, const Eigen::MatrixXd& hess, const Vector& g, int k) {
  if (k == 0) return Vector::Zero(basis.rows());
  const Vector y = hess.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
  return basis.leftCols(k) * y;
}

}  // namespace

GmresResult gmres(const LinearOperator& op, const Vector& rhs, const GmresOptions& options) {
  if (!op.apply) throw InvalidInput("gmres: operator has no apply");
  if (rhs.size() != op.dimension)
    throw InvalidInput("gmres: rhs has " + std::to_string(rhs.size()) + " entries, operator dimension is " +
                       std::to_string(op.dimension));
  if (!(options.tol > 0)) throw InvalidInput("gmres: tolerance must be positive");
  if (options.maxit < 1) throw InvalidInput("gmres: maxit must be at least 1");

  GmresResult result;
  auto& report = result.report;
  const Index n = op.dimension;
  const double beta = rhs.norm();
  if (beta == 0.0) {
    result.solution = Vector::Zero(n);
    report.residual_history = {0.0};
    report.converged = true;
    return result;
  }

  const int maxit = static_cast<int>(std::min<Index>(options.maxit, n));
  Eigen::MatrixXd basis(n, maxit + 1);
  Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(maxit + 1, maxit);
  Vector cs = Vector::Zero(maxit), sn = Vector::Zero(maxit);
  Vector g = Vector::Zero(maxit + 1);
  basis.col(0) = rhs / beta;
  g[0] = beta;
  report.residual_history.push_back(1.0);

  auto true_residual = [&](const Vector& x) { return (rhs - op.apply(x)).norm() / beta; };

  Vector best = Vector::Zero(n);
  double best_residual = 1.0;
  int k = 0;
  while (k < maxit) {
    Vector v = op.apply(basis.col(k));
    if (v.size() != n) throw InvalidInput("gmres: operator changed the dimension");
    const double vnorm = v.norm();
    for (int j = 0; j <= k; ++j) {
      hess(j, k) = basis.col(j).dot(v);
      v -= hess(j, k) * basis.col(j);
    }
    // Second pass when cancellation was severe.
    if (v.norm() < 0.7 * vnorm) {
      for (int j = 0; j <= k; ++j) {
        const double c = basis.col(j).dot(v);
        hess(j, k) += c;
        v -= c * basis.col(j);
      }
    }
    const double h_next = v.norm();
    hess(k + 1, k) = h_next;
    for (int j = 0; j < k; ++j) {
      const double t = cs[j] * hess(j, k) + sn[j] * hess(j + 1, k);
      hess(j + 1, k) = -sn[j] * hess(j, k) + cs[j] * hess(j + 1, k);
      hess(j, k) = t;
    }
    const double r = std::hypot(hess(k, k), hess(k + 1, k));
    cs[k] = r == 0.0 ? 1.0 : hess(k, k) / r;
    sn[k] = r == 0.0 ? 0.0 : hess(k + 1, k) / r;
    hess(k, k) = r;
    hess(k + 1, k) = 0.0;
    g[k + 1] = -sn[k] * g[k];
    g[k] = cs[k] * g[k];
    ++k;
    const double estimate = std::abs(g[k]) / beta;
    const bool breakdown = h_next <= 1e-14 * vnorm || r == 0.0;
    if (!breakdown) basis.col(k) = v / h_next;

    report.residual_history.push_back(estimate);
    if (estimate <= options.tol || breakdown || k == maxit) {
      const Vector x = combine(basis, hess, g, k);
      const double res = true_residual(x);
      if (res < best_residual) {
        best_residual = res;
        best = x;
      }
      if (res <= options.tol) {
        report.converged = true;
        break;
      }
      if (breakdown) break;
    }
  }
  report.iterations = k;
  report.final_residual = best_residual;
  result.solution = std::move(best);
  return result;
}

}  // namespace cntfield
