// Copyright 2026 The trsketch Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "trsketch/min_norm_qp.h"

#include <cmath>
#include <limits>
#include <vector>

#include "Eigen/Cholesky"
#include "Eigen/QR"
#include "fmt/format.h"
#include "trsketch/errors.h"

namespace trsketch {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMachineEps = std::numeric_limits<double>::epsilon();

// Working factorization of the active set: J^T N_active = [R; 0] with R upper
// triangular, J = L^{-T} Q where G = L L^T.
class ActiveSetFactorization {
 public:
  ActiveSetFactorization(Eigen::MatrixXd j, int n)
      : j_(std::move(j)), r_(Eigen::MatrixXd::Zero(n, n)), n_(n) {}

  int size() const { return iq_; }
  const Eigen::MatrixXd& j() const { return j_; }

  Eigen::VectorXd ComputeD(const Eigen::VectorXd& normal) const {
    return j_.transpose() * normal;
  }

  // Primal step direction z = J2 d2.
  Eigen::VectorXd PrimalDirection(const Eigen::VectorXd& d) const {
    return j_.rightCols(n_ - iq_) * d.tail(n_ - iq_);
  }

  // Dual step direction r = R^{-1} d1.
  Eigen::VectorXd DualDirection(const Eigen::VectorXd& d) const {
    Eigen::VectorXd r(iq_);
    for (int i = iq_ - 1; i >= 0; --i) {
      double sum = d(i);
      for (int k = i + 1; k < iq_; ++k) sum -= r_(i, k) * r(k);
      r(i) = sum / r_(i, i);
    }
    return r;
  }

  // Appends the constraint whose transformed normal is `d`; false when it is
  // numerically dependent on the active set.
  bool Add(Eigen::VectorXd d) {
    for (int j = n_ - 1; j >= iq_ + 1; --j) {
      double cc = d(j - 1);
      double ss = d(j);
      const double h = std::hypot(cc, ss);
      if (h < kMachineEps) continue;
      d(j) = 0.0;
      ss /= h;
      cc /= h;
      if (cc < 0.0) {
        cc = -cc;
        ss = -ss;
        d(j - 1) = -h;
      } else {
        d(j - 1) = h;
      }
      const double xny = ss / (1.0 + cc);
      for (int k = 0; k < n_; ++k) {
        const double t1 = j_(k, j - 1);
        const double t2 = j_(k, j);
        j_(k, j - 1) = t1 * cc + t2 * ss;
        j_(k, j) = xny * (t1 + j_(k, j - 1)) - t2;
      }
    }
    ++iq_;
    for (int i = 0; i < iq_; ++i) r_(i, iq_ - 1) = d(i);
    if (std::abs(d(iq_ - 1)) <= kMachineEps * r_norm_) return false;
    r_norm_ = std::max(r_norm_, std::abs(d(iq_ - 1)));
    return true;
  }

  // Removes active position `position` and restores triangularity.
  void Remove(int position) {
    for (int i = position; i < iq_ - 1; ++i) r_.col(i) = r_.col(i + 1);
    r_.col(iq_ - 1).setZero();
    --iq_;
    if (iq_ == 0) return;
    for (int j = position; j < iq_; ++j) {
      double cc = r_(j, j);
      double ss = r_(j + 1, j);
      const double h = std::hypot(cc, ss);
      if (h < kMachineEps) continue;
      cc /= h;
      ss /= h;
      r_(j + 1, j) = 0.0;
      if (cc < 0.0) {
        r_(j, j) = -h;
        cc = -cc;
        ss = -ss;
      } else {
        r_(j, j) = h;
      }
      const double xny = ss / (1.0 + cc);
      for (int k = j + 1; k < iq_; ++k) {
        const double t1 = r_(j, k);
        const double t2 = r_(j + 1, k);
        r_(j, k) = t1 * cc + t2 * ss;
        r_(j + 1, k) = xny * (t1 + r_(j, k)) - t2;
      }
      for (int k = 0; k < n_; ++k) {
        const double t1 = j_(k, j);
        const double t2 = j_(k, j + 1);
        j_(k, j) = t1 * cc + t2 * ss;
        j_(k, j + 1) = xny * (j_(k, j) + t1) - t2;
      }
    }
  }

 private:
  Eigen::MatrixXd j_;
  Eigen::MatrixXd r_;
  int n_;
  int iq_ = 0;
  double r_norm_ = 1.0;
};

}  // namespace

InequalityQpResult SolveInequalityQp(const Eigen::MatrixXd& hessian,
                                     const Eigen::VectorXd& gradient,
                                     const Eigen::MatrixXd& constraints,
                                     const Eigen::VectorXd& rhs) {
  const int n = static_cast<int>(gradient.size());
  const int m = static_cast<int>(constraints.rows());
  if (hessian.rows() != n || hessian.cols() != n ||
      (m > 0 && constraints.cols() != n) || rhs.size() != m) {
    throw Error(ErrorCode::kDimensionMismatch, "inconsistent QP dimensions");
  }
  InequalityQpResult result;
  result.multipliers = Eigen::VectorXd::Zero(m);

  Eigen::LLT<Eigen::MatrixXd> llt(hessian);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::kInvalidInput, "QP Hessian is not positive definite");
  }
  const Eigen::MatrixXd lower = llt.matrixL();
  Eigen::MatrixXd j = lower.transpose().triangularView<Eigen::Upper>().solve(
      Eigen::MatrixXd::Identity(n, n));
  ActiveSetFactorization factor(std::move(j), n);

  Eigen::VectorXd x = -llt.solve(gradient);
  double objective = 0.5 * gradient.dot(x);

  // Row i reads n_i^T x + h_i >= 0 with n_i = -C_i^T.
  std::vector<double> row_norms(m);
  double scale = 1.0;
  for (int i = 0; i < m; ++i) {
    row_norms[i] = constraints.row(i).norm();
    scale = std::max(scale, std::abs(rhs(i)));
    if (row_norms[i] == 0.0 && rhs(i) < 0.0) {
      result.x = x;
      return result;
    }
  }
  const double feasibility_tol = 1e-13 * scale;

  std::vector<int> active;       // constraint index per active position
  std::vector<double> duals;     // multiplier per active position (+1 slot)
  std::vector<bool> is_active(m, false);
  std::vector<bool> excluded(m, false);

  auto slack = [&](int i) { return rhs(i) - constraints.row(i).dot(x); };

  const int max_iterations = 50 * (n + m) + 100;
  int iterations = 0;
  while (true) {
    if (++iterations > max_iterations) break;
    // Step 1: most violated inactive constraint.
    int p = -1;
    double worst = -feasibility_tol;
    for (int i = 0; i < m; ++i) {
      if (is_active[i] || excluded[i] || row_norms[i] == 0.0) continue;
      const double s = slack(i) / row_norms[i];
      if (s < worst) {
        worst = s;
        p = i;
      }
    }
    if (p < 0) {
      result.feasible = true;
      break;
    }
    const Eigen::VectorXd normal = -constraints.row(p).transpose();
    double u_p = 0.0;
    double s_p = slack(p);
    bool added = false;
    while (!added) {
      if (++iterations > max_iterations) break;
      const Eigen::VectorXd d = factor.ComputeD(normal);
      const Eigen::VectorXd z = factor.PrimalDirection(d);
      const Eigen::VectorXd r = factor.DualDirection(d);
      // Partial (dual) step length.
      double t1 = kInf;
      int drop = -1;
      for (int k = 0; k < factor.size(); ++k) {
        if (r(k) > 0.0 && duals[k] / r(k) < t1) {
          t1 = duals[k] / r(k);
          drop = k;
        }
      }
      // Full step length.
      const double zz = z.squaredNorm();
      const double t2 = zz > kMachineEps ? -s_p / z.dot(normal) : kInf;
      const double t = std::min(t1, t2);
      if (t >= kInf) {
        result.x = x;
        result.iterations = iterations;
        return result;  // infeasible
      }
      if (t2 >= kInf) {
        for (int k = 0; k < factor.size(); ++k) duals[k] -= t * r(k);
        u_p += t;
        is_active[active[drop]] = false;
        active.erase(active.begin() + drop);
        duals.erase(duals.begin() + drop);
        factor.Remove(drop);
        continue;
      }
      x += t * z;
      objective += t * z.dot(normal) * (0.5 * t + u_p);
      for (int k = 0; k < factor.size(); ++k) duals[k] -= t * r(k);
      u_p += t;
      if (t == t2) {
        if (!factor.Add(d)) {
          // Dependent constraint: skip it for now (it is satisfied to
          // rounding by construction of the full step).
          factor.Remove(factor.size() - 1);
          excluded[p] = true;
          break;
        }
        active.push_back(p);
        duals.push_back(u_p);
        is_active[p] = true;
        added = true;
      } else {
        is_active[active[drop]] = false;
        active.erase(active.begin() + drop);
        duals.erase(duals.begin() + drop);
        factor.Remove(drop);
        s_p = slack(p);
      }
    }
  }
  result.iterations = iterations;
  result.x = x;
  result.objective = objective;
  for (size_t k = 0; k < active.size(); ++k) {
    result.multipliers(active[k]) = duals[k];
  }
  if (result.feasible) {
    // Excluded rows were dependent at the time; confirm they hold.
    for (int i = 0; i < m; ++i) {
      if (excluded[i] && row_norms[i] > 0.0 &&
          slack(i) / row_norms[i] < -1e-9 * scale) {
        result.feasible = false;
      }
    }
  }
  return result;
}

InequalityQpResult MinNormPoint(const Eigen::MatrixXd& constraints,
                                const Eigen::VectorXd& rhs) {
  const int n = static_cast<int>(constraints.cols());
  const int m = static_cast<int>(constraints.rows());
  if (m == 0 || m >= n) {
    return SolveInequalityQp(Eigen::MatrixXd::Identity(n, n),
                             Eigen::VectorXd::Zero(n), constraints, rhs);
  }
  // The minimizer lies in range(A^T); solve there.
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(constraints.transpose());
  const Eigen::MatrixXd basis = qr.householderQ() * Eigen::MatrixXd::Identity(n, m);
  InequalityQpResult result =
      SolveInequalityQp(Eigen::MatrixXd::Identity(m, m), Eigen::VectorXd::Zero(m),
                        constraints * basis, rhs);
  if (result.x.size() == m) result.x = basis * result.x;
  return result;
}

}  // namespace trsketch
