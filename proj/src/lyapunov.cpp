// Copyright 2026 The Flyer MRAC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "flyer/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

namespace flyer {
namespace {

constexpr double kConditionWarn = 1e12;

std::string FormatEigenvalue(const std::complex<double>& l) {
  std::ostringstream os;
  os.precision(6);
  os << l.real();
  if (l.imag() != 0.0) os << (l.imag() > 0 ? " + " : " - ") << std::abs(l.imag()) << "i";
  return os.str();
}

}  // namespace

SystemMatrices AssembleAB(const GainSet& gains) {
  const double inv_m = 1.0 / gains.mass;
  SystemMatrices s;
  s.a.block<3, 3>(0, 3).setIdentity();
  s.a.block<3, 3>(3, 6).setIdentity();
  s.a.block<3, 3>(6, 0) = (-inv_m * gains.ki).asDiagonal();
  s.a.block<3, 3>(6, 3) = (-inv_m * gains.kp).asDiagonal();
  s.a.block<3, 3>(6, 6) = (-inv_m * gains.kd).asDiagonal();
  s.b.block<3, 3>(6, 0) = -inv_m * Mat3::Identity();
  return s;
}

HurwitzReport IsHurwitz(const Mat9& a) {
  if (!a.allFinite()) throw DomainError("IsHurwitz: A is not finite");
  Eigen::EigenSolver<Mat9> solver(a, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigenvalue solver did not converge");
  }
  HurwitzReport report;
  const auto& ev = solver.eigenvalues();
  report.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  std::sort(report.eigenvalues.begin(), report.eigenvalues.end(),
            [](const auto& l, const auto& r) {
              return l.real() != r.real() ? l.real() > r.real()
                                          : l.imag() > r.imag();
            });
  report.abscissa = report.eigenvalues.front().real();
  report.hurwitz = report.abscissa < -kHurwitzMargin;
  return report;
}

Mat9 BlockWeightedQ(const Eigen::Vector3d& weights) {
  Mat9 q = Mat9::Zero();
  for (int b = 0; b < 3; ++b) {
    q.block<3, 3>(3 * b, 3 * b) = weights[b] * Mat3::Identity();
  }
  return q;
}

LyapunovCert SolveLyapunov(const Mat9& a, const Mat9& q) {
  if (!q.allFinite() || (q - q.transpose()).norm() > 1e-12 * q.norm()) {
    throw CertificationError("Q must be finite and symmetric");
  }
  Eigen::LLT<Mat9> q_chol(q);
  if (q_chol.info() != Eigen::Success) {
    throw CertificationError("Q is not positive definite");
  }
  const HurwitzReport hurwitz = IsHurwitz(a);
  if (!hurwitz.hurwitz) {
    const auto& worst = hurwitz.eigenvalues.front();
    const bool zero = std::abs(worst) <= kHurwitzMargin;
    throw CertificationError(
        std::string("A is not Hurwitz: ") +
        (zero ? "zero eigenvalue " : "eigenvalue ") + FormatEigenvalue(worst) +
        " has real part >= " + FormatEigenvalue(-kHurwitzMargin));
  }

  // Column-major vec: vec(A^T P) = (I (x) A^T) vec(P),
  // vec(P A) = (A^T (x) I) vec(P).
  constexpr int n = 9;
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n * n, n * n);
  const Mat9 at = a.transpose();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      // Block (i, j) of I (x) A^T is delta_ij A^T; of A^T (x) I is at(i,j) I.
      if (i == j) k.block<n, n>(n * i, n * j) += at;
      k.block<n, n>(n * i, n * j).diagonal().array() += at(i, j);
    }
  }
  Eigen::VectorXd rhs(n * n);
  for (int c = 0; c < n; ++c) rhs.segment<n>(n * c) = -q.col(c);

  const Eigen::VectorXd vec_p = k.fullPivLu().solve(rhs);

  LyapunovCert cert;
  cert.q = q;
  for (int c = 0; c < n; ++c) cert.p.col(c) = vec_p.segment<n>(n * c);
  cert.p = 0.5 * (cert.p + cert.p.transpose()).eval();
  cert.residual = (at * cert.p + cert.p * a + q).norm();
  cert.abscissa = hurwitz.abscissa;

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(k);
  const auto& sv = svd.singularValues();
  cert.condition = sv(0) / sv(sv.size() - 1);
  if (cert.condition > kConditionWarn) {
    cert.warning = "Kronecker system is ill-conditioned (condition " +
                   std::to_string(cert.condition) + ")";
  }

  Eigen::SelfAdjointEigenSolver<Mat9> q_eig(q, Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Mat9> p_eig(cert.p, Eigen::EigenvaluesOnly);
  cert.lambda_min_q = q_eig.eigenvalues()(0);
  cert.lambda_min_p = p_eig.eigenvalues()(0);
  if (!(cert.lambda_min_p > 0.0)) {
    throw CertificationError("solved P is not positive definite");
  }
  return cert;
}

double LyapunovValue(const Vec9& z_tilde, const Eigen::MatrixXd& w_tilde,
                     const Mat9& p, double gamma) {
  return z_tilde.dot(p * z_tilde) + w_tilde.squaredNorm() / gamma;
}

double LyapunovRate(const Vec9& z_tilde, const Mat9& q) {
  return -z_tilde.dot(q * z_tilde);
}

}  // namespace flyer
