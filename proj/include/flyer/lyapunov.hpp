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

// Closed-loop error-state matrices, Hurwitz certification, the continuous
// Lyapunov equation A^T P + P A = -Q, and the runtime monitors V and V-dot.

#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "flyer/common.hpp"
#include "flyer/gains.hpp"

namespace flyer {

// z' = A z + B (d - f_a) with z = [xi; xi'; xi''] (xi = integral of r_e).
//   A = [ 0      I      0    ]      B = [ 0       ]
//       [ 0      0      I    ]          [ 0       ]
//       [-Ki/m  -Kp/m  -Kd/m ]          [ -(1/m)I ]
struct SystemMatrices {
  Mat9 a = Mat9::Zero();
  Mat93 b = Mat93::Zero();
};

SystemMatrices AssembleAB(const GainSet& gains);

// Eigenvalues with real part >= -kHurwitzMargin count as unstable.
inline constexpr double kHurwitzMargin = 1e-9;

struct HurwitzReport {
  bool hurwitz = false;
  double abscissa = 0.0;  // max real part
  std::vector<std::complex<double>> eigenvalues;  // sorted by real part, desc
};

// Throws NumericalError if the eigen-solver does not converge.
HurwitzReport IsHurwitz(const Mat9& a);

struct LyapunovCert {
  Mat9 q = Mat9::Identity();
  Mat9 p = Mat9::Zero();
  double residual = 0.0;      // |A^T P + P A + Q|_F after symmetrization
  double lambda_min_q = 0.0;
  double lambda_min_p = 0.0;
  double abscissa = 0.0;      // of A
  double condition = 0.0;     // 2-norm condition of the Kronecker system
  std::optional<std::string> warning;
};

// Solve A^T P + P A = -Q through the 81x81 Kronecker system
// (I (x) A^T + A^T (x) I) vec(P) = -vec(Q), then symmetrize.
// Throws CertificationError if A is not Hurwitz (message names the offending
// eigenvalue) or Q is not symmetric positive definite. A condition number
// above 1e12 attaches a warning instead of failing.
LyapunovCert SolveLyapunov(const Mat9& a, const Mat9& q);

// Q = blockdiag(w0 I3, w1 I3, w2 I3), weighting the xi, xi' and xi'' blocks.
Mat9 BlockWeightedQ(const Eigen::Vector3d& weights);

// V = z~^T P z~ + tr(W~^T W~) / gamma.
double LyapunovValue(const Vec9& z_tilde, const Eigen::MatrixXd& w_tilde,
                     const Mat9& p, double gamma);

// V-dot under the adaptation law: -z~^T Q z~.
double LyapunovRate(const Vec9& z_tilde, const Mat9& q);

}  // namespace flyer
