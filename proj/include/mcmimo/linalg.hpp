// SPDX-License-Identifier: Apache-2.0
//
// mcmimo - multi-cell massive MIMO uplink simulation library
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef MCMIMO_LINALG_HPP
#define MCMIMO_LINALG_HPP

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <complex>

#include "mcmimo/errors.hpp"

namespace mcmimo {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RealVec = Eigen::VectorXd;
using cplx = std::complex<double>;

// (A + A^H)/2. All Hermitian products are symmetrized before factorization
// so that round-off never produces a non-Hermitian input to a solver.
inline Mat symmetrize(const Mat &a) { return 0.5 * (a + a.adjoint()); }

// Hermitian PSD square root via eigendecomposition. Eigenvalues in
// [-tol, 0) are clamped to zero; anything below -tol (relative to the
// largest eigenvalue) is a genuine PSD violation.
inline Mat hermitian_sqrt(const Mat &a, double tol = 1e-10) {
    Eigen::SelfAdjointEigenSolver<Mat> eig(symmetrize(a));
    if (eig.info() != Eigen::Success)
        throw NumericalError("hermitian_sqrt: eigendecomposition failed");
    RealVec lam = eig.eigenvalues();
    const double scale = std::max(1.0, lam.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        if (lam[i] < -tol * scale)
            throw NumericalError("hermitian_sqrt: matrix is not positive semi-definite");
        lam[i] = lam[i] > 0.0 ? std::sqrt(lam[i]) : 0.0;
    }
    Mat s = eig.eigenvectors() * lam.asDiagonal() * eig.eigenvectors().adjoint();
    return symmetrize(s);
}

// Cholesky factorization of a Hermitian positive-definite matrix, reused
// across right-hand sides.
class HpdSolver {
  public:
    explicit HpdSolver(const Mat &a, const char *what = "HpdSolver") : llt_(symmetrize(a)) {
        if (llt_.info() != Eigen::Success)
            throw NumericalError(std::string(what) + ": matrix is not positive definite");
    }

    Vec solve(const Vec &rhs) const { return llt_.solve(rhs); }
    Mat solve(const Mat &rhs) const { return llt_.solve(rhs); }

  private:
    Eigen::LLT<Mat> llt_;
};

// Inverse of a Hermitian positive-definite matrix, symmetrized. The
// returned matrix is exactly Hermitian; the inversion residual relative to
// cond(a) stays at rounding level (well below 1e-10), which is the
// consistency contract for ridge-regularized design matrices.
inline Mat hermitian_inverse(const Mat &a, const char *what = "hermitian_inverse") {
    HpdSolver solver(a, what);
    Mat inv = solver.solve(Mat(Mat::Identity(a.rows(), a.cols())));
    return symmetrize(inv);
}

inline double relative_residual(const Mat &a, const Vec &x, const Vec &b) {
    const double nb = b.norm();
    if (nb == 0.0) return (a * x).norm();
    return (a * x - b).norm() / nb;
}

} // namespace mcmimo

#endif
