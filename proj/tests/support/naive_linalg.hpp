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
//
// Test-only dense complex routines, written independently of the library's
// solver stack so the oracle checks do not share a code path with what they
// verify. Plain Gaussian elimination with partial pivoting; no Eigen.

#ifndef MCMIMO_TESTS_NAIVE_LINALG_HPP
#define MCMIMO_TESTS_NAIVE_LINALG_HPP

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace naive {

using cplx = std::complex<double>;

struct NMat {
    int rows = 0, cols = 0;
    std::vector<cplx> a; // row-major

    NMat() = default;
    NMat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, cplx(0.0, 0.0)) {}

    cplx &operator()(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    const cplx &operator()(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }

    static NMat identity(int n) {
        NMat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }
};

inline NMat multiply(const NMat &x, const NMat &y) {
    if (x.cols != y.rows) throw std::invalid_argument("naive multiply: shape mismatch");
    NMat z(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            const cplx v = x(i, k);
            if (v == cplx(0.0, 0.0)) continue;
            for (int j = 0; j < y.cols; ++j) z(i, j) += v * y(k, j);
        }
    return z;
}

inline NMat adjoint(const NMat &x) {
    NMat z(x.cols, x.rows);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) z(j, i) = std::conj(x(i, j));
    return z;
}

// Solves A X = B by Gaussian elimination with partial pivoting.
inline NMat gauss_solve(NMat a, NMat b) {
    if (a.rows != a.cols || a.rows != b.rows) throw std::invalid_argument("gauss_solve: shape mismatch");
    const int n = a.rows, m = b.cols;
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        double best = std::abs(a(col, col));
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a(r, col)) > best) {
                best = std::abs(a(r, col));
                pivot = r;
            }
        if (best == 0.0) throw std::runtime_error("gauss_solve: singular matrix");
        if (pivot != col) {
            for (int c = 0; c < n; ++c) std::swap(a(col, c), a(pivot, c));
            for (int c = 0; c < m; ++c) std::swap(b(col, c), b(pivot, c));
        }
        const cplx d = a(col, col);
        for (int r = col + 1; r < n; ++r) {
            const cplx f = a(r, col) / d;
            if (f == cplx(0.0, 0.0)) continue;
            for (int c = col; c < n; ++c) a(r, c) -= f * a(col, c);
            for (int c = 0; c < m; ++c) b(r, c) -= f * b(col, c);
        }
    }
    NMat x(n, m);
    for (int r = n - 1; r >= 0; --r)
        for (int c = 0; c < m; ++c) {
            cplx s = b(r, c);
            for (int k = r + 1; k < n; ++k) s -= a(r, k) * x(k, c);
            x(r, c) = s / a(r, r);
        }
    return x;
}

inline NMat gauss_inverse(const NMat &a) { return gauss_solve(a, NMat::identity(a.rows)); }

} // namespace naive

#endif
