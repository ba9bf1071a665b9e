// Copyright (c) 2026 The pmor developers
// SPDX-License-Identifier: Apache-2.0

#ifndef PMOR_MODEL_HPP
#define PMOR_MODEL_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <iostream>
#include <limits>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "pmor/errors.hpp"
#include "pmor/matrix_series.hpp"

namespace pmor {

// Reciprocal-condition floor below which a pencil counts as singular.
inline constexpr double kDefaultRcondFloor = 1e-14;

// Floor for solves with the *reduced* pencil. Interpolatory bases built from
// raw resolvent columns are routinely ill-conditioned far beyond 1e-14 while
// the shifted solves still deliver usable accuracy, so only an exactly
// singular factorization (a zero pivot) is rejected on the reduced side.
inline constexpr double kReducedRcondFloor = std::numeric_limits<double>::min();

// Reciprocal condition estimate of a factored matrix. Eigen's L1-norm
// estimator can report a healthy value for exactly singular inputs, so the
// estimate is capped by the LU pivot ratio, which a zero pivot drives to 0.
inline double lu_rcond(const Eigen::PartialPivLU<Eigen::MatrixXcd>& lu) {
    const auto& U = lu.matrixLU();
    double dmin = std::numeric_limits<double>::infinity();
    double dmax = 0.0;
    for (Eigen::Index i = 0; i < U.rows(); ++i) {
        const double a = std::abs(U(i, i));
        dmin = std::min(dmin, a);
        dmax = std::max(dmax, a);
    }
    const double pivot_ratio = dmax > 0.0 ? dmin / dmax : 0.0;
    double rc = lu.rcond();
    if (!std::isfinite(rc)) {
        rc = 0.0;
    }
    return std::min(rc, pivot_ratio);
}

struct EvaluatedLTI {
    Eigen::MatrixXcd E;
    Eigen::MatrixXcd A;
    Eigen::MatrixXcd B;
    Eigen::MatrixXcd C;
};

struct ShiftedSolveResult {
    Eigen::MatrixXcd X;
    double rcond; // reciprocal condition estimate of s*E - A
};

// Dense kernel: solve (s*E - A) X = RHS by LU with partial pivoting.
// Throws SingularPencilError when the pencil is numerically singular,
// i.e. s lies in sigma(E, A) up to numerical rank.
inline ShiftedSolveResult solve_shifted_pencil(const Eigen::MatrixXcd& E,
                                               const Eigen::MatrixXcd& A, std::complex<double> s,
                                               const Eigen::MatrixXcd& RHS,
                                               double rcond_floor = kDefaultRcondFloor) {
    if (E.rows() != E.cols() || A.rows() != A.cols() || E.rows() != A.rows()) {
        throw DimensionError("solve_shifted_pencil: E, A must be square and same size");
    }
    if (RHS.rows() != A.rows()) {
        throw DimensionError("solve_shifted_pencil: RHS has " + std::to_string(RHS.rows()) +
                             " rows, expected " + std::to_string(A.rows()));
    }
    Eigen::MatrixXcd pencil = s * E - A;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(pencil);
    const double rc = lu_rcond(lu);
    if (!(rc >= rcond_floor)) {
        throw SingularPencilError("shift s = (" + std::to_string(s.real()) + "," +
                                      std::to_string(s.imag()) +
                                      ") lies in the pencil spectrum up to numerical rank "
                                      "(rcond = " +
                                      std::to_string(rc) + ")",
                                  s, rc);
    }
    return {lu.solve(RHS), rc};
}

// The parametric full-order model E(p) x' = A(p) x + B(p) u, y = C(p) x,
// with all four matrices given as truncated power series over the box.
class ParametricLTI {
public:
    ParametricLTI(MatrixSeries E, MatrixSeries A, MatrixSeries B, MatrixSeries C, ParamBox box)
        : E_(std::move(E)), A_(std::move(A)), B_(std::move(B)), C_(std::move(C)),
          box_(std::move(box)) {
        const int nu = E_.nparams();
        if (A_.nparams() != nu || B_.nparams() != nu || C_.nparams() != nu ||
            box_.nparams() != nu) {
            throw DimensionError("ParametricLTI: parameter-count mismatch across series");
        }
        if (E_.rows() != E_.cols() || A_.rows() != A_.cols() || E_.rows() != A_.rows()) {
            throw DimensionError("ParametricLTI: E, A must be square of equal size");
        }
        if (B_.rows() != E_.rows() || C_.cols() != E_.rows()) {
            throw DimensionError("ParametricLTI: B/C shapes inconsistent with state dimension");
        }
        // Spot-check of the standing assumption that E(p) is nonsingular on
        // the box: test the center.
        Eigen::MatrixXcd Ec = E_.evaluate(box_.center());
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(Ec);
        if (!(lu_rcond(lu) >= kDefaultRcondFloor)) {
            throw SingularPencilError("ParametricLTI: E is numerically singular at the box center",
                                      std::complex<double>(0, 0), lu_rcond(lu));
        }
    }

    Eigen::Index state_dim() const { return A_.rows(); }
    Eigen::Index num_inputs() const { return B_.cols(); }
    Eigen::Index num_outputs() const { return C_.rows(); }
    int nparams() const { return E_.nparams(); }

    const MatrixSeries& E() const { return E_; }
    const MatrixSeries& A() const { return A_; }
    const MatrixSeries& B() const { return B_; }
    const MatrixSeries& C() const { return C_; }
    const ParamBox& box() const { return box_; }

    EvaluatedLTI eval_matrices(const Eigen::VectorXd& p) const {
        if (p.size() != nparams()) {
            throw DimensionError("eval_matrices: parameter vector length mismatch");
        }
        if (!box_.contains(p)) {
            std::cerr << "pmor: warning: parameter outside the declared box\n";
        }
        return {E_.evaluate(p), A_.evaluate(p), B_.evaluate(p), C_.evaluate(p)};
    }

    // Solve (s*E(p) - A(p)) X = RHS.
    ShiftedSolveResult shifted_solve(const Eigen::VectorXd& p, std::complex<double> s,
                                     const Eigen::MatrixXcd& RHS,
                                     double rcond_floor = kDefaultRcondFloor) const {
        return solve_shifted_pencil(E_.evaluate(p), A_.evaluate(p), s, RHS, rcond_floor);
    }

    // H(s;p) = C(p) (s*E(p) - A(p))^{-1} B(p).
    Eigen::MatrixXcd transfer_eval(std::complex<double> s, const Eigen::VectorXd& p) const {
        return C_.evaluate(p) * shifted_solve(p, s, B_.evaluate(p)).X;
    }

private:
    MatrixSeries E_;
    MatrixSeries A_;
    MatrixSeries B_;
    MatrixSeries C_;
    ParamBox box_;
};

} // namespace pmor

#endif // PMOR_MODEL_HPP
