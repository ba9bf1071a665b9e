// Copyright (c) 2026 The pmor developers
// SPDX-License-Identifier: Apache-2.0

#ifndef PMOR_INTERP_DATA_HPP
#define PMOR_INTERP_DATA_HPP

#include <complex>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pmor/errors.hpp"
#include "pmor/matrix_series.hpp"
#include "pmor/model.hpp"

namespace pmor {

// Interpolation curves and tangent directions: Lambda(p), M(p) diagonal
// frequency curves and R(p), L(p) direction matrices, all as truncated
// power series. In one-sided mode M and L are ignored and W(p) := V(p).
class InterpolationData {
public:
    InterpolationData(MatrixSeries Lambda, MatrixSeries M, MatrixSeries R, MatrixSeries L,
                      bool one_sided, bool claims_conjugation_closed = false)
        : Lambda_(std::move(Lambda)), M_(std::move(M)), R_(std::move(R)), L_(std::move(L)),
          one_sided_(one_sided), conj_closed_(claims_conjugation_closed) {
        if (Lambda_.rows() != Lambda_.cols()) {
            throw DimensionError("InterpolationData: Lambda must be square");
        }
        const Eigen::Index n = Lambda_.rows();
        if (M_.rows() != n || M_.cols() != n) {
            throw DimensionError("InterpolationData: M must be n x n");
        }
        if (R_.cols() != n || L_.cols() != n) {
            throw DimensionError("InterpolationData: R, L must have n columns");
        }
        const int nu = Lambda_.nparams();
        if (M_.nparams() != nu || R_.nparams() != nu || L_.nparams() != nu) {
            throw DimensionError("InterpolationData: parameter-count mismatch");
        }
        require_diagonal(Lambda_, "Lambda");
        require_diagonal(M_, "M");
        if (conj_closed_) {
            if (!is_conjugation_closed()) {
                throw DimensionError(
                    "InterpolationData: conjugation closure claimed but not satisfied");
            }
        }
    }

    Eigen::Index n() const { return Lambda_.rows(); }
    Eigen::Index num_inputs() const { return R_.rows(); }
    Eigen::Index num_outputs() const { return L_.rows(); }
    int nparams() const { return Lambda_.nparams(); }
    bool one_sided() const { return one_sided_; }
    bool claims_conjugation_closed() const { return conj_closed_; }

    const MatrixSeries& Lambda() const { return Lambda_; }
    const MatrixSeries& M() const { return M_; }
    const MatrixSeries& R() const { return R_; }
    const MatrixSeries& L() const { return L_; }

    // Right interpolation frequencies lambda_i(p).
    Eigen::VectorXcd lambda_at(const Eigen::VectorXd& p) const {
        return Lambda_.evaluate(p).diagonal();
    }

    // Left interpolation frequencies mu_i(p).
    Eigen::VectorXcd mu_at(const Eigen::VectorXd& p) const { return M_.evaluate(p).diagonal(); }

    // For every coefficient, the diagonal entries of Lambda_i paired with
    // the columns of R_i must be closed under complex conjugation (and the
    // same for M_i with L_i in two-sided mode).
    bool is_conjugation_closed(double tol = 1e-14) const {
        if (!pair_closed(Lambda_, R_, tol)) {
            return false;
        }
        if (!one_sided_ && !pair_closed(M_, L_, tol)) {
            return false;
        }
        return true;
    }

private:
    static void require_diagonal(const MatrixSeries& S, const std::string& name) {
        for (const auto& [idx, M] : S.terms()) {
            Eigen::MatrixXcd offdiag = M;
            offdiag.diagonal().setZero();
            if (!offdiag.isZero(0.0)) {
                throw DimensionError("InterpolationData: " + name + " coefficient at " +
                                     idx.to_string() + " is not diagonal");
            }
        }
    }

    static bool pair_closed(const MatrixSeries& Freq, const MatrixSeries& Dir, double tol) {
        const Eigen::Index n = Freq.rows();
        for (const auto& [idx, F] : Freq.terms()) {
            const Eigen::MatrixXcd* D = Dir.term(idx);
            Eigen::MatrixXcd dirs =
                D ? *D : Eigen::MatrixXcd::Zero(Dir.rows(), Dir.cols());
            Eigen::VectorXcd diag = F.diagonal();
            std::vector<bool> used(static_cast<std::size_t>(n), false);
            for (Eigen::Index c = 0; c < n; ++c) {
                bool found = false;
                for (Eigen::Index cc = 0; cc < n; ++cc) {
                    if (used[static_cast<std::size_t>(cc)]) {
                        continue;
                    }
                    if (std::abs(diag[cc] - std::conj(diag[c])) <= tol &&
                        (dirs.col(cc) - dirs.col(c).conjugate()).norm() <= tol) {
                        used[static_cast<std::size_t>(cc)] = true;
                        found = true;
                        break;
                    }
                }
                if (!found) {
                    return false;
                }
            }
        }
        return true;
    }

    MatrixSeries Lambda_;
    MatrixSeries M_;
    MatrixSeries R_;
    MatrixSeries L_;
    bool one_sided_;
    bool conj_closed_;
};

// Parameter-independent points and directions: every series has a single
// zero-index term.
inline InterpolationData make_constant_data(const Eigen::VectorXcd& lambdas,
                                            const Eigen::VectorXcd& mus,
                                            const Eigen::MatrixXcd& Rdirs,
                                            const Eigen::MatrixXcd& Ldirs, int nparams) {
    const Eigen::Index n = lambdas.size();
    if (mus.size() != n || Rdirs.cols() != n || Ldirs.cols() != n) {
        throw DimensionError("make_constant_data: length mismatch with reduced order n");
    }
    MatrixSeries Lam = MatrixSeries::constant(
        Eigen::MatrixXcd(lambdas.asDiagonal()), nparams);
    MatrixSeries M = MatrixSeries::constant(Eigen::MatrixXcd(mus.asDiagonal()), nparams);
    MatrixSeries R = MatrixSeries::constant(Rdirs, nparams);
    MatrixSeries L = MatrixSeries::constant(Ldirs, nparams);
    return InterpolationData(std::move(Lam), std::move(M), std::move(R), std::move(L),
                             /*one_sided=*/false);
}

// One-sided variant: M and L are zero-term placeholders, W(p) := V(p).
inline InterpolationData make_one_sided_data(const Eigen::VectorXcd& lambdas,
                                             const Eigen::MatrixXcd& Rdirs, Eigen::Index ell,
                                             int nparams) {
    const Eigen::Index n = lambdas.size();
    if (Rdirs.cols() != n) {
        throw DimensionError("make_one_sided_data: R has wrong number of columns");
    }
    MatrixSeries Lam = MatrixSeries::constant(
        Eigen::MatrixXcd(lambdas.asDiagonal()), nparams);
    MatrixSeries M(n, n, nparams);
    MatrixSeries R = MatrixSeries::constant(Rdirs, nparams);
    MatrixSeries L(ell, n, nparams);
    return InterpolationData(std::move(Lam), std::move(M), std::move(R), std::move(L),
                             /*one_sided=*/true);
}

struct ValidationReport {
    int samples_checked = 0;
    double min_rcond = 1.0;
};

// Deterministic sample points in the box: endpoints-inclusive linspace for
// one parameter, fixed-seed uniform draws plus the center otherwise.
inline std::vector<Eigen::VectorXd> sample_box(const ParamBox& box, int count) {
    std::vector<Eigen::VectorXd> pts;
    if (count <= 0) {
        count = 1;
    }
    if (box.nparams() == 1) {
        for (int k = 0; k < count; ++k) {
            Eigen::VectorXd p(1);
            p[0] = count == 1 ? box.center()[0]
                              : box.lower[0] + (box.upper[0] - box.lower[0]) * k / (count - 1);
            pts.push_back(p);
        }
        return pts;
    }
    pts.push_back(box.center());
    std::mt19937 rng(0x70726d72u); // fixed seed, reproducible runs
    std::uniform_real_distribution<double> u(0.0, 1.0);
    while (static_cast<int>(pts.size()) < count) {
        Eigen::VectorXd p(box.nparams());
        for (int k = 0; k < box.nparams(); ++k) {
            p[k] = box.lower[k] + (box.upper[k] - box.lower[k]) * u(rng);
        }
        pts.push_back(p);
    }
    return pts;
}

// Confirms that no interpolation curve touches the pencil spectrum on the
// sampled parameter set: s*E(p) - A(p) must stay numerically nonsingular at
// s = lambda_i(p) (and mu_i(p) in two-sided mode). Throws
// SpectrumCollisionError listing the offending (i, p) pairs.
inline ValidationReport validate(const InterpolationData& data, const ParametricLTI& sys,
                                 int sample_count, double rcond_floor = kDefaultRcondFloor) {
    if (data.nparams() != sys.nparams()) {
        throw DimensionError("validate: parameter-count mismatch between data and system");
    }
    if (data.num_inputs() != sys.num_inputs() && !data.R().empty()) {
        throw DimensionError("validate: R row count does not match system inputs");
    }
    if (!data.one_sided() && data.num_outputs() != sys.num_outputs() && !data.L().empty()) {
        throw DimensionError("validate: L row count does not match system outputs");
    }
    ValidationReport report;
    std::vector<SpectrumCollisionError::Collision> collisions;
    const auto samples = sample_box(sys.box(), sample_count);
    for (const auto& p : samples) {
        const Eigen::MatrixXcd Ep = sys.E().evaluate(p);
        const Eigen::MatrixXcd Ap = sys.A().evaluate(p);
        std::vector<std::complex<double>> shifts;
        const Eigen::VectorXcd lam = data.lambda_at(p);
        for (Eigen::Index i = 0; i < lam.size(); ++i) {
            shifts.push_back(lam[i]);
        }
        if (!data.one_sided()) {
            const Eigen::VectorXcd mu = data.mu_at(p);
            for (Eigen::Index i = 0; i < mu.size(); ++i) {
                shifts.push_back(mu[i]);
            }
        }
        for (std::size_t i = 0; i < shifts.size(); ++i) {
            Eigen::MatrixXcd pencil = shifts[i] * Ep - Ap;
            Eigen::PartialPivLU<Eigen::MatrixXcd> lu(pencil);
            const double rc = lu_rcond(lu);
            report.min_rcond = std::min(report.min_rcond, rc);
            if (!(rc >= rcond_floor)) {
                std::vector<double> pv(p.data(), p.data() + p.size());
                collisions.push_back({static_cast<int>(i % static_cast<std::size_t>(data.n())),
                                      std::move(pv), rc});
            }
        }
        ++report.samples_checked;
    }
    if (!collisions.empty()) {
        throw SpectrumCollisionError("interpolation curve meets the pencil spectrum at " +
                                         std::to_string(collisions.size()) + " sampled (i,p) pairs",
                                     std::move(collisions));
    }
    return report;
}

} // namespace pmor

#endif // PMOR_INTERP_DATA_HPP
