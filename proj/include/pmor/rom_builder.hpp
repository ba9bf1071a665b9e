// Copyright (c) 2026 The pmor developers
// SPDX-License-Identifier: Apache-2.0

#ifndef PMOR_ROM_BUILDER_HPP
#define PMOR_ROM_BUILDER_HPP

#include <cmath>
#include <complex>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "pmor/coeff_solver.hpp"
#include "pmor/errors.hpp"
#include "pmor/matrix_series.hpp"
#include "pmor/model.hpp"

namespace pmor {

enum class ProjectionMode { Transpose, ConjugateTranspose };

struct RomProvenance {
    double tol = 0.0;
    int v_degrees = 0;
    int w_degrees = 0;
    bool one_sided = false;
    ProjectionMode mode = ProjectionMode::Transpose;
    StopReason v_stop = StopReason::ToleranceMet;
    StopReason w_stop = StopReason::ToleranceMet;
};

// Precomputed reduced coefficient series: the term of, say, Ahat at
// multi-index rho is sum over i+j+k=rho of W_j^T A_k V_i, merged at build
// time. Evaluating the bundle at p touches only reduced dimensions, never N.
class RomBundle {
public:
    RomBundle(MatrixSeries Ehat, MatrixSeries Ahat, MatrixSeries Bhat, MatrixSeries Chat,
              RomProvenance prov = {})
        : Ehat_(std::move(Ehat)), Ahat_(std::move(Ahat)), Bhat_(std::move(Bhat)),
          Chat_(std::move(Chat)), prov_(prov) {
        const Eigen::Index n = Ahat_.rows();
        if (Ahat_.cols() != n || Ehat_.rows() != n || Ehat_.cols() != n) {
            throw DimensionError("RomBundle: Ehat/Ahat must be n x n");
        }
        if (Bhat_.rows() != n || Chat_.cols() != n) {
            throw DimensionError("RomBundle: Bhat/Chat shapes inconsistent with n");
        }
        const int nu = Ahat_.nparams();
        if (Ehat_.nparams() != nu || Bhat_.nparams() != nu || Chat_.nparams() != nu) {
            throw DimensionError("RomBundle: parameter-count mismatch");
        }
    }

    Eigen::Index n() const { return Ahat_.rows(); }
    Eigen::Index num_inputs() const { return Bhat_.cols(); }
    Eigen::Index num_outputs() const { return Chat_.rows(); }
    int nparams() const { return Ahat_.nparams(); }

    const MatrixSeries& Ehat() const { return Ehat_; }
    const MatrixSeries& Ahat() const { return Ahat_; }
    const MatrixSeries& Bhat() const { return Bhat_; }
    const MatrixSeries& Chat() const { return Chat_; }
    const RomProvenance& provenance() const { return prov_; }

private:
    MatrixSeries Ehat_;
    MatrixSeries Ahat_;
    MatrixSeries Bhat_;
    MatrixSeries Chat_;
    RomProvenance prov_;
};

// Offline stage: triple convolutions W^T * {E,A} * V and the two-factor
// products W^T B, C V, all in the original dimension N, performed once.
inline RomBundle build_offline(const ParametricLTI& sys, const BasisSeries& basis,
                               ProjectionMode mode = ProjectionMode::Transpose) {
    const MatrixSeries& V = basis.V;
    const MatrixSeries& W = basis.effective_W();
    if (V.rows() != sys.state_dim() || W.rows() != sys.state_dim()) {
        throw DimensionError("build_offline: basis row count does not match state dimension");
    }
    if (V.cols() != W.cols()) {
        throw DimensionError("build_offline: V and W must have the same number of columns");
    }
    const MatrixSeries Wt =
        mode == ProjectionMode::Transpose ? W.transposed() : W.adjointed();
    RomProvenance prov;
    prov.tol = basis.v_info.tol;
    prov.v_degrees = basis.v_info.degrees_computed;
    prov.w_degrees = basis.one_sided ? basis.v_info.degrees_computed
                                     : basis.w_info.degrees_computed;
    prov.one_sided = basis.one_sided;
    prov.mode = mode;
    prov.v_stop = basis.v_info.reason;
    prov.w_stop = basis.one_sided ? basis.v_info.reason : basis.w_info.reason;
    return RomBundle(convolve(convolve(Wt, sys.E()), V), convolve(convolve(Wt, sys.A()), V),
                     convolve(Wt, sys.B()), convolve(sys.C(), V), prov);
}

struct ReducedRealization {
    Eigen::MatrixXcd E;
    Eigen::MatrixXcd A;
    Eigen::MatrixXcd B;
    Eigen::MatrixXcd C;
    double rcond_E = 0.0;
};

enum class SingularEPolicy { Report, Require };

// Online stage: sum bundle terms times p^index. Cost is
// O((n^2 + n*m + ell*n) * #terms), independent of N. The reciprocal
// condition of Ehat(p) is reported; with SingularEPolicy::Require a
// numerically singular Ehat(p) throws instead.
inline ReducedRealization assemble_at(const RomBundle& bundle, const Eigen::VectorXd& p,
                                      SingularEPolicy policy = SingularEPolicy::Report) {
    if (p.size() != bundle.nparams()) {
        throw DimensionError("assemble_at: parameter vector length mismatch");
    }
    ReducedRealization r;
    r.E = bundle.Ehat().evaluate(p);
    r.A = bundle.Ahat().evaluate(p);
    r.B = bundle.Bhat().evaluate(p);
    r.C = bundle.Chat().evaluate(p);
    if (r.E.norm() == 0.0) {
        r.rcond_E = 0.0;
    } else {
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(r.E);
        const double rc = lu_rcond(lu);
        r.rcond_E = std::isfinite(rc) ? rc : 0.0;
    }
    if (policy == SingularEPolicy::Require && !(r.rcond_E >= kDefaultRcondFloor)) {
        throw SingularReducedEError("reduced E(p) is numerically singular (rcond = " +
                                        std::to_string(r.rcond_E) + ")",
                                    r.rcond_E);
    }
    return r;
}

// Hhat(s;p) = Chat(p) (s Ehat(p) - Ahat(p))^{-1} Bhat(p): one reduced dense
// solve plus two small multiplications. The reduced pencil is solved through
// ill-conditioning; only exact singularity raises.
inline Eigen::MatrixXcd rom_transfer_eval(const RomBundle& bundle, std::complex<double> s,
                                          const Eigen::VectorXd& p,
                                          double rcond_floor = kReducedRcondFloor) {
    const ReducedRealization r = assemble_at(bundle, p);
    return r.C * solve_shifted_pencil(r.E, r.A, s, r.B, rcond_floor).X;
}

} // namespace pmor

#endif // PMOR_ROM_BUILDER_HPP
