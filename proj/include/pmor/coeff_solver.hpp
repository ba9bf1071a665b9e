// Copyright (c) 2026 The pmor developers
// SPDX-License-Identifier: Apache-2.0

#ifndef PMOR_COEFF_SOLVER_HPP
#define PMOR_COEFF_SOLVER_HPP

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pmor/errors.hpp"
#include "pmor/interp_data.hpp"
#include "pmor/matrix_series.hpp"
#include "pmor/model.hpp"
#include "pmor/multiindex.hpp"

namespace pmor {

struct SolverConfig {
    double tol = 1e-8;           // truncation tolerance tau
    int max_total_degree = 100;  // safety cap on the expansion degree
    double rcond_floor = 1e-14;
    int stop_consecutive = 2;    // degrees below tol before stopping
    bool cache_factorizations = true;
};

enum class StopReason { ToleranceMet, DegreeCap, ExactTermination };

inline const char* to_string(StopReason r) {
    switch (r) {
    case StopReason::ToleranceMet:
        return "ToleranceMet";
    case StopReason::DegreeCap:
        return "DegreeCap";
    case StopReason::ExactTermination:
        return "ExactTermination";
    }
    return "?";
}

inline std::optional<StopReason> stop_reason_from_string(const std::string& s) {
    for (StopReason r :
         {StopReason::ToleranceMet, StopReason::DegreeCap, StopReason::ExactTermination}) {
        if (s == to_string(r)) {
            return r;
        }
    }
    return std::nullopt;
}

struct SeriesSolveInfo {
    double tol = 0.0;
    int degrees_computed = 0; // highest total degree examined
    StopReason reason = StopReason::ToleranceMet;
    std::vector<double> degree_weights; // max term weight per total degree
};

// Truncated power series of the projection bases. In one-sided mode W is an
// unused placeholder and effective_W() aliases V.
struct BasisSeries {
    MatrixSeries V;
    MatrixSeries W;
    bool one_sided = false;
    SeriesSolveInfo v_info;
    SeriesSolveInfo w_info;

    const MatrixSeries& effective_W() const { return one_sided ? V : W; }
};

// Known part of the coefficient equation A0 X_rho - E0 X_rho Lambda0 = -rhs
// at multi-index rho, for the series Sylvester equation
// A(p) X(p) - E(p) X(p) Lambda(p) + F(p) G(p) = 0:
//
//   rhs = sum_{i+j=rho, i!=0} A_i X_j
//       - sum_{i+j+k=rho, j!=rho} E_i X_j Lambda_k
//       + sum_{i+j=rho} F_i G_j .
//
// X must hold every coefficient of total degree < |rho| already.
inline Eigen::MatrixXcd sylvester_series_rhs(const MatrixSeries& A, const MatrixSeries& E,
                                             const MatrixSeries& F, const MatrixSeries& G,
                                             const MatrixSeries& Lambda, const MatrixSeries& X,
                                             const MultiIndex& rho) {
    const Eigen::Index N = A.rows();
    const Eigen::Index n = Lambda.rows();
    Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(N, n);

    auto try_subtract = [](const MultiIndex& a, const MultiIndex& b) -> std::optional<MultiIndex> {
        std::vector<int> d(static_cast<std::size_t>(a.size()));
        for (int k = 0; k < a.size(); ++k) {
            if (a[k] < b[k]) {
                return std::nullopt;
            }
            d[static_cast<std::size_t>(k)] = a[k] - b[k];
        }
        return MultiIndex(std::move(d));
    };

    for (const auto& [i, Ai] : A.terms()) {
        if (i.degree() == 0) {
            continue; // A0 X_rho carries the unknown
        }
        auto j = try_subtract(rho, i);
        if (!j) {
            continue;
        }
        if (const Eigen::MatrixXcd* Xj = X.term(*j)) {
            rhs += Ai * (*Xj);
        }
    }
    for (const auto& [i, Ei] : E.terms()) {
        for (const auto& [k, Lk] : Lambda.terms()) {
            if (i.degree() == 0 && k.degree() == 0) {
                continue; // E0 X_rho Lambda0 carries the unknown
            }
            auto j = try_subtract(rho, i + k);
            if (!j) {
                continue;
            }
            if (const Eigen::MatrixXcd* Xj = X.term(*j)) {
                rhs -= Ei * ((*Xj) * Lk);
            }
        }
    }
    for (const auto& [i, Fi] : F.terms()) {
        auto j = try_subtract(rho, i);
        if (!j) {
            continue;
        }
        if (const Eigen::MatrixXcd* Gj = G.term(*j)) {
            rhs += Fi * (*Gj);
        }
    }
    return rhs;
}

namespace detail {

// LU factorizations of the degree-0 pencils shift*E0 - A0, one per distinct
// shift. Results do not depend on whether factors are cached or rebuilt.
class ShiftedPencilSolver {
public:
    ShiftedPencilSolver(Eigen::MatrixXcd E0, Eigen::MatrixXcd A0, double rcond_floor, bool cache)
        : E0_(std::move(E0)), A0_(std::move(A0)), rcond_floor_(rcond_floor), cache_(cache) {}

    Eigen::VectorXcd solve(std::complex<double> shift, const Eigen::VectorXcd& rhs) {
        const auto key = std::make_pair(shift.real(), shift.imag());
        auto it = lus_.find(key);
        if (it == lus_.end()) {
            Eigen::PartialPivLU<Eigen::MatrixXcd> lu(shift * E0_ - A0_);
            const double rc = lu_rcond(lu);
            if (!(rc >= rcond_floor_)) {
                throw SingularPencilError(
                    "interpolation shift collides with the pencil spectrum at p = 0 (rcond = " +
                        std::to_string(rc) + ")",
                    shift, rc);
            }
            it = lus_.emplace(key, std::move(lu)).first;
        }
        Eigen::VectorXcd x = it->second.solve(rhs);
        if (!cache_) {
            lus_.erase(it);
        }
        return x;
    }

private:
    Eigen::MatrixXcd E0_;
    Eigen::MatrixXcd A0_;
    double rcond_floor_;
    bool cache_;
    std::map<std::pair<double, double>, Eigen::PartialPivLU<Eigen::MatrixXcd>> lus_;
};

struct SeriesSolveOutput {
    MatrixSeries X;
    SeriesSolveInfo info;
};

// Degree-by-degree solution of A(p) X(p) - E(p) X(p) Lambda(p) + F(p) G(p) = 0.
// Lambda must have diagonal coefficients at every degree, which decouples
// each total-degree unknown columnwise into shifted solves with the frozen
// pencil lambda_c(0) E0 - A0.
inline SeriesSolveOutput solve_sylvester_series(const MatrixSeries& A, const MatrixSeries& E,
                                                const MatrixSeries& F, const MatrixSeries& G,
                                                const MatrixSeries& Lambda, const ParamBox& box,
                                                const SolverConfig& cfg) {
    if (cfg.tol <= 0) {
        throw DimensionError("SolverConfig: tol must be positive");
    }
    if (cfg.max_total_degree < 0) {
        throw DimensionError("SolverConfig: max_total_degree must be >= 0");
    }
    const Eigen::Index N = A.rows();
    const Eigen::Index n = Lambda.rows();
    const int nu = A.nparams();

    const Eigen::VectorXcd shifts = Lambda.leading_term().diagonal();
    ShiftedPencilSolver pencil(E.leading_term(), A.leading_term(), cfg.rcond_floor,
                               cfg.cache_factorizations);

    // Exact-termination bookkeeping: once `window` consecutive degrees are
    // exactly zero and the forcing terms are exhausted, every later degree
    // is zero by induction on the recurrence.
    int coupling_depth = 0;
    for (const auto& [i, Ai] : A.terms()) {
        if (i.degree() > 0) {
            coupling_depth = std::max(coupling_depth, i.degree());
        }
    }
    for (const auto& [i, Ei] : E.terms()) {
        for (const auto& [k, Lk] : Lambda.terms()) {
            if (i.degree() + k.degree() > 0) {
                coupling_depth = std::max(coupling_depth, i.degree() + k.degree());
            }
        }
    }
    int forcing_degree = -1;
    for (const auto& [i, Fi] : F.terms()) {
        for (const auto& [j, Gj] : G.terms()) {
            forcing_degree = std::max(forcing_degree, i.degree() + j.degree());
        }
    }
    const int window = std::max(coupling_depth, 1);

    const bool inputs_real =
        A.is_real() && E.is_real() && F.is_real() && G.is_real() && Lambda.is_real();

    MatrixSeries X(N, n, nu);
    SeriesSolveInfo info;
    info.tol = cfg.tol;
    int zero_run = 0;
    int tol_run = 0;

    for (int d = 0;; ++d) {
        bool degree_all_zero = true;
        double degree_weight = 0.0;
        for (const MultiIndex& rho : indices_of_degree(nu, d)) {
            Eigen::MatrixXcd rhs = sylvester_series_rhs(A, E, F, G, Lambda, X, rho);
            Eigen::MatrixXcd Xrho(N, n);
            for (Eigen::Index c = 0; c < n; ++c) {
                if (rhs.col(c).isZero(0.0)) {
                    Xrho.col(c).setZero();
                } else {
                    Xrho.col(c) = pencil.solve(shifts[c], rhs.col(c));
                }
            }
            if (inputs_real) {
                // Real data yields real coefficients; scrub roundoff-level
                // imaginary parts so downstream realness tests are exact.
                if (Xrho.imag().norm() <= 1e-12 * Xrho.norm()) {
                    Xrho.imag().setZero();
                }
            }
            if (Xrho.isZero(0.0)) {
                continue; // absent index means zero coefficient
            }
            degree_all_zero = false;
            X.set_term(rho, std::move(Xrho));
            degree_weight = std::max(degree_weight, X.term_weight(rho, box));
        }
        info.degree_weights.push_back(degree_weight);
        info.degrees_computed = d;

        zero_run = degree_all_zero ? zero_run + 1 : 0;
        tol_run = degree_weight <= cfg.tol ? tol_run + 1 : 0;

        if (zero_run >= window && d > forcing_degree) {
            info.reason = StopReason::ExactTermination;
            break;
        }
        if (tol_run >= cfg.stop_consecutive) {
            info.reason = StopReason::ToleranceMet;
            break;
        }
        if (d >= cfg.max_total_degree) {
            info.reason = StopReason::DegreeCap;
            break;
        }
    }

    // Final truncation: drop every term above degree zero whose weight falls
    // at or below tol. The zero-index coefficient anchors the expansion and
    // is always retained.
    MatrixSeries result(N, n, nu);
    for (const auto& [idx, M] : X.terms()) {
        if (idx.degree() == 0 || box.monomial_max(idx) * M.norm() > cfg.tol) {
            result.set_term(idx, M);
        }
    }
    return {std::move(result), std::move(info)};
}

} // namespace detail

// Taylor coefficients of V(p) solving A(p)V(p) - E(p)V(p)Lambda(p) + B(p)R(p) = 0.
inline BasisSeries solve_V_series(const ParametricLTI& sys, const InterpolationData& data,
                                  const SolverConfig& cfg) {
    auto out = detail::solve_sylvester_series(sys.A(), sys.E(), sys.B(), data.R(), data.Lambda(),
                                              sys.box(), cfg);
    BasisSeries basis{std::move(out.X),
                      MatrixSeries(sys.state_dim(), data.n(), sys.nparams()),
                      data.one_sided(),
                      std::move(out.info),
                      SeriesSolveInfo{},
                      };
    return basis;
}

// Taylor coefficients of W(p) solving
// W(p)^T A(p) - M(p)^T W(p)^T E(p) + L(p)^T C(p) = 0, computed through the
// transposed problem A^T W - E^T W M + C^T L = 0 (shifted solves with the
// transposed pencil). One-sided data returns the V series verbatim.
inline BasisSeries solve_W_series(const ParametricLTI& sys, const InterpolationData& data,
                                  const SolverConfig& cfg) {
    if (data.one_sided()) {
        BasisSeries basis = solve_V_series(sys, data, cfg);
        basis.W = basis.V;
        basis.w_info = basis.v_info;
        return basis;
    }
    auto out = detail::solve_sylvester_series(sys.A().transposed(), sys.E().transposed(),
                                              sys.C().transposed(), data.L(), data.M(), sys.box(),
                                              cfg);
    BasisSeries basis{MatrixSeries(sys.state_dim(), data.n(), sys.nparams()),
                      std::move(out.X),
                      false,
                      SeriesSolveInfo{},
                      std::move(out.info)};
    return basis;
}

// Both bases in one call.
inline BasisSeries solve_bases(const ParametricLTI& sys, const InterpolationData& data,
                               const SolverConfig& cfg) {
    BasisSeries v = solve_V_series(sys, data, cfg);
    if (data.one_sided()) {
        v.W = v.V;
        v.w_info = v.v_info;
        return v;
    }
    BasisSeries w = solve_W_series(sys, data, cfg);
    v.W = std::move(w.W);
    v.w_info = std::move(w.w_info);
    return v;
}

struct DenseBases {
    Eigen::MatrixXcd V;
    Eigen::MatrixXcd W;
};

// Brute-force oracle: solve the frozen Sylvester equations at one parameter
// value by column/row-decoupled shifted solves. This is what the series
// solver must agree with wherever the expansion converges.
inline DenseBases direct_solve_at(const ParametricLTI& sys, const InterpolationData& data,
                                  const Eigen::VectorXd& p,
                                  double rcond_floor = kDefaultRcondFloor) {
    const Eigen::MatrixXcd Ep = sys.E().evaluate(p);
    const Eigen::MatrixXcd Ap = sys.A().evaluate(p);
    const Eigen::Index n = data.n();
    DenseBases out;
    out.V.resize(sys.state_dim(), n);
    const Eigen::MatrixXcd forcing = sys.B().evaluate(p) * data.R().evaluate(p);
    const Eigen::VectorXcd lam = data.lambda_at(p);
    for (Eigen::Index c = 0; c < n; ++c) {
        out.V.col(c) = solve_shifted_pencil(Ep, Ap, lam[c], forcing.col(c), rcond_floor).X;
    }
    if (data.one_sided()) {
        out.W = out.V;
        return out;
    }
    out.W.resize(sys.state_dim(), n);
    const Eigen::MatrixXcd forcing_w =
        sys.C().evaluate(p).transpose() * data.L().evaluate(p);
    const Eigen::VectorXcd mu = data.mu_at(p);
    for (Eigen::Index c = 0; c < n; ++c) {
        out.W.col(c) = solve_shifted_pencil(Ep.transpose(), Ap.transpose(), mu[c],
                                            forcing_w.col(c), rcond_floor)
                           .X;
    }
    return out;
}

struct SylvesterResiduals {
    double v = 0.0;
    std::optional<double> w;
};

// Relative residuals of the two parametric Sylvester equations with every
// series evaluated at p. For exactly terminated (finite) series these are at
// roundoff level; for truncated ones they reflect the dropped tail.
inline SylvesterResiduals sylvester_residual(const ParametricLTI& sys,
                                             const InterpolationData& data,
                                             const BasisSeries& basis, const Eigen::VectorXd& p) {
    const Eigen::MatrixXcd Ep = sys.E().evaluate(p);
    const Eigen::MatrixXcd Ap = sys.A().evaluate(p);
    const Eigen::MatrixXcd Vp = basis.V.evaluate(p);
    const Eigen::MatrixXcd Lp = data.Lambda().evaluate(p);
    const Eigen::MatrixXcd forcing = sys.B().evaluate(p) * data.R().evaluate(p);
    SylvesterResiduals res;
    const double fnorm = forcing.norm();
    res.v = (Ap * Vp - Ep * Vp * Lp + forcing).norm() / (fnorm > 0 ? fnorm : 1.0);
    if (!data.one_sided()) {
        const Eigen::MatrixXcd Wt = basis.effective_W().evaluate(p).transpose();
        const Eigen::MatrixXcd Mp = data.M().evaluate(p);
        const Eigen::MatrixXcd forcing_w = data.L().evaluate(p).transpose() * sys.C().evaluate(p);
        const double fwnorm = forcing_w.norm();
        res.w = (Wt * Ap - Mp.transpose() * Wt * Ep + forcing_w).norm() /
                (fwnorm > 0 ? fwnorm : 1.0);
    }
    return res;
}

} // namespace pmor

#endif // PMOR_COEFF_SOLVER_HPP
