// Copyright (c) 2026 The pmor developers
// SPDX-License-Identifier: Apache-2.0

#ifndef PMOR_VERIFY_HPP
#define PMOR_VERIFY_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <thread>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pmor/errors.hpp"
#include "pmor/interp_data.hpp"
#include "pmor/model.hpp"
#include "pmor/rom_builder.hpp"

namespace pmor {

enum class AxisScale { Linear, Log };

struct AxisSpec {
    AxisScale scale = AxisScale::Linear;
    double lo = 0.0;
    double hi = 0.0;
    int count = 1;
};

inline std::vector<double> axis_values(const AxisSpec& axis) {
    if (axis.count < 1) {
        throw DimensionError("AxisSpec: count must be >= 1");
    }
    if (axis.count > 1 && !(axis.lo < axis.hi)) {
        throw DimensionError("AxisSpec: lo < hi required when count > 1");
    }
    if (axis.scale == AxisScale::Log && !(axis.lo > 0.0)) {
        throw DimensionError("AxisSpec: log scale requires lo > 0");
    }
    std::vector<double> vals(static_cast<std::size_t>(axis.count));
    if (axis.count == 1) {
        vals[0] = axis.lo;
        return vals;
    }
    if (axis.scale == AxisScale::Linear) {
        for (int k = 0; k < axis.count; ++k) {
            vals[static_cast<std::size_t>(k)] =
                axis.lo + (axis.hi - axis.lo) * k / (axis.count - 1);
        }
    } else {
        const double llo = std::log10(axis.lo);
        const double lhi = std::log10(axis.hi);
        for (int k = 0; k < axis.count; ++k) {
            vals[static_cast<std::size_t>(k)] =
                std::pow(10.0, llo + (lhi - llo) * k / (axis.count - 1));
        }
    }
    return vals;
}

struct GridSpec {
    AxisSpec s_axis;
    bool s_imaginary = false; // multiply s values by the imaginary unit
    std::vector<AxisSpec> p_axes;
};

// Cartesian product of the parameter axes, first axis slowest.
inline std::vector<Eigen::VectorXd> parameter_grid(const std::vector<AxisSpec>& p_axes) {
    std::vector<std::vector<double>> per_axis;
    per_axis.reserve(p_axes.size());
    std::size_t total = 1;
    for (const auto& ax : p_axes) {
        per_axis.push_back(axis_values(ax));
        total *= per_axis.back().size();
    }
    std::vector<Eigen::VectorXd> out;
    out.reserve(total);
    std::vector<std::size_t> odo(p_axes.size(), 0);
    for (std::size_t t = 0; t < total; ++t) {
        Eigen::VectorXd p(static_cast<Eigen::Index>(p_axes.size()));
        for (std::size_t k = 0; k < p_axes.size(); ++k) {
            p[static_cast<Eigen::Index>(k)] = per_axis[k][odo[k]];
        }
        out.push_back(std::move(p));
        for (std::size_t k = p_axes.size(); k-- > 0;) {
            if (++odo[k] < per_axis[k].size()) {
                break;
            }
            odo[k] = 0;
        }
    }
    return out;
}

// Per-node errors |H - Hhat| on the (s, p) grid, s-major. Singular nodes are
// recorded as NaN; everything else is non-negative and finite. rel_err is
// abs_err normalized by the max of |H| over the grid.
struct ErrorGrid {
    std::vector<std::complex<double>> s_values;
    std::vector<Eigen::VectorXd> p_values;
    std::vector<double> abs_err;
    std::vector<double> rel_err;
    std::vector<double> fom_mag;
    std::vector<double> rom_mag;
    double max_fom_mag = 0.0;

    std::size_t index(std::size_t is, std::size_t ip) const { return is * p_values.size() + ip; }
    std::size_t size() const { return s_values.size() * p_values.size(); }
};

enum class FomSolveStrategy {
    Auto,            // HessenbergReuse for long s-axes, DenseLU otherwise
    DenseLU,         // one LU of (s E(p) - A(p)) per grid node, cost N^3 each
    HessenbergReuse, // one Hessenberg reduction per p, O(N^2) per s after that
};

struct GridOptions {
    FomSolveStrategy strategy = FomSolveStrategy::Auto;
    int threads = 0; // 0 = hardware concurrency
    double rcond_floor = kDefaultRcondFloor;
};

// Entrywise matrix 2-norm of the transfer error per node (|.| for SISO).
inline double transfer_norm2(const Eigen::MatrixXcd& M) {
    if (M.rows() == 1 && M.cols() == 1) {
        return std::abs(M(0, 0));
    }
    return Eigen::JacobiSVD<Eigen::MatrixXcd>(M).singularValues()(0);
}

namespace detail {

// Solve (s I - H) x = b for upper Hessenberg H by Givens elimination and
// back substitution; O(N^2). Sets *singular when a pivot collapses.
inline Eigen::VectorXcd hessenberg_shifted_solve(const Eigen::MatrixXcd& H,
                                                 std::complex<double> s, Eigen::VectorXcd b,
                                                 bool* singular) {
    const Eigen::Index n = H.rows();
    Eigen::MatrixXcd M = -H;
    M.diagonal().array() += s;
    for (Eigen::Index k = 0; k < n - 1; ++k) {
        Eigen::JacobiRotation<std::complex<double>> rot;
        rot.makeGivens(M(k, k), M(k + 1, k));
        M.rightCols(n - k).applyOnTheLeft(k, k + 1, rot.adjoint());
        b.applyOnTheLeft(k, k + 1, rot.adjoint());
    }
    double dmin = std::numeric_limits<double>::infinity();
    double dmax = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double a = std::abs(M(i, i));
        dmin = std::min(dmin, a);
        dmax = std::max(dmax, a);
    }
    if (!(dmin > 1e-14 * dmax) || dmax == 0.0) {
        *singular = true;
        return Eigen::VectorXcd::Zero(n);
    }
    *singular = false;
    Eigen::VectorXcd x(n);
    for (Eigen::Index i = n - 1; i >= 0; --i) {
        std::complex<double> acc = b(i);
        for (Eigen::Index j = i + 1; j < n; ++j) {
            acc -= M(i, j) * x(j);
        }
        x(i) = acc / M(i, i);
    }
    return x;
}

inline bool is_constant_identity(const MatrixSeries& S) {
    if (S.num_terms() != 1 || S.rows() != S.cols()) {
        return false;
    }
    const Eigen::MatrixXcd* t = S.term(MultiIndex::zero(S.nparams()));
    return t && (*t - Eigen::MatrixXcd::Identity(S.rows(), S.cols())).isZero(0.0);
}

// Per-parameter factorization for repeated shifted FOM solves:
// H(s;p) = (C Q) (s I - Hess)^{-1} (Q^H E^{-1} B) after reducing E^{-1}A to
// Hessenberg form. For E = I this is exact reuse of A(p) itself.
struct HessenbergTransferEvaluator {
    Eigen::MatrixXcd Hess; // upper Hessenberg similarity of E^{-1} A
    Eigen::MatrixXcd Qb;   // Q^H E^{-1} B
    Eigen::MatrixXcd CQ;   // C Q
    bool valid = false;

    HessenbergTransferEvaluator(const ParametricLTI& sys, const EvaluatedLTI& m,
                                double rcond_floor) {
        Eigen::MatrixXcd Atil;
        Eigen::MatrixXcd Btil;
        if (is_constant_identity(sys.E())) {
            Atil = m.A;
            Btil = m.B;
        } else {
            Eigen::PartialPivLU<Eigen::MatrixXcd> luE(m.E);
            if (!(lu_rcond(luE) >= rcond_floor)) {
                return; // E(p) numerically singular: leave invalid
            }
            Atil = luE.solve(m.A);
            Btil = luE.solve(m.B);
        }
        Eigen::HessenbergDecomposition<Eigen::MatrixXcd> hd(Atil);
        Hess = hd.matrixH();
        Qb = hd.matrixQ().adjoint() * Btil;
        CQ = (hd.matrixQ().adjoint() * m.C.adjoint()).adjoint();
        valid = true;
    }

    // Returns false at a numerically singular shift.
    bool eval(std::complex<double> s, Eigen::MatrixXcd& out) const {
        out.resize(CQ.rows(), Qb.cols());
        for (Eigen::Index j = 0; j < Qb.cols(); ++j) {
            bool singular = false;
            Eigen::VectorXcd z = hessenberg_shifted_solve(Hess, s, Qb.col(j), &singular);
            if (singular) {
                return false;
            }
            out.col(j) = CQ * z;
        }
        return true;
    }
};

template <typename Fn>
inline void parallel_over(std::size_t count, int threads, Fn&& body) {
    unsigned hw = std::thread::hardware_concurrency();
    std::size_t nthreads = threads > 0 ? static_cast<std::size_t>(threads)
                                       : static_cast<std::size_t>(hw > 0 ? hw : 1);
    nthreads = std::min(nthreads, count > 0 ? count : std::size_t{1});
    if (nthreads <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            body(i);
        }
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (std::size_t t = 0; t < nthreads; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < count; i += nthreads) {
                body(i);
            }
        });
    }
    for (auto& th : pool) {
        th.join();
    }
}

} // namespace detail

// Evaluate both transfer functions on every grid node and record the errors.
// Grid nodes are independent; parallelized over parameter values with
// results written to disjoint indices.
inline ErrorGrid error_grid(const ParametricLTI& sys, const RomBundle& bundle,
                            const GridSpec& grid, const GridOptions& opts = {}) {
    ErrorGrid out;
    const std::vector<double> s_real = axis_values(grid.s_axis);
    out.s_values.reserve(s_real.size());
    for (double v : s_real) {
        out.s_values.push_back(grid.s_imaginary ? std::complex<double>(0.0, v)
                                                : std::complex<double>(v, 0.0));
    }
    out.p_values = parameter_grid(grid.p_axes);
    if (static_cast<int>(grid.p_axes.size()) != sys.nparams()) {
        throw DimensionError("error_grid: parameter axis count does not match the model");
    }
    const std::size_t nS = out.s_values.size();
    const std::size_t nP = out.p_values.size();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    out.abs_err.assign(nS * nP, nan);
    out.rel_err.assign(nS * nP, nan);
    out.fom_mag.assign(nS * nP, nan);
    out.rom_mag.assign(nS * nP, nan);

    FomSolveStrategy strategy = opts.strategy;
    if (strategy == FomSolveStrategy::Auto) {
        strategy = nS >= 8 ? FomSolveStrategy::HessenbergReuse : FomSolveStrategy::DenseLU;
    }

    detail::parallel_over(nP, opts.threads, [&](std::size_t ip) {
        const Eigen::VectorXd& p = out.p_values[ip];
        const EvaluatedLTI m = {sys.E().evaluate(p), sys.A().evaluate(p), sys.B().evaluate(p),
                                sys.C().evaluate(p)};
        const ReducedRealization red = assemble_at(bundle, p);

        std::unique_ptr<detail::HessenbergTransferEvaluator> hess;
        if (strategy == FomSolveStrategy::HessenbergReuse) {
            hess = std::make_unique<detail::HessenbergTransferEvaluator>(sys, m,
                                                                         opts.rcond_floor);
        }

        Eigen::MatrixXcd H;
        for (std::size_t is = 0; is < nS; ++is) {
            const std::complex<double> s = out.s_values[is];
            const std::size_t node = out.index(is, ip);
            bool fom_ok = false;
            if (hess && hess->valid) {
                fom_ok = hess->eval(s, H);
            } else if (strategy == FomSolveStrategy::DenseLU) {
                try {
                    H = m.C * solve_shifted_pencil(m.E, m.A, s, m.B, opts.rcond_floor).X;
                    fom_ok = true;
                } catch (const SingularPencilError&) {
                }
            }
            if (!fom_ok) {
                continue; // leave NaN sentinel at this node
            }
            out.fom_mag[node] = transfer_norm2(H);
            try {
                Eigen::MatrixXcd Hhat =
                    red.C * solve_shifted_pencil(red.E, red.A, s, red.B, kReducedRcondFloor).X;
                out.rom_mag[node] = transfer_norm2(Hhat);
                out.abs_err[node] = transfer_norm2(H - Hhat);
            } catch (const SingularPencilError&) {
            }
        }
    });

    double max_fom = 0.0;
    for (double v : out.fom_mag) {
        if (std::isfinite(v)) {
            max_fom = std::max(max_fom, v);
        }
    }
    out.max_fom_mag = max_fom;
    for (std::size_t k = 0; k < out.abs_err.size(); ++k) {
        if (std::isfinite(out.abs_err[k])) {
            out.rel_err[k] = max_fom > 0.0 ? out.abs_err[k] / max_fom : out.abs_err[k];
        }
    }
    return out;
}

// One row of the tangential interpolation check.
struct InterpCheckEntry {
    int point_index = 0; // 1-based interpolation point
    Eigen::VectorXd p;
    char side = 'r'; // 'r' right / 'l' left
    std::complex<double> s;
    double residual = 0.0;
    bool singular = false;
};

// Relative tangential residuals ||H r - Hhat r|| / ||H r|| at s = lambda_i(p)
// (and the left analog at mu_i(p) in two-sided mode) for each sample
// parameter. Singular pencils are recorded per entry, not fatal.
inline std::vector<InterpCheckEntry> check_interpolation(
    const ParametricLTI& sys, const InterpolationData& data, const RomBundle& bundle,
    const std::vector<Eigen::VectorXd>& p_samples, const std::vector<int>& point_filter = {},
    double rcond_floor = kDefaultRcondFloor) {
    std::vector<InterpCheckEntry> entries;
    std::vector<int> points = point_filter;
    if (points.empty()) {
        for (int i = 1; i <= static_cast<int>(data.n()); ++i) {
            points.push_back(i);
        }
    }
    for (const auto& p : p_samples) {
        const Eigen::MatrixXcd Ep = sys.E().evaluate(p);
        const Eigen::MatrixXcd Ap = sys.A().evaluate(p);
        const Eigen::MatrixXcd Bp = sys.B().evaluate(p);
        const Eigen::MatrixXcd Cp = sys.C().evaluate(p);
        const ReducedRealization red = assemble_at(bundle, p);
        const Eigen::VectorXcd lam = data.lambda_at(p);
        const Eigen::MatrixXcd Rp = data.R().evaluate(p);

        for (int i : points) {
            InterpCheckEntry e;
            e.point_index = i;
            e.p = p;
            e.side = 'r';
            e.s = lam[i - 1];
            try {
                const Eigen::VectorXcd r = Rp.col(i - 1);
                const Eigen::VectorXcd fom =
                    Cp * solve_shifted_pencil(Ep, Ap, e.s, Bp * r, rcond_floor).X;
                const Eigen::VectorXcd rom =
                    red.C *
                    solve_shifted_pencil(red.E, red.A, e.s, red.B * r, kReducedRcondFloor).X;
                const double denom = fom.norm();
                e.residual = (fom - rom).norm() / (denom > 0 ? denom : 1.0);
            } catch (const SingularPencilError&) {
                e.singular = true;
                e.residual = std::numeric_limits<double>::quiet_NaN();
            }
            entries.push_back(e);
        }

        if (!data.one_sided()) {
            const Eigen::VectorXcd mu = data.mu_at(p);
            const Eigen::MatrixXcd Lp = data.L().evaluate(p);
            for (int i : points) {
                InterpCheckEntry e;
                e.point_index = i;
                e.p = p;
                e.side = 'l';
                e.s = mu[i - 1];
                try {
                    const Eigen::VectorXcd ell = Lp.col(i - 1);
                    // ell^T H(mu;p) via the transposed pencil
                    const Eigen::VectorXcd z =
                        solve_shifted_pencil(Ep.transpose(), Ap.transpose(), e.s,
                                             Cp.transpose() * ell, rcond_floor)
                            .X;
                    const Eigen::VectorXcd fom = Bp.transpose() * z;
                    const Eigen::VectorXcd zr =
                        solve_shifted_pencil(red.E.transpose(), red.A.transpose(), e.s,
                                             red.C.transpose() * ell, kReducedRcondFloor)
                            .X;
                    const Eigen::VectorXcd rom = red.B.transpose() * zr;
                    const double denom = fom.norm();
                    e.residual = (fom - rom).norm() / (denom > 0 ? denom : 1.0);
                } catch (const SingularPencilError&) {
                    e.singular = true;
                    e.residual = std::numeric_limits<double>::quiet_NaN();
                }
                entries.push_back(e);
            }
        }
    }
    return entries;
}

} // namespace pmor

#endif // PMOR_VERIFY_HPP
