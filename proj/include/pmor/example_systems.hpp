// Copyright (c) 2026 The pmor developers
// SPDX-License-Identifier: Apache-2.0

#ifndef PMOR_EXAMPLE_SYSTEMS_HPP
#define PMOR_EXAMPLE_SYSTEMS_HPP

#include <cmath>
#include <complex>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "pmor/coeff_solver.hpp"
#include "pmor/interp_data.hpp"
#include "pmor/matrix_series.hpp"
#include "pmor/model.hpp"

namespace pmor {

// The three built-in benchmark systems.
enum class ExampleId { Toy1, Toy2, Penzl };

inline const char* to_string(ExampleId id) {
    switch (id) {
    case ExampleId::Toy1:
        return "toy1";
    case ExampleId::Toy2:
        return "toy2";
    case ExampleId::Penzl:
        return "penzl";
    }
    return "?";
}

inline std::optional<ExampleId> example_id_from_string(const std::string& s) {
    for (ExampleId id : {ExampleId::Toy1, ExampleId::Toy2, ExampleId::Penzl}) {
        if (s == to_string(id)) {
            return id;
        }
    }
    return std::nullopt;
}

struct ExampleBundle {
    ParametricLTI sys;
    InterpolationData data;
    SolverConfig config;
};

namespace detail {

// N = 3 system with the parameter entering only through B(p) = [p, 1-p, 1]^T;
// two-sided constant interpolation data {1,3}/{2,4}, all-ones directions.
// The basis series terminate exactly after two (resp. one) degrees.
inline ExampleBundle build_toy1() {
    const int nu = 1;
    Eigen::MatrixXd A0 = (-Eigen::Vector3d(1, 1, 2)).asDiagonal();
    Eigen::Vector3d B0(0, 1, 1);
    Eigen::Vector3d B1(1, -1, 0);
    Eigen::RowVector3d C0(2, 1, 1);

    MatrixSeries B(3, 1, nu);
    B.set_term(MultiIndex::zero(nu), B0.cast<std::complex<double>>());
    B.set_term(MultiIndex::unit(nu, 0), B1.cast<std::complex<double>>());

    ParametricLTI sys(MatrixSeries::identity(3, nu), MatrixSeries::constant(A0, nu), std::move(B),
                      MatrixSeries::constant(Eigen::MatrixXd(C0), nu), ParamBox::interval(0, 1));

    Eigen::VectorXcd lambdas(2), mus(2);
    lambdas << 1.0, 3.0;
    mus << 2.0, 4.0;
    Eigen::MatrixXcd Rdirs = Eigen::MatrixXcd::Ones(1, 2);
    Eigen::MatrixXcd Ldirs = Eigen::MatrixXcd::Ones(1, 2);
    InterpolationData data = make_constant_data(lambdas, mus, Rdirs, Ldirs, nu);

    SolverConfig cfg;
    cfg.tol = 1e-8;
    return {std::move(sys), std::move(data), cfg};
}

// N = 3 system with a rotation-like coupling p in A(p); one-sided data with
// points {0.1, 5} and tau = 1e-5.
inline ExampleBundle build_toy2() {
    const int nu = 1;
    Eigen::Matrix3d A0;
    A0 << -2, 0, 0, 0, -1, 0, 0, 0, -1;
    Eigen::Matrix3d A1;
    A1 << 0, 1, 0, -1, 0, 0, 0, 0, 0;
    Eigen::Vector3d B0(1, 0, 1);
    Eigen::RowVector3d C0(1, 0, 1);

    MatrixSeries A(3, 3, nu);
    A.set_term(MultiIndex::zero(nu), A0.cast<std::complex<double>>());
    A.set_term(MultiIndex::unit(nu, 0), A1.cast<std::complex<double>>());

    ParametricLTI sys(MatrixSeries::identity(3, nu), std::move(A),
                      MatrixSeries::constant(Eigen::MatrixXd(B0), nu),
                      MatrixSeries::constant(Eigen::MatrixXd(C0), nu), ParamBox::interval(0, 1));

    Eigen::VectorXcd lambdas(2);
    lambdas << 0.1, 5.0;
    InterpolationData data =
        make_one_sided_data(lambdas, Eigen::MatrixXcd::Ones(1, 2), sys.num_outputs(), nu);

    SolverConfig cfg;
    cfg.tol = 1e-5;
    return {std::move(sys), std::move(data), cfg};
}

// Parameter-dependent variant of the classic N = 1006 benchmark: three
// weakly damped 2x2 rotation blocks (the first with speed 100 + p) and the
// diagonal tail -diag(1..1000); B = C^T = [10*ones(6); ones(1000)].
// One-sided data: 40 log-spaced points on [1e-1, 1e3]i, tau = 1e-7.
inline ExampleBundle build_penzl() {
    const int nu = 1;
    const int N = 1006;
    Eigen::MatrixXd A0 = Eigen::MatrixXd::Zero(N, N);
    auto put_block = [&](int at, double speed) {
        A0(at, at) = -1;
        A0(at, at + 1) = speed;
        A0(at + 1, at) = -speed;
        A0(at + 1, at + 1) = -1;
    };
    put_block(0, 100);
    put_block(2, 200);
    put_block(4, 400);
    for (int k = 0; k < 1000; ++k) {
        A0(6 + k, 6 + k) = -(k + 1);
    }
    Eigen::MatrixXd A1 = Eigen::MatrixXd::Zero(N, N);
    A1(0, 1) = 1;
    A1(1, 0) = -1;

    Eigen::VectorXd b = Eigen::VectorXd::Ones(N);
    b.head(6).setConstant(10);

    MatrixSeries A(N, N, nu);
    A.set_term(MultiIndex::zero(nu), A0.cast<std::complex<double>>());
    A.set_term(MultiIndex::unit(nu, 0), A1.cast<std::complex<double>>());

    ParametricLTI sys(MatrixSeries::identity(N, nu), std::move(A),
                      MatrixSeries::constant(Eigen::MatrixXd(b), nu),
                      MatrixSeries::constant(Eigen::MatrixXd(b.transpose()), nu),
                      ParamBox::interval(0, 1));

    const int n = 40;
    Eigen::VectorXcd lambdas(n);
    for (int k = 0; k < n; ++k) {
        const double expo = -1.0 + 4.0 * k / (n - 1);
        lambdas[k] = std::complex<double>(0.0, std::pow(10.0, expo));
    }
    InterpolationData data =
        make_one_sided_data(lambdas, Eigen::MatrixXcd::Ones(1, n), sys.num_outputs(), nu);

    SolverConfig cfg;
    cfg.tol = 1e-7;
    return {std::move(sys), std::move(data), cfg};
}

} // namespace detail

inline ExampleBundle build_example(ExampleId id) {
    switch (id) {
    case ExampleId::Toy1:
        return detail::build_toy1();
    case ExampleId::Toy2:
        return detail::build_toy2();
    case ExampleId::Penzl:
        return detail::build_penzl();
    }
    throw Error("build_example: unknown example id");
}

} // namespace pmor

#endif // PMOR_EXAMPLE_SYSTEMS_HPP
