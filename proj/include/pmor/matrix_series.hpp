// Copyright (c) 2026 The pmor developers
// SPDX-License-Identifier: Apache-2.0

#ifndef PMOR_MATRIX_SERIES_HPP
#define PMOR_MATRIX_SERIES_HPP

#include <complex>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pmor/errors.hpp"
#include "pmor/multiindex.hpp"

namespace pmor {

// Axis-aligned parameter box [lower_1,upper_1] x ... x [lower_nu,upper_nu],
// the compact parameter set everything is expanded over.
struct ParamBox {
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;

    ParamBox() = default;

    ParamBox(Eigen::VectorXd lo, Eigen::VectorXd up) : lower(std::move(lo)), upper(std::move(up)) {
        if (lower.size() != upper.size()) {
            throw DimensionError("ParamBox: lower/upper length mismatch");
        }
        for (Eigen::Index k = 0; k < lower.size(); ++k) {
            if (lower[k] > upper[k]) {
                throw DimensionError("ParamBox: lower > upper in component " + std::to_string(k));
            }
        }
    }

    static ParamBox interval(double lo, double up) {
        Eigen::VectorXd l(1), u(1);
        l << lo;
        u << up;
        return ParamBox(l, u);
    }

    int nparams() const { return static_cast<int>(lower.size()); }

    Eigen::VectorXd center() const { return 0.5 * (lower + upper); }

    bool contains(const Eigen::VectorXd& p) const {
        if (p.size() != lower.size()) {
            return false;
        }
        for (Eigen::Index k = 0; k < p.size(); ++k) {
            if (p[k] < lower[k] || p[k] > upper[k]) {
                return false;
            }
        }
        return true;
    }

    // Exact max of |p^i| over the box: prod_k max(|l_k|,|u_k|)^{i_k}.
    double monomial_max(const MultiIndex& i) const {
        if (i.size() != nparams()) {
            throw DimensionError("ParamBox::monomial_max: multi-index length mismatch");
        }
        double acc = 1.0;
        for (int k = 0; k < i.size(); ++k) {
            const double m = std::max(std::abs(lower[k]), std::abs(upper[k]));
            for (int t = 0; t < i[k]; ++t) {
                acc *= m;
            }
        }
        return acc;
    }
};

// Truncated matrix power series sum_i S_i p^i with dense complex
// coefficients, stored sparsely in index space: an absent multi-index is a
// zero coefficient. Immutable in spirit: all operations return new series.
class MatrixSeries {
public:
    using TermMap = std::map<MultiIndex, Eigen::MatrixXcd>;

    MatrixSeries(Eigen::Index nrows, Eigen::Index ncols, int nparams)
        : rows_(nrows), cols_(ncols), nparams_(nparams) {
        if (nrows <= 0 || ncols <= 0 || nparams < 0) {
            throw DimensionError("MatrixSeries: invalid shape");
        }
    }

    static MatrixSeries constant(const Eigen::MatrixXcd& M, int nparams) {
        MatrixSeries s(M.rows(), M.cols(), nparams);
        s.set_term(MultiIndex::zero(nparams), M);
        return s;
    }

    static MatrixSeries constant(const Eigen::MatrixXd& M, int nparams) {
        return constant(Eigen::MatrixXcd(M.cast<std::complex<double>>()), nparams);
    }

    static MatrixSeries identity(Eigen::Index n, int nparams) {
        return constant(Eigen::MatrixXcd(Eigen::MatrixXcd::Identity(n, n)), nparams);
    }

    Eigen::Index rows() const { return rows_; }
    Eigen::Index cols() const { return cols_; }
    int nparams() const { return nparams_; }

    const TermMap& terms() const { return terms_; }
    std::size_t num_terms() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }

    // Highest stored total degree, or -1 for the empty (zero) series.
    int max_degree() const {
        int d = -1;
        for (const auto& [idx, M] : terms_) {
            d = std::max(d, idx.degree());
        }
        return d;
    }

    bool has_term(const MultiIndex& i) const { return terms_.count(i) > 0; }

    // Stored coefficient, or nullptr when the index is absent (zero).
    const Eigen::MatrixXcd* term(const MultiIndex& i) const {
        auto it = terms_.find(i);
        return it == terms_.end() ? nullptr : &it->second;
    }

    // Coefficient of the zero multi-index (zero matrix if absent).
    Eigen::MatrixXcd leading_term() const {
        const Eigen::MatrixXcd* t = term(MultiIndex::zero(nparams_));
        return t ? *t : Eigen::MatrixXcd::Zero(rows_, cols_);
    }

    // Inserts or overwrites the coefficient at i.
    void set_term(const MultiIndex& i, Eigen::MatrixXcd M) {
        if (i.size() != nparams_) {
            throw DimensionError("MatrixSeries::set_term: multi-index length " +
                                 std::to_string(i.size()) + " != nparams " +
                                 std::to_string(nparams_));
        }
        if (M.rows() != rows_ || M.cols() != cols_) {
            throw DimensionError("MatrixSeries::set_term: coefficient shape mismatch at " +
                                 i.to_string());
        }
        terms_[i] = std::move(M);
    }

    // Adds M into the coefficient at i, creating it if absent.
    void add_to_term(const MultiIndex& i, const Eigen::MatrixXcd& M) {
        auto it = terms_.find(i);
        if (it == terms_.end()) {
            set_term(i, M);
        } else {
            if (M.rows() != rows_ || M.cols() != cols_) {
                throw DimensionError("MatrixSeries::add_to_term: coefficient shape mismatch");
            }
            it->second += M;
        }
    }

    // sum_i S_i p^i over all stored terms; exact for finitely supported series.
    Eigen::MatrixXcd evaluate(const std::vector<std::complex<double>>& p) const {
        if (static_cast<int>(p.size()) != nparams_) {
            throw DimensionError("MatrixSeries::evaluate: parameter vector length " +
                                 std::to_string(p.size()) + " != nparams " +
                                 std::to_string(nparams_));
        }
        Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(rows_, cols_);
        for (const auto& [idx, M] : terms_) {
            acc += monomial(p, idx) * M;
        }
        return acc;
    }

    Eigen::MatrixXcd evaluate(const Eigen::VectorXd& p) const {
        std::vector<std::complex<double>> pc(p.data(), p.data() + p.size());
        return evaluate(pc);
    }

    Eigen::MatrixXcd evaluate(const Eigen::VectorXcd& p) const {
        std::vector<std::complex<double>> pc(p.data(), p.data() + p.size());
        return evaluate(pc);
    }

    // max_{p in box}|p^i| * ||S_i||_F for a stored index i.
    double term_weight(const MultiIndex& i, const ParamBox& box) const {
        const Eigen::MatrixXcd* t = term(i);
        if (!t) {
            throw DimensionError("MatrixSeries::term_weight: index " + i.to_string() +
                                 " is not stored");
        }
        return box.monomial_max(i) * t->norm();
    }

    // Drops all terms whose weight is <= tol; ordering of the rest is kept.
    MatrixSeries truncated(double tol, const ParamBox& box) const {
        if (tol <= 0) {
            throw DimensionError("MatrixSeries::truncated: tol must be positive");
        }
        MatrixSeries out(rows_, cols_, nparams_);
        for (const auto& [idx, M] : terms_) {
            if (box.monomial_max(idx) * M.norm() > tol) {
                out.set_term(idx, M);
            }
        }
        return out;
    }

    MatrixSeries transposed() const {
        MatrixSeries out(cols_, rows_, nparams_);
        for (const auto& [idx, M] : terms_) {
            out.set_term(idx, M.transpose());
        }
        return out;
    }

    MatrixSeries adjointed() const {
        MatrixSeries out(cols_, rows_, nparams_);
        for (const auto& [idx, M] : terms_) {
            out.set_term(idx, M.adjoint());
        }
        return out;
    }

    MatrixSeries operator+(const MatrixSeries& other) const {
        if (rows_ != other.rows_ || cols_ != other.cols_ || nparams_ != other.nparams_) {
            throw DimensionError("MatrixSeries::operator+: shape mismatch");
        }
        MatrixSeries out = *this;
        for (const auto& [idx, M] : other.terms_) {
            out.add_to_term(idx, M);
        }
        return out;
    }

    MatrixSeries operator*(std::complex<double> a) const {
        MatrixSeries out(rows_, cols_, nparams_);
        for (const auto& [idx, M] : terms_) {
            out.set_term(idx, a * M);
        }
        return out;
    }

    // True when every stored coefficient has exactly zero imaginary part.
    bool is_real() const {
        for (const auto& [idx, M] : terms_) {
            if (!M.imag().isZero(0.0)) {
                return false;
            }
        }
        return true;
    }

private:
    Eigen::Index rows_;
    Eigen::Index cols_;
    int nparams_;
    TermMap terms_;
};

// Cauchy product: result term at rho is sum_{i+j=rho} S_i T_j; the support
// is the Minkowski sum of the operand supports.
inline MatrixSeries convolve(const MatrixSeries& S, const MatrixSeries& T) {
    if (S.cols() != T.rows()) {
        throw DimensionError("convolve: inner dimensions " + std::to_string(S.cols()) + " and " +
                             std::to_string(T.rows()) + " do not match");
    }
    if (S.nparams() != T.nparams()) {
        throw DimensionError("convolve: parameter-count mismatch");
    }
    MatrixSeries out(S.rows(), T.cols(), S.nparams());
    for (const auto& [i, Si] : S.terms()) {
        for (const auto& [j, Tj] : T.terms()) {
            out.add_to_term(i + j, Si * Tj);
        }
    }
    return out;
}

} // namespace pmor

#endif // PMOR_MATRIX_SERIES_HPP
