// Copyright (c) 2026 The pmor developers
// SPDX-License-Identifier: Apache-2.0

#ifndef PMOR_MULTIINDEX_HPP
#define PMOR_MULTIINDEX_HPP

#include <algorithm>
#include <complex>
#include <numeric>
#include <string>
#include <vector>

#include "pmor/errors.hpp"

namespace pmor {

// Exponent vector in N_0^nu indexing a power-series term p^i. Ordered by
// total degree first, then lexicographically on the exponents, so iterating
// a sorted container visits each degree's prerequisites before the next
// degree starts.
class MultiIndex {
public:
    MultiIndex() = default;

    explicit MultiIndex(std::vector<int> exponents) : e_(std::move(exponents)) {
        for (int v : e_) {
            if (v < 0) {
                throw DimensionError("MultiIndex: exponents must be non-negative");
            }
        }
    }

    static MultiIndex zero(int nparams) { return MultiIndex(std::vector<int>(nparams, 0)); }

    // Unit index with exponent 1 in slot k.
    static MultiIndex unit(int nparams, int k) {
        std::vector<int> e(nparams, 0);
        e.at(k) = 1;
        return MultiIndex(std::move(e));
    }

    int size() const { return static_cast<int>(e_.size()); }

    // Total degree |i|.
    int degree() const { return std::accumulate(e_.begin(), e_.end(), 0); }

    int operator[](int k) const { return e_[k]; }

    const std::vector<int>& exponents() const { return e_; }

    MultiIndex operator+(const MultiIndex& other) const {
        check_same_size(other);
        std::vector<int> sum(e_.size());
        for (std::size_t k = 0; k < e_.size(); ++k) {
            sum[k] = e_[k] + other.e_[k];
        }
        return MultiIndex(std::move(sum));
    }

    bool operator==(const MultiIndex& other) const { return e_ == other.e_; }
    bool operator!=(const MultiIndex& other) const { return !(*this == other); }

    // Graded lexicographic order.
    bool operator<(const MultiIndex& other) const {
        check_same_size(other);
        const int da = degree();
        const int db = other.degree();
        if (da != db) {
            return da < db;
        }
        return std::lexicographical_compare(e_.begin(), e_.end(), other.e_.begin(),
                                            other.e_.end());
    }

    std::string to_string() const {
        std::string s = "(";
        for (std::size_t k = 0; k < e_.size(); ++k) {
            if (k > 0) {
                s += ",";
            }
            s += std::to_string(e_[k]);
        }
        return s + ")";
    }

private:
    void check_same_size(const MultiIndex& other) const {
        if (e_.size() != other.e_.size()) {
            throw DimensionError("MultiIndex: parameter-count mismatch (" +
                                 std::to_string(e_.size()) + " vs " +
                                 std::to_string(other.e_.size()) + ")");
        }
    }

    std::vector<int> e_;
};

// All multi-indices of length nparams with total degree exactly d, in
// graded-lex order (which at fixed degree is plain lex order).
inline std::vector<MultiIndex> indices_of_degree(int nparams, int d) {
    std::vector<MultiIndex> out;
    std::vector<int> current(static_cast<std::size_t>(nparams), 0);
    // Recursively distribute d over the slots; lex order falls out of
    // iterating the leading exponent in ascending order.
    auto rec = [&](auto&& self, int slot, int remaining) -> void {
        if (slot == nparams - 1) {
            current[slot] = remaining;
            out.emplace_back(current);
            return;
        }
        for (int v = 0; v <= remaining; ++v) {
            current[slot] = v;
            self(self, slot + 1, remaining - v);
        }
    };
    if (nparams == 0) {
        if (d == 0) {
            out.emplace_back(std::vector<int>{});
        }
        return out;
    }
    rec(rec, 0, d);
    return out;
}

// The monomial p^i for a real or complex parameter vector.
template <typename Scalar>
std::complex<double> monomial(const std::vector<Scalar>& p, const MultiIndex& i) {
    if (static_cast<int>(p.size()) != i.size()) {
        throw DimensionError("monomial: parameter vector length " + std::to_string(p.size()) +
                             " does not match multi-index length " + std::to_string(i.size()));
    }
    std::complex<double> acc(1.0, 0.0);
    for (int k = 0; k < i.size(); ++k) {
        for (int t = 0; t < i[k]; ++t) {
            acc *= std::complex<double>(p[static_cast<std::size_t>(k)]);
        }
    }
    return acc;
}

} // namespace pmor

#endif // PMOR_MULTIINDEX_HPP
