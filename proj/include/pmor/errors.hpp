// Copyright (c) 2026 The pmor developers
// SPDX-License-Identifier: Apache-2.0

#ifndef PMOR_ERRORS_HPP
#define PMOR_ERRORS_HPP

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pmor {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Shape or parameter-count mismatch between operands.
class DimensionError : public Error {
public:
    explicit DimensionError(const std::string& msg) : Error(msg) {}
};

// A shifted pencil s*E - A is numerically singular (reciprocal condition
// estimate below the configured floor), i.e. s sits in the pencil spectrum
// up to numerical rank.
class SingularPencilError : public Error {
public:
    SingularPencilError(const std::string& msg, std::complex<double> shift, double rcond)
        : Error(msg), shift_(shift), rcond_(rcond) {}

    std::complex<double> shift() const { return shift_; }
    double rcond() const { return rcond_; }

private:
    std::complex<double> shift_;
    double rcond_;
};

// An interpolation curve crosses the pencil spectrum somewhere in the
// sampled parameter set. Carries the offending (point index, parameter)
// pairs.
class SpectrumCollisionError : public Error {
public:
    struct Collision {
        int point_index;               // which interpolation point (0-based)
        std::vector<double> parameter; // where in the box
        double rcond;
    };

    SpectrumCollisionError(const std::string& msg, std::vector<Collision> collisions)
        : Error(msg), collisions_(std::move(collisions)) {}

    const std::vector<Collision>& collisions() const { return collisions_; }

private:
    std::vector<Collision> collisions_;
};

// The reduced E(p) came out numerically singular at the requested parameter.
class SingularReducedEError : public Error {
public:
    SingularReducedEError(const std::string& msg, double rcond) : Error(msg), rcond_(rcond) {}
    double rcond() const { return rcond_; }

private:
    double rcond_;
};

// Malformed input file. Carries file name and 1-based line number.
class ParseError : public Error {
public:
    ParseError(std::string file, int line, const std::string& msg)
        : Error(file + ":" + std::to_string(line) + ": " + msg),
          file_(std::move(file)),
          line_(line) {}

    const std::string& file() const { return file_; }
    int line() const { return line_; }

private:
    std::string file_;
    int line_;
};

// A series file stores the same multi-index twice.
class DuplicateTermError : public ParseError {
public:
    DuplicateTermError(const std::string& file, int line, const std::string& msg)
        : ParseError(file, line, msg) {}
};

} // namespace pmor

#endif // PMOR_ERRORS_HPP
