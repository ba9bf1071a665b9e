// Copyright (c) 2026 The pmor developers
// SPDX-License-Identifier: Apache-2.0

#ifndef PMOR_IO_HPP
#define PMOR_IO_HPP

#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "pmor/coeff_solver.hpp"
#include "pmor/errors.hpp"
#include "pmor/interp_data.hpp"
#include "pmor/matrix_series.hpp"
#include "pmor/model.hpp"
#include "pmor/rom_builder.hpp"
#include "pmor/verify.hpp"

namespace pmor {
namespace io {

// All floats are written with 17 significant digits so that parsing gives
// back bit-identical doubles and repeated runs emit byte-identical files.
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Complex literal grammar: re+imj / re-imj, decimal floats, no locale.
inline std::string format_complex(std::complex<double> z) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%.17g%s%.17gj", z.real(), std::signbit(z.imag()) ? "-" : "+",
                  std::abs(z.imag()));
    return buf;
}

// Accepted forms: "a", "a+bj", "a-bj", "bj".
inline bool try_parse_complex(const std::string& tok, std::complex<double>& out) {
    const char* s = tok.c_str();
    char* end = nullptr;
    const double first = std::strtod(s, &end);
    if (end == s) {
        return false;
    }
    if (*end == '\0') {
        out = {first, 0.0};
        return true;
    }
    if (*end == 'j' && *(end + 1) == '\0') {
        out = {0.0, first};
        return true;
    }
    if (*end != '+' && *end != '-') {
        return false;
    }
    char* end2 = nullptr;
    const double second = std::strtod(end, &end2);
    if (end2 == end || *end2 != 'j' || *(end2 + 1) != '\0') {
        return false;
    }
    out = {first, second};
    return true;
}

inline std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream ss(line);
    std::string t;
    while (ss >> t) {
        toks.push_back(t);
    }
    return toks;
}

// Line source with comment stripping ('#' to end of line), blank-line
// skipping, and position tracking for error messages.
class LineReader {
public:
    LineReader(std::istream& in, std::string file) : in_(in), file_(std::move(file)) {}

    const std::string& file() const { return file_; }
    int line() const { return line_; }

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(file_, line_, msg); }

    bool next(std::vector<std::string>& toks) {
        std::string raw;
        while (std::getline(in_, raw)) {
            ++line_;
            const auto hash = raw.find('#');
            if (hash != std::string::npos) {
                raw.erase(hash);
            }
            toks = tokenize(raw);
            if (!toks.empty()) {
                return true;
            }
        }
        return false;
    }

    std::vector<std::string> require(const std::string& what) {
        std::vector<std::string> toks;
        if (!next(toks)) {
            fail("unexpected end of file, expected " + what);
        }
        return toks;
    }

private:
    std::istream& in_;
    std::string file_;
    int line_ = 0;
};

inline long parse_int(LineReader& r, const std::string& tok, const std::string& what) {
    char* end = nullptr;
    const long v = std::strtol(tok.c_str(), &end, 10);
    if (end == tok.c_str() || *end != '\0') {
        r.fail("expected integer for " + what + ", found '" + tok + "'");
    }
    return v;
}

inline double parse_double(LineReader& r, const std::string& tok, const std::string& what) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0') {
        r.fail("expected number for " + what + ", found '" + tok + "'");
    }
    return v;
}

// `key value` or `key = value` lines used by the flag headers.
inline std::string read_keyed_value(LineReader& r, const std::string& key) {
    auto toks = r.require("'" + key + "' line");
    if (toks[0] != key) {
        r.fail("expected '" + key + "', found '" + toks[0] + "'");
    }
    if (toks.size() == 3 && toks[1] == "=") {
        return toks[2];
    }
    if (toks.size() == 2) {
        return toks[1];
    }
    r.fail("malformed '" + key + "' line");
}

// ---------------------------------------------------------------------------
// Matrix-series blocks
//
//   mseries <nrows> <ncols> <nparams> <nterms>
//   idx <e_1> ... <e_nu>
//   <nrows lines of ncols complex entries>
//   ...

inline void write_matrix_series(std::ostream& os, const MatrixSeries& S) {
    os << "mseries " << S.rows() << ' ' << S.cols() << ' ' << S.nparams() << ' ' << S.num_terms()
       << '\n';
    for (const auto& [idx, M] : S.terms()) {
        os << "idx";
        for (int k = 0; k < idx.size(); ++k) {
            os << ' ' << idx[k];
        }
        os << '\n';
        std::string row;
        for (Eigen::Index i = 0; i < M.rows(); ++i) {
            row.clear();
            for (Eigen::Index j = 0; j < M.cols(); ++j) {
                if (j > 0) {
                    row += ' ';
                }
                row += format_complex(M(i, j));
            }
            row += '\n';
            os << row;
        }
    }
}

inline MatrixSeries read_matrix_series(LineReader& r) {
    auto header = r.require("'mseries' header");
    if (header[0] != "mseries" || header.size() != 5) {
        r.fail("expected 'mseries <nrows> <ncols> <nparams> <nterms>', found '" + header[0] +
               "' line with " + std::to_string(header.size()) + " tokens");
    }
    const long nrows = parse_int(r, header[1], "nrows");
    const long ncols = parse_int(r, header[2], "ncols");
    const long nparams = parse_int(r, header[3], "nparams");
    const long nterms = parse_int(r, header[4], "nterms");
    if (nrows <= 0 || ncols <= 0 || nparams < 1 || nterms < 0) {
        r.fail("invalid mseries header values");
    }
    MatrixSeries S(nrows, ncols, static_cast<int>(nparams));
    for (long t = 0; t < nterms; ++t) {
        auto idx_line = r.require("term index line 'idx ...'");
        if (idx_line[0] != "idx" || static_cast<long>(idx_line.size()) != nparams + 1) {
            r.fail("expected 'idx' with " + std::to_string(nparams) + " exponents");
        }
        std::vector<int> exps;
        exps.reserve(static_cast<std::size_t>(nparams));
        for (long k = 0; k < nparams; ++k) {
            const long e = parse_int(r, idx_line[static_cast<std::size_t>(k + 1)], "exponent");
            if (e < 0) {
                r.fail("negative exponent");
            }
            exps.push_back(static_cast<int>(e));
        }
        MultiIndex idx(std::move(exps));
        if (S.has_term(idx)) {
            throw DuplicateTermError(r.file(), r.line(),
                                     "duplicate multi-index " + idx.to_string());
        }
        Eigen::MatrixXcd M(nrows, ncols);
        for (long i = 0; i < nrows; ++i) {
            auto row = r.require("matrix row " + std::to_string(i + 1) + " of term " +
                                 idx.to_string());
            if (static_cast<long>(row.size()) != ncols) {
                r.fail("expected " + std::to_string(ncols) + " entries, found " +
                       std::to_string(row.size()));
            }
            for (long j = 0; j < ncols; ++j) {
                std::complex<double> z;
                if (!try_parse_complex(row[static_cast<std::size_t>(j)], z)) {
                    r.fail("malformed complex literal '" + row[static_cast<std::size_t>(j)] +
                           "'");
                }
                M(i, j) = z;
            }
        }
        S.set_term(idx, std::move(M));
    }
    return S;
}

inline void expect_tag(LineReader& r, const std::string& tag) {
    auto toks = r.require("section tag '" + tag + "'");
    if (toks.size() != 1 || toks[0] != tag) {
        r.fail("expected section tag '" + tag + "', found '" + toks[0] + "'");
    }
}

} // namespace io

// ---------------------------------------------------------------------------
// Model bundle: a directory with model.pmor plus one mseries file per matrix.

inline constexpr const char* kModelHeaderName = "model.pmor";

inline void write_model(const std::filesystem::path& dir, const ParametricLTI& sys) {
    std::filesystem::create_directories(dir);
    const char* names[4] = {"E.mseries", "A.mseries", "B.mseries", "C.mseries"};
    const MatrixSeries* series[4] = {&sys.E(), &sys.A(), &sys.B(), &sys.C()};
    for (int k = 0; k < 4; ++k) {
        std::ofstream os(dir / names[k]);
        if (!os) {
            throw Error("cannot write " + (dir / names[k]).string());
        }
        io::write_matrix_series(os, *series[k]);
    }
    std::ofstream os(dir / kModelHeaderName);
    if (!os) {
        throw Error("cannot write " + (dir / kModelHeaderName).string());
    }
    os << "# pmor model\n";
    os << "N = " << sys.state_dim() << '\n';
    os << "m = " << sys.num_inputs() << '\n';
    os << "ell = " << sys.num_outputs() << '\n';
    os << "nu = " << sys.nparams() << '\n';
    os << "box_lower =";
    for (int k = 0; k < sys.nparams(); ++k) {
        os << ' ' << io::format_double(sys.box().lower[k]);
    }
    os << '\n';
    os << "box_upper =";
    for (int k = 0; k < sys.nparams(); ++k) {
        os << ' ' << io::format_double(sys.box().upper[k]);
    }
    os << '\n';
    os << "E = E.mseries\nA = A.mseries\nB = B.mseries\nC = C.mseries\n";
}

inline ParametricLTI parse_model(const std::filesystem::path& path) {
    std::filesystem::path header = path;
    if (std::filesystem::is_directory(header)) {
        header /= kModelHeaderName;
    }
    std::ifstream in(header);
    if (!in) {
        throw ParseError(header.string(), 0, "cannot open model header");
    }
    io::LineReader r(in, header.string());
    std::map<std::string, std::vector<std::string>> kv;
    std::vector<std::string> toks;
    while (r.next(toks)) {
        if (toks.size() < 3 || toks[1] != "=") {
            r.fail("expected 'key = value' line");
        }
        kv[toks[0]] = std::vector<std::string>(toks.begin() + 2, toks.end());
    }
    for (const char* key : {"N", "m", "ell", "nu", "box_lower", "box_upper", "E", "A", "B", "C"}) {
        if (!kv.count(key)) {
            throw ParseError(header.string(), r.line(), std::string("missing key '") + key + "'");
        }
    }
    const long N = std::strtol(kv["N"][0].c_str(), nullptr, 10);
    const long m = std::strtol(kv["m"][0].c_str(), nullptr, 10);
    const long ell = std::strtol(kv["ell"][0].c_str(), nullptr, 10);
    const long nu = std::strtol(kv["nu"][0].c_str(), nullptr, 10);
    if (static_cast<long>(kv["box_lower"].size()) != nu ||
        static_cast<long>(kv["box_upper"].size()) != nu) {
        throw ParseError(header.string(), 0, "box_lower/box_upper must have nu entries");
    }
    Eigen::VectorXd lo(nu), up(nu);
    for (long k = 0; k < nu; ++k) {
        lo[k] = std::strtod(kv["box_lower"][static_cast<std::size_t>(k)].c_str(), nullptr);
        up[k] = std::strtod(kv["box_upper"][static_cast<std::size_t>(k)].c_str(), nullptr);
    }
    const std::filesystem::path dir = header.parent_path();
    auto load_series = [&](const std::string& rel) {
        const std::filesystem::path sp = dir / rel;
        std::ifstream sin(sp);
        if (!sin) {
            throw ParseError(sp.string(), 0, "cannot open series file");
        }
        io::LineReader sr(sin, sp.string());
        return io::read_matrix_series(sr);
    };
    MatrixSeries E = load_series(kv["E"][0]);
    MatrixSeries A = load_series(kv["A"][0]);
    MatrixSeries B = load_series(kv["B"][0]);
    MatrixSeries C = load_series(kv["C"][0]);
    if (E.rows() != N || A.rows() != N || B.rows() != N || B.cols() != m || C.rows() != ell ||
        C.cols() != N || E.nparams() != nu) {
        throw ParseError(header.string(), 0, "declared dimensions do not match series shapes");
    }
    return ParametricLTI(std::move(E), std::move(A), std::move(B), std::move(C),
                         ParamBox(std::move(lo), std::move(up)));
}

// ---------------------------------------------------------------------------
// Interpolation-data file: header, flags, then LAMBDA/M/R/L sections.

inline void write_data(const std::filesystem::path& path, const InterpolationData& data) {
    std::ofstream os(path);
    if (!os) {
        throw Error("cannot write " + path.string());
    }
    os << "# pmor interpolation data\n";
    os << "idata " << data.n() << ' ' << data.num_inputs() << ' ' << data.num_outputs() << ' '
       << data.nparams() << '\n';
    os << "one_sided = " << (data.one_sided() ? 1 : 0) << '\n';
    os << "conj_closed = " << (data.claims_conjugation_closed() ? 1 : 0) << '\n';
    const char* tags[4] = {"LAMBDA", "M", "R", "L"};
    const MatrixSeries* series[4] = {&data.Lambda(), &data.M(), &data.R(), &data.L()};
    for (int k = 0; k < 4; ++k) {
        os << tags[k] << '\n';
        io::write_matrix_series(os, *series[k]);
    }
}

inline InterpolationData parse_data(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError(path.string(), 0, "cannot open data file");
    }
    io::LineReader r(in, path.string());
    auto header = r.require("'idata' header");
    if (header[0] != "idata" || header.size() != 5) {
        r.fail("expected 'idata <n> <m> <ell> <nparams>'");
    }
    const long n = io::parse_int(r, header[1], "n");
    const bool one_sided = io::parse_int(r, io::read_keyed_value(r, "one_sided"), "one_sided") != 0;
    const bool conj =
        io::parse_int(r, io::read_keyed_value(r, "conj_closed"), "conj_closed") != 0;
    io::expect_tag(r, "LAMBDA");
    MatrixSeries Lambda = io::read_matrix_series(r);
    io::expect_tag(r, "M");
    MatrixSeries M = io::read_matrix_series(r);
    io::expect_tag(r, "R");
    MatrixSeries R = io::read_matrix_series(r);
    io::expect_tag(r, "L");
    MatrixSeries L = io::read_matrix_series(r);
    if (Lambda.rows() != n) {
        r.fail("LAMBDA size does not match declared n = " + std::to_string(n));
    }
    return InterpolationData(std::move(Lambda), std::move(M), std::move(R), std::move(L),
                             one_sided, conj);
}

// ---------------------------------------------------------------------------
// RomBundle file: header with dimensions, flags and provenance, then the
// EHAT/AHAT/BHAT/CHAT term lists.

inline void write_bundle(const std::filesystem::path& path, const RomBundle& bundle) {
    std::ofstream os(path);
    if (!os) {
        throw Error("cannot write " + path.string());
    }
    const RomProvenance& prov = bundle.provenance();
    os << "# pmor reduced-order bundle\n";
    os << "rombundle " << bundle.n() << ' ' << bundle.num_inputs() << ' ' << bundle.num_outputs()
       << ' ' << bundle.nparams() << '\n';
    os << "one_sided = " << (prov.one_sided ? 1 : 0) << '\n';
    os << "projection = "
       << (prov.mode == ProjectionMode::Transpose ? "transpose" : "adjoint") << '\n';
    os << "tol = " << io::format_double(prov.tol) << '\n';
    os << "v_degrees = " << prov.v_degrees << '\n';
    os << "w_degrees = " << prov.w_degrees << '\n';
    os << "v_stop = " << to_string(prov.v_stop) << '\n';
    os << "w_stop = " << to_string(prov.w_stop) << '\n';
    const char* tags[4] = {"EHAT", "AHAT", "BHAT", "CHAT"};
    const MatrixSeries* series[4] = {&bundle.Ehat(), &bundle.Ahat(), &bundle.Bhat(),
                                     &bundle.Chat()};
    for (int k = 0; k < 4; ++k) {
        os << tags[k] << '\n';
        io::write_matrix_series(os, *series[k]);
    }
}

inline RomBundle parse_bundle(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError(path.string(), 0, "cannot open bundle file");
    }
    io::LineReader r(in, path.string());
    auto header = r.require("'rombundle' header");
    if (header[0] != "rombundle" || header.size() != 5) {
        r.fail("expected 'rombundle <n> <m> <ell> <nparams>'");
    }
    RomProvenance prov;
    prov.one_sided = io::parse_int(r, io::read_keyed_value(r, "one_sided"), "one_sided") != 0;
    const std::string projection = io::read_keyed_value(r, "projection");
    if (projection == "transpose") {
        prov.mode = ProjectionMode::Transpose;
    } else if (projection == "adjoint") {
        prov.mode = ProjectionMode::ConjugateTranspose;
    } else {
        r.fail("unknown projection '" + projection + "'");
    }
    prov.tol = io::parse_double(r, io::read_keyed_value(r, "tol"), "tol");
    prov.v_degrees = static_cast<int>(
        io::parse_int(r, io::read_keyed_value(r, "v_degrees"), "v_degrees"));
    prov.w_degrees = static_cast<int>(
        io::parse_int(r, io::read_keyed_value(r, "w_degrees"), "w_degrees"));
    auto vs = stop_reason_from_string(io::read_keyed_value(r, "v_stop"));
    auto ws = stop_reason_from_string(io::read_keyed_value(r, "w_stop"));
    if (!vs || !ws) {
        r.fail("unknown stop reason");
    }
    prov.v_stop = *vs;
    prov.w_stop = *ws;
    io::expect_tag(r, "EHAT");
    MatrixSeries Ehat = io::read_matrix_series(r);
    io::expect_tag(r, "AHAT");
    MatrixSeries Ahat = io::read_matrix_series(r);
    io::expect_tag(r, "BHAT");
    MatrixSeries Bhat = io::read_matrix_series(r);
    io::expect_tag(r, "CHAT");
    MatrixSeries Chat = io::read_matrix_series(r);
    return RomBundle(std::move(Ehat), std::move(Ahat), std::move(Bhat), std::move(Chat), prov);
}

// ---------------------------------------------------------------------------
// CSV emission. Deterministic s-major row order, fixed float formatting.

struct ErrorRow {
    std::complex<double> s;
    Eigen::VectorXd p;
    double abs_err = 0.0;
    double rel_err = 0.0;
    double fom_mag = 0.0;
    double rom_mag = 0.0;
};

inline std::vector<ErrorRow> grid_rows(const ErrorGrid& grid) {
    std::vector<ErrorRow> rows;
    rows.reserve(grid.size());
    for (std::size_t is = 0; is < grid.s_values.size(); ++is) {
        for (std::size_t ip = 0; ip < grid.p_values.size(); ++ip) {
            const std::size_t k = grid.index(is, ip);
            rows.push_back({grid.s_values[is], grid.p_values[ip], grid.abs_err[k],
                            grid.rel_err[k], grid.fom_mag[k], grid.rom_mag[k]});
        }
    }
    return rows;
}

namespace io {

inline void write_csv_header(std::ostream& os, int nparams, const std::string& value_cols) {
    os << "s_real,s_imag";
    for (int k = 1; k <= nparams; ++k) {
        os << ",p_" << k;
    }
    os << ',' << value_cols << '\n';
}

inline void write_error_csv(std::ostream& os, const std::vector<ErrorRow>& rows, int nparams) {
    write_csv_header(os, nparams, "abs_err,rel_err");
    for (const auto& row : rows) {
        os << format_double(row.s.real()) << ',' << format_double(row.s.imag());
        for (Eigen::Index k = 0; k < row.p.size(); ++k) {
            os << ',' << format_double(row.p[k]);
        }
        os << ',' << format_double(row.abs_err) << ',' << format_double(row.rel_err) << '\n';
    }
}

inline void write_magnitude_csv(std::ostream& os, const std::vector<ErrorRow>& rows,
                                int nparams) {
    write_csv_header(os, nparams, "fom_mag,rom_mag");
    for (const auto& row : rows) {
        os << format_double(row.s.real()) << ',' << format_double(row.s.imag());
        for (Eigen::Index k = 0; k < row.p.size(); ++k) {
            os << ',' << format_double(row.p[k]);
        }
        os << ',' << format_double(row.fom_mag) << ',' << format_double(row.rom_mag) << '\n';
    }
}

inline void write_interp_report_csv(std::ostream& os, const std::vector<InterpCheckEntry>& entries,
                                    int nparams) {
    os << "point_index,side,s_real,s_imag";
    for (int k = 1; k <= nparams; ++k) {
        os << ",p_" << k;
    }
    os << ",residual,singular\n";
    for (const auto& e : entries) {
        os << e.point_index << ',' << e.side << ',' << format_double(e.s.real()) << ','
           << format_double(e.s.imag());
        for (Eigen::Index k = 0; k < e.p.size(); ++k) {
            os << ',' << format_double(e.p[k]);
        }
        os << ',' << format_double(e.residual) << ',' << (e.singular ? 1 : 0) << '\n';
    }
}

} // namespace io
} // namespace pmor

#endif // PMOR_IO_HPP
