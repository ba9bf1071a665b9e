// Copyright (c) 2026 The pmor developers
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <pmor/example_systems.hpp>
#include <pmor/io.hpp>

#include "test_helpers.hpp"

using namespace pmor;
using cd = std::complex<double>;

namespace {

std::filesystem::path temp_dir(const std::string& tag) {
    auto dir = std::filesystem::temp_directory_path() / ("pmor_test_" + tag);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

bool series_equal(const MatrixSeries& a, const MatrixSeries& b, double tol = 0.0) {
    if (a.rows() != b.rows() || a.cols() != b.cols() || a.nparams() != b.nparams() ||
        a.num_terms() != b.num_terms()) {
        return false;
    }
    for (const auto& [idx, M] : a.terms()) {
        const Eigen::MatrixXcd* other = b.term(idx);
        if (!other || (M - *other).norm() > tol) {
            return false;
        }
    }
    return true;
}

} // namespace

TEST_CASE("complex literals round-trip bit-exactly") {
    std::mt19937 rng(2);
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    for (int k = 0; k < 200; ++k) {
        cd z(u(rng) * std::pow(10.0, k % 7 - 3), u(rng));
        cd back;
        REQUIRE(io::try_parse_complex(io::format_complex(z), back));
        CHECK(back == z);
    }

    cd z;
    CHECK(io::try_parse_complex("1.5", z));
    CHECK(z == cd(1.5, 0));
    CHECK(io::try_parse_complex("-2e-3+4.5j", z));
    CHECK(z == cd(-2e-3, 4.5));
    CHECK(io::try_parse_complex("1-1j", z));
    CHECK(z == cd(1, -1));
    CHECK(io::try_parse_complex("8.8862j", z));
    CHECK(z == cd(0, 8.8862));
    CHECK(!io::try_parse_complex("abc", z));
    CHECK(!io::try_parse_complex("1+2", z));
    CHECK(!io::try_parse_complex("1+2i", z));
    CHECK(!io::try_parse_complex("", z));
}

TEST_CASE("matrix-series text blocks parse what they print") {
    std::mt19937 rng(4);
    MatrixSeries S = pmor_test::random_series(3, 2, 2, 3, rng);
    std::ostringstream os;
    io::write_matrix_series(os, S);

    std::istringstream in(os.str());
    io::LineReader reader(in, "<mem>");
    MatrixSeries back = io::read_matrix_series(reader);
    CHECK(series_equal(S, back));
}

TEST_CASE("hand-written series with comments parses") {
    const char* text = R"(# a comment
mseries 2 1 1 2
idx 0   # zero index
1+0j
-2.5-1j
idx 3
0+1j
4+0j
)";
    std::istringstream in(text);
    io::LineReader reader(in, "<mem>");
    MatrixSeries S = io::read_matrix_series(reader);
    CHECK(S.rows() == 2);
    CHECK(S.num_terms() == 2);
    CHECK((*S.term(MultiIndex({0})))(1, 0) == cd(-2.5, -1));
    CHECK((*S.term(MultiIndex({3})))(0, 0) == cd(0, 1));
}

TEST_CASE("malformed series files raise structured parse errors") {
    SECTION("truncated term list") {
        std::istringstream in("mseries 2 2 1 2\nidx 0\n1+0j 0+0j\n");
        io::LineReader reader(in, "trunc.mseries");
        try {
            io::read_matrix_series(reader);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.file() == "trunc.mseries");
            CHECK(std::string(e.what()).find("row 2") != std::string::npos);
        }
    }
    SECTION("duplicate multi-index") {
        std::istringstream in("mseries 1 1 1 2\nidx 0\n1+0j\nidx 0\n2+0j\n");
        io::LineReader reader(in, "dup.mseries");
        CHECK_THROWS_AS(io::read_matrix_series(reader), DuplicateTermError);
    }
    SECTION("bad complex literal") {
        std::istringstream in("mseries 1 1 1 1\nidx 0\n1+2i\n");
        io::LineReader reader(in, "bad.mseries");
        CHECK_THROWS_AS(io::read_matrix_series(reader), ParseError);
    }
    SECTION("wrong entry count") {
        std::istringstream in("mseries 1 2 1 1\nidx 0\n1+0j\n");
        io::LineReader reader(in, "short.mseries");
        CHECK_THROWS_AS(io::read_matrix_series(reader), ParseError);
    }
}

TEST_CASE("model files round-trip the example systems") {
    for (ExampleId id : {ExampleId::Toy1, ExampleId::Toy2}) {
        ExampleBundle ex = build_example(id);
        auto dir = temp_dir(std::string("model_") + to_string(id));
        write_model(dir, ex.sys);
        ParametricLTI back = parse_model(dir);
        CHECK(back.state_dim() == ex.sys.state_dim());
        CHECK(back.box().lower == ex.sys.box().lower);
        CHECK(back.box().upper == ex.sys.box().upper);
        CHECK(series_equal(back.E(), ex.sys.E()));
        CHECK(series_equal(back.A(), ex.sys.A()));
        CHECK(series_equal(back.B(), ex.sys.B()));
        CHECK(series_equal(back.C(), ex.sys.C()));
        std::filesystem::remove_all(dir);
    }
}

TEST_CASE("missing model keys are reported") {
    auto dir = temp_dir("badmodel");
    std::ofstream(dir / "model.pmor") << "N = 3\nm = 1\n"; // missing the rest
    CHECK_THROWS_AS(parse_model(dir), ParseError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("interpolation data files round-trip") {
    for (ExampleId id : {ExampleId::Toy1, ExampleId::Toy2}) {
        ExampleBundle ex = build_example(id);
        auto dir = temp_dir(std::string("data_") + to_string(id));
        const auto path = dir / "data.pmor";
        write_data(path, ex.data);
        InterpolationData back = parse_data(path);
        CHECK(back.one_sided() == ex.data.one_sided());
        CHECK(back.n() == ex.data.n());
        CHECK(series_equal(back.Lambda(), ex.data.Lambda()));
        CHECK(series_equal(back.M(), ex.data.M()));
        CHECK(series_equal(back.R(), ex.data.R()));
        CHECK(series_equal(back.L(), ex.data.L()));
        std::filesystem::remove_all(dir);
    }
}

TEST_CASE("a data file missing a section names the section") {
    auto dir = temp_dir("baddata");
    ExampleBundle ex = build_example(ExampleId::Toy1);
    const auto path = dir / "data.pmor";
    write_data(path, ex.data);
    // cut the file just before the final L section
    std::ifstream in(path);
    std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    in.close();
    const auto cut = all.rfind("L\n");
    REQUIRE(cut != std::string::npos);
    std::ofstream(path, std::ios::trunc) << all.substr(0, cut);
    try {
        parse_data(path);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("'L'") != std::string::npos);
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("rom bundles round-trip with provenance") {
    ExampleBundle ex = build_example(ExampleId::Toy2);
    BasisSeries basis = solve_bases(ex.sys, ex.data, ex.config);
    RomBundle bundle = build_offline(ex.sys, basis);

    auto dir = temp_dir("bundle");
    const auto path = dir / "rom.pmor";
    write_bundle(path, bundle);
    RomBundle back = parse_bundle(path);
    CHECK(back.n() == bundle.n());
    CHECK(back.provenance().one_sided == bundle.provenance().one_sided);
    CHECK(back.provenance().tol == bundle.provenance().tol);
    CHECK(back.provenance().v_degrees == bundle.provenance().v_degrees);
    CHECK(back.provenance().v_stop == bundle.provenance().v_stop);
    CHECK(series_equal(back.Ehat(), bundle.Ehat()));
    CHECK(series_equal(back.Ahat(), bundle.Ahat()));
    CHECK(series_equal(back.Bhat(), bundle.Bhat()));
    CHECK(series_equal(back.Chat(), bundle.Chat()));
    std::filesystem::remove_all(dir);
}

TEST_CASE("csv emission is deterministic and s-major") {
    ExampleBundle ex = build_example(ExampleId::Toy2);
    BasisSeries basis = solve_bases(ex.sys, ex.data, ex.config);
    RomBundle bundle = build_offline(ex.sys, basis);
    GridSpec grid;
    grid.s_axis = {AxisScale::Log, 1e-2, 1e1, 4};
    grid.p_axes = {{AxisScale::Linear, 0, 1, 3}};

    auto render = [&] {
        ErrorGrid eg = error_grid(ex.sys, bundle, grid);
        std::ostringstream os;
        io::write_error_csv(os, grid_rows(eg), 1);
        return os.str();
    };
    const std::string first = render();
    const std::string second = render();
    CHECK(first == second);

    std::istringstream lines(first);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "s_real,s_imag,p_1,abs_err,rel_err");
    // first two rows share s (s-major) and differ in p
    std::string row1, row2;
    std::getline(lines, row1);
    std::getline(lines, row2);
    CHECK(row1.substr(0, row1.find(',')) == row2.substr(0, row2.find(',')));
    int rows = 2;
    std::string rest;
    while (std::getline(lines, rest)) {
        ++rows;
    }
    CHECK(rows == 12);
}
