// Copyright (c) 2026 The pmor developers
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: export the built-in example systems, reduce a
// model along its interpolation curves, evaluate error grids, and verify
// the tangential interpolation conditions.
//
// Exit codes: 0 success, 1 usage, 2 parse failure, 3 numerical failure.

#include <chrono>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <pmor/pmor.hpp>

namespace {

using pmor::AxisScale;
using pmor::AxisSpec;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Axis grammar: lin:<lo>:<hi>:<count> or log:<lo>:<hi>:<count>.
AxisSpec parse_axis_spec(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) {
        parts.push_back(item);
    }
    if (parts.size() != 4 || (parts[0] != "lin" && parts[0] != "log")) {
        throw UsageError("bad axis spec '" + text + "', expected lin:<lo>:<hi>:<count>");
    }
    AxisSpec axis;
    axis.scale = parts[0] == "lin" ? AxisScale::Linear : AxisScale::Log;
    try {
        axis.lo = std::stod(parts[1]);
        axis.hi = std::stod(parts[2]);
        axis.count = std::stoi(parts[3]);
    } catch (const std::exception&) {
        throw UsageError("bad axis spec '" + text + "'");
    }
    return axis;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> vals;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            vals.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw UsageError("bad number '" + item + "' in '" + text + "'");
        }
    }
    return vals;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> vals;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            vals.push_back(std::stoi(item));
        } catch (const std::exception&) {
            throw UsageError("bad integer '" + item + "' in '" + text + "'");
        }
    }
    return vals;
}

int env_threads() {
    if (const char* env = std::getenv("PMOR_THREADS")) {
        try {
            return std::max(0, std::stoi(env));
        } catch (const std::exception&) {
        }
    }
    return 0; // auto
}

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream os(path);
    if (!os) {
        throw pmor::Error("cannot write " + path.string());
    }
    return os;
}

// --- example ---------------------------------------------------------------

int cmd_example_export(const std::string& id_text, const std::string& dir) {
    auto id = pmor::example_id_from_string(id_text);
    if (!id) {
        throw UsageError("unknown example '" + id_text + "' (toy1, toy2, penzl)");
    }
    pmor::ExampleBundle ex = pmor::build_example(*id);
    pmor::write_model(dir, ex.sys);
    pmor::write_data(std::filesystem::path(dir) / "data.pmor", ex.data);
    std::cout << "wrote " << dir << "/model.pmor and data.pmor for " << id_text
              << " (suggested --tol " << pmor::io::format_double(ex.config.tol) << ")\n";
    return 0;
}

// --- reduce ----------------------------------------------------------------

int cmd_reduce(const std::string& model_path, const std::string& data_path, double tol,
               int max_degree, int validate_samples, const std::string& out_dir) {
    if (tol <= 0) {
        throw UsageError("--tol must be positive");
    }
    const auto t0 = std::chrono::steady_clock::now();
    pmor::ParametricLTI sys = pmor::parse_model(model_path);
    pmor::InterpolationData data = pmor::parse_data(data_path);

    pmor::ValidationReport vr = pmor::validate(data, sys, validate_samples);

    pmor::SolverConfig cfg;
    cfg.tol = tol;
    cfg.max_total_degree = max_degree;
    pmor::BasisSeries basis = pmor::solve_bases(sys, data, cfg);
    pmor::RomBundle bundle = pmor::build_offline(sys, basis);

    std::filesystem::create_directories(out_dir);
    const std::filesystem::path out(out_dir);
    pmor::write_bundle(out / "rom.pmor", bundle);
    {
        std::ofstream os = open_out(out / "V.mseries");
        pmor::io::write_matrix_series(os, basis.V);
    }
    if (!basis.one_sided) {
        std::ofstream os = open_out(out / "W.mseries");
        pmor::io::write_matrix_series(os, basis.W);
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::ostringstream report;
    report << "pmor reduce report\n";
    report << "model = " << model_path << '\n';
    report << "data = " << data_path << '\n';
    report << "tol = " << pmor::io::format_double(tol) << '\n';
    report << "one_sided = " << (basis.one_sided ? 1 : 0) << '\n';
    report << "validation_samples = " << vr.samples_checked
           << "  min_rcond = " << pmor::io::format_double(vr.min_rcond) << '\n';
    auto describe = [&report](const char* name, const pmor::MatrixSeries& S,
                              const pmor::SeriesSolveInfo& info) {
        report << name << ": degrees_computed = " << info.degrees_computed
               << "  stop = " << pmor::to_string(info.reason)
               << "  retained_terms = " << S.num_terms() << '\n';
        for (std::size_t d = 0; d < info.degree_weights.size(); ++d) {
            report << "  degree " << d
                   << " max_weight = " << pmor::io::format_double(info.degree_weights[d]) << '\n';
        }
    };
    describe("V", basis.V, basis.v_info);
    if (basis.one_sided) {
        report << "W: one-sided mode, W(p) = V(p)\n";
    } else {
        describe("W", basis.W, basis.w_info);
    }
    report << "wall_time_s = " << pmor::io::format_double(wall) << '\n';

    std::cout << report.str();
    std::ofstream os = open_out(out / "report.txt");
    os << report.str();
    return 0;
}

// --- eval ------------------------------------------------------------------

struct EvalFlags {
    std::string bundle_path;
    std::string model_path;
    std::string data_path;
    std::string s_spec;
    std::string fix_s;
    bool imag_axis = false;
    std::vector<std::string> p_specs;
    std::string fix_p;
    std::string out_csv;
    std::string magnitudes_csv;
    std::string fom_solver = "auto";
    int threads = -1;
};

std::vector<AxisSpec> build_p_axes(const EvalFlags& flags, int nparams) {
    std::vector<AxisSpec> axes;
    if (!flags.fix_p.empty()) {
        for (double v : parse_double_list(flags.fix_p)) {
            axes.push_back({AxisScale::Linear, v, v, 1});
        }
    } else {
        for (const auto& spec : flags.p_specs) {
            axes.push_back(parse_axis_spec(spec));
        }
    }
    if (static_cast<int>(axes.size()) != nparams) {
        throw UsageError("model has " + std::to_string(nparams) +
                         " parameter(s); give --p per parameter or --fix-p v1,v2,...");
    }
    return axes;
}

int cmd_eval(const EvalFlags& flags) {
    pmor::RomBundle bundle = pmor::parse_bundle(flags.bundle_path);
    pmor::ParametricLTI sys = pmor::parse_model(flags.model_path);
    if (bundle.nparams() != sys.nparams() || bundle.num_inputs() != sys.num_inputs() ||
        bundle.num_outputs() != sys.num_outputs()) {
        throw pmor::DimensionError("bundle and model dimensions disagree");
    }
    pmor::GridOptions opts;
    opts.threads = flags.threads >= 0 ? flags.threads : env_threads();
    if (flags.fom_solver == "lu") {
        opts.strategy = pmor::FomSolveStrategy::DenseLU;
    } else if (flags.fom_solver == "hessenberg") {
        opts.strategy = pmor::FomSolveStrategy::HessenbergReuse;
    } else if (flags.fom_solver != "auto") {
        throw UsageError("--fom-solver must be auto, lu, or hessenberg");
    }

    const std::vector<AxisSpec> p_axes = build_p_axes(flags, sys.nparams());
    std::vector<pmor::ErrorRow> rows;
    int nparams = sys.nparams();

    if (!flags.fix_s.empty()) {
        // One s per parameter value: either a fixed literal or the k-th
        // interpolation curve lambda_k(p) from --data.
        std::optional<int> curve_index;
        std::complex<double> s_fixed;
        if (flags.fix_s.rfind("index:", 0) == 0) {
            try {
                curve_index = std::stoi(flags.fix_s.substr(6));
            } catch (const std::exception&) {
                throw UsageError("bad --fix-s '" + flags.fix_s + "'");
            }
            if (flags.data_path.empty()) {
                throw UsageError("--fix-s index:k requires --data");
            }
        } else if (!pmor::io::try_parse_complex(flags.fix_s, s_fixed)) {
            throw UsageError("bad --fix-s '" + flags.fix_s + "' (complex literal or index:k)");
        }
        if (flags.imag_axis && !curve_index) {
            s_fixed *= std::complex<double>(0.0, 1.0);
        }
        std::optional<pmor::InterpolationData> data;
        if (curve_index) {
            data = pmor::parse_data(flags.data_path);
            if (*curve_index < 1 || *curve_index > static_cast<int>(data->n())) {
                throw UsageError("--fix-s index out of range 1.." + std::to_string(data->n()));
            }
        }
        for (const Eigen::VectorXd& p : pmor::parameter_grid(p_axes)) {
            pmor::ErrorRow row;
            row.p = p;
            row.s = curve_index ? data->lambda_at(p)[*curve_index - 1] : s_fixed;
            const Eigen::MatrixXcd H = sys.transfer_eval(row.s, p);
            const Eigen::MatrixXcd Hhat = pmor::rom_transfer_eval(bundle, row.s, p);
            row.fom_mag = pmor::transfer_norm2(H);
            row.rom_mag = pmor::transfer_norm2(Hhat);
            row.abs_err = pmor::transfer_norm2(H - Hhat);
            rows.push_back(row);
        }
        double max_fom = 0.0;
        for (const auto& row : rows) {
            max_fom = std::max(max_fom, row.fom_mag);
        }
        for (auto& row : rows) {
            row.rel_err = max_fom > 0 ? row.abs_err / max_fom : row.abs_err;
        }
    } else {
        if (flags.s_spec.empty()) {
            throw UsageError("give either --s or --fix-s");
        }
        pmor::GridSpec grid;
        grid.s_axis = parse_axis_spec(flags.s_spec);
        grid.s_imaginary = flags.imag_axis;
        grid.p_axes = p_axes;
        pmor::ErrorGrid eg = pmor::error_grid(sys, bundle, grid, opts);
        rows = pmor::grid_rows(eg);
    }

    {
        std::ofstream os = open_out(flags.out_csv);
        pmor::io::write_error_csv(os, rows, nparams);
    }
    if (!flags.magnitudes_csv.empty()) {
        std::ofstream os = open_out(flags.magnitudes_csv);
        pmor::io::write_magnitude_csv(os, rows, nparams);
    }
    std::cout << "wrote " << rows.size() << " rows to " << flags.out_csv << '\n';
    return 0;
}

// --- verify ----------------------------------------------------------------

int cmd_verify(const std::string& bundle_path, const std::string& model_path,
               const std::string& data_path, const std::vector<std::string>& p_sample_specs,
               const std::string& points_list, const std::string& out_csv) {
    pmor::RomBundle bundle = pmor::parse_bundle(bundle_path);
    pmor::ParametricLTI sys = pmor::parse_model(model_path);
    pmor::InterpolationData data = pmor::parse_data(data_path);

    std::vector<AxisSpec> axes;
    if (p_sample_specs.empty()) {
        for (int k = 0; k < sys.nparams(); ++k) {
            axes.push_back({AxisScale::Linear, sys.box().lower[k], sys.box().upper[k], 10});
        }
    } else {
        for (const auto& spec : p_sample_specs) {
            axes.push_back(parse_axis_spec(spec));
        }
        if (static_cast<int>(axes.size()) != sys.nparams()) {
            throw UsageError("give --p-samples once per parameter");
        }
    }
    std::vector<int> points;
    if (!points_list.empty()) {
        points = parse_int_list(points_list);
        for (int i : points) {
            if (i < 1 || i > static_cast<int>(data.n())) {
                throw UsageError("--points entries must lie in 1.." + std::to_string(data.n()));
            }
        }
    }

    const auto samples = pmor::parameter_grid(axes);
    const auto entries = pmor::check_interpolation(sys, data, bundle, samples, points);

    {
        std::ofstream os = open_out(out_csv);
        pmor::io::write_interp_report_csv(os, entries, sys.nparams());
    }

    double rmin = std::numeric_limits<double>::infinity();
    double rmax = 0.0;
    int singular = 0;
    for (const auto& e : entries) {
        if (e.singular) {
            ++singular;
            continue;
        }
        rmin = std::min(rmin, e.residual);
        rmax = std::max(rmax, e.residual);
    }
    std::cout << "checked " << entries.size() << " (point, p, side) combinations over "
              << samples.size() << " parameter samples\n";
    std::cout << "residual range [" << pmor::io::format_double(rmin) << ", "
              << pmor::io::format_double(rmax) << "], singular nodes: " << singular << '\n';
    std::cout << "report written to " << out_csv << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"parametric model reduction by rational interpolation along "
                 "parameter-dependent frequency curves"};
    app.require_subcommand(1);

    // example export <id> <dir>
    auto* example = app.add_subcommand("example", "built-in example systems");
    example->require_subcommand(1);
    auto* exp = example->add_subcommand("export", "write model and data files");
    std::string ex_id, ex_dir;
    exp->add_option("id", ex_id, "toy1 | toy2 | penzl")->required();
    exp->add_option("dir", ex_dir, "output directory")->required();

    // reduce
    auto* reduce = app.add_subcommand("reduce", "compute basis series and the reduced bundle");
    std::string r_model, r_data, r_out;
    double r_tol = 1e-6;
    int r_maxdeg = 100;
    int r_validate = 1;
    reduce->add_option("--model", r_model, "model header file or directory")->required();
    reduce->add_option("--data", r_data, "interpolation data file")->required();
    reduce->add_option("--tol", r_tol, "truncation tolerance tau");
    reduce->add_option("--max-degree", r_maxdeg, "safety cap on the expansion degree");
    reduce->add_option("--validate-samples", r_validate,
                       "parameter samples for the spectrum check");
    reduce->add_option("--out", r_out, "output directory")->required();

    // eval
    auto* eval = app.add_subcommand("eval", "evaluate approximation errors on a grid");
    EvalFlags ev;
    eval->add_option("--bundle", ev.bundle_path, "rom.pmor file")->required();
    eval->add_option("--model", ev.model_path, "model header file or directory")->required();
    eval->add_option("--data", ev.data_path, "interpolation data (for --fix-s index:k)");
    eval->add_option("--s", ev.s_spec, "frequency axis, lin|log:<lo>:<hi>:<count>");
    eval->add_option("--fix-s", ev.fix_s, "single frequency: complex literal or index:k");
    eval->add_flag("--imag", ev.imag_axis, "multiply the s axis by the imaginary unit");
    eval->add_option("--p", ev.p_specs, "parameter axis per parameter, lin|log:<lo>:<hi>:<count>");
    eval->add_option("--fix-p", ev.fix_p, "fixed parameter value(s), comma separated");
    eval->add_option("--out", ev.out_csv, "errors CSV path")->required();
    eval->add_option("--magnitudes", ev.magnitudes_csv, "also write |H|, |Hhat| CSV");
    eval->add_option("--fom-solver", ev.fom_solver, "auto | lu | hessenberg");
    eval->add_option("--threads", ev.threads, "worker threads (0 = auto, default PMOR_THREADS)");

    // verify
    auto* verify = app.add_subcommand("verify", "check the tangential interpolation conditions");
    std::string v_bundle, v_model, v_data, v_points, v_out;
    std::vector<std::string> v_samples;
    verify->add_option("--bundle", v_bundle, "rom.pmor file")->required();
    verify->add_option("--model", v_model, "model header file or directory")->required();
    verify->add_option("--data", v_data, "interpolation data file")->required();
    verify->add_option("--p-samples", v_samples, "sample axis per parameter");
    verify->add_option("--points", v_points, "interpolation point indices (1-based, comma list)");
    verify->add_option("--out", v_out, "report CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << '\n';
        return 1;
    }

    try {
        if (exp->parsed()) {
            return cmd_example_export(ex_id, ex_dir);
        }
        if (reduce->parsed()) {
            return cmd_reduce(r_model, r_data, r_tol, r_maxdeg, r_validate, r_out);
        }
        if (eval->parsed()) {
            return cmd_eval(ev);
        }
        if (verify->parsed()) {
            return cmd_verify(v_bundle, v_model, v_data, v_samples, v_points, v_out);
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const pmor::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return 2;
    } catch (const pmor::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
