#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dacdist/analytic.hpp"
#include "dacdist/csv_io.hpp"
#include "dacdist/grid_distribution.hpp"
#include "dacdist/histogram.hpp"
#include "dacdist/overlap_spec.hpp"
#include "dacdist/solver.hpp"
#include "dacdist/version.hpp"

namespace dacdist::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNoConvergence = 3;

/// Directory for default-named outputs when --out is not given.
inline constexpr const char* kOutDirEnvVar = "DACDIST_OUT_DIR";

namespace detail {

inline std::string default_out_dir() {
    const char* dir = std::getenv(kOutDirEnvVar);
    return (dir && *dir) ? std::string(dir) : std::string(".");
}

inline std::string default_out_path(const std::string& stem) {
    return default_out_dir() + "/" + stem + ".csv";
}

inline std::string strip_csv_ext(const std::string& path) {
    if (path.size() > 4 && path.substr(path.size() - 4) == ".csv")
        return path.substr(0, path.size() - 4);
    return path;
}

inline std::string fmt_param(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline void write_gnuplot_script(const std::string& csv_path) {
    const std::string gp_path = strip_csv_ext(csv_path) + ".gp";
    std::ofstream os(gp_path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + gp_path);
    os << "set datafile separator ','\n"
       << "set key off\n"
       << "set xlabel 'u'\n"
       << "set ylabel 'f(u)'\n"
       << "plot '" << csv_path << "' using 1:2 with lines\n";
}

inline std::vector<double> uniform_grid(std::size_t cells) {
    std::vector<double> u(cells + 1);
    for (std::size_t n = 0; n <= cells; ++n)
        u[n] = static_cast<double>(n) / static_cast<double>(cells);
    return u;
}

}  // namespace detail

struct SolveOptions {
    double q = 0.0;
    std::size_t n_cells = 100000;
    double delta = 0.0;  // 0 picks default_delta(q)
    std::size_t max_iters = 10000;
    std::string out;
    bool gnuplot = false;
};

inline int cmd_solve(const SolveOptions& opts) {
    if (!(opts.q >= 0.5) || !(opts.q < 1.0)) {
        std::cerr << "solve: q must satisfy 0.5 <= q < 1\n";
        return kExitUsage;
    }
    const OverlapSpec spec = OverlapSpec::from_q(opts.q);
    SolverConfig config;
    config.n_cells = opts.n_cells;
    config.delta = opts.delta > 0.0 ? opts.delta : default_delta(opts.q);
    config.max_iters = opts.max_iters;

    auto [dist, report] = solve(spec, config);

    const std::string out = opts.out.empty()
                                ? detail::default_out_path(
                                      "solve_q" + detail::fmt_param(opts.q))
                                : opts.out;
    write_distribution_csv(out, detail::uniform_grid(dist.n_cells),
                           dist.values);

    const std::string trace_path = detail::strip_csv_ext(out) + ".mse.csv";
    {
        std::ofstream os(trace_path, std::ios::binary);
        if (!os)
            throw std::runtime_error("cannot open for writing: " + trace_path);
        os << "iteration,mse\n";
        char line[48];
        for (std::size_t t = 0; t < report.mse_trace.size(); ++t) {
            std::snprintf(line, sizeof(line), "%zu,%.11e\n", t + 1,
                          report.mse_trace[t]);
            os << line;
        }
    }

    RunManifest manifest;
    manifest.command = "solve";
    manifest.parameters = {{"q", detail::fmt_param(opts.q)},
                           {"n", std::to_string(opts.n_cells)},
                           {"delta", detail::fmt_param(config.delta)},
                           {"max_iters", std::to_string(opts.max_iters)}};
    manifest.output_paths = {out, trace_path};
    write_manifest(out + ".manifest", manifest);
    if (opts.gnuplot) detail::write_gnuplot_script(out);

    std::cout << "iterations=" << report.iterations << '\n'
              << "final_mse=" << detail::fmt_param(report.final_mse) << '\n';
    if (!report.converged) {
        std::cerr << "solve: no convergence within " << opts.max_iters
                  << " iterations (partial output written)\n";
        return kExitNoConvergence;
    }
    return kExitOk;
}

struct ApproxOptions {
    std::string method;  // poly | gauss | closed
    double q = 0.0;
    std::size_t grid = 1000;
    std::string out;
    bool gnuplot = false;
};

inline int cmd_approx(const ApproxOptions& opts) {
    std::vector<double> f;
    if (opts.method == "closed") {
        if (std::abs(opts.q - kInvSqrt2) > kQEdgeTol) {
            std::cerr << "approx closed: the closed form exists only at "
                         "q = 1/sqrt(2) ~ 0.7071067812\n";
            return kExitUsage;
        }
        f.resize(opts.grid + 1);
        for (std::size_t n = 0; n <= opts.grid; ++n)
            f[n] = closed_form_sqrt2(static_cast<double>(n) /
                                     static_cast<double>(opts.grid));
    } else if (opts.method == "poly") {
        if (opts.q < kInvSqrt2 - kQEdgeTol || opts.q > kPolyMaxQ + kQEdgeTol) {
            std::cerr << "approx poly: valid range is 1/sqrt(2) <= q <= 0.85\n";
            return kExitUsage;
        }
        const auto ap = make_poly_approx(OverlapSpec::from_q(opts.q));
        f = poly_eval_grid(ap, opts.grid);
    } else if (opts.method == "gauss") {
        if (!(opts.q > 0.5) || !(opts.q < 1.0)) {
            std::cerr << "approx gauss: valid range is 0.5 < q < 1\n";
            return kExitUsage;
        }
        const GaussianApprox ap{
            gaussian_sigma2(OverlapSpec::from_q(opts.q))};
        f.resize(opts.grid + 1);
        for (std::size_t n = 0; n <= opts.grid; ++n)
            f[n] = gaussian_eval(ap, static_cast<double>(n) /
                                         static_cast<double>(opts.grid));
    } else {
        std::cerr << "approx: method must be one of poly, gauss, closed\n";
        return kExitUsage;
    }

    const std::string out =
        opts.out.empty()
            ? detail::default_out_path("approx_" + opts.method + "_q" +
                                       detail::fmt_param(opts.q))
            : opts.out;
    write_distribution_csv(out, detail::uniform_grid(opts.grid), f);

    RunManifest manifest;
    manifest.command = "approx";
    manifest.parameters = {{"method", opts.method},
                           {"q", detail::fmt_param(opts.q)},
                           {"grid", std::to_string(opts.grid)}};
    manifest.output_paths = {out};
    write_manifest(out + ".manifest", manifest);
    if (opts.gnuplot) detail::write_gnuplot_script(out);
    return kExitOk;
}

struct SampleOptions {
    double q = 0.0;
    std::uint64_t samples = 1000000;
    std::size_t bins = 200;
    std::uint64_t seed = 0;
    std::size_t seq_len = kAutoSeqLen;
    std::string out;
    bool gnuplot = false;
};

inline int cmd_sample(const SampleOptions& opts) {
    if (!(opts.q >= 0.5) || !(opts.q < 1.0)) {
        std::cerr << "sample: q must satisfy 0.5 <= q < 1\n";
        return kExitUsage;
    }
    SampleConfig config;
    config.samples = opts.samples;
    config.bins = opts.bins;
    config.seed = opts.seed;
    config.seq_len = opts.seq_len;
    const Histogram h = sample_histogram(OverlapSpec::from_q(opts.q), config);

    std::vector<double> centers(h.bins);
    for (std::size_t k = 0; k < h.bins; ++k) centers[k] = h.bin_center(k);

    const std::string out =
        opts.out.empty()
            ? detail::default_out_path("sample_q" + detail::fmt_param(opts.q) +
                                       "_s" + std::to_string(opts.seed))
            : opts.out;
    write_distribution_csv(out, centers, h.density);

    RunManifest manifest;
    manifest.command = "sample";
    manifest.parameters = {{"q", detail::fmt_param(opts.q)},
                           {"samples", std::to_string(opts.samples)},
                           {"bins", std::to_string(opts.bins)},
                           {"seed", std::to_string(opts.seed)},
                           {"seq_len", std::to_string(opts.seq_len)}};
    manifest.output_paths = {out};
    write_manifest(out + ".manifest", manifest);
    if (opts.gnuplot) detail::write_gnuplot_script(out);
    return kExitOk;
}

struct CompareOptions {
    std::string path_a;
    std::string path_b;
    std::vector<std::string> metrics = {"l1", "mse", "linf"};
    bool downsample = false;
};

inline int cmd_compare(const CompareOptions& opts) {
    const DistributionCsv a = read_distribution_csv(opts.path_a);
    const DistributionCsv b = read_distribution_csv(opts.path_b);

    std::vector<double> fa = a.f;
    std::vector<double> fb = b.f;
    if (fa.size() != fb.size()) {
        if (!opts.downsample) {
            std::cerr << "compare: grids differ (" << fa.size() << " vs "
                      << fb.size() << " rows); pass --downsample to "
                      << "bin-average the finer grid\n";
            return kExitUsage;
        }
        // Bin-average the grid-style file (u starts at 0) onto the
        // bins-style file (u starts at the first bin center).
        const bool a_is_grid = !a.u.empty() && a.u.front() == 0.0;
        const bool b_is_grid = !b.u.empty() && b.u.front() == 0.0;
        if (a_is_grid && !b_is_grid && fa.size() > fb.size()) {
            fa = bin_average(fa, fb.size());
            std::cout << "downsampled=" << opts.path_a << " to " << fb.size()
                      << " bins\n";
        } else if (b_is_grid && !a_is_grid && fb.size() > fa.size()) {
            fb = bin_average(fb, fa.size());
            std::cout << "downsampled=" << opts.path_b << " to " << fa.size()
                      << " bins\n";
        } else {
            std::cerr << "compare: cannot reconcile grids by bin-averaging\n";
            return kExitUsage;
        }
    }

    for (const std::string& m : opts.metrics) {
        DensityMetric metric;
        if (m == "l1") metric = DensityMetric::L1;
        else if (m == "mse") metric = DensityMetric::MSE;
        else if (m == "linf") metric = DensityMetric::LINF;
        else {
            std::cerr << "compare: unknown metric '" << m << "'\n";
            return kExitUsage;
        }
        std::cout << m << '=' << detail::fmt_param(distance(fa, fb, metric))
                  << '\n';
    }
    return kExitOk;
}

/// Full command-line front end. Returns a process exit code: 0 on success,
/// 2 on usage errors, 3 when the solver hit its iteration cap.
inline int run(int argc, const char* const* argv) {
    CLI::App app{"codeword distribution toolkit for overlapped binary "
                 "arithmetic coding"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    SolveOptions solve_opts;
    auto* solve_cmd = app.add_subcommand(
        "solve", "iterate the distribution to a fixed point on a grid");
    solve_cmd->add_option("--q", solve_opts.q, "sub-interval length, 0.5 <= q < 1")
        ->required();
    solve_cmd->add_option("--n", solve_opts.n_cells, "grid cells (default 100000)");
    solve_cmd->add_option("--delta", solve_opts.delta,
                          "termination MSE threshold (default from q)");
    solve_cmd->add_option("--max-iters", solve_opts.max_iters, "iteration cap");
    solve_cmd->add_option("--out", solve_opts.out, "output CSV path");
    solve_cmd->add_flag("--gnuplot", solve_opts.gnuplot, "also write a .gp script");

    ApproxOptions approx_opts;
    auto* approx_cmd = app.add_subcommand(
        "approx", "evaluate an analytic approximation of the distribution");
    approx_cmd->add_option("method", approx_opts.method, "poly | gauss | closed")
        ->required();
    approx_cmd->add_option("--q", approx_opts.q, "sub-interval length")->required();
    approx_cmd->add_option("--grid", approx_opts.grid, "grid cells (default 1000)");
    approx_cmd->add_option("--out", approx_opts.out, "output CSV path");
    approx_cmd->add_flag("--gnuplot", approx_opts.gnuplot, "also write a .gp script");

    SampleOptions sample_opts;
    auto* sample_cmd = app.add_subcommand(
        "sample", "Monte Carlo histogram of encoded codeword values");
    sample_cmd->add_option("--q", sample_opts.q, "sub-interval length")->required();
    sample_cmd->add_option("--samples", sample_opts.samples, "sample count");
    sample_cmd->add_option("--bins", sample_opts.bins, "histogram bins");
    sample_cmd->add_option("--seed", sample_opts.seed, "random seed");
    sample_cmd->add_option("--seq-len", sample_opts.seq_len,
                           "sequence length (0 = auto from q)");
    sample_cmd->add_option("--out", sample_opts.out, "output CSV path");
    sample_cmd->add_flag("--gnuplot", sample_opts.gnuplot, "also write a .gp script");

    CompareOptions compare_opts;
    auto* compare_cmd =
        app.add_subcommand("compare", "distance metrics between two CSVs");
    compare_cmd->add_option("path_a", compare_opts.path_a, "first CSV")->required();
    compare_cmd->add_option("path_b", compare_opts.path_b, "second CSV")->required();
    compare_cmd->add_option("--metrics", compare_opts.metrics,
                            "subset of l1,mse,linf")
        ->delimiter(',');
    compare_cmd->add_flag("--downsample", compare_opts.downsample,
                          "bin-average the finer grid onto the coarser");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (solve_cmd->parsed()) return cmd_solve(solve_opts);
        if (approx_cmd->parsed()) return cmd_approx(approx_opts);
        if (sample_cmd->parsed()) return cmd_sample(sample_opts);
        if (compare_cmd->parsed()) return cmd_compare(compare_opts);
    } catch (const std::exception& e) {
        std::cerr << argv[0] << ": " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

/// Convenience overload for tests: args exclude the program name.
inline int run(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("dacdist");
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace dacdist::cli
