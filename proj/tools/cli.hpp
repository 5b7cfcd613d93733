#pragma once

// Command-line front end: phantom, simulate, backproject, reconstruct,
// metrics, dottest, bench, map, export-raw.
//
// Exit codes: 0 success, 1 runtime error, 2 usage error.

#include <array>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gpair/gpair.hpp"

namespace gpair::cli {

struct GridOptions {
    std::vector<int> dims{32, 32, 32};
    double spacing = 4e-4;
    std::vector<double> center{0.0, 0.0, 0.0};
    std::string like; // take the grid from an existing volume file

    VoxelGrid resolve() const {
        if (!like.empty()) return read_volume(like).grid;
        if (dims.size() != 3) throw InvalidArgument("--grid expects nx,ny,nz");
        if (center.size() != 3) throw InvalidArgument("--center expects x,y,z");
        return centered_grid({dims[0], dims[1], dims[2]}, spacing, {center[0], center[1], center[2]});
    }
};

struct ArrayOptions {
    std::string kind = "hemi";
    double aperture = 102.4e-3;
    int n_side = 32;
    double plane_z = -0.01;
    double radius = 60e-3;
    std::vector<double> center{0.0, 0.0, 0.0};
    int n = 64;

    DetectorArray resolve() const {
        const ArrayKind k = array_kind_from_string(kind);
        if (k == ArrayKind::planar) return build_planar_array(aperture, aperture, n_side, plane_z);
        if (k == ArrayKind::hemispherical) {
            if (center.size() != 3) throw InvalidArgument("--array-center expects x,y,z");
            return build_hemispherical_array(radius, {center[0], center[1], center[2]}, n);
        }
        throw InvalidArgument("custom arrays can only be read from a signal file");
    }
};

struct AcousticOptions {
    double vs = 1500.0;
    double fs = 20e6;
    long long nt = 1024;
    double t0 = 0.0;

    AcousticConfig resolve() const {
        AcousticConfig ac{vs, fs, nt, t0};
        ac.validate();
        return ac;
    }
};

struct ModelOptions {
    double sigma = 0.0; // 0 = grid spacing
    int n_min = 25;
    std::string precision = "single";
    bool deterministic = false;
    unsigned threads = 0;

    double sigma_for(const VoxelGrid& g) const { return sigma > 0.0 ? sigma : g.spacing; }
};

inline void add_grid(CLI::App* app, GridOptions& o) {
    app->add_option("--grid", o.dims, "Voxel counts nx,ny,nz")->delimiter(',')->expected(3);
    app->add_option("--spacing", o.spacing, "Voxel spacing (m)");
    app->add_option("--center", o.center, "Grid center x,y,z (m)")->delimiter(',')->expected(3);
    app->add_option("--like", o.like, "Take the grid from this GPV1 volume");
}

inline void add_array(CLI::App* app, ArrayOptions& o) {
    app->add_option("--array", o.kind, "planar | hemi")->check(CLI::IsMember({"planar", "hemi", "hemispherical"}));
    app->add_option("--aperture", o.aperture, "Planar aperture side (m)");
    app->add_option("--n-side", o.n_side, "Planar elements per side");
    app->add_option("--plane-z", o.plane_z, "Planar array z (m)");
    app->add_option("--radius", o.radius, "Hemisphere radius (m)");
    app->add_option("--array-center", o.center, "Hemisphere center x,y,z (m)")->delimiter(',')->expected(3);
    app->add_option("--n", o.n, "Hemisphere element count");
}

inline void add_acoustic(CLI::App* app, AcousticOptions& o) {
    app->add_option("--vs", o.vs, "Speed of sound (m/s)");
    app->add_option("--fs", o.fs, "Sampling rate (Hz)");
    app->add_option("--nt", o.nt, "Samples per trace");
    app->add_option("--t0", o.t0, "Time of the first sample (s)");
}

inline void add_model(CLI::App* app, ModelOptions& o, bool with_precision = true) {
    app->add_option("--sigma", o.sigma, "Gaussian kernel sigma (m), default = spacing");
    app->add_option("--n-min", o.n_min, "Minimum samples across the kernel support");
    if (with_precision)
        app->add_option("--precision", o.precision, "single | double")->check(CLI::IsMember({"single", "double"}));
    app->add_flag("--deterministic", o.deterministic, "Order-preserving reductions; zero wall-clock columns in traces");
    app->add_option("--threads", o.threads, "Worker threads (default GPAIR_THREADS or all cores)");
}

inline void apply_execution(const ModelOptions& o) {
    if (o.threads > 0) default_execution().threads = o.threads;
    default_execution().deterministic = o.deterministic;
}

inline void echo_grid(std::ostream& os, const VoxelGrid& g) {
    os << "grid dims=" << g.dims[0] << ',' << g.dims[1] << ',' << g.dims[2] << " spacing=" << g.spacing
       << " origin=" << g.origin.x << ',' << g.origin.y << ',' << g.origin.z << '\n';
}

inline void echo_acoustic(std::ostream& os, const AcousticConfig& a) {
    os << "acoustic vs=" << a.speed_of_sound << " fs=" << a.sampling_rate << " nt=" << a.n_samples << " t0=" << a.t0
       << '\n';
}

inline void echo_array(std::ostream& os, const DetectorArray& a) {
    os << "array label=" << to_string(a.label) << " n=" << a.size() << '\n';
}

inline void echo_execution(std::ostream& os, const ModelOptions& m) {
    os << "execution threads=" << default_execution().threads << " deterministic=" << (m.deterministic ? 1 : 0)
       << " precision=" << m.precision << '\n';
}

class StageTimer {
public:
    explicit StageTimer(std::string name) : name_(std::move(name)), start_(std::chrono::steady_clock::now()) {}
    ~StageTimer() {
        const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
        std::cout << "stage=" << name_ << " wall_ms=" << ms << '\n';
    }

private:
    std::string name_;
    std::chrono::steady_clock::time_point start_;
};

inline double elapsed_ms(std::chrono::steady_clock::time_point since) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

inline Dtype parse_dtype(const std::string& s) { return dtype_from_string(s); }

inline VolumeMask read_mask(const std::string& path, const VoxelGrid& grid) {
    const auto f = read_volume(path);
    if (f.grid.dims != grid.dims) throw InvalidArgument("mask '" + path + "' does not match the volume shape");
    VolumeMask m(f.values.size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = f.values[i] != 0.0;
    return m;
}

template <class Real>
int run_simulate(const VoxelImage<double>& volume, const DetectorArray& array, const AcousticConfig& ac,
                 const ModelOptions& mopt, bool oracle, double noise_snr, std::uint64_t noise_seed,
                 const std::string& out, Dtype dt) {
    SignalSet<Real> y;
    const double sigma = mopt.sigma_for(volume.grid);
    if (oracle) {
        StageTimer t("oracle_forward");
        const auto yd = oracle_forward(volume, array, ac, sigma);
        y = SignalSet<Real>(ac, array.size());
        for (std::size_t k = 0; k < yd.data.size(); ++k) y.data[k] = static_cast<Real>(yd.data[k]);
    } else {
        auto t_build = std::chrono::steady_clock::now();
        const ForwardModel model(volume.grid, array, ac, sigma, mopt.n_min);
        std::cout << "stage=precompute wall_ms=" << elapsed_ms(t_build) << '\n';
        std::cout << "assa " << model.assa() << '\n';
        StageTimer t("forward");
        y = model.forward(image_cast<Real>(volume));
    }
    if (noise_snr > 0.0) add_noise_snr(y, noise_snr, noise_seed);
    write_signals(out, y, dt, &array);
    return 0;
}

template <class Real>
int run_backproject(const SignalFile& sf, const VoxelGrid& grid, const DetectorArray& array, const ModelOptions& mopt,
                    bool normalize, const std::string& out, Dtype dt) {
    auto t_build = std::chrono::steady_clock::now();
    const ForwardModel model(grid, array, sf.acoustic, mopt.sigma_for(grid), mopt.n_min);
    std::cout << "stage=precompute wall_ms=" << elapsed_ms(t_build) << '\n';
    std::cout << "assa " << model.assa() << '\n';
    const auto b = sf.signals<Real>();
    VoxelImage<Real> g;
    {
        StageTimer t("adjoint");
        g = single_pass_reconstruct(b, model, normalize);
    }
    write_volume(out, g, dt);
    return 0;
}

template <class Real>
int run_reconstruct(const SignalFile& sf, const VoxelGrid& grid, const DetectorArray& array, const ModelOptions& mopt,
                    const ReconConfig& cfg, const std::string& out, const std::string& trace_path, Dtype dt) {
    auto t_build = std::chrono::steady_clock::now();
    const ForwardModel model(grid, array, sf.acoustic, mopt.sigma_for(grid), mopt.n_min);
    std::cout << "stage=precompute wall_ms=" << elapsed_ms(t_build) << '\n';
    std::cout << "assa " << model.assa() << '\n';
    std::cout << "recon iters=" << cfg.i_max << " eta_max=" << cfg.eta_max << " eta_min=" << cfg.eta_min
              << " restart_period=" << cfg.t_0 << " restart_mult=" << cfg.t_mult << " lambda=" << cfg.reg.lambda
              << " beta=" << cfg.reg.beta << " eps_reg=" << cfg.reg.eps_reg << " eps_npc=" << cfg.eps_npc
              << " init_backprojection=" << (cfg.init_backprojection ? 1 : 0) << " seed=" << cfg.seed << '\n';
    const auto b = sf.signals<Real>();
    ReconResult<Real> res;
    {
        StageTimer t("reconstruct");
        res = gpair_reconstruct(b, model, cfg);
    }
    std::cout << "result initial_loss=" << res.trace.front().loss << " final_loss=" << res.final_loss << '\n';
    write_volume(out, res.image, dt);
    if (!trace_path.empty()) {
        std::ofstream tr(trace_path);
        if (!tr) throw std::runtime_error("cannot open '" + trace_path + "'");
        tr << "iter,loss,data_term,reg_term,lr,wall_ms\n";
        char line[256];
        for (const auto& r : res.trace) {
            const double wall = mopt.deterministic ? 0.0 : r.wall_ms;
            std::snprintf(line, sizeof line, "%d,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.iter, r.loss, r.data_term,
                          r.reg_term, r.lr, wall);
            tr << line;
        }
    }
    return 0;
}

template <class Real>
int run_bench(const VoxelGrid& grid, const DetectorArray& array, const AcousticConfig& ac, const ModelOptions& mopt,
              int repeats) {
    auto t_build = std::chrono::steady_clock::now();
    const ForwardModel model(grid, array, ac, mopt.sigma_for(grid), mopt.n_min);
    const double build_ms = elapsed_ms(t_build);
    std::cout << "assa " << model.assa() << '\n';
    std::cout << "stage=precompute wall_ms=" << build_ms << '\n';
    VoxelImage<Real> x(grid);
    std::mt19937_64 rng(1);
    for (auto& v : x.values) v = static_cast<Real>(detail::unit_uniform(rng));
    const double pairs = static_cast<double>(grid.size()) * static_cast<double>(array.size());
    double best_fwd = 1e300, best_adj = 1e300;
    SignalSet<Real> y;
    for (int r = 0; r < repeats; ++r) {
        auto t = std::chrono::steady_clock::now();
        y = model.forward(x);
        best_fwd = std::min(best_fwd, elapsed_ms(t));
        t = std::chrono::steady_clock::now();
        auto g = model.adjoint(y);
        best_adj = std::min(best_adj, elapsed_ms(t));
    }
    std::cout << "stage=forward wall_ms=" << best_fwd << " pairs_per_s=" << pairs / (best_fwd * 1e-3) << '\n';
    std::cout << "stage=adjoint wall_ms=" << best_adj << " pairs_per_s=" << pairs / (best_adj * 1e-3) << '\n';
    return 0;
}

inline int cli_main(int argc, char** argv) {
    CLI::App app{"Gaussian-kernel photoacoustic forward modeling and iterative reconstruction", "gpair"};
    app.require_subcommand(1);

    GridOptions grid_opt;
    ArrayOptions array_opt;
    AcousticOptions ac_opt;
    ModelOptions model_opt;
    std::string out, dtype_name = "f32";

    // phantom
    auto* phantom = app.add_subcommand("phantom", "Generate a synthetic phantom volume");
    PhantomSpec pspec;
    std::string kind = "blobs";
    add_grid(phantom, grid_opt);
    phantom->add_option("--kind", kind, "blobs | tubes | grid-of-points")
        ->check(CLI::IsMember({"blobs", "tubes", "grid-of-points", "points"}));
    phantom->add_option("--seed", pspec.seed);
    phantom->add_option("--count", pspec.count);
    phantom->add_option("--radius-min", pspec.radius_min, "Feature width, voxels");
    phantom->add_option("--radius-max", pspec.radius_max, "Feature width, voxels");
    phantom->add_option("--amplitude-min", pspec.amplitude_min);
    phantom->add_option("--amplitude-max", pspec.amplitude_max);
    phantom->add_option("--extent", pspec.extent, "Placement box as a fraction of the grid");
    phantom->add_option("--segments", pspec.segments, "Segments per tube");
    phantom->add_option("--out", out, "Output GPV1 volume")->required();
    phantom->add_option("--dtype", dtype_name)->check(CLI::IsMember({"f32", "f64"}));

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Forward-model detector signals from a volume");
    std::string volume_path;
    bool oracle = false;
    double noise_snr = 0.0;
    std::uint64_t noise_seed = 0;
    simulate->add_option("--volume", volume_path, "Input GPV1 volume")->required();
    add_array(simulate, array_opt);
    add_acoustic(simulate, ac_opt);
    add_model(simulate, model_opt);
    simulate->add_flag("--oracle", oracle, "Use direct pair enumeration (double precision)");
    simulate->add_option("--noise-snr", noise_snr, "Add Gaussian noise with max|signal|/std = S");
    simulate->add_option("--noise-seed", noise_seed);
    simulate->add_option("--out", out, "Output GPS1 signals")->required();
    simulate->add_option("--dtype", dtype_name)->check(CLI::IsMember({"f32", "f64"}));

    // backproject
    auto* backproject = app.add_subcommand("backproject", "Single adjoint application A^T b");
    std::string signals_path;
    bool no_normalize = false;
    backproject->add_option("--signals", signals_path, "Input GPS1 signals")->required();
    add_grid(backproject, grid_opt);
    add_array(backproject, array_opt);
    add_model(backproject, model_opt);
    backproject->add_flag("--no-normalize", no_normalize, "Keep raw adjoint amplitudes");
    backproject->add_option("--out", out)->required();
    backproject->add_option("--dtype", dtype_name)->check(CLI::IsMember({"f32", "f64"}));

    // reconstruct
    auto* reconstruct = app.add_subcommand("reconstruct", "Iterative reconstruction");
    ReconConfig rcfg;
    std::string trace_path;
    reconstruct->add_option("--signals", signals_path)->required();
    add_grid(reconstruct, grid_opt);
    add_array(reconstruct, array_opt);
    add_model(reconstruct, model_opt);
    reconstruct->add_option("--iters", rcfg.i_max);
    reconstruct->add_option("--eta-max", rcfg.eta_max);
    reconstruct->add_option("--eta-min", rcfg.eta_min);
    reconstruct->add_option("--restart-period", rcfg.t_0, "First warm-restart period T_0");
    reconstruct->add_option("--restart-mult", rcfg.t_mult, "Period multiplier T_mult");
    reconstruct->add_option("--lambda", rcfg.reg.lambda);
    reconstruct->add_option("--beta", rcfg.reg.beta);
    reconstruct->add_option("--eps-reg", rcfg.reg.eps_reg);
    reconstruct->add_option("--eps-npc", rcfg.eps_npc);
    reconstruct->add_option("--adam-beta1", rcfg.adam_beta1);
    reconstruct->add_option("--adam-beta2", rcfg.adam_beta2);
    reconstruct->add_option("--adam-eps", rcfg.adam_eps);
    reconstruct->add_option("--seed", rcfg.seed);
    reconstruct->add_flag("--init-backprojection", rcfg.init_backprojection,
                          "Start from z = sqrt(max(A^T b, 0)) instead of zero");
    reconstruct->add_option("--out", out)->required();
    reconstruct->add_option("--trace", trace_path, "Per-iteration CSV");
    reconstruct->add_option("--dtype", dtype_name)->check(CLI::IsMember({"f32", "f64"}));

    // metrics
    auto* metrics = app.add_subcommand("metrics", "Image-quality metrics");
    std::string reference_path, signal_mask_path, bg_mask_path, json_path;
    metrics->add_option("--volume", volume_path)->required();
    metrics->add_option("--reference", reference_path);
    metrics->add_option("--signal-mask", signal_mask_path);
    metrics->add_option("--bg-mask", bg_mask_path);
    metrics->add_option("--json", json_path, "Write the report as JSON");

    // dottest
    auto* dottest = app.add_subcommand("dottest", "Check <Ax, d> = <x, A^T d> on random data");
    int trials = 5;
    std::uint64_t seed = 1;
    double tolerance = 1e-10;
    add_grid(dottest, grid_opt);
    add_array(dottest, array_opt);
    add_acoustic(dottest, ac_opt);
    add_model(dottest, model_opt, false);
    dottest->add_option("--trials", trials);
    dottest->add_option("--seed", seed);
    dottest->add_option("--tolerance", tolerance);

    // bench
    auto* bench = app.add_subcommand("bench", "Time forward and adjoint operators");
    int repeats = 3;
    add_grid(bench, grid_opt);
    add_array(bench, array_opt);
    add_acoustic(bench, ac_opt);
    add_model(bench, model_opt);
    bench->add_option("--repeats", repeats);

    // map
    auto* map = app.add_subcommand("map", "Write a maximum amplitude projection or slice as PGM");
    std::string axis_name = "z";
    int slice_index = -1;
    map->add_option("--volume", volume_path)->required();
    map->add_option("--axis", axis_name)->check(CLI::IsMember({"x", "y", "z"}));
    map->add_option("--slice", slice_index, "Extract this slice instead of the projection");
    map->add_option("--out", out)->required();

    // export-raw
    auto* export_raw = app.add_subcommand("export-raw", "Write a volume as raw payload plus text sidecar");
    export_raw->add_option("--volume", volume_path)->required();
    export_raw->add_option("--out", out)->required();

    if (argc <= 1) {
        std::cerr << app.help();
        return 2;
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        std::cout << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        apply_execution(model_opt);
        const Dtype dt = parse_dtype(dtype_name);
        const bool single = model_opt.precision == "single";

        if (*phantom) {
            pspec.kind = phantom_kind_from_string(kind);
            const VoxelGrid g = grid_opt.resolve();
            echo_grid(std::cout, g);
            std::cout << "phantom kind=" << to_string(pspec.kind) << " seed=" << pspec.seed << " count=" << pspec.count
                      << " radius=" << pspec.radius_min << ',' << pspec.radius_max << " amplitude="
                      << pspec.amplitude_min << ',' << pspec.amplitude_max << " extent=" << pspec.extent
                      << " segments=" << pspec.segments << '\n';
            write_volume(out, generate_phantom(pspec, g), dt);
            return 0;
        }
        if (*simulate) {
            const auto vf = read_volume(volume_path);
            const auto arr = array_opt.resolve();
            const auto ac = ac_opt.resolve();
            echo_grid(std::cout, vf.grid);
            echo_array(std::cout, arr);
            echo_acoustic(std::cout, ac);
            echo_execution(std::cout, model_opt);
            std::cout << "simulate oracle=" << (oracle ? 1 : 0) << " noise_snr=" << noise_snr
                      << " noise_seed=" << noise_seed << " sigma=" << model_opt.sigma_for(vf.grid) << '\n';
            if (oracle) std::cout << "assa " << compute_assa(model_opt.sigma_for(vf.grid), ac, model_opt.n_min) << '\n';
            return single ? run_simulate<float>(vf.image(), arr, ac, model_opt, oracle, noise_snr, noise_seed, out, dt)
                          : run_simulate<double>(vf.image(), arr, ac, model_opt, oracle, noise_snr, noise_seed, out, dt);
        }
        if (*backproject || *reconstruct) {
            const auto sf = read_signals(signals_path);
            const VoxelGrid g = grid_opt.resolve();
            const DetectorArray arr = sf.detectors ? *sf.detectors : array_opt.resolve();
            if (arr.size() != sf.n_detectors) throw InvalidArgument("detector count does not match signal file");
            echo_grid(std::cout, g);
            echo_array(std::cout, arr);
            echo_acoustic(std::cout, sf.acoustic);
            echo_execution(std::cout, model_opt);
            if (*backproject)
                return single ? run_backproject<float>(sf, g, arr, model_opt, !no_normalize, out, dt)
                              : run_backproject<double>(sf, g, arr, model_opt, !no_normalize, out, dt);
            rcfg.precision = single ? Precision::single : Precision::double_;
            return single ? run_reconstruct<float>(sf, g, arr, model_opt, rcfg, out, trace_path, dt)
                          : run_reconstruct<double>(sf, g, arr, model_opt, rcfg, out, trace_path, dt);
        }
        if (*metrics) {
            const auto x = read_volume(volume_path).image();
            nlohmann::json j;
            if (!reference_path.empty()) {
                const auto ref = read_volume(reference_path).image();
                const auto mp = mse_psnr(x, ref);
                j["mse"] = mp.mse;
                j["psnr"] = mp.psnr;
                j["ssim"] = ssim3d(x, ref);
            }
            if (!signal_mask_path.empty() || !bg_mask_path.empty()) {
                if (signal_mask_path.empty() || bg_mask_path.empty())
                    throw InvalidArgument("--signal-mask and --bg-mask must be given together");
                const auto rf = reference_free_metrics(x, read_mask(signal_mask_path, x.grid), read_mask(bg_mask_path, x.grid));
                j["cnr"] = rf.cnr;
                j["snr"] = rf.snr;
                j["bg_std"] = rf.bg_std;
                j["sharpness"] = rf.sharpness;
            }
            if (j.is_null()) throw InvalidArgument("nothing to compute: pass --reference and/or masks");
            const std::string text = j.dump(2);
            std::cout << text << '\n';
            if (!json_path.empty()) {
                std::ofstream os(json_path);
                if (!os) throw std::runtime_error("cannot open '" + json_path + "'");
                os << text << '\n';
            }
            return 0;
        }
        if (*dottest) {
            const VoxelGrid g = grid_opt.resolve();
            const auto arr = array_opt.resolve();
            const auto ac = ac_opt.resolve();
            const auto assa = compute_assa(model_opt.sigma_for(g), ac, model_opt.n_min);
            echo_grid(std::cout, g);
            echo_array(std::cout, arr);
            echo_acoustic(std::cout, ac);
            std::cout << "assa " << assa << '\n';
            const auto rep = adjoint_dot_test<double>(g, arr, ac, assa, trials, seed);
            for (std::size_t t = 0; t < rep.discrepancies.size(); ++t)
                std::cout << "trial=" << t << " discrepancy=" << rep.discrepancies[t] << '\n';
            std::cout << "max_discrepancy=" << rep.max_discrepancy << '\n';
            return rep.max_discrepancy <= tolerance ? 0 : 1;
        }
        if (*bench) {
            const VoxelGrid g = grid_opt.resolve();
            const auto arr = array_opt.resolve();
            const auto ac = ac_opt.resolve();
            echo_grid(std::cout, g);
            echo_array(std::cout, arr);
            echo_acoustic(std::cout, ac);
            echo_execution(std::cout, model_opt);
            return single ? run_bench<float>(g, arr, ac, model_opt, repeats)
                          : run_bench<double>(g, arr, ac, model_opt, repeats);
        }
        if (*map) {
            const auto x = read_volume(volume_path).image();
            const Axis ax = axis_from_string(axis_name);
            write_pgm(out, slice_index >= 0 ? slice_extract(x, ax, slice_index) : max_projection(x, ax));
            return 0;
        }
        if (*export_raw) {
            export_raw_volume(read_volume(volume_path), out);
            return 0;
        }
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

} // namespace gpair::cli
