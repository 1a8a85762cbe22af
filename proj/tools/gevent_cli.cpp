// gevent: simulate SPAD photon cubes, encode them as generalized event
// streams, decode, and evaluate rate-distortion.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gevent/detectors.hpp"
#include "gevent/error.hpp"
#include "gevent/event_model.hpp"
#include "gevent/io.hpp"
#include "gevent/metrics.hpp"
#include "gevent/photon_sim.hpp"
#include "gevent/reconstruct.hpp"

using namespace gevent;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flags shared by every command that builds a CameraConfig.
struct MethodFlags {
    std::string method = "ema";
    std::optional<double> tau;
    std::optional<double> gamma;
    std::uint32_t warmup = 64;
    std::uint16_t K = 3;
    std::uint16_t m = 32;
    std::uint16_t patch = 4;
    std::string P_file;
    std::uint16_t tcode = 1024;
    std::uint16_t J = 4;
    std::uint16_t N = 16;
    double z = 3.0;
    std::uint64_t seed = 0;
    unsigned quant = 10;

    void add(CLI::App* app) {
        app->add_option("--method", method, "dvs | ema | bayes | chunk | coded")
            ->check(CLI::IsMember({"dvs", "ema", "bayes", "chunk", "coded"}))
            ->capture_default_str();
        app->add_option("--tau", tau,
                        "Contrast threshold (default 0.45 for dvs/ema, mid-range of the usual sweep; "
                        "7.0 for chunk with the identity feature matrix)");
        app->add_option("--gamma", gamma,
                        "EMA decay for dvs/ema (default 0.97) or change-point prior for bayes (default 1e-4)");
        app->add_option("--warmup", warmup, "ema: frames before the reference is fixed")->capture_default_str();
        app->add_option("--K", K, "bayes: forecasters kept after pruning")->capture_default_str();
        app->add_option("--m", m, "chunk: binary frames per temporal chunk")->capture_default_str();
        app->add_option("--patch", patch, "chunk: spatial patch side")->capture_default_str();
        app->add_option("--P-file", P_file, "chunk: feature matrix file ('P r q' + r rows); identity if omitted");
        app->add_option("--tcode", tcode, "coded: frames per code window")->capture_default_str();
        app->add_option("--J", J, "coded: number of bucket codes")->capture_default_str();
        app->add_option("--N", N, "coded: subframes per window")->capture_default_str();
        app->add_option("--z", z, "coded: Wilson interval width in standard deviations")->capture_default_str();
        app->add_option("--seed", seed, "coded: mask seed")->capture_default_str();
        app->add_option("--quant", quant, "payload quantization bits")->capture_default_str();
    }

    CameraConfig config(std::uint32_t w, std::uint32_t h, std::uint32_t t) const {
        CameraConfig c = default_config(parse_method(method), w, h, t);
        if (tau) c.tau = *tau;
        if (gamma) (c.method == Method::bayes ? c.gamma_bayes : c.gamma_ema) = *gamma;
        c.warmup = warmup;
        c.forecasters = K;
        c.chunk_size = m;
        c.patch = patch;
        c.t_code = tcode;
        c.buckets = J;
        c.subframes = N;
        c.z = z;
        c.mask_seed = seed;
        require(quant >= 1 && quant <= 16, "--quant must be in [1,16]");
        c.quant_bits = static_cast<std::uint8_t>(quant);
        c.validate();
        return c;
    }

    std::optional<FeatureMatrix> feature_matrix() const {
        if (P_file.empty()) return std::nullopt;
        return FeatureMatrix::load(P_file);
    }
};

PeakMode parse_peak(const std::string& s) {
    if (s == "max") return PeakMode::max_truth;
    if (s == "unit") return PeakMode::unit;
    throw UsageError("--peak must be max or unit");
}

std::vector<double> parse_grid(const std::string& s) {
    std::vector<double> grid;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            grid.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError("--grid: bad value '" + item + "'");
        }
    }
    if (grid.empty()) throw UsageError("--grid: empty");
    return grid;
}

std::vector<std::pair<std::uint32_t, double>> parse_pieces(const std::string& s) {
    std::vector<std::pair<std::uint32_t, double>> pieces;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw UsageError("--pieces: expected duration:level, got '" + item + "'");
        try {
            pieces.emplace_back(static_cast<std::uint32_t>(std::stoul(item.substr(0, colon))),
                                std::stod(item.substr(colon + 1)));
        } catch (const std::exception&) {
            throw UsageError("--pieces: bad piece '" + item + "'");
        }
    }
    return pieces;
}

// key=value lines; '#' starts a comment. Keys are long option names without dashes.
void apply_config_file(CLI::App* sub, const std::string& path, bool strict_flags) {
    std::ifstream in(path);
    if (!in) fail(Errc::io, "cannot open config file '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
        auto trim = [](std::string v) {
            const auto a = v.find_first_not_of(" \t\r");
            const auto b = v.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : v.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        CLI::Option* opt = key.empty() ? nullptr : sub->get_option_no_throw("--" + key);
        if (!opt || key == "config" || key == "help")
            throw UsageError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
        if (strict_flags && opt->count() > 0) continue;
        opt->clear();
        opt->add_result(value);
        opt->run_callback();
    }
}

std::string one_line(std::string s) {
    for (char& c : s)
        if (c == '\n' || c == '\r') c = ' ';
    return s;
}

void print_resolved(const CLI::App* sub) {
    std::cerr << "resolved: command=" << sub->get_name();
    for (const CLI::Option* opt : sub->get_options()) {
        const std::string name = opt->get_lnames().empty() ? opt->get_name() : opt->get_lnames().front();
        if (name == "help" || name == "config") continue;
        std::string value;
        if (opt->count() > 0) {
            for (const auto& r : opt->results()) value += (value.empty() ? "" : ",") + r;
        } else {
            value = opt->get_default_str();
            if (value.empty()) value = "-";
        }
        std::cerr << ' ' << name << '=' << value;
    }
    std::cerr << '\n';
}

void print_stream_summary(const EventStream& s, double duration) {
    const ReadoutReport r = readout_report(s, duration);
    std::cerr << "stream: method=" << method_name(s.config.method) << " packets=" << r.packets
              << " bits=" << r.total_bits << " bps_per_pixel=" << format_number(r.bits_per_pixel_per_second)
              << " compression=" << format_number(r.compression_vs_raw) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generalized event cameras for single-photon sensors"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string config_file;
    bool strict_flags = false;
    app.add_option("--config", config_file, "key=value file; its values override command-line flags");
    app.add_flag("--strict-flags", strict_flags, "command-line flags take precedence over the config file");

    // synth
    auto* synth = app.add_subcommand("synth", "Generate a synthetic flux video and/or photon cube");
    std::string kind = "static", synth_frames_dir, synth_out, pieces;
    SceneParams scene;
    double synth_ppp = kDefaultTargetPpp, synth_dark = kDefaultDarkRate;
    std::uint32_t synth_frames_per = kDefaultFramesPerVideoFrame;
    std::uint64_t synth_seed = 0;
    bool noise_free = false;
    synth->add_option("--kind", kind, "static | step | moving_block | piecewise_1d")
        ->check(CLI::IsMember({"static", "step", "moving_block", "piecewise_1d"}))
        ->capture_default_str();
    synth->add_option("--width", scene.width)->capture_default_str();
    synth->add_option("--height", scene.height)->capture_default_str();
    synth->add_option("--frames", scene.frames, "video frames")->capture_default_str();
    synth->add_option("--fps", scene.frame_rate, "video frame rate")->capture_default_str();
    synth->add_option("--level", scene.level, "static level / step before / block background")->capture_default_str();
    synth->add_option("--level2", scene.level2, "step after / block foreground")->capture_default_str();
    synth->add_option("--step-frame", scene.step_frame)->capture_default_str();
    synth->add_option("--speed", scene.speed, "moving block speed, pixels per video frame")->capture_default_str();
    synth->add_option("--block-size", scene.block_size)->capture_default_str();
    synth->add_option("--block-x0", scene.block_x0)->capture_default_str();
    synth->add_option("--block-y0", scene.block_y0)->capture_default_str();
    synth->add_option("--pieces", pieces, "piecewise_1d: duration:level,duration:level,...");
    synth->add_option("--out-frames", synth_frames_dir, "write the flux video as 16-bit PGM frames");
    synth->add_option("--out", synth_out, "write a photon cube (.phc)");
    synth->add_option("--ppp", synth_ppp, "mean photo-electrons per pixel per binary frame")->capture_default_str();
    synth->add_option("--dark", synth_dark, "dark detections per binary frame")->capture_default_str();
    synth->add_option("--frames-per", synth_frames_per, "binary frames per video frame")->capture_default_str();
    synth->add_option("--seed", synth_seed)->capture_default_str();
    synth->add_flag("--noise-free", noise_free, "levels are detection probabilities; bits are evenly spread");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Simulate a photon cube from a directory of PGM frames");
    std::string sim_in, sim_out, sim_gamma = "linear";
    double sim_ppp = kDefaultTargetPpp, sim_dark = kDefaultDarkRate, sim_fps = kDefaultVideoFps;
    std::uint32_t sim_frames_per = kDefaultFramesPerVideoFrame;
    std::uint64_t sim_seed = 0;
    simulate->add_option("frames_dir", sim_in)->required();
    simulate->add_option("out", sim_out, "output .phc")->required();
    simulate->add_option("--ppp", sim_ppp)->capture_default_str();
    simulate->add_option("--dark", sim_dark)->capture_default_str();
    simulate->add_option("--frames-per", sim_frames_per)->capture_default_str();
    simulate->add_option("--fps", sim_fps, "video frame rate")->capture_default_str();
    simulate->add_option("--seed", sim_seed)->capture_default_str();
    simulate->add_option("--gamma", sim_gamma, "input transfer: linear | srgb")->capture_default_str();

    // encode
    auto* encode_cmd = app.add_subcommand("encode", "Encode a photon cube into an event stream");
    std::string enc_in, enc_out;
    MethodFlags enc_flags;
    encode_cmd->add_option("in", enc_in, "input .phc")->required();
    encode_cmd->add_option("out", enc_out, "output .gev")->required();
    enc_flags.add(encode_cmd);

    // decode
    auto* decode_cmd = app.add_subcommand("decode", "Reconstruct PGM frames from an event stream");
    std::string dec_in, dec_out, dec_mask;
    std::uint32_t dec_stride = 32;
    decode_cmd->add_option("in", dec_in, "input .gev")->required();
    decode_cmd->add_option("out_dir", dec_out)->required();
    decode_cmd->add_option("--stride", dec_stride, "binary frames between output frames")->capture_default_str();
    decode_cmd->add_option("--hot-mask", dec_mask, "8-bit PGM, nonzero = hot pixel");

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "Readout and PSNR report for an event stream");
    std::string ev_in, ev_truth, ev_report, ev_gamma = "linear", ev_peak = "max";
    std::uint32_t ev_stride = 32, ev_frames_per = kDefaultFramesPerVideoFrame;
    double ev_ppp = kDefaultTargetPpp, ev_dark = kDefaultDarkRate, ev_fps = kDefaultVideoFps;
    std::optional<double> ev_alpha;
    evaluate->add_option("in", ev_in, "input .gev")->required();
    evaluate->add_option("truth_frames", ev_truth, "directory of ground-truth PGM frames")->required();
    evaluate->add_option("report", ev_report, "output CSV")->required();
    evaluate->add_option("--stride", ev_stride)->capture_default_str();
    evaluate->add_option("--frames-per", ev_frames_per)->capture_default_str();
    evaluate->add_option("--fps", ev_fps, "video frame rate")->capture_default_str();
    evaluate->add_option("--gamma", ev_gamma, "truth transfer: linear | srgb")->capture_default_str();
    evaluate->add_option("--ppp", ev_ppp, "calibration target used at simulation time")->capture_default_str();
    evaluate->add_option("--dark", ev_dark)->capture_default_str();
    evaluate->add_option("--alpha", ev_alpha, "explicit calibration gain (overrides --ppp)");
    evaluate->add_option("--peak", ev_peak, "PSNR peak: max (max linear truth) | unit")->capture_default_str();

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "Rate-distortion sweep over the method's sensitivity");
    std::string sw_in, sw_truth, sw_out, sw_grid, sw_gamma = "linear", sw_peak = "max";
    std::uint32_t sw_stride = 32, sw_frames_per = kDefaultFramesPerVideoFrame;
    MethodFlags sw_flags;
    sweep_cmd->add_option("in", sw_in, "input .phc")->required();
    sweep_cmd->add_option("truth_frames", sw_truth)->required();
    sweep_cmd->add_option("out", sw_out, "output CSV")->required();
    sweep_cmd->add_option("--grid", sw_grid, "comma-separated sensitivity values (tau, gamma or z)")->required();
    sweep_cmd->add_option("--stride", sw_stride)->capture_default_str();
    sweep_cmd->add_option("--frames-per", sw_frames_per)->capture_default_str();
    sweep_cmd->add_option("--truth-gamma", sw_gamma, "truth transfer: linear | srgb")->capture_default_str();
    sweep_cmd->add_option("--peak", sw_peak, "PSNR peak: max | unit")->capture_default_str();
    sw_flags.add(sweep_cmd);

    // detect1d
    auto* detect1d = app.add_subcommand("detect1d", "Bayesian change points of a 0/1 series");
    std::string d1_in;
    double d1_gamma = 1e-4;
    std::uint16_t d1_K = 3;
    bool d1_changes_only = false;
    detect1d->add_option("series", d1_in, "text file of 0/1 characters ('-' = stdin)")->required();
    detect1d->add_option("--gamma", d1_gamma, "change-point prior")->capture_default_str();
    detect1d->add_option("--K", d1_K, "forecasters kept after pruning")->capture_default_str();
    detect1d->add_flag("--changes-only", d1_changes_only, "print only change-point times");

    // hotmask
    auto* hotmask = app.add_subcommand("hotmask", "Hot-pixel mask from a dark photon cube");
    std::string hm_in, hm_out;
    double hm_threshold = 0.01;
    hotmask->add_option("in", hm_in, "dark .phc")->required();
    hotmask->add_option("out", hm_out, "output 8-bit PGM")->required();
    hotmask->add_option("--threshold", hm_threshold, "detection rate above which a pixel is hot")->capture_default_str();

    try {
        try {
            app.parse(argc, argv);
        } catch (const CLI::CallForHelp&) {
            return app.exit(CLI::CallForHelp());
        } catch (const CLI::CallForAllHelp&) {
            return app.exit(CLI::CallForAllHelp());
        } catch (const CLI::ParseError& e) {
            throw UsageError(e.what());
        }
        CLI::App* sub = app.get_subcommands().front();
        if (!config_file.empty()) apply_config_file(sub, config_file, strict_flags);
        print_resolved(sub);

        if (sub == synth) {
            if (synth_frames_dir.empty() && synth_out.empty()) throw UsageError("synth: need --out-frames and/or --out");
            if (!pieces.empty()) scene.pieces = parse_pieces(pieces);
            const FluxVideo video = synth_scene(parse_scene_kind(kind), scene);
            if (!synth_frames_dir.empty()) io::write_flux_video(synth_frames_dir, video);
            if (!synth_out.empty()) {
                const PhotonCube cube = noise_free ? dither_cube(video, synth_frames_per)
                                                   : simulate_cube(video, calibrate_alpha(video, synth_ppp, synth_dark),
                                                                   synth_frames_per, synth_seed);
                io::write_photon_cube(synth_out, cube);
                std::cerr << "cube: " << cube.width() << "x" << cube.height() << "x" << cube.frames()
                          << " rate=" << format_number(cube.mean_rate()) << '\n';
            }
        } else if (sub == simulate) {
            const FluxVideo video = io::read_flux_video(sim_in, io::parse_gamma(sim_gamma), sim_fps);
            const PhotonCube cube =
                simulate_cube(video, calibrate_alpha(video, sim_ppp, sim_dark), sim_frames_per, sim_seed);
            io::write_photon_cube(sim_out, cube);
            std::cerr << "cube: " << cube.width() << "x" << cube.height() << "x" << cube.frames()
                      << " alpha=" << format_number(cube.calibration().alpha)
                      << " rate=" << format_number(cube.mean_rate()) << '\n';
        } else if (sub == encode_cmd) {
            const PhotonCube cube = io::read_photon_cube(enc_in);
            const CameraConfig c = enc_flags.config(cube.width(), cube.height(), cube.frames());
            const auto P = enc_flags.feature_matrix();
            const EventStream s = encode(cube, c, P ? &*P : nullptr);
            io::write_event_stream(enc_out, s);
            print_stream_summary(s, cube.duration_s());
        } else if (sub == decode_cmd) {
            const EventStream s = io::read_event_stream(dec_in);
            BacktrackedCube recon = decode(s, dec_stride);
            if (!dec_mask.empty()) recon = inpaint_hot(recon, io::read_hot_mask(dec_mask));
            io::write_frames(recon, dec_out);
            std::cerr << "frames: " << recon.samples() << '\n';
        } else if (sub == evaluate) {
            const EventStream s = io::read_event_stream(ev_in);
            const FluxVideo truth = io::read_flux_video(ev_truth, io::parse_gamma(ev_gamma), ev_fps);
            SpadCalibration cal = ev_alpha ? SpadCalibration{*ev_alpha, ev_dark} : calibrate_alpha(truth, ev_ppp, ev_dark);
            cal.validate();
            require(ev_frames_per >= 1, "--frames-per must be >= 1");
            const double duration = s.config.frames / (ev_fps * ev_frames_per);
            const ReadoutReport r = readout_report(s, duration);
            RateDistortionPoint pt;
            pt.param_value = sensitivity(s.config);
            pt.bits_total = r.total_bits;
            pt.bps_per_pixel = r.bits_per_pixel_per_second;
            pt.compression = r.compression_vs_raw;
            pt.psnr_db = psnr(decode(s, ev_stride), truth, cal, ev_frames_per, parse_peak(ev_peak));
            std::ofstream out(ev_report);
            if (!out) fail(Errc::io, "cannot write '" + ev_report + "'");
            write_sweep_csv(out, {pt});
            std::cerr << "report: bps_per_pixel=" << format_number(pt.bps_per_pixel)
                      << " psnr_db=" << format_number(pt.psnr_db) << " peak=" << ev_peak << '\n';
        } else if (sub == sweep_cmd) {
            const PhotonCube cube = io::read_photon_cube(sw_in);
            const FluxVideo truth = io::read_flux_video(sw_truth, io::parse_gamma(sw_gamma),
                                                        cube.binary_frame_rate() / sw_frames_per);
            SweepSpec spec;
            spec.base = sw_flags.config(cube.width(), cube.height(), cube.frames());
            spec.grid = parse_grid(sw_grid);
            spec.cube = &cube;
            spec.truth = &truth;
            spec.stride = sw_stride;
            spec.frames_per_video_frame = sw_frames_per;
            spec.peak = parse_peak(sw_peak);
            if (auto P = sw_flags.feature_matrix()) spec.P = *P;
            const auto points = sweep(spec);
            std::ofstream out(sw_out);
            if (!out) fail(Errc::io, "cannot write '" + sw_out + "'");
            write_sweep_csv(out, points);
            for (const auto& p : points)
                if (p.failed) std::cerr << "point failed: param=" << format_number(p.param_value) << " " << p.error << '\n';
        } else if (sub == detect1d) {
            std::vector<std::uint8_t> bits;
            if (d1_in == "-") {
                bits = io::read_bit_series(std::cin);
            } else {
                std::ifstream in(d1_in);
                if (!in) fail(Errc::io, "cannot open '" + d1_in + "'");
                bits = io::read_bit_series(in);
            }
            BayesianChangeDetector det(d1_gamma, d1_K);
            std::vector<std::uint64_t> changes;
            if (!d1_changes_only) std::cout << "t,bit,map_origin,change\n";
            for (std::uint64_t t = 0; t < bits.size(); ++t) {
                const auto step = det.push(bits[t] != 0, t);
                if (!d1_changes_only)
                    std::cout << t << ',' << int(bits[t]) << ',' << step.map_origin << ',' << int(step.change) << '\n';
                if (step.change) {
                    changes.push_back(t);
                    det.reset(t + 1);
                }
            }
            if (d1_changes_only)
                for (auto t : changes) std::cout << t << '\n';
            std::cerr << "change_points=" << changes.size() << '\n';
        } else if (sub == hotmask) {
            const PhotonCube dark = io::read_photon_cube(hm_in);
            const HotPixelMask mask = detect_hot_pixels(dark, hm_threshold);
            io::write_hot_mask(hm_out, mask);
            std::cerr << "hot_pixels=" << mask.count() << '\n';
        }
        return 0;
    } catch (const UsageError& e) {
        std::cerr << "error: code=usage msg=" << one_line(e.what()) << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: code=" << errc_name(e.code()) << " msg=" << one_line(e.what()) << '\n';
        return exit_status(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: code=internal msg=" << one_line(e.what()) << '\n';
        return 1;
    }
}
