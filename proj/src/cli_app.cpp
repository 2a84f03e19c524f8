#include "shapetone/cli_app.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include "shapetone/filter.hpp"
#include "shapetone/score.hpp"
#include "shapetone/transform.hpp"

namespace shapetone::cli {

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitDecode = 2;
constexpr int kExitNoObjects = 3;

struct MappingOpts {
    double beats = 16.0;
    std::string range = "48:84";
    int level = 2;
    int program = 0;
    bool no_progression = false;
    bool no_interval = false;
    bool no_dynamics = false;
    bool no_pauses = false;
    int notes_per_unit = 8;
    std::string snap = "chromatic";
    int interval_max = 12;

    CLI::Option* range_opt = nullptr;
    CLI::Option* program_opt = nullptr;
};

void add_mapping_options(CLI::App* sub, MappingOpts& opts) {
    sub->add_option("--beats", opts.beats, "Total length in beats")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    opts.range_opt = sub->add_option("--range", opts.range, "Pitch range lo:hi (MIDI notes)")
                         ->capture_default_str();
    sub->add_option("--level", opts.level, "Discretization level (higher = finer)")
        ->check(CLI::Range(1, 64))
        ->capture_default_str();
    opts.program_opt = sub->add_option("--program", opts.program, "General MIDI program")
                           ->check(CLI::Range(0, 127))
                           ->capture_default_str();
    sub->add_flag("--no-progression", opts.no_progression, "Ignore stroke direction for pitch");
    sub->add_flag("--no-interval", opts.no_interval, "Ignore stroke angle for intervals");
    sub->add_flag("--no-dynamics", opts.no_dynamics, "Ignore stroke thickness for velocity");
    sub->add_flag("--no-pauses", opts.no_pauses, "Compact horizontal gaps instead of resting");
    sub->add_option("--notes-per-unit", opts.notes_per_unit, "Note density per unit of scale")
        ->check(CLI::Range(1, 64))
        ->capture_default_str();
    sub->add_option("--snap", opts.snap, "Pitch snapping: chromatic, major or minor")
        ->check(CLI::IsMember({"chromatic", "major", "minor"}))
        ->capture_default_str();
    sub->add_option("--interval-max", opts.interval_max, "Largest interval step in semitones")
        ->check(CLI::Range(1, 48))
        ->capture_default_str();
}

transform::MappingConfig build_config(const MappingOpts& opts) {
    transform::MappingConfig cfg;
    cfg.total_beats = opts.beats;

    std::string range = opts.range;
    if (opts.range_opt->count() == 0 && opts.program_opt->count() > 0) {
        // A chosen instrument without an explicit range plays in its
        // comfortable register.
        const auto [lo, hi] = score::instrument_comfort_range(opts.program);
        cfg.pitch_lo = lo;
        cfg.pitch_hi = hi;
        range.clear();
    }
    if (!range.empty()) {
        const auto colon = range.find(':');
        int lo = -1, hi = -1;
        try {
            if (colon == std::string::npos) throw std::invalid_argument("range");
            lo = std::stoi(range.substr(0, colon));
            hi = std::stoi(range.substr(colon + 1));
        } catch (const std::exception&) {
            throw CLI::ValidationError("--range", "expected lo:hi, e.g. 48:72");
        }
        if (lo < 0 || hi > 127 || lo >= hi)
            throw CLI::ValidationError("--range", "expected MIDI notes with lo < hi");
        cfg.pitch_lo = lo;
        cfg.pitch_hi = hi;
    }

    cfg.enable_progression = !opts.no_progression;
    cfg.enable_interval = !opts.no_interval;
    cfg.enable_dynamics = !opts.no_dynamics;
    cfg.enable_pauses = !opts.no_pauses;
    cfg.notes_per_unit_scale = opts.notes_per_unit;
    cfg.interval_max = opts.interval_max;
    if (opts.snap == "major") cfg.scale_snap = transform::ScaleSnap::Major;
    else if (opts.snap == "minor") cfg.scale_snap = transform::ScaleSnap::Minor;
    else cfg.scale_snap = transform::ScaleSnap::Chromatic;
    return cfg;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw std::runtime_error("cannot write " + path.string());
}

void write_file(const fs::path& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("cannot write " + path.string());
}

struct SonifyJob {
    fs::path input;
    fs::path midi_out;
    bool emit_svg = false;
    bool emit_dec = false;
};

int run_sonify_job(const SonifyJob& job, const transform::MappingConfig& cfg, int level,
                   int program, std::ostream& err) {
    try {
        const filter::ImageRaster img = filter::load_image(job.input.string());
        const kets::VisualDecomposition d = filter::decompose(img, {level});
        const transform::SoundDecomposition s = transform::apply(d, cfg);
        score::MidiDocument doc;
        doc.instrument_program = program;
        write_file(job.midi_out, score::to_midi(s, doc));
        if (job.emit_svg) {
            fs::path p = job.midi_out;
            write_file(p.replace_extension(".svg"), score::to_svg(d, img.width, img.height));
        }
        if (job.emit_dec) {
            fs::path p = job.midi_out;
            write_file(p.replace_extension(".dec"), score::serialize(d, img.width, img.height));
        }
        return kExitOk;
    } catch (const filter::DecodeError& e) {
        err << e.what() << "\n";
        return kExitDecode;
    } catch (const filter::NoObjectsError& e) {
        err << e.what() << "\n";
        return kExitNoObjects;
    }
}

int run_sonify(const std::vector<std::string>& inputs, const std::string& output,
               const MappingOpts& opts, bool emit_svg, bool emit_dec, std::ostream& err) {
    const transform::MappingConfig cfg = build_config(opts);

    std::vector<SonifyJob> jobs;
    if (inputs.size() == 1) {
        fs::path out = output.empty() ? fs::path(inputs[0]).replace_extension(".mid")
                                      : fs::path(output);
        jobs.push_back({inputs[0], out, emit_svg, emit_dec});
    } else {
        // Batch mode: the output names one directory, one .mid per input.
        const fs::path dir = output.empty() ? fs::path(".") : fs::path(output);
        std::error_code ec;
        fs::create_directories(dir, ec);
        for (const auto& input : inputs) {
            const fs::path out = dir / fs::path(input).filename().replace_extension(".mid");
            jobs.push_back({input, out, emit_svg, emit_dec});
        }
    }

    // Each image's pipeline is independent; batches run concurrently with
    // per-image error reporting collected afterwards.
    std::vector<std::future<std::pair<int, std::string>>> futures;
    futures.reserve(jobs.size());
    for (const auto& job : jobs) {
        futures.push_back(std::async(std::launch::async, [&job, &cfg, &opts] {
            std::ostringstream local_err;
            const int code =
                run_sonify_job(job, cfg, opts.level, opts.program, local_err);
            return std::make_pair(code, local_err.str());
        }));
    }
    int status = kExitOk;
    for (auto& f : futures) {
        const auto [code, message] = f.get();
        err << message;
        status = std::max(status, code);
    }
    return status;
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Turns line drawings into MIDI scores by decomposing them into "
                 "dots, segments and arcs and mapping each stroke to a musical figure."};
    app.set_version_flag("--version", "shapetone 1.0.0");
    app.require_subcommand(1);
    // Config keys live in a section named after the subcommand, e.g.
    // [sonify] beats=8. Flags always win over the file.
    app.set_config("--config", "", "Read defaults from an INI file");

    // sonify
    auto* sonify = app.add_subcommand("sonify", "Image to Standard MIDI File");
    sonify->fallthrough(true);
    std::vector<std::string> sonify_inputs;
    std::string sonify_output;
    bool sonify_svg = false, sonify_dec = false;
    MappingOpts sonify_opts;
    sonify->add_option("inputs", sonify_inputs, "Input image(s), PNG or PGM")
        ->required()
        ->check(CLI::ExistingFile);
    sonify->add_option("-o,--output", sonify_output,
                       "Output .mid file (directory in batch mode)");
    sonify->add_flag("--svg", sonify_svg, "Also emit an SVG of the decomposition");
    sonify->add_flag("--dec", sonify_dec, "Also emit the decomposition document");
    add_mapping_options(sonify, sonify_opts);

    // decompose
    auto* decompose = app.add_subcommand("decompose", "Image to decomposition document");
    decompose->fallthrough(true);
    std::string dec_input, dec_output;
    bool dec_svg = false;
    int dec_level = 2;
    decompose->add_option("input", dec_input, "Input image")->required()->check(CLI::ExistingFile);
    decompose->add_option("-o,--output", dec_output, "Output document path (default: stem.dec)");
    decompose->add_flag("--svg", dec_svg, "Also emit an SVG next to the document");
    decompose->add_option("--level", dec_level, "Discretization level")->check(CLI::Range(1, 64));

    // distance
    auto* distance = app.add_subcommand("distance",
                                        "Cosine similarity of two decomposition documents");
    distance->fallthrough(true);
    std::string dist_a, dist_b;
    distance->add_option("first", dist_a)->required()->check(CLI::ExistingFile);
    distance->add_option("second", dist_b)->required()->check(CLI::ExistingFile);

    // analyze
    auto* analyze = app.add_subcommand("analyze",
                                       "Minimal term count and reconstruction error curve");
    analyze->fallthrough(true);
    std::string ana_input, ana_curve;
    double ana_threshold = 0.5;
    analyze->add_option("input", ana_input)->required()->check(CLI::ExistingFile);
    analyze->add_option("--threshold", ana_threshold, "Recognizability threshold on 1 - IoU")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    analyze->add_option("--curve", ana_curve, "Write the error curve CSV here (default: stdout)");

    // sequence
    auto* sequence = app.add_subcommand("sequence", "Snapshot sequence to one MIDI file");
    sequence->fallthrough(true);
    std::vector<std::string> seq_inputs;
    std::string seq_output;
    MappingOpts seq_opts;
    sequence->add_option("inputs", seq_inputs, "Ordered snapshot images")
        ->required()
        ->check(CLI::ExistingFile);
    sequence->add_option("-o,--output", seq_output, "Output .mid file");
    add_mapping_options(sequence, seq_opts);

    std::reverse(args.begin(), args.end());
    try {
        app.parse(std::move(args));
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion& e) {
        out << app.version() << "\n";
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (sonify->parsed())
            return run_sonify(sonify_inputs, sonify_output, sonify_opts, sonify_svg, sonify_dec,
                              err);

        if (decompose->parsed()) {
            const filter::ImageRaster img = filter::load_image(dec_input);
            const kets::VisualDecomposition d = filter::decompose(img, {dec_level});
            const fs::path out_path = dec_output.empty()
                                          ? fs::path(dec_input).replace_extension(".dec")
                                          : fs::path(dec_output);
            write_file(out_path, score::serialize(d, img.width, img.height));
            if (dec_svg) {
                fs::path p = out_path;
                write_file(p.replace_extension(".svg"), score::to_svg(d, img.width, img.height));
            }
            return kExitOk;
        }

        if (distance->parsed()) {
            auto read_doc = [](const std::string& path) {
                std::ifstream in(path, std::ios::binary);
                std::ostringstream ss;
                ss << in.rdbuf();
                return ss.str();
            };
            const auto a = score::deserialize_decomposition(read_doc(dist_a));
            const auto b = score::deserialize_decomposition(read_doc(dist_b));
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.6f\n",
                          kets::distance(a.decomposition, b.decomposition));
            out << buf;
            return kExitOk;
        }

        if (analyze->parsed()) {
            const filter::ImageRaster img = filter::load_image(ana_input);
            const filter::MinimalKetResult result =
                filter::minimal_ket_count(img, ana_threshold);
            out << "N* = " << result.n_star
                << (result.threshold_reached ? "" : " (threshold not reached)") << "\n";
            std::ostringstream csv;
            csv << "n_terms,error\n";
            for (const auto& [n, error] : result.curve) {
                char row[64];
                std::snprintf(row, sizeof(row), "%d,%.6f\n", n, error);
                csv << row;
            }
            if (ana_curve.empty()) out << csv.str();
            else write_file(ana_curve, csv.str());
            return kExitOk;
        }

        if (sequence->parsed()) {
            const transform::MappingConfig cfg = build_config(seq_opts);
            std::vector<kets::VisualDecomposition> snapshots;
            for (const auto& input : seq_inputs) {
                const filter::ImageRaster img = filter::load_image(input);
                snapshots.push_back(filter::decompose(img, {seq_opts.level}));
            }
            const transform::SoundDecomposition s = transform::apply_sequence(snapshots, cfg);
            score::MidiDocument doc;
            doc.instrument_program = seq_opts.program;
            const fs::path out_path = seq_output.empty()
                                          ? fs::path(seq_inputs[0]).replace_extension(".mid")
                                          : fs::path(seq_output);
            write_file(out_path, score::to_midi(s, doc));
            return kExitOk;
        }
    } catch (const CLI::ValidationError& e) {
        err << e.what() << "\n";
        return kExitUsage;
    } catch (const filter::DecodeError& e) {
        err << e.what() << "\n";
        return kExitDecode;
    } catch (const filter::NoObjectsError& e) {
        err << e.what() << "\n";
        return kExitNoObjects;
    } catch (const score::ParseError& e) {
        err << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace shapetone::cli
