#include "beamfamily/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <json.hpp>
#include <ostream>
#include <sstream>
#include <thread>

#include "beamfamily/autocorr.hpp"
#include "beamfamily/design.hpp"
#include "beamfamily/enumerate.hpp"
#include "beamfamily/errors.hpp"
#include "beamfamily/io.hpp"
#include "beamfamily/select.hpp"
#include "beamfamily/version.hpp"

namespace beamfamily::cli {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

struct GlobalOptions {
    unsigned threads = 0;
    std::uint64_t seed = 0;
    double tol = kDefaultEquivalenceTol;
};

struct DesignArgs {
    std::string method;
    std::string spec;
    std::string out;
    int restarts = 8;
};

struct EnumerateArgs {
    std::string in;
    std::string out;
    std::uint64_t sample = 0;
};

struct PatternArgs {
    std::vector<std::string> in;
    std::string out;
    double start = -90.0;
    double stop = 90.0;
    double step = 0.25;
    std::optional<std::string> angles;
};

struct VerifyArgs {
    std::string first;
    std::string second;
};

struct SelectArgs {
    std::string family;
    std::size_t k = 4;
    double power = 0.0;
    std::string metric = "maxdev";
    bool exhaustive = false;
    std::uint64_t budget = kDefaultSelectionBudget;
    std::string out;
    std::string profile;
};

/// Thrown by command bodies to exit with a specific code.
struct CommandFailure {
    int code;
    std::string message;
};

unsigned resolve_threads(unsigned requested) {
    return requested == 0 ? std::max(1U, std::thread::hardware_concurrency()) : requested;
}

void write_manifest(const std::string& primary_output, const std::string& command,
                    const std::vector<std::string>& argv, json parameters,
                    const std::vector<std::string>& inputs, const std::vector<std::string>& outputs,
                    Clock::time_point started) {
    const double seconds = std::chrono::duration<double>(Clock::now() - started).count();
    json manifest{{"command", command},     {"argv", argv},       {"parameters", std::move(parameters)},
                  {"inputs", inputs},       {"outputs", outputs}, {"version", kVersion},
                  {"wall_time_s", seconds}};
    io::write_text(primary_output + ".manifest.json", manifest.dump(2) + "\n");
}

std::vector<double> parse_angle_list(const std::string& text) {
    std::vector<double> angles;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.find_first_not_of(" \t") == std::string::npos) continue;
        std::size_t used = 0;
        double value = 0.0;
        try {
            value = std::stod(item, &used);
        } catch (const std::exception&) {
            throw DomainError("bad angle '" + item + "'");
        }
        if (item.find_first_not_of(" \t", used) != std::string::npos) {
            throw DomainError("bad angle '" + item + "'");
        }
        angles.push_back(value);
    }
    if (angles.empty()) throw DomainError("empty angle grid");
    for (std::size_t i = 0; i < angles.size(); ++i) {
        if (!(angles[i] >= -90.0 && angles[i] <= 90.0)) throw DomainError("angle outside [-90, 90]");
        if (i && !(angles[i] > angles[i - 1])) throw DomainError("angles must be strictly increasing");
    }
    return angles;
}

UniformityMetric parse_metric(const std::string& name) {
    if (name == "maxdev") return UniformityMetric::MaxDeviation;
    if (name == "var") return UniformityMetric::Variance;
    throw CommandFailure{kBadInput, "unknown metric '" + name + "' (expected maxdev or var)"};
}

int cmd_design(const DesignArgs& a, const GlobalOptions& g, const std::vector<std::string>& argv,
               std::ostream& out) {
    const auto started = Clock::now();
    DesignSpec spec = [&] {
        try {
            return io::read_design_spec(a.spec);
        } catch (const ParseError& e) {
            throw CommandFailure{kBadInput, e.what()};
        }
    }();
    json params{{"method", a.method}, {"spec", io::design_spec_json(spec)}, {"seed", g.seed}};
    try {
        if (a.method == "spheroidal") {
            const BeamVector w = spheroidal_mother(spec);
            io::write_beam_vector(a.out, w);
            out << "norm_squared " << io::format_number(w.norm_squared()) << "\n";
        } else {
            ConvexOptions opts;
            opts.seed = g.seed;
            opts.restarts = a.restarts;
            params["restarts"] = a.restarts;
            const ConvexDesign d = convex_mother(spec, opts);
            io::write_beam_vector(a.out, d.weights);
            out << "objective " << io::format_number(d.objective) << "\n"
                << "max_sidelobe_db " << io::format_number(20.0 * std::log10(d.max_sidelobe)) << "\n";
        }
    } catch (const ConvergenceError& e) {
        throw CommandFailure{kSolverFailure, e.what()};
    } catch (const AmbiguousDesign& e) {
        throw CommandFailure{kSolverFailure, e.what()};
    }
    write_manifest(a.out, "design", argv, params, {a.spec}, {a.out}, started);
    return kOk;
}

int cmd_enumerate(const EnumerateArgs& a, const GlobalOptions& g,
                  const std::vector<std::string>& argv, std::ostream& out) {
    const auto started = Clock::now();
    const BeamVector w = io::read_beam_vector(a.in);
    EnumerationOptions opts;
    opts.threads = resolve_threads(g.threads);
    opts.seed = g.seed;
    if (a.sample > 0) opts.sample_masks = a.sample;
    Family family = [&] {
        try {
            return enumerate_family(w, opts);
        } catch (const DegenerateEndpoints& e) {
            throw CommandFailure{kDegenerateEndpoints, e.what()};
        }
    }();
    io::write_family(a.out, family);
    out << family.distinct_count << "\n";
    write_manifest(a.out, "enumerate", argv,
                   {{"sample", a.sample}, {"seed", g.seed}, {"distinct_count", family.distinct_count}},
                   {a.in}, {a.out}, started);
    return kOk;
}

int cmd_pattern(const PatternArgs& a, const std::vector<std::string>& argv) {
    const auto started = Clock::now();
    const std::vector<double> grid =
        a.angles ? parse_angle_list(*a.angles) : angle_grid(a.start, a.stop, a.step);
    std::vector<PatternGrid> patterns;
    for (const auto& path : a.in) patterns.push_back(beampattern(io::read_beam_vector(path), grid));
    std::ostringstream csv;
    io::write_pattern_csv(csv, patterns);
    io::write_text(a.out, csv.str());
    json params{{"points", grid.size()}};
    if (a.angles) {
        params["angles"] = *a.angles;
    } else {
        params["start"] = a.start;
        params["stop"] = a.stop;
        params["step"] = a.step;
    }
    write_manifest(a.out, "pattern", argv, params, a.in, {a.out}, started);
    return kOk;
}

int cmd_verify(const VerifyArgs& a, const GlobalOptions& g, std::ostream& out) {
    const BeamVector w = io::read_beam_vector(a.first);
    const BeamVector v = io::read_beam_vector(a.second);
    if (w.geometry() != v.geometry()) {
        throw CommandFailure{kBadInput, "beam vectors are defined on different arrays"};
    }
    const double dev = max_lag_deviation(w, v);
    const bool same = same_beampattern(w, v, g.tol);
    out << "max_lag_deviation " << io::format_number(dev) << "\n"
        << "relative " << io::format_number(dev / w.norm_squared()) << "\n"
        << (same ? "same beampattern" : "different beampattern") << "\n";
    return same ? kOk : kVerifyMismatch;
}

int cmd_select(const SelectArgs& a, const std::vector<std::string>& argv, std::ostream& out) {
    const auto started = Clock::now();
    const Family family = io::read_family(a.family);
    if (a.k < 1 || a.k > family.members.size()) {
        throw CommandFailure{kBadInput, "k = " + std::to_string(a.k) + " outside [1, " +
                                            std::to_string(family.members.size()) + "]"};
    }
    SelectionOptions opts;
    opts.metric = parse_metric(a.metric);
    opts.budget = a.budget;
    opts.force_exhaustive = a.exhaustive;
    const Selection sel = select_subset(family, a.k, a.power, opts);
    const double before =
        power_profile(std::span<const BeamVector>(&family.mother, 1), a.power, opts.metric).uniformity;

    io::write_text(a.out, io::selection_json(sel, family, a.power, opts.metric, before));
    std::vector<std::string> outputs{a.out};
    if (!a.profile.empty()) {
        std::ostringstream csv;
        io::write_profile_csv(csv, sel.profile);
        io::write_text(a.profile, csv.str());
        outputs.push_back(a.profile);
    }
    out << "uniformity_before " << io::format_number(before) << "\n"
        << "uniformity_after " << io::format_number(sel.profile.uniformity) << "\n";
    write_manifest(a.out, "select", argv,
                   {{"k", a.k},
                    {"power", a.power},
                    {"metric", a.metric},
                    {"exhaustive", a.exhaustive},
                    {"budget", a.budget}},
                   {a.family}, outputs, started);
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Enumerate, design and select beamforming vectors that share a beampattern",
                 "beamfam"};
    app.require_subcommand(1);
    GlobalOptions g;
    app.add_option("--threads", g.threads, "worker threads (0 = available parallelism)");
    app.add_option("--seed", g.seed, "seed for solver restarts and mask sampling");
    app.add_option("--tol", g.tol, "relative tolerance for beampattern equivalence")
        ->check(CLI::PositiveNumber);

    DesignArgs design;
    auto* design_cmd = app.add_subcommand("design", "design a mother beam vector for a sector");
    design_cmd->add_option("--method", design.method)
        ->required()
        ->check(CLI::IsMember({"spheroidal", "cvx"}));
    design_cmd->add_option("--spec", design.spec, "design spec document")->required();
    design_cmd->add_option("--out", design.out, "output beam-vector file")->required();
    design_cmd->add_option("--restarts", design.restarts, "convex solver restarts")
        ->check(CLI::PositiveNumber);

    EnumerateArgs enumerate;
    auto* enumerate_cmd =
        app.add_subcommand("enumerate", "list every beam vector with the same beampattern");
    enumerate_cmd->add_option("--in", enumerate.in, "mother beam-vector file")->required();
    enumerate_cmd->add_option("--out", enumerate.out, "output family file")->required();
    enumerate_cmd->add_option("--sample", enumerate.sample,
                              "evaluate this many random flip masks instead of all");

    PatternArgs pattern;
    auto* pattern_cmd = app.add_subcommand("pattern", "write beampatterns as CSV");
    pattern_cmd->add_option("--in", pattern.in, "beam-vector file(s)")->required();
    pattern_cmd->add_option("--out", pattern.out, "output CSV")->required();
    pattern_cmd->add_option("--start", pattern.start, "first angle (deg)");
    pattern_cmd->add_option("--stop", pattern.stop, "last angle (deg)");
    pattern_cmd->add_option("--step", pattern.step, "angle step (deg)");
    pattern_cmd->add_option("--angles", pattern.angles, "comma-separated angles (deg)");

    VerifyArgs verify;
    auto* verify_cmd = app.add_subcommand("verify", "check whether two beam vectors share a beampattern");
    verify_cmd->add_option("first", verify.first)->required();
    verify_cmd->add_option("second", verify.second)->required();

    SelectArgs select;
    auto* select_cmd =
        app.add_subcommand("select", "choose k family members with the flattest element power");
    select_cmd->add_option("--family", select.family, "family file")->required();
    select_cmd->add_option("-k", select.k, "number of vectors");
    select_cmd->add_option("--power", select.power, "total transmit power")->required();
    select_cmd->add_option("--metric", select.metric, "maxdev or var");
    select_cmd->add_flag("--exhaustive", select.exhaustive, "search all subsets");
    select_cmd->add_option("--budget", select.budget, "subset evaluations before falling back to the heuristic");
    select_cmd->add_option("--out", select.out, "output selection document")->required();
    select_cmd->add_option("--profile", select.profile, "output power-profile CSV");

    std::string manifest_path;
    auto* replay_cmd = app.add_subcommand("replay", "re-run the command recorded in a manifest");
    replay_cmd->add_option("manifest", manifest_path)->required();

    for (auto* sub : {design_cmd, enumerate_cmd, pattern_cmd, verify_cmd, select_cmd}) {
        sub->fallthrough();
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kBadInput;
    }

    try {
        if (*design_cmd) return cmd_design(design, g, args, out);
        if (*enumerate_cmd) return cmd_enumerate(enumerate, g, args, out);
        if (*pattern_cmd) return cmd_pattern(pattern, args);
        if (*verify_cmd) return cmd_verify(verify, g, out);
        if (*select_cmd) return cmd_select(select, args, out);
        const json manifest = json::parse(io::read_text(manifest_path));
        return run(manifest.at("argv").get<std::vector<std::string>>(), out, err);
    } catch (const CommandFailure& f) {
        err << "error: " << f.message << "\n";
        return f.code;
    } catch (const DegenerateEndpoints& e) {
        err << "error: " << e.what() << "\n";
        return kDegenerateEndpoints;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kBadInput;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kBadInput;
    } catch (const json::exception& e) {
        err << "error: bad manifest: " << e.what() << "\n";
        return kBadInput;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kSolverFailure;
    }
}

}  // namespace beamfamily::cli
