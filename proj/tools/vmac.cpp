// vmac: admission-control experiments on video frame-size traces.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "vmac/cli.hpp"

namespace {

using namespace vmac;
using namespace vmac::cli;

void add_experiment_flags(CLI::App* cmd, ExperimentOptions& o, std::optional<std::uint64_t>& seed,
                          std::optional<std::string>& out) {
    cmd->add_option("--traces-dir", o.traces_dir, "Directory of *.trace files")->required();
    cmd->add_option("--fps", o.fps_override, "Frame rate for traces without a '# fps=' line");
    cmd->add_option("--window", o.window, "Measurement window in frame slots")->capture_default_str();
    cmd->add_option("--seed", seed, "Master seed (default: $VMAC_SEED, else 1)");
    cmd->add_option("--threads", o.threads, "Worker threads, 0 = all cores")->capture_default_str();
    cmd->add_option("--out", out, "Output CSV path (default: stdout)");
}

void add_repetition_flags(CLI::App* cmd, ExperimentOptions& o) {
    cmd->add_option("--runs", o.runs, "Runs per repetition")->capture_default_str();
    cmd->add_option("--reps", o.reps, "Repetitions")->capture_default_str();
    cmd->add_option("--confidence", o.confidence, "Confidence level of the interval")->capture_default_str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Average-rate admission control experiments for VBR video flows"};
    app.require_subcommand(1);

    ExperimentOptions xo;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::string flows_spec = "5";
    std::string windows_spec = "5";
    std::string classes_spec = "news,sports";

    auto* ingest = app.add_subcommand("ingest", "Parse a trace file and print a rate summary");
    std::string ingest_path;
    std::optional<double> ingest_fps;
    ingest->add_option("path", ingest_path, "Trace file")->required();
    ingest->add_option("--fps", ingest_fps, "Frame rate when the file has no '# fps=' line");

    auto* sweep = app.add_subcommand("sweep-flows", "Probability that average < instantaneous, per flow count");
    add_experiment_flags(sweep, xo, seed, out);
    add_repetition_flags(sweep, xo);
    sweep->add_option("--flows", flows_spec, "Flow counts: lo:hi:step, a,b,c or n")->required();

    auto* timeseries = app.add_subcommand("timeseries", "Instantaneous and windowed-average aggregate per slot");
    add_experiment_flags(timeseries, xo, seed, out);
    timeseries->add_option("--flows", flows_spec, "Number of flows")->required();
    timeseries->add_option("--duration", xo.duration, "Simulated slots")->capture_default_str();

    auto* burst = app.add_subcommand("burstiness", "Peak-to-mean ratio and CoV of both rate series");
    add_experiment_flags(burst, xo, seed, out);
    burst->add_option("--flows", flows_spec, "Flow counts")->required();
    burst->add_option("--duration", xo.duration, "Simulated slots per series")->capture_default_str();

    auto* wsweep = app.add_subcommand("sweep-window", "Probability per measurement-window length");
    add_experiment_flags(wsweep, xo, seed, out);
    add_repetition_flags(wsweep, xo);
    wsweep->add_option("--flows", flows_spec, "Number of flows")->required();
    wsweep->add_option("--windows", windows_spec, "Window lengths: lo:hi:step, a,b,c or n")->required();

    auto* content = app.add_subcommand("content", "Probability per content class");
    add_experiment_flags(content, xo, seed, out);
    add_repetition_flags(content, xo);
    content->add_option("--flows", flows_spec, "Flow counts")->required();
    content->add_option("--classes", classes_spec, "Content classes, comma separated")->capture_default_str();

    auto* hoeff = app.add_subcommand("hoeffding", "Evaluate the Hoeffding exceedance bound");
    std::size_t hn = 1;
    double heps = 0.0;
    std::string hwidths;
    hoeff->add_option("--n", hn, "Number of flows")->required();
    hoeff->add_option("--epsilon", heps, "Per-flow deviation (Mbps)")->required();
    hoeff->add_option("--widths", hwidths, "Per-flow rate range widths (Mbps), comma separated")->required();

    auto* admit = app.add_subcommand("admit", "Admission decision for one seeded scenario");
    AdmitOptions ao;
    std::string policy = "avg";
    std::optional<std::string> quality;
    admit->add_option("--policy", policy, "avg or inst")->check(CLI::IsMember({"avg", "inst"}))->capture_default_str();
    admit->add_option("--capacity-mbps", ao.capacity_mbps, "Link capacity")->required();
    auto* qopt = admit->add_option("--class", quality, "fullhd, hdready, sd or hdweb")
                     ->check(CLI::IsMember({"fullhd", "hdready", "sd", "hdweb"}));
    admit->add_option("--rate-mbps", ao.rate_mbps, "Explicit requested rate")->excludes(qopt);
    admit->add_option("--traces-dir", ao.traces_dir, "Directory of *.trace files")->required();
    admit->add_option("--fps", ao.fps_override, "Frame rate for traces without a '# fps=' line");
    admit->add_option("--flows", ao.flows, "Active flows")->capture_default_str();
    admit->add_option("--window", ao.window, "Measurement window in frame slots")->capture_default_str();
    admit->add_option("--seed", seed, "Scenario seed (default: $VMAC_SEED, else 1)");
    admit->add_flag("--aligned", ao.aligned, "Start every flow at frame 0");
    admit->add_option("--decision-slot", ao.decision_slot, "Decision slot (default: random)");
    admit->add_option("--target-utilization", ao.target_utilization, "Usable fraction of capacity")
        ->capture_default_str();

    auto* synth = app.add_subcommand("synth", "Write a synthetic trace");
    SynthOptions so;
    synth->add_option("--profile", so.profile, "sports, news, cbr or bounded")
        ->check(CLI::IsMember({"sports", "news", "cbr", "bounded"}))
        ->capture_default_str();
    synth->add_option("--length", so.length, "Frames")->capture_default_str();
    synth->add_option("--fps", so.fps, "Frame rate")->capture_default_str();
    synth->add_option("--mean-mbps", so.mean_mbps, "Working rate (sports, news, cbr)")->capture_default_str();
    synth->add_option("--min-mbps", so.min_mbps, "Lower rate bound (bounded)")->capture_default_str();
    synth->add_option("--max-mbps", so.max_mbps, "Upper rate bound (bounded)")->capture_default_str();
    synth->add_option("--id", so.id, "Trace label")->capture_default_str();
    synth->add_option("--seed", seed, "Seed (default: $VMAC_SEED, else 1)");
    synth->add_option("--out", out, "Output path (default: stdout)");

    auto* synth_lib = app.add_subcommand("synth-library", "Regenerate the bundled trace sets");
    std::string lib_root = "data/traces";
    synth_lib->add_option("--out-dir", lib_root, "Root directory")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }

    try {
        xo.seed = seed;
        if (out) xo.out_path = *out;
        if (*ingest) return cmd_ingest(ingest_path, ingest_fps, std::cout);
        if (*sweep) return cmd_sweep_flows(xo, parse_count_list(flows_spec), std::cout);
        if (*timeseries) {
            const auto n = parse_count_list(flows_spec);
            if (n.size() != 1) throw Error(Errc::InvalidArgument, "timeseries takes a single --flows value");
            return cmd_timeseries(xo, n.front(), std::cout);
        }
        if (*burst) return cmd_burstiness(xo, parse_count_list(flows_spec), std::cout);
        if (*wsweep) {
            const auto n = parse_count_list(flows_spec);
            if (n.size() != 1) throw Error(Errc::InvalidArgument, "sweep-window takes a single --flows value");
            return cmd_sweep_window(xo, n.front(), parse_count_list(windows_spec), std::cout);
        }
        if (*content) return cmd_content(xo, parse_class_list(classes_spec), parse_count_list(flows_spec), std::cout);
        if (*hoeff) return cmd_hoeffding(hn, heps, parse_real_list(hwidths), std::cout);
        if (*admit) {
            ao.policy = policy == "inst" ? Policy::Instantaneous : Policy::Average;
            if (quality) ao.quality = parse_quality_class(*quality);
            ao.seed = seed;
            return cmd_admit(ao, std::cout);
        }
        if (*synth) {
            so.seed = seed;
            std::optional<std::filesystem::path> p;
            if (out) p = *out;
            return cmd_synth(so, p, std::cout);
        }
        if (*synth_lib) return cmd_synth_library(lib_root, std::cout);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        // admit reserves 1 for Reject and reports every failure as 2.
        return *admit ? kUsage : exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return *admit ? kUsage : kData;
    }
    return kUsage;
}
