#include "icesurf/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "icesurf/baselines.hpp"
#include "icesurf/dataio.hpp"
#include "icesurf/eval.hpp"
#include "icesurf/raster.hpp"
#include "icesurf/synth.hpp"
#include "icesurf/training.hpp"
#include "icesurf/trw.hpp"

namespace icesurf::cli {

namespace fs = std::filesystem;

namespace {

struct SynthArgs {
    std::string config;
    std::uint64_t seed = 0;
    std::string out;
};

struct TrainArgs {
    std::vector<std::string> data;
    std::vector<std::string> labels;
    std::string out;
    int template_length = kDefaultTemplateLength;
    double tau = kDefaultTau;
    bool constant_beta = false;
};

struct InferArgs {
    std::string data;
    std::string params;
    std::string solver = "trw";
    std::string extra;
    int iters = 0;
    double tolerance = 1e-6;
    bool naive = false;
    bool all_messages = false;
    std::string out;
};

struct EvalArgs {
    std::string pred;
    std::string gt;
    std::vector<int> ks{1, 5};
    std::string out;
};

struct PlotArgs {
    std::string data;
    std::string surface;
    std::string out;
    int scale = 4;
};

int do_synth(const SynthArgs& a, std::ostream& out) {
    SynthConfig cfg = io::read_synth_config(a.config);
    cfg.seed = a.seed;
    const auto result = generate(cfg);
    const fs::path dir = a.out;
    io::write_sequence(result.sequence, dir);
    io::write_surface(result.truth, dir / "truth.csv");
    io::write_params(generation_params(cfg), dir / "generation_params.txt");
    out << "wrote " << dir.string() << " (" << cfg.dims.l << " x " << cfg.dims.phi << " x " << cfg.dims.rho
        << ", seed " << cfg.seed << ")\n";
    return kSuccess;
}

int do_train(const TrainArgs& a, std::ostream& out) {
    if (a.data.size() != a.labels.size()) {
        throw InvalidArgument("--data and --labels must be given the same number of times");
    }
    std::vector<TopoSequence> sequences;
    std::vector<Surface> truths;
    for (std::size_t k = 0; k < a.data.size(); ++k) {
        sequences.push_back(io::read_sequence(a.data[k]));
        truths.push_back(io::read_surface(a.labels[k]));
    }
    std::vector<LabeledExample> labeled;
    for (std::size_t k = 0; k < sequences.size(); ++k) labeled.push_back({sequences[k], truths[k]});
    TrainingOptions options;
    options.template_length = a.template_length;
    options.tau = a.tau;
    options.per_column_beta = !a.constant_beta;
    const EnergyParams params = train(labeled, options);
    io::write_params(params, a.out);
    out << "alpha = " << params.alpha << ", sigma_hat = " << params.sigma_hat << "; wrote " << a.out << "\n";
    return kSuccess;
}

int do_infer(const InferArgs& a, std::ostream& out) {
    const TopoSequence seq = io::read_sequence(a.data);
    const EnergyParams params = io::read_params(a.params);
    const ExtraEvidence extra = a.extra.empty() ? ExtraEvidence{} : io::read_evidence(a.extra);
    const GridMrf mrf = build_mrf(seq, params, extra);
    const KernelKind kernel = a.naive ? KernelKind::kNaive : KernelKind::kFast;

    Surface surface;
    Cost energy = kInfinity;
    if (a.solver == "trw") {
        TrwConfig cfg;
        cfg.max_iterations = a.iters;
        cfg.tolerance = a.tolerance;
        cfg.kernel = kernel;
        cfg.decode = a.all_messages ? DecodeRule::kAllMessages : DecodeRule::kForwardMessages;
        TrwResult result = trw_infer(mrf, cfg);
        surface = std::move(result.surface);
        energy = result.energy;
        out << "iterations = " << result.iterations << ", lower bound = " << result.bound_trace.back() << "\n";
    } else {
        surface = solve_independent(mrf, a.solver == "dv" ? BetaMode::kDynamic : BetaMode::kFixed, kernel);
        energy = total_energy(surface, mrf);
        if (energy == kInfinity) out << "note: slices were solved independently; some labels differ by >= alpha across slices\n";
    }
    io::write_surface(surface, a.out);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", energy);
    out << "energy = " << buf << "; wrote " << a.out << "\n";
    return kSuccess;
}

int do_eval(const EvalArgs& a, std::ostream& out) {
    const Surface pred = io::read_surface(a.pred);
    const Surface gt = io::read_surface(a.gt);
    const MetricsReport report = evaluate(pred, gt, a.ks);
    const std::string table = format_table({{fs::path(a.pred).stem().string(), report}});
    io::write_file_atomic(a.out + ".txt", table);
    io::write_file_atomic(a.out + ".json", io::report_json(report));
    out << table;
    return kSuccess;
}

int do_plot(const PlotArgs& a, std::ostream& out) {
    const TopoSequence seq = io::read_sequence(a.data);
    const Surface surface = io::read_surface(a.surface);
    const auto written = export_plots(seq, surface, a.out, a.scale);
    out << "wrote " << written.size() << " images with prefix " << a.out << "\n";
    return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Ice-bottom surface reconstruction from radar topographic sequences"};
    app.require_subcommand(1);

    SynthArgs synth;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic sequence with ground truth");
    synth_cmd->add_option("--config", synth.config, "Synth config file (key = value)")->required();
    synth_cmd->add_option("--seed", synth.seed, "64-bit seed")->required();
    synth_cmd->add_option("--out", synth.out, "Output container directory")->required();

    TrainArgs trainer;
    auto* train_cmd = app.add_subcommand("train", "Learn template and smoothness parameters");
    train_cmd->add_option("--data", trainer.data, "Sequence container(s)")->required();
    train_cmd->add_option("--labels", trainer.labels, "Ground-truth surface CSV(s), one per --data")->required();
    train_cmd->add_option("--out", trainer.out, "Output params file")->required();
    train_cmd->add_option("--template-length", trainer.template_length, "Template length in pixels (odd)");
    train_cmd->add_option("--tau", trainer.tau, "Air margin threshold in rows");
    train_cmd->add_flag("--constant-beta", trainer.constant_beta, "Use beta = 1 for every column");

    InferArgs infer;
    auto* infer_cmd = app.add_subcommand("infer", "Reconstruct the surface");
    infer_cmd->add_option("--data", infer.data, "Sequence container")->required();
    infer_cmd->add_option("--params", infer.params, "Params file")->required();
    infer_cmd->add_option("--solver", infer.solver, "trw | viterbi | dv")
        ->check(CLI::IsMember({"trw", "viterbi", "dv"}));
    infer_cmd->add_option("--extra", infer.extra, "Extra evidence CSV (pins / ranges)");
    infer_cmd->add_option("--iters", infer.iters, "TRW iteration cap (default: phi)")->check(CLI::NonNegativeNumber);
    infer_cmd->add_option("--tolerance", infer.tolerance, "Relative bound-improvement stop threshold; 0 disables");
    infer_cmd->add_flag("--naive-messages", infer.naive, "Use the O(rho^2) message kernel");
    infer_cmd->add_flag("--all-messages", infer.all_messages, "Decode with messages from all four neighbours");
    infer_cmd->add_option("--out", infer.out, "Output surface CSV")->required();

    EvalArgs ev;
    std::string ks_text;
    auto* eval_cmd = app.add_subcommand("eval", "Compare a surface with ground truth");
    eval_cmd->add_option("--pred", ev.pred, "Predicted surface CSV")->required();
    eval_cmd->add_option("--gt", ev.gt, "Ground-truth surface CSV")->required();
    eval_cmd->add_option("--k", ks_text, "Comma-separated pixel tolerances (default 1,5)");
    eval_cmd->add_option("--out", ev.out, "Report prefix; writes <out>.txt and <out>.json")->required();

    PlotArgs plot;
    auto* plot_cmd = app.add_subcommand("export-plot", "Write slice overlays and a depth map (PPM)");
    plot_cmd->add_option("--data", plot.data, "Sequence container")->required();
    plot_cmd->add_option("--surface", plot.surface, "Surface CSV")->required();
    plot_cmd->add_option("--out", plot.out, "Output file prefix")->required();
    plot_cmd->add_option("--scale", plot.scale, "Horizontal pixel scale")->check(CLI::PositiveNumber);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kBadInput;
    }

    try {
        if (synth_cmd->parsed()) return do_synth(synth, out);
        if (train_cmd->parsed()) return do_train(trainer, out);
        if (infer_cmd->parsed()) return do_infer(infer, out);
        if (eval_cmd->parsed()) {
            if (!ks_text.empty()) {
                ev.ks.clear();
                std::stringstream ss(ks_text);
                std::string item;
                while (std::getline(ss, item, ',')) {
                    try {
                        std::size_t used = 0;
                        const int k = std::stoi(item, &used);
                        if (used != item.size() || k < 0) throw std::invalid_argument(item);
                        ev.ks.push_back(k);
                    } catch (const std::exception&) {
                        throw InvalidArgument("bad tolerance '" + item + "' in --k");
                    }
                }
            }
            return do_eval(ev, out);
        }
        if (plot_cmd->parsed()) return do_plot(plot, out);
    } catch (const InfeasibleError& e) {
        err << "infeasible: " << e.what();
        if (e.where()) err << " [first infeasible pixel: i=" << e.where()->i << " j=" << e.where()->j << "]";
        err << "\n";
        return kInfeasible;
    } catch (const IoError& e) {
        err << "I/O failure: " << e.what() << "\n";
        return kIoFailure;
    } catch (const Error& e) {
        err << "bad input: " << e.what() << "\n";
        return kBadInput;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "I/O failure: " << e.what() << "\n";
        return kIoFailure;
    }
    return kBadInput;
}

int run(const std::vector<std::string>& args) { return run(args, std::cout, std::cerr); }

}  // namespace icesurf::cli
