// mirrornet command-line front end: gen-corpus -> train -> encode ->
// cluster -> eval, plus reconstruct for visual inspection. Every command
// is deterministic given its flags and --seed; outputs are written via
// write-then-rename so a failed run never leaves partial files.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "mirrornet/clustering.hpp"
#include "mirrornet/corpus.hpp"
#include "mirrornet/errors.hpp"
#include "mirrornet/evaluation.hpp"
#include "mirrornet/image.hpp"
#include "mirrornet/io_util.hpp"
#include "mirrornet/model_io.hpp"
#include "mirrornet/network.hpp"
#include "mirrornet/preprocess.hpp"
#include "mirrornet/train.hpp"

namespace {

using namespace mirrornet;

void log_resolved_config(const CLI::App& cmd) {
    std::istringstream ss(cmd.config_to_str(true, false));
    std::string line;
    while (std::getline(ss, line)) {
        if (!line.empty()) std::cout << "config [" << cmd.get_name() << "] " << line << '\n';
    }
}

void add_common(CLI::App* cmd) {
    cmd->set_config("--config", "", "Config file with `key = value` lines (# comments)");
    cmd->allow_config_extras(CLI::config_extras_mode::error);
}

struct GenCorpusArgs {
    CorpusSpec spec;
};

void setup_gen_corpus(CLI::App& app, GenCorpusArgs& args) {
    CLI::App* cmd = app.add_subcommand("gen-corpus", "Generate a synthetic 26x26 PGM corpus");
    add_common(cmd);
    cmd->add_option("--out", args.spec.output_dir, "Output directory")->required();
    cmd->add_option("--classes", args.spec.n_classes, "Number of pattern classes")
        ->capture_default_str();
    cmd->add_option("--per-class-train", args.spec.per_class_train, "Training images per class")
        ->capture_default_str();
    cmd->add_option("--per-class-test", args.spec.per_class_test, "Test images per class")
        ->capture_default_str();
    cmd->add_option("--noise", args.spec.noise_level, "Gaussian pixel noise (gray levels)")
        ->capture_default_str();
    cmd->add_option("--translation-jitter", args.spec.translation_jitter_px,
                    "Max per-axis translation (px)")
        ->capture_default_str();
    cmd->add_option("--scale-jitter", args.spec.scale_jitter, "Max relative scale jitter")
        ->capture_default_str();
    cmd->add_option("--seed", args.spec.rng_seed, "RNG seed")->capture_default_str();
    cmd->callback([cmd, &args] {
        log_resolved_config(*cmd);
        const CorpusOutput out = generate_corpus(args.spec);
        std::cout << "train_manifest=" << out.train_manifest.string() << '\n'
                  << "test_manifest=" << out.test_manifest.string() << '\n'
                  << "n_train=" << out.n_train << '\n'
                  << "n_test=" << out.n_test << '\n';
    });
}

struct TrainArgs {
    std::string manifest;
    std::string out;
    std::string shape = NetworkShape::default_shape().to_string();
    TrainConfig config;
    std::size_t log_every = 25;
};

void setup_train(CLI::App& app, TrainArgs& args) {
    CLI::App* cmd = app.add_subcommand("train", "Train a mirroring network on a manifest");
    add_common(cmd);
    cmd->add_option("--manifest", args.manifest, "Dataset manifest (labels ignored)")
        ->required();
    cmd->add_option("--out", args.out, "Model output path")->required();
    cmd->add_option("--shape", args.shape, "Layer sizes, e.g. 676,30,20,676")
        ->capture_default_str();
    cmd->add_option("--seed", args.config.rng_seed, "RNG seed (init + shuffling)")
        ->capture_default_str();
    cmd->add_option("--lr", args.config.learning_rate, "Learning rate")->capture_default_str();
    cmd->add_option("--init-scale", args.config.init_scale, "Uniform init half-width")
        ->capture_default_str();
    cmd->add_option("--mirror-threshold", args.config.mirror_threshold,
                    "Per-sample RMS threshold for counting a sample as mirrored")
        ->capture_default_str();
    cmd->add_option("--success-fraction", args.config.success_fraction,
                    "Mirrored fraction at which training stops")
        ->capture_default_str();
    cmd->add_option("--max-epochs", args.config.max_epochs, "Epoch limit")
        ->capture_default_str();
    cmd->add_option("--log-every", args.log_every, "Progress log period in epochs (0 = off)")
        ->capture_default_str();
    cmd->callback([cmd, &args] {
        log_resolved_config(*cmd);
        const NetworkShape shape = NetworkShape::parse(args.shape);
        const Dataset dataset = load_dataset(args.manifest);
        if (dataset.samples.empty()) throw EmptyDataset("manifest lists no images");
        const std::vector<std::vector<double>> inputs = dataset.values();
        Network net = init_network(shape, args.config.init_scale, args.config.rng_seed);
        EpochCallback logger;
        if (args.log_every > 0) {
            const std::size_t every = args.log_every;
            logger = [every](std::size_t epoch, double mse, double fraction) {
                if (epoch % every == 0) {
                    std::cerr << "epoch " << epoch << " mse " << mse << " mirrored "
                              << fraction << '\n';
                }
            };
        }
        auto [trained, report] = train(std::move(net), inputs, args.config, logger);
        save_model(trained, args.out);
        std::cout << "epochs_run=" << report.epochs_run << '\n'
                  << "converged=" << (report.converged ? "true" : "false") << '\n'
                  << "final_mirrored_fraction=" << format_double(report.final_mirrored_fraction)
                  << '\n';
        if (!report.per_epoch_mse.empty()) {
            std::cout << "final_mse=" << format_double(report.per_epoch_mse.back()) << '\n';
        }
        std::cout << "model=" << args.out << '\n';
    });
}

struct EncodeArgs {
    std::string model;
    std::string manifest;
    std::string out;
};

void setup_encode(CLI::App& app, EncodeArgs& args) {
    CLI::App* cmd =
        app.add_subcommand("encode", "Write bottleneck codes for every manifest image");
    add_common(cmd);
    cmd->add_option("--model", args.model, "Trained model file")->required();
    cmd->add_option("--manifest", args.manifest, "Dataset manifest")->required();
    cmd->add_option("--out", args.out, "Codes output file")->required();
    cmd->callback([cmd, &args] {
        log_resolved_config(*cmd);
        const Network net = load_model(args.model);
        const Dataset dataset = load_dataset(args.manifest);
        if (dataset.samples.empty()) throw EmptyDataset("manifest lists no images");
        std::vector<Code> codes;
        codes.reserve(dataset.samples.size());
        for (const Sample& s : dataset.samples) codes.push_back(encode(net, s.values));
        write_codes(args.out, codes);
        std::cout << "codes=" << args.out << '\n' << "n=" << codes.size() << '\n'
                  << "dim=" << codes.front().size() << '\n';
    });
}

struct ClusterArgs {
    std::string codes;
    std::string out;
    std::string manifest;     // optional source ids
    std::string assign_to;    // optional frozen centroids
    std::string centroids_out;
    ClusterConfig config;
};

void setup_cluster(CLI::App& app, ClusterArgs& args) {
    CLI::App* cmd = app.add_subcommand(
        "cluster", "Cluster codes with Forgy's algorithm (or assign to frozen centroids)");
    add_common(cmd);
    cmd->add_option("--codes", args.codes, "Codes file")->required();
    cmd->add_option("--out", args.out, "Assignments output file")->required();
    cmd->add_option("--k", args.config.k, "Number of clusters")->capture_default_str();
    cmd->add_option("--min-seed-distance", args.config.min_seed_distance,
                    "Minimum pairwise distance between initial seeds")
        ->capture_default_str();
    cmd->add_option("--max-iterations", args.config.max_iterations, "Iteration limit")
        ->capture_default_str();
    cmd->add_option("--max-seed-attempts", args.config.max_seed_attempts,
                    "Random draws per seed before the exhaustive scan")
        ->capture_default_str();
    cmd->add_option("--seed", args.config.rng_seed, "RNG seed for seed selection")
        ->capture_default_str();
    cmd->add_option("--manifest", args.manifest,
                    "Manifest providing source ids (default: line index)");
    cmd->add_option("--assign-to", args.assign_to,
                    "Centroids file: assign codes to these frozen centroids instead of "
                    "running Forgy");
    cmd->add_option("--centroids-out", args.centroids_out, "Write fitted centroids here");
    cmd->callback([cmd, &args] {
        log_resolved_config(*cmd);
        const std::vector<Code> codes = read_codes(args.codes);
        if (codes.empty()) throw EmptyDataset("codes file is empty");

        std::vector<std::string> ids;
        ids.reserve(codes.size());
        if (!args.manifest.empty()) {
            const std::vector<ManifestEntry> entries = read_manifest(args.manifest);
            if (entries.size() != codes.size()) {
                throw ShapeError("manifest lists " + std::to_string(entries.size()) +
                                 " files but codes file has " + std::to_string(codes.size()) +
                                 " lines");
            }
            for (const ManifestEntry& e : entries) ids.push_back(e.path.string());
        } else {
            for (std::size_t i = 0; i < codes.size(); ++i) ids.push_back(std::to_string(i));
        }

        std::vector<std::size_t> assignments;
        if (!args.assign_to.empty()) {
            const std::vector<Code> centroids = read_codes(args.assign_to);
            if (centroids.empty()) throw EmptyDataset("centroids file is empty");
            assignments = assign(codes, centroids);
            std::cout << "k=" << centroids.size() << '\n' << "mode=assign\n";
        } else {
            const ClusterModel model = forgy_cluster(codes, args.config);
            assignments = model.assignments;
            if (!args.centroids_out.empty()) write_codes(args.centroids_out, model.centroids);
            std::cout << "k=" << args.config.k << '\n'
                      << "mode=cluster\n"
                      << "iterations_run=" << model.iterations_run << '\n'
                      << "converged=" << (model.converged ? "true" : "false") << '\n';
        }

        std::vector<AssignmentRecord> records;
        records.reserve(codes.size());
        for (std::size_t i = 0; i < codes.size(); ++i) {
            records.push_back({ids[i], assignments[i]});
        }
        write_assignments(args.out, records);
        std::cout << "assignments=" << args.out << '\n';
    });
}

struct EvalArgs {
    std::string assignments;
    std::string manifest;
    std::string out;
};

void setup_eval(CLI::App& app, EvalArgs& args) {
    CLI::App* cmd = app.add_subcommand(
        "eval", "Score assignments against the labels of a manifest (same order)");
    add_common(cmd);
    cmd->add_option("--assignments", args.assignments, "Assignments file")->required();
    cmd->add_option("--manifest", args.manifest, "Labeled manifest")->required();
    cmd->add_option("--out", args.out, "Also write the metric=value report here");
    cmd->callback([cmd, &args] {
        log_resolved_config(*cmd);
        const std::vector<AssignmentRecord> records = read_assignments(args.assignments);
        const std::vector<ManifestEntry> entries = read_manifest(args.manifest);
        if (records.size() != entries.size()) {
            throw ShapeError("assignments file has " + std::to_string(records.size()) +
                             " records but manifest lists " + std::to_string(entries.size()));
        }
        if (records.empty()) throw EmptyDataset("nothing to evaluate");

        std::vector<std::size_t> assignments;
        std::vector<std::string> labels;
        std::size_t k = 0;
        for (std::size_t i = 0; i < records.size(); ++i) {
            if (entries[i].label.empty()) {
                throw FormatError("manifest entry " + entries[i].path.string() +
                                  " has no label; eval needs labeled manifests");
            }
            assignments.push_back(records[i].cluster);
            labels.push_back(entries[i].label);
            k = std::max(k, records[i].cluster + 1);
        }

        const EvalReport report = evaluate(assignments, labels, k);

        std::cout << "clusters x classes (";
        for (std::size_t t = 0; t < report.confusion.classes(); ++t) {
            if (t) std::cout << ", ";
            std::cout << report.confusion.class_names[t];
        }
        std::cout << "):\n";
        for (std::size_t j = 0; j < report.confusion.clusters(); ++j) {
            std::cout << "  cluster " << j << ":";
            for (std::size_t t = 0; t < report.confusion.classes(); ++t) {
                std::cout << ' ' << report.confusion.counts[j][t];
            }
            const int mapped = report.mapping.cluster_to_class[j];
            std::cout << "  -> "
                      << (mapped < 0 ? std::string("(unmapped)")
                                     : report.confusion.class_names[mapped])
                      << '\n';
        }

        std::ostringstream machine;
        machine << "success_rate=" << format_double(report.mapping.rate) << '\n'
                << "n_correct=" << report.mapping.n_correct << '\n'
                << "n_total=" << report.mapping.n_total << '\n'
                << "k=" << report.confusion.clusters() << '\n'
                << "classes=" << report.confusion.classes() << '\n';
        for (std::size_t j = 0; j < report.confusion.clusters(); ++j) {
            const int mapped = report.mapping.cluster_to_class[j];
            machine << "mapping_" << j << '='
                    << (mapped < 0 ? std::string("-") : report.confusion.class_names[mapped])
                    << '\n';
        }
        std::cout << machine.str();
        if (!args.out.empty()) {
            atomic_write(args.out, [&](std::ostream& os) { os << machine.str(); });
            std::cout << "report=" << args.out << '\n';
        }
    });
}

struct ReconstructArgs {
    std::string model;
    std::string manifest;
    std::string out_dir;
    double mirror_threshold = 0.05;
};

void setup_reconstruct(CLI::App& app, ReconstructArgs& args) {
    CLI::App* cmd = app.add_subcommand(
        "reconstruct", "Write reconstructed PGMs next to the originals (or into --out)");
    add_common(cmd);
    cmd->add_option("--model", args.model, "Trained model file")->required();
    cmd->add_option("--manifest", args.manifest, "Dataset manifest")->required();
    cmd->add_option("--out", args.out_dir, "Output directory (default: alongside inputs)");
    cmd->add_option("--mirror-threshold", args.mirror_threshold,
                    "RMS threshold for the mirrored fraction")
        ->capture_default_str();
    cmd->callback([cmd, &args] {
        log_resolved_config(*cmd);
        const Network net = load_model(args.model);
        const std::vector<ManifestEntry> entries = read_manifest(args.manifest);
        if (entries.empty()) throw EmptyDataset("manifest lists no images");
        if (!args.out_dir.empty()) {
            std::filesystem::create_directories(args.out_dir);
        }
        std::vector<std::vector<double>> inputs;
        inputs.reserve(entries.size());
        for (const ManifestEntry& e : entries) inputs.push_back(load_sample(e.path).values);

        for (std::size_t i = 0; i < entries.size(); ++i) {
            const std::vector<double> output = reconstruct(net, inputs[i]);
            RawImage img;
            img.width = kImageSide;
            img.height = kImageSide;
            img.pixels.reserve(output.size());
            for (const double v : output) {
                const double p = std::round(v * 128.0 + 128.0);
                img.pixels.push_back(
                    static_cast<std::uint8_t>(std::clamp(p, 0.0, 255.0)));
            }
            std::filesystem::path target = entries[i].path;
            target.replace_filename(target.stem().string() + "_recon.pgm");
            if (!args.out_dir.empty()) {
                target = std::filesystem::path(args.out_dir) / target.filename();
            }
            write_pgm(img, target);
        }

        const ReconstructionReport report =
            reconstruction_report(net, inputs, args.mirror_threshold);
        std::cout << "n=" << inputs.size() << '\n'
                  << "mean_rms=" << format_double(report.mean_rms) << '\n'
                  << "max_rms=" << format_double(report.max_rms) << '\n'
                  << "mirrored_fraction=" << format_double(report.mirrored_fraction) << '\n';
    });
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bottleneck mirroring network + Forgy clustering pipeline"};
    app.require_subcommand(1);

    GenCorpusArgs gen_args;
    TrainArgs train_args;
    EncodeArgs encode_args;
    ClusterArgs cluster_args;
    EvalArgs eval_args;
    ReconstructArgs recon_args;

    setup_gen_corpus(app, gen_args);
    setup_train(app, train_args);
    setup_encode(app, encode_args);
    setup_cluster(app, cluster_args);
    setup_eval(app, eval_args);
    setup_reconstruct(app, recon_args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const mirrornet::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
