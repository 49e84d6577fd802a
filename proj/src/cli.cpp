#include "sehp/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "sehp/checkpoint.hpp"
#include "sehp/config.hpp"
#include "sehp/trainer.hpp"

namespace sehp::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitValidation = 3;
constexpr int kExitRuntime = 4;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string file_fingerprint(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw InputError("cannot open for fingerprint: " + path.string());
    std::uint64_t h = 0xCBF29CE484222325ULL;
    char buf[1 << 14];
    while (is.read(buf, sizeof(buf)) || is.gcount() > 0) {
        for (std::streamsize i = 0; i < is.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001B3ULL;
        }
        if (!is) break;
    }
    char out[17];
    std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
    return out;
}

void require_file(const fs::path& path, const char* what) {
    if (!fs::exists(path))
        throw InputError(std::string(what) + " not found: " + path.string());
}

std::vector<NegStrategy> parse_strategy_list(const std::string& csv) {
    std::vector<NegStrategy> out;
    std::istringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(strategy_from_name(tok));
    if (out.empty()) throw InputError("empty strategy list");
    return out;
}

void emit_path(const fs::path& p) { std::cout << p.string() << '\n'; }

struct DatasetDir {
    Hypergraph graph;
    Split split;
    fs::path graph_file;
};

DatasetDir load_dataset_dir(const fs::path& dir) {
    require_file(dir / "graph.txt", "dataset graph");
    require_file(dir / "split.txt", "dataset split");
    DatasetDir d;
    d.graph_file = dir / "graph.txt";
    std::optional<fs::path> features;
    if (fs::exists(dir / "features.txt")) features = dir / "features.txt";
    d.graph = load_hypergraph(d.graph_file, features);
    d.split = load_split(dir / "split.txt");
    return d;
}

json config_json(const TrainConfig& cfg) {
    json j;
    std::istringstream ss(config_to_string(cfg));
    std::string key, value, line;
    while (std::getline(ss, line)) {
        std::istringstream ls(line);
        if (ls >> key >> value) j[key] = value;
    }
    return j;
}

void write_manifest(const fs::path& path, json manifest) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write manifest: " + path.string());
    os << manifest.dump(2) << '\n';
}

// ---------------------------------------------------------------- prepare

int cmd_prepare(const fs::path& out_dir, const std::optional<std::string>& synth_spec,
                const std::optional<fs::path>& data_file,
                const std::optional<fs::path>& feature_file, std::uint64_t seed,
                const std::string& strategies_csv) {
    fs::create_directories(out_dir);
    Hypergraph g;
    LoadReport report;
    json manifest;
    manifest["command"] = "prepare";
    manifest["seed"] = seed;

    if (synth_spec) {
        std::size_t n, m, kmin, kmax, communities;
        if (std::sscanf(synth_spec->c_str(), "%zu,%zu,%zu,%zu,%zu", &n, &m, &kmin, &kmax,
                        &communities) != 5)
            throw InputError("--synth expects n,m,kmin,kmax,communities");
        g = synth_hypergraph(n, m, kmin, kmax, communities, seed);
        manifest["source"] = "synthetic";
        manifest["synth"] = {{"n", n}, {"m", m}, {"kmin", kmin}, {"kmax", kmax},
                             {"communities", communities}};
    } else if (data_file) {
        require_file(*data_file, "hyperedge file");
        if (feature_file) require_file(*feature_file, "feature file");
        g = load_hypergraph(*data_file, feature_file, &report);
        std::fprintf(stderr, "loaded n=%zu m=%zu mean_edge_size=%.4f", report.node_count,
                     report.edge_count, report.mean_edge_size);
        if (report.rejected_small)
            std::fprintf(stderr, " rejected_small=%zu", report.rejected_small);
        if (report.deduplicated)
            std::fprintf(stderr, " warning: deduplicated %zu node occurrences",
                         report.deduplicated);
        std::fprintf(stderr, "\n");
        manifest["source"] = data_file->string();
        if (report.remapped) {
            save_remap(report.remap, out_dir / "remap.txt");
            emit_path(out_dir / "remap.txt");
        }
    } else {
        throw InputError("prepare needs --synth or --data");
    }

    const Split split = split_dataset(g, seed);
    save_hyperedges(g, out_dir / "graph.txt");
    save_features(g.features, out_dir / "features.txt");
    save_split(split, out_dir / "split.txt");
    emit_path(out_dir / "graph.txt");
    emit_path(out_dir / "features.txt");
    emit_path(out_dir / "split.txt");

    const ForbiddenSet observed(g);
    std::vector<std::string> strategy_names;
    for (NegStrategy s : parse_strategy_list(strategies_csv)) {
        const std::string name = strategy_name(s);
        const std::uint64_t neg_seed = derive_seed(seed, "prepare_neg:" + name);
        NegSpec spec{s, split.val.size() + split.test.size(), neg_seed};
        const auto negs = sample_negatives(g, spec, observed);
        const fs::path neg_path = out_dir / ("neg_" + name + ".txt");
        save_negatives(negs, neg_path, name, neg_seed, split.val.size(), split.test.size());
        emit_path(neg_path);
        strategy_names.push_back(name);
    }

    manifest["dataset_fingerprint"] = file_fingerprint(out_dir / "graph.txt");
    manifest["n"] = g.node_count;
    manifest["m"] = g.edge_count();
    manifest["mean_edge_size"] = g.mean_edge_size();
    manifest["split"] = {{"train", split.train.size()},
                         {"val", split.val.size()},
                         {"test", split.test.size()}};
    manifest["strategies"] = strategy_names;
    manifest["output_dir"] = out_dir.string();
    write_manifest(out_dir / "manifest.json", manifest);
    emit_path(out_dir / "manifest.json");
    return kExitOk;
}

// ---------------------------------------------------------------- train

int cmd_train(const fs::path& data_dir, const fs::path& out_dir, const TrainConfig& cfg,
              const std::optional<fs::path>& resume) {
    fs::create_directories(out_dir);
    DatasetDir d = load_dataset_dir(data_dir);

    json manifest;
    manifest["command"] = "train";
    manifest["config"] = config_json(cfg);
    manifest["dataset_fingerprint"] = file_fingerprint(d.graph_file);
    manifest["seed"] = cfg.seed;
    manifest["variant"] = variant_name(cfg.variant);
    manifest["output_dir"] = out_dir.string();
    write_manifest(out_dir / "manifest.json", manifest);

    TrainResult result;
    if (resume) {
        require_file(*resume, "checkpoint");
        const Container c = load_container(*resume);
        TrainState state = state_from_container(c);
        double best = -1.0;
        if (auto it = c.meta.find("best_val_auroc"); it != c.meta.end())
            best = std::stod(it->second);
        result = train_from_state(std::move(state), d.graph, d.split, cfg, best);
    } else {
        result = train(d.graph, d.split, cfg);
    }

    save_history_csv(result.history, cfg.eval_strategies, out_dir / "history.csv");
    emit_path(out_dir / "history.csv");

    const auto save_state = [&](const fs::path& path, const Models& models, bool full_state) {
        Container c;
        if (full_state) {
            state_to_container(result.final_state, c);
        } else {
            models_to_container(models, c);
            c.meta["global_step"] = std::to_string(result.final_state.global_step);
        }
        c.meta["variant"] = variant_name(cfg.variant);
        c.meta["seed"] = std::to_string(cfg.seed);
        c.meta["best_val_auroc"] = std::to_string(result.best_val_auroc);
        save_container(path, c);
    };
    save_state(out_dir / "best.ckpt", result.best, false);
    emit_path(out_dir / "best.ckpt");
    save_state(out_dir / "final.ckpt", result.final_state.models, true);
    emit_path(out_dir / "final.ckpt");

    if (result.aborted) {
        std::fprintf(stderr, "training diverged; checkpoints hold the last good state\n");
        return kExitRuntime;
    }
    return kExitOk;
}

// ---------------------------------------------------------------- eval

int cmd_eval(const fs::path& data_dir, const fs::path& checkpoint, const fs::path& out_dir,
             const TrainConfig& cfg, const std::string& strategies_csv) {
    require_file(checkpoint, "checkpoint");
    fs::create_directories(out_dir);
    DatasetDir d = load_dataset_dir(data_dir);
    const Container c = load_container(checkpoint);
    const Models models = models_from_container(c);
    const auto strategies = parse_strategy_list(strategies_csv);

    const EvalTable table = evaluate(models, d.graph, d.split.test, cfg, strategies,
                                     derive_seed(cfg.seed, "test_eval"));

    const fs::path out = out_dir / "results.csv";
    std::ofstream os(out);
    if (!os) throw std::runtime_error("cannot write results: " + out.string());
    os.precision(6);
    os << "metric";
    for (const auto& row : table.rows) os << ',' << strategy_name(row.strategy);
    os << ",AVE\nAUROC";
    for (const auto& row : table.rows) os << ',' << row.auroc;
    os << ',' << table.ave_auroc << "\nPrecision";
    for (const auto& row : table.rows) os << ',' << row.precision;
    os << ',' << table.ave_precision << '\n';

    json meta;
    meta["seed"] = cfg.seed;
    meta["variant"] = c.meta.count("variant") ? c.meta.at("variant") : "unknown";
    meta["checkpoint"] = checkpoint.string();
    meta["dataset_fingerprint"] = file_fingerprint(d.graph_file);
    meta["config"] = config_json(cfg);
    os << "# meta " << meta.dump() << '\n';
    emit_path(out);
    return kExitOk;
}

// ---------------------------------------------------------------- bench

int cmd_bench(const fs::path& data_dir, const fs::path& out_dir, TrainConfig cfg,
              const std::string& variants_csv, std::size_t timed_epochs) {
    if (timed_epochs < 3) timed_epochs = 3;
    fs::create_directories(out_dir);
    DatasetDir d = load_dataset_dir(data_dir);

    std::vector<Variant> variants;
    {
        std::istringstream ss(variants_csv);
        std::string tok;
        while (std::getline(ss, tok, ',')) variants.push_back(variant_from_name(tok));
    }
    if (variants.size() != 2) throw InputError("--variants expects exactly two variants");

    const std::size_t steps_per_epoch =
        (d.split.train.size() + cfg.batch_size - 1) / cfg.batch_size;

    json manifest;
    manifest["command"] = "bench";
    manifest["dataset_fingerprint"] = file_fingerprint(d.graph_file);
    manifest["seed"] = cfg.seed;
    manifest["output_dir"] = out_dir.string();
    json timings = json::array();

    std::vector<double> mean_seconds;
    for (Variant v : variants) {
        TrainConfig vcfg = cfg;
        vcfg.variant = v;
        TrainState state = make_train_state(d.graph, vcfg);
        // one warm-up epoch, untimed
        for (std::size_t s = 0; s < steps_per_epoch; ++s)
            train_step(state, d.graph, d.split.train, vcfg);
        double total = 0.0;
        for (std::size_t e = 0; e < timed_epochs; ++e) {
            const auto t0 = std::chrono::steady_clock::now();
            for (std::size_t s = 0; s < steps_per_epoch; ++s)
                train_step(state, d.graph, d.split.train, vcfg);
            total +=
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        }
        mean_seconds.push_back(total / static_cast<double>(timed_epochs));
        timings.push_back({{"variant", variant_name(v)},
                           {"timed_epochs", timed_epochs},
                           {"mean_seconds_per_epoch", mean_seconds.back()}});
        std::fprintf(stderr, "%s: %.4f s/epoch over %zu epochs\n",
                     variant_name(v).c_str(), mean_seconds.back(), timed_epochs);
    }
    const double ratio = mean_seconds[0] / mean_seconds[1];

    const fs::path out = out_dir / "timing.csv";
    std::ofstream os(out);
    if (!os) throw std::runtime_error("cannot write timing: " + out.string());
    os.precision(6);
    os << "variant,timed_epochs,mean_seconds_per_epoch\n";
    for (std::size_t i = 0; i < variants.size(); ++i)
        os << variant_name(variants[i]) << ',' << timed_epochs << ',' << mean_seconds[i]
           << '\n';
    os << "speed_ratio," << variant_name(variants[0]) << '/' << variant_name(variants[1]) << ','
       << ratio << '\n';
    emit_path(out);

    manifest["timings"] = timings;
    manifest["speed_ratio"] = ratio;
    write_manifest(out_dir / "manifest.json", manifest);
    emit_path(out_dir / "manifest.json");
    return kExitOk;
}

// ---------------------------------------------------------------- trace

int cmd_trace(const fs::path& data_dir, const fs::path& checkpoint, const fs::path& out_dir,
              const TrainConfig& cfg, std::size_t batches) {
    require_file(checkpoint, "checkpoint");
    fs::create_directories(out_dir);
    DatasetDir d = load_dataset_dir(data_dir);
    const Models models = models_from_container(load_container(checkpoint));

    const auto trace = boundary_trace(models, d.graph, d.split.test, cfg, batches,
                                      derive_seed(cfg.seed, "trace"));
    const fs::path out = out_dir / "trace.csv";
    std::ofstream os(out);
    if (!os) throw std::runtime_error("cannot write trace: " + out.string());
    os.precision(10);
    os << "batch";
    for (std::size_t t = 0; t <= cfg.diffusion_steps; ++t) os << ",mean_s" << t;
    os << '\n';
    for (std::size_t b = 0; b < trace.size(); ++b) {
        os << b;
        for (double x : trace[b]) os << ',' << x;
        os << '\n';
    }
    emit_path(out);
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"hyperedge prediction with diffusion-generated negative samples"};
    app.require_subcommand(1);

    // shared options
    std::string data, out = "out", config_file, variant, strategies = "SNS,MNS,CNS,MIX";
    std::string synth_spec, features, checkpoint, resume, variants = "SEHP,SEHP-epre";
    std::uint64_t seed = 1;
    std::size_t epochs = 0, batches = 100, bench_epochs = 3;
    bool seed_given = false, epochs_given = false;

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--out", out, "output directory");
        cmd->add_option("--seed", seed, "root seed")->each([&](const std::string&) {
            seed_given = true;
        });
        cmd->add_option("--config", config_file, "flat key-value config file");
        cmd->add_option("--variant", variant, "model variant (SEHP, SEHP-gns, ...)");
        cmd->add_option("--epochs", epochs, "training epochs")->each([&](const std::string&) {
            epochs_given = true;
        });
    };

    CLI::App* prepare = app.add_subcommand("prepare", "build dataset artifacts");
    add_common(prepare);
    prepare->add_option("--synth", synth_spec, "synthetic spec n,m,kmin,kmax,communities");
    prepare->add_option("--data", data, "hyperedge text file");
    prepare->add_option("--features", features, "feature file");
    prepare->add_option("--strategies", strategies, "negative strategies (comma separated)");

    CLI::App* train_cmd = app.add_subcommand("train", "train a model on a prepared dataset");
    add_common(train_cmd);
    train_cmd->add_option("--data", data, "prepared dataset directory")->required();
    train_cmd->add_option("--resume", resume, "checkpoint to resume from");

    CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint on the test split");
    add_common(eval_cmd);
    eval_cmd->add_option("--data", data, "prepared dataset directory")->required();
    eval_cmd->add_option("--checkpoint", checkpoint, "model checkpoint")->required();
    eval_cmd->add_option("--strategies", strategies, "strategies for the results table");

    CLI::App* bench_cmd = app.add_subcommand("bench", "per-epoch training time comparison");
    add_common(bench_cmd);
    bench_cmd->add_option("--data", data, "prepared dataset directory")->required();
    bench_cmd->add_option("--variants", variants, "two variants to compare");
    bench_cmd->add_option("--bench-epochs", bench_epochs, "timed epochs (after 1 warm-up)");

    CLI::App* trace_cmd = app.add_subcommand("trace", "dump per-step mean chain scores");
    add_common(trace_cmd);
    trace_cmd->add_option("--data", data, "prepared dataset directory")->required();
    trace_cmd->add_option("--checkpoint", checkpoint, "model checkpoint")->required();
    trace_cmd->add_option("--batches", batches, "number of traced batches");

    std::vector<std::string> argv_rev(args.rbegin(), args.rend());
    try {
        app.parse(argv_rev);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::fprintf(stderr, "%s\n", e.what());
        return kExitInput;
    }

    try {
        TrainConfig cfg;
        if (!config_file.empty()) {
            require_file(config_file, "config file");
            cfg = load_config(config_file);
        }
        if (seed_given) cfg.seed = seed;
        if (epochs_given) cfg.epochs = epochs;
        if (!variant.empty()) cfg.variant = variant_from_name(variant);
        cfg.validate();

        if (prepare->parsed())
            return cmd_prepare(out,
                               synth_spec.empty() ? std::nullopt
                                                  : std::optional<std::string>(synth_spec),
                               data.empty() ? std::nullopt : std::optional<fs::path>(data),
                               features.empty() ? std::nullopt : std::optional<fs::path>(features),
                               cfg.seed, strategies);
        if (train_cmd->parsed())
            return cmd_train(data, out, cfg,
                             resume.empty() ? std::nullopt : std::optional<fs::path>(resume));
        if (eval_cmd->parsed()) return cmd_eval(data, checkpoint, out, cfg, strategies);
        if (bench_cmd->parsed()) return cmd_bench(data, out, cfg, variants, bench_epochs);
        if (trace_cmd->parsed()) return cmd_trace(data, checkpoint, out, cfg, batches);
        return kExitInput;
    } catch (const InputError& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return kExitValidation;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "runtime failure: %s\n", e.what());
        return kExitRuntime;
    }
}

}  // namespace sehp::cli
