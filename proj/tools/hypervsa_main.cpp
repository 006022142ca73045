// Batch CLI for the hypervsa toolkit: basis construction, encoding, training,
// evaluation, config-driven runs, the synthetic task, expressivity checks,
// and circuit-depth reports.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hypervsa/cdc.hpp"
#include "hypervsa/dataset.hpp"
#include "hypervsa/encode.hpp"
#include "hypervsa/errors.hpp"
#include "hypervsa/expressivity.hpp"
#include "hypervsa/learn.hpp"
#include "hypervsa/rff.hpp"
#include "hypervsa/run.hpp"
#include "hypervsa/serialize.hpp"
#include "hypervsa/threads.hpp"

namespace {

using nlohmann::json;
namespace hv = hypervsa;

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

struct DataArgs {
    std::string dir;
    std::string split = "train";
    int label_column = -1;
};

hv::harness::Dataset load_split(const DataArgs& args) {
    namespace fsns = std::filesystem;
    const fsns::path dir(args.dir);
    const fsns::path idx_images =
        dir / (args.split == "train" ? "train-images-idx3-ubyte" : "t10k-images-idx3-ubyte");
    const fsns::path idx_labels =
        dir / (args.split == "train" ? "train-labels-idx1-ubyte" : "t10k-labels-idx1-ubyte");
    if (fsns::exists(idx_images)) {
        return hv::harness::load_idx(idx_images.string(), idx_labels.string());
    }
    const fsns::path csv = dir / (args.split + ".csv");
    if (fsns::exists(csv)) {
        return hv::harness::load_csv(csv.string(), args.label_column);
    }
    throw hv::data_error("no dataset found in " + args.dir + " (expected IDX files or " +
                         args.split + ".csv)");
}

hv::rff::CorrelatedBasis make_basis(const std::string& family_name, std::size_t dim,
                                    const std::string& mode, double sigma, std::uint64_t seed,
                                    const std::string& target_file) {
    hv::rff::Family family;
    int order = 0;
    hv::harness::parse_family(family_name, family, order);
    hv::SeededRng rng(seed);
    if (mode == "random") {
        return hv::rff::random_basis(family, order, 256, dim, rng);
    }
    hv::SimilarityTarget target;
    if (!target_file.empty()) {
        target = hv::io::load_target_file(target_file);
    } else {
        if (sigma <= 0.0) {
            throw hv::config_error(
                "the median bandwidth heuristic needs a dataset; pass an explicit --sigma to "
                "init-basis, or build the basis through train/run");
        }
        std::vector<double> values(256);
        for (std::size_t i = 0; i < values.size(); ++i) {
            values[i] = static_cast<double>(i);
        }
        target = hv::rff::rbf_target(values, sigma);
    }
    if (family == hv::rff::Family::Binary) {
        return hv::rff::sample_correlated_binary(target, dim, rng);
    }
    return hv::rff::sample_correlated_cyclic(target, dim, order, rng);
}

int dispatch(int argc, char** argv) {
    CLI::App app{"hyperdimensional computing / group VSA toolkit"};
    app.require_subcommand(1);

    int threads = 0;
    app.add_option("--threads", threads, "cap worker threads (HYPERVSA_THREADS overrides)");

    // --- init-basis ---
    auto* init_basis = app.add_subcommand("init-basis", "construct a basis hypervector family");
    std::string ib_family = "binary", ib_mode = "rff", ib_target, ib_out = "basis.cb";
    std::size_t ib_dim = 10000;
    double ib_sigma = 16.0;
    std::uint64_t ib_seed = 0;
    init_basis->add_option("--family", ib_family, "binary or g<n>");
    init_basis->add_option("--dim", ib_dim, "hypervector dimension");
    init_basis->add_option("--basis", ib_mode, "random or rff")
        ->check(CLI::IsMember({"random", "rff"}));
    init_basis->add_option("--sigma", ib_sigma, "RBF bandwidth on the 0-255 scale (<= 0: median heuristic)");
    init_basis->add_option("--target", ib_target, "similarity target matrix file");
    init_basis->add_option("--seed", ib_seed, "master seed");
    init_basis->add_option("--out", ib_out, "output basis file");

    // --- encode ---
    auto* encode_cmd = app.add_subcommand("encode", "encode a dataset with a basis");
    std::string en_basis, en_out = "encoded.hv";
    DataArgs en_data;
    encode_cmd->add_option("--basis", en_basis, "basis file")->required();
    encode_cmd->add_option("--data", en_data.dir, "dataset directory")->required();
    encode_cmd->add_option("--split", en_data.split, "train or test");
    encode_cmd->add_option("--label-column", en_data.label_column, "CSV label column (-1 = last)");
    encode_cmd->add_option("--out", en_out, "output file of hypervector records");

    // --- train ---
    auto* train_cmd = app.add_subcommand("train", "train a classifier");
    std::string tr_paradigm = "sgd", tr_family = "binary", tr_basis_mode = "rff", tr_target;
    std::string tr_model = "model.vsa";
    DataArgs tr_data;
    std::size_t tr_dim = 10000;
    double tr_sigma = 16.0, tr_lr = 0.01, tr_beta = 10.0;
    int tr_epochs = 10, tr_batch = 32;
    std::uint64_t tr_seed = 0;
    bool tr_warm = false;
    train_cmd->add_option("--paradigm", tr_paradigm, "bundle, sgd, or perceptron")
        ->check(CLI::IsMember({"bundle", "sgd", "perceptron"}));
    train_cmd->add_option("--family", tr_family, "binary or g<n> (g2,g4,g8,g16)");
    train_cmd->add_option("--dim", tr_dim, "hypervector dimension");
    train_cmd->add_option("--epochs", tr_epochs, "training epochs");
    train_cmd->add_option("--lr", tr_lr, "learning rate");
    train_cmd->add_option("--batch", tr_batch, "mini-batch size");
    train_cmd->add_option("--beta", tr_beta, "logit scale");
    train_cmd->add_option("--seed", tr_seed, "master seed");
    train_cmd->add_option("--basis", tr_basis_mode, "random or rff")
        ->check(CLI::IsMember({"random", "rff"}));
    train_cmd->add_option("--sigma", tr_sigma, "RBF bandwidth (<= 0: median heuristic)");
    train_cmd->add_option("--target", tr_target, "similarity target matrix file");
    train_cmd->add_flag("--warm-start", tr_warm, "warm start from class vote sums");
    train_cmd->add_option("--data", tr_data.dir, "dataset directory")->required();
    train_cmd->add_option("--label-column", tr_data.label_column, "CSV label column");
    train_cmd->add_option("--out", tr_model, "model output file");

    // --- eval ---
    auto* eval_cmd = app.add_subcommand("eval", "evaluate a model");
    std::string ev_model, ev_basis;
    DataArgs ev_data;
    ev_data.split = "test";
    eval_cmd->add_option("--model", ev_model, "model file")->required();
    eval_cmd->add_option("--basis", ev_basis, "basis file used for encoding")->required();
    eval_cmd->add_option("--data", ev_data.dir, "dataset directory")->required();
    eval_cmd->add_option("--split", ev_data.split, "train or test");
    eval_cmd->add_option("--label-column", ev_data.label_column, "CSV label column");

    // --- run ---
    auto* run_cmd = app.add_subcommand("run", "config-driven experiment");
    std::string run_config;
    run_cmd->add_option("config", run_config, "JSON config file")->required();

    // --- synth-task ---
    auto* synth_cmd = app.add_subcommand("synth-task", "emit the three-symbol task as CSV");
    double sy_p = 0.05;
    std::size_t sy_m = 100000;
    std::uint64_t sy_seed = 0;
    std::string sy_out = "synthetic.csv";
    synth_cmd->add_option("--p", sy_p, "diagonal boost p");
    synth_cmd->add_option("--m", sy_m, "sample count");
    synth_cmd->add_option("--seed", sy_seed, "seed");
    synth_cmd->add_option("--out", sy_out, "output CSV path");

    // --- expressivity ---
    auto* expr_cmd = app.add_subcommand("expressivity", "similarity-matrix expressivity tools");
    expr_cmd->require_subcommand(1);
    auto* expr_check = expr_cmd->add_subcommand("check", "convex-hull membership of a target");
    std::string ec_target;
    double ec_eps = 0.01;
    expr_check->add_option("--target", ec_target, "similarity target matrix file")->required();
    expr_check->add_option("--eps", ec_eps, "tolerance");
    auto* expr_angle = expr_cmd->add_subcommand("angle", "bundling angle theory / Monte-Carlo");
    int ea_k = 1;
    std::vector<std::uint64_t> ea_empirical;
    expr_angle->add_option("--k", ea_k, "bundle 2k+1 vectors")->required();
    expr_angle->add_option("--empirical", ea_empirical, "D TRIALS for the Monte-Carlo run")
        ->expected(2);

    // --- angle (alias of expressivity angle) ---
    auto* angle_cmd = app.add_subcommand("angle", "bundling angle theory / Monte-Carlo");
    int an_k = 1;
    std::vector<std::uint64_t> an_empirical;
    angle_cmd->add_option("--k", an_k, "bundle 2k+1 vectors")->required();
    angle_cmd->add_option("--empirical", an_empirical, "D TRIALS for the Monte-Carlo run")
        ->expected(2);

    // --- cdc ---
    auto* cdc_cmd = app.add_subcommand("cdc", "circuit-depth complexity report");
    double cd_n = 784, cd_d = 10000;
    int cd_bits = 0;
    cdc_cmd->add_option("--n-features", cd_n, "feature count N")->required();
    cdc_cmd->add_option("--dim", cd_d, "hypervector dimension D")->required();
    cdc_cmd->add_option("--group-bits", cd_bits, "bits per element for the G(2^n) row");

    CLI11_PARSE(app, argc, argv);

    // HYPERVSA_THREADS overrides --threads.
    const int env_cap = hv::thread_cap_from_env();
    hv::set_thread_cap(env_cap > 0 ? env_cap : threads);

    if (init_basis->parsed()) {
        const auto basis = make_basis(ib_family, ib_dim, ib_mode, ib_sigma, ib_seed, ib_target);
        if (basis.clipped_ratio > 0.05) {
            std::cerr << "warning: clipped eigenvalue mass is " << (100.0 * basis.clipped_ratio)
                      << "% of the factored target's trace; the target is far from "
                         "binary-expressible\n";
        }
        hv::io::save_basis(ib_out, basis);
        json out = {{"basis", ib_out},
                    {"family", ib_family},
                    {"dim", ib_dim},
                    {"count", basis.size()},
                    {"hash", hv::io::hash_hex(hv::io::serialize_basis_bytes(basis))}};
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    if (encode_cmd->parsed()) {
        const auto basis = hv::io::load_basis(en_basis);
        const auto ds = load_split(en_data);
        const auto encoded = hv::learn::encode_dataset(ds, basis);
        std::ofstream out(en_out, std::ios::binary);
        if (!out) {
            throw hv::data_error("cannot open output file: " + en_out);
        }
        for (std::size_t i = 0; i < encoded.size(); ++i) {
            if (encoded.family == hv::rff::Family::Binary) {
                hv::io::write_hypervector(out, encoded.binary[i]);
            } else {
                hv::io::write_hypervector(out, encoded.cyclic[i]);
            }
        }
        json rec = {{"encoded", en_out}, {"samples", encoded.size()}, {"dim", encoded.dim}};
        std::cout << rec.dump(2) << "\n";
        return 0;
    }
    if (train_cmd->parsed() || run_cmd->parsed()) {
        hv::harness::RunConfig cfg;
        if (run_cmd->parsed()) {
            cfg = hv::harness::load_run_config(run_config);
        } else {
            cfg.dataset.kind = "auto";
            // The train subcommand wraps run_experiment over a directory.
            namespace fsns = std::filesystem;
            if (fsns::exists(fsns::path(tr_data.dir) / "train-images-idx3-ubyte")) {
                cfg.dataset.kind = "idx";
                cfg.dataset.train_images =
                    (fsns::path(tr_data.dir) / "train-images-idx3-ubyte").string();
                cfg.dataset.train_labels =
                    (fsns::path(tr_data.dir) / "train-labels-idx1-ubyte").string();
                cfg.dataset.test_images =
                    (fsns::path(tr_data.dir) / "t10k-images-idx3-ubyte").string();
                cfg.dataset.test_labels =
                    (fsns::path(tr_data.dir) / "t10k-labels-idx1-ubyte").string();
            } else if (fsns::exists(fsns::path(tr_data.dir) / "train.csv")) {
                cfg.dataset.kind = "csv";
                cfg.dataset.train_csv = (fsns::path(tr_data.dir) / "train.csv").string();
                cfg.dataset.test_csv = (fsns::path(tr_data.dir) / "test.csv").string();
                cfg.dataset.label_column = tr_data.label_column;
            } else {
                throw hv::data_error("no dataset found in " + tr_data.dir);
            }
            hv::harness::parse_family(tr_family, cfg.family, cfg.order);
            cfg.paradigm = tr_paradigm == "bundle"
                               ? hv::harness::Paradigm::Bundle
                               : (tr_paradigm == "sgd" ? hv::harness::Paradigm::Sgd
                                                       : hv::harness::Paradigm::Perceptron);
            cfg.dim = tr_dim;
            cfg.basis = tr_basis_mode == "random" ? hv::harness::BasisMode::Random
                                                  : hv::harness::BasisMode::Rff;
            cfg.sigma = tr_sigma;
            cfg.train.epochs = tr_epochs;
            cfg.train.learning_rate = tr_lr;
            cfg.train.batch_size = tr_batch;
            cfg.train.beta = tr_beta;
            cfg.train.seed = tr_seed;
            cfg.train.warm_start = tr_warm;
            cfg.model_out = tr_model;
        }
        if (threads > 0) {
            cfg.threads = threads;
        }
        const auto record = hv::harness::run_experiment(cfg, std::cerr);
        std::cout << record.json << "\n";
        return 0;
    }
    if (eval_cmd->parsed()) {
        const auto basis = hv::io::load_basis(ev_basis);
        const auto ds = load_split(ev_data);
        const auto encoded = hv::learn::encode_dataset(ds, basis);
        const auto model = hv::io::load_model(ev_model);
        double acc = 0.0;
        if (std::holds_alternative<hv::learn::PrototypeModel>(model)) {
            acc = hv::learn::evaluate(encoded, std::get<hv::learn::PrototypeModel>(model));
        } else {
            acc = hv::learn::evaluate(encoded, std::get<hv::learn::SgdModel>(model));
        }
        json rec = {{"model", ev_model}, {"split", ev_data.split}, {"accuracy", acc}};
        std::cout << rec.dump(2) << "\n";
        return 0;
    }
    if (synth_cmd->parsed()) {
        hv::harness::SyntheticTaskSpec spec;
        spec.p = sy_p;
        spec.samples = sy_m;
        spec.seed = sy_seed;
        const auto ds = hv::harness::synth_task(spec);
        std::ofstream out(sy_out);
        if (!out) {
            throw hv::data_error("cannot open output file: " + sy_out);
        }
        for (std::size_t i = 0; i < ds.num_samples; ++i) {
            out << static_cast<int>(ds.features[i]) << "," << ds.labels[i] << "\n";
        }
        json rec = {{"file", sy_out},
                    {"samples", sy_m},
                    {"p", sy_p},
                    {"bayes_accuracy", hv::harness::synth_bayes_accuracy(sy_p)}};
        std::cout << rec.dump(2) << "\n";
        return 0;
    }
    if (expr_check->parsed()) {
        const auto target = hv::io::load_target_file(ec_target);
        const auto report = hv::expressivity::check_binary_expressible(target, ec_eps);
        std::cout << (report.feasible ? "FEASIBLE" : "INFEASIBLE") << "\n";
        json rec = {{"feasible", report.feasible},
                    {"residual", report.residual},
                    {"note", report.certificate_note}};
        if (report.feasible) {
            rec["weights"] = report.weights;
        }
        std::cout << rec.dump(2) << "\n";
        return 0;
    }
    if (expr_angle->parsed() || angle_cmd->parsed()) {
        const int k = expr_angle->parsed() ? ea_k : an_k;
        const auto& emp = expr_angle->parsed() ? ea_empirical : an_empirical;
        json rec = {{"k", k},
                    {"theory_deg", hv::expressivity::bundling_angle_theory_deg(k)},
                    {"pk", hv::expressivity::pk(k)}};
        if (emp.size() == 2) {
            rec["empirical_deg"] = hv::expressivity::bundling_angle_empirical_deg(
                k, emp[0], emp[1], hv::SeededRng(0));
            rec["dim"] = emp[0];
            rec["trials"] = emp[1];
        }
        std::cout << rec.dump(2) << "\n";
        return 0;
    }
    if (cdc_cmd->parsed()) {
        hv::cdc::CdcQuery q{cd_n, cd_d, cd_bits > 0 ? cd_bits : 3};
        json rows = json::array();
        const auto binary = hv::cdc::cdc_binary_hdc(q);
        rows.push_back({{"model", "binary-hdc"},
                        {"depth_real", binary.depth_real},
                        {"depth_rounded", binary.depth_rounded}});
        if (cd_bits > 0) {
            const auto group = hv::cdc::cdc_group(q);
            rows.push_back({{"model", "g" + std::to_string(1 << cd_bits) + "-vsa"},
                            {"depth_real", group.depth_real},
                            {"depth_rounded", group.depth_rounded}});
        }
        const auto percep = hv::cdc::cdc_perceptron(q);
        rows.push_back({{"model", "perceptron"},
                        {"depth_real", percep.depth_real},
                        {"depth_rounded", percep.depth_rounded}});
        std::cout << rows.dump(2) << "\n";
        return 0;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const hv::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const hv::data_error& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const hv::numeric_error& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
