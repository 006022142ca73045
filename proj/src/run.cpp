#include "hypervsa/run.hpp"

#include <algorithm>
#include <cmath>

#include <chrono>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "hypervsa/errors.hpp"
#include "hypervsa/serialize.hpp"
#include "hypervsa/threads.hpp"

namespace hypervsa::harness {

using nlohmann::json;

namespace {

#ifndef HYPERVSA_BUILD_ID
#define HYPERVSA_BUILD_ID "unversioned"
#endif

double now_seconds() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& location) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* name : allowed) {
            if (key == name) {
                ok = true;
                break;
            }
        }
        if (!ok) {
            throw config_error("unknown config key '" + key + "' at " + location);
        }
    }
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
    if (!obj.contains(key)) {
        return fallback;
    }
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw config_error(std::string("config field '") + key + "' has the wrong type");
    }
}

}  // namespace

std::string build_id() { return HYPERVSA_BUILD_ID; }

std::string family_name(rff::Family family, int order) {
    if (family == rff::Family::Binary) {
        return "binary";
    }
    return "g" + std::to_string(order);
}

void parse_family(const std::string& name, rff::Family& family, int& order) {
    if (name == "binary") {
        family = rff::Family::Binary;
        order = 0;
        return;
    }
    if (name.size() >= 2 && name.front() == 'g') {
        try {
            const int n = std::stoi(name.substr(1));
            if (n >= 2 && n <= 256) {
                family = rff::Family::Cyclic;
                order = n;
                return;
            }
        } catch (...) {
        }
    }
    throw config_error("unknown family '" + name + "' (expected binary or g<n>, e.g. g8)");
}

void RunConfig::validate() const {
    if (dataset.kind != "idx" && dataset.kind != "csv" && dataset.kind != "synthetic") {
        throw config_error("dataset.kind must be idx, csv, or synthetic");
    }
    if (dataset.kind == "idx" &&
        (dataset.train_images.empty() || dataset.train_labels.empty() ||
         dataset.test_images.empty() || dataset.test_labels.empty())) {
        throw config_error("idx dataset requires train/test image and label paths");
    }
    if (dataset.kind == "csv" && (dataset.train_csv.empty() || dataset.test_csv.empty())) {
        throw config_error("csv dataset requires train and test paths");
    }
    if (family == rff::Family::Cyclic && (order < 2 || order > 256)) {
        throw config_error("cyclic family requires order in [2, 256]");
    }
    if (dim == 0) {
        throw config_error("dim must be positive");
    }
    // sigma <= 0 requests the median-distance bandwidth heuristic.
    train.validate();
    if (paradigm == Paradigm::Perceptron && family != rff::Family::Binary) {
        throw config_error("the perceptron baseline runs on binary encodings");
    }
}

RunConfig parse_run_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw config_error(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw config_error("config root must be a JSON object");
    }
    reject_unknown_keys(doc,
                        {"version", "dataset", "family", "paradigm", "dim", "basis", "sigma",
                         "epochs", "lr", "batch", "beta", "seed", "warm_start", "threads",
                         "model_out", "record_out"},
                        "root");
    const int version = get_or<int>(doc, "version", 0);
    if (version != 1) {
        throw config_error("config version must be 1");
    }
    if (!doc.contains("dataset") || !doc.at("dataset").is_object()) {
        throw config_error("config requires a dataset object");
    }

    RunConfig cfg;
    const json& ds = doc.at("dataset");
    reject_unknown_keys(ds,
                        {"kind", "train_images", "train_labels", "test_images", "test_labels",
                         "train_csv", "test_csv", "label_column", "p", "train_samples",
                         "test_samples"},
                        "dataset");
    cfg.dataset.kind = get_or<std::string>(ds, "kind", "");
    cfg.dataset.train_images = get_or<std::string>(ds, "train_images", "");
    cfg.dataset.train_labels = get_or<std::string>(ds, "train_labels", "");
    cfg.dataset.test_images = get_or<std::string>(ds, "test_images", "");
    cfg.dataset.test_labels = get_or<std::string>(ds, "test_labels", "");
    cfg.dataset.train_csv = get_or<std::string>(ds, "train_csv", "");
    cfg.dataset.test_csv = get_or<std::string>(ds, "test_csv", "");
    cfg.dataset.label_column = get_or<int>(ds, "label_column", -1);
    cfg.dataset.p = get_or<double>(ds, "p", 0.05);
    cfg.dataset.train_samples = get_or<std::size_t>(ds, "train_samples", 100000);
    cfg.dataset.test_samples = get_or<std::size_t>(ds, "test_samples", 20000);

    parse_family(get_or<std::string>(doc, "family", "binary"), cfg.family, cfg.order);
    const std::string paradigm = get_or<std::string>(doc, "paradigm", "sgd");
    if (paradigm == "bundle") {
        cfg.paradigm = Paradigm::Bundle;
    } else if (paradigm == "sgd") {
        cfg.paradigm = Paradigm::Sgd;
    } else if (paradigm == "perceptron") {
        cfg.paradigm = Paradigm::Perceptron;
    } else {
        throw config_error("paradigm must be bundle, sgd, or perceptron");
    }
    cfg.dim = get_or<std::size_t>(doc, "dim", 10000);
    const std::string basis = get_or<std::string>(doc, "basis", "rff");
    if (basis == "random") {
        cfg.basis = BasisMode::Random;
    } else if (basis == "rff") {
        cfg.basis = BasisMode::Rff;
    } else {
        throw config_error("basis must be random or rff");
    }
    cfg.sigma = get_or<double>(doc, "sigma", 16.0);
    cfg.train.epochs = get_or<int>(doc, "epochs", 10);
    cfg.train.learning_rate = get_or<double>(doc, "lr", 0.01);
    cfg.train.batch_size = get_or<int>(doc, "batch", 32);
    cfg.train.beta = get_or<double>(doc, "beta", 10.0);
    cfg.train.seed = get_or<std::uint64_t>(doc, "seed", 0);
    cfg.train.warm_start = get_or<bool>(doc, "warm_start", false);
    cfg.threads = get_or<int>(doc, "threads", 0);
    cfg.model_out = get_or<std::string>(doc, "model_out", "");
    cfg.record_out = get_or<std::string>(doc, "record_out", "");
    cfg.validate();
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw config_error("cannot open config file: " + path);
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_run_config(text.str());
}

double median_bandwidth(const Dataset& ds, std::size_t max_pairs, SeededRng rng) {
    if (ds.num_samples < 2) {
        throw data_error("median_bandwidth: need at least two samples");
    }
    std::vector<double> dists;
    dists.reserve(max_pairs);
    for (std::size_t t = 0; t < max_pairs; ++t) {
        const auto a = static_cast<std::size_t>(rng.next_double() *
                                                static_cast<double>(ds.num_samples));
        const auto b = static_cast<std::size_t>(rng.next_double() *
                                                static_cast<double>(ds.num_samples));
        if (a == b || a >= ds.num_samples || b >= ds.num_samples) {
            continue;
        }
        const auto qa = learn::quantize_features(ds.sample(a));
        const auto qb = learn::quantize_features(ds.sample(b));
        double sum = 0.0;
        for (std::size_t j = 0; j < qa.size(); ++j) {
            const double d = static_cast<double>(qa[j] - qb[j]);
            sum += d * d;
        }
        dists.push_back(std::sqrt(sum));
    }
    if (dists.empty()) {
        throw data_error("median_bandwidth: no usable sample pairs");
    }
    std::sort(dists.begin(), dists.end());
    const double median = dists[dists.size() / 2];
    if (!(median > 0.0)) {
        throw numeric_error("median_bandwidth: degenerate dataset, zero median distance");
    }
    return median;
}

rff::CorrelatedBasis synthetic_task_basis(rff::Family family, int order, std::size_t dim,
                                          SeededRng rng) {
    if (family == rff::Family::Binary) {
        return rff::random_basis(rff::Family::Binary, 0, 3, dim, rng);
    }
    rff::CorrelatedBasis basis;
    basis.family = rff::Family::Cyclic;
    basis.order = order;
    basis.dim = dim;
    basis.seed = rng.master_seed();
    const CyclicHypervector r = random_cyclic(dim, order, rng.derive(0));
    CyclicHypervector step(dim, order);
    for (int x = 0; x < 3; ++x) {
        for (std::size_t i = 0; i < dim; ++i) {
            step.set_element(i, static_cast<std::uint8_t>(x % order));
        }
        basis.cyclic.push_back(bind(r, step));
    }
    // Provenance: the realized pairwise similarity is the character table of
    // the constant differences.
    const CyclicSimilaritySpec spec(order);
    Matrix target(3, 3);
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            target(static_cast<std::size_t>(a), static_cast<std::size_t>(b)) =
                a == b ? 1.0 : spec.table((a - b + order) % order);
        }
    }
    basis.target = SimilarityTarget::from_matrix(std::move(target));
    return basis;
}

namespace {

struct LoadedData {
    Dataset train;
    Dataset test;
};

LoadedData load_data(const RunConfig& cfg) {
    LoadedData data;
    if (cfg.dataset.kind == "idx") {
        data.train = load_idx(cfg.dataset.train_images, cfg.dataset.train_labels);
        data.test = load_idx(cfg.dataset.test_images, cfg.dataset.test_labels);
    } else if (cfg.dataset.kind == "csv") {
        data.train = load_csv(cfg.dataset.train_csv, cfg.dataset.label_column);
        data.test = load_csv(cfg.dataset.test_csv, cfg.dataset.label_column);
    } else {
        SyntheticTaskSpec spec;
        spec.p = cfg.dataset.p;
        spec.samples = cfg.dataset.train_samples;
        spec.seed = cfg.train.seed + 1;
        data.train = synth_task(spec);
        spec.samples = cfg.dataset.test_samples;
        spec.seed = cfg.train.seed + 2;
        data.test = synth_task(spec);
    }
    data.train.split = "train";
    data.test.split = "test";
    if (data.train.num_features != data.test.num_features) {
        throw data_error("train/test feature count mismatch");
    }
    data.test.classes = data.train.classes = std::max(data.train.classes, data.test.classes);
    return data;
}

rff::CorrelatedBasis build_basis(const RunConfig& cfg, const Dataset& train, std::ostream& log) {
    SeededRng rng(cfg.train.seed);
    if (cfg.dataset.kind == "synthetic") {
        return synthetic_task_basis(cfg.family, cfg.order, cfg.dim, rng.derive(11));
    }
    const std::size_t levels = 256;
    if (cfg.basis == BasisMode::Random) {
        return rff::random_basis(cfg.family, cfg.order, levels, cfg.dim, rng.derive(11));
    }
    double sigma = cfg.sigma;
    if (sigma <= 0.0) {
        sigma = median_bandwidth(train, 1000, rng.derive(12));
        log << "bandwidth heuristic: sigma = " << sigma << "\n";
    }
    std::vector<double> values(levels);
    for (std::size_t i = 0; i < levels; ++i) {
        values[i] = static_cast<double>(i);
    }
    const SimilarityTarget target = rff::rbf_target(values, sigma);
    if (cfg.family == rff::Family::Binary) {
        return rff::sample_correlated_binary(target, cfg.dim, rng.derive(11));
    }
    return rff::sample_correlated_cyclic(target, cfg.dim, cfg.order, rng.derive(11));
}

}  // namespace

RunRecord run_experiment(const RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    // HYPERVSA_THREADS overrides the configured cap.
    const int env_cap = thread_cap_from_env();
    set_thread_cap(env_cap > 0 ? env_cap : cfg.threads);

    json record;
    record["build"] = build_id();
    record["seed"] = cfg.train.seed;

    json config_echo;
    config_echo["dataset_kind"] = cfg.dataset.kind;
    config_echo["family"] = family_name(cfg.family, cfg.order);
    config_echo["paradigm"] = cfg.paradigm == Paradigm::Bundle
                                  ? "bundle"
                                  : (cfg.paradigm == Paradigm::Sgd ? "sgd" : "perceptron");
    config_echo["dim"] = cfg.dim;
    config_echo["basis"] = cfg.basis == BasisMode::Random ? "random" : "rff";
    config_echo["sigma"] = cfg.sigma;
    config_echo["epochs"] = cfg.train.epochs;
    config_echo["lr"] = cfg.train.learning_rate;
    config_echo["batch"] = cfg.train.batch_size;
    config_echo["beta"] = cfg.train.beta;
    config_echo["warm_start"] = cfg.train.warm_start;
    record["config"] = config_echo;

    const double t0 = now_seconds();
    LoadedData data = load_data(cfg);
    log << "loaded " << data.train.num_samples << " train / " << data.test.num_samples
        << " test samples, " << data.train.num_features << " features, " << data.train.classes
        << " classes\n";

    const double t1 = now_seconds();
    rff::CorrelatedBasis basis = build_basis(cfg, data.train, log);
    if (basis.clipped_ratio > 0.05) {
        log << "warning: clipped eigenvalue mass is " << (100.0 * basis.clipped_ratio)
            << "% of the factored target's trace; the target is far from "
               "binary-expressible and realized similarities will deviate\n";
    }
    record["basis_clipped_ratio"] = basis.clipped_ratio;
    const std::string basis_bytes = io::serialize_basis_bytes(basis);
    record["basis_hash"] = io::hash_hex(basis_bytes);

    const double t2 = now_seconds();
    learn::EncodedDataset train_enc = learn::encode_dataset(data.train, basis);
    learn::EncodedDataset test_enc = learn::encode_dataset(data.test, basis);
    const double t3 = now_seconds();
    log << "encoded in " << (t3 - t2) << " s\n";

    const int classes = data.train.classes;
    std::vector<double> per_epoch;
    io::AnyModel model = learn::PrototypeModel{};

    const double t4 = now_seconds();
    if (cfg.paradigm == Paradigm::Bundle) {
        auto proto = learn::bundle_train(train_enc, classes, SeededRng(cfg.train.seed, 99));
        per_epoch.push_back(learn::evaluate(test_enc, proto));
        model = std::move(proto);
    } else {
        const learn::EpochCallback on_epoch = [&](int epoch, const learn::SgdModel& m) {
            const double acc = learn::evaluate(test_enc, m);
            per_epoch.push_back(acc);
            log << "epoch " << (epoch + 1) << ": test accuracy " << acc << "\n";
        };
        if (cfg.paradigm == Paradigm::Perceptron) {
            model = learn::perceptron_train(train_enc, classes, cfg.train, on_epoch);
        } else if (cfg.family == rff::Family::Binary) {
            model = learn::sgd_train_binary(train_enc, classes, cfg.train, on_epoch);
        } else {
            model = learn::sgd_train_cyclic(train_enc, classes, cfg.train,
                                            CyclicSimilaritySpec(cfg.order), on_epoch);
        }
    }
    const double t5 = now_seconds();

    double final_accuracy = 0.0;
    if (std::holds_alternative<learn::PrototypeModel>(model)) {
        final_accuracy = learn::evaluate(test_enc, std::get<learn::PrototypeModel>(model));
    } else {
        final_accuracy = learn::evaluate(test_enc, std::get<learn::SgdModel>(model));
    }

    const std::string model_bytes = io::serialize_model_bytes(model);
    record["model_hash"] = io::hash_hex(model_bytes);
    record["per_epoch_accuracy"] = per_epoch;
    record["final_accuracy"] = final_accuracy;
    record["timings"] = {{"load_s", t1 - t0},
                         {"basis_s", t2 - t1},
                         {"encode_s", t3 - t2},
                         {"train_s", t5 - t4}};

    if (!cfg.model_out.empty()) {
        io::save_model(cfg.model_out, model);
        record["model_file"] = cfg.model_out;
    }

    RunRecord result;
    result.final_accuracy = final_accuracy;
    result.model_hash = record["model_hash"];
    result.json = record.dump(2);
    if (!cfg.record_out.empty()) {
        std::ofstream out(cfg.record_out);
        if (!out) {
            throw data_error("cannot open record file for writing: " + cfg.record_out);
        }
        out << result.json << "\n";
    }
    log << "final accuracy " << final_accuracy << "\n";
    return result;
}

}  // namespace hypervsa::harness
