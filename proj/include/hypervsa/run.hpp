#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "hypervsa/dataset.hpp"
#include "hypervsa/learn.hpp"
#include "hypervsa/rff.hpp"

namespace hypervsa::harness {

enum class Paradigm { Bundle, Sgd, Perceptron };
enum class BasisMode { Random, Rff };

struct DatasetConfig {
    std::string kind;  // "idx" | "csv" | "synthetic"
    // idx
    std::string train_images, train_labels, test_images, test_labels;
    // csv
    std::string train_csv, test_csv;
    int label_column = -1;
    // synthetic
    double p = 0.05;
    std::size_t train_samples = 100000;
    std::size_t test_samples = 20000;
};

struct RunConfig {
    DatasetConfig dataset;
    rff::Family family = rff::Family::Binary;
    int order = 0;  // cyclic order when family == Cyclic
    Paradigm paradigm = Paradigm::Sgd;
    std::size_t dim = 10000;
    BasisMode basis = BasisMode::Rff;
    double sigma = 16.0;
    learn::TrainConfig train;
    int threads = 0;
    std::string model_out;
    std::string record_out;

    void validate() const;
};

// Parses the versioned JSON config document; unknown keys are rejected with
// their location.
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);

struct RunRecord {
    std::string json;  // full record document
    double final_accuracy = 0.0;
    std::string model_hash;
};

// init-basis -> encode -> train -> eval; deterministic for a fixed seed.
RunRecord run_experiment(const RunConfig& config, std::ostream& log);

// Family helpers shared with the CLI ("binary", "g2", "g4", "g8", "g16").
std::string family_name(rff::Family family, int order);
void parse_family(const std::string& name, rff::Family& family, int& order);

// Basis used by the synthetic task: three i.i.d. random hypervectors for the
// binary family; r bound with x copies of the all-ones vector for cyclic
// order n (pairwise similarity exactly cos(2 pi (x-y)/n)).
rff::CorrelatedBasis synthetic_task_basis(rff::Family family, int order, std::size_t dim,
                                          SeededRng rng);

// Median pairwise distance between quantized feature rows (the standard
// kernel bandwidth heuristic). The per-value RBF factors multiply into the
// whole-sample RBF kernel under binding, so the bandwidth has to live on the
// scale of whole-sample distances for encodings to carry class structure;
// configs request this by setting sigma <= 0.
double median_bandwidth(const Dataset& ds, std::size_t max_pairs, SeededRng rng);

std::string build_id();

}  // namespace hypervsa::harness
