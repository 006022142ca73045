#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hypervsa/rng.hpp"

namespace hypervsa::harness {

// Feature matrix plus labels. Loaded features are normalized into [-1, 1];
// pre_indexed datasets (the synthetic task) store small integer indices that
// feed the encoder directly instead of going through quantization.
struct Dataset {
    std::string name;
    std::size_t num_samples = 0;
    std::size_t num_features = 0;
    std::vector<double> features;  // row-major
    std::vector<int> labels;
    int classes = 0;
    std::string split;               // "train" | "test"
    bool pre_indexed = false;
    std::vector<int> label_mapping;  // original label for each remapped index (CSV loads)

    [[nodiscard]] std::span<const double> sample(std::size_t i) const {
        return {features.data() + i * num_features, num_features};
    }
};

// IDX ingestion (big-endian dims, magic 0x803 images / 0x801 labels); pixels
// map onto [-1, 1] via 2 p / 255 - 1.
Dataset load_idx(const std::string& images_path, const std::string& labels_path);

// Numeric CSV with one label column (-1 = last). Feature columns outside
// [-1, 1] are min-max rescaled per column; labels remapped to contiguous
// 0-based indices with the mapping recorded.
Dataset load_csv(const std::string& path, int label_column);

struct SyntheticTaskSpec {
    double p = 0.05;
    std::size_t samples = 0;
    std::uint64_t seed = 0;

    void validate() const;
};

// The three-symbol task: P(x,y) = 1/9 + 2p on the diagonal, 1/9 - p off it.
Dataset synth_task(const SyntheticTaskSpec& spec);

// Closed-form Bayes-optimal accuracy: 3 (1/9 + 2p) = 1/3 + 6p.
double synth_bayes_accuracy(double p);

}  // namespace hypervsa::harness
