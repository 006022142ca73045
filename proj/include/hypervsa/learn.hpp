#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "hypervsa/encode.hpp"
#include "hypervsa/ops.hpp"
#include "hypervsa/rng.hpp"

namespace hypervsa::learn {

// Per-class bundled representatives.
struct PrototypeModel {
    rff::Family family = rff::Family::Binary;
    int order = 0;
    std::size_t dim = 0;
    std::vector<BinaryHypervector> binary;
    std::vector<CyclicHypervector> cyclic;
    std::uint64_t seed = 0;

    [[nodiscard]] int classes() const {
        return static_cast<int>(family == rff::Family::Binary ? binary.size() : cyclic.size());
    }
};

struct TrainConfig {
    double learning_rate = 0.01;
    int epochs = 10;
    int batch_size = 32;
    std::uint64_t seed = 0;
    double beta = 10.0;
    bool warm_start = false;

    void validate() const;
};

// Linear classifier with real shadow weights. The effective weights seen at
// inference are the projection of the shadow: sign for the binary family,
// round-to-lattice mod n for the cyclic family, identity for the perceptron.
struct SgdModel {
    enum class Paradigm : std::uint8_t { SgdBinary = 1, SgdCyclic = 2, Perceptron = 3 };

    Paradigm paradigm = Paradigm::SgdBinary;
    rff::Family family = rff::Family::Binary;
    int order = 0;
    int classes = 0;
    std::size_t dim = 0;
    std::vector<double> shadow;  // classes x dim, row-major
    double beta = 10.0;
    std::uint64_t seed = 0;

    [[nodiscard]] std::span<const double> row(int c) const {
        return {shadow.data() + static_cast<std::size_t>(c) * dim, dim};
    }
    // Projected weights: {-1,+1} signs (binary) or lattice elements (cyclic).
    [[nodiscard]] std::vector<std::int8_t> effective_signs() const;
    [[nodiscard]] std::vector<std::uint8_t> effective_lattice() const;
};

// Single-pass bundling: one integer-vote pass over the encodings, one bundle
// per class. Ties consume one draw per tied coordinate from a per-class
// stream derived from rng.
PrototypeModel bundle_train(const EncodedDataset& data, int classes, SeededRng rng);

// Streaming forms for callers that cannot (or should not) materialize the
// whole encoded set; each index is requested exactly once, in order.
PrototypeModel bundle_train_stream(
    std::size_t count, const std::function<const BinaryHypervector&(std::size_t)>& provider,
    std::span<const int> labels, int classes, SeededRng rng);
PrototypeModel bundle_train_stream(
    std::size_t count, const std::function<const CyclicHypervector&(std::size_t)>& provider,
    std::span<const int> labels, int classes, int order, SeededRng rng);

// beta-scaled class logits of an SGD/perceptron model.
std::vector<double> sgd_logits(const SgdModel& model, const BinaryHypervector& x);
std::vector<double> sgd_logits(const SgdModel& model, const CyclicHypervector& x);

// Per-sample analytic gradient of the softmax cross-entropy loss w.r.t. the
// shadow weights (straight-through masked for the binary family); exposed for
// the finite-difference oracles.
std::vector<double> sgd_gradient(const SgdModel& model, const BinaryHypervector& x, int label);
std::vector<double> sgd_gradient(const SgdModel& model, const CyclicHypervector& x, int label);

// Continuous relaxations used by the gradient checks: the binary forward
// replaces sgn by hard-tanh (identity inside the straight-through window);
// the cyclic forward evaluates the cosine objective at the raw shadow
// weights instead of the rounded lattice.
double sgd_relaxed_loss(const SgdModel& model, const BinaryHypervector& x, int label);
std::vector<double> sgd_relaxed_gradient(const SgdModel& model, const BinaryHypervector& x,
                                         int label);
double sgd_relaxed_loss(const SgdModel& model, const CyclicHypervector& x, int label);
std::vector<double> sgd_relaxed_gradient(const SgdModel& model, const CyclicHypervector& x,
                                         int label);

int predict(const BinaryHypervector& x, const PrototypeModel& model);
int predict(const CyclicHypervector& x, const PrototypeModel& model,
            const CyclicSimilaritySpec& spec);
int predict(const BinaryHypervector& x, const SgdModel& model);
int predict(const CyclicHypervector& x, const SgdModel& model);

using EpochCallback = std::function<void(int epoch, const SgdModel& model)>;

SgdModel sgd_train_binary(const EncodedDataset& data, int classes, const TrainConfig& cfg,
                          const EpochCallback& on_epoch = nullptr);
SgdModel sgd_train_cyclic(const EncodedDataset& data, int classes, const TrainConfig& cfg,
                          const CyclicSimilaritySpec& spec, const EpochCallback& on_epoch = nullptr);
SgdModel perceptron_train(const EncodedDataset& data, int classes, const TrainConfig& cfg,
                          const EpochCallback& on_epoch = nullptr);

double evaluate(const EncodedDataset& data, const PrototypeModel& model);
double evaluate(const EncodedDataset& data, const SgdModel& model);

}  // namespace hypervsa::learn
