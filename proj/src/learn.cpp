#include "hypervsa/learn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "hypervsa/errors.hpp"

namespace hypervsa::learn {

namespace {

void check_labels(std::span<const int> labels, int classes) {
    if (classes < 1) {
        throw std::invalid_argument("class count must be >= 1");
    }
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0 || labels[i] >= classes) {
            throw data_error("label " + std::to_string(labels[i]) + " at sample " +
                             std::to_string(i) + " outside [0, " + std::to_string(classes) + ")");
        }
    }
}

void check_class_coverage(std::span<const int> labels, int classes) {
    std::vector<std::size_t> counts(static_cast<std::size_t>(classes), 0);
    for (int label : labels) {
        ++counts[static_cast<std::size_t>(label)];
    }
    for (int c = 0; c < classes; ++c) {
        if (counts[static_cast<std::size_t>(c)] == 0) {
            throw data_error("bundle_train: class " + std::to_string(c) +
                             " has no training samples");
        }
    }
}

std::vector<std::size_t> shuffled_order(std::size_t count, SeededRng rng) {
    std::vector<std::size_t> order(count);
    for (std::size_t i = 0; i < count; ++i) {
        order[i] = i;
    }
    for (std::size_t i = count; i > 1; --i) {
        auto j = static_cast<std::size_t>(rng.next_double() * static_cast<double>(i));
        j = std::min(j, i - 1);
        std::swap(order[i - 1], order[j]);
    }
    return order;
}

void unpack_signs(const BinaryHypervector& v, std::int8_t* out) {
    const auto words = v.words();
    const std::size_t dim = v.dim();
    for (std::size_t i = 0; i < dim; ++i) {
        out[i] = ((words[i / 64] >> (i % 64)) & 1ULL) ? 1 : -1;
    }
}

// Numerically stable softmax written in place.
void softmax_inplace(std::span<double> logits) {
    double top = logits[0];
    for (double v : logits) {
        top = std::max(top, v);
    }
    double sum = 0.0;
    for (double& v : logits) {
        v = std::exp(v - top);
        sum += v;
    }
    for (double& v : logits) {
        v /= sum;
    }
}

int argmax_lowest(std::span<const double> scores) {
    int best = 0;
    for (int c = 1; c < static_cast<int>(scores.size()); ++c) {
        if (scores[static_cast<std::size_t>(c)] > scores[static_cast<std::size_t>(best)]) {
            best = c;
        }
    }
    return best;
}

}  // namespace

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0)) {
        throw config_error("train config: learning rate must be positive");
    }
    if (epochs < 0) {
        throw config_error("train config: epochs must be >= 0");
    }
    if (batch_size < 1) {
        throw config_error("train config: batch size must be >= 1");
    }
    if (!(beta > 0.0)) {
        throw config_error("train config: beta must be positive");
    }
}

std::vector<std::int8_t> SgdModel::effective_signs() const {
    std::vector<std::int8_t> signs(shadow.size());
    for (std::size_t i = 0; i < shadow.size(); ++i) {
        signs[i] = shadow[i] >= 0.0 ? 1 : -1;  // sgn(0) := +1
    }
    return signs;
}

std::vector<std::uint8_t> SgdModel::effective_lattice() const {
    std::vector<std::uint8_t> lattice(shadow.size());
    const auto n = static_cast<double>(order);
    for (std::size_t i = 0; i < shadow.size(); ++i) {
        const double rounded = std::floor(shadow[i] + 0.5);  // round half-up
        double reduced = std::fmod(rounded, n);
        if (reduced < 0.0) {
            reduced += n;
        }
        lattice[i] = static_cast<std::uint8_t>(reduced);
    }
    return lattice;
}

// --- bundling ---

PrototypeModel bundle_train_stream(
    std::size_t count, const std::function<const BinaryHypervector&(std::size_t)>& provider,
    std::span<const int> labels, int classes, SeededRng rng) {
    if (count == 0) {
        throw data_error("bundle_train: empty training set");
    }
    if (labels.size() != count) {
        throw std::invalid_argument("bundle_train: label count mismatch");
    }
    check_labels(labels, classes);
    check_class_coverage(labels, classes);

    const BinaryHypervector& first = provider(0);
    const std::size_t dim = first.dim();
    std::vector<BinaryVoteAccumulator> accs(static_cast<std::size_t>(classes),
                                            BinaryVoteAccumulator(dim));
    accs[static_cast<std::size_t>(labels[0])].add(first);
    for (std::size_t i = 1; i < count; ++i) {
        accs[static_cast<std::size_t>(labels[i])].add(provider(i));
    }

    PrototypeModel model;
    model.family = rff::Family::Binary;
    model.order = 0;
    model.dim = dim;
    model.seed = rng.master_seed();
    model.binary.reserve(static_cast<std::size_t>(classes));
    for (int c = 0; c < classes; ++c) {
        model.binary.push_back(
            accs[static_cast<std::size_t>(c)].finalize(rng.derive(static_cast<std::uint64_t>(c))));
    }
    return model;
}

PrototypeModel bundle_train_stream(
    std::size_t count, const std::function<const CyclicHypervector&(std::size_t)>& provider,
    std::span<const int> labels, int classes, int order, SeededRng rng) {
    if (count == 0) {
        throw data_error("bundle_train: empty training set");
    }
    if (labels.size() != count) {
        throw std::invalid_argument("bundle_train: label count mismatch");
    }
    check_labels(labels, classes);
    check_class_coverage(labels, classes);

    const CyclicHypervector& first = provider(0);
    const std::size_t dim = first.dim();
    std::vector<CyclicVoteAccumulator> accs(static_cast<std::size_t>(classes),
                                            CyclicVoteAccumulator(dim, order));
    accs[static_cast<std::size_t>(labels[0])].add(first);
    for (std::size_t i = 1; i < count; ++i) {
        accs[static_cast<std::size_t>(labels[i])].add(provider(i));
    }

    const CyclicSimilaritySpec spec(order);
    PrototypeModel model;
    model.family = rff::Family::Cyclic;
    model.order = order;
    model.dim = dim;
    model.seed = rng.master_seed();
    model.cyclic.reserve(static_cast<std::size_t>(classes));
    for (int c = 0; c < classes; ++c) {
        model.cyclic.push_back(accs[static_cast<std::size_t>(c)].finalize(
            spec, rng.derive(static_cast<std::uint64_t>(c))));
    }
    return model;
}

PrototypeModel bundle_train(const EncodedDataset& data, int classes, SeededRng rng) {
    if (data.family == rff::Family::Binary) {
        return bundle_train_stream(
            data.size(),
            [&](std::size_t i) -> const BinaryHypervector& { return data.binary[i]; },
            data.labels, classes, rng);
    }
    return bundle_train_stream(
        data.size(), [&](std::size_t i) -> const CyclicHypervector& { return data.cyclic[i]; },
        data.labels, classes, data.order, rng);
}

// --- prediction ---

int predict(const BinaryHypervector& x, const PrototypeModel& model) {
    if (model.family != rff::Family::Binary || x.dim() != model.dim) {
        throw std::invalid_argument("predict: model/input family or dimension mismatch");
    }
    std::vector<double> sims(model.binary.size());
    for (std::size_t c = 0; c < model.binary.size(); ++c) {
        sims[c] = similarity(x, model.binary[c]);
    }
    return argmax_lowest(sims);
}

int predict(const CyclicHypervector& x, const PrototypeModel& model,
            const CyclicSimilaritySpec& spec) {
    if (model.family != rff::Family::Cyclic || x.dim() != model.dim ||
        x.order() != model.order) {
        throw std::invalid_argument("predict: model/input family or dimension mismatch");
    }
    std::vector<double> sims(model.cyclic.size());
    for (std::size_t c = 0; c < model.cyclic.size(); ++c) {
        sims[c] = similarity(x, model.cyclic[c], spec);
    }
    return argmax_lowest(sims);
}

std::vector<double> sgd_logits(const SgdModel& model, const BinaryHypervector& x) {
    if (model.family != rff::Family::Binary || x.dim() != model.dim) {
        throw std::invalid_argument("sgd_logits: family or dimension mismatch");
    }
    std::vector<double> logits(static_cast<std::size_t>(model.classes), 0.0);
    if (model.paradigm == SgdModel::Paradigm::Perceptron) {
        // Raw real logits.
        for (int c = 0; c < model.classes; ++c) {
            const auto w = model.row(c);
            double sum = 0.0;
            for (std::size_t i = 0; i < model.dim; ++i) {
                sum += (x.bit(i) ? 1.0 : -1.0) * w[i];
            }
            logits[static_cast<std::size_t>(c)] = sum;
        }
        return logits;
    }
    const double scale = model.beta / static_cast<double>(model.dim);
    for (int c = 0; c < model.classes; ++c) {
        const auto w = model.row(c);
        long long dot = 0;
        for (std::size_t i = 0; i < model.dim; ++i) {
            const int xs = x.bit(i) ? 1 : -1;
            const int ws = w[i] >= 0.0 ? 1 : -1;
            dot += xs * ws;
        }
        logits[static_cast<std::size_t>(c)] = scale * static_cast<double>(dot);
    }
    return logits;
}

std::vector<double> sgd_logits(const SgdModel& model, const CyclicHypervector& x) {
    if (model.family != rff::Family::Cyclic || x.dim() != model.dim ||
        x.order() != model.order) {
        throw std::invalid_argument("sgd_logits: family, order, or dimension mismatch");
    }
    const int n = model.order;
    std::vector<double> cos_table(static_cast<std::size_t>(n));
    for (int d = 0; d < n; ++d) {
        cos_table[static_cast<std::size_t>(d)] = std::cos(2.0 * std::numbers::pi * d / n);
    }
    const auto lattice = model.effective_lattice();
    const double scale = model.beta / static_cast<double>(model.dim);
    std::vector<double> logits(static_cast<std::size_t>(model.classes), 0.0);
    const auto xe = x.elements();
    for (int c = 0; c < model.classes; ++c) {
        const std::uint8_t* w = lattice.data() + static_cast<std::size_t>(c) * model.dim;
        double sum = 0.0;
        for (std::size_t i = 0; i < model.dim; ++i) {
            int d = xe[i] - w[i];
            if (d < 0) {
                d += n;
            }
            sum += cos_table[static_cast<std::size_t>(d)];
        }
        logits[static_cast<std::size_t>(c)] = scale * sum;
    }
    return logits;
}

std::vector<double> sgd_gradient(const SgdModel& model, const BinaryHypervector& x, int label) {
    auto logits = sgd_logits(model, x);
    softmax_inplace(logits);
    logits[static_cast<std::size_t>(label)] -= 1.0;
    std::vector<double> grad(model.shadow.size(), 0.0);
    const double scale = model.beta / static_cast<double>(model.dim);
    for (int c = 0; c < model.classes; ++c) {
        const double coeff = logits[static_cast<std::size_t>(c)] * scale;
        const auto w = model.row(c);
        double* g = grad.data() + static_cast<std::size_t>(c) * model.dim;
        for (std::size_t i = 0; i < model.dim; ++i) {
            if (std::abs(w[i]) < 1.0) {  // straight-through window
                g[i] = coeff * (x.bit(i) ? 1.0 : -1.0);
            }
        }
    }
    return grad;
}

std::vector<double> sgd_gradient(const SgdModel& model, const CyclicHypervector& x, int label) {
    auto logits = sgd_logits(model, x);
    softmax_inplace(logits);
    logits[static_cast<std::size_t>(label)] -= 1.0;
    const int n = model.order;
    std::vector<double> sin_table(static_cast<std::size_t>(n));
    for (int d = 0; d < n; ++d) {
        sin_table[static_cast<std::size_t>(d)] = std::sin(2.0 * std::numbers::pi * d / n);
    }
    const auto lattice = model.effective_lattice();
    const double scale =
        model.beta * 2.0 * std::numbers::pi / (static_cast<double>(n) * static_cast<double>(model.dim));
    std::vector<double> grad(model.shadow.size(), 0.0);
    const auto xe = x.elements();
    for (int c = 0; c < model.classes; ++c) {
        const double coeff = logits[static_cast<std::size_t>(c)] * scale;
        const std::uint8_t* w = lattice.data() + static_cast<std::size_t>(c) * model.dim;
        double* g = grad.data() + static_cast<std::size_t>(c) * model.dim;
        for (std::size_t i = 0; i < model.dim; ++i) {
            int d = xe[i] - w[i];
            if (d < 0) {
                d += n;
            }
            g[i] = coeff * sin_table[static_cast<std::size_t>(d)];
        }
    }
    return grad;
}

namespace {

std::vector<double> relaxed_logits(const SgdModel& model, const BinaryHypervector& x) {
    std::vector<double> logits(static_cast<std::size_t>(model.classes), 0.0);
    const double scale = model.beta / static_cast<double>(model.dim);
    for (int c = 0; c < model.classes; ++c) {
        const auto w = model.row(c);
        double sum = 0.0;
        for (std::size_t i = 0; i < model.dim; ++i) {
            const double clamped = std::max(-1.0, std::min(1.0, w[i]));
            sum += (x.bit(i) ? 1.0 : -1.0) * clamped;
        }
        logits[static_cast<std::size_t>(c)] = scale * sum;
    }
    return logits;
}

std::vector<double> relaxed_logits(const SgdModel& model, const CyclicHypervector& x) {
    std::vector<double> logits(static_cast<std::size_t>(model.classes), 0.0);
    const double scale = model.beta / static_cast<double>(model.dim);
    const double step = 2.0 * std::numbers::pi / model.order;
    const auto xe = x.elements();
    for (int c = 0; c < model.classes; ++c) {
        const auto w = model.row(c);
        double sum = 0.0;
        for (std::size_t i = 0; i < model.dim; ++i) {
            sum += std::cos(step * (static_cast<double>(xe[i]) - w[i]));
        }
        logits[static_cast<std::size_t>(c)] = scale * sum;
    }
    return logits;
}

double cross_entropy_of(std::vector<double> logits, int label) {
    softmax_inplace(logits);
    return -std::log(std::max(logits[static_cast<std::size_t>(label)], 1e-300));
}

}  // namespace

double sgd_relaxed_loss(const SgdModel& model, const BinaryHypervector& x, int label) {
    return cross_entropy_of(relaxed_logits(model, x), label);
}

std::vector<double> sgd_relaxed_gradient(const SgdModel& model, const BinaryHypervector& x,
                                         int label) {
    auto logits = relaxed_logits(model, x);
    softmax_inplace(logits);
    logits[static_cast<std::size_t>(label)] -= 1.0;
    std::vector<double> grad(model.shadow.size(), 0.0);
    const double scale = model.beta / static_cast<double>(model.dim);
    for (int c = 0; c < model.classes; ++c) {
        const double coeff = logits[static_cast<std::size_t>(c)] * scale;
        const auto w = model.row(c);
        double* g = grad.data() + static_cast<std::size_t>(c) * model.dim;
        for (std::size_t i = 0; i < model.dim; ++i) {
            if (std::abs(w[i]) < 1.0) {
                g[i] = coeff * (x.bit(i) ? 1.0 : -1.0);
            }
        }
    }
    return grad;
}

double sgd_relaxed_loss(const SgdModel& model, const CyclicHypervector& x, int label) {
    return cross_entropy_of(relaxed_logits(model, x), label);
}

std::vector<double> sgd_relaxed_gradient(const SgdModel& model, const CyclicHypervector& x,
                                         int label) {
    auto logits = relaxed_logits(model, x);
    softmax_inplace(logits);
    logits[static_cast<std::size_t>(label)] -= 1.0;
    const int n = model.order;
    const double step = 2.0 * std::numbers::pi / n;
    const double scale =
        model.beta * 2.0 * std::numbers::pi / (static_cast<double>(n) * static_cast<double>(model.dim));
    std::vector<double> grad(model.shadow.size(), 0.0);
    const auto xe = x.elements();
    for (int c = 0; c < model.classes; ++c) {
        const double coeff = logits[static_cast<std::size_t>(c)] * scale;
        const auto w = model.row(c);
        double* g = grad.data() + static_cast<std::size_t>(c) * model.dim;
        for (std::size_t i = 0; i < model.dim; ++i) {
            g[i] = coeff * std::sin(step * (static_cast<double>(xe[i]) - w[i]));
        }
    }
    return grad;
}

int predict(const BinaryHypervector& x, const SgdModel& model) {
    const auto logits = sgd_logits(model, x);
    return argmax_lowest(logits);
}

int predict(const CyclicHypervector& x, const SgdModel& model) {
    const auto logits = sgd_logits(model, x);
    return argmax_lowest(logits);
}

// --- SGD training ---

namespace {

struct BatchBuffers {
    std::vector<std::int8_t> signs;       // batch x dim (binary)
    std::vector<std::uint8_t> elements;   // batch x dim (cyclic)
    std::vector<double> logits;           // batch x classes
    std::vector<int> batch_labels;
};

}  // namespace

SgdModel sgd_train_binary(const EncodedDataset& data, int classes, const TrainConfig& cfg,
                          const EpochCallback& on_epoch) {
    cfg.validate();
    if (data.family != rff::Family::Binary) {
        throw std::invalid_argument("sgd_train_binary: binary encodings required");
    }
    if (data.size() == 0) {
        throw data_error("sgd_train_binary: empty training set");
    }
    check_labels(data.labels, classes);

    const std::size_t dim = data.dim;
    const std::size_t samples = data.size();
    SeededRng rng(cfg.seed);

    SgdModel model;
    model.paradigm = SgdModel::Paradigm::SgdBinary;
    model.family = rff::Family::Binary;
    model.order = 0;
    model.classes = classes;
    model.dim = dim;
    model.beta = cfg.beta;
    model.seed = cfg.seed;
    model.shadow.assign(static_cast<std::size_t>(classes) * dim, 0.0);

    if (cfg.warm_start) {
        // Class vote sums rescaled into [-0.9, 0.9].
        std::vector<double> votes(model.shadow.size(), 0.0);
        for (std::size_t i = 0; i < samples; ++i) {
            double* row = votes.data() + static_cast<std::size_t>(data.labels[i]) * dim;
            const auto words = data.binary[i].words();
            for (std::size_t j = 0; j < dim; ++j) {
                row[j] += ((words[j / 64] >> (j % 64)) & 1ULL) ? 1.0 : -1.0;
            }
        }
        double peak = 0.0;
        for (double v : votes) {
            peak = std::max(peak, std::abs(v));
        }
        const double scale = peak > 0.0 ? 0.9 / peak : 0.0;
        for (std::size_t i = 0; i < votes.size(); ++i) {
            model.shadow[i] = votes[i] * scale;
        }
    } else {
        SeededRng init_rng = rng.derive(0);
        for (auto& w : model.shadow) {
            w = init_rng.next_double() - 0.5;
        }
    }

    const auto batch = static_cast<std::size_t>(cfg.batch_size);
    BatchBuffers buf;
    buf.signs.resize(batch * dim);
    std::vector<std::int8_t> w_signs(model.shadow.size());

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        const auto order = shuffled_order(samples, rng.derive(1000 + static_cast<std::uint64_t>(epoch)));
        for (std::size_t start = 0; start < samples; start += batch) {
            const std::size_t b = std::min(batch, samples - start);
            buf.batch_labels.resize(b);
            buf.logits.assign(b * static_cast<std::size_t>(classes), 0.0);

            for (std::size_t i = 0; i < model.shadow.size(); ++i) {
                w_signs[i] = model.shadow[i] >= 0.0 ? 1 : -1;
            }

#pragma omp parallel for schedule(static)
            for (long long s = 0; s < static_cast<long long>(b); ++s) {
                const std::size_t sample = order[start + static_cast<std::size_t>(s)];
                std::int8_t* xs = buf.signs.data() + static_cast<std::size_t>(s) * dim;
                unpack_signs(data.binary[sample], xs);
                double* lg = buf.logits.data() + static_cast<std::size_t>(s) * classes;
                // Training objective is cross-entropy on the raw binarized
                // sums O = X sgn(W) (the beta-scaled logits with beta = D):
                // the update magnitude is then dimension-free and lr = 0.01
                // moves weights across the sign barrier in a realistic number
                // of steps. Predictions are invariant to the logit scale.
                for (int c = 0; c < classes; ++c) {
                    const std::int8_t* ws = w_signs.data() + static_cast<std::size_t>(c) * dim;
                    long long dot = 0;
                    for (std::size_t i = 0; i < dim; ++i) {
                        dot += xs[i] * ws[i];
                    }
                    lg[c] = static_cast<double>(dot);
                }
            }
            for (std::size_t s = 0; s < b; ++s) {
                buf.batch_labels[s] = data.labels[order[start + s]];
                softmax_inplace({buf.logits.data() + s * static_cast<std::size_t>(classes),
                                 static_cast<std::size_t>(classes)});
                buf.logits[s * static_cast<std::size_t>(classes) +
                           static_cast<std::size_t>(buf.batch_labels[s])] -= 1.0;
            }

            // dL/dW_ci = mean_s coeff_cs * x_si inside the straight-through
            // window. Columns update in parallel; the inner sample loop runs
            // in fixed order.
            const double step_scale = cfg.learning_rate / static_cast<double>(b);
#pragma omp parallel for schedule(static)
            for (long long i = 0; i < static_cast<long long>(dim); ++i) {
                for (int c = 0; c < classes; ++c) {
                    double g = 0.0;
                    for (std::size_t s = 0; s < b; ++s) {
                        g += buf.logits[s * static_cast<std::size_t>(classes) +
                                        static_cast<std::size_t>(c)] *
                             buf.signs[s * dim + static_cast<std::size_t>(i)];
                    }
                    double& w = model.shadow[static_cast<std::size_t>(c) * dim +
                                             static_cast<std::size_t>(i)];
                    if (std::abs(w) < 1.0) {
                        w -= step_scale * g;
                    }
                }
            }
        }
        if (on_epoch) {
            on_epoch(epoch, model);
        }
    }
    return model;
}

SgdModel sgd_train_cyclic(const EncodedDataset& data, int classes, const TrainConfig& cfg,
                          const CyclicSimilaritySpec& spec, const EpochCallback& on_epoch) {
    cfg.validate();
    if (data.family != rff::Family::Cyclic) {
        throw std::invalid_argument("sgd_train_cyclic: cyclic encodings required");
    }
    if (spec.order() != data.order) {
        throw std::invalid_argument("sgd_train_cyclic: spec order does not match encodings");
    }
    if (data.size() == 0) {
        throw data_error("sgd_train_cyclic: empty training set");
    }
    check_labels(data.labels, classes);

    const std::size_t dim = data.dim;
    const std::size_t samples = data.size();
    const int n = data.order;
    SeededRng rng(cfg.seed);

    SgdModel model;
    model.paradigm = SgdModel::Paradigm::SgdCyclic;
    model.family = rff::Family::Cyclic;
    model.order = n;
    model.classes = classes;
    model.dim = dim;
    model.beta = cfg.beta;
    model.seed = cfg.seed;
    model.shadow.assign(static_cast<std::size_t>(classes) * dim, 0.0);

    if (cfg.warm_start) {
        const PrototypeModel protos = bundle_train(data, classes, rng.derive(7));
        for (int c = 0; c < classes; ++c) {
            const auto elems = protos.cyclic[static_cast<std::size_t>(c)].elements();
            double* row = model.shadow.data() + static_cast<std::size_t>(c) * dim;
            for (std::size_t i = 0; i < dim; ++i) {
                row[i] = static_cast<double>(elems[i]);
            }
        }
    } else {
        // Continuous uniform shadow on [0, n): the projected lattice is still
        // uniform over the symbols, but rounding boundaries start at random
        // distances so gradients can move the effective weights early.
        SeededRng init_rng = rng.derive(0);
        for (auto& w : model.shadow) {
            w = init_rng.next_double() * n;
        }
    }

    std::vector<double> cos_table(static_cast<std::size_t>(n));
    std::vector<double> sin_table(static_cast<std::size_t>(n));
    for (int d = 0; d < n; ++d) {
        cos_table[static_cast<std::size_t>(d)] = std::cos(2.0 * std::numbers::pi * d / n);
        sin_table[static_cast<std::size_t>(d)] = std::sin(2.0 * std::numbers::pi * d / n);
    }

    const auto batch = static_cast<std::size_t>(cfg.batch_size);
    BatchBuffers buf;
    buf.elements.resize(batch * dim);
    std::vector<std::uint8_t> w_eff(model.shadow.size());

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        const auto order = shuffled_order(samples, rng.derive(1000 + static_cast<std::uint64_t>(epoch)));
        for (std::size_t start = 0; start < samples; start += batch) {
            const std::size_t b = std::min(batch, samples - start);
            buf.batch_labels.resize(b);
            buf.logits.assign(b * static_cast<std::size_t>(classes), 0.0);

            // Forward pass and gradients both evaluate at the projected
            // lattice weights; the shadow only accumulates updates.
            const auto eff = model.effective_lattice();
            std::copy(eff.begin(), eff.end(), w_eff.begin());

#pragma omp parallel for schedule(static)
            for (long long s = 0; s < static_cast<long long>(b); ++s) {
                const std::size_t sample = order[start + static_cast<std::size_t>(s)];
                std::uint8_t* xe = buf.elements.data() + static_cast<std::size_t>(s) * dim;
                const auto src = data.cyclic[sample].elements();
                std::copy(src.begin(), src.end(), xe);
                double* lg = buf.logits.data() + static_cast<std::size_t>(s) * classes;
                // Raw cosine sums (beta = D), matching the binary trainer's
                // temperature so lr moves the lattice.
                for (int c = 0; c < classes; ++c) {
                    const std::uint8_t* w = w_eff.data() + static_cast<std::size_t>(c) * dim;
                    double sum = 0.0;
                    for (std::size_t i = 0; i < dim; ++i) {
                        int d = xe[i] - w[i];
                        if (d < 0) {
                            d += n;
                        }
                        sum += cos_table[static_cast<std::size_t>(d)];
                    }
                    lg[c] = sum;
                }
            }
            for (std::size_t s = 0; s < b; ++s) {
                buf.batch_labels[s] = data.labels[order[start + s]];
                softmax_inplace({buf.logits.data() + s * static_cast<std::size_t>(classes),
                                 static_cast<std::size_t>(classes)});
                buf.logits[s * static_cast<std::size_t>(classes) +
                           static_cast<std::size_t>(buf.batch_labels[s])] -= 1.0;
            }

            const double step_scale = cfg.learning_rate * 2.0 * std::numbers::pi /
                                      (static_cast<double>(n) * static_cast<double>(b));
#pragma omp parallel for schedule(static)
            for (long long i = 0; i < static_cast<long long>(dim); ++i) {
                for (int c = 0; c < classes; ++c) {
                    const std::uint8_t w = w_eff[static_cast<std::size_t>(c) * dim +
                                                 static_cast<std::size_t>(i)];
                    double g = 0.0;
                    for (std::size_t s = 0; s < b; ++s) {
                        int d = buf.elements[s * dim + static_cast<std::size_t>(i)] - w;
                        if (d < 0) {
                            d += n;
                        }
                        g += buf.logits[s * static_cast<std::size_t>(classes) +
                                        static_cast<std::size_t>(c)] *
                             sin_table[static_cast<std::size_t>(d)];
                    }
                    model.shadow[static_cast<std::size_t>(c) * dim + static_cast<std::size_t>(i)] -=
                        step_scale * g;
                }
            }
        }
        // Wrap the shadow into [0, n); the objective is n-periodic so the
        // projected weights and gradients are unchanged.
        for (auto& w : model.shadow) {
            w = std::fmod(w, static_cast<double>(n));
            if (w < 0.0) {
                w += static_cast<double>(n);
            }
        }
        if (on_epoch) {
            on_epoch(epoch, model);
        }
    }
    return model;
}

SgdModel perceptron_train(const EncodedDataset& data, int classes, const TrainConfig& cfg,
                          const EpochCallback& on_epoch) {
    cfg.validate();
    if (data.family != rff::Family::Binary) {
        throw std::invalid_argument("perceptron_train: binary encodings required");
    }
    if (data.size() == 0) {
        throw data_error("perceptron_train: empty training set");
    }
    check_labels(data.labels, classes);

    const std::size_t dim = data.dim;
    const std::size_t samples = data.size();
    SeededRng rng(cfg.seed);

    SgdModel model;
    model.paradigm = SgdModel::Paradigm::Perceptron;
    model.family = rff::Family::Binary;
    model.order = 0;
    model.classes = classes;
    model.dim = dim;
    model.beta = cfg.beta;
    model.seed = cfg.seed;
    model.shadow.assign(static_cast<std::size_t>(classes) * dim, 0.0);

    std::vector<std::int8_t> xs(dim);
    std::vector<double> logits(static_cast<std::size_t>(classes));
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        const auto order = shuffled_order(samples, rng.derive(1000 + static_cast<std::uint64_t>(epoch)));
        for (std::size_t idx = 0; idx < samples; ++idx) {
            const std::size_t sample = order[idx];
            unpack_signs(data.binary[sample], xs.data());
            for (int c = 0; c < classes; ++c) {
                const auto w = model.row(c);
                double sum = 0.0;
                for (std::size_t i = 0; i < dim; ++i) {
                    sum += static_cast<double>(xs[i]) * w[i];
                }
                logits[static_cast<std::size_t>(c)] = sum;
            }
            const int pred = argmax_lowest(logits);
            const int truth = data.labels[sample];
            if (pred != truth) {
                double* wy = model.shadow.data() + static_cast<std::size_t>(truth) * dim;
                double* wp = model.shadow.data() + static_cast<std::size_t>(pred) * dim;
                for (std::size_t i = 0; i < dim; ++i) {
                    const double x = static_cast<double>(xs[i]) * cfg.learning_rate;
                    wy[i] += x;
                    wp[i] -= x;
                }
            }
        }
        if (on_epoch) {
            on_epoch(epoch, model);
        }
    }
    return model;
}

// --- evaluation ---

double evaluate(const EncodedDataset& data, const PrototypeModel& model) {
    if (data.size() == 0) {
        throw data_error("evaluate: empty dataset");
    }
    const auto count = static_cast<long long>(data.size());
    long long correct = 0;
    if (model.family == rff::Family::Binary) {
#pragma omp parallel for schedule(static) reduction(+ : correct)
        for (long long i = 0; i < count; ++i) {
            if (predict(data.binary[static_cast<std::size_t>(i)], model) ==
                data.labels[static_cast<std::size_t>(i)]) {
                ++correct;
            }
        }
    } else {
        const CyclicSimilaritySpec spec(model.order);
#pragma omp parallel for schedule(static) reduction(+ : correct)
        for (long long i = 0; i < count; ++i) {
            if (predict(data.cyclic[static_cast<std::size_t>(i)], model, spec) ==
                data.labels[static_cast<std::size_t>(i)]) {
                ++correct;
            }
        }
    }
    return static_cast<double>(correct) / static_cast<double>(count);
}

double evaluate(const EncodedDataset& data, const SgdModel& model) {
    if (data.size() == 0) {
        throw data_error("evaluate: empty dataset");
    }
    const auto count = static_cast<long long>(data.size());
    long long correct = 0;
    if (model.family == rff::Family::Binary) {
#pragma omp parallel for schedule(static) reduction(+ : correct)
        for (long long i = 0; i < count; ++i) {
            if (predict(data.binary[static_cast<std::size_t>(i)], model) ==
                data.labels[static_cast<std::size_t>(i)]) {
                ++correct;
            }
        }
    } else {
#pragma omp parallel for schedule(static) reduction(+ : correct)
        for (long long i = 0; i < count; ++i) {
            if (predict(data.cyclic[static_cast<std::size_t>(i)], model) ==
                data.labels[static_cast<std::size_t>(i)]) {
                ++correct;
            }
        }
    }
    return static_cast<double>(correct) / static_cast<double>(count);
}

}  // namespace hypervsa::learn
