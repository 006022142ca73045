#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "hypervsa/dataset.hpp"
#include "hypervsa/encode.hpp"
#include "hypervsa/errors.hpp"
#include "hypervsa/learn.hpp"
#include "hypervsa/ops.hpp"
#include "hypervsa/rff.hpp"
#include "hypervsa/run.hpp"
#include "hypervsa/threads.hpp"

using namespace hypervsa;
using namespace hypervsa::learn;

namespace {

EncodedDataset encoded_from(std::vector<BinaryHypervector> vs, std::vector<int> labels) {
    EncodedDataset d;
    d.family = rff::Family::Binary;
    d.order = 0;
    d.dim = vs.front().dim();
    d.binary = std::move(vs);
    d.labels = std::move(labels);
    return d;
}

EncodedDataset encoded_from(std::vector<CyclicHypervector> vs, std::vector<int> labels) {
    EncodedDataset d;
    d.family = rff::Family::Cyclic;
    d.order = vs.front().order();
    d.dim = vs.front().dim();
    d.cyclic = std::move(vs);
    d.labels = std::move(labels);
    return d;
}

}  // namespace

TEST_CASE("feature quantization endpoints and rounding") {
    const std::vector<double> x{-1.0, 1.0, 0.0, -2.5, 2.5};
    const auto q = quantize_features(x);
    CHECK(q[0] == 0);
    CHECK(q[1] == 255);
    CHECK(q[2] == 128);  // 127.5 rounds half-up
    CHECK(q[3] == 0);    // clamped
    CHECK(q[4] == 255);  // clamped
}

TEST_CASE("single-feature encoding is the basis vector itself") {
    const auto basis = rff::random_basis(rff::Family::Binary, 0, 4, 512, SeededRng(1));
    const std::vector<int> idx{2};
    CHECK(encode(idx, basis.binary) == basis.binary[2]);

    const auto cbasis = rff::random_basis(rff::Family::Cyclic, 8, 4, 512, SeededRng(2));
    CHECK(encode(idx, cbasis.cyclic, 8) == cbasis.cyclic[2]);
}

TEST_CASE("binding commutativity makes pixel order irrelevant given fixed shifts") {
    SeededRng rng(3);
    const auto va = random_binary(1024, 0.5, rng.derive(0));
    const auto vb = random_binary(1024, 0.5, rng.derive(1));
    CHECK(bind(va, permute(vb, 1)) == bind(permute(vb, 1), va));
}

TEST_CASE("encodings differing in one feature compare like the shifted basis vectors") {
    const std::size_t dim = 1024;
    const auto basis = rff::random_basis(rff::Family::Binary, 0, 8, dim, SeededRng(4));
    std::vector<int> p1{3, 5, 1};
    std::vector<int> p2{3, 6, 1};
    const auto t1 = encode(p1, basis.binary);
    const auto t2 = encode(p2, basis.binary);
    const double expected = similarity(permute(basis.binary[5], 1), permute(basis.binary[6], 1));
    CHECK(similarity(t1, t2) == expected);
}

TEST_CASE("encoding similarity is preserved by a common bound suffix") {
    SeededRng rng(5);
    const std::size_t dim = 1000;
    const auto t = random_binary(dim, 0.5, rng.derive(0));
    const auto t2 = random_binary(dim, 0.5, rng.derive(1));
    const auto w = random_binary(dim, 0.5, rng.derive(2));
    CHECK(similarity(bind(t, w), bind(t2, w)) == similarity(t, t2));

    const CyclicSimilaritySpec spec(8);
    const auto c1 = random_cyclic(dim, 8, rng.derive(3));
    const auto c2 = random_cyclic(dim, 8, rng.derive(4));
    const auto cw = random_cyclic(dim, 8, rng.derive(5));
    CHECK(similarity(bind(c1, cw), bind(c2, cw), spec) == similarity(c1, c2, spec));
}

TEST_CASE("bundle_train with one sample per class returns the encodings") {
    SeededRng rng(6);
    std::vector<BinaryHypervector> vs;
    for (int i = 0; i < 3; ++i) {
        vs.push_back(random_binary(700, 0.5, rng.derive(static_cast<std::uint64_t>(i))));
    }
    const auto data = encoded_from(vs, {0, 1, 2});
    const auto model = bundle_train(data, 3, SeededRng(7));
    CHECK(model.binary[0] == vs[0]);
    CHECK(model.binary[1] == vs[1]);
    CHECK(model.binary[2] == vs[2]);
}

TEST_CASE("duplicating the training set leaves prototypes unchanged") {
    SeededRng rng(8);
    std::vector<BinaryHypervector> vs;
    std::vector<int> labels;
    for (int i = 0; i < 9; ++i) {
        vs.push_back(random_binary(501, 0.5, rng.derive(static_cast<std::uint64_t>(i))));
        labels.push_back(i % 3);
    }
    auto doubled = vs;
    doubled.insert(doubled.end(), vs.begin(), vs.end());
    auto doubled_labels = labels;
    doubled_labels.insert(doubled_labels.end(), labels.begin(), labels.end());

    const auto m1 = bundle_train(encoded_from(vs, labels), 3, SeededRng(9));
    const auto m2 = bundle_train(encoded_from(doubled, doubled_labels), 3, SeededRng(9));
    CHECK(m1.binary == m2.binary);
}

TEST_CASE("bundle_train rejects an empty class naming it") {
    SeededRng rng(10);
    std::vector<BinaryHypervector> vs{random_binary(64, 0.5, rng.derive(0)),
                                      random_binary(64, 0.5, rng.derive(1))};
    const auto data = encoded_from(vs, {0, 0});
    CHECK_THROWS_WITH_AS(bundle_train(data, 2, SeededRng(11)), doctest::Contains("class 1"),
                         data_error);
}

TEST_CASE("bundle_train_stream reads every encoding exactly once") {
    SeededRng rng(12);
    const std::size_t count = 40;
    std::vector<BinaryHypervector> vs;
    std::vector<int> labels;
    for (std::size_t i = 0; i < count; ++i) {
        vs.push_back(random_binary(256, 0.5, rng.derive(i)));
        labels.push_back(static_cast<int>(i % 4));
    }
    std::vector<int> reads(count, 0);
    const auto provider = [&](std::size_t i) -> const BinaryHypervector& {
        ++reads[i];
        return vs[i];
    };
    const auto model = bundle_train_stream(count, provider, labels, 4, SeededRng(13));
    for (int r : reads) {
        CHECK(r == 1);
    }
    // Same result as the materialized path.
    const auto dense = bundle_train(encoded_from(vs, labels), 4, SeededRng(13));
    CHECK(model.binary == dense.binary);
}

TEST_CASE("statement-4.1 task: binary bundling collapses for small p") {
    // With p below 1/36 the per-coordinate majority is the three-way bundle,
    // so all class prototypes coincide and accuracy falls to chance.
    harness::SyntheticTaskSpec spec;
    spec.p = 0.02;
    spec.samples = 30000;
    spec.seed = 99;
    const auto train = harness::synth_task(spec);
    spec.samples = 10000;
    spec.seed = 100;
    const auto test = harness::synth_task(spec);

    const auto basis = harness::synthetic_task_basis(rff::Family::Binary, 0, 4096, SeededRng(14));
    const auto train_enc = encode_dataset(train, basis);
    const auto test_enc = encode_dataset(test, basis);
    const auto model = bundle_train(train_enc, 3, SeededRng(15));
    CHECK(model.binary[0] == model.binary[1]);
    CHECK(model.binary[1] == model.binary[2]);
    const double acc = evaluate(test_enc, model);
    CHECK(acc > 0.30);
    CHECK(acc < 0.37);

    // The cyclic order-3 family learns the same task at the same p.
    const auto cbasis = harness::synthetic_task_basis(rff::Family::Cyclic, 3, 4096, SeededRng(16));
    const auto ctrain = encode_dataset(train, cbasis);
    const auto ctest = encode_dataset(test, cbasis);
    const auto cmodel = bundle_train(ctrain, 3, SeededRng(17));
    const double cacc = evaluate(ctest, cmodel);
    CHECK(cacc > harness::synth_bayes_accuracy(spec.p) - 0.03);
}

TEST_CASE("predict returns the matching prototype and class 0 for C=1") {
    SeededRng rng(18);
    std::vector<BinaryHypervector> vs;
    for (int i = 0; i < 4; ++i) {
        vs.push_back(random_binary(300, 0.5, rng.derive(static_cast<std::uint64_t>(i))));
    }
    const auto model = bundle_train(encoded_from(vs, {0, 1, 2, 3}), 4, SeededRng(19));
    for (int c = 0; c < 4; ++c) {
        CHECK(predict(vs[static_cast<std::size_t>(c)], model) == c);
    }

    std::vector<BinaryHypervector> one{vs[0]};
    const auto single = bundle_train(encoded_from(one, {0}), 1, SeededRng(20));
    CHECK(predict(vs[2], single) == 0);
}

TEST_CASE("binary SGD predictions depend only on the sign pattern") {
    SeededRng rng(21);
    SgdModel model;
    model.paradigm = SgdModel::Paradigm::SgdBinary;
    model.family = rff::Family::Binary;
    model.classes = 3;
    model.dim = 400;
    model.beta = 10.0;
    model.shadow.resize(3 * 400);
    for (auto& w : model.shadow) {
        w = rng.next_double() - 0.5;
    }
    SgdModel scaled = model;
    for (auto& w : scaled.shadow) {
        w *= 3.0;
    }
    SgdModel rebeta = model;
    rebeta.beta *= 17.0;
    for (int t = 0; t < 50; ++t) {
        const auto x = random_binary(400, 0.5, rng.derive(static_cast<std::uint64_t>(t)));
        const int base = predict(x, model);
        CHECK(predict(x, scaled) == base);
        CHECK(predict(x, rebeta) == base);
    }
}

TEST_CASE("binary SGD memorizes a single example") {
    SeededRng rng(22);
    std::vector<BinaryHypervector> vs{random_binary(256, 0.5, rng.derive(0))};
    const auto data = encoded_from(vs, {1});
    TrainConfig cfg;
    cfg.epochs = 30;
    cfg.batch_size = 1;
    cfg.learning_rate = 0.5;
    cfg.seed = 5;
    const auto model = sgd_train_binary(data, 3, cfg);
    CHECK(predict(vs[0], model) == 1);
}

TEST_CASE("binary SGD gradient matches central finite differences") {
    SeededRng rng(23);
    const std::size_t dim = 200;
    SgdModel model;
    model.paradigm = SgdModel::Paradigm::SgdBinary;
    model.family = rff::Family::Binary;
    model.classes = 4;
    model.dim = dim;
    model.beta = 10.0;
    model.shadow.resize(4 * dim);
    for (auto& w : model.shadow) {
        w = rng.next_double() - 0.5;  // strictly inside the window
    }
    const auto x = random_binary(dim, 0.5, rng.derive(0));
    const int label = 2;
    const auto analytic = sgd_relaxed_gradient(model, x, label);

    SeededRng pick(24);
    const double h = 1e-5;
    for (int t = 0; t < 64; ++t) {
        const auto idx = static_cast<std::size_t>(pick.next_double() *
                                                  static_cast<double>(model.shadow.size()));
        SgdModel plus = model;
        SgdModel minus = model;
        plus.shadow[idx] += h;
        minus.shadow[idx] -= h;
        const double fd =
            (sgd_relaxed_loss(plus, x, label) - sgd_relaxed_loss(minus, x, label)) / (2.0 * h);
        const double denom = std::max(std::abs(analytic[idx]), 1e-8);
        CHECK(std::abs(fd - analytic[idx]) / denom <= 1e-4);
    }
}

TEST_CASE("straight-through mask zeroes updates outside the window") {
    SgdModel model;
    model.paradigm = SgdModel::Paradigm::SgdBinary;
    model.family = rff::Family::Binary;
    model.classes = 2;
    model.dim = 64;
    model.beta = 10.0;
    model.shadow.assign(2 * 64, 0.25);
    model.shadow[3] = 1.0;
    model.shadow[10] = -1.5;
    model.shadow[64 + 7] = 2.0;
    const auto x = random_binary(64, 0.5, SeededRng(25));
    const auto grad = sgd_gradient(model, x, 0);
    CHECK(grad[3] == 0.0);
    CHECK(grad[10] == 0.0);
    CHECK(grad[64 + 7] == 0.0);
    CHECK(grad[0] != 0.0);
}

TEST_CASE("cyclic SGD gradient matches central finite differences") {
    SeededRng rng(26);
    const std::size_t dim = 150;
    const int n = 8;
    SgdModel model;
    model.paradigm = SgdModel::Paradigm::SgdCyclic;
    model.family = rff::Family::Cyclic;
    model.order = n;
    model.classes = 3;
    model.dim = dim;
    model.beta = 10.0;
    model.shadow.resize(3 * dim);
    for (auto& w : model.shadow) {
        w = rng.next_double() * n;  // continuous, off-lattice
    }
    const auto x = random_cyclic(dim, n, rng.derive(0));
    const int label = 1;
    const auto analytic = sgd_relaxed_gradient(model, x, label);

    SeededRng pick(27);
    const double h = 1e-5;
    for (int t = 0; t < 64; ++t) {
        const auto idx = static_cast<std::size_t>(pick.next_double() *
                                                  static_cast<double>(model.shadow.size()));
        SgdModel plus = model;
        SgdModel minus = model;
        plus.shadow[idx] += h;
        minus.shadow[idx] -= h;
        const double fd =
            (sgd_relaxed_loss(plus, x, label) - sgd_relaxed_loss(minus, x, label)) / (2.0 * h);
        const double denom = std::max(std::abs(analytic[idx]), 1e-8);
        CHECK(std::abs(fd - analytic[idx]) / denom <= 1e-4);
    }

    // On-lattice shadow: the production gradient coincides with the relaxed
    // gradient evaluated at the same point.
    for (auto& w : model.shadow) {
        w = std::floor(w);
    }
    const auto prod = sgd_gradient(model, x, label);
    const auto relaxed = sgd_relaxed_gradient(model, x, label);
    for (std::size_t i = 0; i < prod.size(); ++i) {
        CHECK(prod[i] == doctest::Approx(relaxed[i]).epsilon(1e-9));
    }
}

TEST_CASE("order-2 cyclic logits reproduce binary logits under the bijection") {
    SeededRng rng(28);
    const std::size_t dim = 320;
    SgdModel cyc;
    cyc.paradigm = SgdModel::Paradigm::SgdCyclic;
    cyc.family = rff::Family::Cyclic;
    cyc.order = 2;
    cyc.classes = 3;
    cyc.dim = dim;
    cyc.beta = 10.0;
    cyc.shadow.resize(3 * dim);
    for (auto& w : cyc.shadow) {
        w = rng.next_double() < 0.5 ? 0.0 : 1.0;  // lattice {0, 1}
    }
    SgdModel bin = cyc;
    bin.paradigm = SgdModel::Paradigm::SgdBinary;
    bin.family = rff::Family::Binary;
    bin.order = 0;
    for (std::size_t i = 0; i < bin.shadow.size(); ++i) {
        bin.shadow[i] = (cyc.shadow[i] == 0.0) ? 0.5 : -0.5;  // 0 <-> +1, 1 <-> -1
    }
    const auto xc = random_cyclic(dim, 2, rng.derive(1));
    const auto xb = to_binary(xc);
    const auto lc = sgd_logits(cyc, xc);
    const auto lb = sgd_logits(bin, xb);
    for (std::size_t c = 0; c < 3; ++c) {
        CHECK(lc[c] == doctest::Approx(lb[c]).epsilon(1e-12));
    }
}

TEST_CASE("tiny learning rate cannot move the cyclic lattice") {
    SeededRng rng(29);
    std::vector<CyclicHypervector> vs;
    for (int i = 0; i < 6; ++i) {
        vs.push_back(random_cyclic(128, 4, rng.derive(static_cast<std::uint64_t>(i))));
    }
    const auto data = encoded_from(vs, {0, 1, 0, 1, 0, 1});
    TrainConfig cfg;
    cfg.epochs = 3;
    cfg.learning_rate = 1e-12;
    cfg.seed = 30;
    const auto model = sgd_train_cyclic(data, 2, cfg, CyclicSimilaritySpec(4));

    TrainConfig zeroish = cfg;
    zeroish.epochs = 0;
    const auto untouched = sgd_train_cyclic(data, 2, zeroish, CyclicSimilaritySpec(4));
    CHECK(model.effective_lattice() == untouched.effective_lattice());
}

TEST_CASE("cyclic effective weights stay on the lattice and projection is idempotent") {
    SeededRng rng(31);
    std::vector<CyclicHypervector> vs;
    std::vector<int> labels;
    for (int i = 0; i < 40; ++i) {
        vs.push_back(random_cyclic(200, 8, rng.derive(static_cast<std::uint64_t>(i))));
        labels.push_back(i % 4);
    }
    const auto data = encoded_from(vs, labels);
    TrainConfig cfg;
    cfg.epochs = 2;
    cfg.learning_rate = 5.0;  // large enough to move the lattice
    cfg.seed = 32;
    const auto model = sgd_train_cyclic(data, 4, cfg, CyclicSimilaritySpec(8));
    const auto lattice = model.effective_lattice();
    for (std::uint8_t w : lattice) {
        CHECK(w < 8);
    }
    // Projecting a projected model changes nothing.
    SgdModel projected = model;
    for (std::size_t i = 0; i < projected.shadow.size(); ++i) {
        projected.shadow[i] = static_cast<double>(lattice[i]);
    }
    CHECK(projected.effective_lattice() == lattice);

    // Binary projection idempotence: sgn of a sign pattern is itself.
    const auto signs_once = model.effective_signs();
    SgdModel sign_model = model;
    sign_model.family = rff::Family::Binary;
    for (std::size_t i = 0; i < sign_model.shadow.size(); ++i) {
        sign_model.shadow[i] = static_cast<double>(signs_once[i]);
    }
    CHECK(sign_model.effective_signs() == signs_once);
}

TEST_CASE("SGD training is deterministic across runs and thread counts") {
    SeededRng rng(33);
    std::vector<BinaryHypervector> vs;
    std::vector<int> labels;
    for (int i = 0; i < 64; ++i) {
        vs.push_back(random_binary(512, 0.5, rng.derive(static_cast<std::uint64_t>(i))));
        labels.push_back(i % 4);
    }
    const auto data = encoded_from(vs, labels);
    TrainConfig cfg;
    cfg.epochs = 3;
    cfg.seed = 77;

    set_thread_cap(1);
    const auto m1 = sgd_train_binary(data, 4, cfg);
    set_thread_cap(4);
    const auto m2 = sgd_train_binary(data, 4, cfg);
    CHECK(m1.shadow == m2.shadow);
    set_thread_cap(0);
}

TEST_CASE("perceptron separable toy set converges in one epoch") {
    SeededRng rng(34);
    const auto proto0 = random_binary(600, 0.5, rng.derive(0));
    const auto proto1 = random_binary(600, 0.5, rng.derive(1));
    std::vector<BinaryHypervector> vs;
    std::vector<int> labels;
    for (int i = 0; i < 10; ++i) {
        vs.push_back(proto0);
        labels.push_back(0);
        vs.push_back(proto1);
        labels.push_back(1);
    }
    const auto data = encoded_from(vs, labels);
    TrainConfig cfg;
    cfg.epochs = 1;
    cfg.seed = 35;
    const auto model = perceptron_train(data, 2, cfg);
    CHECK(evaluate(data, model) == 1.0);

    TrainConfig none = cfg;
    none.epochs = 0;
    const auto empty = perceptron_train(data, 2, none);
    for (double w : empty.shadow) {
        CHECK(w == 0.0);
    }
}

TEST_CASE("evaluate on constant predictions") {
    SeededRng rng(36);
    std::vector<BinaryHypervector> vs;
    std::vector<int> labels;
    for (int i = 0; i < 30; ++i) {
        vs.push_back(random_binary(128, 0.5, rng.derive(static_cast<std::uint64_t>(i))));
        labels.push_back(i % 3);
    }
    // A model whose prototypes are identical predicts class 0 always.
    std::vector<BinaryHypervector> same{vs[0], vs[0], vs[0]};
    PrototypeModel model;
    model.family = rff::Family::Binary;
    model.dim = 128;
    model.binary = same;
    const auto data = encoded_from(vs, labels);
    const double acc = evaluate(data, model);
    CHECK(acc == doctest::Approx(10.0 / 30.0));

    std::vector<int> zeros(30, 0);
    const auto zero_data = encoded_from(vs, zeros);
    CHECK(evaluate(zero_data, model) == 1.0);

    EncodedDataset empty;
    empty.family = rff::Family::Binary;
    empty.dim = 128;
    CHECK_THROWS_AS(evaluate(empty, model), data_error);
}

TEST_CASE("train config validation") {
    TrainConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.learning_rate = 0.0;
    CHECK_THROWS_AS(cfg.validate(), config_error);
    cfg.learning_rate = 0.01;
    cfg.batch_size = 0;
    CHECK_THROWS_AS(cfg.validate(), config_error);
}
