// Throughput comparison between the serial per-coordinate reference and the
// packed / OpenMP kernels. Build and run:
//   cmake --build build --target bench_kernels && ./build/bench/bench_kernels

#include <chrono>
#include <cstdio>
#include <functional>
#include <vector>

#include "hypervsa/encode.hpp"
#include "hypervsa/ops.hpp"
#include "hypervsa/reference.hpp"
#include "hypervsa/rff.hpp"
#include "hypervsa/threads.hpp"

using namespace hypervsa;

namespace {

double time_of(const std::function<void()>& fn, int reps) {
    // One warmup, then the best of reps.
    fn();
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const double dt =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        best = std::min(best, dt);
    }
    return best;
}

volatile double sink;

void report(const char* name, double serial_s, double kernel_s) {
    std::printf("%-28s serial %10.4f ms   kernel %10.4f ms   speedup %6.1fx\n", name,
                serial_s * 1e3, kernel_s * 1e3, serial_s / kernel_s);
}

}  // namespace

int main() {
    const std::size_t dim = 100000;
    SeededRng rng(1);
    const auto u = random_binary(dim, 0.5, rng.derive(0));
    const auto v = random_binary(dim, 0.5, rng.derive(1));

    std::printf("dim = %zu, threads = %d\n\n", dim, max_threads());

    report(
        "similarity (binary)",
        time_of([&] { sink = ref::similarity(u, v); }, 5),
        time_of([&] { sink = similarity(u, v); }, 5));

    report(
        "bind (binary)",
        time_of([&] { sink = static_cast<double>(ref::bind(u, v).bit(0)); }, 5),
        time_of([&] { sink = static_cast<double>(bind(u, v).bit(0)); }, 5));

    report(
        "permute (binary)",
        time_of([&] { sink = static_cast<double>(ref::permute(u, 12345).bit(0)); }, 5),
        time_of([&] { sink = static_cast<double>(permute(u, 12345).bit(0)); }, 5));

    std::vector<BinaryHypervector> vs;
    for (int i = 0; i < 33; ++i) {
        vs.push_back(random_binary(dim, 0.5, rng.derive(100 + static_cast<std::uint64_t>(i))));
    }
    report(
        "bundle of 33 (binary)",
        time_of([&] { sink = static_cast<double>(ref::bundle(vs, SeededRng(7)).bit(0)); }, 3),
        time_of([&] { sink = static_cast<double>(bundle(vs, SeededRng(7)).bit(0)); }, 3));

    const auto basis = rff::random_basis(rff::Family::Binary, 0, 256, 10000, SeededRng(3));
    std::vector<int> indices(784);
    SeededRng irng(4);
    for (auto& idx : indices) {
        idx = static_cast<int>(irng.next_double() * 256);
    }
    report(
        "encode 784 features D=10k",
        time_of([&] { sink = static_cast<double>(ref::encode(indices, basis.binary).bit(0)); }, 3),
        time_of(
            [&] { sink = static_cast<double>(learn::encode(indices, basis.binary).bit(0)); }, 3));

    // Correlated sampling: one thread vs all cores.
    const int all_threads = max_threads();
    const auto target = SimilarityTarget::constant_off_diagonal(16, 0.2);
    const auto serial_sample = time_of(
        [&] {
            set_thread_cap(1);
            sink = static_cast<double>(
                rff::sample_correlated_binary(target, 50000, SeededRng(9)).binary[0].bit(0));
        },
        2);
    set_thread_cap(all_threads);
    const auto parallel_sample = time_of(
        [&] {
            sink = static_cast<double>(
                rff::sample_correlated_binary(target, 50000, SeededRng(9)).binary[0].bit(0));
        },
        2);
    report("correlated sampling D=50k", serial_sample, parallel_sample);

    return 0;
}
