#include "hypervsa/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "hypervsa/errors.hpp"

namespace hypervsa::harness {

namespace {

std::uint32_t read_be32(std::istream& in, const std::string& what) {
    unsigned char buf[4];
    if (!in.read(reinterpret_cast<char*>(buf), 4)) {
        throw data_error("truncated IDX header while reading " + what);
    }
    return (static_cast<std::uint32_t>(buf[0]) << 24) | (static_cast<std::uint32_t>(buf[1]) << 16) |
           (static_cast<std::uint32_t>(buf[2]) << 8) | static_cast<std::uint32_t>(buf[3]);
}

}  // namespace

Dataset load_idx(const std::string& images_path, const std::string& labels_path) {
    std::ifstream images(images_path, std::ios::binary);
    if (!images) {
        throw data_error("cannot open IDX image file: " + images_path);
    }
    std::ifstream labels(labels_path, std::ios::binary);
    if (!labels) {
        throw data_error("cannot open IDX label file: " + labels_path);
    }

    const std::uint32_t image_magic = read_be32(images, "image magic");
    if (image_magic != 0x00000803u) {
        throw data_error("bad IDX image magic in " + images_path);
    }
    const std::uint32_t count = read_be32(images, "image count");
    const std::uint32_t rows = read_be32(images, "image rows");
    const std::uint32_t cols = read_be32(images, "image cols");

    const std::uint32_t label_magic = read_be32(labels, "label magic");
    if (label_magic != 0x00000801u) {
        throw data_error("bad IDX label magic in " + labels_path);
    }
    const std::uint32_t label_count = read_be32(labels, "label count");
    if (label_count != count) {
        throw data_error("IDX image/label count mismatch: " + std::to_string(count) + " vs " +
                         std::to_string(label_count));
    }

    Dataset ds;
    ds.name = images_path;
    ds.num_samples = count;
    ds.num_features = static_cast<std::size_t>(rows) * cols;
    ds.features.resize(ds.num_samples * ds.num_features);
    ds.labels.resize(ds.num_samples);

    std::vector<unsigned char> pixel_row(ds.num_features);
    for (std::size_t i = 0; i < ds.num_samples; ++i) {
        if (!images.read(reinterpret_cast<char*>(pixel_row.data()),
                         static_cast<std::streamsize>(pixel_row.size()))) {
            throw data_error("truncated IDX image payload at sample " + std::to_string(i));
        }
        double* out = ds.features.data() + i * ds.num_features;
        for (std::size_t j = 0; j < ds.num_features; ++j) {
            out[j] = 2.0 * static_cast<double>(pixel_row[j]) / 255.0 - 1.0;
        }
    }
    std::vector<unsigned char> raw_labels(ds.num_samples);
    if (!labels.read(reinterpret_cast<char*>(raw_labels.data()),
                     static_cast<std::streamsize>(raw_labels.size()))) {
        throw data_error("truncated IDX label payload");
    }
    int max_label = 0;
    for (std::size_t i = 0; i < ds.num_samples; ++i) {
        ds.labels[i] = raw_labels[i];
        max_label = std::max(max_label, ds.labels[i]);
    }
    ds.classes = max_label + 1;
    return ds;
}

Dataset load_csv(const std::string& path, int label_column) {
    std::ifstream in(path);
    if (!in) {
        throw data_error("cannot open CSV file: " + path);
    }
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.find_first_not_of(" \t\r,") == std::string::npos) {
            continue;
        }
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        std::size_t col = 0;
        while (std::getline(ss, cell, ',')) {
            ++col;
            // Trim whitespace and stray quotes.
            const auto first = cell.find_first_not_of(" \t\r\"'");
            const auto last = cell.find_last_not_of(" \t\r\"'");
            if (first == std::string::npos) {
                throw data_error("empty cell at row " + std::to_string(line_no) + ", col " +
                                 std::to_string(col) + " of " + path);
            }
            cell = cell.substr(first, last - first + 1);
            try {
                std::size_t used = 0;
                const double v = std::stod(cell, &used);
                if (used != cell.size()) {
                    throw std::invalid_argument(cell);
                }
                row.push_back(v);
            } catch (...) {
                throw data_error("non-numeric cell '" + cell + "' at row " +
                                 std::to_string(line_no) + ", col " + std::to_string(col) + " of " +
                                 path);
            }
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw data_error("ragged CSV row " + std::to_string(line_no) + " in " + path + ": " +
                             std::to_string(row.size()) + " cells vs " +
                             std::to_string(rows.front().size()));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw data_error("CSV file has no data rows: " + path);
    }
    const std::size_t total_cols = rows.front().size();
    if (total_cols < 2) {
        throw data_error("CSV needs at least one feature column plus the label column");
    }
    std::size_t label_idx;
    if (label_column < 0) {
        label_idx = total_cols - 1;
    } else if (static_cast<std::size_t>(label_column) < total_cols) {
        label_idx = static_cast<std::size_t>(label_column);
    } else {
        throw data_error("label column out of range");
    }

    Dataset ds;
    ds.name = path;
    ds.num_samples = rows.size();
    ds.num_features = total_cols - 1;
    ds.features.resize(ds.num_samples * ds.num_features);
    ds.labels.resize(ds.num_samples);

    std::map<long long, int> remap;
    for (std::size_t i = 0; i < ds.num_samples; ++i) {
        const double raw = rows[i][label_idx];
        const auto rounded = static_cast<long long>(std::llround(raw));
        if (std::abs(raw - static_cast<double>(rounded)) > 1e-9) {
            throw data_error("label column must be integral; got " + std::to_string(raw) +
                             " at row " + std::to_string(i + 1));
        }
        remap.emplace(rounded, 0);
    }
    int next = 0;
    for (auto& [orig, mapped] : remap) {
        mapped = next++;
        ds.label_mapping.push_back(static_cast<int>(orig));
    }
    ds.classes = next;

    for (std::size_t i = 0; i < ds.num_samples; ++i) {
        const auto rounded = static_cast<long long>(std::llround(rows[i][label_idx]));
        ds.labels[i] = remap[rounded];
        double* out = ds.features.data() + i * ds.num_features;
        std::size_t f = 0;
        for (std::size_t c = 0; c < total_cols; ++c) {
            if (c != label_idx) {
                out[f++] = rows[i][c];
            }
        }
    }

    // Min-max rescale columns that fall outside [-1, 1].
    for (std::size_t c = 0; c < ds.num_features; ++c) {
        double lo = ds.features[c];
        double hi = ds.features[c];
        for (std::size_t i = 1; i < ds.num_samples; ++i) {
            const double v = ds.features[i * ds.num_features + c];
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (lo >= -1.0 && hi <= 1.0) {
            continue;
        }
        const double span = hi - lo;
        for (std::size_t i = 0; i < ds.num_samples; ++i) {
            double& v = ds.features[i * ds.num_features + c];
            v = (span < 1e-15) ? 0.0 : 2.0 * (v - lo) / span - 1.0;
        }
    }
    return ds;
}

void SyntheticTaskSpec::validate() const {
    if (!(p > 0.0) || !(p < 1.0 / 9.0)) {
        throw config_error("synthetic task: p must be in (0, 1/9)");
    }
    if (samples == 0) {
        throw config_error("synthetic task: sample count must be positive");
    }
}

Dataset synth_task(const SyntheticTaskSpec& spec) {
    spec.validate();
    Dataset ds;
    ds.name = "synthetic";
    ds.num_samples = spec.samples;
    ds.num_features = 1;
    ds.pre_indexed = true;
    ds.classes = 3;
    ds.features.resize(spec.samples);
    ds.labels.resize(spec.samples);

    const double diag = 1.0 / 9.0 + 2.0 * spec.p;
    const double off = 1.0 / 9.0 - spec.p;
    // Cumulative weights over the nine (x, y) cells in row-major order.
    double cum[9];
    double acc = 0.0;
    for (int x = 0; x < 3; ++x) {
        for (int y = 0; y < 3; ++y) {
            acc += (x == y) ? diag : off;
            cum[x * 3 + y] = acc;
        }
    }
    SeededRng rng(spec.seed);
    for (std::size_t i = 0; i < spec.samples; ++i) {
        const double u = rng.next_double() * acc;
        int cell = 8;
        for (int c = 0; c < 9; ++c) {
            if (u < cum[c]) {
                cell = c;
                break;
            }
        }
        ds.features[i] = static_cast<double>(cell / 3);
        ds.labels[i] = cell % 3;
    }
    return ds;
}

double synth_bayes_accuracy(double p) {
    return 1.0 / 3.0 + 6.0 * p;
}

}  // namespace hypervsa::harness
