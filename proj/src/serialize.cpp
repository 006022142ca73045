#include "hypervsa/serialize.hpp"

#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "hypervsa/errors.hpp"

namespace hypervsa::io {

namespace {

void write_bytes(std::ostream& out, const void* data, std::size_t size) {
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
}

void write_u8(std::ostream& out, std::uint8_t v) { write_bytes(out, &v, 1); }

void write_le64(std::ostream& out, std::uint64_t v) {
    unsigned char buf[8];
    for (int i = 0; i < 8; ++i) {
        buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
    }
    write_bytes(out, buf, 8);
}

void write_le32(std::ostream& out, std::uint32_t v) {
    unsigned char buf[4];
    for (int i = 0; i < 4; ++i) {
        buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
    }
    write_bytes(out, buf, 4);
}

void write_f64(std::ostream& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    write_le64(out, bits);
}

void read_bytes(std::istream& in, void* data, std::size_t size, const char* what) {
    if (!in.read(static_cast<char*>(data), static_cast<std::streamsize>(size))) {
        throw data_error(std::string("truncated stream while reading ") + what);
    }
}

std::uint8_t read_u8(std::istream& in, const char* what) {
    std::uint8_t v = 0;
    read_bytes(in, &v, 1, what);
    return v;
}

std::uint64_t read_le64(std::istream& in, const char* what) {
    unsigned char buf[8];
    read_bytes(in, buf, 8, what);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
        v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    }
    return v;
}

std::uint32_t read_le32(std::istream& in, const char* what) {
    unsigned char buf[4];
    read_bytes(in, buf, 4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
        v |= static_cast<std::uint32_t>(buf[i]) << (8 * i);
    }
    return v;
}

double read_f64(std::istream& in, const char* what) {
    const std::uint64_t bits = read_le64(in, what);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

void expect_magic(std::istream& in, const char* magic) {
    char buf[4];
    read_bytes(in, buf, 4, "magic");
    if (std::memcmp(buf, magic, 4) != 0) {
        throw data_error(std::string("bad magic, expected ") + magic);
    }
}

}  // namespace

void write_hypervector(std::ostream& out, const BinaryHypervector& v) {
    write_bytes(out, "HV01", 4);
    write_u8(out, 0);  // kind: binary
    write_u8(out, 0);  // order: none
    write_le64(out, v.dim());
    // Packed bits, little-endian byte order: bit i lives in byte i/8.
    const std::size_t nbytes = (v.dim() + 7) / 8;
    const auto words = v.words();
    for (std::size_t b = 0; b < nbytes; ++b) {
        const auto byte = static_cast<std::uint8_t>((words[b / 8] >> (8 * (b % 8))) & 0xFF);
        write_u8(out, byte);
    }
}

void write_hypervector(std::ostream& out, const CyclicHypervector& v) {
    write_bytes(out, "HV01", 4);
    write_u8(out, 1);  // kind: cyclic
    // Order byte: 256 is stored as 0x00 is not allowed; orders are 2..256 and
    // the paper needs n <= 16, so clamp the encoding to one byte.
    if (v.order() > 255) {
        throw data_error("serialized cyclic order must fit one byte");
    }
    write_u8(out, static_cast<std::uint8_t>(v.order()));
    write_le64(out, v.dim());
    const auto elems = v.elements();
    write_bytes(out, elems.data(), elems.size());
}

AnyHypervector read_hypervector(std::istream& in) {
    expect_magic(in, "HV01");
    const std::uint8_t kind = read_u8(in, "hypervector kind");
    const std::uint8_t order = read_u8(in, "hypervector order");
    const std::uint64_t dim = read_le64(in, "hypervector dim");
    if (dim == 0) {
        throw data_error("hypervector record with zero dimension");
    }
    if (kind == 0) {
        BinaryHypervector v(static_cast<std::size_t>(dim));
        const std::size_t nbytes = (v.dim() + 7) / 8;
        std::vector<std::uint8_t> buf(nbytes);
        read_bytes(in, buf.data(), nbytes, "binary payload");
        auto words = v.words();
        for (std::size_t b = 0; b < nbytes; ++b) {
            words[b / 8] |= static_cast<std::uint64_t>(buf[b]) << (8 * (b % 8));
        }
        v.mask_padding();
        return v;
    }
    if (kind == 1) {
        if (order < 2) {
            throw data_error("cyclic hypervector record with order < 2");
        }
        CyclicHypervector v(static_cast<std::size_t>(dim), order);
        read_bytes(in, v.elements().data(), v.dim(), "cyclic payload");
        for (std::size_t i = 0; i < v.dim(); ++i) {
            if (v.element(i) >= order) {
                throw data_error("cyclic element out of range in record");
            }
        }
        return v;
    }
    throw data_error("unknown hypervector kind byte");
}

void write_basis(std::ostream& out, const rff::CorrelatedBasis& basis) {
    // Header carries family, order, entity count, dimension, and seed only;
    // the target matrix provenance is not part of the wire format.
    write_bytes(out, "CB01", 4);
    write_u8(out, static_cast<std::uint8_t>(basis.family));
    write_u8(out, static_cast<std::uint8_t>(basis.order));
    write_le32(out, static_cast<std::uint32_t>(basis.size()));
    write_le64(out, basis.dim);
    write_le64(out, basis.seed);
    if (basis.family == rff::Family::Binary) {
        for (const auto& v : basis.binary) {
            write_hypervector(out, v);
        }
    } else {
        for (const auto& v : basis.cyclic) {
            write_hypervector(out, v);
        }
    }
}

rff::CorrelatedBasis read_basis(std::istream& in) {
    expect_magic(in, "CB01");
    rff::CorrelatedBasis basis;
    basis.family = static_cast<rff::Family>(read_u8(in, "basis family"));
    basis.order = read_u8(in, "basis order");
    const std::uint32_t count = read_le32(in, "basis count");
    basis.dim = read_le64(in, "basis dim");
    basis.seed = read_le64(in, "basis seed");
    basis.target = SimilarityTarget::identity_similarity(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        AnyHypervector v = read_hypervector(in);
        if (basis.family == rff::Family::Binary) {
            if (!std::holds_alternative<BinaryHypervector>(v)) {
                throw data_error("basis record family mismatch");
            }
            basis.binary.push_back(std::get<BinaryHypervector>(std::move(v)));
        } else {
            if (!std::holds_alternative<CyclicHypervector>(v)) {
                throw data_error("basis record family mismatch");
            }
            basis.cyclic.push_back(std::get<CyclicHypervector>(std::move(v)));
        }
    }
    return basis;
}

void save_basis(const std::string& path, const rff::CorrelatedBasis& basis) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw data_error("cannot open basis file for writing: " + path);
    }
    write_basis(out, basis);
}

rff::CorrelatedBasis load_basis(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw data_error("cannot open basis file: " + path);
    }
    return read_basis(in);
}

void write_model(std::ostream& out, const AnyModel& model) {
    write_bytes(out, "VSA1", 4);
    if (std::holds_alternative<learn::PrototypeModel>(model)) {
        const auto& m = std::get<learn::PrototypeModel>(model);
        write_u8(out, 0);
        write_u8(out, static_cast<std::uint8_t>(m.order));
        write_le32(out, static_cast<std::uint32_t>(m.classes()));
        write_le64(out, m.dim);
        if (m.family == rff::Family::Binary) {
            for (const auto& v : m.binary) {
                write_hypervector(out, v);
            }
        } else {
            for (const auto& v : m.cyclic) {
                write_hypervector(out, v);
            }
        }
        write_le64(out, m.seed);
        return;
    }
    const auto& m = std::get<learn::SgdModel>(model);
    write_u8(out, static_cast<std::uint8_t>(m.paradigm));
    write_u8(out, static_cast<std::uint8_t>(m.order));
    write_le32(out, static_cast<std::uint32_t>(m.classes));
    write_le64(out, m.dim);
    for (double w : m.shadow) {
        write_f64(out, w);
    }
    write_le64(out, m.seed);
}

AnyModel read_model(std::istream& in) {
    expect_magic(in, "VSA1");
    const std::uint8_t paradigm = read_u8(in, "model paradigm");
    const std::uint8_t order = read_u8(in, "model order");
    const std::uint32_t classes = read_le32(in, "model classes");
    const std::uint64_t dim = read_le64(in, "model dim");
    if (paradigm == 0) {
        learn::PrototypeModel m;
        m.family = order == 0 ? rff::Family::Binary : rff::Family::Cyclic;
        m.order = order;
        m.dim = dim;
        for (std::uint32_t c = 0; c < classes; ++c) {
            AnyHypervector v = read_hypervector(in);
            if (m.family == rff::Family::Binary) {
                m.binary.push_back(std::get<BinaryHypervector>(std::move(v)));
            } else {
                m.cyclic.push_back(std::get<CyclicHypervector>(std::move(v)));
            }
        }
        m.seed = read_le64(in, "model seed");
        return m;
    }
    learn::SgdModel m;
    m.paradigm = static_cast<learn::SgdModel::Paradigm>(paradigm);
    if (paradigm > 3) {
        throw data_error("unknown model paradigm byte");
    }
    m.family = order == 0 ? rff::Family::Binary : rff::Family::Cyclic;
    m.order = order;
    m.classes = static_cast<int>(classes);
    m.dim = dim;
    // The wire format does not carry beta; predictions are beta-invariant, so
    // loaded models evaluate with the default scale.
    m.shadow.resize(static_cast<std::size_t>(classes) * dim);
    for (auto& w : m.shadow) {
        w = read_f64(in, "model weight");
    }
    m.seed = read_le64(in, "model seed");
    return m;
}

void save_model(const std::string& path, const AnyModel& model) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw data_error("cannot open model file for writing: " + path);
    }
    write_model(out, model);
}

AnyModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw data_error("cannot open model file: " + path);
    }
    return read_model(in);
}

SimilarityTarget load_target_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw data_error("cannot open target file: " + path);
    }
    std::size_t n = 0;
    if (!(in >> n) || n == 0) {
        throw data_error("target file must start with a positive matrix size");
    }
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (!(in >> m(i, j))) {
                throw data_error("target file truncated at row " + std::to_string(i) + ", col " +
                                 std::to_string(j));
            }
        }
    }
    return SimilarityTarget::from_matrix(std::move(m));
}

void save_target_file(const std::string& path, const SimilarityTarget& target) {
    std::ofstream out(path);
    if (!out) {
        throw data_error("cannot open target file for writing: " + path);
    }
    out << target.n << "\n";
    out << std::setprecision(17);
    for (std::size_t i = 0; i < target.n; ++i) {
        for (std::size_t j = 0; j < target.n; ++j) {
            out << target.entries(i, j) << (j + 1 == target.n ? "\n" : " ");
        }
    }
}

std::uint64_t fnv1a64(const void* data, std::size_t size) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    std::uint64_t hash = 0xCBF29CE484222325ULL;
    for (std::size_t i = 0; i < size; ++i) {
        hash ^= bytes[i];
        hash *= 0x100000001B3ULL;
    }
    return hash;
}

std::string hash_hex(const std::string& bytes) {
    std::ostringstream out;
    out << "fnv1a64:" << std::hex << std::setw(16) << std::setfill('0')
        << fnv1a64(bytes.data(), bytes.size());
    return out.str();
}

std::string serialize_model_bytes(const AnyModel& model) {
    std::ostringstream out(std::ios::binary);
    write_model(out, model);
    return out.str();
}

std::string serialize_basis_bytes(const rff::CorrelatedBasis& basis) {
    std::ostringstream out(std::ios::binary);
    write_basis(out, basis);
    return out.str();
}

}  // namespace hypervsa::io
