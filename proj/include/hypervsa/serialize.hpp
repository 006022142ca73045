#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>

#include "hypervsa/learn.hpp"
#include "hypervsa/matrix.hpp"
#include "hypervsa/rff.hpp"

namespace hypervsa::io {

// Canonical hypervector record: "HV01", kind byte (0 binary / 1 cyclic),
// order byte (0 for binary), 8-byte little-endian dimension, then the payload
// (little-endian packed bits for binary, one byte per element for cyclic).
void write_hypervector(std::ostream& out, const BinaryHypervector& v);
void write_hypervector(std::ostream& out, const CyclicHypervector& v);

using AnyHypervector = std::variant<BinaryHypervector, CyclicHypervector>;
AnyHypervector read_hypervector(std::istream& in);

// Basis container: "CB01", family byte, order byte, 4-byte entity count,
// 8-byte dimension, 8-byte seed, then the target matrix (n x n doubles) and
// the hypervector records.
void write_basis(std::ostream& out, const rff::CorrelatedBasis& basis);
rff::CorrelatedBasis read_basis(std::istream& in);
void save_basis(const std::string& path, const rff::CorrelatedBasis& basis);
rff::CorrelatedBasis load_basis(const std::string& path);

// Model container: "VSA1", paradigm byte (0 prototypes, 1 SGD-binary,
// 2 SGD-cyclic, 3 perceptron), family/order byte, 4-byte class count, 8-byte
// dimension, payload (hypervector records or row-major float64 shadow
// weights), trailing 8-byte seed.
using AnyModel = std::variant<learn::PrototypeModel, learn::SgdModel>;
void write_model(std::ostream& out, const AnyModel& model);
AnyModel read_model(std::istream& in);
void save_model(const std::string& path, const AnyModel& model);
AnyModel load_model(const std::string& path);

// Textual similarity-target file: first line n, then n rows of n decimals.
SimilarityTarget load_target_file(const std::string& path);
void save_target_file(const std::string& path, const SimilarityTarget& target);

// FNV-1a 64-bit content hash used for run-record artifact fingerprints.
std::uint64_t fnv1a64(const void* data, std::size_t size);
std::string hash_hex(const std::string& bytes);
std::string serialize_model_bytes(const AnyModel& model);
std::string serialize_basis_bytes(const rff::CorrelatedBasis& basis);

}  // namespace hypervsa::io
