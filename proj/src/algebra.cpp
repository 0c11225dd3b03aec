// Copyright 2026 The qbrach Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qbrach/algebra.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "qbrach/errors.hpp"

namespace qbrach {

namespace {

const char* const kSuperscript[] = {"⁰", "¹", "²", "³"};

std::string pauli_label(const std::vector<int>& digits) {
  std::string out;
  for (std::size_t q = 0; q < digits.size(); ++q) {
    if (digits[q] == 0) continue;
    out += "σ" + std::to_string(q + 1) + kSuperscript[digits[q]];
  }
  return out;
}

Matrix pauli(int which) {
  Matrix m = Matrix::Zero(2, 2);
  switch (which) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, -kI, kI, 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

bool all_digits(const std::string& s) {
  return !s.empty() &&
         std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

}  // namespace

const char* to_string(BasisKind kind) {
  return kind == BasisKind::GellMann ? "gellmann" : "pauli_strings";
}

BasisKind basis_kind_from_string(const std::string& name) {
  if (name == "gellmann") return BasisKind::GellMann;
  if (name == "pauli_strings") return BasisKind::PauliStrings;
  throw ValidationError("unknown basis '" + name + "' (expected gellmann or pauli_strings)");
}

GeneratorBasis::GeneratorBasis(BasisKind kind, std::size_t dim,
                               std::vector<Matrix> generators,
                               std::vector<std::string> labels)
    : kind_(kind), dim_(dim), generators_(std::move(generators)), labels_(std::move(labels)) {
  if (generators_.size() != dim_ * dim_ - 1 || labels_.size() != generators_.size()) {
    throw ValidationError("generator basis must contain N^2 - 1 labelled matrices");
  }
}

const Matrix& GeneratorBasis::generator(std::size_t i) const {
  if (i >= generators_.size()) throw ValidationError("generator index out of range");
  return generators_[i];
}

const std::string& GeneratorBasis::label(std::size_t i) const {
  if (i >= labels_.size()) throw ValidationError("generator index out of range");
  return labels_[i];
}

std::size_t GeneratorBasis::index_of(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it != labels_.end()) return static_cast<std::size_t>(it - labels_.begin());

  if (kind_ == BasisKind::PauliStrings) {
    std::size_t qubits = 0;
    while ((std::size_t{1} << qubits) < dim_) ++qubits;
    if (label.size() == qubits &&
        std::all_of(label.begin(), label.end(), [](char c) { return c >= '0' && c <= '3'; })) {
      std::size_t value = 0;
      for (char c : label) value = 4 * value + static_cast<std::size_t>(c - '0');
      if (value == 0) throw ValidationError("the identity string is not a generator");
      return value - 1;
    }
  }
  if (dim_ == 2 && label.size() == 1) {
    const std::string letters = "xyz";
    auto pos = letters.find(static_cast<char>(std::tolower(label[0])));
    if (pos != std::string::npos) {
      // Both bases put sx, sy, sz at indices 0, 1, 2 for a single qubit.
      return pos;
    }
  }
  if (all_digits(label)) {
    std::size_t value = std::stoul(label);
    if (value < generators_.size()) return value;
  }
  throw ValidationError("unknown generator label '" + label + "'");
}

RealVector GeneratorBasis::coefficients(const Matrix& a) const {
  RealVector c(generators_.size());
  for (std::size_t m = 0; m < generators_.size(); ++m) {
    c(static_cast<Eigen::Index>(m)) =
        trace_product_real(a, generators_[m]) / static_cast<double>(dim_);
  }
  return c;
}

Matrix GeneratorBasis::combine(const RealVector& coeffs, const IndexList& subset) const {
  if (static_cast<std::size_t>(coeffs.size()) != subset.size()) {
    throw ValidationError("coefficient vector does not match index subset");
  }
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(dim_));
  for (std::size_t k = 0; k < subset.size(); ++k) {
    out += coeffs(static_cast<Eigen::Index>(k)) * generator(subset[k]);
  }
  return out;
}

Matrix GeneratorBasis::project(const Matrix& a, const IndexList& subset) const {
  Matrix out = Matrix::Zero(a.rows(), a.cols());
  for (std::size_t m : subset) {
    const Matrix& x = generator(m);
    out += (trace_product(a, x) / static_cast<double>(dim_)) * x;
  }
  return out;
}

void GeneratorBasis::check_subset(const IndexList& subset) const {
  std::set<std::size_t> seen;
  for (std::size_t m : subset) {
    if (m >= generators_.size()) {
      throw ValidationError("generator index " + std::to_string(m) + " out of range");
    }
    if (!seen.insert(m).second) {
      throw ValidationError("generator index " + std::to_string(m) + " repeated");
    }
  }
}

IndexList GeneratorBasis::complement(const IndexList& subset) const {
  std::set<std::size_t> taken(subset.begin(), subset.end());
  IndexList out;
  for (std::size_t m = 0; m < generators_.size(); ++m) {
    if (!taken.count(m)) out.push_back(m);
  }
  return out;
}

GeneratorBasis build_gellmann_basis(std::size_t n) {
  if (n < 2) throw ValidationError("invalid dimension: su(N) needs N >= 2");
  const auto N = static_cast<Eigen::Index>(n);
  const double scale = std::sqrt(static_cast<double>(n) / 2.0);
  std::vector<Matrix> gens;
  std::vector<std::string> labels;

  for (Eigen::Index j = 0; j < N; ++j) {
    for (Eigen::Index k = j + 1; k < N; ++k) {
      Matrix m = Matrix::Zero(N, N);
      m(j, k) = m(k, j) = scale;
      gens.push_back(m);
      labels.push_back("S(" + std::to_string(j) + "," + std::to_string(k) + ")");
    }
  }
  for (Eigen::Index j = 0; j < N; ++j) {
    for (Eigen::Index k = j + 1; k < N; ++k) {
      Matrix m = Matrix::Zero(N, N);
      m(j, k) = -kI * scale;
      m(k, j) = kI * scale;
      gens.push_back(m);
      labels.push_back("A(" + std::to_string(j) + "," + std::to_string(k) + ")");
    }
  }
  for (Eigen::Index l = 1; l < N; ++l) {
    Matrix m = Matrix::Zero(N, N);
    const double w = scale * std::sqrt(2.0 / static_cast<double>(l * (l + 1)));
    for (Eigen::Index d = 0; d < l; ++d) m(d, d) = w;
    m(l, l) = -static_cast<double>(l) * w;
    gens.push_back(m);
    labels.push_back("D(" + std::to_string(l) + ")");
  }
  return GeneratorBasis(BasisKind::GellMann, n, std::move(gens), std::move(labels));
}

GeneratorBasis build_pauli_string_basis(std::size_t qubits) {
  if (qubits < 1 || qubits > 6) {
    throw ValidationError("invalid dimension: Pauli-string basis supports 1 to 6 qubits");
  }
  const std::size_t dim = std::size_t{1} << qubits;
  const std::size_t count = dim * dim;
  std::vector<Matrix> gens;
  std::vector<std::string> labels;
  for (std::size_t value = 1; value < count; ++value) {
    std::vector<int> digits(qubits);
    std::size_t rest = value;
    for (std::size_t q = qubits; q-- > 0;) {
      digits[q] = static_cast<int>(rest % 4);
      rest /= 4;
    }
    Matrix m = pauli(digits[0]);
    for (std::size_t q = 1; q < qubits; ++q) m = kron(m, pauli(digits[q]));
    gens.push_back(std::move(m));
    labels.push_back(pauli_label(digits));
  }
  return GeneratorBasis(BasisKind::PauliStrings, dim, std::move(gens), std::move(labels));
}

Matrix hermitian_commutator(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
    throw ValidationError("commutator: dimension mismatch");
  }
  return kI * commutator(a, b);
}

StructureTensor::StructureTensor(IndexList subset, std::size_t basis_size,
                                 std::map<std::pair<std::size_t, std::size_t>, RealVector> upper)
    : subset_(std::move(subset)), basis_size_(basis_size), upper_(std::move(upper)) {}

RealVector StructureTensor::entry(std::size_t j, std::size_t l) const {
  if (j == l) {
    if (std::find(subset_.begin(), subset_.end(), j) == subset_.end()) {
      throw ValidationError("structure tensor: index not in subset");
    }
    return RealVector::Zero(static_cast<Eigen::Index>(basis_size_));
  }
  auto key = j < l ? std::make_pair(j, l) : std::make_pair(l, j);
  auto it = upper_.find(key);
  if (it == upper_.end()) throw ValidationError("structure tensor: pair not in subset");
  return j < l ? it->second : RealVector(-it->second);
}

StructureTensor structure_tensor(const GeneratorBasis& basis, const IndexList& subset) {
  basis.check_subset(subset);
  std::map<std::pair<std::size_t, std::size_t>, RealVector> upper;
  for (std::size_t a = 0; a < subset.size(); ++a) {
    for (std::size_t b = a + 1; b < subset.size(); ++b) {
      std::size_t j = std::min(subset[a], subset[b]);
      std::size_t l = std::max(subset[a], subset[b]);
      upper[{j, l}] = basis.coefficients(
          hermitian_commutator(basis.generator(j), basis.generator(l)));
    }
  }
  return StructureTensor(subset, basis.size(), std::move(upper));
}

ClosureResult is_closed_subalgebra(const GeneratorBasis& basis, const IndexList& subset,
                                   double tol) {
  basis.check_subset(subset);
  ClosureResult result;
  for (std::size_t a = 0; a < subset.size(); ++a) {
    for (std::size_t b = a + 1; b < subset.size(); ++b) {
      Matrix c = hermitian_commutator(basis.generator(subset[a]), basis.generator(subset[b]));
      double residual = (c - basis.project(c, subset)).norm();
      result.worst_residual = std::max(result.worst_residual, residual);
    }
  }
  result.closed = result.worst_residual <= tol;
  return result;
}

}  // namespace qbrach
