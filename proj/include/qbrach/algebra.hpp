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

#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qbrach/linalg.hpp"

namespace qbrach {

using IndexList = std::vector<std::size_t>;

enum class BasisKind { GellMann, PauliStrings };

const char* to_string(BasisKind kind);
BasisKind basis_kind_from_string(const std::string& name);

/// Hermitian traceless generators of su(N) normalized as Tr(X_i X_j) = N d_ij.
/// Immutable once built.
class GeneratorBasis {
 public:
  GeneratorBasis(BasisKind kind, std::size_t dim, std::vector<Matrix> generators,
                 std::vector<std::string> labels);

  BasisKind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }
  /// Number of generators, N^2 - 1.
  std::size_t size() const { return generators_.size(); }

  const Matrix& generator(std::size_t i) const;
  const std::vector<Matrix>& generators() const { return generators_; }
  const std::string& label(std::size_t i) const;
  const std::vector<std::string>& labels() const { return labels_; }

  /// Resolves a label. Besides the canonical label this accepts the digit
  /// form of Pauli strings ("23" for s1^2 s2^3), the Pauli letters "x", "y",
  /// "z" for N = 2, and a decimal index.
  std::size_t index_of(const std::string& label) const;

  /// c_m = Re Tr(A X_m) / N for every generator.
  RealVector coefficients(const Matrix& a) const;

  /// sum_m c_m X_m over the given subset (coefficients indexed like subset).
  Matrix combine(const RealVector& coeffs, const IndexList& subset) const;

  /// Orthogonal projection of A onto span{X_m : m in subset}.
  Matrix project(const Matrix& a, const IndexList& subset) const;

  /// Throws ValidationError on an out-of-range or repeated index.
  void check_subset(const IndexList& subset) const;

  /// Every index not in `subset`, ascending.
  IndexList complement(const IndexList& subset) const;

 private:
  BasisKind kind_;
  std::size_t dim_;
  std::vector<Matrix> generators_;
  std::vector<std::string> labels_;
};

/// Generalized Gell-Mann matrices scaled by sqrt(N/2). Order: symmetric
/// pairs (row-major), antisymmetric pairs, diagonal.
GeneratorBasis build_gellmann_basis(std::size_t n);

/// Tensor products of Pauli matrices on `qubits` qubits, identity string
/// excluded. Index of the digit string d1 d2 ... dn (base 4, qubit 1 most
/// significant) is its value minus one.
GeneratorBasis build_pauli_string_basis(std::size_t qubits);

/// i(AB - BA).
Matrix hermitian_commutator(const Matrix& a, const Matrix& b);

/// Expansion coefficients of i[X_j, X_l] for pairs drawn from a subset.
class StructureTensor {
 public:
  StructureTensor() = default;
  StructureTensor(IndexList subset, std::size_t basis_size,
                  std::map<std::pair<std::size_t, std::size_t>, RealVector> upper);

  const IndexList& subset() const { return subset_; }
  bool empty() const { return subset_.empty(); }

  /// Coefficients c with i[X_j, X_l] = sum_m c_m X_m over the full basis.
  /// j and l are basis indices from the subset; (l, j) returns the negation.
  RealVector entry(std::size_t j, std::size_t l) const;

 private:
  IndexList subset_;
  std::size_t basis_size_ = 0;
  std::map<std::pair<std::size_t, std::size_t>, RealVector> upper_;
};

StructureTensor structure_tensor(const GeneratorBasis& basis, const IndexList& subset);

struct ClosureResult {
  bool closed = true;
  double worst_residual = 0.0;
};

/// Checks that every i[X_j, X_l] with j, l in `subset` lies in the subset's
/// span. The empty set is trivially closed.
ClosureResult is_closed_subalgebra(const GeneratorBasis& basis, const IndexList& subset,
                                   double tol = 1e-10);

}  // namespace qbrach
