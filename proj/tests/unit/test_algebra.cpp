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

#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qbrach/algebra.hpp"
#include "qbrach/errors.hpp"
#include "qbrach/solvers.hpp"

using namespace qbrach;

TEST_CASE("gell-mann generators are orthogonal, traceless and Hermitian") {
  for (std::size_t n = 2; n <= 5; ++n) {
    const GeneratorBasis b = build_gellmann_basis(n);
    REQUIRE(b.size() == n * n - 1);
    for (std::size_t i = 0; i < b.size(); ++i) {
      CHECK(std::abs(b.generator(i).trace()) < 1e-14);
      CHECK(hermiticity_defect(b.generator(i)) < 1e-14);
      for (std::size_t j = 0; j < b.size(); ++j) {
        const double want = i == j ? static_cast<double>(n) : 0.0;
        CHECK(std::abs((b.generator(i) * b.generator(j)).trace() - want) < 1e-12);
      }
    }
  }
}

TEST_CASE("su(2) gell-mann basis is the Pauli triple") {
  const GeneratorBasis b = build_gellmann_basis(2);
  CHECK((b.generator(0) - oracle::sx()).norm() < 1e-15);
  CHECK((b.generator(1) - oracle::sy()).norm() < 1e-15);
  CHECK((b.generator(2) - oracle::sz()).norm() < 1e-15);
}

TEST_CASE("pauli string indexing and labels") {
  const GeneratorBasis b = build_pauli_string_basis(2);
  REQUIRE(b.size() == 15);
  CHECK(b.index_of("23") == 10);
  CHECK(b.index_of("10") == 3);
  CHECK(b.index_of("01") == 0);
  CHECK(b.index_of("33") == 14);
  CHECK(b.index_of(b.label(9)) == 9);
  CHECK(b.index_of("7") == 7);
  // s1^2 s2^3 = sy (x) sz, qubit 1 most significant.
  CHECK((b.generator(10) - kron(oracle::sy(), oracle::sz())).norm() < 1e-15);
  CHECK_THROWS_AS(b.index_of("44"), ValidationError);
  CHECK_THROWS_AS(b.index_of("00"), ValidationError);

  const GeneratorBasis q = build_pauli_string_basis(1);
  CHECK(q.index_of("x") == 0);
  CHECK(q.index_of("z") == 2);
  for (std::size_t i = 0; i < q.size(); ++i) {
    CHECK(std::abs((q.generator(i) * q.generator(i)).trace().real() - 2.0) < 1e-15);
  }
}

TEST_CASE("basis construction rejects bad sizes") {
  CHECK_THROWS_AS(build_gellmann_basis(1), ValidationError);
  CHECK_THROWS_AS(build_pauli_string_basis(0), ValidationError);
  CHECK_THROWS_AS(build_pauli_string_basis(7), ValidationError);
  CHECK(basis_kind_from_string("pauli_strings") == BasisKind::PauliStrings);
  CHECK_THROWS_AS(basis_kind_from_string("spin"), ValidationError);
}

TEST_CASE("coefficients and combine invert each other on traceless Hermitian matrices") {
  std::mt19937_64 rng(11);
  for (std::size_t n = 2; n <= 4; ++n) {
    const GeneratorBasis b = build_gellmann_basis(n);
    Matrix a = oracle::random_hermitian(n, rng);
    a -= (a.trace() / static_cast<double>(n)) * oracle::id(n);
    const RealVector c = b.coefficients(a);
    IndexList all(b.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    CHECK((b.combine(c, all) - a).norm() < 1e-12);
    // project onto a subset and its complement
    const IndexList sub{0, 2};
    const Matrix p = b.project(a, sub) + b.project(a, b.complement(sub));
    CHECK((p - a).norm() < 1e-12);
  }
}

TEST_CASE("subset validation") {
  const GeneratorBasis b = build_gellmann_basis(3);
  CHECK_THROWS_AS(b.check_subset({1, 1}), ValidationError);
  CHECK_THROWS_AS(b.check_subset({8}), ValidationError);
  CHECK_NOTHROW(b.check_subset({0, 7}));
  CHECK(b.complement({0, 7}).size() == 6);
}

TEST_CASE("structure tensor matches explicit commutators") {
  const GeneratorBasis b = build_pauli_string_basis(1);
  const StructureTensor st = structure_tensor(b, {0, 1, 2});
  // i[sx, sy] = i (2i sz) = -2 sz
  const RealVector c = st.entry(0, 1);
  CHECK(c(0) == doctest::Approx(0.0));
  CHECK(c(1) == doctest::Approx(0.0));
  CHECK(c(2) == doctest::Approx(-2.0));
  CHECK(st.entry(1, 0)(2) == doctest::Approx(2.0));
  CHECK(st.entry(2, 2).norm() == 0.0);

  const GeneratorBasis g = build_gellmann_basis(3);
  const IndexList sub{0, 3, 5, 7};
  const StructureTensor t3 = structure_tensor(g, sub);
  for (std::size_t j : sub) {
    for (std::size_t l : sub) {
      const Matrix direct = kI * (g.generator(j) * g.generator(l) - g.generator(l) * g.generator(j));
      IndexList all(g.size());
      for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
      CHECK((g.combine(t3.entry(j, l), all) - direct).norm() < 1e-12);
    }
  }
}

namespace {

// Brute-force closure: project every i[X_j, X_l] onto the subset span.
double closure_residual(const GeneratorBasis& b, const IndexList& sub) {
  double worst = 0.0;
  for (std::size_t j : sub) {
    for (std::size_t l : sub) {
      const Matrix c = kI * (b.generator(j) * b.generator(l) - b.generator(l) * b.generator(j));
      Matrix rest = c;
      for (std::size_t m : sub) {
        const cplx coef = (c * b.generator(m)).trace() / static_cast<double>(b.dim());
        rest -= coef * b.generator(m);
      }
      worst = std::max(worst, rest.norm());
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("closure detection") {
  const GeneratorBasis q = build_pauli_string_basis(1);
  CHECK(is_closed_subalgebra(q, {2}).closed);
  CHECK_FALSE(is_closed_subalgebra(q, {0, 1}).closed);
  CHECK(is_closed_subalgebra(q, {}).closed);

  // The two-qubit forbidden set is not closed: i[s1^2, s1^1 s2^2] = 2 s1^3 s2^2
  // leaves it. The residual is the norm of that escaping component.
  const GeneratorBasis p = build_pauli_string_basis(2);
  const Matrix escaped = hermitian_commutator(p.generator(p.index_of("20")), p.generator(p.index_of("12")));
  CHECK((escaped - 2.0 * p.generator(p.index_of("32"))).norm() < 1e-14);
  const ClosureResult r = is_closed_subalgebra(p, two_qubit_forbidden());
  CHECK_FALSE(r.closed);
  CHECK(r.worst_residual == doctest::Approx(closure_residual(p, two_qubit_forbidden())));
  // the single-qubit algebras are closed
  CHECK(is_closed_subalgebra(p, {p.index_of("10"), p.index_of("20"), p.index_of("30")}).closed);
  CHECK(is_closed_subalgebra(p, {p.index_of("01"), p.index_of("02"), p.index_of("03"),
                                 p.index_of("10"), p.index_of("20"), p.index_of("30")}).closed);

  // random subsets of su(3) against the brute-force residual
  const GeneratorBasis g = build_gellmann_basis(3);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    IndexList sub;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (rng() % 3 == 0) sub.push_back(i);
    }
    const bool expect = closure_residual(g, sub) <= 1e-10;
    CHECK(is_closed_subalgebra(g, sub).closed == expect);
  }
}

TEST_CASE("hermitian commutator") {
  const Matrix c = hermitian_commutator(oracle::sx(), oracle::sy());
  CHECK((c + 2.0 * oracle::sz()).norm() < 1e-15);
  CHECK_THROWS_AS(hermitian_commutator(oracle::sx(), oracle::id(3)), ValidationError);
}
