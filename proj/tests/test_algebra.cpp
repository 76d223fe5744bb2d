#include <doctest.h>

#include <random>

#include "locus/algebra.hpp"

using namespace locus;

namespace {

CMatrix sigma_x() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

CMatrix sigma_z() {
  CMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

OperatorAlgebra span_i_sigma_x() {
  return generate({sigma_x()}, 2);
}

CMatrix random_matrix(int n, std::mt19937& rng) {
  std::normal_distribution<double> g;
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

}  // namespace

TEST_CASE("generate") {
  const OperatorAlgebra scalars3 = generate({}, 3);
  CHECK(scalars3.dim() == 1);
  CHECK(equal_algebras(scalars3, scalar_algebra(3)));

  const OperatorAlgebra ix = span_i_sigma_x();
  CHECK(ix.dim() == 2);
  CHECK(contains(ix, sigma_x()));
  CHECK(contains(ix, CMatrix::Identity(2, 2)));

  const OperatorAlgebra m2 = generate({sigma_x(), sigma_z()}, 2);
  CHECK(m2.dim() == 4);
  CHECK(equal_algebras(m2, full_algebra(2)));
}

TEST_CASE("generate output satisfies the algebra invariants") {
  std::mt19937 rng(11);
  for (int n = 2; n <= 4; ++n) {
    const OperatorAlgebra a = generate({random_matrix(n, rng)}, n);
    const AlgebraCheck c = validate_algebra(a);
    CHECK_MESSAGE(c.ok, c.issue);
  }
}

TEST_CASE("commutant") {
  CHECK(equal_algebras(commutant(full_algebra(2)), scalar_algebra(2)));
  CHECK(equal_algebras(commutant(diagonal_algebra(4)), diagonal_algebra(4)));

  const CMatrix i2 = CMatrix::Identity(2, 2);
  const OperatorAlgebra left =
      generate({kron(sigma_x(), i2), kron(sigma_z(), i2)}, 4);
  REQUIRE(left.dim() == 4);
  const OperatorAlgebra right =
      generate({kron(i2, sigma_x()), kron(i2, sigma_z())}, 4);
  CHECK(equal_algebras(commutant(left), right));
  CHECK(equal_algebras(commutant(right), left));
}

TEST_CASE("double commutant") {
  CHECK(equal_algebras(double_commutant(scalar_algebra(3)), scalar_algebra(3)));

  const OperatorAlgebra ix = span_i_sigma_x();
  CHECK(equal_algebras(double_commutant(ix), ix));

  std::mt19937 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + trial % 3;
    const OperatorAlgebra a = generate({random_matrix(n, rng)}, n);
    const OperatorAlgebra dc = double_commutant(a);
    CHECK(subalgebra_of(a, dc));  // extensive
    CHECK(equal_algebras(double_commutant(dc), dc));  // idempotent
  }
}

TEST_CASE("intersect") {
  const OperatorAlgebra ix = span_i_sigma_x();
  CHECK(equal_algebras(intersect(ix, ix), ix));

  const CMatrix i2 = CMatrix::Identity(2, 2);
  const OperatorAlgebra left =
      generate({kron(sigma_x(), i2), kron(sigma_z(), i2)}, 4);
  const OperatorAlgebra right =
      generate({kron(i2, sigma_x()), kron(i2, sigma_z())}, 4);
  CHECK(equal_algebras(intersect(left, right), scalar_algebra(4)));

  CHECK(equal_algebras(intersect(diagonal_algebra(2), ix), scalar_algebra(2)));
}

TEST_CASE("contains / subalgebra / equality") {
  CHECK(contains(scalar_algebra(3), CMatrix::Identity(3, 3) * 5.0));
  CHECK_FALSE(contains(diagonal_algebra(2), sigma_x()));
  CHECK(equal_algebras(generate({sigma_x(), sigma_z()}, 2), full_algebra(2)));
  CHECK(subalgebra_of(scalar_algebra(2), diagonal_algebra(2)));
  CHECK_FALSE(subalgebra_of(diagonal_algebra(2), scalar_algebra(2)));
}

TEST_CASE("center") {
  CHECK(equal_algebras(center(full_algebra(3)), scalar_algebra(3)));
  CHECK(equal_algebras(center(diagonal_algebra(4)), diagonal_algebra(4)));

  const CMatrix i2 = CMatrix::Identity(2, 2);
  const OperatorAlgebra left =
      generate({kron(sigma_x(), i2), kron(sigma_z(), i2)}, 4);
  CHECK(equal_algebras(center(left), scalar_algebra(4)));
}

TEST_CASE("validate_algebra rejects a non-adjoint-closed span") {
  CMatrix n = CMatrix::Zero(2, 2);
  n(0, 1) = 1.0;  // nilpotent, n^H outside span{I, n}
  OperatorAlgebra bad;
  bad.ambient_dim = 2;
  bad.basis.push_back(CMatrix::Identity(2, 2) / std::sqrt(2.0));
  bad.basis.push_back(n);
  const AlgebraCheck c = validate_algebra(bad);
  CHECK_FALSE(c.ok);
}

TEST_CASE("validate_algebra rejects a non-orthonormal basis") {
  OperatorAlgebra bad;
  bad.ambient_dim = 2;
  bad.basis.push_back(CMatrix::Identity(2, 2));  // HS norm sqrt(2), not 1
  const AlgebraCheck c = validate_algebra(bad);
  CHECK_FALSE(c.ok);
  CHECK(c.issue.find("orthonormal") != std::string::npos);
}
