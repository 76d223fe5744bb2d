#include <doctest.h>

#include "locus/tps.hpp"

using namespace locus;

namespace {

std::vector<std::vector<int>> dims_list(const std::vector<DimVector>& fs) {
  std::vector<std::vector<int>> out;
  for (const auto& f : fs) out.push_back(f.dims);
  return out;
}

}  // namespace

TEST_CASE("factorizations") {
  CHECK(dims_list(factorizations(9)) ==
        std::vector<std::vector<int>>{{9}, {3, 3}});
  CHECK(dims_list(factorizations(7)) == std::vector<std::vector<int>>{{7}});
  CHECK(dims_list(factorizations(12)) ==
        std::vector<std::vector<int>>{{12}, {2, 6}, {3, 4}, {2, 2, 3}});
  for (const auto& f : factorizations(60)) CHECK(f.product() == 60);
}

TEST_CASE("svozil basis partitions") {
  const BasisPartitionSet s32 = svozil_partitions(DimVector({3, 2}));
  REQUIRE(s32.partitions.size() == 2);
  CHECK(s32.partitions[0] ==
        Partition::from_blocks(6, {{0, 1}, {2, 3}, {4, 5}}));
  CHECK(s32.partitions[1] == Partition::from_blocks(6, {{0, 2, 4}, {1, 3, 5}}));

  const BasisPartitionSet s22 = svozil_partitions(DimVector({2, 2}));
  REQUIRE(s22.partitions.size() == 2);
  CHECK(s22.partitions[0] == Partition::from_blocks(4, {{0, 1}, {2, 3}}));
  CHECK(s22.partitions[1] == Partition::from_blocks(4, {{0, 2}, {1, 3}}));
  // Any block choice, one per partition, intersects in exactly one index.
  for (const auto& b0 : s22.partitions[0].blocks)
    for (const auto& b1 : s22.partitions[1].blocks) {
      int common = 0;
      for (int x : b0)
        for (int y : b1)
          if (x == y) ++common;
      CHECK(common == 1);
    }

  const BasisPartitionSet single = svozil_partitions(DimVector({5}));
  REQUIRE(single.partitions.size() == 1);
  CHECK(single.partitions[0] == Partition::finest(5));
}

TEST_CASE("local algebras of the identity frame") {
  const TpsSpec tps = TpsSpec::standard(DimVector({2, 2}));
  const OperatorAlgebra a0 = local_algebra(tps, 0);
  const OperatorAlgebra a1 = local_algebra(tps, 1);
  CHECK(a0.dim() == 4);
  CHECK(a1.dim() == 4);

  const CMatrix i2 = CMatrix::Identity(2, 2);
  CMatrix sx(2, 2), sz(2, 2);
  sx << 0, 1, 1, 0;
  sz << 1, 0, 0, -1;
  const OperatorAlgebra m2i = generate({kron(sx, i2), kron(sz, i2)}, 4);
  CHECK(equal_algebras(a0, m2i));

  // Disjoint legs commute elementwise.
  for (const auto& x : a0.basis)
    for (const auto& y : a1.basis)
      CHECK((x * y - y * x).norm() < 1e-12);
}

TEST_CASE("Bell-twisted local algebra") {
  const TpsSpec tw = twist(TpsSpec::standard(DimVector({2, 2})),
                           bell_change_unitary());
  const OperatorAlgebra b0 = local_algebra(tw, 0);
  const OperatorAlgebra b1 = local_algebra(tw, 1);
  const OperatorAlgebra a0 =
      local_algebra(TpsSpec::standard(DimVector({2, 2})), 0);
  CHECK(b0.dim() == 4);
  CHECK_FALSE(equal_algebras(b0, a0));
  CHECK(equal_algebras(commutant(b0), b1));
  // The two frames share nothing but scalars, in all four pairings.
  const OperatorAlgebra a1 =
      local_algebra(TpsSpec::standard(DimVector({2, 2})), 1);
  for (const auto* s : {&a0, &a1})
    for (const auto* t : {&b0, &b1})
      CHECK(intersect(*s, *t).dim() == 1);
}

TEST_CASE("twist") {
  const TpsSpec tps = TpsSpec::standard(DimVector({2, 2}));
  const TpsSpec same = twist(tps, CMatrix::Identity(4, 4));
  CHECK(approx_equal(same.unitary, tps.unitary));

  const CMatrix u = bell_change_unitary();
  const TpsSpec back = twist(twist(tps, u), u.adjoint());
  for (int i = 0; i < 2; ++i)
    CHECK(equal_algebras(local_algebra(back, i), local_algebra(tps, i)));

  CMatrix bad = CMatrix::Identity(4, 4);
  bad(0, 0) = 2.0;
  CHECK_THROWS_WITH_AS(twist(tps, bad), doctest::Contains("not-unitary"),
                       std::invalid_argument);
}

TEST_CASE("bell_change_unitary is unitary and maps e0 to phi+") {
  const CMatrix u = bell_change_unitary();
  CHECK(is_unitary(u));
  CVector e0 = CVector::Zero(4);
  e0(0) = 1.0;
  CVector phi = u * e0;
  CHECK(std::abs(phi(0) - 1.0 / std::sqrt(2.0)) < 1e-12);
  CHECK(std::abs(phi(3) - 1.0 / std::sqrt(2.0)) < 1e-12);
}

TEST_CASE("reconstruct_qubits") {
  const QubitReconstruction full4 = reconstruct_qubits(full_algebra(4));
  REQUIRE(full4.tps.has_value());
  CHECK(full4.factor_side == 4);
  CHECK(full4.tps->dims.dims == std::vector<int>{2, 2});
  REQUIRE(full4.partitions.has_value());
  CHECK(full4.partitions->partitions.size() == 2);

  const QubitReconstruction m3 = reconstruct_qubits(full_algebra(3));
  CHECK_FALSE(m3.tps.has_value());
  CHECK(m3.factor_side == 3);
  CHECK(m3.reason == "prime dimension");

  const QubitReconstruction d2 = reconstruct_qubits(diagonal_algebra(2));
  CHECK_FALSE(d2.tps.has_value());
  CHECK(d2.factor_side == 0);
  CHECK(d2.reason == "not a factor");
}

TEST_CASE("hermitian basis is Hermitian and HS-orthogonal") {
  for (int d : {2, 3, 4}) {
    const auto basis = hermitian_basis(d);
    CHECK(basis.size() == static_cast<size_t>(d) * d);
    for (size_t i = 0; i < basis.size(); ++i) {
      CHECK((basis[i] - basis[i].adjoint()).norm() < 1e-12);
      for (size_t j = i + 1; j < basis.size(); ++j)
        CHECK(std::abs((basis[i].adjoint() * basis[j]).trace()) < 1e-12);
    }
  }
}
