#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "cf/tensor.hpp"

using namespace cf;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m.at(0, 1) = 1.0;
  m.at(1, 0) = 1.0;
  return m;
}

ComplexMatrix diag2(double a, double b) {
  ComplexMatrix m(2, 2);
  m.at(0, 0) = a;
  m.at(1, 1) = b;
  return m;
}

BlochVector random_unit(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  while (true) {
    const double x = u(rng), y = u(rng), z = u(rng);
    const double r = std::sqrt(x * x + y * y + z * z);
    if (r > 0.1 && r < 1.0) return BlochVector::normalized(x, y, z);
  }
}

ComplexMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ComplexMatrix m(r, c);
  for (cnum& e : m.entries) e = cnum{u(rng), u(rng)};
  return m;
}

ComplexMatrix random_hermitian(std::mt19937_64& rng, std::size_t n) {
  const ComplexMatrix a = random_matrix(rng, n, n);
  ComplexMatrix h = add(a, dagger(a));
  for (cnum& e : h.entries) e *= 0.5;
  return h;
}

DensityMatrix random_qubit_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const BlochVector n = random_unit(rng);
  const double w = u(rng);
  ComplexMatrix m = add(scale(projector_from_bloch(n, +1), w),
                        scale(projector_from_bloch(n, -1), 1.0 - w));
  return DensityMatrix(std::move(m));
}

}  // namespace

TEST_CASE("kron identity and projector cases") {
  const ComplexMatrix i2 = ComplexMatrix::identity(2);
  CHECK(approx_equal(kron(i2, i2), ComplexMatrix::identity(4), 0.0));

  const ComplexMatrix p = diag2(1.0, 0.0);
  ComplexMatrix expect(4, 4);
  expect.at(0, 0) = 1.0;
  CHECK(approx_equal(kron(p, p), expect, 0.0));
}

TEST_CASE("kron of two bit flips maps |00> to |11>") {
  const ComplexMatrix xx = kron(pauli_x(), pauli_x());
  const std::vector<cnum> e00{1.0, 0.0, 0.0, 0.0};
  const std::vector<cnum> out = matvec(xx, e00);
  CHECK(std::abs(out[3] - cnum{1.0, 0.0}) == 0.0);
  CHECK(std::abs(out[0]) == 0.0);
  CHECK(std::abs(out[1]) == 0.0);
  CHECK(std::abs(out[2]) == 0.0);
}

TEST_CASE("partial trace of a maximally entangled state is maximally mixed") {
  const std::vector<cnum> phi{kInvSqrt2, 0.0, 0.0, kInvSqrt2};
  const DensityMatrix bell = DensityMatrix::pure(phi);
  const DensityMatrix red = partial_trace(bell, {2, 2}, 0);
  CHECK(approx_equal(red.matrix(), DensityMatrix::maximally_mixed(2).matrix(),
                     1e-15));
}

TEST_CASE("partial trace of a product state recovers the kept factor") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const DensityMatrix a = random_qubit_state(rng);
    const DensityMatrix b = random_qubit_state(rng);
    const ComplexMatrix prod = kron(a.matrix(), b.matrix());
    const ComplexMatrix kept = partial_trace_matrix(prod, {2, 2}, 1);
    CHECK(max_abs_diff(kept, b.matrix()) < 1e-14);
  }
}

TEST_CASE("partial trace is linear and trace preserving") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix h1 = random_hermitian(rng, 4);
    const ComplexMatrix h2 = random_hermitian(rng, 4);
    const double alpha = 0.37;

    const ComplexMatrix lhs = partial_trace_matrix(
        add(scale(h1, alpha), h2), {2, 2}, trial % 2);
    const ComplexMatrix rhs =
        add(scale(partial_trace_matrix(h1, {2, 2}, trial % 2), alpha),
            partial_trace_matrix(h2, {2, 2}, trial % 2));
    CHECK(max_abs_diff(lhs, rhs) < 1e-13);

    CHECK(std::abs(trace(partial_trace_matrix(h1, {2, 2}, 0)) - trace(h1)) <
          1e-13);
  }
}

TEST_CASE("projectors from Bloch vectors") {
  CHECK(approx_equal(projector_from_bloch(BlochVector::unit(0, 0, 1), +1),
                     diag2(1.0, 0.0), 0.0));

  ComplexMatrix xminus(2, 2);
  xminus.at(0, 0) = 0.5;
  xminus.at(0, 1) = -0.5;
  xminus.at(1, 0) = -0.5;
  xminus.at(1, 1) = 0.5;
  CHECK(approx_equal(projector_from_bloch(BlochVector::unit(1, 0, 0), -1),
                     xminus, 0.0));
}

TEST_CASE("projector idempotence and completeness on random directions") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const BlochVector n = random_unit(rng);
    const ComplexMatrix plus = projector_from_bloch(n, +1);
    const ComplexMatrix minus = projector_from_bloch(n, -1);
    CHECK(max_abs_diff(matmul(plus, plus), plus) < 1e-12);
    CHECK(max_abs_diff(add(plus, minus), ComplexMatrix::identity(2)) < 1e-15);
    CHECK(std::abs(trace(plus) - cnum{1.0, 0.0}) < 1e-15);
  }
}

TEST_CASE("dagger distributes over kron") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix a = random_matrix(rng, 2, 3);
    const ComplexMatrix b = random_matrix(rng, 3, 2);
    CHECK(max_abs_diff(dagger(kron(a, b)), kron(dagger(a), dagger(b))) == 0.0);
  }
}

TEST_CASE("is_unitary accepts rotations and rejects projectors") {
  ComplexMatrix had(2, 2);
  had.at(0, 0) = kInvSqrt2;
  had.at(0, 1) = kInvSqrt2;
  had.at(1, 0) = kInvSqrt2;
  had.at(1, 1) = -kInvSqrt2;
  CHECK(is_unitary(had, 1e-12));
  CHECK_FALSE(is_unitary(diag2(1.0, 0.0), 1e-12));
}

TEST_CASE("dimension mismatches are rejected") {
  const ComplexMatrix a = ComplexMatrix(2, 3);
  const ComplexMatrix b = ComplexMatrix(2, 2);
  CHECK_THROWS_AS(matmul(a, b), std::invalid_argument);
  CHECK_THROWS_AS(trace(a), std::invalid_argument);
  CHECK_THROWS_AS(add(a, b), std::invalid_argument);
  CHECK_THROWS_AS(partial_trace_matrix(ComplexMatrix::identity(4), {2, 3}, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(partial_trace_matrix(ComplexMatrix::identity(4), {2, 2}, 2),
                  std::invalid_argument);
}

TEST_CASE("density matrix validation") {
  // Valid: maximally mixed in every supported dimension.
  for (std::size_t d : {2u, 4u, 8u}) {
    CHECK_NOTHROW(DensityMatrix::maximally_mixed(d));
  }

  // Not Hermitian.
  ComplexMatrix nh = diag2(0.5, 0.5);
  nh.at(0, 1) = cnum{0.1, 0.0};
  CHECK_THROWS_AS(DensityMatrix{nh}, InvariantError);

  // Wrong trace.
  CHECK_THROWS_AS(DensityMatrix{diag2(0.7, 0.7)}, InvariantError);

  // Indefinite but Hermitian with unit trace (2x2 minor check).
  ComplexMatrix indef = diag2(0.5, 0.5);
  indef.at(0, 1) = 0.7;
  indef.at(1, 0) = 0.7;
  CHECK_THROWS_AS(DensityMatrix{indef}, InvariantError);

  // Indefinite 4x4 (Cholesky path).
  ComplexMatrix big(4, 4);
  big.at(0, 0) = 0.8;
  big.at(1, 1) = 0.7;
  big.at(2, 2) = -0.5;
  big.at(3, 3) = 0.0;
  CHECK_THROWS_AS(DensityMatrix{big}, InvariantError);

  // Rank-deficient but positive: fine.
  ComplexMatrix rank1(4, 4);
  rank1.at(0, 0) = 0.5;
  rank1.at(0, 3) = 0.5;
  rank1.at(3, 0) = 0.5;
  rank1.at(3, 3) = 0.5;
  CHECK_NOTHROW(DensityMatrix{rank1});
}

TEST_CASE("bloch vector norms") {
  CHECK_THROWS_AS(BlochVector::unit(0.5, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(BlochVector::normalized(0.0, 0.0, 0.0),
                  std::invalid_argument);
  const BlochVector n = BlochVector::normalized(0.70710678, 0.0, 0.70710678);
  CHECK(std::abs(n.norm() - 1.0) <= 1e-15);
  CHECK(n.x == doctest::Approx(kInvSqrt2).epsilon(1e-12));
}
