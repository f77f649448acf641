#include "doctest.h"
#include "helpers.hpp"

using namespace limitlab;
using testing::Rng;
using testing::to_oracle;

TEST_SUITE("qtensor") {

TEST_CASE("sym_traceless examples") {
  CHECK(norm(sym_traceless(Mat3::identity())) == 0.0);

  Rng r(11);
  for (int i = 0; i < 100; ++i) {
    const QTensor q = r.tensor();
    CHECK(norm(sym_traceless(q.matrix()) - q) <= 1e-15);
  }

  Mat3 e12;
  e12(0, 1) = 1.0;
  oracle::M3 expect{};
  expect[0][1] = expect[1][0] = 0.5;
  CHECK(oracle::max_diff(to_oracle(sym_traceless(e12)), expect) == 0.0);

  for (int i = 0; i < 200; ++i) {
    const Mat3 m = r.matrix();
    CHECK(oracle::max_diff(to_oracle(sym_traceless(m)), oracle::symtl(to_oracle(m))) <= 1e-15);
  }
}

TEST_CASE("uniaxial examples") {
  const QTensor q = uniaxial(Director(Vec3{{1, 0, 0}}), 1.0);
  oracle::M3 expect{};
  expect[0][0] = 2.0 / 3.0;
  expect[1][1] = expect[2][2] = -1.0 / 3.0;
  CHECK(oracle::max_diff(to_oracle(q), expect) <= 1e-15);

  Rng r(12);
  CHECK(norm(uniaxial(Director(r.unit()), 0.0)) == 0.0);

  const double k = 1.0 / std::sqrt(3.0);
  const QTensor d = uniaxial(Director(Vec3{{k, k, k}}), 1.5);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(d(i, j) == doctest::Approx(i == j ? 0.0 : 0.5).epsilon(1e-14));

  CHECK_THROWS_AS(Director(Vec3{{1.0, 1e-5, 0.0}}), Error);
  try {
    Director(Vec3{{1.1, 0, 0}});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonUnitDirector);
  }
  try {
    Mat3 m;
    m(0, 1) = 1.0;
    QTensor::from_matrix(m);
    FAIL("expected NotSymmetricTraceless");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotSymmetricTraceless);
  }
}

TEST_CASE("packed storage round-trips exactly") {
  Rng r(13);
  for (int i = 0; i < 100; ++i) {
    const QTensor q = r.tensor();
    const QTensor back = QTensor::from_packed(q.packed());
    CHECK(back.packed() == q.packed());
    CHECK(oracle::max_diff(to_oracle(back), to_oracle(q)) == 0.0);
  }
}

TEST_CASE("bform examples and symmetry") {
  Rng r(14);
  const QTensor q = r.tensor();
  CHECK(norm(bform(QTensor(), q)) == 0.0);

  const QTensor u = uniaxial(Director(Vec3{{1, 0, 0}}), 1.0);
  const QTensor b = bform(u, u);
  CHECK(b(0, 0) == doctest::Approx(4.0 / 9.0).epsilon(1e-14));
  CHECK(b(1, 1) == doctest::Approx(-2.0 / 9.0).epsilon(1e-14));
  CHECK(b(2, 2) == doctest::Approx(-2.0 / 9.0).epsilon(1e-14));

  for (int i = 0; i < 200; ++i) {
    const QTensor a = r.tensor(), c = r.tensor();
    CHECK(norm(bform(a, c) - bform(c, a)) <= 1e-15);
  }
}

TEST_CASE("cform examples and permutation invariance") {
  Rng r(15);
  const QTensor q = r.tensor();
  CHECK(norm(cform(q, QTensor(), QTensor())) == 0.0);

  const QTensor u = uniaxial(Director(r.unit()), 1.0);
  CHECK(norm(cform(u, u, u) - 2.0 * u) <= 1e-14);

  for (int i = 0; i < 200; ++i) {
    const QTensor a = r.tensor(), b = r.tensor(), c = r.tensor();
    const QTensor ref = cform(a, b, c);
    for (const QTensor& x : {cform(a, c, b), cform(b, a, c), cform(b, c, a), cform(c, a, b), cform(c, b, a)})
      CHECK(norm(x - ref) <= 1e-13);
  }
}

TEST_CASE("bform and cform agree with index loops") {
  Rng r(16);
  double worst_b = 0, worst_c = 0;
  for (int s = 0; s < 1000; ++s) {
    const QTensor a = r.tensor(), b = r.tensor(), c = r.tensor();
    const auto A = to_oracle(a), B = to_oracle(b), C = to_oracle(c);
    // Q1 Q2 + Q2^T Q1^T - (2/3)(Q1:Q2) I
    oracle::M3 bref = oracle::add(oracle::mul(A, B), oracle::mul(oracle::transpose(B), oracle::transpose(A)));
    bref = oracle::add(bref, oracle::identity(), -2.0 / 3.0 * oracle::contract(A, B));
    // Q1 (Q2:Q3) + Q2 (Q1:Q3) + Q3 (Q1:Q2)
    oracle::M3 cref = oracle::scale(oracle::contract(B, C), A);
    cref = oracle::add(cref, B, oracle::contract(A, C));
    cref = oracle::add(cref, C, oracle::contract(A, B));
    worst_b = std::max(worst_b, oracle::max_diff(to_oracle(bform(a, b)), bref));
    worst_c = std::max(worst_c, oracle::max_diff(to_oracle(cform(a, b, c)), cref));
  }
  CHECK(worst_b <= 1e-14);
  CHECK(worst_c <= 1e-14);
}

TEST_CASE("commutator examples") {
  Rng r(17);
  const Mat3 a = r.matrix();
  CHECK(max_abs(commutator(a, a)) == 0.0);

  for (int i = 0; i < 100; ++i) {
    const Mat3 w = antisym(r.matrix());
    const Mat3 c = commutator(w, r.tensor().matrix());
    CHECK(max_abs(c - transpose(c)) <= 1e-15);
  }

  // A = e1e2 - e2e1, B = diag(1,-1,0): direct multiplication gives AB - BA = -2(e1e2 + e2e1)
  Mat3 w;
  w(0, 1) = 1.0;
  w(1, 0) = -1.0;
  const Mat3 d = Mat3::diag(1, -1, 0);
  const oracle::M3 ref = oracle::add(oracle::mul(to_oracle(w), to_oracle(d)), oracle::mul(to_oracle(d), to_oracle(w)), -1.0);
  CHECK(oracle::max_diff(to_oracle(commutator(w, d)), ref) == 0.0);
  CHECK(commutator(w, d)(0, 1) == -2.0);
  CHECK(commutator(w, d)(1, 0) == -2.0);
}

TEST_CASE("frobenius and biaxiality") {
  Rng r(18);
  for (int i = 0; i < 50; ++i) {
    const double s = r.uniform(-2, 2);
    const QTensor q = uniaxial(Director(r.unit()), s);
    CHECK(frobenius(q, q) == doctest::Approx(2.0 * s * s / 3.0).epsilon(1e-13));
    CHECK(biaxiality(q) <= 1e-12);
  }
  const double k = 1.0 / std::sqrt(2.0);
  CHECK(biaxiality(sym_traceless(Mat3::diag(k, -k, 0))) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(biaxiality(QTensor()) == 0.0);
  for (int i = 0; i < 200; ++i) {
    const double b = biaxiality(r.tensor());
    CHECK(b >= 0.0);
    CHECK(b <= 1.0);
  }
}

TEST_CASE("closure and projection self-adjointness") {
  Rng r(19);
  double closure = 0, adj = 0;
  auto res = [](const QTensor& q) {
    const auto m = to_oracle(q);
    return std::max(oracle::max_diff(m, oracle::transpose(m)), std::abs(oracle::trace(m)));
  };
  for (int i = 0; i < 1000; ++i) {
    const QTensor a = r.tensor(), b = r.tensor(), c = r.tensor();
    closure = std::max({closure, res(bform(a, b)), res(cform(a, b, c)), res(a + b), res(2.5 * a - c)});
    const Mat3 m = r.matrix();
    adj = std::max(adj, std::abs(frobenius(sym_traceless(m), a) - oracle::contract(to_oracle(m), to_oracle(a))));
  }
  CHECK(closure <= 1e-13);
  CHECK(adj <= 1e-13);
}

}  // TEST_SUITE
