#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>
#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "openq/rotations.hpp"

using namespace openq;

namespace {

const cplx I(0.0, 1.0);

// CG table of l1 x l2 built from scratch: the top state of each multiplet is
// fixed by orthogonality to the higher multiplets and the sign convention
// <l1 l1 l2 (L - l1)|L L> > 0, then lowered with J- = J1- + J2-.
// Result: map (two_l, two_m) -> coefficient vector over |m1 m2>, index r1 * d2 + r2.
std::map<std::pair<int, int>, Eigen::VectorXd> cg_by_lowering(int two_l1, int two_l2) {
  const int d1 = two_l1 + 1, d2 = two_l2 + 1;
  const Eigen::MatrixXd jm1 = angular_momentum_minus(two_l1).real();
  const Eigen::MatrixXd jm2 = angular_momentum_minus(two_l2).real();
  const Eigen::MatrixXd jm = Eigen::kroneckerProduct(jm1, Eigen::MatrixXd::Identity(d2, d2)) +
                             Eigen::kroneckerProduct(Eigen::MatrixXd::Identity(d1, d1), jm2);
  auto two_m_of = [&](int idx) { return (two_l1 - 2 * (idx / d2)) + (two_l2 - 2 * (idx % d2)); };
  std::map<std::pair<int, int>, Eigen::VectorXd> out;
  for (int two_l = two_l1 + two_l2; two_l >= std::abs(two_l1 - two_l2); two_l -= 2) {
    Eigen::VectorXd top = Eigen::VectorXd::Zero(d1 * d2);
    for (int idx = 0; idx < d1 * d2; ++idx)
      if (two_m_of(idx) == two_l) top(idx) = 1.0 + 0.1 * idx;
    for (const auto& [key, v] : out)
      if (key.second == two_l) top -= v.dot(top) * v;
    top.normalize();
    const int r1 = 0, r2 = (two_l2 - (two_l - two_l1)) / 2;
    if (top(r1 * d2 + r2) < 0.0) top = -top;
    Eigen::VectorXd state = top;
    for (int two_m = two_l; two_m >= -two_l; two_m -= 2) {
      out[{two_l, two_m}] = state;
      if (two_m > -two_l) {
        state = jm * state;
        state.normalize();
      }
    }
  }
  return out;
}

Eigen::MatrixXcd expm_hermitian(const Eigen::MatrixXcd& h, cplx factor) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  Eigen::VectorXcd e = (factor * es.eigenvalues().cast<cplx>()).array().exp();
  return es.eigenvectors() * e.asDiagonal() * es.eigenvectors().adjoint();
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::config_parse;
}

}  // namespace

TEST_CASE("Clebsch-Gordan examples") {
  const double r2 = 1.0 / std::sqrt(2.0), r3 = 1.0 / std::sqrt(3.0);
  CHECK(clebsch_gordan(1, 1, 1, -1, 2, 0) == doctest::Approx(r2));
  CHECK(clebsch_gordan(1, 1, 1, -1, 0, 0) == doctest::Approx(r2));
  CHECK(clebsch_gordan(1, -1, 1, 1, 0, 0) == doctest::Approx(-r2));
  CHECK(clebsch_gordan(2, 2, 2, -2, 0, 0) == doctest::Approx(r3));
  CHECK(clebsch_gordan(2, 0, 2, 0, 0, 0) == doctest::Approx(-r3));
  CHECK(clebsch_gordan(2, 0, 2, 0, 2, 0) == 0.0);
  CHECK(clebsch_gordan(2, 2, 2, 0, 4, 2) == doctest::Approx(r2));
  CHECK(clebsch_gordan(2, 2, 2, 0, 4, 4) == 0.0);
  CHECK(clebsch_gordan(2, 2, 2, 2, 6, 4) == 0.0);
  CHECK(clebsch_gordan(4, 4, 1, 1, 5, 5) == doctest::Approx(1.0));
}

TEST_CASE("Clebsch-Gordan against lowering-operator construction") {
  for (int two_l1 = 0; two_l1 <= 4; ++two_l1)
    for (int two_l2 = 0; two_l2 <= 4; ++two_l2) {
      const auto table = cg_by_lowering(two_l1, two_l2);
      const int d2 = two_l2 + 1;
      for (const auto& [key, vec] : table)
        for (int idx = 0; idx < vec.size(); ++idx) {
          const int two_m1 = two_l1 - 2 * (idx / d2), two_m2 = two_l2 - 2 * (idx % d2);
          CAPTURE(two_l1);
          CAPTURE(two_l2);
          CAPTURE(key.first);
          CAPTURE(key.second);
          CHECK(clebsch_gordan(two_l1, two_m1, two_l2, two_m2, key.first, key.second) ==
                doctest::Approx(vec(idx)).epsilon(1e-12).scale(1.0));
        }
    }
  CHECK(cg_orthogonality_defect(6) < 1e-12);
}

TEST_CASE("invalid labels") {
  CHECK(code_of([] { clebsch_gordan(2, 3, 2, 0, 2, 0); }) == ErrorCode::invalid_label);
  CHECK(code_of([] { clebsch_gordan(2, 4, 2, 0, 2, 0); }) == ErrorCode::invalid_label);
  CHECK(code_of([] { wigner_small_d(-1, 0.3); }) == ErrorCode::invalid_label);
  CHECK(code_of([] { AngularMomentumLabel{1, 0}.validate(); }) == ErrorCode::invalid_label);
  CHECK(AngularMomentumLabel{3, -1}.index() == 2);
  CHECK(AngularMomentumLabel{3, -1}.dim() == 4);
}

TEST_CASE("Wigner small-d against the matrix exponential") {
  for (int two_l = 0; two_l <= 8; ++two_l) {
    const Eigen::MatrixXcd jy = (angular_momentum_plus(two_l) - angular_momentum_minus(two_l)) / (2.0 * I);
    for (double beta : {0.0, 0.4, 1.9, M_PI, 5.5}) {
      const Eigen::MatrixXcd oracle = expm_hermitian(jy, -I * beta);
      const Eigen::MatrixXd d = wigner_small_d(two_l, beta);
      CHECK((oracle - d.cast<cplx>()).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  const auto half = wigner_small_d(1, 0.8);
  CHECK(half(0, 0) == doctest::Approx(std::cos(0.4)));
  CHECK(half(0, 1) == doctest::Approx(-std::sin(0.4)));
  for (int two_l : {2, 3, 4}) {
    const auto flip = wigner_small_d(two_l, M_PI);
    for (int r = 0; r <= two_l; ++r) {
      const int two_m = two_l - 2 * r;
      const double sign = ((two_l - two_m) / 2) % 2 == 0 ? 1.0 : -1.0;
      CHECK(flip(two_l - r, r) == doctest::Approx(sign));
    }
  }
}

TEST_CASE("Wigner D is a unitary representation") {
  const auto d1 = wigner_D(3, 0.3, 1.1, -0.7);
  CHECK((d1 * d1.adjoint() - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-13);
  const auto dz = wigner_D(2, 0.5, 0.0, 0.0);
  CHECK(std::abs(dz(0, 0) - std::exp(-I * 0.5)) < 1e-15);
  CHECK(std::abs(dz(2, 2) - std::exp(I * 0.5)) < 1e-15);
}

TEST_CASE("tensor operator bases") {
  const auto b = tensor_operator_basis(3, 5, "n=1");
  CHECK(b.radial_label == "n=1");
  CHECK(b.size() == 24);
  CHECK(b.ranks.size() == 4);
  CHECK(b.ranks.front().two_l == 2);
  CHECK(b.ranks.back().two_l == 8);
  CHECK(b.orthonormality_defect() < 1e-13);
  CHECK(code_of([] { tensor_operator_basis(-1, 2); }) == ErrorCode::invalid_label);

  const auto sq = tensor_operator_basis(4, 4);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 2.0 * M_PI);
  for (int k = 0; k < 5; ++k) CHECK(covariance_defect(sq, {u(rng), u(rng) / 2.0, u(rng)}) < 1e-12);
}

TEST_CASE("Wigner-Eckart decomposition") {
  const int two_l = 4;
  const auto basis = tensor_operator_basis(two_l, two_l);
  const auto jp = angular_momentum_plus(two_l);
  const auto d = decompose_wigner_eckart(jp, basis);
  for (const auto& [rank, content] : d.ranks) {
    double weight = 0.0;
    for (const auto& c : content.coeffs) weight += std::norm(c);
    if (rank == 2) {
      CHECK(std::abs(content.coeffs[0]) > 1.0);
      CHECK(content.residual < 1e-13);
    } else {
      CHECK(weight < 1e-26);
    }
  }

  const std::vector<Eigen::MatrixXcd> family{-jp / std::sqrt(2.0), angular_momentum_z(two_l),
                                             angular_momentum_minus(two_l) / std::sqrt(2.0)};
  const auto red = tensor_family_reduced(family, 2, basis);
  CHECK(red.residual < 1e-12);
  CHECK(std::abs(red.reduced) > 1.0);
  // the family above with the ends swapped does not transform as a vector
  const std::vector<Eigen::MatrixXcd> wrong{-family[2], family[1], -family[0]};
  CHECK(tensor_family_reduced(wrong, 2, basis).residual > 0.1);
  CHECK(code_of([&] { tensor_family_reduced({family[0]}, 2, basis); }) == ErrorCode::shape_mismatch);

  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  Eigen::MatrixXcd m(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) m(i, j) = cplx(g(rng), g(rng));
  CHECK((reconstruct(decompose_wigner_eckart(m, basis), basis) - m).cwiseAbs().maxCoeff() < 1e-13);
  CHECK(code_of([&] { decompose_wigner_eckart(Eigen::MatrixXcd(3, 5), basis); }) ==
        ErrorCode::shape_mismatch);
}

TEST_CASE("dyad expansion round trip") {
  const auto basis = tensor_operator_basis(3, 2);
  for (int two_mm : {3, 1, -3})
    for (int two_mp : {2, 0, -2}) {
      const auto coeffs = dyad_expansion({3, two_mm}, {2, two_mp}, basis);
      Eigen::MatrixXcd dyad = Eigen::MatrixXcd::Zero(4, 3);
      dyad((3 - two_mm) / 2, (2 - two_mp) / 2) = 1.0;
      CHECK((resum_dyad(coeffs, basis) - dyad).cwiseAbs().maxCoeff() < 1e-13);
    }
}

TEST_CASE("serialisation") {
  std::ostringstream os;
  write_cg_table(os, 2);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "two_l1,two_m1,two_l2,two_m2,two_l,two_m,value");
  int rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    int v[6];
    double value;
    char c;
    std::istringstream row(line);
    row >> v[0] >> c >> v[1] >> c >> v[2] >> c >> v[3] >> c >> v[4] >> c >> v[5] >> c >> value;
    CHECK(clebsch_gordan(v[0], v[1], v[2], v[3], v[4], v[5]) == value);
    CHECK(value != 0.0);
  }
  int expected = 0;
  for (int a = 0; a <= 2; ++a)
    for (int b = 0; b <= 2; ++b)
      for (int ma = -a; ma <= a; ma += 2)
        for (int mb = -b; mb <= b; mb += 2)
          for (int l = std::abs(a - b); l <= a + b; l += 2)
            if (std::abs(ma + mb) <= l && clebsch_gordan(a, ma, b, mb, l, ma + mb) != 0.0) ++expected;
  CHECK(rows == expected);

  const auto basis = tensor_operator_basis(2, 1, "n");
  const auto j = nlohmann::json::parse(basis_to_json(basis));
  CHECK(j["two_l_minus"] == 2);
  CHECK(j["two_l_plus"] == 1);
  CHECK(j["radial_label"] == "n");
  CHECK(j["ranks"].size() == 2);
  const auto& op = j["ranks"][0]["ops"][0];
  CHECK(op.size() == 6);
  CHECK(op[0][0].get<double>() == basis.ranks[0].ops[0](0, 0).real());
}
