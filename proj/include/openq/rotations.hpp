#pragma once

// Angular momenta are passed as twice their value (two_l, two_m) so that
// half-integer multiplets are exact. Matrix row/column r of a multiplet
// corresponds to m = l - r.

#include <Eigen/Dense>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "openq/domain.hpp"

namespace openq {

struct AngularMomentumLabel {
  int two_l = 0;
  int two_m = 0;

  /// Throws invalid_label unless two_l >= 0, |two_m| <= two_l and two_l + two_m is even.
  void validate() const;
  int dim() const { return two_l + 1; }
  /// Row index of m inside the multiplet.
  int index() const { return (two_l - two_m) / 2; }
};

/// <l1 m1 l2 m2 | l m>, Condon-Shortley phase. Squared value is accumulated
/// in exact rational arithmetic; results are cached.
double clebsch_gordan(AngularMomentumLabel a, AngularMomentumLabel b, AngularMomentumLabel c);
double clebsch_gordan(int two_l1, int two_m1, int two_l2, int two_m2, int two_l, int two_m);

/// d^l_{m'm}(beta) from the explicit factorial sum.
Eigen::MatrixXd wigner_small_d(int two_l, double beta);
/// D^l_{m'm} = e^{-i m' alpha} d^l_{m'm}(beta) e^{-i m gamma}.
Eigen::MatrixXcd wigner_D(int two_l, double alpha, double beta, double gamma);

struct EulerAngles {
  double alpha = 0.0, beta = 0.0, gamma = 0.0;
};

/// Orthonormal tensor operators T^(l)_m mapping the l+ multiplet to the l- one:
///   <l- m-| T^(l)_m |l+ m+> = <l+ m+ l m | l- m-> sqrt((2l+1)/(2l-+1)).
struct TensorOperatorBasis {
  struct Rank {
    int two_l;
    std::vector<Eigen::MatrixXcd> ops;  ///< ops[r] has m = l - r
  };

  int two_l_minus = 0;
  int two_l_plus = 0;
  /// The spectator label n of the block; carried, never interpreted.
  std::string radial_label;
  std::vector<Rank> ranks;

  int rows() const { return two_l_minus + 1; }
  int cols() const { return two_l_plus + 1; }
  std::size_t size() const;
  const Eigen::MatrixXcd& op(int two_l, int two_m) const;
  Eigen::MatrixXcd& op(int two_l, int two_m);
  /// max |Tr[A^dag B] - delta| over all pairs.
  double orthonormality_defect() const;
};

TensorOperatorBasis tensor_operator_basis(int two_l_minus, int two_l_plus,
                                          std::string radial_label = {});

struct RankContent {
  std::vector<cplx> coeffs;  ///< Tr[T^(l)_m^dag M], m = l - r
  /// Largest coefficient of the rank: the reduced element when M carries a
  /// definite magnetic number.
  cplx reduced{};
  /// Norm of the remaining coefficients of the rank relative to ||M||.
  double residual = 0.0;
};

struct WignerEckartDecomposition {
  std::map<int, RankContent> ranks;  ///< keyed by two_l
};

WignerEckartDecomposition decompose_wigner_eckart(const Eigen::MatrixXcd& m,
                                                  const TensorOperatorBasis& basis);
Eigen::MatrixXcd reconstruct(const WignerEckartDecomposition& d, const TensorOperatorBasis& basis);

struct FamilyReduction {
  cplx reduced{};
  /// max over m of |c_m - reduced| / |reduced|, plus any weight outside (l, m).
  double residual = 0.0;
};

/// Reduced element of an operator family {M_m}, m = l - r, assumed to
/// transform as rank two_l: by Wigner-Eckart every Tr[T^(l)_m^dag M_m] equals
/// the same number.
FamilyReduction tensor_family_reduced(const std::vector<Eigen::MatrixXcd>& family, int two_l,
                                      const TensorOperatorBasis& basis);

struct DyadCoefficient {
  int two_l;
  int two_m;
  double value;
};

/// Coefficients of |l- m-><l+ m+| over every T^(l)_m of the basis.
std::vector<DyadCoefficient> dyad_expansion(AngularMomentumLabel minus, AngularMomentumLabel plus,
                                            const TensorOperatorBasis& basis);
Eigen::MatrixXcd resum_dyad(const std::vector<DyadCoefficient>& coeffs,
                            const TensorOperatorBasis& basis);

/// max over (l, m) of || D^{l-} T_m D^{l+ dag} - sum_m' D^l_{m'm} T_m' ||_F.
double covariance_defect(const TensorOperatorBasis& basis, EulerAngles r);

/// Angular momentum matrices J_z, J_+, J_- of a multiplet (hbar = 1).
Eigen::MatrixXcd angular_momentum_z(int two_l);
Eigen::MatrixXcd angular_momentum_plus(int two_l);
Eigen::MatrixXcd angular_momentum_minus(int two_l);

/// max |sum_{m1 m2} C(l1 m1 l2 m2|l m) C(l1 m1 l2 m2|l' m') - delta| for all
/// l1, l2 <= two_lmax / 2.
double cg_orthogonality_defect(int two_lmax);

/// CSV rows two_l1,two_m1,two_l2,two_m2,two_l,two_m,value for every nonzero
/// coefficient with l1, l2 <= two_lmax / 2.
void write_cg_table(std::ostream& os, int two_lmax);
/// {"two_l_minus", "two_l_plus", "radial_label", "ranks": [{"two_l", "ops":
/// [[[re, im], ...] row-major per operator]}]}
std::string basis_to_json(const TensorOperatorBasis& basis, int indent = -1);

}  // namespace openq
