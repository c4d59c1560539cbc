#include "openq/rotations.hpp"

#include <array>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <map>
#include <mutex>
#include <ostream>
#include <shared_mutex>
#include <tuple>
#include <utility>

#include "json.hpp"

#include "openq/io.hpp"

namespace openq {
namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

cpp_int factorial(int n) {
  static std::vector<cpp_int> table{1};
  static std::mutex mu;
  std::lock_guard lock(mu);
  while (static_cast<int>(table.size()) <= n) {
    table.push_back(table.back() * static_cast<int>(table.size()));
  }
  return table[static_cast<std::size_t>(n)];
}

long double factorial_ld(int n) {
  long double f = 1.0L;
  for (int k = 2; k <= n; ++k) f *= static_cast<long double>(k);
  return f;
}

bool triangle(int a, int b, int c) {
  return c >= std::abs(a - b) && c <= a + b && (a + b + c) % 2 == 0;
}

double racah(int a, int am, int b, int bm, int c, int cm) {
  const int a1 = (a + b - c) / 2, a2 = (a - b + c) / 2, a3 = (-a + b + c) / 2;
  const int a4 = (a + b + c) / 2 + 1;
  const cpp_rational pre =
      cpp_rational(cpp_int(c + 1) * factorial(a1) * factorial(a2) * factorial(a3), factorial(a4)) *
      cpp_rational(factorial((c + cm) / 2) * factorial((c - cm) / 2) * factorial((a - am) / 2) *
                   factorial((a + am) / 2) * factorial((b - bm) / 2) * factorial((b + bm) / 2));
  cpp_rational sum = 0;
  for (int k = 0; k <= a1; ++k) {
    const std::array<int, 6> d{k,           a1 - k, (a - am) / 2 - k, (b + bm) / 2 - k,
                               (c - b + am) / 2 + k, (c - a - bm) / 2 + k};
    bool ok = true;
    cpp_int den = 1;
    for (int v : d) {
      if (v < 0) {
        ok = false;
        break;
      }
      den *= factorial(v);
    }
    if (!ok) continue;
    sum += cpp_rational(k % 2 == 0 ? 1 : -1, den);
  }
  if (sum == 0) return 0.0;
  const cpp_rational sq = pre * sum * sum;
  const double mag = std::sqrt(sq.convert_to<double>());
  return sum > 0 ? mag : -mag;
}

using CgKey = std::tuple<int, int, int, int, int, int>;
std::shared_mutex g_cg_mutex;
std::map<CgKey, double> g_cg_cache;

double cplx_frobenius(const Eigen::MatrixXcd& m) { return m.norm(); }

}  // namespace

void AngularMomentumLabel::validate() const {
  if (two_l < 0 || std::abs(two_m) > two_l || (two_l + two_m) % 2 != 0) {
    throw Error(ErrorCode::invalid_label, "invalid angular momentum label (2l=" +
                                              std::to_string(two_l) + ", 2m=" +
                                              std::to_string(two_m) + ")");
  }
}

double clebsch_gordan(AngularMomentumLabel x, AngularMomentumLabel y, AngularMomentumLabel z) {
  x.validate();
  y.validate();
  z.validate();
  if (x.two_m + y.two_m != z.two_m || !triangle(x.two_l, y.two_l, z.two_l)) return 0.0;
  const CgKey key{x.two_l, x.two_m, y.two_l, y.two_m, z.two_l, z.two_m};
  {
    std::shared_lock lock(g_cg_mutex);
    if (auto it = g_cg_cache.find(key); it != g_cg_cache.end()) return it->second;
  }
  const double v = racah(x.two_l, x.two_m, y.two_l, y.two_m, z.two_l, z.two_m);
  std::unique_lock lock(g_cg_mutex);
  g_cg_cache.emplace(key, v);
  return v;
}

double clebsch_gordan(int two_l1, int two_m1, int two_l2, int two_m2, int two_l, int two_m) {
  return clebsch_gordan({two_l1, two_m1}, {two_l2, two_m2}, {two_l, two_m});
}

Eigen::MatrixXd wigner_small_d(int two_l, double beta) {
  AngularMomentumLabel{two_l, two_l}.validate();
  const int n = two_l + 1;
  Eigen::MatrixXd d(n, n);
  const long double c = std::cos(static_cast<long double>(beta) / 2);
  const long double s = std::sin(static_cast<long double>(beta) / 2);
  for (int r = 0; r < n; ++r) {
    const int two_mp = two_l - 2 * r;
    for (int col = 0; col < n; ++col) {
      const int two_m = two_l - 2 * col;
      // integers: j+m', j-m', j+m, j-m and m'-m
      const int jpmp = (two_l + two_mp) / 2, jmmp = (two_l - two_mp) / 2;
      const int jpm = (two_l + two_m) / 2, jmm = (two_l - two_m) / 2;
      const int dm = (two_mp - two_m) / 2;
      const long double pre = std::sqrt(factorial_ld(jpmp) * factorial_ld(jmmp) *
                                        factorial_ld(jpm) * factorial_ld(jmm));
      long double sum = 0.0L;
      for (int k = std::max(0, -dm); k <= std::min(jpm, jmmp); ++k) {
        const long double den =
            factorial_ld(jpm - k) * factorial_ld(k) * factorial_ld(dm + k) * factorial_ld(jmmp - k);
        const int pc = two_l - dm - 2 * k;
        const int ps = dm + 2 * k;
        const long double term = std::pow(c, pc) * std::pow(s, ps) / den;
        sum += ((dm + k) % 2 == 0) ? term : -term;
      }
      d(r, col) = static_cast<double>(pre * sum);
    }
  }
  return d;
}

Eigen::MatrixXcd wigner_D(int two_l, double alpha, double beta, double gamma) {
  const Eigen::MatrixXd d = wigner_small_d(two_l, beta);
  const int n = two_l + 1;
  Eigen::MatrixXcd out(n, n);
  for (int r = 0; r < n; ++r) {
    const double mp = (two_l - 2 * r) / 2.0;
    for (int c = 0; c < n; ++c) {
      const double m = (two_l - 2 * c) / 2.0;
      out(r, c) = std::polar(1.0, -mp * alpha) * d(r, c) * std::polar(1.0, -m * gamma);
    }
  }
  return out;
}

std::size_t TensorOperatorBasis::size() const {
  std::size_t n = 0;
  for (const auto& r : ranks) n += r.ops.size();
  return n;
}

const Eigen::MatrixXcd& TensorOperatorBasis::op(int two_l, int two_m) const {
  for (const auto& r : ranks) {
    if (r.two_l != two_l) continue;
    AngularMomentumLabel{two_l, two_m}.validate();
    return r.ops[static_cast<std::size_t>((two_l - two_m) / 2)];
  }
  throw Error(ErrorCode::invalid_label, "rank 2l=" + std::to_string(two_l) + " not in basis");
}

Eigen::MatrixXcd& TensorOperatorBasis::op(int two_l, int two_m) {
  return const_cast<Eigen::MatrixXcd&>(std::as_const(*this).op(two_l, two_m));
}

double TensorOperatorBasis::orthonormality_defect() const {
  std::vector<const Eigen::MatrixXcd*> all;
  for (const auto& r : ranks)
    for (const auto& o : r.ops) all.push_back(&o);
  double worst = 0.0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = 0; j < all.size(); ++j) {
      const cplx g = (all[i]->adjoint() * *all[j]).trace();
      worst = std::max(worst, std::abs(g - (i == j ? 1.0 : 0.0)));
    }
  }
  return worst;
}

TensorOperatorBasis tensor_operator_basis(int two_l_minus, int two_l_plus,
                                          std::string radial_label) {
  AngularMomentumLabel{two_l_minus, two_l_minus}.validate();
  AngularMomentumLabel{two_l_plus, two_l_plus}.validate();
  TensorOperatorBasis b;
  b.two_l_minus = two_l_minus;
  b.two_l_plus = two_l_plus;
  b.radial_label = std::move(radial_label);
  const int rows = two_l_minus + 1, cols = two_l_plus + 1;
  for (int two_l = std::abs(two_l_minus - two_l_plus); two_l <= two_l_minus + two_l_plus;
       two_l += 2) {
    TensorOperatorBasis::Rank rank{two_l, {}};
    const double scale = std::sqrt((two_l + 1.0) / (two_l_minus + 1.0));
    for (int two_m = two_l; two_m >= -two_l; two_m -= 2) {
      Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(rows, cols);
      for (int r = 0; r < rows; ++r) {
        const int two_mm = two_l_minus - 2 * r;
        for (int c = 0; c < cols; ++c) {
          const int two_mp = two_l_plus - 2 * c;
          if (two_mp + two_m != two_mm) continue;
          t(r, c) = scale * clebsch_gordan(two_l_plus, two_mp, two_l, two_m, two_l_minus, two_mm);
        }
      }
      rank.ops.push_back(std::move(t));
    }
    b.ranks.push_back(std::move(rank));
  }
  return b;
}

WignerEckartDecomposition decompose_wigner_eckart(const Eigen::MatrixXcd& m,
                                                  const TensorOperatorBasis& basis) {
  if (m.rows() != basis.rows() || m.cols() != basis.cols()) {
    throw Error(ErrorCode::shape_mismatch, "operator block shape differs from the basis");
  }
  const double total = cplx_frobenius(m);
  WignerEckartDecomposition out;
  for (const auto& rank : basis.ranks) {
    RankContent rc;
    double sq = 0.0, best = -1.0;
    for (const auto& t : rank.ops) {
      const cplx c = (t.adjoint() * m).trace();
      rc.coeffs.push_back(c);
      sq += std::norm(c);
      if (std::abs(c) > best) {
        best = std::abs(c);
        rc.reduced = c;
      }
    }
    const double rest = std::sqrt(std::max(0.0, sq - std::norm(rc.reduced)));
    rc.residual = total > 0.0 ? rest / total : 0.0;
    out.ranks.emplace(rank.two_l, std::move(rc));
  }
  return out;
}

Eigen::MatrixXcd reconstruct(const WignerEckartDecomposition& d, const TensorOperatorBasis& basis) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(basis.rows(), basis.cols());
  for (const auto& rank : basis.ranks) {
    const auto it = d.ranks.find(rank.two_l);
    if (it == d.ranks.end()) continue;
    for (std::size_t r = 0; r < rank.ops.size(); ++r) out += it->second.coeffs[r] * rank.ops[r];
  }
  return out;
}

FamilyReduction tensor_family_reduced(const std::vector<Eigen::MatrixXcd>& family, int two_l,
                                      const TensorOperatorBasis& basis) {
  if (family.size() != static_cast<std::size_t>(two_l + 1)) {
    throw Error(ErrorCode::shape_mismatch, "family must have 2l+1 members");
  }
  FamilyReduction out;
  std::vector<cplx> c;
  double leak = 0.0, total = 0.0;
  for (int r = 0; r <= two_l; ++r) {
    const auto d = decompose_wigner_eckart(family[static_cast<std::size_t>(r)], basis);
    const auto it = d.ranks.find(two_l);
    if (it == d.ranks.end()) throw Error(ErrorCode::invalid_label, "rank not in basis");
    const cplx own = it->second.coeffs[static_cast<std::size_t>(r)];
    c.push_back(own);
    const double nrm = cplx_frobenius(family[static_cast<std::size_t>(r)]);
    total = std::max(total, nrm);
    leak = std::max(leak, std::sqrt(std::max(0.0, nrm * nrm - std::norm(own))));
  }
  for (const auto& v : c) out.reduced += v;
  out.reduced /= static_cast<double>(c.size());
  double dev = 0.0;
  for (const auto& v : c) dev = std::max(dev, std::abs(v - out.reduced));
  const double ref = std::abs(out.reduced);
  out.residual = ref > 0.0 ? (dev + leak) / ref : (total > 0.0 ? 1.0 : 0.0);
  return out;
}

std::vector<DyadCoefficient> dyad_expansion(AngularMomentumLabel minus, AngularMomentumLabel plus,
                                            const TensorOperatorBasis& basis) {
  minus.validate();
  plus.validate();
  if (minus.two_l != basis.two_l_minus || plus.two_l != basis.two_l_plus) {
    throw Error(ErrorCode::invalid_label, "dyad multiplets differ from the basis block");
  }
  std::vector<DyadCoefficient> out;
  for (const auto& rank : basis.ranks) {
    for (std::size_t r = 0; r < rank.ops.size(); ++r) {
      const int two_m = rank.two_l - 2 * static_cast<int>(r);
      const cplx v = std::conj(rank.ops[r](minus.index(), plus.index()));
      out.push_back({rank.two_l, two_m, v.real()});
    }
  }
  return out;
}

Eigen::MatrixXcd resum_dyad(const std::vector<DyadCoefficient>& coeffs,
                            const TensorOperatorBasis& basis) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(basis.rows(), basis.cols());
  for (const auto& c : coeffs) out += c.value * basis.op(c.two_l, c.two_m);
  return out;
}

double covariance_defect(const TensorOperatorBasis& basis, EulerAngles r) {
  const Eigen::MatrixXcd dm = wigner_D(basis.two_l_minus, r.alpha, r.beta, r.gamma);
  const Eigen::MatrixXcd dp = wigner_D(basis.two_l_plus, r.alpha, r.beta, r.gamma);
  double worst = 0.0;
  for (const auto& rank : basis.ranks) {
    const Eigen::MatrixXcd dl = wigner_D(rank.two_l, r.alpha, r.beta, r.gamma);
    for (std::size_t c = 0; c < rank.ops.size(); ++c) {
      Eigen::MatrixXcd lhs = dm * rank.ops[c] * dp.adjoint();
      for (std::size_t rp = 0; rp < rank.ops.size(); ++rp) {
        lhs -= dl(static_cast<Eigen::Index>(rp), static_cast<Eigen::Index>(c)) * rank.ops[rp];
      }
      worst = std::max(worst, cplx_frobenius(lhs));
    }
  }
  return worst;
}

Eigen::MatrixXcd angular_momentum_z(int two_l) {
  AngularMomentumLabel{two_l, two_l}.validate();
  Eigen::MatrixXcd j = Eigen::MatrixXcd::Zero(two_l + 1, two_l + 1);
  for (int r = 0; r <= two_l; ++r) j(r, r) = (two_l - 2 * r) / 2.0;
  return j;
}

Eigen::MatrixXcd angular_momentum_plus(int two_l) {
  AngularMomentumLabel{two_l, two_l}.validate();
  Eigen::MatrixXcd j = Eigen::MatrixXcd::Zero(two_l + 1, two_l + 1);
  const double l = two_l / 2.0;
  for (int c = 1; c <= two_l; ++c) {
    const double m = (two_l - 2 * c) / 2.0;
    j(c - 1, c) = std::sqrt(l * (l + 1.0) - m * (m + 1.0));
  }
  return j;
}

Eigen::MatrixXcd angular_momentum_minus(int two_l) { return angular_momentum_plus(two_l).adjoint(); }

double cg_orthogonality_defect(int two_lmax) {
  double worst = 0.0;
  for (int a = 0; a <= two_lmax; ++a) {
    for (int b = 0; b <= two_lmax; ++b) {
      for (int c = std::abs(a - b); c <= a + b; c += 2) {
        for (int cp = std::abs(a - b); cp <= a + b; cp += 2) {
          for (int cm = -c; cm <= c; cm += 2) {
            for (int cmp = -cp; cmp <= cp; cmp += 2) {
              double s = 0.0;
              for (int am = -a; am <= a; am += 2) {
                const int bm = cm - am;
                if (std::abs(bm) > b || cmp != cm) continue;
                s += clebsch_gordan(a, am, b, bm, c, cm) * clebsch_gordan(a, am, b, bm, cp, cmp);
              }
              worst = std::max(worst, std::abs(s - ((c == cp && cm == cmp) ? 1.0 : 0.0)));
            }
          }
        }
      }
    }
  }
  return worst;
}

void write_cg_table(std::ostream& os, int two_lmax) {
  CsvWriter csv(os, {"two_l1", "two_m1", "two_l2", "two_m2", "two_l", "two_m", "value"});
  for (int a = 0; a <= two_lmax; ++a) {
    for (int b = 0; b <= two_lmax; ++b) {
      for (int c = std::abs(a - b); c <= a + b; c += 2) {
        for (int am = -a; am <= a; am += 2) {
          for (int bm = -b; bm <= b; bm += 2) {
            const int cm = am + bm;
            if (std::abs(cm) > c) continue;
            const double v = clebsch_gordan(a, am, b, bm, c, cm);
            if (v == 0.0) continue;
            csv.row({double(a), double(am), double(b), double(bm), double(c), double(cm), v});
          }
        }
      }
    }
  }
}

std::string basis_to_json(const TensorOperatorBasis& basis, int indent) {
  nlohmann::json j;
  j["two_l_minus"] = basis.two_l_minus;
  j["two_l_plus"] = basis.two_l_plus;
  j["radial_label"] = basis.radial_label;
  j["ranks"] = nlohmann::json::array();
  for (const auto& rank : basis.ranks) {
    nlohmann::json r;
    r["two_l"] = rank.two_l;
    r["ops"] = nlohmann::json::array();
    for (const auto& t : rank.ops) {
      nlohmann::json op = nlohmann::json::array();
      for (Eigen::Index i = 0; i < t.rows(); ++i)
        for (Eigen::Index k = 0; k < t.cols(); ++k) op.push_back({t(i, k).real(), t(i, k).imag()});
      r["ops"].push_back(std::move(op));
    }
    j["ranks"].push_back(std::move(r));
  }
  return j.dump(indent);
}

}  // namespace openq
