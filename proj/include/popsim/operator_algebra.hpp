// Copyright 2026 The popsim Authors
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

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace popsim {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

/// Largest spin count handled by the dense algebra (dimension 16).
inline constexpr int kMaxSpins = 4;

/// Single-spin factor of a product operator: identity or one Cartesian axis.
enum class Label : std::uint8_t { E = 0, X = 1, Y = 2, Z = 3 };

using LabelTuple = std::vector<Label>;

char to_char(Label label);
Label label_from_char(char c);
std::string to_string(const LabelTuple& labels);
LabelTuple labels_from_string(std::string_view text);

struct BasisElement {
  LabelTuple labels;
  ComplexMatrix matrix;
};

struct ProductOperatorTerm {
  LabelTuple labels;
  Complex coeff;
};

/// Coefficients of an operator on the orthonormal product-operator basis.
/// Terms are stored for all 4^n label tuples, spin 0 varying slowest.
class ProductOperatorDecomposition {
 public:
  ProductOperatorDecomposition(int spins, std::vector<ProductOperatorTerm> terms);

  int spin_count() const { return spins_; }
  const std::vector<ProductOperatorTerm>& terms() const& { return terms_; }
  /// By value on temporaries, so `for (auto& t : decompose(m).terms())` is safe.
  std::vector<ProductOperatorTerm> terms() && { return std::move(terms_); }

  Complex coefficient(const LabelTuple& labels) const;
  /// Shorthand with one character per spin, e.g. "zx" for 2IzSx.
  Complex coefficient(std::string_view labels) const;

  ComplexMatrix reconstruct() const;

 private:
  int spins_;
  std::vector<ProductOperatorTerm> terms_;
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Spin-1/2 operator sigma/2 (identity for Label::E).
ComplexMatrix single_spin_operator(Label axis);

/// I_{k,axis} embedded in the 2^n dimensional space; spin 0 is the most
/// significant tensor factor.
ComplexMatrix spin_operator(int spins, int k, Label axis);

/// Orthonormal basis element for a label tuple. For two spins this is the
/// textbook set {1/2, Ix, ..., 2IaSb}; other spin counts carry the extra
/// factor 2^(1 - n/2) that keeps Tr(B^2) = 1.
ComplexMatrix product_operator(const LabelTuple& labels);

/// All 4^n orthonormal basis elements. Throws UserError unless 1 <= n <= 4.
std::vector<BasisElement> basis(int spins);

/// Projects rho onto the product-operator basis: c_i = Tr(B_i^dagger rho).
ProductOperatorDecomposition decompose(const ComplexMatrix& rho);

/// exp(-i h t) by Hermitian eigendecomposition. Throws ContractError when
/// h is not Hermitian within 1e-10.
ComplexMatrix expm_unitary(const ComplexMatrix& h, double t);

/// True iff some unit-modulus lambda gives max|u - lambda v| <= tol. The
/// phase is read off the largest-magnitude entry of v.
bool equal_up_to_global_phase(const ComplexMatrix& u, const ComplexMatrix& v,
                              double tol);

/// max|u - lambda v| for the lambda picked as in equal_up_to_global_phase;
/// infinity when no unit-modulus lambda can be formed.
double global_phase_distance(const ComplexMatrix& u, const ComplexMatrix& v);

double max_abs(const ComplexMatrix& m);
bool is_hermitian(const ComplexMatrix& m, double tol);
bool is_unitary(const ComplexMatrix& m, double tol);

/// n such that dim == 2^n; throws ContractError otherwise.
int spin_count_for_dim(Eigen::Index dim);

}  // namespace popsim
