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

#include "popsim/operator_algebra.hpp"

#include <cmath>
#include <limits>

#include "popsim/errors.hpp"

namespace popsim {

char to_char(Label label) {
  static constexpr char kChars[] = {'e', 'x', 'y', 'z'};
  return kChars[static_cast<int>(label)];
}

Label label_from_char(char c) {
  switch (c) {
    case 'e': return Label::E;
    case 'x': return Label::X;
    case 'y': return Label::Y;
    case 'z': return Label::Z;
  }
  throw UserError(std::string("invalid product-operator label '") + c + "'");
}

std::string to_string(const LabelTuple& labels) {
  std::string out;
  for (Label l : labels) out.push_back(to_char(l));
  return out;
}

LabelTuple labels_from_string(std::string_view text) {
  LabelTuple out;
  for (char c : text) out.push_back(label_from_char(c));
  return out;
}

namespace {

std::size_t label_index(const LabelTuple& labels) {
  std::size_t idx = 0;
  for (Label l : labels) idx = idx * 4 + static_cast<std::size_t>(l);
  return idx;
}

LabelTuple labels_at(int spins, std::size_t idx) {
  LabelTuple out(static_cast<std::size_t>(spins));
  for (int k = spins - 1; k >= 0; --k) {
    out[static_cast<std::size_t>(k)] = static_cast<Label>(idx % 4);
    idx /= 4;
  }
  return out;
}

}  // namespace

ProductOperatorDecomposition::ProductOperatorDecomposition(
    int spins, std::vector<ProductOperatorTerm> terms)
    : spins_(spins), terms_(std::move(terms)) {
  if (terms_.size() != (std::size_t{1} << (2 * spins)))
    throw ContractError("decomposition needs 4^n terms");
}

Complex ProductOperatorDecomposition::coefficient(const LabelTuple& labels) const {
  if (static_cast<int>(labels.size()) != spins_)
    throw ContractError("label tuple length does not match spin count");
  return terms_[label_index(labels)].coeff;
}

Complex ProductOperatorDecomposition::coefficient(std::string_view labels) const {
  return coefficient(labels_from_string(labels));
}

ComplexMatrix ProductOperatorDecomposition::reconstruct() const {
  const Eigen::Index dim = Eigen::Index{1} << spins_;
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (const auto& t : terms_) {
    if (t.coeff != Complex{}) out += t.coeff * product_operator(t.labels);
  }
  return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexMatrix single_spin_operator(Label axis) {
  using namespace std::complex_literals;
  ComplexMatrix m(2, 2);
  switch (axis) {
    case Label::E: m << 1.0, 0.0, 0.0, 1.0; break;
    case Label::X: m << 0.0, 0.5, 0.5, 0.0; break;
    case Label::Y: m << 0.0, -0.5i, 0.5i, 0.0; break;
    case Label::Z: m << 0.5, 0.0, 0.0, -0.5; break;
  }
  return m;
}

ComplexMatrix spin_operator(int spins, int k, Label axis) {
  if (spins < 1 || k < 0 || k >= spins)
    throw ContractError("spin index out of range");
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (int i = 0; i < spins; ++i)
    out = kron(out, single_spin_operator(i == k ? axis : Label::E));
  return out;
}

ComplexMatrix product_operator(const LabelTuple& labels) {
  const int n = static_cast<int>(labels.size());
  int active = 0;
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (Label l : labels) {
    if (l != Label::E) ++active;
    out = kron(out, single_spin_operator(l));
  }
  // 2^(k-1) from the product-operator convention, 2^(1-n/2) for unit norm.
  const double scale = std::pow(2.0, active - 1) * std::pow(2.0, 1.0 - n / 2.0);
  return scale * out;
}

std::vector<BasisElement> basis(int spins) {
  if (spins < 1 || spins > kMaxSpins)
    throw UserError("spin count " + std::to_string(spins) +
                    " outside supported range 1.." + std::to_string(kMaxSpins));
  const std::size_t count = std::size_t{1} << (2 * spins);
  std::vector<BasisElement> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    LabelTuple labels = labels_at(spins, i);
    ComplexMatrix m = product_operator(labels);
    out.push_back({std::move(labels), std::move(m)});
  }
  return out;
}

int spin_count_for_dim(Eigen::Index dim) {
  int n = 0;
  Eigen::Index d = 1;
  while (d < dim) {
    d <<= 1;
    ++n;
  }
  if (d != dim || n < 1)
    throw ContractError("matrix dimension " + std::to_string(dim) +
                        " is not a power of two");
  return n;
}

ProductOperatorDecomposition decompose(const ComplexMatrix& rho) {
  if (rho.rows() != rho.cols()) throw ContractError("matrix is not square");
  const int n = spin_count_for_dim(rho.rows());
  std::vector<ProductOperatorTerm> terms;
  for (auto& b : basis(n)) {
    // Tr(B^dagger rho) as an elementwise sum.
    const Complex c = (b.matrix.conjugate().cwiseProduct(rho)).sum();
    terms.push_back({std::move(b.labels), c});
  }
  return ProductOperatorDecomposition(n, std::move(terms));
}

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  return m.rows() == m.cols() && max_abs(m - m.adjoint()) <= tol;
}

bool is_unitary(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m.adjoint() * m -
                 ComplexMatrix::Identity(m.rows(), m.cols())) <= tol;
}

ComplexMatrix expm_unitary(const ComplexMatrix& h, double t) {
  if (!is_hermitian(h, 1e-10))
    throw ContractError("expm_unitary: generator is not Hermitian");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  const Eigen::VectorXd& w = solver.eigenvalues();
  Eigen::VectorXcd phases(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i)
    phases(i) = std::polar(1.0, -w(i) * t);
  const ComplexMatrix& v = solver.eigenvectors();
  return v * phases.asDiagonal() * v.adjoint();
}

double global_phase_distance(const ComplexMatrix& u, const ComplexMatrix& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols())
    throw ContractError("global phase comparison: dimension mismatch");
  Eigen::Index r = 0, c = 0;
  const double vmax = v.cwiseAbs().maxCoeff(&r, &c);
  if (vmax == 0.0) return max_abs(u);
  const Complex ratio = u(r, c) / v(r, c);
  if (std::abs(ratio) == 0.0) return std::numeric_limits<double>::infinity();
  const Complex lambda = ratio / std::abs(ratio);
  return max_abs(u - lambda * v);
}

bool equal_up_to_global_phase(const ComplexMatrix& u, const ComplexMatrix& v,
                              double tol) {
  return global_phase_distance(u, v) <= tol;
}

}  // namespace popsim
