#pragma once

#include <algorithm>

#include "cavitygate/compiler.hpp"

namespace cavitygate {

template <typename Real = double>
CMatrix2<Real> rotation_y(Real angle) {
  CMatrix2<Real> r;
  r << std::cos(angle / 2), -std::sin(angle / 2),
       std::sin(angle / 2),  std::cos(angle / 2);
  return r;
}

template <typename Real = double>
CMatrix2<Real> rotation_z(Real angle) {
  CMatrix2<Real> r = CMatrix2<Real>::Zero();
  r(0, 0) = std::polar(Real(1), -angle / 2);
  r(1, 1) = std::polar(Real(1), angle / 2);
  return r;
}

/// e^{i alpha} Rz(beta) Ry(gamma) Rz(delta) in the basis |0> = (1,0), |1> = (0,1).
template <typename Real = double>
CMatrix2<Real> single_qubit_u(const GateParams& p) {
  return std::polar(Real(1), Real(p.alpha)) * rotation_z<Real>(p.beta) * rotation_y<Real>(p.gamma) *
         rotation_z<Real>(p.delta);
}

template <typename Real = double>
struct IdealGate {
  int n;
  CMatrix<Real> matrix;  // 2^n x 2^n
};

/// Identity except on |1...10>, |1...11>, where U acts.
template <typename Real = double>
IdealGate<Real> ideal_controlled_u(int n, const GateParams& params) {
  if (n < 2) throw std::invalid_argument("ideal_controlled_u: n must be >= 2");
  if (n > 24) throw std::invalid_argument("ideal_controlled_u: n too large");
  const Index dim = Index{1} << n;
  IdealGate<Real> gate{n, CMatrix<Real>::Identity(dim, dim)};
  gate.matrix.template bottomRightCorner<2, 2>() = single_qubit_u<Real>(params);
  return gate;
}

template <typename Real = double>
struct ComputationalGate {
  CMatrix<Real> matrix;  // 2^n x 2^n block on computational (x) vacuum
  Real leakage;          // 1 - min over columns of the retained population
};

/// Restricts images U|b>|0>_c (one column per computational b, in order) to
/// the computational (x) vacuum subspace.
template <typename Real = double>
ComputationalGate<Real> extract_computational_gate(const CMatrix<Real>& images, const HilbertLayout& layout) {
  const Index count = Index{1} << layout.n_systems();
  if (images.rows() != layout.dimension() || images.cols() != count)
    throw std::invalid_argument("extract_computational_gate: expected a dimension x 2^n image matrix");
  std::vector<Index> rows(count);
  for (Index b = 0; b < count; ++b) rows[b] = computational_index(layout, static_cast<unsigned>(b));
  ComputationalGate<Real> out{CMatrix<Real>(count, count), Real(0)};
  for (Index j = 0; j < count; ++j)
    for (Index i = 0; i < count; ++i) out.matrix(i, j) = images(rows[i], j);
  const Real min_population = out.matrix.colwise().squaredNorm().minCoeff();
  out.leakage = std::max(Real(0), Real(1) - min_population);
  return out;
}

template <typename Real = double>
ComputationalGate<Real> extract_computational_gate(const OperatorMatrix<Real>& full) {
  const HilbertLayout& layout = full.layout();
  const Index count = Index{1} << layout.n_systems();
  CMatrix<Real> images(layout.dimension(), count);
  for (Index b = 0; b < count; ++b)
    images.col(b) = full.entries().col(computational_index(layout, static_cast<unsigned>(b)));
  return extract_computational_gate<Real>(images, layout);
}

template <typename Real = double>
struct GateDistance {
  Real max_entry_error;            // no global-phase alignment
  Real phase_sensitive_fidelity;   // |tr(ideal^dagger sim)| / 2^n
};

template <typename Real = double>
GateDistance<Real> gate_distance(const CMatrix<Real>& sim, const IdealGate<Real>& ideal) {
  if (sim.rows() != ideal.matrix.rows() || sim.cols() != ideal.matrix.cols())
    throw std::invalid_argument("gate_distance: dimension mismatch");
  const Real dim = Real(sim.rows());
  return {max_entry_deviation(sim, ideal.matrix), std::abs((ideal.matrix.adjoint() * sim).trace()) / dim};
}

/// Amplitude left outside the vacuum sector or on any |2> level, maximised
/// over the image columns.
template <typename Real = double>
struct Residues {
  Real cavity;   // norm of the component with photons > 0
  Real level2;   // max |amp| on a basis state with some system in |2>
};

template <typename Real = double>
Residues<Real> residues(const CMatrix<Real>& images, const HilbertLayout& layout) {
  Residues<Real> r{Real(0), Real(0)};
  for (Index j = 0; j < images.cols(); ++j) {
    Real cavity = 0;
    for (Index i = 0; i < images.rows(); ++i) {
      const Real mag = std::abs(images(i, j));
      if (mag == Real(0)) continue;
      if (layout.photons_of(i) > 0) cavity += mag * mag;
      const auto levels = layout.levels_of(i);
      if (std::find(levels.begin(), levels.end(), 2) != levels.end()) r.level2 = std::max(r.level2, mag);
    }
    r.cavity = std::max(r.cavity, std::sqrt(cavity));
  }
  return r;
}

}  // namespace cavitygate
