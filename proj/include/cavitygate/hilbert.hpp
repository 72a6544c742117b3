#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cavitygate/types.hpp"

namespace cavitygate {

using Index = Eigen::Index;

inline constexpr int kLevels = 3;

/// Dimensional bookkeeping for n three-level systems and one truncated
/// cavity mode. System 0 is the most significant tensor factor and the cavity
/// is the least significant one, so
///
///   index = (sum_k level_k * 3^(n-1-k)) * (N_max + 1) + photons.
class HilbertLayout {
 public:
  HilbertLayout(int n_systems, int fock_cutoff)
      : n_systems_(n_systems), fock_cutoff_(fock_cutoff) {
    if (n_systems < 1) throw std::invalid_argument("HilbertLayout: n_systems must be >= 1");
    if (fock_cutoff < 1) throw std::invalid_argument("HilbertLayout: fock_cutoff must be >= 1");
    level_block_ = 1;
    for (int k = 0; k < n_systems; ++k) level_block_ *= kLevels;
    if (level_block_ > (Index{1} << 40)) throw std::invalid_argument("HilbertLayout: too many systems");
  }

  int n_systems() const { return n_systems_; }
  int fock_cutoff() const { return fock_cutoff_; }
  int cavity_dim() const { return fock_cutoff_ + 1; }
  Index dimension() const { return level_block_ * cavity_dim(); }

  // Index distance between neighbouring levels of `system`.
  Index stride(int system) const {
    check_system(system);
    Index s = cavity_dim();
    for (int k = system + 1; k < n_systems_; ++k) s *= kLevels;
    return s;
  }

  Index index_of(std::span<const int> levels, int photons) const {
    if (static_cast<int>(levels.size()) != n_systems_)
      throw std::invalid_argument("index_of: expected " + std::to_string(n_systems_) + " levels, got " +
                                  std::to_string(levels.size()));
    if (photons < 0 || photons > fock_cutoff_)
      throw std::invalid_argument("index_of: photon number " + std::to_string(photons) +
                                  " outside [0, " + std::to_string(fock_cutoff_) + "]");
    Index code = 0;
    for (int lvl : levels) {
      if (lvl < 0 || lvl >= kLevels)
        throw std::invalid_argument("index_of: level " + std::to_string(lvl) + " outside {0,1,2}");
      code = code * kLevels + lvl;
    }
    return code * cavity_dim() + photons;
  }

  int photons_of(Index index) const { return static_cast<int>(index % cavity_dim()); }

  int level_of(Index index, int system) const {
    return static_cast<int>((index / stride(system)) % kLevels);
  }

  std::vector<int> levels_of(Index index) const {
    std::vector<int> levels(n_systems_);
    Index code = index / cavity_dim();
    for (int k = n_systems_ - 1; k >= 0; --k) {
      levels[k] = static_cast<int>(code % kLevels);
      code /= kLevels;
    }
    return levels;
  }

  // e.g. "|102>|1>_c"
  std::string ket(Index index) const {
    std::string s = "|";
    for (int lvl : levels_of(index)) s += static_cast<char>('0' + lvl);
    s += ">|" + std::to_string(photons_of(index)) + ">_c";
    return s;
  }

  void check_system(int system) const {
    if (system < 0 || system >= n_systems_)
      throw std::out_of_range("system index " + std::to_string(system) + " outside [0, " +
                              std::to_string(n_systems_) + ")");
  }

  friend bool operator==(const HilbertLayout& a, const HilbertLayout& b) {
    return a.n_systems_ == b.n_systems_ && a.fock_cutoff_ == b.fock_cutoff_;
  }

 private:
  int n_systems_;
  int fock_cutoff_;
  Index level_block_;
};

inline HilbertLayout build_layout(int n_systems, int fock_cutoff) { return {n_systems, fock_cutoff}; }

/// A tensor factor: one of the three-level systems or the cavity.
struct Site {
  static Site system(int index) { return {false, index}; }
  static Site cavity() { return {true, -1}; }

  bool is_cavity;
  int index;
};

template <typename Real = double>
class StateVector {
 public:
  StateVector(HilbertLayout layout, CVector<Real> amplitudes)
      : layout_(layout), amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() != layout_.dimension())
      throw std::invalid_argument("StateVector: amplitude count does not match layout dimension");
  }

  const HilbertLayout& layout() const { return layout_; }
  const CVector<Real>& amplitudes() const { return amplitudes_; }
  Complex<Real> operator[](Index i) const { return amplitudes_[i]; }
  Real squared_norm() const { return amplitudes_.squaredNorm(); }

 private:
  HilbertLayout layout_;
  CVector<Real> amplitudes_;
};

template <typename Real = double>
class OperatorMatrix {
 public:
  OperatorMatrix(HilbertLayout layout, CMatrix<Real> entries, bool unitary = false,
                 bool touches_truncation_edge = false)
      : layout_(layout),
        entries_(std::move(entries)),
        unitary_(unitary),
        truncation_edge_(touches_truncation_edge) {
    if (entries_.rows() != layout_.dimension() || entries_.cols() != layout_.dimension())
      throw std::invalid_argument("OperatorMatrix: entries do not match layout dimension");
  }

  static OperatorMatrix identity(const HilbertLayout& layout) {
    return {layout, CMatrix<Real>::Identity(layout.dimension(), layout.dimension()), true};
  }

  const HilbertLayout& layout() const { return layout_; }
  const CMatrix<Real>& entries() const { return entries_; }
  bool is_unitary() const { return unitary_; }

  // Set when a resonant exchange left |2>|N_max> untouched because its
  // partner state lies beyond the Fock cutoff.
  bool touches_truncation_edge() const { return truncation_edge_; }

  StateVector<Real> operator*(const StateVector<Real>& psi) const {
    if (!(psi.layout() == layout_)) throw std::invalid_argument("OperatorMatrix * StateVector: layout mismatch");
    return {layout_, entries_ * psi.amplitudes()};
  }

  OperatorMatrix operator*(const OperatorMatrix& rhs) const {
    if (!(rhs.layout_ == layout_)) throw std::invalid_argument("OperatorMatrix * OperatorMatrix: layout mismatch");
    return {layout_, entries_ * rhs.entries_, unitary_ && rhs.unitary_, truncation_edge_ || rhs.truncation_edge_};
  }

  OperatorMatrix adjoint() const { return {layout_, entries_.adjoint(), unitary_, truncation_edge_}; }

 private:
  HilbertLayout layout_;
  CMatrix<Real> entries_;
  bool unitary_;
  bool truncation_edge_;
};

template <typename Real = double>
StateVector<Real> basis_state(const HilbertLayout& layout, std::span<const int> levels, int photons) {
  CVector<Real> amps = CVector<Real>::Zero(layout.dimension());
  amps[layout.index_of(levels, photons)] = Complex<Real>(1);
  return {layout, std::move(amps)};
}

template <typename Real = double>
StateVector<Real> basis_state(const HilbertLayout& layout, std::initializer_list<int> levels, int photons) {
  return basis_state<Real>(layout, std::span<const int>(levels.begin(), levels.size()), photons);
}

/// I x ... x local_op x ... x I with local_op placed on `site`.
template <typename Real = double, typename Derived>
OperatorMatrix<Real> embed_local(const HilbertLayout& layout, Site site,
                                 const Eigen::MatrixBase<Derived>& local_op, bool unitary = false) {
  Index left, local_dim, right;
  if (site.is_cavity) {
    left = layout.dimension() / layout.cavity_dim();
    local_dim = layout.cavity_dim();
    right = 1;
  } else {
    layout.check_system(site.index);
    right = layout.stride(site.index);
    local_dim = kLevels;
    left = layout.dimension() / (right * kLevels);
  }
  if (local_op.rows() != local_dim || local_op.cols() != local_dim)
    throw std::invalid_argument("embed_local: operator is " + std::to_string(local_op.rows()) + "x" +
                                std::to_string(local_op.cols()) + ", site needs " + std::to_string(local_dim) +
                                "x" + std::to_string(local_dim));

  const Index n = layout.dimension();
  CMatrix<Real> full = CMatrix<Real>::Zero(n, n);
  for (Index l = 0; l < left; ++l) {
    const Index base = l * local_dim * right;
    for (Index i = 0; i < local_dim; ++i)
      for (Index j = 0; j < local_dim; ++j) {
        const Complex<Real> v = local_op(i, j);
        if (v == Complex<Real>(0)) continue;
        for (Index r = 0; r < right; ++r) full(base + i * right + r, base + j * right + r) = v;
      }
  }
  return {layout, std::move(full), unitary};
}

/// An operator acting jointly on one system and the cavity. The block is
/// indexed as level * (N_max + 1) + photons. Every elementary pulse of the
/// protocol has this form, so states can be propagated without ever forming
/// the full-space matrix.
template <typename Real = double>
struct SystemCavityOperator {
  int system;
  CMatrix<Real> block;
  bool touches_truncation_edge = false;
};

template <typename Real>
OperatorMatrix<Real> embed(const HilbertLayout& layout, const SystemCavityOperator<Real>& op, bool unitary) {
  layout.check_system(op.system);
  const Index c = layout.cavity_dim();
  const Index block_dim = kLevels * c;
  if (op.block.rows() != block_dim || op.block.cols() != block_dim)
    throw std::invalid_argument("embed: system-cavity block has wrong dimension");
  const Index mid = layout.stride(op.system) / c;
  const Index pre = layout.dimension() / (layout.stride(op.system) * kLevels);

  const Index n = layout.dimension();
  CMatrix<Real> full = CMatrix<Real>::Zero(n, n);
  auto full_index = [&](Index p, Index b, Index m) {
    const Index lvl = b / c, ph = b % c;
    return ((p * kLevels + lvl) * mid + m) * c + ph;
  };
  for (Index p = 0; p < pre; ++p)
    for (Index m = 0; m < mid; ++m)
      for (Index i = 0; i < block_dim; ++i)
        for (Index j = 0; j < block_dim; ++j) {
          const Complex<Real> v = op.block(i, j);
          if (v != Complex<Real>(0)) full(full_index(p, i, m), full_index(p, j, m)) = v;
        }
  return {layout, std::move(full), unitary, op.touches_truncation_edge};
}

/// Applies a system-cavity operator to every column of `states` in place.
template <typename Real>
void apply_in_place(const HilbertLayout& layout, const SystemCavityOperator<Real>& op, CMatrix<Real>& states) {
  layout.check_system(op.system);
  if (states.rows() != layout.dimension()) throw std::invalid_argument("apply_in_place: row count mismatch");
  const Index c = layout.cavity_dim();
  const Index block_dim = kLevels * c;
  const Index stride = layout.stride(op.system);
  const Index mid = stride / c;
  const Index pre = layout.dimension() / (stride * kLevels);

  CVector<Real> slice(block_dim), out(block_dim);
  for (Index col = 0; col < states.cols(); ++col)
    for (Index p = 0; p < pre; ++p)
      for (Index m = 0; m < mid; ++m) {
        const Index base = p * kLevels * stride + m * c;
        for (Index lvl = 0; lvl < kLevels; ++lvl)
          for (Index ph = 0; ph < c; ++ph) slice[lvl * c + ph] = states(base + lvl * stride + ph, col);
        out.noalias() = op.block * slice;
        for (Index lvl = 0; lvl < kLevels; ++lvl)
          for (Index ph = 0; ph < c; ++ph) states(base + lvl * stride + ph, col) = out[lvl * c + ph];
      }
}

template <typename Real>
StateVector<Real> apply(const SystemCavityOperator<Real>& op, const StateVector<Real>& psi) {
  CMatrix<Real> col = psi.amplitudes();
  apply_in_place(psi.layout(), op, col);
  return {psi.layout(), CVector<Real>(col.col(0))};
}

}  // namespace cavitygate
