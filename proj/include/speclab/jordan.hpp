#pragma once

#include <string>
#include <vector>

#include "speclab/types.hpp"

namespace speclab {

/// One Jordan chain: vectors[0] is the eigenvector, and
/// (B - mu I) vectors[j] = vectors[j-1] for j >= 1.
struct JordanChain {
  Complex eigenvalue{0.0, 0.0};
  std::vector<ComplexVector> vectors;
  int length() const { return static_cast<int>(vectors.size()); }
};

struct EigenvalueGroup {
  Complex eigenvalue{0.0, 0.0};
  std::vector<JordanChain> chains;
  int geometric_multiplicity() const { return static_cast<int>(chains.size()); }
  int algebraic_multiplicity() const {
    int total = 0;
    for (const auto& c : chains) total += c.length();
    return total;
  }
};

struct RootSystem {
  int dim = 0;
  std::vector<EigenvalueGroup> groups;

  int nu_total() const {
    int total = 0;
    for (const auto& g : groups) total += g.algebraic_multiplicity();
    return total;
  }
  /// lambda_q = 1/mu_q
  Complex characteristic_number(int group) const { return 1.0 / groups[group].eigenvalue; }

  /// Columns are the root vectors in canonical flat order: groups in order,
  /// chains in order, positions 0..k within each chain.
  ComplexMatrix basis_matrix() const;
  double basis_condition() const;

  /// Flat index of (group, chain, position).
  int flat_index(int group, int chain, int position) const;

  /// Largest chain residual ||(B - mu)e_0|| resp. ||(B - mu)e_j - e_{j-1}||,
  /// relative to ||b|| and the vector norms.
  double chain_residual(const ComplexMatrix& b) const;

  std::string to_json() const;
};

/// Numerical Jordan decomposition at the given tolerance: eigenvalues within
/// tol*||b|| are clustered, chains extracted by staircase rank decisions on
/// the kernels of (B - mu I)^j.
RootSystem jordan_decompose(const ComplexMatrix& b, double tol);

struct DeclaredSystem {
  ComplexMatrix matrix;  // S J S^{-1}
  RootSystem root_system;
};

/// Builds B = S J S^{-1} from declared blocks (eigenvalue, size) and a
/// similarity S, bypassing numerical extraction. Chain vectors are columns
/// of S, so the chain relations hold by construction.
DeclaredSystem declared_root_system(const std::vector<std::pair<Complex, int>>& blocks,
                                    const ComplexMatrix& similarity);

struct BiorthogonalSystem {
  /// Dual vectors in the same canonical flat order as the root system. The
  /// pairing is mirrored within each chain:
  ///   (e_{q,i}, g_{q,k-i}) = 1,  all other pairings vanish.
  std::vector<ComplexVector> duals;
};

/// Dual Jordan chains of b^*: g-chains satisfy (B* - conj(mu)) g_j = g_{j-1}
/// and are normalized so every denominator in the expansion coefficients is
/// exactly one.
BiorthogonalSystem biorthogonal_system(const RootSystem& rs, const ComplexMatrix& b);

/// c_{q,i} = (f, g_{q,k-i}) / (e_{q,i}, g_{q,k-i}), flat canonical order.
/// For full-rank truncations sum_i c_i e_i reconstructs f.
std::vector<Complex> coefficients_c0(const ComplexVector& f, const RootSystem& rs,
                                     const BiorthogonalSystem& bs);

}  // namespace speclab
