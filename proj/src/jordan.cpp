#include "speclab/jordan.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

namespace speclab {

ComplexMatrix RootSystem::basis_matrix() const {
  ComplexMatrix e(dim, nu_total());
  int col = 0;
  for (const auto& g : groups) {
    for (const auto& c : g.chains) {
      for (const auto& v : c.vectors) e.col(col++) = v;
    }
  }
  return e;
}

double RootSystem::basis_condition() const {
  Eigen::JacobiSVD<ComplexMatrix> svd(basis_matrix());
  const auto& s = svd.singularValues();
  double smin = s(s.size() - 1);
  return smin > 0.0 ? s(0) / smin : std::numeric_limits<double>::infinity();
}

int RootSystem::flat_index(int group, int chain, int position) const {
  int idx = 0;
  for (int g = 0; g < group; ++g) idx += groups[g].algebraic_multiplicity();
  for (int c = 0; c < chain; ++c) idx += groups[group].chains[c].length();
  return idx + position;
}

double RootSystem::chain_residual(const ComplexMatrix& b) const {
  double norm_b = b.norm();
  double worst = 0.0;
  for (const auto& g : groups) {
    for (const auto& c : g.chains) {
      for (int j = 0; j < c.length(); ++j) {
        ComplexVector r = b * c.vectors[j] - g.eigenvalue * c.vectors[j];
        if (j > 0) r -= c.vectors[j - 1];
        double denom = norm_b * c.vectors[j].norm() + (j > 0 ? c.vectors[j - 1].norm() : 0.0);
        worst = std::max(worst, r.norm() / std::max(denom, 1e-300));
      }
    }
  }
  return worst;
}

std::string RootSystem::to_json() const {
  std::ostringstream os;
  os << "{\"dim\":" << dim << ",\"nu_total\":" << nu_total() << ",\"groups\":[";
  for (size_t g = 0; g < groups.size(); ++g) {
    if (g) os << ",";
    const auto& grp = groups[g];
    os << "{\"eigenvalue\":[" << format_double(grp.eigenvalue.real()) << ","
       << format_double(grp.eigenvalue.imag()) << "],\"chains\":[";
    for (size_t c = 0; c < grp.chains.size(); ++c) {
      if (c) os << ",";
      os << "[";
      for (size_t v = 0; v < grp.chains[c].vectors.size(); ++v) {
        if (v) os << ",";
        os << "[";
        const auto& vec = grp.chains[c].vectors[v];
        for (Eigen::Index i = 0; i < vec.size(); ++i) {
          if (i) os << ",";
          os << "[" << format_double(vec(i).real()) << "," << format_double(vec(i).imag()) << "]";
        }
        os << "]";
      }
      os << "]";
    }
    os << "]}";
  }
  os << "]}";
  return os.str();
}

namespace {

// Orthonormal kernel basis of a at an absolute singular-value threshold.
ComplexMatrix kernel_basis(const ComplexMatrix& a, double tau) {
  Eigen::JacobiSVD<ComplexMatrix> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > tau) ++rank;
  }
  int nullity = static_cast<int>(a.cols()) - rank;
  return svd.matrixV().rightCols(nullity);
}

}  // namespace

RootSystem jordan_decompose(const ComplexMatrix& b, double tol) {
  require_square(b, "jordan_decompose");
  require_finite(b, "jordan_decompose");
  if (!(tol > 0.0)) throw std::invalid_argument("jordan_decompose: tol must be positive");
  const int n = static_cast<int>(b.rows());
  const double scale = std::max(b.norm(), 1e-300);

  Eigen::ComplexEigenSolver<ComplexMatrix> es(b, false);
  std::vector<Complex> evs(es.eigenvalues().data(), es.eigenvalues().data() + n);
  std::sort(evs.begin(), evs.end(), [](Complex x, Complex y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });

  // transitive clustering at distance tol*||b||
  struct Cluster {
    Complex mean;
    int count;
  };
  std::vector<Cluster> clusters;
  {
    std::vector<char> used(evs.size(), 0);
    for (size_t i = 0; i < evs.size(); ++i) {
      if (used[i]) continue;
      std::vector<size_t> members{i};
      used[i] = 1;
      for (size_t pos = 0; pos < members.size(); ++pos) {
        for (size_t j = 0; j < evs.size(); ++j) {
          if (!used[j] && std::abs(evs[members[pos]] - evs[j]) <= tol * scale) {
            used[j] = 1;
            members.push_back(j);
          }
        }
      }
      Complex sum = 0.0;
      for (size_t m : members) sum += evs[m];
      clusters.push_back({sum / double(members.size()), static_cast<int>(members.size())});
    }
  }
  std::sort(clusters.begin(), clusters.end(), [](const Cluster& x, const Cluster& y) {
    return std::abs(x.mean) > std::abs(y.mean);
  });

  RootSystem rs;
  rs.dim = n;

  for (const auto& cl : clusters) {
    const Complex mu = cl.mean;
    const int m_alg = cl.count;
    ComplexMatrix shifted = b - mu * ComplexMatrix::Identity(n, n);

    // kernel staircase of (B - mu)^j at thresholds scaled to the ambient norm
    const double norm_shift = std::max(1.0, shifted.norm());
    std::vector<ComplexMatrix> kernels;  // kernels[j-1] = orthonormal basis of N((B-mu)^j)
    ComplexMatrix power = ComplexMatrix::Identity(n, n);
    int prev_dim = 0;
    for (int j = 1; j <= m_alg; ++j) {
      power = power * shifted;
      double tau = std::max(tol, 1e-12) * scale * std::pow(norm_shift, j - 1);
      ComplexMatrix k = kernel_basis(power, tau);
      if (k.cols() <= prev_dim) break;  // stabilized
      kernels.push_back(k);
      prev_dim = static_cast<int>(k.cols());
      if (prev_dim >= m_alg) break;
    }
    if (kernels.empty() || static_cast<int>(kernels.back().cols()) != m_alg) {
      std::ostringstream os;
      os << "jordan_decompose: ill-conditioned chain extraction for eigenvalue cluster near ("
         << mu.real() << "," << mu.imag() << "): kernel staircase reached "
         << (kernels.empty() ? 0 : kernels.back().cols()) << " of algebraic multiplicity " << m_alg;
      throw std::runtime_error(os.str());
    }

    const int p = static_cast<int>(kernels.size());  // nilpotency index
    std::vector<int> d(p + 1, 0);
    for (int j = 1; j <= p; ++j) d[j] = static_cast<int>(kernels[j - 1].cols());
    std::vector<int> chains_ge(p + 2, 0);  // chains of length >= j
    for (int j = 1; j <= p; ++j) chains_ge[j] = d[j] - d[j - 1];

    EigenvalueGroup group;
    group.eigenvalue = mu;

    // level-j vectors already produced by mapping longer chains down
    std::vector<std::vector<ComplexVector>> occupied(p + 1);
    for (int j = p; j >= 1; --j) {
      int want = chains_ge[j] - chains_ge[j + 1];
      if (want <= 0) continue;
      // candidates live in N^j; exclude N^{j-1} and the already-occupied level-j span
      std::vector<ComplexVector> excluded;
      if (j >= 2) {
        for (int c = 0; c < kernels[j - 2].cols(); ++c) excluded.push_back(kernels[j - 2].col(c));
      }
      for (const auto& v : occupied[j]) excluded.push_back(v);
      ComplexMatrix q;
      if (!excluded.empty()) {
        ComplexMatrix ex(n, excluded.size());
        for (size_t c = 0; c < excluded.size(); ++c) ex.col(c) = excluded[c];
        Eigen::ColPivHouseholderQR<ComplexMatrix> qr(ex);
        qr.setThreshold(1e-12);
        int rank = static_cast<int>(qr.rank());
        q = ComplexMatrix(qr.householderQ()).leftCols(rank);
      }
      ComplexMatrix cand = kernels[j - 1];
      ComplexMatrix proj = cand;
      if (q.size() > 0) proj -= q * (q.adjoint() * cand);
      Eigen::JacobiSVD<ComplexMatrix> svd(proj, Eigen::ComputeFullV);
      for (int t = 0; t < want; ++t) {
        ComplexVector top = cand * svd.matrixV().col(t);
        top.normalize();
        // build the chain downward: e_{j-1} = top, e_{i-1} = (B-mu) e_i
        std::vector<ComplexVector> chain(j);
        chain[j - 1] = top;
        for (int i = j - 1; i >= 1; --i) {
          chain[i - 1] = shifted * chain[i];
          if (i - 1 >= 1) occupied[i].push_back(chain[i - 1]);
        }
        double base = chain[0].norm();
        if (base < 1e-13) {
          std::ostringstream os;
          os << "jordan_decompose: degenerate chain for eigenvalue cluster near (" << mu.real()
             << "," << mu.imag() << ")";
          throw std::runtime_error(os.str());
        }
        for (auto& v : chain) v /= base;  // eigenvector normalized, relations preserved
        JordanChain jc;
        jc.eigenvalue = mu;
        jc.vectors = std::move(chain);
        group.chains.push_back(std::move(jc));
      }
    }
    std::sort(group.chains.begin(), group.chains.end(),
              [](const JordanChain& a, const JordanChain& bch) { return a.length() > bch.length(); });
    rs.groups.push_back(std::move(group));
  }

  if (rs.nu_total() != n) {
    throw std::runtime_error("jordan_decompose: algebraic multiplicities sum to " +
                             std::to_string(rs.nu_total()) + ", expected " + std::to_string(n));
  }
  double res = rs.chain_residual(b);
  if (res > tol) {
    throw std::runtime_error("jordan_decompose: chain residual " + std::to_string(res) +
                             " exceeds tolerance " + std::to_string(tol));
  }
  return rs;
}

DeclaredSystem declared_root_system(const std::vector<std::pair<Complex, int>>& blocks,
                                    const ComplexMatrix& similarity) {
  require_square(similarity, "declared_root_system");
  int n = 0;
  for (const auto& [mu, size] : blocks) {
    (void)mu;
    if (size < 1) throw std::invalid_argument("declared_root_system: block size must be >= 1");
    n += size;
  }
  if (n != similarity.rows()) {
    throw std::invalid_argument("declared_root_system: block sizes sum to " + std::to_string(n) +
                                ", similarity is " + std::to_string(similarity.rows()) + "x" +
                                std::to_string(similarity.cols()));
  }
  ComplexMatrix j = ComplexMatrix::Zero(n, n);
  int at = 0;
  for (const auto& [mu, size] : blocks) {
    for (int i = 0; i < size; ++i) {
      j(at + i, at + i) = mu;
      if (i + 1 < size) j(at + i, at + i + 1) = 1.0;
    }
    at += size;
  }
  Eigen::FullPivLU<ComplexMatrix> lu(similarity);
  if (!lu.isInvertible()) throw std::invalid_argument("declared_root_system: similarity is singular");

  DeclaredSystem out;
  out.matrix = similarity * j * lu.inverse();
  out.root_system.dim = n;

  // group blocks by exact eigenvalue equality (declared structure)
  std::vector<std::pair<Complex, std::vector<std::pair<int, int>>>> grouped;  // mu -> [(offset,size)]
  at = 0;
  for (const auto& [mu, size] : blocks) {
    bool found = false;
    for (auto& g : grouped) {
      if (g.first == mu) {
        g.second.push_back({at, size});
        found = true;
        break;
      }
    }
    if (!found) grouped.push_back({mu, {{at, size}}});
    at += size;
  }
  std::sort(grouped.begin(), grouped.end(), [](const auto& a, const auto& b) {
    return std::abs(a.first) > std::abs(b.first);
  });
  for (const auto& [mu, spans] : grouped) {
    EigenvalueGroup group;
    group.eigenvalue = mu;
    for (const auto& [offset, size] : spans) {
      JordanChain chain;
      chain.eigenvalue = mu;
      for (int i = 0; i < size; ++i) chain.vectors.push_back(similarity.col(offset + i));
      group.chains.push_back(std::move(chain));
    }
    std::sort(group.chains.begin(), group.chains.end(),
              [](const JordanChain& a, const JordanChain& b) { return a.length() > b.length(); });
    out.root_system.groups.push_back(std::move(group));
  }
  return out;
}

BiorthogonalSystem biorthogonal_system(const RootSystem& rs, const ComplexMatrix& b) {
  require_square(b, "biorthogonal_system");
  if (rs.nu_total() != rs.dim || rs.dim != b.rows()) {
    throw std::invalid_argument("biorthogonal_system: root system does not span the truncation");
  }
  ComplexMatrix e = rs.basis_matrix();
  Eigen::FullPivLU<ComplexMatrix> lu(e);
  if (!lu.isInvertible()) {
    throw std::runtime_error("biorthogonal_system: root-vector matrix is singular");
  }
  ComplexMatrix dual_basis = lu.inverse().adjoint();  // columns g~_i with (e_i, g~_j) = delta_ij

  // Reverse within each chain so the pairing is mirrored: g_{q,j} = g~_{q,k-j}.
  // Then (B* - conj(mu)) g_0 = 0 and (B* - conj(mu)) g_j = g_{j-1}.
  BiorthogonalSystem bs;
  bs.duals.resize(rs.dim);
  int base = 0;
  for (const auto& g : rs.groups) {
    for (const auto& c : g.chains) {
      int k = c.length();
      for (int j = 0; j < k; ++j) {
        bs.duals[base + j] = dual_basis.col(base + (k - 1 - j));
      }
      base += k;
    }
  }

  // sanity: every mirrored pairing must be bounded away from zero
  base = 0;
  for (const auto& g : rs.groups) {
    for (const auto& c : g.chains) {
      int k = c.length();
      for (int i = 0; i < k; ++i) {
        Complex pairing = bs.duals[base + (k - 1 - i)].dot(c.vectors[i]);
        if (std::abs(pairing) < 1e-12) {
          throw std::runtime_error("biorthogonal_system: vanishing pairing in chain for eigenvalue (" +
                                   std::to_string(g.eigenvalue.real()) + "," +
                                   std::to_string(g.eigenvalue.imag()) + ")");
        }
      }
      base += k;
    }
  }
  return bs;
}

std::vector<Complex> coefficients_c0(const ComplexVector& f, const RootSystem& rs,
                                     const BiorthogonalSystem& bs) {
  if (f.size() != rs.dim) throw std::invalid_argument("coefficients_c0: dimension mismatch");
  if (static_cast<int>(bs.duals.size()) != rs.nu_total()) {
    throw std::invalid_argument("coefficients_c0: systems are inconsistent");
  }
  std::vector<Complex> c(rs.nu_total());
  int base = 0;
  for (const auto& g : rs.groups) {
    for (const auto& ch : g.chains) {
      int k = ch.length();
      for (int i = 0; i < k; ++i) {
        const ComplexVector& g_mirror = bs.duals[base + (k - 1 - i)];
        Complex denom = g_mirror.dot(ch.vectors[i]);  // (e_i, g_{k-i})
        if (std::abs(denom) < 1e-14) {
          throw std::runtime_error("coefficients_c0: zero denominator pairing");
        }
        Complex numer = g_mirror.dot(f);  // (f, g_{k-i})
        c[base + i] = numer / denom;
      }
      base += k;
    }
  }
  return c;
}

}  // namespace speclab
