#include "xychain/many_body.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <string>

#include <Eigen/Eigenvalues>

#include "xychain/errors.hpp"

namespace xychain {

namespace {

bool site_up(int sites, int state, int site) { return (state >> (sites - site)) & 1; }

// Staggered magnetisation times two: sum_n (-1)^n (2 m_n).
int twice_staggered(int sites, int state) {
  int q = 0;
  for (int s = 1; s <= sites; ++s) q += ((s % 2 == 0) ? 1 : -1) * (site_up(sites, state, s) ? 1 : -1);
  return q;
}

// Visit every nonzero element <target| H |state> of the MQ Hamiltonian.
template <class F>
void for_each_hamiltonian_element(const ChainArrays& arrays, int state, F&& emit) {
  const int sites = arrays.size();
  for (int bond = 1; bond < sites; ++bond) {
    const bool a = site_up(sites, state, bond);
    const bool b = site_up(sites, state, bond + 1);
    if (a != b) continue;  // I+I+ needs both down, I-I- both up
    const int mask = (1 << (sites - bond)) | (1 << (sites - bond - 1));
    emit(state ^ mask, 0.5 * arrays.offdiag[bond - 1]);
  }
}

void check_capacity(int sites) {
  if (sites < 1) throw ValidationError("many-body oracle needs at least one site");
  if (sites > kMaxManyBodySites) {
    throw CapacityError("many-body oracle supports N <= " + std::to_string(kMaxManyBodySites) + ", got " +
                        std::to_string(sites));
  }
}

}  // namespace

int ManyBodyState::twice_total_iz(int sites, int basis_state) {
  const int up = __builtin_popcount(static_cast<unsigned>(basis_state));
  return 2 * up - sites;
}

double ManyBodyState::order_weight(int order) const {
  double w = 0.0;
  for (int a = 0; a < dim(); ++a) {
    const int ma = twice_total_iz(sites, a);
    for (int b = 0; b < dim(); ++b) {
      if (ma - twice_total_iz(sites, b) == 2 * order) w += std::norm(matrix(a, b));
    }
  }
  return w;
}

double ManyBodyState::hermiticity_defect() const {
  return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
}

ManyBodyState total_iz(int sites) {
  check_capacity(sites);
  ManyBodyState out;
  out.sites = sites;
  const int dim = 1 << sites;
  out.matrix = Eigen::MatrixXcd::Zero(dim, dim);
  for (int b = 0; b < dim; ++b) out.matrix(b, b) = 0.5 * ManyBodyState::twice_total_iz(sites, b);
  return out;
}

ManyBodyState mq_hamiltonian(const ChainArrays& arrays) {
  const int sites = arrays.size();
  check_capacity(sites);
  ManyBodyState out;
  out.sites = sites;
  const int dim = 1 << sites;
  out.matrix = Eigen::MatrixXcd::Zero(dim, dim);
  for (int b = 0; b < dim; ++b) {
    for_each_hamiltonian_element(arrays, b, [&](int target, double value) { out.matrix(target, b) += value; });
  }
  return out;
}

ManyBodyIntensities manybody_mq_intensities(const ChainArrays& arrays, const std::vector<double>& times) {
  const int sites = arrays.size();
  check_capacity(sites);
  for (double t : times) {
    if (!std::isfinite(t) || t < 0.0) throw ValidationError("times must be finite and non-negative");
  }
  const int dim = 1 << sites;

  std::map<int, std::vector<int>> sectors;
  for (int b = 0; b < dim; ++b) sectors[twice_staggered(sites, b)].push_back(b);

  struct Sector {
    std::vector<int> states;
    Eigen::VectorXd energies;
    Eigen::MatrixXd vectors;
    Eigen::MatrixXd initial;  // I_z in the eigenbasis
  };
  std::vector<Sector> blocks;
  double purity0 = 0.0;
  for (auto& [q, states] : sectors) {
    const int m = static_cast<int>(states.size());
    std::map<int, int> local;
    for (int i = 0; i < m; ++i) local[states[i]] = i;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m, m);
    Eigen::VectorXd iz(m);
    for (int i = 0; i < m; ++i) {
      iz(i) = 0.5 * ManyBodyState::twice_total_iz(sites, states[i]);
      purity0 += iz(i) * iz(i);
      for_each_hamiltonian_element(arrays, states[i], [&](int target, double value) {
        h(local.at(target), i) += value;
      });
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
    Sector s;
    s.states = states;
    s.energies = solver.eigenvalues();
    s.vectors = solver.eigenvectors();
    s.initial = s.vectors.transpose() * iz.asDiagonal() * s.vectors;
    blocks.push_back(std::move(s));
  }

  const double norm = sites * std::ldexp(1.0, sites - 2);
  ManyBodyIntensities out;
  out.series.times = times;
  for (double t : times) {
    double g0 = 0.0, g2 = 0.0, gm2 = 0.0, other = 0.0, purity = 0.0;
    std::map<int, double> by_order;
    for (const Sector& s : blocks) {
      const int m = static_cast<int>(s.states.size());
      Eigen::MatrixXcd b(m, m);
      for (int a = 0; a < m; ++a) {
        for (int c = 0; c < m; ++c) {
          b(a, c) = s.initial(a, c) * std::polar(1.0, -(s.energies(a) - s.energies(c)) * t);
        }
      }
      const Eigen::MatrixXcd rho = s.vectors.cast<std::complex<double>>() * b *
                                   s.vectors.transpose().cast<std::complex<double>>();
      for (int a = 0; a < m; ++a) {
        const int ma = ManyBodyState::twice_total_iz(sites, s.states[a]);
        for (int c = 0; c < m; ++c) {
          const int order = (ma - ManyBodyState::twice_total_iz(sites, s.states[c])) / 2;
          by_order[order] += std::norm(rho(a, c));
        }
      }
    }
    for (const auto& [order, w] : by_order) {
      purity += w;
      if (order == 0) {
        g0 = w;
      } else if (order == 2) {
        g2 = w;
      } else if (order == -2) {
        gm2 = w;
      } else {
        other = std::max(other, w / norm);
      }
    }
    out.series.G0.push_back(g0 / norm);
    out.series.G2.push_back(g2 / norm);
    out.g_minus2.push_back(gm2 / norm);
    out.max_other_order = std::max(out.max_other_order, other);
    out.max_purity_drift = std::max(out.max_purity_drift, std::abs(purity - purity0) / purity0);
  }
  return out;
}

}  // namespace xychain
