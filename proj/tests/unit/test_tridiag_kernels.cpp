#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "brute_force.hpp"
#include "xychain/errors.hpp"
#include "xychain/tridiag_kernels.hpp"

using namespace xychain;

namespace {

struct RandomBlock {
  std::vector<double> diag, off;
};

RandomBlock random_block(std::mt19937_64& rng, int size) {
  std::uniform_real_distribution<double> d(-2.0, 2.0), e(0.1, 2.0);
  std::bernoulli_distribution neg(0.5);
  RandomBlock b;
  for (int i = 0; i < size; ++i) b.diag.push_back(d(rng));
  for (int i = 0; i + 1 < size; ++i) b.off.push_back(neg(rng) ? -e(rng) : e(rng));
  return b;
}

}  // namespace

TEST(HomogeneousEigenpairs, ThreeSites) {
  const Spectrum s = homogeneous_eigenpairs(3, 0.0, 1.0);
  ASSERT_EQ(s.size(), 3);
  EXPECT_NEAR(s.eigenvalues[0], -std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(s.eigenvalues[1], 0.0, 1e-15);
  EXPECT_NEAR(s.eigenvalues[2], std::sqrt(2.0), 1e-15);
}

TEST(HomogeneousEigenpairs, SingleSite) {
  const Spectrum s = homogeneous_eigenpairs(1, 0.7, -3.0);
  ASSERT_EQ(s.size(), 1);
  EXPECT_NEAR(s.eigenvalues[0], 0.7, 1e-15);
  EXPECT_NEAR(s.eigenvectors(0, 0), 1.0, 1e-15);
}

TEST(HomogeneousEigenpairs, TwoSitesVectors) {
  const Spectrum s = homogeneous_eigenpairs(2, 0.0, 1.0);
  EXPECT_NEAR(s.eigenvalues[0], -1.0, 1e-15);
  EXPECT_NEAR(s.eigenvalues[1], 1.0, 1e-15);
  // lambda = 1: (sin(pi/3), sin(2pi/3)) normalised; lambda = -1: (sin(2pi/3), sin(4pi/3)).
  const double h = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(s.eigenvectors(0, 1), h, 1e-15);
  EXPECT_NEAR(s.eigenvectors(1, 1), h, 1e-15);
  EXPECT_NEAR(s.eigenvectors(0, 0), h, 1e-15);
  EXPECT_NEAR(s.eigenvectors(1, 0), -h, 1e-15);
}

TEST(HomogeneousEigenpairs, MatchesJacobiAndFirstNonzeroPositive) {
  for (double c : {1.0, -0.5}) {
    const int n = 9;
    const Spectrum s = homogeneous_eigenpairs(n, 0.3, c);
    brute::Matrix vecs;
    const auto ref = brute::jacobi_eigen(brute::tridiagonal(std::vector<double>(n, 0.3), std::vector<double>(n - 1, c)), &vecs);
    for (int j = 0; j < n; ++j) {
      EXPECT_NEAR(s.eigenvalues[j], ref[j], 1e-13);
      double first = 0;
      for (int m = 0; m < n && first == 0; ++m) {
        if (std::abs(s.eigenvectors(m, j)) > 1e-14) first = s.eigenvectors(m, j);
      }
      EXPECT_GT(first, 0.0);
      double dot = 0;
      for (int m = 0; m < n; ++m) dot += s.eigenvectors(m, j) * vecs[m][j];
      EXPECT_NEAR(std::abs(dot), 1.0, 1e-12);
    }
  }
}

TEST(HomogeneousEigenpairs, Preconditions) {
  EXPECT_THROW(homogeneous_eigenpairs(3, 0.0, 0.0), std::invalid_argument);
  EXPECT_THROW(homogeneous_eigenpairs(0, 0.0, 1.0), std::invalid_argument);
}

TEST(PrincipalMinorDet, BaseCases) {
  const std::vector<double> diag{2.0, 4.0}, off{1.0};
  EXPECT_DOUBLE_EQ(principal_minor_det(SubBlockRef(diag, off, 1, 1), 0.0), 2.0);
  EXPECT_DOUBLE_EQ(principal_minor_det(SubBlockRef(diag, off, 1, 2), 0.0), 7.0);
  EXPECT_DOUBLE_EQ(principal_minor_det(SubBlockRef(diag, off, 2, 1), 0.0), 1.0);
  EXPECT_DOUBLE_EQ(principal_minor_det(SubBlockRef(diag, off, 3, 2), 5.0), 1.0);
}

TEST(PrincipalMinorDet, MatchesCofactorExpansion) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + trial % 8;
    const RandomBlock b = random_block(rng, n + 3);
    for (int first = 1; first + n - 1 <= n + 3; first += 2) {
      const int last = first + n - 1;
      const double lambda = 0.37 * trial - 3.0;
      std::vector<double> d(b.diag.begin() + first - 1, b.diag.begin() + last);
      std::vector<double> e(b.off.begin() + first - 1, b.off.begin() + last - 1);
      const double ref = brute::cofactor_det(brute::shifted(brute::tridiagonal(d, e), lambda));
      const double got = principal_minor_det(SubBlockRef(b.diag, b.off, first, last), lambda);
      EXPECT_NEAR(got, ref, 1e-12 * std::max(1.0, std::abs(ref)));
      const auto with = principal_minor_det_with_derivative(SubBlockRef(b.diag, b.off, first, last), lambda);
      EXPECT_NEAR(with.value, ref, 1e-12 * std::max(1.0, std::abs(ref)));
      const double h = 1e-6;
      const double fd = (brute::cofactor_det(brute::shifted(brute::tridiagonal(d, e), lambda + h)) -
                         brute::cofactor_det(brute::shifted(brute::tridiagonal(d, e), lambda - h))) /
                        (2 * h);
      EXPECT_NEAR(with.derivative, fd, 1e-6 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST(PrincipalMinorDet, SignAtInfinityAndSignChanges) {
  std::mt19937_64 rng(5);
  const RandomBlock b = random_block(rng, 12);
  const SubBlockRef block(b.diag, b.off, 1, 12);
  const auto eig = brute::jacobi_eigen(brute::tridiagonal(b.diag, b.off));
  EXPECT_GT(principal_minor_det(block, 1e3), 0.0);  // (-1)^12
  int changes = 0;
  double prev = principal_minor_det(block, eig.front() - 1.0);
  for (std::size_t i = 0; i < eig.size(); ++i) {
    const double next_point = i + 1 < eig.size() ? 0.5 * (eig[i] + eig[i + 1]) : eig.back() + 1.0;
    const double v = principal_minor_det(block, next_point);
    if ((v > 0) != (prev > 0)) ++changes;
    prev = v;
  }
  EXPECT_EQ(changes, 12);
}

TEST(PrincipalMinorDet, LargeBlocksNeedLogForm) {
  const int n = 400;
  std::vector<double> diag(n, 0.0), off(n - 1, 1.0);
  EXPECT_THROW(principal_minor_det(SubBlockRef(diag, off, 1, n), 0.1), std::invalid_argument);
  // det(H - lambda) = prod (lambda_j - lambda) with lambda_j = 2 cos(pi j/(n+1)).
  const double lambda = 0.1;
  double log_abs = 0.0;
  int sign = 1;
  for (int j = 1; j <= n; ++j) {
    const double f = 2.0 * std::cos(std::numbers::pi * j / (n + 1)) - lambda;
    log_abs += std::log(std::abs(f));
    if (f < 0) sign = -sign;
  }
  const SignedLog got = principal_minor_logdet(SubBlockRef(diag, off, 1, n), lambda);
  EXPECT_EQ(got.sign, sign);
  EXPECT_NEAR(got.log_abs, log_abs, 1e-9 * std::max(1.0, std::abs(log_abs)));
  std::vector<double> big(n, 1e3);
  const SignedLog huge = principal_minor_logdet(SubBlockRef(big, off, 1, n), 0.0);
  EXPECT_TRUE(std::isfinite(huge.log_abs));
  EXPECT_GT(huge.log_abs, 2000.0);
}

TEST(AdjugateEntry, SmallestCases) {
  const std::vector<double> diag{0.3, -0.8}, off{1.7};
  EXPECT_DOUBLE_EQ(adjugate_entry(SubBlockRef(diag, off, 1, 2), 0.4, 1, 2), -1.7);
  EXPECT_DOUBLE_EQ(adjugate_entry(SubBlockRef(diag, off, 1, 2), 0.4, 2, 1), -1.7);
  EXPECT_DOUBLE_EQ(adjugate_entry(SubBlockRef(diag, off, 2, 2), 0.4, 1, 1), 1.0);
  EXPECT_THROW(adjugate_entry(SubBlockRef(diag, off, 1, 2), 0.4, 0, 1), std::out_of_range);
  EXPECT_THROW(adjugate_entry(SubBlockRef(diag, off, 1, 2), 0.4, 1, 3), std::out_of_range);
}

TEST(AdjugateEntry, MatchesCofactorAdjugate) {
  std::mt19937_64 rng(21);
  for (int n = 1; n <= 7; ++n) {
    for (int trial = 0; trial < 5; ++trial) {
      const RandomBlock b = random_block(rng, n + 2);
      const double lambda = 0.5 * trial - 1.0;
      std::vector<double> d(b.diag.begin() + 1, b.diag.begin() + 1 + n);
      std::vector<double> e(b.off.begin() + 1, b.off.begin() + n);
      const auto adj = brute::cofactor_adjugate(brute::shifted(brute::tridiagonal(d, e), lambda));
      const SubBlockRef block(b.diag, b.off, 2, n + 1);
      for (int s = 1; s <= n; ++s) {
        for (int t = 1; t <= n; ++t) {
          EXPECT_NEAR(adjugate_entry(block, lambda, s, t), adj[s - 1][t - 1], 1e-12 * std::max(1.0, std::abs(adj[s - 1][t - 1])))
              << "n=" << n << " s=" << s << " t=" << t;
        }
      }
    }
  }
}

TEST(ResolventEntry, ScalarInverse) {
  const std::vector<double> diag{0.0}, off{};
  EXPECT_DOUBLE_EQ(resolvent_entry(SubBlockRef(diag, off, 1, 1), 1.0, 1, 1), -1.0);
}

TEST(ResolventEntry, MatchesGaussJordanInverse) {
  std::mt19937_64 rng(31);
  for (int n = 1; n <= 8; ++n) {
    for (int trial = 0; trial < 4; ++trial) {
      const RandomBlock b = random_block(rng, n);
      const double lambda = 0.123 + 0.71 * trial;
      const auto inv = brute::gauss_inverse(brute::shifted(brute::tridiagonal(b.diag, b.off), lambda));
      double largest = 0;
      for (const auto& row : inv)
        for (double v : row) largest = std::max(largest, std::abs(v));
      const SubBlockRef block(b.diag, b.off, 1, n);
      for (int s = 1; s <= n; ++s) {
        for (int t = 1; t <= n; ++t) {
          EXPECT_NEAR(resolvent_entry(block, lambda, s, t), inv[s - 1][t - 1], 1e-12 * largest);
        }
      }
    }
  }
}

TEST(ResolventEntry, SingularAtBlockEigenvalue) {
  const std::vector<double> diag{0.0, 0.0, 0.0}, off{1.0, 1.0};
  EXPECT_THROW(resolvent_entry(SubBlockRef(diag, off, 1, 3), std::sqrt(2.0), 1, 1), SingularResolventError);
  EXPECT_THROW(resolvent_entry(SubBlockRef(diag, off, 1, 3), 0.0, 1, 2), SingularResolventError);
}

TEST(SturmCount, GershgorinBoundsAndClosedForm) {
  ChainArrays a{{0, 0, 0}, {1, 1}};
  EXPECT_EQ(sturm_count(a, -2.0 - 1e-9), 0);
  EXPECT_EQ(sturm_count(a, 2.0 + 1e-9), 3);
  EXPECT_EQ(sturm_count(a, 0.5), 2);
  const Interval box = gershgorin_bounds(a.diag, a.offdiag);
  EXPECT_DOUBLE_EQ(box.lo, -2.0);
  EXPECT_DOUBLE_EQ(box.hi, 2.0);
}

TEST(SturmCount, MonotoneAndCountsMultiplicity) {
  const int n = 15;
  const Spectrum s = homogeneous_eigenpairs(n, 0.25, -0.75);
  ChainArrays a{std::vector<double>(n, 0.25), std::vector<double>(n - 1, -0.75)};
  int prev = 0;
  for (double x = -2.0; x <= 2.5; x += 0.01) {
    const int c = sturm_count(a, x);
    EXPECT_GE(c, prev);
    prev = c;
  }
  const double eps = 1e-9;
  for (int j = 0; j < n; ++j) {
    EXPECT_EQ(sturm_count(a, s.eigenvalues[j] + eps) - sturm_count(a, s.eigenvalues[j] - eps), 1);
  }
  // A window covering two eigenvalues counts both.
  EXPECT_EQ(sturm_count(a, s.eigenvalues[4] + eps) - sturm_count(a, s.eigenvalues[3] - eps), 2);
}

TEST(SturmCount, SurvivesExtremeMagnitudes) {
  const int n = 2000;
  ChainArrays a{std::vector<double>(n, 0.0), std::vector<double>(n - 1, 1e150)};
  EXPECT_EQ(sturm_count(a, -3e150), 0);
  EXPECT_EQ(sturm_count(a, 3e150), n);
  EXPECT_EQ(sturm_count(a, 1e-300), n / 2);
}

TEST(ShiftedPairs, HeadBlocksHaveNoCommonEigenvalues) {
  std::mt19937_64 rng(41);
  for (int m = 2; m <= 8; ++m) {
    for (int trial = 0; trial < 20; ++trial) {
      const RandomBlock b = random_block(rng, m);
      const auto full = brute::jacobi_eigen(brute::tridiagonal(b.diag, b.off));
      const auto tail = brute::jacobi_eigen(brute::tridiagonal(std::vector<double>(b.diag.begin() + 1, b.diag.end()),
                                                               std::vector<double>(b.off.begin() + 1, b.off.end())));
      double gap = 1e300;
      for (double x : full)
        for (double y : tail) gap = std::min(gap, std::abs(x - y));
      EXPECT_GT(gap, 1e-10);
    }
  }
}

TEST(SolveShifted, MatchesGaussJordan) {
  std::mt19937_64 rng(51);
  for (int n : {1, 2, 3, 10}) {
    const RandomBlock b = random_block(rng, n);
    std::vector<double> rhs(n);
    for (int i = 0; i < n; ++i) rhs[i] = std::sin(1.0 + i);
    const auto inv = brute::gauss_inverse(brute::shifted(brute::tridiagonal(b.diag, b.off), 0.3));
    std::vector<double> x = rhs;
    solve_shifted(b.diag, b.off, 0.3, x);
    for (int i = 0; i < n; ++i) {
      double ref = 0;
      for (int j = 0; j < n; ++j) ref += inv[i][j] * rhs[j];
      EXPECT_NEAR(x[i], ref, 1e-11 * std::max(1.0, std::abs(ref)));
    }
  }
}

TEST(SubBlockRef, IndexChecks) {
  const std::vector<double> diag{1, 2, 3}, off{1, 1};
  EXPECT_THROW(SubBlockRef(diag, off, 0, 2), std::out_of_range);
  EXPECT_THROW(SubBlockRef(diag, off, 2, 4), std::out_of_range);
  EXPECT_THROW(SubBlockRef(diag, off, 3, 1), std::out_of_range);
  EXPECT_NO_THROW(SubBlockRef(diag, off, 4, 3));
  const SubBlockRef b(diag, off, 2, 3);
  EXPECT_EQ(b.size(), 2);
  EXPECT_EQ(b.diag_at(1), 2);
  EXPECT_EQ(b.slice(2, 2).diag_at(1), 3);
}
