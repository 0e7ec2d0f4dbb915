#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "subchan/channel.hpp"
#include "subchan/fock.hpp"
#include "subchan/random.hpp"
#include "subchan/zoo.hpp"

namespace subchan {
namespace {

FockOperator dyad(std::size_t k, std::size_t s, std::size_t dim) {
  return outer(fock_state(k, dim), fock_state(s, dim));
}

double max_abs(const FockOperator& x) { return x.cwiseAbs().maxCoeff(); }

TEST(PhaseDamping, EtaOneIsIdentity) {
  const KrausChannel pd = phase_damping(1.0, 4);
  ASSERT_EQ(pd.kraus_truncation(), 1u);
  EXPECT_EQ(pd.kraus_ops()[0], FockOperator::Identity(4, 4));
  EXPECT_EQ(pd.family(), ChannelFamily::phase_damping);
}

TEST(PhaseDamping, DomainErrors) {
  EXPECT_THROW(phase_damping(0.0, 4), DomainError);
  EXPECT_THROW(phase_damping(-0.1, 4), DomainError);
  EXPECT_THROW(phase_damping(1.5, 4), DomainError);
  EXPECT_THROW(phase_damping(0.5, 4, {.kraus_truncation = 0}), DomainError);
  EXPECT_THROW(phase_damping(0.5, 4, {.working_block = 5}), RangeError);
}

TEST(PhaseDamping, KrausEntriesMatchFormula) {
  const double eta = 0.8;
  const KrausChannel pd = phase_damping(eta, 5, {.kraus_truncation = 6});
  const double c = std::sqrt(-2.0 * std::log(eta));
  for (std::size_t i = 0; i < 6; ++i) {
    const auto& e = pd.kraus_ops()[i];
    EXPECT_TRUE(e.isDiagonal(0.0));
    for (int k = 0; k < 5; ++k) {
      const double expected = std::pow(k * c, static_cast<double>(i)) / std::sqrt(std::tgamma(i + 1.0)) *
                              std::pow(eta, k * k);
      EXPECT_NEAR(e(k, k).real(), expected, 1e-14 * std::max(1.0, expected));
    }
  }
}

TEST(PhaseDamping, DiagonalsFixed) {
  const KrausChannel pd = phase_damping(0.5, 6);
  EXPECT_LT(max_abs(apply_channel(pd, dyad(2, 2, 6)) - dyad(2, 2, 6)), 1e-12);
  for (std::size_t k = 0; k < 6; ++k)
    EXPECT_LT(max_abs(apply_channel(pd, dyad(k, k, 6)) - dyad(k, k, 6)), 1e-12);
  EXPECT_LT(max_abs(apply_channel(pd, dyad(0, 2, 6)) - std::pow(0.5, 4) * dyad(0, 2, 6)), 1e-12);
}

TEST(PhaseDamping, WorkingBlockShrinksTruncation) {
  const KrausChannel full = phase_damping(0.3, 16);
  const KrausChannel low = phase_damping(0.3, 16, {.working_block = 4});
  EXPECT_LT(low.kraus_truncation(), full.kraus_truncation());
  EXPECT_LE(tp_defect(low, 4), 1e-12);
  EXPECT_LE(tp_defect(full, 16), 1e-12);
}

TEST(PhaseDamping, MemoryGuard) {
  EXPECT_THROW(phase_damping(1e-6, 64), ResourceError);
}

TEST(PhaseDampingClosed, Values) {
  EXPECT_EQ(phase_damping_closed(0.5, 1, 1), 1.0);
  EXPECT_DOUBLE_EQ(phase_damping_closed(0.5, 1, 2), 0.5);
  EXPECT_NEAR(phase_damping_closed(0.9, 0, 3), 0.387420489, 1e-12);
  EXPECT_THROW(phase_damping_closed(0.0, 0, 1), DomainError);
}

TEST(AmplitudeDamping, EtaOneIsIdentity) {
  const KrausChannel ad = amplitude_damping(1.0, 4);
  ASSERT_EQ(ad.kraus_truncation(), 4u);
  int nonzero = 0;
  for (const auto& e : ad.kraus_ops())
    if (e.cwiseAbs().maxCoeff() > 0.0) ++nonzero;
  EXPECT_EQ(nonzero, 1);
  EXPECT_EQ(ad.kraus_ops()[0], FockOperator::Identity(4, 4));
}

TEST(AmplitudeDamping, EtaZeroSendsEverythingToVacuum) {
  Rng rng(4);
  const KrausChannel ad = amplitude_damping(0.0, 4);
  for (int n = 0; n < 5; ++n) {
    const FockOperator rho = random_state(rng, 4);
    EXPECT_LT(max_abs(apply_channel(ad, rho) - dyad(0, 0, 4)), 1e-14);
  }
}

TEST(AmplitudeDamping, ExcitedLevel) {
  const FockOperator y = apply_channel(amplitude_damping(0.25, 8), dyad(1, 1, 8));
  EXPECT_LT(max_abs(y - (0.25 * dyad(1, 1, 8) + 0.75 * dyad(0, 0, 8))), 1e-15);
}

TEST(AmplitudeDamping, ExactlyTracePreserving) {
  for (double eta : {0.0, 0.1, 0.5, 0.93, 1.0}) EXPECT_LE(tp_defect(amplitude_damping(eta, 32)), 1e-12) << eta;
  EXPECT_THROW(amplitude_damping(-0.01, 4), DomainError);
  EXPECT_THROW(amplitude_damping(1.01, 4), DomainError);
}

TEST(AmplitudeDampingClosed, Values) {
  EXPECT_LT(max_abs(amplitude_damping_closed(0.5, 0, 0, 4) - dyad(0, 0, 4)), 1e-15);
  EXPECT_LT(max_abs(amplitude_damping_closed(0.25, 1, 1, 4) - (0.25 * dyad(1, 1, 4) + 0.75 * dyad(0, 0, 4))), 1e-15);
  EXPECT_LT(max_abs(amplitude_damping_closed(0.25, 0, 1, 4) - 0.5 * dyad(0, 1, 4)), 1e-15);
  EXPECT_THROW(amplitude_damping_closed(0.5, 2, 1, 4), DomainError);
  EXPECT_THROW(amplitude_damping_closed(0.5, 1, 4, 4), RangeError);
}

TEST(AmplitudeDampingClosed, MatchesEntrywiseOracle) {
  for (double eta : {0.0, 0.2, 0.75}) {
    for (std::size_t k = 0; k < 8; ++k)
      for (std::size_t s = k; s < 8; ++s)
        EXPECT_LT(max_abs(amplitude_damping_closed(eta, k, s, 8) - oracle::amplitude_damping_dyad(eta, k, s, 8)),
                  1e-14);
  }
}

TEST(AmplitudeDampingMatrixForm, VacuumFixed) {
  EXPECT_LT(max_abs(amplitude_damping_matrix_form(0.4, dyad(0, 0, 5)) - dyad(0, 0, 5)), 1e-15);
}

TEST(AmplitudeDampingMatrixForm, MaximallyMixedCorner) {
  const FockOperator x = FockOperator::Identity(4, 4) / 4.0;
  const FockOperator y = amplitude_damping_matrix_form(0.5, x);
  EXPECT_NEAR(y(0, 0).real(), 0.25 * (1 + 0.5 + 0.25 + 0.125), 1e-15);
  EXPECT_LT(max_abs(y - apply_channel(amplitude_damping(0.5, 4), x)), 1e-14);
}

TEST(AmplitudeDampingMatrixForm, MatchesKrausOnRandomInputs) {
  Rng rng(17);
  const KrausChannel ad = amplitude_damping(0.3, 8);
  for (int n = 0; n < 5; ++n) {
    const FockOperator x = random_hermitian(rng, 8);
    EXPECT_LT(max_abs(amplitude_damping_matrix_form(0.3, x) - apply_channel(ad, x)), 1e-12);
  }
  EXPECT_THROW(amplitude_damping_matrix_form(0.3, FockOperator::Zero(2, 3)), DimensionError);
}

TEST(Depolarizing, AffineAction) {
  Rng rng(9);
  const FockOperator rho = random_state(rng, 3);
  EXPECT_LT(max_abs(apply_channel(depolarizing(1.0, 3), rho) - rho), 1e-15);
  EXPECT_LT(max_abs(apply_channel(depolarizing(0.0, 4), random_state(rng, 4)) - FockOperator::Identity(4, 4) / 4.0),
            1e-15);
  FockOperator expected = FockOperator::Zero(2, 2);
  expected(0, 0) = 0.65;
  expected(1, 1) = 0.35;
  EXPECT_LT(max_abs(apply_channel(depolarizing(0.3, 2), dyad(0, 0, 2)) - expected), 1e-15);
}

TEST(Depolarizing, MatchesAffineFormulaOnHermitianInputs) {
  Rng rng(10);
  for (double p : {0.0, 0.25, 0.8}) {
    const FockOperator x = random_hermitian(rng, 5);
    const FockOperator expected = p * x + (1 - p) * x.trace() * FockOperator::Identity(5, 5) / 5.0;
    EXPECT_LT(max_abs(apply_channel(depolarizing(p, 5), x) - expected), 1e-12);
  }
  EXPECT_THROW(depolarizing(1.2, 2), DomainError);
}

TEST(CoherentActionClosed, Vacuum) {
  EXPECT_LT(max_abs(coherent_action_closed(0.3, 0.0, 0.0, 8) - dyad(0, 0, 8)), 1e-15);
}

TEST(CoherentActionClosed, CoherentStateShrinks) {
  const FockOperator y = coherent_action_closed(0.49, 1.0, 1.0, 32);
  const FockVector a = coherent_state(0.7, 32).amplitudes;
  EXPECT_LT(max_abs(y - outer(a, a)), 1e-15);
}

TEST(CoherentActionClosed, OppositeAmplitudes) {
  const FockOperator y = coherent_action_closed(0.5, 1.0, -1.0, 32);
  const double r = std::sqrt(0.5);
  const FockOperator expected =
      std::exp(-1.0) * outer(coherent_state(r, 32).amplitudes, coherent_state(-r, 32).amplitudes);
  EXPECT_LT(max_abs(y - expected), 1e-15);
}

TEST(CoherentActionClosed, PrecisionGuard) {
  try {
    coherent_action_closed(0.5, 3.0, 0.0, 10);
    FAIL() << "expected PrecisionError";
  } catch (const PrecisionError& e) {
    EXPECT_NE(std::string(e.what()).find("needs dim >= " + std::to_string(coherent_dim_for(3.0, 1e-8))),
              std::string::npos);
  }
}

TEST(CoherentActionClosed, CovarianceAgainstKraus) {
  const KrausChannel ad = amplitude_damping(0.5, 32);
  for (Complex a : {Complex(1.0), Complex(0.5, 0.5), Complex(-1.5), Complex(0.0, 1.2)})
    for (Complex b : {Complex(1.0), Complex(-1.0), Complex(0.0, 0.5), Complex(1.1, -0.7)}) {
      const FockOperator x = outer(coherent_state(a, 32).amplitudes, coherent_state(b, 32).amplitudes);
      EXPECT_LT(max_abs(apply_channel(ad, x) - coherent_action_closed(0.5, a, b, 32)), 1e-7);
    }
}

// Closed forms against full Kraus application for k, s < N/2.
TEST(ClosedFormEquivalence, BothFamilies) {
  constexpr std::size_t dim = 16;
  for (double eta : {0.1, 0.5, 0.9}) {
    const KrausChannel pd = phase_damping(eta, dim);
    const KrausChannel ad = amplitude_damping(eta, dim);
    for (std::size_t k = 0; k < dim / 2; ++k)
      for (std::size_t s = 0; s < dim / 2; ++s) {
        EXPECT_LT(max_abs(apply_channel(pd, dyad(k, s, dim)) - phase_damping_closed(eta, k, s) * dyad(k, s, dim)),
                  1e-10);
        const FockOperator closed = k <= s ? amplitude_damping_closed(eta, k, s, dim)
                                           : FockOperator(amplitude_damping_closed(eta, s, k, dim).adjoint());
        EXPECT_LT(max_abs(apply_channel(ad, dyad(k, s, dim)) - closed), 1e-10);
      }
  }
}

TEST(AmplitudeDamping, SemigroupComposition) {
  Rng rng(12);
  constexpr std::size_t dim = 10;
  for (auto [e1, e2] : {std::pair{0.3, 0.7}, std::pair{0.9, 0.5}, std::pair{0.0, 0.4}}) {
    const KrausChannel a = amplitude_damping(e1, dim), b = amplitude_damping(e2, dim), ab = amplitude_damping(e1 * e2, dim);
    for (int n = 0; n < 5; ++n) {
      const FockOperator rho = random_state(rng, dim);
      EXPECT_LT(max_abs(apply_channel(b, apply_channel(a, rho)) - apply_channel(ab, rho)), 1e-10);
    }
  }
}

}  // namespace
}  // namespace subchan
