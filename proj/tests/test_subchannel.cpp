#include <gtest/gtest.h>

#include <cmath>

#include "subchan/channel.hpp"
#include "subchan/fock.hpp"
#include "subchan/random.hpp"
#include "subchan/subchannel.hpp"
#include "subchan/zoo.hpp"

namespace subchan {
namespace {

FockOperator dyad(std::size_t k, std::size_t s, std::size_t dim) {
  return outer(fock_state(k, dim), fock_state(s, dim));
}

double max_abs(const FockOperator& x) { return x.cwiseAbs().maxCoeff(); }

// Random orthonormal d-frame in an N-level space.
Subspace random_subspace(Rng& rng, std::size_t dim, std::size_t d) {
  Eigen::MatrixXcd g(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(d));
  for (Eigen::Index j = 0; j < g.cols(); ++j) g.col(j) = random_unit_vector(rng, dim);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  return Subspace(qr.householderQ() * Eigen::MatrixXcd::Identity(g.rows(), g.cols()));
}

// Same span, new orthonormal basis: B U for a random unitary U.
Subspace rotate(Rng& rng, const Subspace& k) {
  const auto d = static_cast<Eigen::Index>(k.size());
  Eigen::MatrixXcd g(d, d);
  for (Eigen::Index j = 0; j < d; ++j) g.col(j) = random_unit_vector(rng, k.size());
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  const Eigen::MatrixXcd u = qr.householderQ();
  return Subspace(k.basis() * u);
}

Subspace cat_subspace(Complex alpha, std::size_t dim) {
  const FockVector plus = coherent_state(alpha, dim).amplitudes + coherent_state(-alpha, dim).amplitudes;
  const FockVector minus = coherent_state(alpha, dim).amplitudes - coherent_state(-alpha, dim).amplitudes;
  return Subspace::from_vectors({plus / plus.norm(), minus / minus.norm()});
}

TEST(Subspace, Validation) {
  EXPECT_THROW(Subspace::from_levels({0, 0}, 4), DimensionError);
  EXPECT_THROW(Subspace::from_levels({0, 4}, 4), RangeError);
  FockVector a = fock_state(0, 3), b = (fock_state(0, 3) + fock_state(1, 3)).normalized();
  EXPECT_THROW(Subspace::from_vectors({a, b}), ConstraintError);
  EXPECT_EQ(Subspace::from_levels({1, 3}, 5).support_block(), 4u);
}

TEST(Projector, FockPair) {
  FockOperator expected = FockOperator::Zero(4, 4);
  expected(0, 0) = expected(1, 1) = 1.0;
  EXPECT_EQ(projector(Subspace::from_levels({0, 1}, 4)), expected);
}

TEST(Projector, RankOneSuperposition) {
  const FockVector v = (fock_state(0, 4) + fock_state(1, 4)) / std::sqrt(2.0);
  const FockOperator p = projector(Subspace::from_vectors({v}));
  EXPECT_NEAR(p(0, 0).real(), 0.5, 1e-15);
  EXPECT_NEAR(p(0, 1).real(), 0.5, 1e-15);
  EXPECT_NEAR(p(1, 1).real(), 0.5, 1e-15);
}

TEST(Projector, RandomPairIdempotent) {
  Rng rng(3);
  for (int n = 0; n < 10; ++n) {
    const FockOperator p = projector(random_subspace(rng, 8, 2));
    EXPECT_LT(max_abs(p * p - p), 1e-12);
    EXPECT_LT(hermiticity_defect(p), 1e-12);
    EXPECT_NEAR(p.trace().real(), 2.0, 1e-10);
  }
}

TEST(Restrict, PhaseDampingCoherence) {
  const double eta = 0.6;
  const KrausChannel pd = phase_damping(eta, 8);
  const RestrictedMap psi = restrict(pd, Subspace::from_levels({0, 1}, 8));
  EXPECT_LT(max_abs(psi(dyad(0, 1, 8)) - eta * dyad(0, 1, 8)), 1e-12);
}

TEST(Restrict, AmplitudeDampingInsideHull) {
  const double eta = 0.4;
  const KrausChannel ad = amplitude_damping(eta, 8);
  const RestrictedMap psi = restrict(ad, Subspace::from_levels({0, 1}, 8));
  EXPECT_LT(max_abs(psi(dyad(1, 1, 8)) - (eta * dyad(1, 1, 8) + (1 - eta) * dyad(0, 0, 8))), 1e-15);
}

TEST(Restrict, AmplitudeDampingLosesTraceOutsideHull) {
  const double eta = 0.4;
  const KrausChannel ad = amplitude_damping(eta, 8);
  const RestrictedMap psi = restrict(ad, Subspace::from_levels({1, 2}, 8));
  const FockOperator y = psi(dyad(1, 1, 8));
  EXPECT_LT(max_abs(y - eta * dyad(1, 1, 8)), 1e-15);
  EXPECT_NEAR(y.trace().real(), eta, 1e-15);
}

TEST(Restrict, RejectsInputsOffK) {
  const KrausChannel ad = amplitude_damping(0.4, 6);
  const RestrictedMap psi = restrict(ad, Subspace::from_levels({0, 1}, 6));
  EXPECT_THROW(psi(dyad(2, 2, 6)), ContractViolation);
  EXPECT_THROW(psi(dyad(0, 2, 6)), ContractViolation);
  EXPECT_THROW(restrict(ad, Subspace::from_levels({0, 1}, 5)), DimensionError);
}

TEST(Restrict, OutputSupportedOnK) {
  Rng rng(6);
  const KrausChannel ad = amplitude_damping(0.3, 8);
  for (int n = 0; n < 10; ++n) {
    const Subspace k = random_subspace(rng, 8, 3);
    const FockOperator p = projector(k);
    const FockOperator rho = p * random_state(rng, 8) * p;
    const FockOperator q = FockOperator::Identity(8, 8) - p;
    const FockOperator y = restrict(ad, k)(rho / rho.trace());
    EXPECT_LE(operator_norm(q * y * q), 1e-12);
  }
}

TEST(HullCheck, PhaseDampingAnyFockSet) {
  const KrausChannel pd = phase_damping(0.5, 16);
  const HullReport r = invariant_hull_check(pd, Subspace::from_levels({2, 7}, 16));
  EXPECT_TRUE(r.is_invariant_hull);
  EXPECT_EQ(r.probed_inputs, 4u);
  EXPECT_TRUE(r.is_subchannel);
  EXPECT_TRUE(r.is_unital_subchannel);
}

TEST(HullCheck, AmplitudeDampingLowestLevels) {
  const KrausChannel ad = amplitude_damping(0.35, 12);
  for (std::size_t d = 1; d <= 5; ++d) {
    std::vector<std::size_t> levels(d);
    for (std::size_t i = 0; i < d; ++i) levels[i] = i;
    const HullReport r = invariant_hull_check(ad, Subspace::from_levels(levels, 12));
    EXPECT_TRUE(r.is_invariant_hull) << d;
    EXPECT_TRUE(r.is_subchannel) << d;
  }
}

TEST(HullCheck, AmplitudeDampingShiftedPair) {
  const double eta = 0.35;
  const HullReport r = invariant_hull_check(amplitude_damping(eta, 12), Subspace::from_levels({1, 2}, 12));
  EXPECT_FALSE(r.is_invariant_hull);
  EXPECT_GE(r.max_leakage, (1 - eta) - 1e-9);
  EXPECT_FALSE(r.is_subchannel);
}

TEST(HullCheck, DepolarizingHasNoHull) {
  Rng rng(2);
  const KrausChannel dep = depolarizing(0.5, 5);
  for (std::size_t d = 1; d < 5; ++d) EXPECT_FALSE(invariant_hull_check(dep, random_subspace(rng, 5, d)).is_invariant_hull);
  EXPECT_TRUE(invariant_hull_check(dep, Subspace::from_levels({0, 1, 2, 3, 4}, 5)).is_invariant_hull);
}

TEST(HullCheck, CatStatesAreNotInvariant) {
  const KrausChannel ad = amplitude_damping(0.5, 32);
  const Subspace cats = cat_subspace(1.0, 32);
  EXPECT_NEAR(std::abs(cats.vector(0).dot(cats.vector(1))), 0.0, 1e-15);
  const HullReport r = invariant_hull_check(ad, cats);
  EXPECT_FALSE(r.is_invariant_hull);
  EXPECT_GT(r.max_leakage, 1e-3);
}

TEST(HullCheck, RefusesCoarseTruncation) {
  const KrausChannel pd = phase_damping(0.5, 8, {.kraus_truncation = 3});
  EXPECT_THROW(invariant_hull_check(pd, Subspace::from_levels({5, 6}, 8)), PrecisionError);
}

TEST(HullCheck, BasisIndependent) {
  Rng rng(14);
  const KrausChannel ad = amplitude_damping(0.6, 8);
  const KrausChannel pd = phase_damping(0.6, 8);
  const Subspace hull = Subspace::from_levels({0, 1, 2}, 8);
  const Subspace pd_hull = Subspace::from_levels({1, 4}, 8);
  const Subspace off = Subspace::from_levels({2, 5}, 8);
  for (int n = 0; n < 5; ++n) {
    EXPECT_TRUE(invariant_hull_check(ad, rotate(rng, hull)).is_invariant_hull);
    EXPECT_TRUE(invariant_hull_check(pd, rotate(rng, pd_hull)).is_invariant_hull);
    EXPECT_FALSE(invariant_hull_check(ad, rotate(rng, off)).is_invariant_hull);
  }
}

TEST(HullCheck, HullRestrictionIsTracePreserving) {
  Rng rng(15);
  const KrausChannel ad = amplitude_damping(0.25, 10);
  const Subspace k = Subspace::from_levels({0, 1, 2}, 10);
  ASSERT_TRUE(invariant_hull_check(ad, k).is_invariant_hull);
  const RestrictedMap psi = restrict(ad, k);
  for (int n = 0; n < 10; ++n) EXPECT_NEAR(psi(random_state(rng, 10, 3)).trace().real(), 1.0, 1e-9);
}

TEST(UnitalityCheck, PhaseDampingPairs) {
  const KrausChannel pd = phase_damping(0.4, 10);
  for (std::size_t k = 0; k < 10; ++k)
    for (std::size_t s = k + 1; s < 10; ++s) {
      const Subspace K = Subspace::from_levels({k, s}, 10);
      EXPECT_TRUE(unitality_check(pd, K).holds);
      EXPECT_TRUE(unital_subchannel_check(pd, K).holds);
    }
}

TEST(UnitalityCheck, AmplitudeDampingLowestPair) {
  // span{|0>,|1>} is a trace-preserving subchannel (P Phi*(P) P = P holds) but
  // not a unital one: Psi(P) = (2 - eta)|0><0| + eta|1><1|.
  for (double eta : {0.1, 0.5, 0.9}) {
    const KrausChannel ad = amplitude_damping(eta, 12);
    const Subspace K = Subspace::from_levels({0, 1}, 12);
    const UnitalityResult dual = unitality_check(ad, K);
    EXPECT_TRUE(dual.holds);
    EXPECT_LT(dual.defect, 1e-14);
    const UnitalityResult primal = unital_subchannel_check(ad, K);
    EXPECT_FALSE(primal.holds);
    EXPECT_NEAR(primal.defect, 1 - eta, 1e-14);
    // Phi* still pulls weight in from higher levels outside K.
    EXPECT_GT(adjoint_apply(ad, projector(K))(2, 2).real(), 0.0);
  }
}

TEST(UnitalityCheck, FullSpaceAgreesWithTpDefect) {
  for (const KrausChannel& ch : {amplitude_damping(0.3, 8), phase_damping(0.3, 8), depolarizing(0.7, 8),
                                 phase_damping(0.3, 8, {.kraus_truncation = 10})}) {
    std::vector<std::size_t> all(8);
    for (std::size_t i = 0; i < 8; ++i) all[i] = i;
    EXPECT_NEAR(unitality_check(ch, Subspace::from_levels(all, 8)).defect, tp_defect(ch), 1e-10);
  }
}

TEST(FixedPoints, AmplitudeDampingVacuumOnly) {
  const auto fp = fixed_point_space(amplitude_damping(0.3, 16));
  ASSERT_EQ(fp.size(), 1u);
  EXPECT_GE(std::norm(hs_inner(dyad(0, 0, 16), fp[0])), 1 - 1e-8);
}

TEST(FixedPoints, PhaseDampingDiagonals) {
  const auto fp = fixed_point_space(phase_damping(0.5, 8));
  ASSERT_EQ(fp.size(), 8u);
  for (std::size_t k = 0; k < 8; ++k) {
    double captured = 0.0;
    for (const auto& f : fp) captured += std::norm(hs_inner(f, dyad(k, k, 8)));
    EXPECT_NEAR(captured, 1.0, 1e-8) << k;
  }
}

TEST(FixedPoints, IdentityChannelFixesEverything) {
  EXPECT_EQ(fixed_point_space(identity_channel(4)).size(), 16u);
}

TEST(FixedPoints, MembersAreFixedAndOrthonormal) {
  for (const KrausChannel& ch : {amplitude_damping(0.3, 6), phase_damping(0.5, 6), identity_channel(3)}) {
    const auto fp = fixed_point_space(ch, 1e-8);
    for (std::size_t i = 0; i < fp.size(); ++i) {
      EXPECT_LE(fp[i].norm() > 0 ? (apply_channel(ch, fp[i]) - fp[i]).norm() : 0.0, 10 * 1e-8);
      for (std::size_t j = 0; j < fp.size(); ++j)
        EXPECT_NEAR(std::abs(hs_inner(fp[i], fp[j])), i == j ? 1.0 : 0.0, 1e-10);
    }
  }
}

TEST(RestrictedMatrix, MatchesApplyChannel) {
  Rng rng(22);
  for (const KrausChannel& ch : {amplitude_damping(0.3, 6), phase_damping(0.45, 6), depolarizing(0.2, 6)}) {
    const Subspace k = random_subspace(rng, 6, 2);
    const Eigen::MatrixXcd r = restricted_matrix(ch, k);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        const FockOperator y = apply_channel(ch, outer(k.vector(i), k.vector(j)));
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b)
            EXPECT_LT(std::abs(r(a * 2 + b, i * 2 + j) - k.vector(a).dot(y * k.vector(b))), 1e-13);
      }
  }
}

}  // namespace
}  // namespace subchan
