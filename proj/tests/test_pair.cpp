#include <cmath>
#include <random>

#include "doctest.h"
#include "kaon/pair.hpp"

using namespace kaon;
using doctest::Approx;

namespace {
const PhysicalConstants k;
constexpr Outcome kAll[4] = {Outcome::K0, Outcome::K0bar, Outcome::KS, Outcome::KL};
}  // namespace

TEST_CASE("pair: initial state is antisymmetric") {
  const auto s = initial_pair();
  CHECK(s.norm_squared() == Approx(1.0));
  CHECK(joint_projective_prob(s, {Outcome::K0, Outcome::K0}) == Approx(0.0));
  CHECK(joint_projective_prob(s, {Outcome::K0, Outcome::K0bar}) == Approx(0.5));
  CHECK(joint_projective_prob(s, {Outcome::KS, Outcome::KS}) == Approx(0.0));
  CHECK(joint_projective_prob(s, {Outcome::KS, Outcome::KL}) == Approx(0.5));
}

TEST_CASE("pair: evolution") {
  const auto s0 = initial_pair();
  const auto same = evolve_pair(s0, 0.0, 0.0, k);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(std::abs(same.amp[i][j] - s0.amp[i][j]) < 1e-15);

  const auto eq = evolve_pair(s0, 2.5, 2.5, k);
  CHECK(std::abs(eq.c_SL() / eq.c_LS() - s0.c_SL() / s0.c_LS()) < 1e-14);

  const auto one = evolve_pair(s0, 1.0, 0.0, k);
  const double ratio = std::abs(one.c_SL() / one.c_LS());
  CHECK(ratio == Approx(std::exp(k.delta_gamma() * 0.5)).epsilon(1e-14));

  CHECK_THROWS_AS(evolve_pair(s0, -0.1, 0.0, k), InvalidArgument);
}

TEST_CASE("pair: normalized state") {
  const auto z = normalized_pair(0.0, k);
  const auto s0 = initial_pair();
  const complex phase = z.c_LS() / s0.c_LS();
  CHECK(std::abs(std::abs(phase) - 1.0) < 1e-15);
  CHECK(std::abs(z.c_SL() - phase * s0.c_SL()) < 1e-15);

  for (int d = -5; d <= 5; ++d) CHECK(normalized_pair(d, k).norm_squared() == Approx(1.0).epsilon(1e-14));

  // strangeness-basis expansion at delta_tau = 2, written out by hand
  const double dt = 2.0;
  const complex r = std::polar(std::exp(k.delta_gamma() * dt / 2), k.delta_m * dt);
  const double n = 1.0 / std::sqrt(1.0 + std::exp(k.delta_gamma() * dt));
  const auto s = normalized_pair(dt, k);
  const complex like = n * 0.5 * (1.0 - r);
  const complex unlike = n * 0.5 * (1.0 + r);
  CHECK(std::abs(pair_inner_product({Outcome::K0, Outcome::K0}, s) - like) < 1e-14);
  CHECK(std::abs(pair_inner_product({Outcome::K0bar, Outcome::K0bar}, s) + like) < 1e-14);
  CHECK(std::abs(pair_inner_product({Outcome::K0, Outcome::K0bar}, s) - unlike) < 1e-14);
  CHECK(std::abs(pair_inner_product({Outcome::K0bar, Outcome::K0}, s) + unlike) < 1e-14);
}

TEST_CASE("pair: joint probabilities") {
  const auto s = normalized_pair(0.0, k);
  CHECK(joint_projective_prob(s, {Outcome::K0, Outcome::K0}) < 1e-12);
  CHECK(joint_projective_prob(s, {Outcome::K0bar, Outcome::K0bar}) < 1e-12);
  CHECK(joint_projective_prob(s, {Outcome::K0, Outcome::K0bar}) == Approx(0.5).epsilon(1e-14));

  const auto s2 = normalized_pair(2.0, k);
  for (Outcome a : {Outcome::K0, Outcome::K0bar})
    for (Outcome b : {Outcome::K0, Outcome::K0bar})
      CHECK(joint_projective_prob(s2, {a, b}) == Approx(closed_form_joint({a, b}, 2.0, k)).epsilon(1e-13));

  // every 4-outcome family sums to one
  for (double dt : {-3.0, 0.0, 1.5})
    for (int lo = 0; lo < 4; lo += 2)
      for (int ro = 0; ro < 4; ro += 2) {
        double sum = 0.0;
        for (int a = lo; a < lo + 2; ++a)
          for (int b = ro; b < ro + 2; ++b) sum += joint_projective_prob(normalized_pair(dt, k), {kAll[a], kAll[b]});
        CHECK(sum == Approx(1.0).epsilon(1e-14));
      }
}

TEST_CASE("pair: closed forms") {
  CHECK(closed_form_joint(JointKind::StrangenessLike, 0.0, k) == 0.0);
  CHECK(closed_form_joint(JointKind::StrangenessUnlike, 0.0, k) == Approx(0.5));
  CHECK(closed_form_joint(JointKind::StrangenessShort, 0.0, k) == Approx(0.25));
  CHECK(closed_form_joint(JointKind::StrangenessLong, 0.0, k) == Approx(0.25));
  CHECK(std::abs(closed_form_joint(JointKind::StrangenessShort, 15.0, k) - 0.5) < 1e-6);
  CHECK(std::abs(closed_form_joint(JointKind::StrangenessLong, 15.0, k)) < 1e-6);

  CHECK(closed_form_joint(JointKind::StrangenessLike, -1.0, k) == Approx(0.052629269440507051).epsilon(1e-13));
  CHECK(closed_form_joint(JointKind::StrangenessLike, 2.0, k) == Approx(0.15529269347231656).epsilon(1e-13));
  CHECK(closed_form_joint(JointKind::StrangenessUnlike, 2.0, k) == Approx(0.34470730652768344).epsilon(1e-13));
  CHECK(closed_form_joint(JointKind::StrangenessShort, 3.0, k) == Approx(0.47616975060316506).epsilon(1e-13));
  CHECK(closed_form_joint(JointKind::StrangenessLong, -2.0, k) == Approx(0.44021696426161617).epsilon(1e-13));
  CHECK(pair_survival(1.0, 2.0, k) == Approx(0.25085631895347673).epsilon(1e-13));
  CHECK(pair_visibility(0.0, k) == 1.0);
}

TEST_CASE("pair: every projector matches its closed form") {
  for (double dt = -8.0; dt <= 8.0; dt += 0.5) {
    const auto s = normalized_pair(dt, k);
    for (Outcome a : kAll)
      for (Outcome b : kAll)
        CHECK(std::abs(joint_projective_prob(s, {a, b}) - closed_form_joint({a, b}, dt, k)) < 1e-13);
  }
}

TEST_CASE("pair: delayed choice orderings") {
  auto n = delayed_choice_norms(2.0, 2.0, {Outcome::K0, Outcome::K0}, k);
  CHECK(n.direct < 1e-14);
  CHECK(n.normal_order < 1e-14);
  CHECK(n.delayed_order < 1e-14);

  n = delayed_choice_norms(1.0, 2.0, {Outcome::K0, Outcome::K0}, k);
  const double expected = closed_form_joint(JointKind::StrangenessLike, -1.0, k);
  CHECK(n.direct == Approx(expected).epsilon(1e-13));
  CHECK(n.normal_order == Approx(expected).epsilon(1e-13));
  CHECK(n.delayed_order == Approx(expected).epsilon(1e-13));

  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> t(0.0, 15.0);
  for (int i = 0; i < 200; ++i) {
    const double tl = t(gen), tr = t(gen);
    const JointProjector p{kAll[gen() % 4], kAll[gen() % 4]};
    const auto m = delayed_choice_norms(tl, tr, p, k);
    CHECK(std::abs(m.direct - m.normal_order) < 1e-12);
    CHECK(std::abs(m.direct - m.delayed_order) < 1e-12);
  }
}

TEST_CASE("pair: projector application") {
  const auto s = apply_projector(initial_pair(), Side::Left, Outcome::K0);
  CHECK(s.norm_squared() == Approx(0.5));
  CHECK(joint_projective_prob(normalize_pair(s), {Outcome::K0, Outcome::K0bar}) == Approx(1.0));
  CHECK_THROWS_AS(normalize_pair(apply_projector(s, Side::Right, Outcome::K0)), SingularState);
}
