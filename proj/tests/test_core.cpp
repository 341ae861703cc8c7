#include <cmath>

#include "doctest.h"
#include "kaon/constants.hpp"
#include "kaon/single_kaon.hpp"
#include "kaon/state.hpp"

using namespace kaon;
using doctest::Approx;

namespace {
const PhysicalConstants k;
}

TEST_CASE("constants: defaults validate and json round-trips") {
  CHECK_NOTHROW(k.validate());
  const PhysicalConstants back = constants_from_json(constants_to_json(k));
  CHECK(back.gamma_L == k.gamma_L);
  CHECK(back.br_sl_L == k.br_sl_L);
  CHECK(back.delta_m == k.delta_m);
  CHECK(k.delta_gamma() < 0.0);
  CHECK(k.semileptonic_widths_consistent());
}

TEST_CASE("constants: complement branching ratios are filled in") {
  const auto c = constants_from_json(R"({"br_sl_L": 0.5})");
  CHECK(c.br_3pi_L == Approx(0.5));
}

TEST_CASE("constants: invalid values rejected") {
  CHECK_THROWS_AS(constants_from_json(R"({"gamma_L": 2.0})"), InvalidArgument);
  CHECK_THROWS_AS(constants_from_json(R"({"br_sl_L": 1.5})"), InvalidArgument);
  CHECK_THROWS_AS(constants_from_json(R"({"br_sl_L": 0.6, "br_3pi_L": 0.6})"), InvalidArgument);
  CHECK_THROWS_AS(constants_from_json("[1,2"), InvalidArgument);
}

TEST_CASE("state: basis states") {
  const auto k0 = make_state(Outcome::K0);
  CHECK(k0.c_S.real() == Approx(std::sqrt(0.5)));
  CHECK(k0.c_L.real() == Approx(std::sqrt(0.5)));
  const auto ks = make_state(Outcome::KS);
  CHECK(ks.c_S == complex(1.0, 0.0));
  CHECK(ks.c_L == complex(0.0, 0.0));
  CHECK(project(k0, Outcome::K0) == Approx(1.0).epsilon(1e-15));
  CHECK(project(k0, Outcome::K0bar) == Approx(0.0));
  CHECK(project(k0, Outcome::KS) == Approx(0.5).epsilon(1e-15));
}

TEST_CASE("state: evolution") {
  const auto s = evolve(make_state(Outcome::KS), 1.0, k);
  CHECK(std::abs(s.c_S) == Approx(std::exp(-0.5)).epsilon(1e-14));
  CHECK(s.c_L == complex(0.0, 0.0));
  CHECK_FALSE(s.normalized);

  const auto k0 = make_state(Outcome::K0);
  const auto same = evolve(k0, 0.0, k);
  CHECK(std::abs(same.c_S - k0.c_S) < 1e-15);
  CHECK(std::abs(same.c_L - k0.c_L) < 1e-15);

  CHECK_THROWS_AS(evolve(k0, -1.0, k), InvalidArgument);
}

TEST_CASE("state: survival probability") {
  CHECK(survival_probability(make_state(Outcome::K0), 0.0, k) == Approx(1.0));
  CHECK(survival_probability(make_state(Outcome::KS), 1.0, k) == Approx(std::exp(-1.0)).epsilon(1e-15));
  // (e^-4.8 + e^-4.8/579)/2
  CHECK(survival_probability(make_state(Outcome::K0), 4.8, k) ==
        Approx(0.49998693009227988).epsilon(1e-14));
  CHECK(evolve(make_state(Outcome::K0), 4.8, k).norm_squared() ==
        Approx((std::exp(-4.8) + std::exp(-4.8 / 579.0)) / 2).epsilon(1e-14));
}

TEST_CASE("state: normalize_to_survivors") {
  const auto n = normalize_to_survivors({complex(0.5, 0.0), complex(0.0, 0.0), false});
  CHECK(n.c_S == complex(1.0, 0.0));
  CHECK(n.normalized);

  const auto k0 = make_state(Outcome::K0);
  const auto again = normalize_to_survivors(k0);
  CHECK(std::abs(again.c_S - k0.c_S) < 1e-12);
  CHECK(std::abs(again.c_L - k0.c_L) < 1e-12);

  CHECK_THROWS_AS(normalize_to_survivors({complex(0.0), complex(0.0), false}), SingularState);

  const auto at = normalize_to_survivors(evolve(k0, 4.8, k));
  CHECK(at.norm_squared() == Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(project(at, Outcome::K0) - strangeness_probs(4.8, k).first) < 1e-12);
}

TEST_CASE("state: enum parsing round-trips") {
  for (Outcome o : {Outcome::K0, Outcome::K0bar, Outcome::KS, Outcome::KL}) {
    CHECK(parse_outcome(to_string(o)) == o);
  }
  CHECK(parse_observable("Lifetime") == Observable::Lifetime);
  CHECK(parse_procedure("Passive") == Procedure::Passive);
  CHECK_THROWS_AS(parse_outcome("K+"), InvalidArgument);
}

TEST_CASE("single kaon: strangeness oscillation") {
  auto p = strangeness_probs(0.0, k);
  CHECK(p.first == Approx(1.0));
  CHECK(p.second == Approx(0.0));
  p = strangeness_probs(5000.0, k);
  CHECK(std::abs(p.first - 0.5) < 1e-3);
  CHECK(std::abs(p.second - 0.5) < 1e-3);
  CHECK(strangeness_probs(2.0, k).first == Approx(0.68941461305536689).epsilon(1e-13));
  CHECK(strangeness_probs(3.0, k).second == Approx(0.46822664284618479).epsilon(1e-13));
  const auto oracle = normalize_to_survivors(evolve(make_state(Outcome::K0), 2.0, k));
  CHECK(std::abs(project(oracle, Outcome::K0) - strangeness_probs(2.0, k).first) < 1e-12);
}

TEST_CASE("single kaon: visibility") {
  CHECK(visibility_single(0.0, k) == 1.0);
  PhysicalConstants flipped = k;
  CHECK(visibility_single(4.8, k) == Approx(0.18069012038569705).epsilon(1e-13));
  const auto p = strangeness_probs(4.8, k);
  CHECK((p.first - p.second) / std::cos(k.delta_m * 4.8) == Approx(visibility_single(4.8, k)));
  // cosh is even: swapping the widths flips the sign of delta_gamma
  flipped.gamma_S = k.gamma_L;
  flipped.gamma_L = k.gamma_S;
  CHECK(visibility_single(3.0, flipped) == Approx(visibility_single(3.0, k)).epsilon(1e-15));
}

TEST_CASE("single kaon: lifetime probabilities") {
  auto p = lifetime_probs(0.0, k);
  CHECK(p.first == Approx(0.5));
  CHECK(p.second == Approx(0.5));
  CHECK(std::abs(lifetime_probs(20.0, k).second - 1.0) < 1e-8);
  CHECK(lifetime_probs(1.0, k).first == Approx(0.26928112841071132).epsilon(1e-13));
  const auto oracle = normalize_to_survivors(evolve(make_state(Outcome::K0), 1.0, k));
  CHECK(std::abs(project(oracle, Outcome::KS) - lifetime_probs(1.0, k).first) < 1e-12);
}

TEST_CASE("single kaon: misidentification window") {
  const auto p = misid_probs({4.8}, k);
  CHECK(p.first == Approx(0.0082297470490200288).epsilon(1e-13));
  CHECK(p.second == Approx(0.008255886864460263).epsilon(1e-13));
  CHECK(std::abs(p.first - p.second) < 1e-4);

  const auto tiny = misid_probs({1e-12}, k);
  CHECK(tiny.first == Approx(1.0));
  CHECK(tiny.second == Approx(0.0));

  const double w = equal_misid_window(k);
  CHECK(w == Approx(4.7973737865466558).epsilon(1e-12));
  const auto eq = misid_probs({w}, k);
  CHECK(std::abs(eq.first - eq.second) < 1e-10);

  CHECK_THROWS_AS(misid_probs({0.0}, k), InvalidArgument);
}
