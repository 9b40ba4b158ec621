#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "hartree5d/potentials.hpp"
#include "test_support.hpp"

using namespace hartree5d;
using namespace hartree5d::testing;
using Catch::Approx;

namespace {

// h = 2/3 puts node 1 exactly at r = 1.
GridPtr unit_node_grid() { return make_grid(16, 32.0 / 3.0); }

}  // namespace

TEST_CASE("zero potential is identically zero", "[potentials]") {
  const PotentialField p = build_potential(PotentialSpec::zero(), make_grid(32, 5.0));
  CHECK(p.is_zero());
}

TEST_CASE("gaussian and lorentzian closed forms at r = 1", "[potentials]") {
  const GridPtr g = unit_node_grid();
  REQUIRE(g->r(1) == Approx(1.0).epsilon(1e-15));

  const PotentialField gauss = build_potential(PotentialSpec::gaussian(1.0, 1.0), g);
  CHECK(gauss.v[1] == Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(gauss.rdv[1] == Approx(-2.0 * std::exp(-1.0)).epsilon(1e-14));

  const PotentialField lor = build_potential(PotentialSpec::lorentzian(1.0, 2.0), g);
  CHECK(lor.v[1] == Approx(0.25).epsilon(1e-14));
  CHECK(lor.rdv[1] == Approx(-0.5).epsilon(1e-14));
}

TEST_CASE("build_potential rejects invalid specs", "[potentials]") {
  const GridPtr g = make_grid(32, 5.0);
  CHECK_THROWS_AS(build_potential(PotentialSpec::gaussian(-1.0, 1.0), g), std::invalid_argument);
  CHECK_THROWS_AS(build_potential(PotentialSpec::lorentzian(-0.1, 2.0), g), std::invalid_argument);
  CHECK_THROWS_AS(build_potential(PotentialSpec::from_table({{0.0, 1.0}, {1.0, 0.5}, {0.5, 0.0}}), g),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_potential(PotentialSpec::from_table({{0.0, 1.0}}), g), std::invalid_argument);
}

TEST_CASE("table potential interpolates linearly and differentiates the interpolant", "[potentials]") {
  const GridPtr g = make_grid(16, 8.0);  // nodes 0.25, 0.75, 1.25, ...
  const PotentialField p = build_potential(PotentialSpec::from_table({{0.0, 2.0}, {1.0, 1.0}, {2.0, 0.0}}), g);
  CHECK(p.v[1] == Approx(1.25));
  CHECK(p.rdv[1] == Approx(-0.75));
  CHECK(p.v[2] == Approx(0.75));
  CHECK(p.rdv[2] == Approx(-1.25));
  CHECK(p.v[5] == 0.0);
  CHECK(p.rdv[5] == 0.0);
}

TEST_CASE("check_hypotheses on the zero potential", "[potentials]") {
  const HypothesisReport rep = check_hypotheses(zero_potential(make_grid(64, 10.0)));
  CHECK(rep.v_nonneg);
  CHECK(rep.rdv_nonpos);
  CHECK(rep.blowup_cond);
  CHECK(rep.v_l52_norm == 0.0);
  CHECK(rep.rdv_l52_norm == 0.0);
  CHECK_FALSE(rep.blowup_cond_violation);
}

TEST_CASE("check_hypotheses flags the blow-up condition for decaying potentials", "[potentials]") {
  const GridPtr g = make_grid(1024, 20.0);
  const HypothesisReport gauss = check_hypotheses(build_potential(PotentialSpec::gaussian(1.0, 1.0), g));
  CHECK(gauss.v_nonneg);
  CHECK(gauss.rdv_nonpos);
  CHECK_FALSE(gauss.blowup_cond);
  REQUIRE(gauss.blowup_cond_violation);
  // 2V + x.grad V = 2 exp(-r^2)(1 - r^2) is most negative at r = sqrt(2)
  CHECK(gauss.blowup_cond_violation->r > 1.0);
  CHECK(gauss.blowup_cond_violation->r == Approx(std::sqrt(2.0)).margin(2.0 * g->h()));
  CHECK(gauss.blowup_cond_violation->magnitude == Approx(2.0 * std::exp(-2.0)).epsilon(1e-3));

  const HypothesisReport lor = check_hypotheses(build_potential(PotentialSpec::lorentzian(1.0, 2.0), g));
  CHECK(lor.rdv_nonpos);
  CHECK_FALSE(lor.blowup_cond);
  CHECK(std::isfinite(lor.v_l52_norm));
  CHECK(lor.v_l52_norm > 0.0);
}

TEST_CASE("report booleans agree with recorded violations", "[potentials]") {
  const GridPtr g = make_grid(64, 4.0);
  const PotentialField table = build_potential(PotentialSpec::from_table({{0.0, -1.0}, {2.0, 1.0}}), g);
  const HypothesisReport rep = check_hypotheses(table);
  CHECK_FALSE(rep.v_nonneg);
  CHECK(rep.v_nonneg_violation.has_value());
  CHECK_FALSE(rep.rdv_nonpos);
  CHECK(rep.rdv_nonpos_violation.has_value());
  CHECK(rep.blowup_cond == !rep.blowup_cond_violation.has_value());
}

TEST_CASE("built-in families are nonnegative and radially non-increasing", "[potentials]") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> amp(0.0, 10.0);
  std::uniform_real_distribution<double> shape(0.05, 5.0);
  const GridPtr g = make_grid(256, 15.0);
  for (int trial = 0; trial < 50; ++trial) {
    for (const PotentialSpec& spec :
         {PotentialSpec::gaussian(amp(rng), shape(rng)), PotentialSpec::lorentzian(amp(rng), shape(rng))}) {
      const PotentialField p = build_potential(spec, g);
      for (std::size_t i = 0; i < g->size(); ++i) {
        CHECK(p.v[i] >= 0.0);
        CHECK(p.rdv[i] <= 0.0);
      }
    }
  }
}

TEST_CASE("analytic x.grad V matches centered differences at second order", "[potentials]") {
  auto max_err = [](std::size_t n, const PotentialSpec& spec) {
    const GridPtr g = make_grid(n, 8.0);
    const PotentialField p = build_potential(spec, g);
    double err = 0.0;
    for (std::size_t i = 1; i + 1 < g->size(); ++i) {
      const double fd = g->r(i) * (p.v[i + 1] - p.v[i - 1]) / (2.0 * g->h());
      err = std::max(err, std::abs(fd - p.rdv[i]));
    }
    return err;
  };
  for (const PotentialSpec& spec : {PotentialSpec::gaussian(1.0, 1.0), PotentialSpec::lorentzian(2.0, 1.5)}) {
    const double coarse = max_err(256, spec);
    const double fine = max_err(512, spec);
    CHECK(coarse < 1e-2);
    CHECK(coarse / fine > 3.5);
  }
}

TEST_CASE("L^{5/2} norm converges as the domain grows", "[potentials]") {
  for (const PotentialSpec& spec : {PotentialSpec::gaussian(1.0, 1.0), PotentialSpec::lorentzian(1.0, 2.0)}) {
    std::vector<double> norms;
    for (double r_max : {10.0, 20.0, 40.0}) {
      const GridPtr g = make_grid(static_cast<std::size_t>(200 * r_max), r_max);
      norms.push_back(check_hypotheses(build_potential(spec, g)).v_l52_norm);
    }
    CHECK(std::abs(norms[2] - norms[1]) <= std::abs(norms[1] - norms[0]) + 1e-12);
    CHECK(rel_err(norms[1], norms[2]) < 1e-3);
  }
}
