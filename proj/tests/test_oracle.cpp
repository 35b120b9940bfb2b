#include <cmath>
#include <numbers>

#include "doctest.h"
#include "mfa/oracle.hpp"
#include "support.hpp"

using namespace mfa;

namespace {

double direct_free_energy(const IsingModel& model, double t) {
  const std::size_t n = model.size();
  double z = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    z += std::exp(-testing::brute_energy(model, testing::spins_of(mask, n)) / t);
  }
  return -t * std::log(z);
}

}  // namespace

TEST_SUITE("oracle") {
  TEST_CASE("single free spin") {
    const IsingModel free_spin(SparseSymmetricMatrix(1), {0.0});
    for (double t : {0.1, 1.0, 4.0}) {
      CHECK(exact_free_energy(free_spin, t) == doctest::Approx(-t * std::numbers::ln2));
    }
    const IsingModel biased(SparseSymmetricMatrix(1), {5.0});
    const auto r = exact_ground_state(biased);
    CHECK(r.best_config == SpinConfig({1}));
    CHECK(r.best_value == -5.0);
    CHECK(r.num_optima == 1);
  }

  TEST_CASE("uncoupled spins have a closed form") {
    const IsingModel model(SparseSymmetricMatrix(4), {0.3, -1.2, 0.0, 2.0}, 0.7);
    const double t = 0.9;
    double expected = 0.7;
    for (double h : model.field) expected -= t * std::log(2.0 * std::cosh(h / t));
    CHECK(exact_free_energy(model, t) == doctest::Approx(expected).epsilon(1e-12));
  }

  TEST_CASE("free energy matches direct summation") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto model = testing::random_ising(9, 0.5, 40 + seed);
      for (double t : {0.2, 1.0, 3.0}) {
        CHECK(exact_free_energy(model, t) == doctest::Approx(direct_free_energy(model, t)).epsilon(1e-10));
      }
    }
  }

  TEST_CASE("low temperature approaches the ground energy and F decreases with T") {
    const auto model = testing::random_ising(10, 0.5, 77);
    const double e0 = testing::brute_ground_energy(model);
    const double t = 1e-3;
    CHECK(std::abs(exact_free_energy(model, t) - e0) <= t * 10.0 * std::numbers::ln2 + 1e-12);
    double prev = exact_free_energy(model, 0.05);
    for (double temp = 0.1; temp < 5.0; temp += 0.25) {
      const double f = exact_free_energy(model, temp);
      CHECK(f <= prev + 1e-12);
      prev = f;
    }
  }

  TEST_CASE("degenerate optima are counted") {
    const auto pair = exact_ground_state(testing::pair_model(1.0, 0.0, 0.0));
    CHECK(pair.num_optima == 2);
    CHECK(pair.best_value == -1.0);
    CHECK(pair.best_config == SpinConfig({-1, -1}));

    const auto tri = exact_ground_state(testing::triangle(-1.0));
    CHECK(tri.num_optima == 6);
    CHECK(tri.best_value == doctest::Approx(-1.0));
  }

  TEST_CASE("ground state matches brute force") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      auto model = testing::random_ising(11, 0.4, 90 + seed);
      model.offset = -0.5;
      const auto r = exact_ground_state(model);
      CHECK(r.best_value == doctest::Approx(testing::brute_ground_energy(model)).epsilon(1e-12));
      CHECK(ising_energy(model, r.best_config) == doctest::Approx(r.best_value).epsilon(1e-12));
    }
  }

  TEST_CASE("serial and parallel enumeration agree exactly") {
    const auto model = testing::random_ising(16, 0.3, 5);
    const auto a = exact_ground_state(model, Exec::serial);
    const auto b = exact_ground_state(model, Exec::parallel);
    CHECK(a.best_value == b.best_value);
    CHECK(a.best_config == b.best_config);
    CHECK(a.num_optima == b.num_optima);
    CHECK(exact_free_energy(model, 0.7, Exec::serial) == exact_free_energy(model, 0.7, Exec::parallel));

    const auto g = testing::random_graph(16, 0.3, 6);
    const auto c = exact_max_cut(g, Exec::serial);
    const auto d = exact_max_cut(g, Exec::parallel);
    CHECK(c.best_value == d.best_value);
    CHECK(c.best_config == d.best_config);
    CHECK(c.num_optima == d.num_optima);
  }

  TEST_CASE("max cut agrees with the Ising ground state and brute force") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
      const auto g = testing::random_graph(10, 0.5, seed, seed % 2 == 1);
      const auto cut = exact_max_cut(g);
      const auto ground = exact_ground_state(maxcut_to_ising(g));
      CHECK(cut.best_value == doctest::Approx(cut_from_energy(ground.best_value)).epsilon(1e-12));
      CHECK(cut.num_optima == ground.num_optima);
      double best = 0.0;
      for (std::uint64_t mask = 0; mask < 1024; ++mask) {
        best = std::max(best, testing::brute_cut(g, testing::spins_of(mask, 10)));
      }
      CHECK(cut.best_value == doctest::Approx(best).epsilon(1e-12));
    }
    const WeightedGraph tri(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
    const auto r = exact_max_cut(tri);
    CHECK(r.best_value == 2.0);
    CHECK(r.num_optima == 6);
  }

  TEST_CASE("size guards") {
    const IsingModel big(SparseSymmetricMatrix(kMaxOracleSpins + 1),
                         std::vector<double>(kMaxOracleSpins + 1, 0.0));
    CHECK_THROWS_AS(exact_ground_state(big), OracleSizeError);
    CHECK_THROWS_AS(exact_max_cut(WeightedGraph(kMaxOracleSpins + 1, {})), OracleSizeError);
    const IsingModel medium(SparseSymmetricMatrix(kMaxFreeEnergySpins + 1),
                            std::vector<double>(kMaxFreeEnergySpins + 1, 0.0));
    CHECK_THROWS_AS(exact_free_energy(medium, 1.0), OracleSizeError);
    CHECK_THROWS_AS(exact_free_energy(testing::triangle(1.0), 0.0), ModelError);
  }
}
