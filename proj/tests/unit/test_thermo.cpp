#include "doctest.h"

#include <array>
#include <cmath>

#include "openfluct/error.hpp"
#include "openfluct/thermo.hpp"

using namespace openfluct;

namespace {

const double kP0 = 1.0 / (1.0 + std::exp(-1.0));
const double kP1 = 1.0 - kP0;

ComplexMatrix m2(Complex a, Complex b, Complex c, Complex d) {
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

Scenario qubit_scenario(std::string name, KrausChannel c, double beta = 1.0) {
  const auto h = Hamiltonian::diagonal({0.0, 1.0});
  return Scenario{std::move(name), beta, h, h, std::move(c)};
}

KrausChannel full_damping() { return preset("amplitude_damping", {1.0}, 2); }

void check_residuals(const FluctuationReport& r, double tol) {
  for (const auto& [name, value] : r.residuals) {
    CAPTURE(name);
    CHECK(value < tol);
  }
}

Scenario random_scenario(int i, bool unitary_only = false) {
  std::mt19937_64 rng(500 + std::uint64_t(i));
  const Eigen::Index d = 2 + i % 4;
  const double beta = std::array{0.2, 1.0, 5.0}[std::size_t(i % 3)];
  Hamiltonian h_i(random_hermitian(d, rng));
  Hamiltonian h_f(random_hermitian(d, rng));
  auto c = unitary_only ? preset("unitary", {}, d, std::uint64_t(i))
                        : preset("random", {double(1 + i % 4)}, d, std::uint64_t(i));
  return Scenario{"random", beta, std::move(h_i), std::move(h_f), std::move(c)};
}

}  // namespace

TEST_CASE("internal_energy_change") {
  const auto h = Hamiltonian::diagonal({0.0, 1.0});
  const auto init = gibbs_state(h, 1.0);
  CHECK(std::abs(internal_energy_change(preset("identity", {}, 2), init, h)) < 1e-15);
  CHECK(internal_energy_change(full_damping(), init, h) == doctest::Approx(-kP1).epsilon(1e-14));
  CHECK(internal_energy_change(full_damping(), init, h) == doctest::Approx(-0.268941).epsilon(1e-6));
  const auto flip = validate_channel({m2(0, 1, 1, 0)});
  CHECK(internal_energy_change(flip, init, h) == doctest::Approx(kP0 - kP1).epsilon(1e-14));
  CHECK(internal_energy_change(flip, init, h) == doctest::Approx(0.462117).epsilon(1e-6));
  CHECK_THROWS_AS(internal_energy_change(flip, init, Hamiltonian::diagonal({0, 1, 2})), Error);
}

TEST_CASE("excess_energy and entropy_change") {
  CHECK(excess_energy(0.0, 0.0, 1.0) == 0.0);
  CHECK(entropy_change(0.0, 0.0, 1.0) == 0.0);
  // amplitude damping: K + X with the closed-form values
  const double kl = kP1 * std::log(2 * kP1) + kP0 * std::log(2 * kP0);
  const double x = -std::log(2 * kP0);
  CHECK(excess_energy(kl, x, 1.0) == doctest::Approx(-kP1).epsilon(1e-13));
  CHECK(excess_energy(kl, x, 1.0) == doctest::Approx(-0.268943).epsilon(1e-5));
  CHECK(entropy_change(kl, x, 1.0) == doctest::Approx(-0.268943).epsilon(1e-5));
  CHECK(entropy_change(kl, x, 2.0) == doctest::Approx(kl + 2.0 * x));
  CHECK(excess_energy(kl, x, 2.0) == doctest::Approx(kl / 2.0 + x));
}

TEST_CASE("von_neumann_change") {
  const auto h = Hamiltonian::diagonal({0.0, 1.0});
  const auto init = gibbs_state(h, 1.0);
  std::mt19937_64 rng(1);
  const auto u = validate_channel({haar_unitary(2, rng)});
  CHECK(std::abs(von_neumann_change(u, init, h)) < 1e-12);
  const double s_eq = -(kP0 * std::log(kP0) + kP1 * std::log(kP1));
  CHECK(von_neumann_change(full_damping(), init, h) == doctest::Approx(-s_eq).epsilon(1e-13));
  // sharp initial state, full depolarization raises entropy
  const auto cold = gibbs_state(h, 40.0);
  CHECK(von_neumann_change(preset("depolarizing", {1.0}, 2), cold, h) > 0.6);
}

TEST_CASE("build_report: identity scenario") {
  const auto r = build_report(qubit_scenario("identity", preset("identity", {}, 2)));
  check_residuals(r, 1e-10);
  CHECK(r.gamma == doctest::Approx(1.0).epsilon(1e-15));
  for (double v : {r.delta_u, r.delta_u_moment, r.delta_f, r.x, r.kl, r.excess_energy,
                   r.delta_s, r.delta_s_v, r.s_r_final}) {
    CHECK(std::abs(v) < 1e-10);
  }
  CHECK(r.unital);
}

TEST_CASE("build_report: full amplitude damping (cooling)") {
  const auto r = build_report(qubit_scenario("damping", full_damping()));
  check_residuals(r, 1e-8);
  CHECK(r.gamma == doctest::Approx(2 * kP0).epsilon(1e-14));
  CHECK(r.x == doctest::Approx(-std::log(2 * kP0)).epsilon(1e-14));
  CHECK(r.delta_u == doctest::Approx(-kP1).epsilon(1e-14));
  CHECK(r.delta_s == doctest::Approx(-kP1).epsilon(1e-13));
  CHECK(r.x < 0.0);
  CHECK(r.delta_s < 0.0);
  CHECK_FALSE(r.unital);
  CHECK(r.residuals.size() >= 9);
  for (const char* key : {"forward_norm", "backward_mass_vs_gamma", "jarzynski_forward",
                          "jarzynski_backward", "crooks_max", "energy_decomposition", "entropy_law", "helmholtz",
                          "moment_vs_trace", "von_neumann"}) {
    CHECK(r.residuals.count(key) == 1);
  }
}

TEST_CASE("build_report: random non-unital d = 4") {
  std::mt19937_64 rng(77);
  Hamiltonian h_i(random_hermitian(4, rng));
  Hamiltonian h_f(random_hermitian(4, rng));
  const auto r = build_report(Scenario{"rand4", 1.3, h_i, h_f, preset("random", {3}, 4, 4)});
  check_residuals(r, 1e-8);
  CHECK(std::abs(r.gamma - 1.0) > 1e-3);
  CHECK(std::abs(r.gamma - std::exp(-r.beta * r.x)) < 1e-12);
}

TEST_CASE("build_report attaches scenario context to errors") {
  const auto h2 = Hamiltonian::diagonal({0.0, 1.0});
  const auto h3 = Hamiltonian::diagonal({0.0, 1.0, 2.0});
  try {
    build_report(Scenario{"mismatched", 1.0, h2, h3, preset("identity", {}, 2)});
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
    CHECK(std::string(e.what()).find("mismatched") != std::string::npos);
  }
}

TEST_CASE("property: identities on random scenarios") {
  for (int i = 0; i < 60; ++i) {
    const auto r = build_report(random_scenario(i));
    check_residuals(r, 1e-8);
    CHECK(std::abs(r.delta_u - r.delta_u_moment) < 1e-10);
    CHECK(std::abs(r.delta_s - r.beta * (r.delta_u - r.delta_f)) < 1e-8);
  }
}

TEST_CASE("property: closed-system limit") {
  for (int i = 0; i < 20; ++i) {
    const auto r = build_report(random_scenario(i, true));
    const double dissipated = r.beta * (r.delta_u - r.delta_f);
    CHECK(std::abs(r.kl - dissipated) < 1e-8);
    CHECK(std::abs(r.kl - r.s_r_final) < 1e-8);
    CHECK(std::abs(dissipated - r.s_r_final) < 1e-8);
    CHECK(std::abs(r.delta_s_v) < 1e-10);
    CHECK(std::abs(r.x) < 1e-10);
  }
}

TEST_CASE("property: unital channels have X = 0 and non-negative entropy change") {
  for (int i = 0; i < 40; ++i) {
    std::mt19937_64 rng(900 + std::uint64_t(i));
    const Eigen::Index d = 2 + i % 4;
    Hamiltonian h_i(random_hermitian(d, rng));
    Hamiltonian h_f(random_hermitian(d, rng));
    const auto c = i % 2 ? preset("unitary_mixture", {double(1 + i % 4)}, d, std::uint64_t(i))
                         : preset("depolarizing", {0.1 * (i % 10)}, d);
    const auto r = build_report(Scenario{"unital", 0.5 + 0.1 * i, h_i, h_f, c});
    CHECK(std::abs(r.x) < 1e-10);
    CHECK(r.delta_s >= -1e-10);
    CHECK(r.excess_energy >= -1e-10);
  }
}
