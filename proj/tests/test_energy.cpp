// Energy functionals, the cutoff constructions behind them, the coercivity
// constants, and the report plumbing.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <optional>
#include <vector>

#include "nlsfarf/cutoffs.hpp"
#include "nlsfarf/energy.hpp"
#include "nlsfarf/initial_data.hpp"
#include "nlsfarf/quadrature.hpp"
#include "nlsfarf/rng.hpp"

using namespace nlsfarf;

namespace {

Field random_field(const Grid& g, std::uint64_t seed, double budget) {
  return init_random_bounded(g, cplx{1.0, 0.0}, budget, seed);
}

double h1_norm_sq(const std::vector<cplx>& values, const Grid& g,
                  SpectralWorkspace& ws) {
  std::vector<cplx> spec;
  ws.forward(values, spec);
  const std::vector<double>& k2 = ws.k2();
  double s = 0.0;
  for (std::size_t i = 0; i < spec.size(); ++i)
    s += (1.0 + k2[i]) * std::norm(spec[i]);
  return s * g.volume();
}

}  // namespace

TEST_CASE("modulus cutoff: plateau, bridge, and slope bounds") {
  CHECK(chi_radial(0.0) == 1.0);
  CHECK(chi_radial(2.0) == 1.0);
  CHECK(chi_radial(3.0) == 0.0);
  CHECK(chi_radial(5.0) == 0.0);
  double prev = 1.0;
  for (double r = 2.0; r <= 3.0; r += 1e-3) {
    const double c = chi_radial(r);
    CHECK(c >= 0.0);
    CHECK(c <= prev + 1e-12);  // monotone on the bridge
    prev = c;
  }
  CHECK(chi(cplx{1.0, 1.0}) == 1.0);
}

TEST_CASE("amplitude flattener: identity region, plateau, endpoint derivatives") {
  for (double r = 0.0; r <= 2.0; r += 0.1)
    CHECK(phi_amplitude(r) == Catch::Approx(r).margin(1e-15));
  for (double r = 4.0; r <= 8.0; r += 0.5) CHECK(phi_amplitude(r) == 3.0);
  CHECK(phi_amplitude(2.0) == 2.0);
  CHECK(phi_amplitude(4.0) == 3.0);

  CHECK(phi_amplitude_deriv(2.0) == Catch::Approx(1.0));
  CHECK(phi_amplitude_deriv(4.0) == Catch::Approx(0.0).margin(1e-15));
  const double h = 1e-6;
  CHECK((phi_amplitude(2.0 + h) - phi_amplitude(2.0 - h)) / (2 * h) ==
        Catch::Approx(1.0).margin(1e-6));
  for (double r = 2.0; r <= 4.0; r += 1e-3) {
    const double d = phi_amplitude_deriv(r);
    CHECK(d >= -1e-12);
    CHECK(d <= 1.0 + 1e-12);
    const double fd = (phi_amplitude(r + h) - phi_amplitude(r - h)) / (2 * h);
    CHECK(d == Catch::Approx(fd).margin(1e-6));
  }
}

TEST_CASE("constant fields have an all-zero report") {
  const Grid g = make_grid(2, {5.0, 5.0}, {16, 16});
  SpectralWorkspace ws(g);
  const Field f = make_constant_field(g, cplx{0.8, -0.6});
  const EnergyReport r = full_report(f, make_gp(), 7.0, ws);
  CHECK(r.E == 0.0);
  CHECK(r.grad_part == 0.0);
  CHECK(r.density_part == 0.0);
  CHECK(r.E_GL == 0.0);
  CHECK(r.E_mGL == 0.0);
  CHECK(r.H == 0.0);
  CHECK(r.M == 0.0);
  CHECK(r.Z == 0.0);

  // No C0 means no M value.
  const EnergyReport r2 = full_report(f, make_gp(), std::nullopt, ws);
  CHECK(std::isnan(r2.M));
}

TEST_CASE("soliton profile energies match the analytic integrals") {
  const Field sol = init_black_soliton_1d(make_grid(1, {60.0}, {1024}));
  SpectralWorkspace ws(sol.grid);

  // Per soliton copy: integral of sech^4 = 4/3 for both E_GL halves, and
  // integral of (1 - |tanh|)^2 = 4 ln 2 - 2 for the E density. The doubled
  // box carries two copies.
  const double density_copy = integrate_adaptive(
      [](double x) {
        const double m = 1.0 - std::abs(std::tanh(x));
        return m * m;
      },
      -30.0, 30.0, 1e-13);
  CHECK(density_copy == Catch::Approx(4.0 * std::log(2.0) - 2.0).epsilon(1e-10));

  CHECK(energy_GL(sol, ws) ==
        Catch::Approx(2.0 * 4.0 / 3.0).epsilon(1e-6));
  // rho - 1 = -sech^2 is smooth, so energy_GL is lattice-exact above. The
  // E density (1 - |psi|)^2 instead has a derivative corner of jump 4 at
  // each zero of psi, and both zeros sit exactly on lattice nodes; the
  // periodic lattice sum overshoots the integral by h^2 * jump / 12 per
  // corner, (2/3) h^2 in total, with all smooth parts spectrally exact.
  const double h = sol.grid.spacing(0);
  const double excess = energy_E(sol, ws) - 2.0 * (4.0 / 3.0 + density_copy);
  CHECK(excess == Catch::Approx(2.0 / 3.0 * h * h).epsilon(1e-2));

  // Chebyshev level set at delta = 1/2: |tanh| < 1/2 has length 2 atanh(1/2)
  // per copy; the lattice measure resolves it to within one cell per kink.
  const double measure = eta_support_measure(sol, 0.5);
  const double expect = 2.0 * 2.0 * std::atanh(0.5);
  CHECK(std::abs(measure - expect) <= 2.0 * sol.grid.spacing(0) + 1e-12);
}

TEST_CASE("single exponential mode: energy expansion in the perturbation") {
  const Grid g = make_grid(1, {16.0}, {128});
  SpectralWorkspace ws(g);
  const double k = 2.0 * 2.0 * std::numbers::pi / 16.0;
  const double eps = 1e-3;
  Field f = make_constant_field(g, cplx{1.0, 0.0});
  for (std::size_t i = 0; i < g.size(); ++i)
    f.values[i] += eps * std::exp(cplx{0.0, k * g.coordinate(0, i)});
  const double E = energy_E(f, ws);
  const double leading = eps * eps * g.volume() * (k * k + 0.5);
  // |psi| - 1 = eps cos(kx) + O(eps^2), so the density term is half the
  // mode's L2 mass at leading order and the error is cubic in eps.
  CHECK(std::abs(E - leading) <= 10.0 * eps * eps * eps * g.volume());
}

TEST_CASE("modified density functional: identity region and plateau") {
  const Grid g = make_grid(1, {8.0}, {32});
  SpectralWorkspace ws(g);

  Field mild = random_field(g, 3, 0.4);
  bool below2 = true;
  for (const cplx& z : mild.values) below2 = below2 && std::abs(z) <= 2.0;
  REQUIRE(below2);
  // Below amplitude 2 the flattener is the identity, so the density term is
  // half the squared-density defect while the gradient enters in full.
  double density_gl = 0.0;
  for (const cplx& z : mild.values) {
    const double m = std::norm(z) - 1.0;
    density_gl += m * m;
  }
  density_gl *= g.cell_volume();
  CHECK(energy_mGL(mild, ws) ==
        Catch::Approx(grad_norm_sq_integral(mild, ws) + 0.5 * density_gl)
            .epsilon(1e-12));

  Field plateau = make_constant_field(g, cplx{1.0, 0.0});
  for (cplx& z : plateau.values) z *= 5.0;
  plateau.farfield = {1.0, 0.0};  // modulus 5 everywhere, gradient zero
  CHECK(energy_mGL(plateau, ws) ==
        Catch::Approx(32.0 * g.volume()).epsilon(1e-12));
}

TEST_CASE("quarter of the modified functional is dominated by the energy") {
  const Grid g = make_grid(2, {8.0, 8.0}, {32, 32});
  SpectralWorkspace ws(g);
  const double cap = 2.0 * std::sqrt(2.0) - 1.0;
  int tested = 0;
  for (std::uint64_t seed = 1; seed <= 40 && tested < 20; ++seed) {
    const Field f = random_field(g, seed, 0.3 + 0.05 * (seed % 7));
    if (sup_norm(f.values) > cap) continue;
    ++tested;
    const double E = energy_E(f, ws);
    CHECK(0.25 * energy_mGL(f, ws) <= E + 1e-12 * std::max(1.0, E));
  }
  REQUIRE(tested >= 10);
}

TEST_CASE("hamiltonian: gp matches the Ginzburg-Landau value exactly") {
  const Grid g = make_grid(2, {7.0, 9.0}, {32, 16});
  SpectralWorkspace ws(g);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const Field f = random_field(g, seed, 1.0);
    CHECK(hamiltonian(f, make_gp(), ws) == energy_GL(f, ws));
  }
  CHECK(hamiltonian(make_constant_field(g, {0.0, 1.0}), make_saturated(1.0),
                    ws) == 0.0);
}

TEST_CASE("negative hamiltonian is reachable in a negative potential well") {
  // competing(1,2,1.5,0.5) has F < 0 for densities below the golden-ratio
  // point; a broad shallow-amplitude region outweighs its gradient cost.
  const Grid g = make_grid(1, {200.0}, {1024});
  SpectralWorkspace ws(g);
  Field f = make_constant_field(g, cplx{1.0, 0.0});
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.coordinate(0, i);
    const double bump =
        0.5 * (1.0 + std::cos(2.0 * std::numbers::pi * (x - 100.0) / 200.0));
    f.values[i] = cplx{1.0 - 0.95 * bump * bump, 0.0};
  }
  const double H = hamiltonian(f, make_competing(1.0, 2.0, 1.5, 0.5), ws);
  CHECK(H < 0.0);
}

TEST_CASE("rotated-gauge functional reduces to H for imaginary perturbations") {
  const Grid g = make_grid(1, {10.0}, {64});
  SpectralWorkspace ws(g);
  Field f = make_constant_field(g, cplx{1.0, 0.0});
  Rng rng(11);
  for (cplx& z : f.values) z += cplx{0.0, 0.1 * rng.gaussian()};
  const NonlinearitySpec spec = make_gp();
  CHECK(functional_M(f, 34.97, spec, ws) ==
        Catch::Approx(hamiltonian(f, spec, ws)).epsilon(1e-14));
  CHECK(functional_M(make_constant_field(g, {1.0, 0.0}), 5.0, spec, ws) ==
        0.0);
}

TEST_CASE("constructive coercivity constants") {
  SECTION("gp admits finite constants and they certify the ensemble") {
    const CoercivityConstants k =
        coercivity_constants(analyze_potential(make_gp(), 10.0));
    CHECK(k.C0 > 0.0);
    CHECK(std::isfinite(k.C0));
    CHECK(k.C_energy >= 2.0);

    const Grid g = make_grid(2, {8.0, 8.0}, {32, 32});
    SpectralWorkspace ws(g);
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
      const Field f = random_field(g, seed, 0.2 * static_cast<double>(seed));
      const double E = energy_E(f, ws);
      const double M = functional_M(f, k.C0, make_gp(), ws);
      INFO("seed " << seed);
      CHECK(E <= k.C_energy * M * (1.0 + 1e-12));
    }
  }

  SECTION("a deeper negative well forces a larger constant") {
    const PotentialStructure mild =
        analyze_potential(make_competing(1.0, 2.0, 1.5, 0.5), 10.0);
    const PotentialStructure deep =
        analyze_potential(make_competing(1.0, 2.5, 1.5, 0.5), 10.0);
    REQUIRE(mild.rho2.has_value());
    REQUIRE(deep.rho2.has_value());
    CHECK(*deep.rho2 > *mild.rho2);  // negative region reaches closer to 1
    CHECK(choose_C0(deep) > choose_C0(mild));
  }

  SECTION("focusing specs are rejected") {
    CHECK_THROWS_AS(coercivity_constants(
                        analyze_potential(make_power(-1.0, 1.0), 10.0)),
                    std::invalid_argument);
  }
}

TEST_CASE("bounded/square-integrable splitting of a field") {
  const Grid g = make_grid(1, {20.0}, {128});

  SECTION("fields below the cutoff threshold pass through untouched") {
    const Field f = random_field(g, 5, 0.5);
    REQUIRE(sup_norm(f.values) <= 2.0);
    const ChiDecomposition dec = decompose_chi(f);
    CHECK(dec.support_measure_q == 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
      CHECK(dec.psi_q[i] == cplx{0.0, 0.0});
      CHECK(dec.psi_inf.values[i] == f.values[i]);
    }
  }

  SECTION("parts sum to the field exactly and the bounded part stays below 3") {
    Field f = random_field(g, 6, 0.5);
    // Plant amplitude spikes that push past the cutoff band.
    f.values[10] = cplx{3.5, 0.2};
    f.values[50] = cplx{0.0, 2.7};
    f.values[90] = cplx{-4.1, 1.0};
    const ChiDecomposition dec = decompose_chi(f);
    for (std::size_t i = 0; i < g.size(); ++i) {
      CHECK(dec.psi_inf.values[i] + dec.psi_q[i] == f.values[i]);
      CHECK(std::abs(dec.psi_inf.values[i]) <= 3.0 + 1e-12);
      if (std::abs(f.values[i]) <= 2.0) CHECK(dec.psi_q[i] == cplx{0.0, 0.0});
    }
    CHECK(dec.support_measure_q > 0.0);
  }

  SECTION("square-integrable part is H1-controlled by the energy") {
    SpectralWorkspace ws(g);
    double worst_ratio = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      Field f = random_field(g, seed, 1.0);
      Rng spikes(seed * 97);
      for (int s = 0; s < 6; ++s) {
        const std::size_t at =
            static_cast<std::size_t>(spikes.uniform() * 127.0);
        f.values[at] *= 2.0 + 1.5 * spikes.uniform();
      }
      const ChiDecomposition dec = decompose_chi(f);
      const double h1 = std::sqrt(h1_norm_sq(dec.psi_q, g, ws));
      const double E = energy_E(f, ws);
      if (E > 0.0) worst_ratio = std::max(worst_ratio, h1 / std::sqrt(E));
    }
    INFO("worst ||psi_q||_H1 / sqrt(E) = " << worst_ratio);
    CHECK(std::isfinite(worst_ratio));
    CHECK(worst_ratio > 0.0);  // the spikes actually exercised the tail
  }
}

TEST_CASE("level-set measure obeys the Chebyshev bound") {
  const Grid g = make_grid(2, {6.0, 6.0}, {24, 24});
  SpectralWorkspace ws(g);
  CHECK(eta_support_measure(make_constant_field(g, {1.0, 0.0}), 0.3) == 0.0);
  CHECK_THROWS_AS(eta_support_measure(make_constant_field(g, {1.0, 0.0}), 0.0),
                  std::invalid_argument);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Field f = random_field(g, seed, 2.0);
    const EnergyReport r = full_report(f, make_gp(), std::nullopt, ws);
    for (double delta : {0.1, 0.25, 0.5}) {
      CHECK(eta_support_measure(f, delta) <=
            r.density_part / (delta * delta) + 1e-12);
    }
  }
}

TEST_CASE("report invariants on random data") {
  const Grid g = make_grid(2, {8.0, 8.0}, {32, 32});
  SpectralWorkspace ws(g);
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const Field f = random_field(g, seed, 1.5);
    const EnergyReport r = full_report(f, make_gp(), 34.97, ws);
    CHECK(r.E == Catch::Approx(r.grad_part + r.density_part).epsilon(1e-14));
    CHECK(r.grad_part >= 0.0);
    CHECK(r.density_part >= 0.0);
    CHECK(r.Z * r.Z <= 2.0 * r.E * (1.0 + 1e-12));
    CHECK(r.Z == Catch::Approx(std::sqrt(r.grad_part) +
                               std::sqrt(r.density_part)).epsilon(1e-12));

    // Pointwise |rho - 1| <= (|psi|+1) ||psi|-1| turns into a per-field
    // domination of E_GL by E with the field's own amplitude bound.
    const double sup = sup_norm(f.values);
    const double bound = 0.5 * r.grad_part +
                         0.5 * (sup + 1.0) * (sup + 1.0) * r.density_part;
    CHECK(r.E_GL <= bound * (1.0 + 1e-12));
  }
}

TEST_CASE("energy of a perturbed field is controlled by parts") {
  // E(psi + u) <= 2 E(psi) + 2 ||u||_H1^2, an exact per-site inequality.
  const Grid g = make_grid(1, {12.0}, {64});
  SpectralWorkspace ws(g);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Field psi = random_field(g, seed, 1.0);
    const Field carrier = random_field(g, seed + 100, 0.8);
    std::vector<cplx> u(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
      u[i] = carrier.values[i] - carrier.farfield;
    Field sum = psi;
    for (std::size_t i = 0; i < g.size(); ++i) sum.values[i] += u[i];
    const double lhs = energy_E(sum, ws);
    const double rhs = 2.0 * energy_E(psi, ws) + 2.0 * h1_norm_sq(u, g, ws);
    CHECK(lhs <= rhs * (1.0 + 1e-12));
  }
}

TEST_CASE("report rows serialize with full precision") {
  EnergyReport r;
  r.t = 0.1;
  r.E = 1.0 / 3.0;
  const std::string row = energy_csv_row(r, "completed");
  CHECK(row.find("0.33333333333333331") != std::string::npos);
  CHECK(row.find(",completed") == row.size() - 10);
  CHECK(std::string(energy_csv_header()) ==
        "t,E,grad_part,density_part,E_GL,E_mGL,H,M,Z,status");
}
