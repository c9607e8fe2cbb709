#include <doctest.h>

#include <thread>

#include "lcd/errors.hpp"
#include "support.hpp"

using namespace lcd;
using lcd::test::kTwoPi;

namespace {

Eigen::VectorXd vec(double v) { return Eigen::VectorXd::Constant(1, v); }

}  // namespace

TEST_CASE("grid rejects invalid shapes") {
  CHECK_THROWS_AS(Grid::create(1.0, 7), ParameterError);
  CHECK_THROWS_AS(Grid::create(1.0, 6), ParameterError);
  CHECK_THROWS_AS(Grid::create(1.0, 9), ParameterError);
  CHECK_THROWS_AS(Grid::create(0.0, 8), ParameterError);
  CHECK_THROWS_AS(Grid::create(-1.0, 8), ParameterError);
  CHECK_NOTHROW(Grid::create(1.0, 8));
}

TEST_CASE("wavenumbers are antisymmetric and the mask follows the two-thirds rule") {
  const auto g = Grid::create(3.0, 12);
  const int n = g->resolution();
  const auto& neg = g->negated_index();
  for (Eigen::Index p = 0; p < g->size(); ++p) {
    const int i1 = static_cast<int>(p / (n * n));
    const int i2 = static_cast<int>((p / n) % n);
    const int i3 = static_cast<int>(p % n);
    const int m[3] = {g->mode_of(i1), g->mode_of(i2), g->mode_of(i3)};
    const bool nyquist = m[0] == n / 2 || m[1] == n / 2 || m[2] == n / 2;
    bool kept = !nyquist;
    for (int a = 0; a < 3; ++a) {
      CHECK(g->k(a)(p) == doctest::Approx(kTwoPi / 3.0 * m[a]));
      if (std::abs(m[a]) > n / 3) kept = false;
      if (!nyquist) CHECK(g->k(a)(neg(p)) == -g->k(a)(p));
    }
    CHECK((g->dealias_mask()(p) != 0.0) == kept);
  }
  CHECK(g->max_retained_mode() == 4);
}

TEST_CASE("forward transform of single modes and constants") {
  const double L = 5.0;
  const auto g = Grid::create(L, 16);
  const auto f = test::sample(g, 1, [&](double x, double, double) { return vec(std::cos(kTwoPi * x / L)); });
  const SpectralField F = forward_transform(f);
  CHECK(std::abs(F.at(0, 1, 0, 0) - Complex(0.5, 0.0)) < 1e-15);
  CHECK(std::abs(F.at(0, -1, 0, 0) - Complex(0.5, 0.0)) < 1e-15);
  Eigen::ArrayXXcd rest = F.coeffs();
  rest(g->flat_of_mode(1, 0, 0), 0) = 0.0;
  rest(g->flat_of_mode(-1, 0, 0), 0) = 0.0;
  CHECK(test::max_abs(rest) < 1e-15);

  const auto c = test::sample(g, 1, [](double, double, double) { return vec(3.0); });
  const SpectralField C = forward_transform(c);
  CHECK(std::abs(C.at(0, 0, 0, 0) - Complex(3.0, 0.0)) < 1e-15);
  Eigen::ArrayXXcd others = C.coeffs();
  others(0, 0) = 0.0;
  CHECK(test::max_abs(others) < 1e-15);
}

TEST_CASE("inverse transform of single modes and zero") {
  const double L = 5.0;
  const auto g = Grid::create(L, 16);
  SpectralField F(g, 1);
  F.at(0, 1, 0, 0) = 0.5;
  F.at(0, -1, 0, 0) = 0.5;
  const RealField f = inverse_transform(F);
  for (Eigen::Index p = 0; p < g->size(); ++p)
    CHECK(std::abs(f.values()(p, 0) - std::cos(kTwoPi * g->coordinate(p, 0) / L)) < 1e-14);

  const RealField z = inverse_transform(SpectralField(g, 3));
  CHECK(test::max_abs(z.values()) == 0.0);
}

TEST_CASE("round trip on random band-limited data") {
  for (int n : {8, 16, 32}) {
    const auto g = Grid::create(7.0, n);
    const SpectralField F = test::random_field(g, 3, 11 + n);
    const RealField f = inverse_transform(F);
    const RealField back = inverse_transform(forward_transform(f));
    const double err = test::max_abs(back.values() - f.values()) / test::max_abs(f.values());
    CHECK(err <= 1e-13);
    const double spec_err = test::max_abs(forward_transform(f).coeffs() - F.coeffs()) / test::max_abs(F.coeffs());
    CHECK(spec_err <= 1e-13);
  }
}

TEST_CASE("inverse transform refuses non-Hermitian spectra") {
  const auto g = Grid::create(1.0, 8);
  SpectralField F(g, 1);
  F.at(0, 1, 0, 0) = Complex(1.0, 0.0);
  F.at(0, -1, 0, 0) = Complex(0.0, 1.0);
  CHECK_THROWS_AS(inverse_transform(F), SymmetryError);
  F.at(0, -1, 0, 0) = Complex(1.0, 0.0);
  CHECK_NOTHROW(inverse_transform(F));
}

TEST_CASE("structural errors on size mismatch") {
  const auto g = Grid::create(1.0, 8);
  CHECK_THROWS_AS(RealField(g, Eigen::ArrayXXd::Zero(10, 3)), StructuralError);
  CHECK_THROWS_AS(SpectralField(g, Eigen::ArrayXXcd::Zero(10, 3)), StructuralError);
  const auto h = Grid::create(1.0, 8);
  CHECK_THROWS_AS(SpectralField(g, 3) + SpectralField(h, 3), StructuralError);
  CHECK_THROWS_AS(leray_project(SpectralField(g, 1)), StructuralError);
}

TEST_CASE("spectral derivatives") {
  const double L = 3.0;
  const auto g = Grid::create(L, 16);
  const double k1 = kTwoPi / L;
  const auto f = test::sample(g, 1, [&](double x, double, double) { return vec(std::cos(k1 * x)); });
  const RealField df = inverse_transform(spectral_derivative(forward_transform(f), {1, 0, 0}));
  for (Eigen::Index p = 0; p < g->size(); ++p)
    CHECK(std::abs(df.values()(p, 0) + k1 * std::sin(k1 * g->coordinate(p, 0))) < 1e-13);

  SUBCASE("Laplacian of a single mode") {
    SpectralField F(g, 1);
    F.at(0, 2, -1, 3) = Complex(0.3, -0.2);
    F.at(0, -2, 1, -3) = Complex(0.3, 0.2);
    SpectralField lap = spectral_derivative(F, {2, 0, 0});
    lap += spectral_derivative(F, {0, 2, 0});
    lap += spectral_derivative(F, {0, 0, 2});
    const double k2 = k1 * k1 * (4 + 1 + 9);
    CHECK(test::max_abs(lap.coeffs() + k2 * F.coeffs()) < 1e-14);
  }

  SUBCASE("norm of the derivative of sin on the 2 pi box") {
    const auto h = Grid::create(kTwoPi, 16);
    const auto s = test::sample(h, 1, [](double x, double, double) { return vec(std::sin(x)); });
    const SpectralField S = forward_transform(s);
    const double expected = std::pow(kTwoPi, 3) / 2.0;
    CHECK(derivative_norm_sq(S, 1) == doctest::Approx(expected).epsilon(1e-13));
    CHECK(std::pow(l2_norm_spectral(spectral_derivative(S, {1, 0, 0})), 2) ==
          doctest::Approx(124.025).epsilon(1e-5));
  }

  SUBCASE("odd derivatives zero the Nyquist planes") {
    SpectralField F(g, 1);
    F.at(0, 8, 0, 0) = 1.0;
    CHECK(test::max_abs(spectral_derivative(F, {1, 0, 0}).coeffs()) == 0.0);
    CHECK(test::max_abs(spectral_derivative(F, {1, 1, 1}).coeffs()) == 0.0);
    CHECK(test::max_abs(spectral_derivative(F, {2, 0, 0}).coeffs()) > 0.0);
  }

  CHECK_THROWS_AS(spectral_derivative(forward_transform(f), {-1, 0, 0}), ParameterError);
}

TEST_CASE("Leray projection") {
  const auto g = Grid::create(2.0, 16);
  SUBCASE("pure gradient is removed, solenoidal mode kept") {
    SpectralField F(g, 3);
    F.at(0, 1, 0, 0) = 0.7;
    F.at(0, -1, 0, 0) = 0.7;
    CHECK(test::max_abs(leray_project(F).coeffs()) == 0.0);
    SpectralField G(g, 3);
    G.at(1, 1, 0, 0) = 0.7;
    G.at(1, -1, 0, 0) = 0.7;
    CHECK(test::max_abs(leray_project(G).coeffs() - G.coeffs()) == 0.0);
  }
  SUBCASE("random fields become divergence free, the mean mode is untouched") {
    SpectralField F = test::random_field(g, 3, 5);
    F.coeffs().row(0) << 1.0, 2.0, 3.0;
    const SpectralField P = leray_project(F);
    CHECK(divergence_defect(P) <= 1e-14);
    CHECK(P.coeffs()(0, 0) == Complex(1.0));
    CHECK(P.coeffs()(0, 2) == Complex(3.0));
  }
  SUBCASE("idempotent") {
    const SpectralField P = leray_project(test::random_field(g, 3, 6));
    const SpectralField PP = leray_project(P);
    CHECK((PP.coeffs() == P.coeffs()).all());
  }
  SUBCASE("commutes with derivatives") {
    const SpectralField F = test::random_field(g, 3, 7);
    for (const MultiIndex& a : {MultiIndex{1, 0, 0}, MultiIndex{0, 2, 1}, MultiIndex{1, 1, 1}}) {
      const SpectralField lhs = leray_project(spectral_derivative(F, a));
      const SpectralField rhs = spectral_derivative(leray_project(F), a);
      CHECK(test::max_abs(lhs.coeffs() - rhs.coeffs()) <= 1e-13 * test::max_abs(lhs.coeffs()));
    }
  }
}

TEST_CASE("L2 norms") {
  const auto g = Grid::create(kTwoPi, 16);
  const auto s = test::sample(g, 1, [](double x, double, double) { return vec(std::sin(x)); });
  CHECK(l2_norm_spectral(forward_transform(s)) == doctest::Approx(std::sqrt(std::pow(kTwoPi, 3) / 2.0)).epsilon(1e-14));
  CHECK(l2_norm_spectral(SpectralField(g, 3)) == 0.0);
  const auto c = test::sample(g, 1, [](double, double, double) { return vec(1.5); });
  CHECK(l2_norm_spectral(forward_transform(c)) == doctest::Approx(1.5 * std::pow(kTwoPi, 1.5)).epsilon(1e-14));

  SUBCASE("Parseval on random fields") {
    const auto h = Grid::create(9.0, 32);
    const SpectralField F = test::random_field(h, 3, 21);
    const RealField f = inverse_transform(F);
    const double quad = std::sqrt(h->volume() / static_cast<double>(h->size()) * f.values().square().sum());
    CHECK(std::abs(l2_norm_spectral(F) - quad) <= 1e-12 * quad);
    CHECK(std::abs(lp_norm(f, 2.0) - quad) <= 1e-12 * quad);
  }
}

TEST_CASE("Lp norms") {
  const double L = 2.5;
  const auto g = Grid::create(L, 8);
  const auto c = test::sample(g, 1, [](double, double, double) { return vec(2.0); });
  for (double p : {1.0, 2.0, 3.5, 7.0})
    CHECK(lp_norm(c, p) == doctest::Approx(2.0 * std::pow(L * L * L, 1.0 / p)).epsilon(1e-14));
  CHECK(lp_norm(c, kInfinity) == 2.0);
  CHECK_THROWS_AS(lp_norm(c, 0.5), ParameterError);

  const auto h = Grid::create(kTwoPi, 64);
  const auto s = test::sample(h, 1, [](double x, double, double) { return vec(std::sin(x)); });
  CHECK(std::abs(lp_norm(s, kInfinity) - 1.0) <= 1e-3);

  SUBCASE("vector magnitude") {
    const auto v = test::sample(g, 3, [](double, double, double) { return Eigen::Vector3d(3.0, 0.0, 4.0); });
    CHECK(lp_norm(v, kInfinity) == doctest::Approx(5.0));
  }
}

TEST_CASE("dealiased products of single modes are exact") {
  const int n = 24;
  const double L = kTwoPi;
  const auto g = Grid::create(L, n);
  // m = (3, 1, 0), m' = (4, -2, 1): the sum stays inside N/3 = 8.
  const auto a = test::sample(g, 1, [](double x, double y, double) { return vec(std::cos(3 * x + y)); });
  const auto b = test::sample(g, 1, [](double x, double y, double z) { return vec(std::cos(4 * x - 2 * y + z)); });
  RealField prod(g, a.values() * b.values());
  const SpectralField P = forward_transform(prod);
  SpectralField expected(g, 1);
  for (int s : {1, -1}) {
    expected.at(0, s * 7, s * -1, s * 1) += 0.25;
    expected.at(0, s * -1, s * 3, s * -1) += 0.25;
  }
  CHECK(test::max_abs(P.coeffs() - expected.coeffs()) < 1e-15);
}

TEST_CASE("concurrent transforms agree with serial ones") {
  const auto g = Grid::create(4.0, 16);
  std::vector<SpectralField> inputs;
  for (int i = 0; i < 4; ++i) inputs.push_back(test::random_field(g, 3, 100 + i));
  std::vector<RealField> serial;
  for (const auto& F : inputs) serial.push_back(inverse_transform(F));
  std::vector<RealField> parallel(inputs.size());
  {
    std::vector<std::jthread> workers;
    for (std::size_t i = 0; i < inputs.size(); ++i)
      workers.emplace_back([&, i] { parallel[i] = inverse_transform(inputs[i]); });
  }
  for (std::size_t i = 0; i < inputs.size(); ++i)
    CHECK((parallel[i].values() == serial[i].values()).all());
}
