#include <cmath>

#include "doctest.h"
#include "sre/errors.hpp"
#include "sre/ensemble.hpp"

using namespace sre;

TEST_CASE("profile families and json") {
  CHECK(Profile1D::linear(1, 2)(0.5) == doctest::Approx(2.0));
  CHECK(Profile1D::sign()(0.25) == -1.0);
  CHECK(Profile1D::sign()(0.5) == 1.0);
  CHECK(Profile1D::tabulated({0, 1, 0})(0.25) == doctest::Approx(0.5));
  CHECK(Profile1D::gaussian_bump(0.5, 0.1, 2.0)(0.5) == doctest::Approx(2.0));
  CHECK(Profile2D::bilinear(1, 1)(0.25, 0.75) == doctest::Approx(1.1875));
  CHECK(Profile2D::step(1.0, 0.5, 2.0)(0.2, 0.3) == 0.5);
  CHECK(Profile2D::band(0, 1, 0.1)(0.3, 0.3) == doctest::Approx(1.0));
  CHECK_THROWS(Profile2D::tabulated({{0, 1}, {2, 0}}));

  for (const auto& p : {Profile1D::constant(3), Profile1D::linear(1, -1), Profile1D::sign(),
                        Profile1D::gaussian_bump(0.3, 0.2, 1, 0.5), Profile1D::tabulated({1, 2, 4})}) {
    auto q = Profile1D::from_json(p.to_json());
    for (double x : {0.0, 0.1, 0.5, 0.77, 1.0}) CHECK(q(x) == p(x));
  }
  for (const auto& p : {Profile2D::constant(2), Profile2D::bilinear(1, 1), Profile2D::step(1, 0, 1),
                        Profile2D::band(1, 2, 0.3), Profile2D::tabulated({{1, 2}, {2, 3}})}) {
    auto q = Profile2D::from_json(p.to_json());
    CHECK(q(0.3, 0.6) == p(0.3, 0.6));
  }
  CHECK(Profile1D::from_json(2.5)(0.1) == 2.5);
  try {
    Profile1D::from_json(nlohmann::json{{"type", "cubic"}}, "ensemble.profile");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.path().rfind("ensemble.profile", 0) == 0);
  }
}

TEST_CASE("samples are hermitian and reproducible") {
  for (auto spec : {EnsembleSpec::gue(16, 3), EnsembleSpec::band_wigner(Profile2D::bilinear(1, 1), 16, 3),
                    EnsembleSpec::unitarily_invariant(Profile1D::sign(), 16, 3),
                    EnsembleSpec::orthogonally_invariant(Profile1D::linear(0, 1), 16, 3)}) {
    auto a = sample(spec, 7);
    auto b = sample(spec, 7);
    CHECK(is_hermitian(a));
    CHECK(a == b);
    CHECK(a != sample(spec, 8));
    CHECK(a != sample(spec.with_seed(4), 7));
  }
  CHECK_THROWS(sample(EnsembleSpec::gue(1), 0));
  CHECK_THROWS(EnsembleSpec::from_json(nlohmann::json{{"kind", "goe"}, {"N", 8}}));
  CHECK_THROWS_AS(EnsembleSpec::from_json(nlohmann::json{{"kind", "gue"}, {"N", -3}}), ConfigError);
}

TEST_CASE("entry access matches the full sample") {
  auto spec = EnsembleSpec::band_wigner(Profile2D::bilinear(1, 1), 12, 9);
  auto m = sample(spec, 5);
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 12; ++j) CHECK(sample_entry(spec, 5, i, j) == m(i, j));
}

TEST_CASE("json round trip") {
  auto spec = EnsembleSpec::band_wigner(Profile2D::bilinear(1, 1), 32, 77);
  auto back = EnsembleSpec::from_json(spec.to_json());
  CHECK(back.to_json() == spec.to_json());
  CHECK(sample(back, 2) == sample(spec, 2));
}

TEST_CASE("GUE normalization") {
  auto spec = EnsembleSpec::gue(64, 11);
  const int draws = 10000;
  double m11 = 0, m11sq = 0, e12 = 0;
  for (int s = 0; s < draws; ++s) {
    const double d = sample_entry(spec, s, 0, 0).real();
    m11 += d;
    m11sq += d * d;
    e12 += std::norm(sample_entry(spec, s, 0, 1));
  }
  m11 /= draws;
  const double se = std::sqrt((m11sq / draws - m11 * m11) / draws);
  CHECK(std::abs(m11) < 4 * se);
  CHECK(e12 / draws == doctest::Approx(1.0 / 64).epsilon(0.05));
}

TEST_CASE("unitarily invariant spectrum is preserved") {
  auto spec = EnsembleSpec::unitarily_invariant(Profile1D::sign(), 128, 2);
  auto m = sample(spec, 0);
  CHECK((m * m).trace().real() / 128 == doctest::Approx(1.0).epsilon(1e-10));
  Matrix m4 = m * m * m * m;
  CHECK(m4.trace().real() / 128 == doctest::Approx(1.0).epsilon(1e-10));
  double tr = 0;
  for (int i = 1; i <= 128; ++i) tr += Profile1D::sign()(grid_point(i, 128));
  CHECK(std::abs(m.trace() - tr) < 1e-9);

  auto lin = EnsembleSpec::orthogonally_invariant(Profile1D::linear(0, 1), 20, 2);
  auto o = sample(lin, 1);
  double expect = 0;
  for (int i = 1; i <= 20; ++i) expect += std::pow(grid_point(i, 20), 3);
  CHECK((o * o * o).trace().real() == doctest::Approx(expect).epsilon(1e-10));
}

TEST_CASE("haar matrices are unitary") {
  auto u = haar_unitary(24, 5, 0);
  CHECK((u.adjoint() * u - Matrix::Identity(24, 24)).norm() < 1e-12);
  auto o = haar_orthogonal(24, 5, 0);
  CHECK(o.imag().norm() == 0.0);
  CHECK((o.transpose() * o - Matrix::Identity(24, 24)).norm() < 1e-12);
}

TEST_CASE("gauge transform") {
  auto m = sample(EnsembleSpec::gue(8, 1), 0);
  CHECK(gauge_transform(m, std::vector<double>(8, 0.0)) == m);
  CHECK((gauge_transform(m, std::vector<double>(8, 1.3)) - m).norm() < 1e-14);
  CHECK_THROWS_AS(gauge_transform(m, {1.0}), PreconditionError);

  auto spec = EnsembleSpec::gue(16, 4);
  const int draws = 10000;
  cplx sum_plain = 0, sum_gauged = 0;
  double var_plain = 0, var_gauged = 0;
  for (int s = 0; s < draws; ++s) {
    auto x = sample(spec, s);
    KeyedStream rng({99, static_cast<std::uint64_t>(s)});
    std::vector<double> phases(16);
    for (auto& t : phases) t = 2 * M_PI * rng.uniform();
    auto y = gauge_transform(x, phases);
    const cplx a = x(0, 1) * x(1, 2), b = y(0, 1) * y(1, 2);
    sum_plain += a;
    sum_gauged += b;
    var_plain += std::norm(a);
    var_gauged += std::norm(b);
  }
  CHECK(std::abs(sum_plain) / draws < 4 * std::sqrt(var_plain) / draws);
  CHECK(std::abs(sum_gauged) / draws < 4 * std::sqrt(var_gauged) / draws);
}

TEST_CASE("diagonal shift and profile") {
  auto m = sample(EnsembleSpec::gue(8, 1), 0);
  CHECK(shift_diagonal(m, Profile1D::constant(0)) == m);
  CHECK((shift_diagonal(shift_diagonal(m, Profile1D::constant(2.5)), Profile1D::constant(-2.5)) - m).norm() < 1e-14);

  auto gue = diagonal_profile(EnsembleSpec::gue(16, 3), 4000);
  for (std::size_t i = 0; i < gue.mean.size(); ++i) CHECK(std::abs(gue.mean[i]) < 5 * gue.std_error[i]);

  auto lin = diagonal_profile(EnsembleSpec::unitarily_invariant(Profile1D::linear(0, 1), 64, 3), 400);
  double expect = 0;
  for (int i = 1; i <= 64; ++i) expect += grid_point(i, 64) / 64;
  for (std::size_t i = 0; i < lin.mean.size(); ++i) CHECK(std::abs(lin.mean[i] - expect) < 5 * lin.std_error[i] + 1e-9);
}

TEST_CASE("parallel sampling does not change results") {
  auto spec = EnsembleSpec::gue(16, 3);
  auto a = diagonal_profile(spec, 300, 1);
  auto b = diagonal_profile(spec, 300, 3);
  CHECK(a.mean == b.mean);
  CHECK(a.std_error == b.std_error);
}
