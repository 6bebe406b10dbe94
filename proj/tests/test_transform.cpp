#include <cmath>

#include "doctest.h"
#include "sre/errors.hpp"
#include "sre/transform.hpp"

using namespace sre;

namespace {
Matrix pauli_x() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = m(1, 0) = 1.0;
  return m;
}
}  // namespace

TEST_CASE("polynomial examples") {
  auto m = sample(EnsembleSpec::gue(6, 2), 0);
  CHECK(poly_apply(m, PolySpec::monomial(1)) == m);

  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 2.0;
  Matrix sq = poly_apply(d, PolySpec::monomial(2));
  CHECK(sq(0, 0) == 1.0);
  CHECK(sq(1, 1) == 4.0);
  CHECK(sq(0, 1) == 0.0);

  CHECK(poly_apply(pauli_x(), PolySpec{{-1.0, 0.0, 1.0}}).norm() == 0.0);
}

TEST_CASE("polynomial invariants") {
  auto m = sample(EnsembleSpec::gue(10, 2), 3);
  PolySpec p{{0.5, -1.0, 2.0}}, q{{0.0, 3.0, 0.0, -1.0}};
  const double a = 1.5, b = -0.25;
  PolySpec sum{{a * 0.5 + b * 0.0, a * -1.0 + b * 3.0, a * 2.0, b * -1.0}};
  Matrix lhs = poly_apply(m, sum);
  Matrix rhs = a * poly_apply(m, p) + b * poly_apply(m, q);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(is_hermitian(lhs));

  Matrix twice = poly_apply(poly_apply(m, PolySpec::monomial(2)), PolySpec::monomial(2));
  CHECK((twice - poly_apply(m, PolySpec::monomial(4))).cwiseAbs().maxCoeff() < 1e-12);

  CHECK_THROWS_AS(PolySpec{{1.0}}.validate(), PreconditionError);
  CHECK_THROWS_AS((PolySpec{{1.0, 2.0, 0.0}}.validate()), PreconditionError);
  CHECK(PolySpec::from_json(nlohmann::json{{"monomial", 3}}).coefficients == std::vector<double>{0, 0, 0, 1});
}

TEST_CASE("entrywise examples") {
  auto m = sample(EnsembleSpec::gue(8, 2), 1);
  auto one = EntrywiseSpec::monomial(0);
  one.diagonal = DiagonalPolicy::Same;
  CHECK(entrywise_apply(m, one) == m);

  auto c = entrywise_apply(m, EntrywiseSpec::monomial(0, 2.5));
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      if (i == j)
        CHECK(c(i, i) == 0.0);
      else
        CHECK(c(i, j) == 2.5 * m(i, j));
    }

  const int N = 50;
  const cplx v = cplx(1.0, 1.0) / std::sqrt(2.0 * N);
  CHECK(std::abs(EntrywiseSpec::monomial(1).apply(v, 0, 1, N) - v) < 1e-15);

  EntrywiseSpec skew;
  skew.coefficients = {Profile2D::tabulated({{1, 2}, {2, 1}})};
  CHECK(is_hermitian(entrywise_apply(m, skew)));
}

TEST_CASE("entrywise sixth moment") {
  const int N = 128;
  MatrixModel model(EnsembleSpec::band_wigner(Profile2D::constant(1.0), N, 5),
                    {TransformStep::entry_wise(EntrywiseSpec::monomial(1))});
  REQUIRE(model.entry_local());
  double sum = 0;
  const int draws = 20000;
  for (int s = 0; s < draws; ++s) sum += std::norm(model.entry(s, 0, 1));
  CHECK(sum / draws == doctest::Approx(6.0 / N).epsilon(0.1));
}

TEST_CASE("model entries match full samples") {
  MatrixModel model(EnsembleSpec::gue(10, 4), {TransformStep::entry_wise(EntrywiseSpec::monomial(1)),
                                               TransformStep::diagonal_shift(Profile1D::constant(0.5))});
  REQUIRE(model.entry_local());
  auto m = model.sample(3);
  CHECK(is_hermitian(m));
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) CHECK(std::abs(model.entry(3, i, j) - m(i, j)) < 1e-15);
  CHECK_FALSE(model.then(TransformStep::polynomial(PolySpec::monomial(2))).entry_local());
  CHECK_FALSE(MatrixModel(EnsembleSpec::unitarily_invariant(Profile1D::sign(), 8)).entry_local());
}

TEST_CASE("model json round trip") {
  MatrixModel model(EnsembleSpec::band_wigner(Profile2D::bilinear(1, 1), 16, 8),
                    {TransformStep::polynomial(PolySpec{{0.0, 1.0, 0.5}}),
                     TransformStep::entry_wise(EntrywiseSpec::monomial(2))});
  auto j = model.to_json();
  std::vector<TransformStep> steps;
  for (const auto& s : j.at("transforms")) steps.push_back(TransformStep::from_json(s));
  MatrixModel back(EnsembleSpec::from_json(j.at("ensemble")), steps);
  CHECK(back.to_json() == j);
  CHECK(back.sample(1) == model.sample(1));
}

TEST_CASE("centering precondition") {
  MatrixModel shifted(EnsembleSpec::gue(16, 1), {TransformStep::diagonal_shift(Profile1D::constant(1.0))});
  CHECK_THROWS_WITH_AS(require_centered(shifted, 500), doctest::Contains("centered"), PreconditionError);
  CHECK_NOTHROW(require_centered(MatrixModel(EnsembleSpec::gue(16, 1)), 500));
}
