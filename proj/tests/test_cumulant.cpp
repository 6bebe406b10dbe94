#include <cmath>

#include "doctest.h"
#include "sre/cumulant.hpp"
#include "sre/errors.hpp"

using namespace sre;

namespace {
std::vector<std::vector<cplx>> synthetic(int n, int count) {
  std::vector<std::vector<cplx>> r(count, std::vector<cplx>(n));
  KeyedStream rng({2024, static_cast<std::uint64_t>(n)});
  for (auto& row : r) {
    const double common = rng.normal();
    for (auto& v : row) v = cplx(common + rng.normal() + 3.0, 0.5 * rng.normal());
  }
  return r;
}

cplx mean(const std::vector<std::vector<cplx>>& r, std::vector<int> slots) {
  cplx s = 0;
  for (const auto& row : r) {
    cplx p = 1;
    for (int k : slots) p *= row[k];
    s += p;
  }
  return s / static_cast<double>(r.size());
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }
}  // namespace

TEST_CASE("evaluate examples") {
  Matrix id = Matrix::Identity(4, 4);
  CHECK(evaluate_observable(id, ObservableSpec::trace_powers({1}))[0] == 1.0);

  Matrix h = Matrix::Zero(2, 2);
  h(0, 1) = cplx(1, 1);
  h(1, 0) = cplx(1, -1);
  auto v = evaluate_observable(h, ObservableSpec::entry_cycles({{1, 2}}));
  CHECK(v.size() == 2);
  CHECK(v[0] * v[1] == 2.0);

  Matrix d = Matrix::Zero(3, 3);
  d(0, 0) = 1;
  d(1, 1) = 2;
  d(2, 2) = 3;
  CHECK(evaluate_observable(d, ObservableSpec::dressed_trace({Profile1D::constant(1)}))[0] == 2.0);
  CHECK_THROWS_AS(evaluate_observable(d, ObservableSpec::entry_cycles({{1, 4}})), std::out_of_range);
}

TEST_CASE("trace powers agree with explicit products") {
  auto m = sample(EnsembleSpec::gue(9, 5), 0);
  Matrix p = Matrix::Identity(9, 9);
  for (int k = 1; k <= 6; ++k) {
    p = p * m;
    auto v = evaluate_observable(m, ObservableSpec::trace_powers({k}))[0];
    CHECK(std::abs(v - p.trace() / 9.0) < 1e-12);
  }
  auto e = evaluate_observable(m, ObservableSpec::entry_cycles({{2, 5}}, {{3, 1}}))[0];
  CHECK(std::abs(e - (m * m * m)(1, 4)) < 1e-12);

  auto lin = Profile1D::linear(0, 1);
  auto dressed = evaluate_observable(m, ObservableSpec::dressed_trace({lin, Profile1D::constant(2)}))[0];
  Matrix D = Matrix::Zero(9, 9);
  for (int i = 0; i < 9; ++i) D(i, i) = grid_point(i + 1, 9);
  CHECK(std::abs(dressed - (m * D * m * 2.0).trace() / 9.0) < 1e-12);
}

TEST_CASE("entry cycles must be disjoint") {
  CHECK_THROWS_WITH_AS(ObservableSpec::entry_cycles({{1, 2}, {2, 3}}), doctest::Contains("share index 2"),
                       PreconditionError);
  CHECK(ObservableSpec::entry_cycles({{1, 2}, {3, 4, 5}}).order() == 5);
}

TEST_CASE("plug-in estimator matches small-case formulas") {
  auto r2 = synthetic(2, 500);
  auto k2 = cumulant_from_records(r2).value;
  CHECK(rel(k2, mean(r2, {0, 1}) - mean(r2, {0}) * mean(r2, {1})) < 1e-12);

  auto r3 = synthetic(3, 500);
  auto k3 = cumulant_from_records(r3).value;
  cplx m1 = mean(r3, {0}), m2 = mean(r3, {1}), m3 = mean(r3, {2});
  cplx direct = mean(r3, {0, 1, 2}) - m1 * mean(r3, {1, 2}) - m2 * mean(r3, {0, 2}) - m3 * mean(r3, {0, 1}) +
                2.0 * m1 * m2 * m3;
  CHECK(rel(k3, direct) < 1e-10);

  auto r1 = synthetic(1, 100);
  CHECK(rel(cumulant_from_records(r1).value, mean(r1, {0})) < 1e-15);
}

TEST_CASE("shift invariance and multilinearity") {
  for (int n : {2, 3, 4}) {
    auto r = synthetic(n, 400);
    auto base = cumulant_from_records(r);
    auto shifted = r, scaled = r;
    for (auto& row : shifted) row[0] += cplx(7.0, -2.0);
    for (auto& row : scaled) row[n - 1] *= 3.0;
    CHECK(rel(cumulant_from_records(shifted).value, base.value) < 1e-10);
    CHECK(rel(cumulant_from_records(scaled).value, 3.0 * base.value) < 1e-10);
  }
}

TEST_CASE("errors and caps") {
  CHECK_THROWS_AS(cumulant_from_records({}), PreconditionError);
  CHECK_THROWS_AS(cumulant_from_records(synthetic(7, 10)), SizeLimitError);
  MatrixModel model(EnsembleSpec::gue(8));
  EstimateOptions opt;
  opt.samples = 0;
  CHECK_THROWS_AS(estimate_cumulant(model, ObservableSpec::trace_powers({2}), opt), PreconditionError);
  CHECK_THROWS_AS(estimate_trace_cumulant(model, {2, 2, 2, 2, 2}, {}), PreconditionError);
}

TEST_CASE("deterministic ensemble has zero variance") {
  MatrixModel model(EnsembleSpec::deterministic(6));
  EstimateOptions opt;
  opt.samples = 50;
  auto e = estimate_cumulant(model, ObservableSpec::repeated(Slot::trace_power(1), 2), opt);
  CHECK(e.value == 0.0);
  CHECK(e.std_error == 0.0);
}

TEST_CASE("monte carlo estimates") {
  EstimateOptions opt;
  opt.samples = 4000;
  auto t2 = estimate_trace_cumulant(MatrixModel(EnsembleSpec::gue(64, 3)), {2}, opt);
  CHECK(std::abs(t2.value.real() - 1.0) < 3 * t2.std_error);

  auto inv = estimate_trace_cumulant(MatrixModel(EnsembleSpec::unitarily_invariant(Profile1D::sign(), 32, 3)), {2},
                                     {200, 0, 1});
  CHECK(inv.value.real() == doctest::Approx(1.0).epsilon(1e-10));

  opt.samples = 20000;
  auto c2 = estimate_cyclic_cumulant(MatrixModel(EnsembleSpec::gue(64, 3)), {1, 2}, opt);
  CHECK(c2.cumulant.value.real() == doctest::Approx(1.0 / 64).epsilon(0.05));

  auto band = estimate_cyclic_cumulant(MatrixModel(EnsembleSpec::band_wigner(Profile2D::bilinear(0, 1), 64, 3)),
                                       {16, 32}, opt);
  CHECK(band.scaled.real() == doctest::Approx(0.125).epsilon(0.1));

  auto c3 = estimate_cyclic_cumulant(MatrixModel(EnsembleSpec::gue(32, 3)), {1, 2, 3}, opt);
  CHECK(std::abs(c3.cumulant.value.real()) < 4 * c3.cumulant.std_error);
}

TEST_CASE("results do not depend on the job count") {
  MatrixModel model(EnsembleSpec::gue(24, 9));
  EstimateOptions a{300, 0, 1}, b{300, 0, 3};
  auto o = ObservableSpec::trace_powers({2, 3});
  auto ea = estimate_cumulant(model, o, a);
  auto eb = estimate_cumulant(model, o, b);
  CHECK(ea.value == eb.value);
  CHECK(ea.std_error == eb.std_error);
}

TEST_CASE("disjoint seed halves agree") {
  MatrixModel model(EnsembleSpec::gue(32, 1));
  auto o = ObservableSpec::trace_powers({2, 2});
  auto a = estimate_cumulant(model, o, {3000, 0, 1});
  auto b = estimate_cumulant(model, o, {3000, 3000, 1});
  CHECK(std::abs(a.value.real() - b.value.real()) < 3 * std::hypot(a.std_error, b.std_error));
}

TEST_CASE("csv rows") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0 / 3.0) == "0.3333333333333333");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("x\"y") == "\"x\"\"y\"");
  CHECK(csv_field("x,\"y") == "\"x,\"\"y\"");
  MatrixModel model(EnsembleSpec::gue(8, 5));
  auto o = ObservableSpec::trace_powers({2});
  auto row = make_row(model, o, estimate_cumulant(model, o, {10, 0, 1}));
  CHECK(row.csv().find(",8,10,1,") != std::string::npos);
  CHECK(EstimateRow::csv_header().rfind("ensemble,", 0) == 0);
}
