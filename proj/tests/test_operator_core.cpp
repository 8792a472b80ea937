#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "loccert/generators.hpp"
#include "loccert/measurement.hpp"
#include "loccert/operator.hpp"
#include "support/random_inputs.hpp"

using namespace loccert;

namespace {

HermitianOperator diag(std::vector<Rational> d) {
  return HermitianOperator::exact_diagonal(std::move(d));
}

HermitianOperator plus_state_projector(int sign) {
  return HermitianOperator::exact_projector(
      {ExactComplex(Rational(1)), ExactComplex(Rational(sign))}, true);
}

}  // namespace

TEST_CASE("tensor product of identities") {
  const auto i2 = HermitianOperator::identity(2, ScalarMode::Exact);
  const std::vector<HermitianOperator> fs{i2, i2};
  const auto t = tensor_product(fs);
  CHECK(t.dim() == 4);
  CHECK(operator_equal(t, HermitianOperator::identity(4, ScalarMode::Exact)));
}

TEST_CASE("tensor product of basis projectors") {
  const std::vector<HermitianOperator> fs{diag({1, 0}), diag({0, 1})};
  CHECK(operator_equal(tensor_product(fs), diag({0, 1, 0, 0})));
}

TEST_CASE("tensor product of the |0>(|0>+|1>) projector pair") {
  // Hand expansion: the only nonzero block is the top-left 3x3 block of the
  // second factor, so entries 1/2 sit at (0,0),(0,1),(1,0),(1,1).
  const auto alice = diag({1, 0, 0});
  const auto bob = HermitianOperator::exact_projector(
      {ExactComplex(Rational(1)), ExactComplex(Rational(1)), ExactComplex(Rational(0))}, true);
  const std::vector<HermitianOperator> fs{alice, bob};
  const auto t = tensor_product(fs);
  REQUIRE(t.dim() == 9);
  const Rational half(1, 2);
  for (int i = 0; i < 9; ++i) {
    for (int j = 0; j < 9; ++j) {
      const Rational expected = (i < 2 && j < 2) ? half : Rational(0);
      CHECK(t.exact_at(i, j).re == expected);
      CHECK(t.exact_at(i, j).im == 0);
    }
  }
  CHECK(t.trace().exact_value().re == 1);
  CHECK(operator_rank(t) == 1);
}

TEST_CASE("tensor product rejects mixed backends") {
  const std::vector<HermitianOperator> fs{HermitianOperator::identity(2, ScalarMode::Exact),
                                          HermitianOperator::identity(2, ScalarMode::Float)};
  CHECK_THROWS_AS(tensor_product(fs), ModeMismatchError);
}

TEST_CASE("tensor product flattening is associative") {
  std::mt19937_64 rng(7001);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = testgen::random_hermitian(rng, 2);
    const auto b = testgen::random_hermitian(rng, 3);
    const auto c = testgen::random_hermitian(rng, 2);
    const std::vector<HermitianOperator> flat{a, b, c};
    const std::vector<HermitianOperator> ab{a, b};
    const std::vector<HermitianOperator> nested{tensor_product(ab), c};
    CHECK(operator_equal(tensor_product(flat), tensor_product(nested)));
  }
}

TEST_CASE("positive semidefiniteness, exact") {
  CHECK(is_positive_semidefinite(diag({1, 0})));
  CHECK_FALSE(is_positive_semidefinite(diag({1, -1})));
  // 2x2 minors by hand: 2 >= 0 and det = 2*1 - 1 = 1 >= 0.
  const auto m = HermitianOperator::exact_from_entries(
      2, {ExactComplex(Rational(2)), ExactComplex(Rational(1)), ExactComplex(Rational(1)),
          ExactComplex(Rational(1))});
  CHECK(is_positive_semidefinite(m));
  // Zero diagonal with nonzero row is not PSD.
  const auto z = HermitianOperator::exact_from_entries(
      2, {ExactComplex(Rational(0)), ExactComplex(Rational(1)), ExactComplex(Rational(1)),
          ExactComplex(Rational(1))});
  CHECK_FALSE(is_positive_semidefinite(z));
}

TEST_CASE("positive semidefiniteness agrees between backends on random input") {
  std::mt19937_64 rng(7002);
  for (int trial = 0; trial < 100; ++trial) {
    const auto h = testgen::random_hermitian(rng, 3);
    std::vector<FloatComplex> fe;
    for (const auto& c : h.exact_entries()) {
      fe.emplace_back(c.re.convert_to<double>(), c.im.convert_to<double>());
    }
    const auto hf = HermitianOperator::float_from_entries(3, std::move(fe));
    // The float check can only disagree within tolerance of a zero
    // eigenvalue; these random rationals are almost never that marginal,
    // so require agreement unless the exact matrix is singular.
    if (operator_rank(h) == 3) {
      CHECK(is_positive_semidefinite(h) == is_positive_semidefinite(hf));
    }
  }
}

TEST_CASE("tensor of PSD factors is PSD, and conversely for PSD inputs") {
  std::mt19937_64 rng(7003);
  for (int trial = 0; trial < 25; ++trial) {
    const auto a = testgen::random_psd(rng, 2);
    const auto b = testgen::random_psd(rng, 3);
    const std::vector<HermitianOperator> fs{a, b};
    CHECK(is_positive_semidefinite(tensor_product(fs)));
  }
}

TEST_CASE("proportionality factor") {
  const auto a = diag({1, 0});
  SUBCASE("positive scale is found") {
    const auto q = proportionality_factor(scale(a, Rational(2)), a);
    REQUIRE(q.has_value());
    CHECK(q->exact_value().re == 2);
    CHECK(q->exact_value().im == 0);
  }
  SUBCASE("different rays are rejected") {
    CHECK_FALSE(proportionality_factor(a, diag({0, 1})).has_value());
  }
  SUBCASE("negative scale does not count") {
    CHECK_FALSE(proportionality_factor(scale(a, Rational(-1)), a).has_value());
  }
  SUBCASE("plus and minus superposition projectors are different rays") {
    CHECK_FALSE(proportionality_factor(plus_state_projector(+1), plus_state_projector(-1))
                    .has_value());
  }
  SUBCASE("zero operator is an error") {
    const auto zero = diag({0, 0});
    CHECK_THROWS_AS(proportionality_factor(zero, a), ValidationError);
  }
}

TEST_CASE("proportionality in float mode uses normalized comparison") {
  const auto a = HermitianOperator::float_projector({{1, 0}, {1, 0}}, true);
  const auto b = scale(a, 3.5);
  const auto q = proportionality_factor(b, a);
  REQUIRE(q.has_value());
  CHECK(q->float_value().real() == doctest::Approx(3.5));
  const auto c = HermitianOperator::float_projector({{1, 0}, {-1, 0}}, true);
  CHECK_FALSE(proportionality_factor(a, c).has_value());
}

TEST_CASE("dedupe_rays basics") {
  const auto a = diag({1, 2});
  const auto b = diag({3, 1});
  const std::vector<HermitianOperator> ops{a, scale(a, Rational(2)), b};
  const auto dd = dedupe_rays(ops);
  REQUIRE(dd.representatives.size() == 2);
  CHECK(operator_equal(dd.representatives[0], a));
  CHECK(operator_equal(dd.representatives[1], b));
  CHECK(dd.ray_index == std::vector<int>{0, 0, 1});
}

TEST_CASE("dedupe_rays rejects zero operators by index") {
  const std::vector<HermitianOperator> ops{diag({1, 0}), diag({0, 0})};
  CHECK_THROWS_WITH_AS(dedupe_rays(ops), doctest::Contains("index 1"), ValidationError);
}

TEST_CASE("domino local factors fall into seven rays per party") {
  const auto m = domino();
  for (int party = 0; party < 2; ++party) {
    const auto dd = dedupe_rays(m.party_factors(party));
    CHECK(dd.representatives.size() == 7);
  }
}

TEST_CASE("dedupe_rays matches a pairwise brute-force count on planted duplicates") {
  std::mt19937_64 rng(7004);
  for (int trial = 0; trial < 30; ++trial) {
    auto base = testgen::random_psd_set(rng, 3, 4);
    std::vector<HermitianOperator> ops = base;
    std::uniform_int_distribution<int> pick(0, 3);
    std::uniform_int_distribution<int> mult(1, 5);
    for (int extra = 0; extra < 3; ++extra) {
      ops.push_back(scale(base[static_cast<std::size_t>(pick(rng))], Rational(mult(rng))));
    }
    std::shuffle(ops.begin(), ops.end(), rng);

    // Brute force: count ray classes by exhaustive pairwise comparison.
    std::vector<int> cls(ops.size(), -1);
    int classes = 0;
    for (std::size_t i = 0; i < ops.size(); ++i) {
      if (cls[i] >= 0) continue;
      cls[i] = classes++;
      for (std::size_t j = i + 1; j < ops.size(); ++j) {
        if (cls[j] < 0 && proportionality_factor(ops[i], ops[j]).has_value()) {
          cls[j] = cls[i];
        }
      }
    }
    const auto dd = dedupe_rays(ops);
    CHECK(static_cast<int>(dd.representatives.size()) == classes);
  }
}

TEST_CASE("dedupe_rays is order- and scale-invariant as a set of rays") {
  std::mt19937_64 rng(7005);
  auto ops = testgen::random_psd_set(rng, 3, 6);
  const auto baseline = dedupe_rays(ops);

  std::vector<HermitianOperator> mutated = ops;
  std::uniform_int_distribution<int> mult(1, 7);
  for (auto& op : mutated) op = scale(op, Rational(mult(rng), 2));
  std::shuffle(mutated.begin(), mutated.end(), rng);
  const auto shuffled = dedupe_rays(mutated);
  REQUIRE(shuffled.representatives.size() == baseline.representatives.size());
  // Same ray set: every representative of one run is proportional to
  // exactly one representative of the other.
  for (const auto& r : shuffled.representatives) {
    int hits = 0;
    for (const auto& s : baseline.representatives) {
      if (proportionality_factor(r, s).has_value()) ++hits;
    }
    CHECK(hits == 1);
  }
}

TEST_CASE("identity proportionality") {
  CHECK(is_proportional_to_identity(scale(HermitianOperator::identity(3, ScalarMode::Exact),
                                           Rational(3))));
  CHECK_FALSE(is_proportional_to_identity(diag({1, 2})));
  CHECK_FALSE(is_proportional_to_identity(diag({1, 0, 0})));
}

TEST_CASE("completeness defect") {
  SUBCASE("two-outcome projective measurement resolves the identity") {
    SeparableMeasurement m;
    m.party_count = 1;
    m.dims = {2};
    m.elements.push_back({{diag({1, 0})}, "plus"});
    m.elements.push_back({{diag({0, 1})}, "minus"});
    const auto r = completeness_defect(m);
    CHECK(r.is_complete);
    CHECK(r.defect.is_zero());
  }
  SUBCASE("domino sums to the identity exactly") {
    const auto r = completeness_defect(domino());
    CHECK(r.is_complete);
    CHECK(r.defect.is_zero());
  }
  SUBCASE("removing one element breaks the resolution") {
    auto m = domino();
    m.elements.pop_back();
    CHECK_FALSE(completeness_defect(m).is_complete);
  }
}

TEST_CASE("exact operations are reproducible across runs") {
  auto build = [] {
    std::mt19937_64 rng(7006);
    auto ops = testgen::random_psd_set(rng, 3, 5);
    return dedupe_rays(ops);
  };
  const auto a = build();
  const auto b = build();
  REQUIRE(a.representatives.size() == b.representatives.size());
  for (std::size_t i = 0; i < a.representatives.size(); ++i) {
    CHECK(operator_equal(a.representatives[i], b.representatives[i]));
  }
  CHECK(a.ray_index == b.ray_index);
}
