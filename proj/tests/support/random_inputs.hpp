#pragma once

// Deterministic random inputs for the property suites: rational Hermitian
// PSD matrices with small entries, and random trees.

#include <random>
#include <vector>

#include "loccert/operator.hpp"
#include "loccert/tree.hpp"

namespace testgen {

using loccert::ExactComplex;
using loccert::HermitianOperator;
using loccert::Rational;
using loccert::TreeNode;

/// Rational in [-3, 3] with denominator at most 4.
inline Rational small_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> den_d(1, 4);
  const int den = den_d(rng);
  std::uniform_int_distribution<int> num_d(-3 * den, 3 * den);
  return Rational(num_d(rng), den);
}

inline HermitianOperator random_hermitian(std::mt19937_64& rng, int dim) {
  std::vector<ExactComplex> e(static_cast<std::size_t>(dim) * dim);
  for (int i = 0; i < dim; ++i) {
    e[static_cast<std::size_t>(i) * dim + i] = ExactComplex(small_rational(rng));
    for (int j = i + 1; j < dim; ++j) {
      ExactComplex x(small_rational(rng), small_rational(rng));
      e[static_cast<std::size_t>(i) * dim + j] = x;
      e[static_cast<std::size_t>(j) * dim + i] = x.conj();
    }
  }
  return HermitianOperator::exact_from_entries(dim, std::move(e));
}

/// Rejection-sampled PSD matrix (any rank), entries in [-3,3], denominators
/// at most 4.
inline HermitianOperator random_psd(std::mt19937_64& rng, int dim) {
  for (;;) {
    HermitianOperator h = random_hermitian(rng, dim);
    if (!h.is_zero() && loccert::is_positive_semidefinite(h)) return h;
  }
}

/// Rank-one PSD matrix v v+ with v entries of denominator at most 2 and
/// magnitude at most 3/2, so the product entries stay within [-3,3] with
/// denominator at most 4.
inline HermitianOperator random_rank_one(std::mt19937_64& rng, int dim) {
  for (;;) {
    std::vector<ExactComplex> v(static_cast<std::size_t>(dim));
    std::uniform_int_distribution<int> num_d(-3, 3);
    bool nonzero = false;
    for (int i = 0; i < dim; ++i) {
      v[static_cast<std::size_t>(i)] = ExactComplex(Rational(num_d(rng), 2), Rational(num_d(rng), 2));
      nonzero = nonzero || !v[static_cast<std::size_t>(i)].is_zero();
    }
    if (nonzero) return HermitianOperator::exact_projector(v, false);
  }
}

inline std::vector<HermitianOperator> random_psd_set(std::mt19937_64& rng, int dim, int count) {
  std::vector<HermitianOperator> out;
  std::bernoulli_distribution rank_one(0.5);
  while (static_cast<int>(out.size()) < count) {
    out.push_back(rank_one(rng) ? random_rank_one(rng, dim) : random_psd(rng, dim));
  }
  return out;
}

/// Random tree in which every nonleaf node has 2..4 children, height capped.
inline TreeNode random_multiway_tree(std::mt19937_64& rng, int max_height) {
  TreeNode n;
  if (max_height == 0) return n;
  std::bernoulli_distribution leaf(0.35);
  if (leaf(rng)) return n;
  std::uniform_int_distribution<int> kids(2, 4);
  const int c = kids(rng);
  for (int i = 0; i < c; ++i) n.children.push_back(random_multiway_tree(rng, max_height - 1));
  return n;
}

/// Random full binary tree with the given leaf count. Payload labels are
/// 1x1 exact matrices [value] so payload multisets can be tracked.
inline TreeNode random_full_binary(std::mt19937_64& rng, int leaves, int& next_payload) {
  TreeNode n;
  n.party = 0;
  n.label = HermitianOperator::exact_diagonal({Rational(next_payload)});
  ++next_payload;
  if (leaves == 1) return n;
  std::uniform_int_distribution<int> split(1, leaves - 1);
  const int left = split(rng);
  n.children.push_back(random_full_binary(rng, left, next_payload));
  n.children.push_back(random_full_binary(rng, leaves - left, next_payload));
  return n;
}

}  // namespace testgen
