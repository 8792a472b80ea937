#pragma once

#include <array>

#include "loccert/measurement.hpp"
#include "loccert/tree.hpp"

namespace loccert {

/// The nine-element rank-one product measurement on a 3x3 system that
/// perfectly discriminates the domino basis. Exact rationals; the
/// superposition projectors carry entries of +-1/2 so the elements sum to
/// the identity exactly. Seven distinct local rays per party.
SeparableMeasurement domino();

/// Domino variant with each of the four superposition pairs rotated by its
/// own angle: |a>+|b> -> cos(t)|a>+sin(t)|b>, |a>-|b> -> sin(t)|a>-cos(t)|b>.
/// Float backend (the entries are irrational). Angles must lie strictly
/// inside (0, pi/2); boundary angles collapse local rays onto basis states
/// and are rejected, as is any tuple that fails to produce seven distinct
/// local rays per party at the given tolerance.
SeparableMeasurement rotated_domino(const std::array<double, 4>& angles,
                                    const Tolerances& tol = {});

struct GeneratedProtocol {
  LoccTree tree;
  SeparableMeasurement measurement;
};

/// Bound-saturating protocol: the first party measures `first_outcomes`
/// basis projectors (dimension n), then each remaining party measures a
/// two-outcome rank-one qubit measurement along every branch, at a globally
/// unique angle per branch so all local outcomes are distinct rays (hence
/// extreme). The tree is canonical binary: the n-outcome first round appears
/// as a chain of two-outcome splits whose interior labels are the
/// coarse-grained sums. N = 2^(P-1) n; the extreme-ray total equals the
/// 2N - ceil(2N delta) bound exactly.
///
/// Angles use the tan-half-angle parameterization t_k = k/(K+1) over a
/// global context counter k, so every label stays rational and rays never
/// collide.
GeneratedProtocol tight_protocol(int parties, int first_outcomes);

/// Applies `omissions` sequential measurement omissions to tight_protocol:
/// each step removes the last measurement along one branch of the active
/// subtree (deleting two sibling leaves), and once a subtree is reduced to
/// its initial-outcome node, that outcome is merged into the next subtree's
/// first-round projector (keeping the measurement complete). The extreme-ray
/// total continues to match the bound exactly at every step.
/// Valid range: 0 <= omissions <= n 2^(P-1) - 2.
GeneratedProtocol tight_protocol_with_omissions(int parties, int first_outcomes, int omissions);

/// Truncation of the infinite-outcome bound-saturating family: the first
/// `subtree_count` outcomes of a first-round measurement on a space of
/// dimension S+1, each followed by the usual two-outcome layers, plus one
/// trailing "tail" element (the unresolved remainder direction times
/// identity) so the measurement is complete. Elements are ordered by a
/// right-to-left enumeration of the leaves - whole subtrees at a time, tail
/// last - so every prefix of size 2^(P-1) s covers exactly s subtrees and
/// has extreme-ray density (2^P - 1)/2^(P-1) exactly.
GeneratedProtocol density_family_truncation(int parties, int subtree_count);

}  // namespace loccert
