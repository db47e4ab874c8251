"""Trace decomposition of families and the density parameters built on it.

``decompose`` splits a family by its intersection pattern with a designated
prefix Y; the slice at S keeps the members whose trace on Y is exactly S,
with S itself removed.  All density parameters (alpha, beta) are exact
Fractions so that threshold comparisons downstream never hinge on float
rounding.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .core import (
    FamilyTuple,
    Params,
    SetFamily,
    ShapeError,
    binomial,
    elements_from_mask,
    interval_mask,
    mask_from_elements,
    validate_family_tuple,
)
from .transforms import lower_shadow


def decompose(family: SetFamily, y_elements) -> dict[frozenset[int], SetFamily]:
    """Partition ``family`` by exact trace on Y; keys are subsets of Y.

    Every returned class is (k - |S|)-uniform over the complement of Y
    (represented on the same ground [n]); class sizes sum to |family|.
    """
    n, k = family.n, family.k
    y = sorted(set(y_elements))
    if any(e < 1 or e > n for e in y):
        raise ShapeError(f"decompose: Y must sit inside [1, {n}]")
    y_mask = mask_from_elements(y) if y else 0
    n_classes = sum(binomial(len(y), size) for size in range(0, min(len(y), k) + 1))
    if n_classes > 5_000_000:
        raise ShapeError(f"decompose: {n_classes} trace classes is too many to materialize")
    buckets: dict[frozenset[int], list[int]] = {}
    for size in range(0, min(len(y), k) + 1):
        for combo in itertools.combinations(y, size):
            buckets[frozenset(combo)] = []
    for m in family.members:
        trace = m & y_mask
        buckets[frozenset(elements_from_mask(trace))].append(m & ~y_mask)
    return {
        s: SetFamily.from_masks(n, k - len(s), masks) for s, masks in buckets.items()
    }


def slice_family(family: SetFamily, j: int, s: int) -> SetFamily:
    """The single slice F(j): members whose trace on [s+1] is exactly {j}, minus j.

    Convenience accessor equivalent to decompose(family, [s+1])[{j}]; j = 0
    returns the empty-trace slice F(∅).
    """
    n = family.n
    y_mask = interval_mask(1, s + 1)
    want = 0 if j == 0 else 1 << (j - 1)
    if j != 0 and not (1 <= j <= s + 1):
        raise ShapeError(f"slice_family: j={j} outside [0, {s + 1}]")
    masks = [m & ~y_mask for m in family.members if m & y_mask == want]
    return SetFamily.from_masks(n, family.k - (0 if j == 0 else 1), masks)


@dataclass(frozen=True)
class DensityProfile:
    """alpha[i-1][j-1] = |F_i(j)| / C(n', k-1); alpha_empty[i-1] = |F_i(∅)| / C(n', k)."""

    s: int
    n_prime: int
    alpha: tuple[tuple[Fraction, ...], ...]
    alpha_empty: tuple[Fraction, ...]

    def value(self, i: int, j: int) -> Fraction:
        return self.alpha[i - 1][j - 1]


def alpha_profile(families: FamilyTuple) -> DensityProfile:
    """Exact slice densities of a tuple of s+1 families over the tail X."""
    validate_family_tuple(families)
    s = len(families) - 1
    n, k = families[0].n, families[0].k
    n_prime = n - s - 1
    if n_prime < k - 1:
        raise ShapeError(f"alpha_profile: tail of size {n_prime} cannot host (k-1)-sets")
    denom_slice = binomial(n_prime, k - 1)
    denom_empty = binomial(n_prime, k)
    rows = []
    empties = []
    for fam in families:
        parts = decompose(fam, range(1, s + 2))
        row = tuple(
            Fraction(len(parts[frozenset({j})]), denom_slice) for j in range(1, s + 2)
        )
        rows.append(row)
        empties.append(
            Fraction(len(parts[frozenset()]), denom_empty) if denom_empty else Fraction(0)
        )
    return DensityProfile(s=s, n_prime=n_prime, alpha=tuple(rows), alpha_empty=tuple(empties))


@dataclass(frozen=True)
class BetaValue:
    value: Fraction
    witness_member: int  # mask of a member attaining the min
    witness_ell: int  # smallest prefix length where that member peaks


def beta_parameter(family: SetFamily) -> BetaValue:
    """min over members A of max over ell in [n] of |A ∩ [ell]| / ell, exactly.

    The scan covers every prefix length rather than just the member's own
    elements — the quantifier has no stated range, and the full scan is cheap.
    """
    if len(family) == 0:
        raise ShapeError("beta_parameter: undefined for the empty family")
    n = family.n
    best_val: Fraction | None = None
    best_member = 0
    best_ell = 1
    for m in family.members:
        inside = 0
        member_best = Fraction(0)
        member_ell = 1
        for ell in range(1, n + 1):
            if m >> (ell - 1) & 1:
                inside += 1
            cand = Fraction(inside, ell)
            if cand > member_best:
                member_best = cand
                member_ell = ell
        if best_val is None or member_best < best_val:
            best_val = member_best
            best_member = m
            best_ell = member_ell
    assert best_val is not None
    return BetaValue(value=best_val, witness_member=best_member, witness_ell=best_ell)


def check_sum_beta(families: FamilyTuple) -> tuple[Fraction, bool]:
    """Sum of the per-family beta parameters and whether it exceeds 1.

    The verdict is meaningful for cross-dependent shifted tuples (where it
    must be true); the function itself just reports the exact sum.
    """
    validate_family_tuple(families)
    total = Fraction(0)
    for fam in families:
        total += beta_parameter(fam).value
    return total, total > 1


def ell_condition(member_mask: int, s: int, k: int | None = None) -> bool:
    """True iff some ell in [1, k] has |A ∩ [3(s+1)ell - 1]| >= ell.

    Only ell <= |A| can ever satisfy the inequality, so the scan stops there.
    """
    elems = elements_from_mask(member_mask)
    size = len(elems) if k is None else k
    for ell in range(1, size + 1):
        cutoff = 3 * (s + 1) * ell - 1
        if sum(1 for e in elems if e <= cutoff) >= ell:
            return True
    return False


def verify_lemma4(family: SetFamily, s: int) -> tuple[int, int, bool]:
    """Check (3s+2) * |one-step lower shadow| >= |family|.

    Every member must satisfy ell_condition for the bound to be claimed;
    violating members raise with the offending set named.
    """
    for m in family.members:
        if not ell_condition(m, s, family.k):
            raise ShapeError(
                f"verify_lemma4: member {sorted(elements_from_mask(m))} fails the "
                f"prefix-density condition for s={s}"
            )
    lhs = (3 * s + 2) * len(lower_shadow(family, 1))
    rhs = len(family)
    return lhs, rhs, lhs >= rhs


def verify_theorem3(
    family: SetFamily, b: int, thresholds: tuple[int, ...]
) -> tuple[Fraction, bool]:
    """Depth-b shadow bound with member-wise prefix thresholds.

    thresholds = (alpha_b, ..., alpha_k), strictly increasing.  Every member
    needs some i in [b, k] with |A ∩ [alpha_i]| >= i.  Returns
    beta = min_i C(alpha_i, i - b) / C(alpha_i, i) and the verdict
    |shadow_b(F)| >= beta * |F| compared as exact rationals.
    """
    k = family.k
    if not (0 <= b <= k):
        raise ShapeError(f"verify_theorem3: depth b={b} outside [0, {k}]")
    if len(thresholds) != k - b + 1:
        raise ShapeError(
            f"verify_theorem3: need {k - b + 1} thresholds for b={b}, k={k}, "
            f"got {len(thresholds)}"
        )
    if any(thresholds[i] >= thresholds[i + 1] for i in range(len(thresholds) - 1)):
        raise ShapeError("verify_theorem3: thresholds must be strictly increasing")
    for m in family.members:
        elems = elements_from_mask(m)
        if not any(
            sum(1 for e in elems if e <= thresholds[i - b]) >= i for i in range(b, k + 1)
        ):
            raise ShapeError(
                f"verify_theorem3: member {sorted(elems)} fails every threshold"
            )
    beta = min(
        Fraction(binomial(thresholds[i - b], i - b), binomial(thresholds[i - b], i))
        for i in range(b, k + 1)
    )
    shadow_size = len(lower_shadow(family, b))
    return beta, Fraction(shadow_size) >= beta * len(family)


def local_lym_ratio(family: SetFamily, ground_size: int | None = None) -> bool:
    """Double-counting bound (m - k + 1) * |shadow| >= k * |F| on a ground of size m."""
    m = family.n if ground_size is None else ground_size
    if m < family.k:
        raise ShapeError(f"local_lym_ratio: ground size {m} below uniformity {family.k}")
    return (m - family.k + 1) * len(lower_shadow(family, 1)) >= family.k * len(family)


def gap_set_prefix_peak(gap_mask: int, n: int) -> Fraction:
    """max over ell in [n] of |G ∩ [ell]| / ell for a gap set G.

    For the dense progression with step s' this equals exactly 1/s',
    witnessing that no member dominating G can have a large beta.
    """
    best = Fraction(0)
    inside = 0
    for ell in range(1, n + 1):
        if gap_mask >> (ell - 1) & 1:
            inside += 1
        cand = Fraction(inside, ell)
        if cand > best:
            best = cand
    return best


def random_condition_family(
    params: Params, size: int, rng, max_tries: int = 1_000_000
) -> SetFamily:
    """Rejection-sample a k-uniform family whose members all pass ell_condition.

    Used by the randomized verifier suites; the condition is dense at the
    parameter ranges those suites use, so the retry cap is generous.
    """
    n, k, s = params.n, params.k, params.s
    chosen: set[int] = set()
    tries = 0
    population = list(range(1, n + 1))
    while len(chosen) < size:
        tries += 1
        if tries > max_tries:
            raise ShapeError(
                f"random_condition_family: exceeded {max_tries} tries at size {size}"
            )
        combo = rng.sample(population, k)
        mask = mask_from_elements(combo)
        if mask in chosen:
            continue
        if ell_condition(mask, s, k):
            chosen.add(mask)
    return SetFamily.from_masks(n, k, chosen)
