"""Compression operators and shadow machinery for uniform set families.

The central object is the (i, j)-compression: replace j by i (for i < j) in
every member where the replacement is not blocked by an existing member.
Families fixed by every compression are called shifted; they form a down-set
lattice under the coordinatewise dominance order, which is what makes
exhaustive enumeration feasible at small ground sizes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .core import SetFamily, ShapeError, binomial, enumerate_ksets, lex_initial_family

# Refuse to materialize shadow/enumeration results past this many sets.
_MATERIALIZATION_CAP = 50_000_000

# Shifted-family enumeration walks every down-set of the layer; the layer
# size itself is the guard, not the count of down-sets.
SHIFTED_ENUMERATION_GUARD = 36


def shift_ij(family: SetFamily, i: int, j: int) -> SetFamily:
    """Apply the (i, j)-compression to ``family``.

    Members containing j but not i have j replaced by i unless the replacement
    already belongs to the family, in which case they stay put.  Requires
    1 <= i < j <= n.  The result always has the same cardinality.
    """
    if not (1 <= i < j <= family.n):
        raise ShapeError(f"shift_ij: need 1 <= i < j <= n, got i={i}, j={j}, n={family.n}")
    bi = 1 << (i - 1)
    bj = 1 << (j - 1)
    present = set(family.members)
    out = []
    for m in family.members:
        if (m & bj) and not (m & bi):
            moved = (m ^ bj) | bi
            out.append(m if moved in present else moved)
        else:
            out.append(m)
    return SetFamily.from_masks(family.n, family.k, out)


@dataclass(frozen=True)
class ShiftReport:
    """Outcome of iterating compressions to a fixpoint."""

    rounds: int  # full passes over all (i, j) pairs, including the final quiet one
    applied: int  # total number of member replacements performed
    result: SetFamily


def shift_closure(family: SetFamily) -> ShiftReport:
    """Iterate (i, j)-compressions in lexicographic pair order until stable.

    A round sweeps every pair 1 <= i < j <= n once.  The loop ends after the
    first round that changes nothing, so an already-shifted family reports
    ``applied == 0`` and ``rounds == 1``.
    """
    current = family
    rounds = 0
    applied = 0
    pairs = [(i, j) for i in range(1, family.n + 1) for j in range(i + 1, family.n + 1)]
    while True:
        rounds += 1
        changed_this_round = 0
        for i, j in pairs:
            nxt = shift_ij(current, i, j)
            if nxt.members != current.members:
                changed_this_round += len(set(current.members) - set(nxt.members))
                current = nxt
        applied += changed_this_round
        if changed_this_round == 0:
            break
    return ShiftReport(rounds=rounds, applied=applied, result=current)


def is_shifted(family: SetFamily) -> bool:
    """True iff the family is fixed by every (i, j)-compression.

    Equivalent formulation used here: for every member A, every way of
    lowering one element of A to a smaller absent element must stay inside
    the family.
    """
    present = set(family.members)
    for m in family.members:
        elems = []
        mm = m
        while mm:
            low = mm & -mm
            elems.append(low.bit_length())
            mm ^= low
        for e in elems:
            be = 1 << (e - 1)
            for e2 in range(1, e):
                be2 = 1 << (e2 - 1)
                if m & be2:
                    continue
                if ((m ^ be) | be2) not in present:
                    return False
    return True


def lower_shadow(family: SetFamily, b: int) -> SetFamily:
    """All (k - b)-subsets of members; depth b with 0 <= b <= k."""
    if not (0 <= b <= family.k):
        raise ShapeError(f"lower_shadow: depth {b} outside [0, {family.k}]")
    if b == 0:
        return family
    target = family.k - b
    seen = set()
    for m in family.members:
        elems = [e + 1 for e in range(family.n) if m >> e & 1]
        for combo in itertools.combinations(elems, target):
            acc = 0
            for e in combo:
                acc |= 1 << (e - 1)
            seen.add(acc)
    return SetFamily.from_masks(family.n, target, seen)


def upper_shadow(family: SetFamily, u: int) -> SetFamily:
    """All u-supersets (within the ground set) of members; k <= u <= n."""
    if not (family.k <= u <= family.n):
        raise ShapeError(f"upper_shadow: target size {u} outside [{family.k}, {family.n}]")
    if u == family.k:
        return family
    grow = u - family.k
    work = len(family) * binomial(family.n - family.k, grow)
    if work > _MATERIALIZATION_CAP:
        raise ShapeError(
            f"upper_shadow: would touch {work} candidate sets, cap is {_MATERIALIZATION_CAP}"
        )
    seen = set()
    for m in family.members:
        outside = [e + 1 for e in range(family.n) if not m >> e & 1]
        for combo in itertools.combinations(outside, grow):
            acc = m
            for e in combo:
                acc |= 1 << (e - 1)
            seen.add(acc)
    return SetFamily.from_masks(family.n, u, seen)


def kk_min_shadow_size(
    n: int, k: int, m: int, direction: str, target_size: int | None = None
) -> int:
    """Minimum shadow size over all m-member k-uniform families on [n].

    ``direction`` is "lower" or "upper".  The minimum is attained by an
    initial segment of colex order (lower) or lex order (upper); this just
    materializes that extremal family and takes its shadow.  ``target_size``
    is the uniformity of the shadow (defaults: k - 1 for lower, k + 1 for
    upper).
    """
    if m < 0 or m > binomial(n, k):
        raise ShapeError(f"kk_min_shadow_size: m={m} outside [0, C({n},{k})]")
    if direction == "lower":
        t = k - 1 if target_size is None else target_size
        if not (0 <= t <= k):
            raise ShapeError(f"kk_min_shadow_size: lower target {t} outside [0, {k}]")
        fam = lex_initial_family(n, k, m, order="colex")
        return len(lower_shadow(fam, k - t))
    if direction == "upper":
        t = k + 1 if target_size is None else target_size
        if not (k <= t <= n):
            raise ShapeError(f"kk_min_shadow_size: upper target {t} outside [{k}, {n}]")
        fam = lex_initial_family(n, k, m, order="lex")
        return len(upper_shadow(fam, t))
    raise ShapeError(f"kk_min_shadow_size: unknown direction {direction!r}")


@dataclass(frozen=True)
class BTCheck:
    """Cross-multiplied form of the normalized upper-shadow power inequality.

    For a k-uniform family G on a ground set of size y and a target size u,
    the claim (|upper-shadow| / C(y, u)) ** (y - k) >= (|G| / C(y, k)) ** (y - u)
    is checked without floats as lhs >= rhs below.
    """

    lhs: int
    rhs: int
    verdict: bool
    shadow_size: int


def bt_check(family: SetFamily, u: int) -> BTCheck:
    """Exact integer check of the upper-shadow power inequality for ``family``."""
    y = family.n
    k = family.k
    if not (k <= u <= y):
        raise ShapeError(f"bt_check: target size {u} outside [{k}, {y}]")
    us = len(upper_shadow(family, u))
    g = len(family)
    lhs = us ** (y - k) * binomial(y, k) ** (y - u)
    rhs = g ** (y - u) * binomial(y, u) ** (y - k)
    return BTCheck(lhs=lhs, rhs=rhs, verdict=lhs >= rhs, shadow_size=us)


def _cover_predecessors(mask: int) -> list[int]:
    # Immediate predecessors in dominance order: lower one element by one
    # position where the slot below is free.  A k-set is in a down-set iff
    # all of these are.
    preds = []
    elems = []
    mm = mask
    while mm:
        low = mm & -mm
        elems.append(low.bit_length())
        mm ^= low
    for e in elems:
        if e == 1:
            continue
        below = 1 << (e - 2)
        if mask & below:
            continue
        preds.append((mask ^ (1 << (e - 1))) | below)
    return preds


def enumerate_shifted_families(n: int, k: int, max_layer: int = SHIFTED_ENUMERATION_GUARD):
    """Yield every shifted k-uniform family on [n], the empty family first.

    Shifted families are exactly the down-sets of the layer under dominance
    order, so the walk branches on one colex-maximal candidate at a time:
    include it (allowed once all its cover predecessors are in) or exclude it
    together with everything above it.  Deterministic order, no duplicates.
    """
    layer_size = binomial(n, k)
    if layer_size > max_layer:
        raise ShapeError(
            f"enumerate_shifted_families: C({n},{k}) = {layer_size} exceeds guard {max_layer}"
        )
    order = list(enumerate_ksets(n, k, order="colex"))
    index_of = {m: i for i, m in enumerate(order)}
    preds = [[index_of[p] for p in _cover_predecessors(m)] for m in order]
    chosen: list[bool] = [False] * layer_size
    out: list[int] = []

    def emit() -> SetFamily:
        return SetFamily(n=n, k=k, members=tuple(sorted(out)))

    def walk(pos: int):
        if pos == len(order):
            yield emit()
            return
        # Exclude order[pos]: every later set dominating it is then also
        # excluded, which the predecessor check enforces for free.
        yield from walk(pos + 1)
        if all(chosen[p] for p in preds[pos]):
            chosen[pos] = True
            out.append(order[pos])
            yield from walk(pos + 1)
            out.pop()
            chosen[pos] = False

    yield from walk(0)
