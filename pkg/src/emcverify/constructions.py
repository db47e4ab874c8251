"""The two competing extremal families and the gap-set bound evaluators.

Kind "A" is every k-set of [n] that meets the initial segment [s]; kind "B"
is every k-set packed inside [(s+1)k - 1].  Both have matching number s, and
which one is larger depends on how n compares to roughly (k+1)(s+1).

The gap sets are arithmetic progressions used to certify that families made
of far-apart elements are small: the dense one has step 3(s+1)/4 (only
defined when that is an integer), the sparse one has step 3(s+1).
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .core import Params, SetFamily, ShapeError, binomial, mask_from_elements

_MATERIALIZATION_CAP = 50_000_000


def _require_kind(kind: str) -> str:
    if kind not in ("A", "B"):
        raise ShapeError(f"extremal kind must be 'A' or 'B', got {kind!r}")
    return kind


def size_extremal(params: Params, kind: str) -> int:
    """Exact size: |A| = C(n,k) - C(n-s,k), |B| = C((s+1)k - 1, k)."""
    _require_kind(kind)
    n, k, s = params.n, params.k, params.s
    if kind == "A":
        # s >= n leaves nothing outside the prefix, so the subtrahend is 0
        return binomial(n, k) - binomial(max(n - s, 0), k)
    if n < (s + 1) * k - 1:
        raise ShapeError(f"kind B needs n >= (s+1)k - 1 = {(s + 1) * k - 1}, got n={n}")
    return binomial((s + 1) * k - 1, k)


def size_A_layered(params: Params) -> int:
    """Layered count of kind A: sum over i in [s] of C(n - i, k - 1).

    Counting members by their smallest element inside [s] gives the same
    total as the inclusion-exclusion form in size_extremal.
    """
    n, k, s = params.n, params.k, params.s
    if n < s + k and s > 0:
        raise ShapeError(f"size_A_layered: need n >= s + k, got n={n}, s={s}, k={k}")
    return sum(binomial(n - i, k - 1) for i in range(1, s + 1))


def build_extremal(params: Params, kind: str) -> SetFamily:
    """Materialize family A or B on ground set [n]."""
    _require_kind(kind)
    n, k, s = params.n, params.k, params.s
    size = size_extremal(params, kind)
    if size > _MATERIALIZATION_CAP:
        raise ShapeError(
            f"build_extremal: family has {size} members, cap is {_MATERIALIZATION_CAP}"
        )
    if kind == "A":
        members = [
            mask_from_elements(combo)
            for combo in itertools.combinations(range(1, n + 1), k)
            if combo[0] <= s  # combos ascend, so meeting [s] means the minimum does
        ]
    else:
        top = (s + 1) * k - 1
        members = [
            mask_from_elements(combo)
            for combo in itertools.combinations(range(1, top + 1), k)
        ]
    return SetFamily.from_masks(n, k, members)


def _dense_step(s: int) -> int:
    # Step s' = 3(s+1)/4; refuse non-integral values instead of rounding,
    # since every dense-gap bound downstream assumes the exact step.
    num = 3 * (s + 1)
    if num % 4 != 0:
        raise ShapeError(
            f"dense gap set needs 3(s+1)/4 integral; s={s} gives {num}/4 — "
            "adjust s to satisfy s = 3 (mod 4)"
        )
    return num // 4


def build_gap_set(params: Params, variant: str) -> int:
    """Arithmetic-progression k-set as a bitmask.

    dense: {s', 2s', ..., ks'} with s' = 3(s+1)/4 (integrality required);
    sparse: {3(s+1), 6(s+1), ..., 3k(s+1)}, which needs 3k(s+1) <= n.
    """
    n, k, s = params.n, params.k, params.s
    if variant == "dense":
        step = _dense_step(s)
    elif variant == "sparse":
        step = 3 * (s + 1)
    else:
        raise ShapeError(f"gap-set variant must be 'dense' or 'sparse', got {variant!r}")
    top = step * k
    if top > n:
        raise ShapeError(f"gap set {variant}: largest element {top} exceeds n={n}")
    return mask_from_elements([step * p for p in range(1, k + 1)])


def lemma3_bound(params: Params) -> tuple[int, tuple[Fraction, ...]]:
    """Closed-form member bound for families avoiding dominance over the dense gap set.

    Returns (sum over p in [k] of C(s'p - 1, p) * C(n - s'p + 1, k - p),
    consecutive term ratios term_{p+1}/term_p) — the ratios feed the audit
    that each is at most e*k*s'/n.
    """
    n, k, s = params.n, params.k, params.s
    step = _dense_step(s)
    if n <= k * step:
        raise ShapeError(f"lemma3_bound: need n > k*s' = {k * step}, got n={n}")
    terms = [
        binomial(step * p - 1, p) * binomial(n - step * p + 1, k - p)
        for p in range(1, k + 1)
    ]
    ratios = tuple(
        Fraction(terms[p + 1], terms[p]) for p in range(len(terms) - 1) if terms[p] > 0
    )
    return sum(terms), ratios
