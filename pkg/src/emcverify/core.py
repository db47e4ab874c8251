"""Ground types: parameters, bit-mask k-sets, set families, and family file I/O.

Conventions used everywhere:
  * elements are labeled 1..n and element e sits on bit e-1 of a mask,
  * a family stores its member masks sorted increasingly (mask order on
    k-sets of a common ground set coincides with colex order),
  * all sizes and counts are exact Python integers.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from itertools import combinations, islice
from typing import Iterable, Iterator, Sequence


class ShapeError(ValueError):
    """A parameter or family violates a structural precondition."""


class FamilyFormatError(ValueError):
    """A family file is malformed; message carries a line number."""


def binomial(a: int, b: int) -> int:
    """Exact binomial coefficient with C(a, b) = 0 for b < 0 or b > a."""
    if a < 0:
        raise ShapeError(f"binomial: negative upper index {a}")
    if b < 0 or b > a:
        return 0
    return math.comb(a, b)


def mask_from_elements(elements: Iterable[int]) -> int:
    m = 0
    for e in elements:
        if e < 1:
            raise ShapeError(f"element {e} out of range (labels start at 1)")
        b = 1 << (e - 1)
        if m & b:
            raise ShapeError(f"repeated element {e}")
        m |= b
    return m


def elements_from_mask(mask: int) -> tuple[int, ...]:
    out = []
    e = 1
    while mask:
        if mask & 1:
            out.append(e)
        mask >>= 1
        e += 1
    return tuple(out)


def interval_mask(lo: int, hi: int) -> int:
    """Mask of the label interval [lo, hi]; empty when hi < lo."""
    if hi < lo:
        return 0
    return ((1 << hi) - 1) ^ ((1 << (lo - 1)) - 1)


@dataclass(frozen=True)
class Params:
    """Problem parameters: ground size n, uniformity k, matching parameter s.

    Derived quantities: the reduced ground X = [s+2, n] of size
    n' = n - s - 1, and the matching length t = floor(n' / k).
    """

    n: int
    k: int
    s: int

    def __post_init__(self):
        if self.k < 1:
            raise ShapeError(f"k must be >= 1, got {self.k}")
        if self.n < self.k:
            raise ShapeError(f"need n >= k, got n={self.n} k={self.k}")
        if self.s < 0:
            raise ShapeError(f"s must be >= 0, got {self.s}")

    @property
    def n_prime(self) -> int:
        return self.n - self.s - 1

    @property
    def t(self) -> int:
        if self.n_prime < 0:
            raise ShapeError(f"n={self.n} too small for s={self.s}")
        return self.n_prime // self.k

    @property
    def x_first(self) -> int:
        return self.s + 2

    @property
    def x_mask(self) -> int:
        return interval_mask(self.s + 2, self.n)

    def x_elements(self) -> tuple[int, ...]:
        return tuple(range(self.s + 2, self.n + 1))


def scaled_params(s: int, k: int) -> Params:
    # n = ceil(3e(s+1)k); the float product carries ~1e-9 relative slack,
    # far below the integer spacing at every s this is used for.
    n = math.ceil(3 * math.e * (s + 1) * k)
    return Params(n=n, k=k, s=s)


@dataclass(frozen=True)
class SetFamily:
    """A family of k-element subsets of [n], member masks sorted increasingly."""

    n: int
    k: int
    members: tuple[int, ...]

    def __post_init__(self):
        if self.k < 0 or self.n < 0:
            raise ShapeError(f"bad family shape n={self.n} k={self.k}")
        full = (1 << self.n) - 1
        prev = -1
        for m in self.members:
            if m <= prev:
                raise ShapeError("family members must be strictly increasing masks")
            if m & ~full:
                raise ShapeError(f"member {elements_from_mask(m)} exceeds ground [,{self.n}]")
            if m.bit_count() != self.k:
                raise ShapeError(
                    f"member {elements_from_mask(m)} is not {self.k}-uniform")
            prev = m

    @classmethod
    def from_masks(cls, n: int, k: int, masks: Iterable[int]) -> "SetFamily":
        return cls(n=n, k=k, members=tuple(sorted(set(masks))))

    @classmethod
    def from_sets(cls, n: int, k: int, sets: Iterable[Iterable[int]]) -> "SetFamily":
        return cls.from_masks(n, k, (mask_from_elements(s) for s in sets))

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, mask: int) -> bool:
        return mask in set(self.members)

    def as_sets(self) -> list[tuple[int, ...]]:
        return [elements_from_mask(m) for m in self.members]


# A cross-dependence instance is an (s+1)-tuple of same-shape families.
FamilyTuple = tuple[SetFamily, ...]


def validate_family_tuple(families: Sequence[SetFamily], s: int | None = None) -> None:
    if not families:
        raise ShapeError("empty family tuple")
    n, k = families[0].n, families[0].k
    for f in families:
        if (f.n, f.k) != (n, k):
            raise ShapeError(f"mixed shapes in tuple: ({f.n},{f.k}) vs ({n},{k})")
    if s is not None and len(families) != s + 1:
        raise ShapeError(f"tuple has {len(families)} families, expected s+1={s + 1}")


def _colex_masks(n: int, k: int) -> Iterator[int]:
    if k == 0:
        yield 0
        return
    if k > n:
        return
    for top in range(k, n + 1):
        bit = 1 << (top - 1)
        for rest in _colex_masks(top - 1, k - 1):
            yield rest | bit


def enumerate_ksets(n: int, k: int, order: str = "colex") -> Iterator[int]:
    """Stream all k-subsets of [n] as masks, in colex or lex order."""
    if k < 0 or n < 0:
        raise ShapeError(f"bad layer n={n} k={k}")
    if order == "colex":
        yield from _colex_masks(n, k)
    elif order == "lex":
        for c in combinations(range(1, n + 1), k):
            yield mask_from_elements(c)
    else:
        raise ShapeError(f"unknown order {order!r}")


def lex_initial_family(n: int, k: int, m: int, order: str = "lex") -> SetFamily:
    """The first m k-sets of [n] in the given order."""
    total = binomial(n, k)
    if not 0 <= m <= total:
        raise ShapeError(f"family size {m} outside [0, C({n},{k})={total}]")
    masks = tuple(islice(enumerate_ksets(n, k, order), m))
    # both orders enumerate without repeats, so no dedup
    return SetFamily(n=n, k=k, members=tuple(sorted(masks)))


# ---------------------------------------------------------------------------
# family files
#
# Text format: first non-comment line "n k", then one member per line as
# ascending space-separated labels; '#' starts a comment.  JSON alternative:
# {"n": ..., "k": ..., "sets": [[...], ...]}.

def parse_family_text(text: str) -> SetFamily:
    n = k = None
    masks = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            values = [int(p) for p in parts]
        except ValueError:
            raise FamilyFormatError(f"line {lineno}: non-integer token in {raw!r}")
        if n is None:
            if len(values) != 2:
                raise FamilyFormatError(
                    f"line {lineno}: header must be 'n k', got {raw!r}")
            n, k = values
            if k < 0 or n < 0 or n < k:
                raise FamilyFormatError(f"line {lineno}: bad header n={n} k={k}")
            continue
        if len(values) != k:
            raise FamilyFormatError(
                f"line {lineno}: expected {k} elements, got {len(values)}")
        if any(values[i] >= values[i + 1] for i in range(len(values) - 1)):
            raise FamilyFormatError(f"line {lineno}: elements must be ascending")
        if values and (values[0] < 1 or values[-1] > n):
            raise FamilyFormatError(f"line {lineno}: element outside [1, {n}]")
        m = mask_from_elements(values)
        if m in seen:
            raise FamilyFormatError(f"line {lineno}: duplicate member")
        seen.add(m)
        masks.append(m)
    if n is None:
        raise FamilyFormatError("line 1: missing 'n k' header")
    return SetFamily.from_masks(n, k, masks)


def family_to_text(fam: SetFamily) -> str:
    lines = [f"{fam.n} {fam.k}"]
    for m in fam.members:
        lines.append(" ".join(str(e) for e in elements_from_mask(m)))
    return "\n".join(lines) + "\n"


def family_to_json(fam: SetFamily) -> dict:
    return {"n": fam.n, "k": fam.k, "sets": [list(s) for s in fam.as_sets()]}


def family_from_json(obj: dict) -> SetFamily:
    try:
        n, k, sets = obj["n"], obj["k"], obj["sets"]
    except (KeyError, TypeError):
        raise FamilyFormatError("JSON family needs keys 'n', 'k', 'sets'")
    if not isinstance(n, int) or not isinstance(k, int) or not isinstance(sets, list):
        raise FamilyFormatError("JSON family: 'n'/'k' must be ints, 'sets' a list")
    try:
        return SetFamily.from_sets(n, k, sets)
    except ShapeError as exc:
        raise FamilyFormatError(str(exc))


def read_family(path: str) -> SetFamily:
    """Load a family from a .json or text family file."""
    with open(path) as fh:
        text = fh.read()
    if path.endswith(".json"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise FamilyFormatError(f"line {exc.lineno}: invalid JSON ({exc.msg})")
        return family_from_json(obj)
    return parse_family_text(text)


def write_family(path: str, fam: SetFamily) -> None:
    with open(path, "w") as fh:
        if path.endswith(".json"):
            json.dump(family_to_json(fam), fh, sort_keys=True)
            fh.write("\n")
        else:
            fh.write(family_to_text(fam))
