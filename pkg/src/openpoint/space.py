"""Finite topological spaces as bitmask lattices.

Points are indices 0..n-1; a set of points is one int whose bit i means
"point i is in the set".  A space stores its complete family of open sets,
sorted by bitmask value, which makes space equality a plain tuple
comparison and keeps every set operation a single machine-word op.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator

PointSet = int

MAX_POINTS = 16


class TopologyError(ValueError):
    """Base class for malformed-input errors raised by this package."""


class DuplicateLabel(TopologyError):
    pass


class UnknownLabel(TopologyError):
    pass


class MissingEmptyOrFull(TopologyError):
    pass


class NotClosedUnderUnion(TopologyError):
    def __init__(self, a, b):
        self.pair = (a, b)
        super().__init__(f"union of opens {a} and {b} is not open")


class NotClosedUnderIntersection(TopologyError):
    def __init__(self, a, b):
        self.pair = (a, b)
        super().__init__(f"intersection of opens {a} and {b} is not open")


class EmptySubspace(TopologyError):
    pass


class NotReflexive(TopologyError):
    pass


class NotTransitive(TopologyError):
    pass


class TooLarge(TopologyError):
    pass


def bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return mask.bit_count()


@dataclass(frozen=True, eq=False)
class FiniteSpace:
    """A validated finite topology.

    ``opens`` is the full open-set family as a strictly increasing tuple of
    bitmasks; it always contains 0 (empty set) and ``full`` (all points).
    Instances are immutable and safe to share; two spaces compare equal when
    they have the same point count and the same opens, labels aside.
    """

    name: str
    n: int
    point_labels: tuple[str, ...]
    opens: tuple[int, ...]
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, FiniteSpace):
            return NotImplemented
        return self.n == other.n and self.opens == other.opens

    def __hash__(self) -> int:
        return hash((self.n, self.opens))

    def __repr__(self) -> str:
        return f"FiniteSpace({self.name!r}, n={self.n}, opens={len(self.opens)})"

    def label_set(self, mask: int) -> list[str]:
        return [self.point_labels[i] for i in bits(mask)]

    def mask_of(self, labels: Iterable[str]) -> int:
        index = {lab: i for i, lab in enumerate(self.point_labels)}
        mask = 0
        for lab in labels:
            if lab not in index:
                raise UnknownLabel(f"unknown point label {lab!r}")
            mask |= 1 << index[lab]
        return mask

    def is_open(self, mask: int) -> bool:
        return mask in self._open_set()

    def _open_set(self) -> frozenset[int]:
        got = self._cache.get("open_set")
        if got is None:
            got = frozenset(self.opens)
            self._cache["open_set"] = got
        return got

    def point_closures(self) -> tuple[int, ...]:
        """closure({x}) for every point x, as a tuple indexed by x."""
        got = self._cache.get("point_closures")
        if got is None:
            got = tuple(closure(self, 1 << x) for x in range(self.n))
            self._cache["point_closures"] = got
        return got

    def min_neighborhoods(self) -> tuple[int, ...]:
        """Smallest open set containing x, for every point x."""
        got = self._cache.get("min_nbhd")
        if got is None:
            out = []
            for x in range(self.n):
                nbhd = self.full
                for u in self.opens:
                    if u >> x & 1:
                        nbhd &= u
                out.append(nbhd)
            got = tuple(out)
            self._cache["min_nbhd"] = got
        return got

    def closure_of(self, mask: int) -> int:
        """Additive closure via cached point closures (hot-path variant)."""
        pts = self.point_closures()
        out = 0
        for x in bits(mask):
            out |= pts[x]
        return out


def space_from_masks(name: str, point_labels: Iterable[str], opens: Iterable[int],
                     max_points: int = MAX_POINTS, check_lattice: bool = True) -> FiniteSpace:
    """Build a FiniteSpace from bitmask opens, checking every axiom.

    ``max_points`` defaults to the one-word cap; product constructions lift
    it since they stay index-encoded either way.  ``check_lattice=False``
    skips the quadratic union/intersection scan for families produced by an
    up-set enumeration, which are closed by construction.
    """
    labels = tuple(point_labels)
    n = len(labels)
    if n < 1:
        raise TopologyError("a space needs at least one point")
    if n > max_points:
        raise TooLarge(f"{n} points exceeds the {max_points}-point cap")
    if len(set(labels)) != n:
        raise DuplicateLabel(f"point labels {labels} contain a duplicate")
    full = (1 << n) - 1
    family = sorted(set(opens))
    if family and (family[0] < 0 or family[-1] > full):
        raise TopologyError("an open uses bits outside the point range")
    if 0 not in family or full not in family:
        raise MissingEmptyOrFull("the empty set and the full set must both be open")
    if check_lattice:
        fam_set = set(family)
        for i, a in enumerate(family):
            for b in family[i + 1:]:
                if a | b not in fam_set:
                    raise NotClosedUnderUnion(sorted(bits(a)), sorted(bits(b)))
                if a & b not in fam_set:
                    raise NotClosedUnderIntersection(sorted(bits(a)), sorted(bits(b)))
    return FiniteSpace(name=name, n=n, point_labels=labels, opens=tuple(family))


def validate_topology(point_labels, raw_opens, name: str = "space") -> FiniteSpace:
    """Validate a label-level description and return the canonical space."""
    labels = tuple(point_labels)
    if len(set(labels)) != len(labels):
        raise DuplicateLabel(f"point labels {labels} contain a duplicate")
    index = {lab: i for i, lab in enumerate(labels)}
    masks = []
    for raw in raw_opens:
        mask = 0
        for lab in raw:
            if lab not in index:
                raise UnknownLabel(f"open set {list(raw)} mentions unknown label {lab!r}")
            mask |= 1 << index[lab]
        masks.append(mask)
    return space_from_masks(name, labels, masks)


def closure(space: FiniteSpace, subset: int) -> int:
    """Smallest closed set containing ``subset``.

    Computed as the complement of the largest open inside the complement,
    which is one scan of the lattice since opens are union-closed.
    """
    exterior = 0
    for u in space.opens:
        if u & subset == 0:
            exterior |= u
    return space.full ^ exterior


def interior(space: FiniteSpace, subset: int) -> int:
    """Largest open set contained in ``subset``."""
    inner = 0
    for u in space.opens:
        if u & subset == u:
            inner |= u
    return inner


def is_dense(space: FiniteSpace, subset: int) -> bool:
    return closure(space, subset) == space.full


def minimal_opens(space: FiniteSpace) -> tuple[int, ...]:
    """All inclusion-minimal non-empty opens, in increasing bitmask order.

    These are pairwise disjoint, each carries the indiscrete subspace
    topology, and together they form the unique smallest pi-base.
    """
    got = space._cache.get("minimal_opens")
    if got is not None:
        return got
    candidates = sorted(set(space.min_neighborhoods()), key=lambda m: (popcount(m), m))
    out: list[int] = []
    for cand in candidates:
        if not any(kept & cand == kept for kept in out):
            out.append(cand)
    got = tuple(sorted(out))
    space._cache["minimal_opens"] = got
    return got


def _compress(mask: int, members: list[int]) -> int:
    """Re-index a mask through the sorted point list ``members``."""
    out = 0
    for new, old in enumerate(members):
        if mask >> old & 1:
            out |= 1 << new
    return out


def subspace(space: FiniteSpace, subset: int, name: str | None = None) -> FiniteSpace:
    """The trace topology on ``subset``, re-indexed to points 0..k-1."""
    if subset == 0:
        raise EmptySubspace("cannot take the subspace on the empty set")
    members = sorted(bits(subset))
    traced = {_compress(u & subset, members) for u in space.opens}
    labels = tuple(space.point_labels[i] for i in members)
    return space_from_masks(name or f"{space.name}|sub", labels, traced)


@dataclass(frozen=True)
class Preorder:
    """Specialization preorder: leq[x][y] holds iff x is in closure({y})."""

    n: int
    rows: tuple[int, ...]  # rows[x] = bitmask {y : leq[x][y]}

    def leq(self, x: int, y: int) -> bool:
        return bool(self.rows[x] >> y & 1)


def to_preorder(space: FiniteSpace) -> Preorder:
    pts = space.point_closures()
    rows = []
    for x in range(space.n):
        row = 0
        for y in range(space.n):
            if pts[y] >> x & 1:  # x in closure({y})
                row |= 1 << y
        rows.append(row)
    return Preorder(n=space.n, rows=tuple(rows))


def enumerate_upsets(n: int, succ, cap: int | None = None) -> list[int]:
    """All sets U with x in U implying succ[x] a subset of U, sorted.

    Runs in O(result * n): a depth-first branch on the lowest undecided
    point, forcing successor closure on inclusion and predecessor exclusion
    on rejection.  Raises TooLarge past ``cap`` results.
    """
    pred = [0] * n
    for x in range(n):
        for y in bits(succ[x]):
            pred[y] |= 1 << x
    full = (1 << n) - 1
    out: list[int] = []
    stack = [(0, 0)]
    while stack:
        include, exclude = stack.pop()
        undecided = full & ~(include | exclude)
        if not undecided:
            if cap is not None and len(out) >= cap:
                raise TooLarge(f"more than {cap} up-sets")
            out.append(include)
            continue
        p = (undecided & -undecided).bit_length() - 1
        # include p: its successor closure comes along, unless blocked
        need = succ[p]
        grown = 1 << p
        while True:
            new = (need | grown) & ~grown
            if not new:
                break
            grown |= new
            need = 0
            for q in bits(new):
                need |= succ[q]
        if not (grown & exclude):
            stack.append((include | grown, exclude))
        # exclude p: everything reaching p is excluded too
        stack.append((include, exclude | pred[p] | (1 << p)))
    return sorted(out)


def from_preorder(pre: Preorder, name: str = "space", point_labels=None) -> FiniteSpace:
    """Rebuild the topology whose opens are the up-sets of the preorder."""
    n = pre.n
    for x in range(n):
        if not pre.rows[x] >> x & 1:
            raise NotReflexive(f"point {x} is not related to itself")
    for x in range(n):
        for y in bits(pre.rows[x]):
            if pre.rows[y] & ~pre.rows[x]:
                raise NotTransitive(f"transitivity fails through points {x} <= {y}")
    # x in closure({y})  <=>  every open containing x contains y,
    # so the minimal neighborhood of x is rows[x] and opens are its up-sets.
    opens = enumerate_upsets(n, pre.rows)
    labels = tuple(point_labels) if point_labels else tuple(f"p{i}" for i in range(n))
    return space_from_masks(name, labels, opens)


def is_t0(space: FiniteSpace) -> bool:
    pre = to_preorder(space)
    return all(
        not (pre.leq(x, y) and pre.leq(y, x))
        for x in range(space.n)
        for y in range(x + 1, space.n)
    )


def is_t1(space: FiniteSpace) -> bool:
    pts = space.point_closures()
    return all(pts[x] == 1 << x for x in range(space.n))


# ---------------------------------------------------------------------------
# Space file format: {"name": str, "points": [str,...], "opens": [[str,...],...]}
# ---------------------------------------------------------------------------

def space_to_json(space: FiniteSpace) -> dict:
    def key(mask: int):
        return (popcount(mask), sorted(space.label_set(mask)))

    return {
        "name": space.name,
        "points": list(space.point_labels),
        "opens": [sorted(space.label_set(m)) for m in sorted(space.opens, key=key)],
    }


def space_from_json(obj: dict) -> FiniteSpace:
    try:
        name = obj["name"]
        points = obj["points"]
        opens = obj["opens"]
    except (KeyError, TypeError) as exc:
        raise TopologyError(f"space object is missing field {exc}") from exc
    return validate_topology(points, opens, name=name)


def load_space(path) -> FiniteSpace:
    with open(path, "r", encoding="utf-8") as fh:
        return space_from_json(json.load(fh))


def save_space(space: FiniteSpace, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(space_to_json(space), fh)
        fh.write("\n")
