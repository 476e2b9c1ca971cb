"""Cardinal invariants of finite spaces: d, delta, gd, pi, w, t.

Every invariant comes in two routes: a fast structural formula and a
brute-force oracle that knows nothing about the formula.  The test suite
equates the two on exhaustively enumerated corpora; nothing in this module
assumes the inequality chain it is used to verify.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .space import (
    FiniteSpace,
    closure,
    is_dense,
    minimal_opens,
    popcount,
    subspace,
)


def _subsets_by_size(full: int):
    masks = sorted(range(full + 1), key=popcount)
    return masks


def density(space: FiniteSpace) -> int:
    """Least size of a dense subset = number of minimal opens.

    A dense set must hit every minimal open and those are pairwise
    disjoint; one point in each is already dense.
    """
    return len(minimal_opens(space))


def density_brute(space: FiniteSpace) -> int:
    for mask in _subsets_by_size(space.full):
        if closure(space, mask) == space.full:
            return popcount(mask)
    raise AssertionError("the full set is always dense")


def pi_weight(space: FiniteSpace) -> int:
    """Least size of a pi-base = number of minimal opens."""
    return len(minimal_opens(space))


def _is_pi_base(space: FiniteSpace, family) -> bool:
    return all(
        any(b and u & b == b for b in family)
        for u in space.opens
        if u
    )


def pi_weight_brute(space: FiniteSpace) -> int:
    opens = [u for u in space.opens if u]
    for k in range(1, len(opens) + 1):
        for family in combinations(opens, k):
            if _is_pi_base(space, family):
                return k
    raise AssertionError("the family of all non-empty opens is a pi-base")


def weight(space: FiniteSpace) -> int:
    """Least size of a base = number of distinct minimal neighborhoods."""
    return len(set(space.min_neighborhoods()))


def _is_base(space: FiniteSpace, family) -> bool:
    for u in space.opens:
        cover = 0
        for b in family:
            if u & b == b:
                cover |= b
        if cover != u:
            return False
    return True


def weight_brute(space: FiniteSpace) -> int:
    opens = [u for u in space.opens if u]
    for k in range(1, len(opens) + 1):
        for family in combinations(opens, k):
            if _is_base(space, family):
                return k
    raise AssertionError("the family of all non-empty opens is a base")


def _least_dense_within(space: FiniteSpace, dense_set: int) -> int:
    """min |D| over D inside ``dense_set`` with closure(D) = X.

    Valid for dense input only: such a D must pick at least one point in
    each (pairwise disjoint) minimal open, and one per open suffices.
    """
    picks = 0
    for m in minimal_opens(space):
        inside = m & dense_set
        if not inside:
            raise ValueError("input set is not dense")
        picks |= inside & -inside
    if closure(space, picks) != space.full:
        raise AssertionError("one point per minimal open is dense")
    return popcount(picks)


def delta(space: FiniteSpace) -> int:
    """sup of densities of dense subsets, pruned route.

    Uses the fact that a subset of a dense set A that is dense in A is
    dense in the whole space, so subspace topologies never get built here.
    """
    best = 0
    for a in range(1, space.full + 1):
        if is_dense(space, a):
            best = max(best, _least_dense_within(space, a))
    return best


def delta_oracle(space: FiniteSpace) -> int:
    """Unpruned route: build every dense subspace and brute-force d there."""
    best = 0
    for a in range(1, space.full + 1):
        if is_dense(space, a):
            best = max(best, density_brute(subspace(space, a)))
    return best


def tightness(space: FiniteSpace) -> int:
    """max over (x, Y) with x in cl(Y) of the least |Z|, Z in Y, x in cl(Z)."""
    worst = 0
    for x in range(space.n):
        for y_set in range(1, space.full + 1):
            if not closure(space, y_set) >> x & 1:
                continue
            need = None
            for z in _subsets_by_size(space.full):
                if z and z & y_set == z and closure(space, z) >> x & 1:
                    need = popcount(z)
                    break
            assert need is not None
            worst = max(worst, need)
    return worst


@dataclass(frozen=True)
class InvariantReport:
    d: int
    delta: int
    gd: int
    pi: int
    w: int
    t: int

    @property
    def chain_ok(self) -> bool:
        """1 <= d <= delta <= gd <= pi <= w, with w <= 2^n - 2 checked by caller."""
        return 1 <= self.d <= self.delta <= self.gd <= self.pi <= self.w

    @property
    def collapsed(self) -> bool:
        return self.d == self.delta == self.gd == self.pi

    def as_record(self, space: FiniteSpace) -> dict:
        return {
            "space": space.name,
            "n": space.n,
            "d": self.d,
            "delta": self.delta,
            "gd": self.gd,
            "pi": self.pi,
            "w": self.w,
            "t": self.t,
        }


def invariant_report(space: FiniteSpace, gd: int | None = None) -> InvariantReport:
    """Compute the full chain; gd comes from the game solver unless given."""
    if gd is None:
        from .game import GameVariant, solve_game

        gd = solve_game(space, GameVariant.RESTRICTED).gd
    return InvariantReport(
        d=density(space),
        delta=delta(space),
        gd=gd,
        pi=pi_weight(space),
        w=weight(space),
        t=tightness(space),
    )
