"""Product topologies and the fan-tightness condition on factor families.

A product of finite spaces is materialized as a FiniteSpace whose points
are mixed-radix tuples and whose opens are all up-sets of the product
specialization preorder (equivalently: all unions of open boxes).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations, islice, product as iter_product

from .invariants import pi_weight
from .space import (
    FiniteSpace,
    TooLarge,
    bits,
    enumerate_upsets,
    minimal_opens,
    space_from_masks,
    subspace,
)

POINTS_CAP = 4096
OPENS_CAP = 1 << 17
SUBSET_LOOP_CAP = 1 << 12   # exhaustive A-loops beyond this are skipped
FAMILY_TRY_CAP = 64


@dataclass(frozen=True, eq=False)
class ProductSpace:
    factors: tuple[FiniteSpace, ...]
    space: FiniteSpace
    sizes: tuple[int, ...]

    def encode(self, coords) -> int:
        return _encode(self.sizes, coords)

    def decode(self, idx: int) -> tuple[int, ...]:
        return _decode(self.sizes, idx)

    def box_mask(self, factor_masks) -> int:
        """Product-point mask of the open box with the given factor masks."""
        return _box(self.sizes, factor_masks)

    def proj_mask(self, mask: int, axis: int) -> int:
        out = 0
        for idx in bits(mask):
            out |= 1 << self.decode(idx)[axis]
        return out

    def point_label(self, coords) -> str:
        return "(" + ",".join(f.point_labels[c] for f, c in zip(self.factors, coords)) + ")"


def _decode(sizes, idx: int) -> tuple[int, ...]:
    out = []
    for size in reversed(sizes):
        out.append(idx % size)
        idx //= size
    return tuple(reversed(out))


def _encode(sizes, coords) -> int:
    idx = 0
    for size, c in zip(sizes, coords):
        idx = idx * size + c
    return idx


def _box(sizes, factor_masks) -> int:
    mask = 0
    choices = [list(bits(m)) for m in factor_masks]
    for coords in iter_product(*choices):
        mask |= 1 << _encode(sizes, coords)
    return mask


def _product_succ(factors, sizes):
    """Minimal product neighborhood of every product point, as succ rows."""
    nbhds = [f.min_neighborhoods() for f in factors]
    total = 1
    for s in sizes:
        total *= s
    rows = []
    for idx in range(total):
        coords = _decode(sizes, idx)
        rows.append(_box(sizes, [nbhds[i][c] for i, c in enumerate(coords)]))
    return rows


def product(factors, name: str | None = None) -> ProductSpace:
    """Materialize the product topology of 1..k finite spaces."""
    factors = tuple(factors)
    if not factors:
        raise ValueError("a product needs at least one factor")
    sizes = tuple(f.n for f in factors)
    total = 1
    for s in sizes:
        total *= s
    if total > POINTS_CAP:
        raise TooLarge(f"product would have {total} points (cap {POINTS_CAP})")
    rows = _product_succ(factors, sizes)
    opens = enumerate_upsets(total, tuple(rows), cap=OPENS_CAP)
    labels = [
        "(" + ",".join(f.point_labels[c] for f, c in zip(factors, _decode(sizes, i))) + ")"
        for i in range(total)
    ]
    pname = name or "x".join(f.name for f in factors)
    space = space_from_masks(
        pname, labels, opens, max_points=POINTS_CAP,
        check_lattice=len(opens) <= 1024,  # up-sets are lattice-closed by construction
    )
    return ProductSpace(factors=factors, space=space, sizes=sizes)


def minimal_open_boxes(prod: ProductSpace) -> tuple[int, ...]:
    """Boxes built from factor minimal opens (the claimed minimal opens)."""
    per_factor = [minimal_opens(f) for f in prod.factors]
    return tuple(sorted(prod.box_mask(combo) for combo in iter_product(*per_factor)))


def minimal_opens_via_preorder(factors) -> tuple[int, ...]:
    """Minimal opens of the product computed from the specialization preorder.

    Works without materializing the (possibly huge) open-set lattice, so it
    serves as the independent route for large products.
    """
    factors = tuple(factors)
    sizes = tuple(f.n for f in factors)
    rows = _product_succ(factors, sizes)
    candidates = sorted(set(rows), key=lambda m: (m.bit_count(), m))
    out = []
    for cand in candidates:
        if not any(kept & cand == kept for kept in out):
            out.append(cand)
    return tuple(sorted(out))


@dataclass(frozen=True)
class SufficientConditionResult:
    holds: bool
    kappa: int
    designated: tuple[int, ...]
    sigma_ok: bool

    def __bool__(self) -> bool:
        return self.holds


def _shrinks_below(space: FiniteSpace, kappa: int) -> bool:
    """Every non-empty open contains a non-empty open of pi-weight <= kappa."""
    for v in space.opens:
        if not v:
            continue
        if not any(
            w and v & w == w and pi_weight(subspace(space, w)) <= kappa
            for w in space.opens
        ):
            return False
    return True


def sufficient_condition_check(factors, kappa: int) -> SufficientConditionResult:
    """Cheap criterion implying the fan-tightness condition.

    Factors of pi-weight above kappa must shrink below it inside every open
    (those are the designated ones); the rest must have pi-weight <= kappa,
    and there may be at most kappa factors.
    """
    factors = tuple(factors)
    sigma_ok = len(factors) <= kappa
    designated = []
    ok = sigma_ok
    for i, f in enumerate(factors):
        if pi_weight(f) <= kappa:
            continue
        if _shrinks_below(f, kappa):
            designated.append(i)
        else:
            ok = False
    return SufficientConditionResult(
        holds=ok, kappa=kappa, designated=tuple(designated), sigma_ok=sigma_ok
    )


class FanStatus(Enum):
    HOLDS = "holds"
    HOLDS_VIA_SUFFICIENT_CONDITION = "holds-via-sufficient-condition"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class FanTightnessVerdict:
    kappa: int
    status: FanStatus
    witness: dict
    unknown_cells: tuple
    reading: str

    @property
    def holds(self) -> bool:
        return self.status is not FanStatus.UNKNOWN


def _table_dp(n_points: int, per_point) -> list[int]:
    """tab[mask] = OR of per_point[x] over x in mask, for every subset."""
    tab = [0] * (1 << n_points)
    for mask in range(1, 1 << n_points):
        low = mask & -mask
        tab[mask] = tab[mask ^ low] | per_point[low.bit_length() - 1]
    return tab


def _constrained_closures(sub, family, cl_tab, proj_tabs, factor_cl, reading):
    """Closures of every pick-set satisfying the per-member density constraint.

    A set A qualifies when, for each family member V and each axis, the
    factor closure of the projected A-and-V slice equals that of V itself.
    Returns the deduplicated closures relevant to the conclusion check.
    """
    axes = range(len(sub.factors))
    targets = [
        tuple(factor_cl[ax][proj_tabs[ax][v]] for ax in axes)
        for v in family
    ]
    out = set()
    for a in range(1 << sub.space.n):
        ok = True
        union_slices = 0
        for v, want in zip(family, targets):
            sl = a & v
            union_slices |= sl
            for ax in axes:
                if factor_cl[ax][proj_tabs[ax][sl]] != want[ax]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.add(cl_tab[a] if reading == "a" else cl_tab[union_slices])
    return sorted(out)


def fan_tightness_check(factors, kappa: int, candidate_policy: str = "boxes",
                        reading: str = "a") -> FanTightnessVerdict:
    """Search for witnesses to the fan-tightness condition.

    For every non-empty set of factor indices and every non-empty open U of
    that subproduct, look for a family of up to kappa candidate opens such
    that any pick-set dense-in-projection on every member forces a proper
    shrink of some projection of U minus its closure.  The search is sound
    for a positive answer and deliberately bounded: cells it cannot settle
    make the verdict Unknown, never a refutation.

    ``reading`` selects what gets closed in the conclusion: the whole
    pick-set ("a", default) or the union of its family slices ("union").
    """
    factors = tuple(factors)
    if kappa < 1:
        raise ValueError("kappa must be at least 1")
    if candidate_policy not in ("boxes", "all"):
        raise ValueError("candidate_policy must be 'boxes' or 'all'")
    if reading not in ("a", "union"):
        raise ValueError("reading must be 'a' or 'union'")
    total = 1
    for f in factors:
        total *= f.n
    cap = 512 if candidate_policy == "all" else POINTS_CAP
    if total > cap:
        raise TooLarge(f"{total} product points exceed the {candidate_policy} cap of {cap}")

    witness: dict = {}
    unknown: list = []
    k = len(factors)
    for gamma_bits in range(1, 1 << k):
        gamma = tuple(i for i in range(k) if gamma_bits >> i & 1)
        sub = product([factors[g] for g in gamma])
        pts = sub.space.n
        opens_nonempty = [u for u in sub.space.opens if u]
        if (1 << pts) > SUBSET_LOOP_CAP:
            unknown.extend((gamma, u) for u in opens_nonempty)
            continue
        if candidate_policy == "boxes":
            pool = list(minimal_open_boxes(sub))
        else:
            pool = opens_nonempty
        fam_size = min(kappa, len(pool))
        families = list(islice(combinations(pool, fam_size), FAMILY_TRY_CAP))
        # larger families only strengthen the hypothesis, so try them first
        families.sort(key=len, reverse=True)
        clpt = sub.space.point_closures()
        cl_tab = _table_dp(pts, clpt)
        proj_pt = [
            [1 << sub.decode(i)[ax] for i in range(pts)]
            for ax in range(len(gamma))
        ]
        proj_tabs = [_table_dp(pts, proj_pt[ax]) for ax in range(len(gamma))]
        factor_cl = [
            _table_dp(factors[g].n, factors[g].point_closures())
            for g in gamma
        ]
        closure_sets = [
            _constrained_closures(sub, fam, cl_tab, proj_tabs, factor_cl, reading)
            for fam in families
        ]
        for u in opens_nonempty:
            found = None
            for fam, dset in zip(families, closure_sets):
                if all(
                    any(
                        proj_tabs[ax][u & ~d] != proj_tabs[ax][u]
                        for ax in range(len(gamma))
                    )
                    for d in dset
                ):
                    found = fam
                    break
            if found is not None:
                witness[(gamma, u)] = found
            else:
                unknown.append((gamma, u))

    if not unknown:
        status = FanStatus.HOLDS
    elif sufficient_condition_check(factors, kappa):
        status = FanStatus.HOLDS_VIA_SUFFICIENT_CONDITION
    else:
        status = FanStatus.UNKNOWN
    return FanTightnessVerdict(
        kappa=kappa,
        status=status,
        witness=witness,
        unknown_cells=tuple(unknown),
        reading=reading,
    )
