"""Named strategy constructions for the open-point game.

Everything here produces a policy consumable by the game engine: either a
plain callable (closed, stage) -> open mask, or a stateful chooser object.
The product and aggregate choosers run coordinate games in parallel and
carry their bookkeeping in immutable states, so evaluating them against
every picker line stays a pure traversal.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iter_product
from typing import NamedTuple

from .game import GameVariant, InvariantViolation, as_chooser, value_function
from .products import ProductSpace, product
from .space import FiniteSpace, TopologyError, bits, is_dense, minimal_opens


class NotDense(TopologyError):
    pass


class LedgerOrderViolation(AssertionError):
    pass


@dataclass(frozen=True)
class OrderedPiBase:
    """A well-ordered pi-base: every non-empty open contains some member."""

    space: FiniteSpace
    members: tuple[int, ...]

    def __post_init__(self):
        for m in self.members:
            if not m or not self.space.is_open(m):
                raise ValueError(f"base member {m:b} is empty or not open")
        for u in self.space.opens:
            if u and not any(u & m == m for m in self.members):
                raise ValueError(
                    f"open {sorted(self.space.label_set(u))} contains no base member"
                )

    def __len__(self) -> int:
        return len(self.members)


def minimal_pi_base(space: FiniteSpace) -> OrderedPiBase:
    return OrderedPiBase(space, minimal_opens(space))


def pi_base_chooser(space: FiniteSpace, base: OrderedPiBase | None = None):
    """Play the least-index base member disjoint from the current closure.

    A true pi-base always has such a member at a non-terminal state, and no
    member is played twice, so play ends within len(base) stages.
    """
    base = base or minimal_pi_base(space)

    def choose(closed, stage):
        for m in base.members:
            if not m & closed:
                return m
        raise InvariantViolation(
            "no base member avoids the closure; the base cannot be a pi-base"
        )

    return choose


def dense_point_picker(space: FiniteSpace, dense_set: int):
    """Pick the least-index offered point inside a fixed dense set."""
    if not is_dense(space, dense_set):
        raise NotDense(
            f"{sorted(space.label_set(dense_set))} is not dense in {space.name}"
        )

    def pick(closed, offered, stage, rng=None):
        inside = offered & dense_set
        if not inside:
            raise InvariantViolation("a dense set meets every non-empty open")
        return inside & -inside

    return pick


def table_chooser(table):
    """Play the solver's best move; worst case equals gd of the space."""

    def choose(closed, stage):
        move = table.best_move.get(closed)
        if move is None:
            raise InvariantViolation("closed state outside the strategy table")
        return move

    return choose


def optimal_chooser(space: FiniteSpace, variant: GameVariant = GameVariant.RESTRICTED):
    """Best-move policy defined at every closed state, not just table states.

    Sub-games inside product strategies reach states the plain solver never
    visits, so the value function is evaluated lazily on demand.
    """
    value = value_function(space, variant)
    clpt = space.point_closures()
    mins = minimal_opens(space)

    def choose(closed, stage):
        best_val, best_mv = None, None
        for m in mins:
            if m & closed:
                continue
            branch = max(value(closed | clpt[x]) for x in bits(m))
            if best_val is None or branch < best_val:
                best_val, best_mv = branch, m
        if best_mv is None:
            raise InvariantViolation("no disjoint minimal open at a non-terminal state")
        return best_mv

    return choose


# ---------------------------------------------------------------------------
# Two-factor product strategy: pi-base on X times a strategy on Y
# ---------------------------------------------------------------------------


class ProductChooser:
    """Run len(base) parallel Y-games, one per base member of X.

    Sub-game i offers base[i] x V with V from the Y-strategy fed by the
    Y-projections of the points picked inside sub-game i; a sub-game is
    finished once those projections are dense in Y.  The cursor round-robins
    over unfinished sub-games; when every sub-game is finished the picks hit
    every box base[i] x V, so the product game is already over.
    """

    def __init__(self, prod: ProductSpace, base: OrderedPiBase, sub_y,
                 variant: GameVariant = GameVariant.RESTRICTED):
        if len(prod.factors) != 2:
            raise ValueError("product strategy wants exactly two factors")
        self.prod = prod
        self.base = base
        self.sub = as_chooser(sub_y)
        self.variant = variant
        self.y_full = prod.factors[1].full
        self.y_clpt = prod.factors[1].point_closures()

    def initial_state(self):
        subgames = tuple((0, self.sub.initial_state()) for _ in self.base.members)
        return (0, subgames)

    def _current(self, state):
        cursor, subgames = state
        for step in range(len(subgames)):
            idx = (cursor + step) % len(subgames)
            if subgames[idx][0] != self.y_full:
                return idx
        return None

    def choose(self, closed, state):
        idx = self._current(state)
        if idx is None:
            # unreachable for a true pi-base: all sub-games done means dense
            if self.variant is GameVariant.FREE:
                cursor = state[0] % len(self.base.members)
                return self.prod.box_mask([self.base.members[cursor], self.y_full])
            raise InvariantViolation("all sub-games finished before the game ended")
        y_closed, sub_state = state[1][idx]
        v = self.sub.choose(y_closed, sub_state)
        return self.prod.box_mask([self.base.members[idx], v])

    def observe(self, state, closed, move, picks):
        idx = self._current(state)
        cursor, subgames = state
        if idx is None:
            return ((cursor + 1) % len(subgames), subgames)
        y_closed, sub_state = subgames[idx]
        v = self.prod.proj_mask(move, 1)
        y_picks = self.prod.proj_mask(picks, 1)
        grown = y_closed
        for y in bits(y_picks):
            grown |= self.y_clpt[y]
        sub_state = self.sub.observe(sub_state, y_closed, v, y_picks)
        subgames = subgames[:idx] + ((grown, sub_state),) + subgames[idx + 1:]
        return ((idx + 1) % len(subgames), subgames)


def product_chooser(x: FiniteSpace, y: FiniteSpace, base_x: OrderedPiBase | None = None,
                    sub_y=None, prod: ProductSpace | None = None,
                    variant: GameVariant = GameVariant.RESTRICTED) -> ProductChooser:
    prod = prod or product([x, y])
    base_x = base_x or minimal_pi_base(x)
    sub_y = sub_y if sub_y is not None else optimal_chooser(y, variant)
    return ProductChooser(prod, base_x, sub_y, variant)


# ---------------------------------------------------------------------------
# Aggregate strategy over a family of spaces, with a phase ledger
# ---------------------------------------------------------------------------


class LedgerEntry(NamedTuple):
    stage: int
    alpha: int
    beta: int
    eta: int
    epsilon: int


@dataclass(frozen=True)
class PhaseLedger:
    entries: tuple[LedgerEntry, ...]

    def check_increasing(self) -> None:
        prev = None
        for e in self.entries:
            key = (e.alpha, e.beta, e.eta, e.epsilon)
            if prev is not None and key <= prev:
                raise LedgerOrderViolation(f"ledger not increasing at stage {e.stage}")
            prev = key

    def records(self):
        for e in self.entries:
            yield {
                "stage": e.stage,
                "alpha": e.alpha,
                "beta": e.beta,
                "eta": e.eta,
                "epsilon": e.epsilon,
            }


class AggState(NamedTuple):
    picks: int
    phase: int
    substates: tuple
    ledger: tuple


class Plan(NamedTuple):
    phase: int
    gamma: tuple
    active: tuple
    closeds: dict
    parts: tuple
    move: int
    beta: int
    eta: int


class AggregateChooser:
    """Phase-decomposed strategy on a finite product of spaces.

    Phase alpha targets density of the picks projected to the alpha-th
    index set.  While some targeted coordinate is not yet dense, the
    per-coordinate strategies step jointly on an open box (beta phase;
    finished coordinates are skipped and get minimal-open filler parts, the
    finite form of relabeling away void innings).  Once every targeted
    coordinate is dense but the projection still is not, the strategy walks
    the family of candidate minimal-open boxes (eta phase), each of which
    the picker is forced to hit.  Epsilon counts innings inside a phase
    triple, and the resulting (alpha, beta, eta, epsilon) log is strictly
    increasing in lexicographic order.
    """

    def __init__(self, spaces, sub_strategies, gamma_enum=None,
                 prod: ProductSpace | None = None,
                 variant: GameVariant = GameVariant.RESTRICTED):
        self.spaces = tuple(spaces)
        k = len(self.spaces)
        if k < 1:
            raise ValueError("need at least one space")
        if len(sub_strategies) != k:
            raise ValueError("one sub-strategy per space")
        self.subs = [as_chooser(s) for s in sub_strategies]
        self.variant = variant
        self.prod = prod or product(self.spaces)
        all_gammas = [
            tuple(i for i in range(k) if g >> i & 1) for g in range(1, 1 << k)
        ]
        self.gammas = list(gamma_enum) if gamma_enum is not None else all_gammas
        if sorted(set(self.gammas)) != sorted(all_gammas):
            raise ValueError("gamma enumeration must cover every non-empty index set")
        full_gamma = tuple(range(k))
        self.subproducts = {}
        for gamma in self.gammas:
            if gamma == full_gamma:
                self.subproducts[gamma] = self.prod
            elif gamma not in self.subproducts:
                self.subproducts[gamma] = product([self.spaces[g] for g in gamma])
        self.fmins = [minimal_opens(f) for f in self.spaces]
        self.fclpt = [f.point_closures() for f in self.spaces]
        self.pools = {}
        for gamma in self.subproducts:
            sub = self.subproducts[gamma]
            combos = list(iter_product(*[self.fmins[g] for g in gamma]))
            self.pools[gamma] = [
                (combo, sub.box_mask(combo)) for combo in combos
            ]

    def initial_state(self) -> AggState:
        return AggState(
            picks=0,
            phase=0,
            substates=tuple(s.initial_state() for s in self.subs),
            ledger=(),
        )

    def ledger_of(self, state: AggState) -> PhaseLedger:
        return PhaseLedger(entries=state.ledger)

    def _gamma_proj(self, gamma, picks: int) -> int:
        sub = self.subproducts[gamma]
        out = 0
        for idx in bits(picks):
            coords = self.prod.decode(idx)
            out |= 1 << sub.encode(tuple(coords[g] for g in gamma))
        return out

    def _target_met(self, gamma, picks: int) -> bool:
        sub = self.subproducts[gamma]
        return sub.space.closure_of(self._gamma_proj(gamma, picks)) == sub.space.full

    def _coord_closed(self, g: int, picks: int) -> int:
        proj = self.prod.proj_mask(picks, g)
        out = 0
        for x in bits(proj):
            out |= self.fclpt[g][x]
        return out

    def _plan(self, state: AggState) -> Plan:
        picks = state.picks
        phase = state.phase
        while phase < len(self.gammas) and self._target_met(self.gammas[phase], picks):
            phase += 1
        if phase == len(self.gammas):
            raise InvariantViolation("asked for a move after every phase target was met")
        gamma = self.gammas[phase]
        closeds = {g: self._coord_closed(g, picks) for g in gamma}
        active = tuple(g for g in gamma if closeds[g] != self.spaces[g].full)
        parts = [None] * len(self.spaces)
        if active:
            beta, eta = len(gamma) - len(active), 0
            for g in range(len(self.spaces)):
                if g in active:
                    parts[g] = self.subs[g].choose(closeds[g], state.substates[g])
                else:
                    parts[g] = self.fmins[g][0]
        else:
            proj = self._gamma_proj(gamma, picks)
            pick_idx = None
            for i, (combo, box) in enumerate(self.pools[gamma]):
                if not box & proj:
                    pick_idx = i
                    break
            if pick_idx is None:
                raise InvariantViolation(
                    "phase target unmet although every candidate box is hit"
                )
            beta, eta = len(gamma), pick_idx + 1
            combo = self.pools[gamma][pick_idx][0]
            for pos, g in enumerate(gamma):
                parts[g] = combo[pos]
            for g in range(len(self.spaces)):
                if parts[g] is None:
                    parts[g] = self.fmins[g][0]
        move = self.prod.box_mask(parts)
        return Plan(phase, gamma, active, closeds, tuple(parts), move, beta, eta)

    def choose(self, closed, state: AggState) -> int:
        return self._plan(state).move

    def observe(self, state: AggState, closed, move, picks) -> AggState:
        plan = self._plan(state)
        last = state.ledger[-1] if state.ledger else None
        if last is not None and (last.alpha, last.beta, last.eta) == (plan.phase, plan.beta, plan.eta):
            epsilon = last.epsilon + 1
        else:
            epsilon = 0
        entry = LedgerEntry(len(state.ledger), plan.phase, plan.beta, plan.eta, epsilon)
        if last is not None:
            if (entry.alpha, entry.beta, entry.eta, entry.epsilon) <= (
                last.alpha, last.beta, last.eta, last.epsilon
            ):
                raise LedgerOrderViolation(f"ledger would decrease at stage {entry.stage}")
        substates = list(state.substates)
        for g in plan.active:
            y_picks = self.prod.proj_mask(picks, g)
            substates[g] = self.subs[g].observe(
                substates[g], plan.closeds[g], plan.parts[g], y_picks
            )
        return AggState(
            picks=state.picks | picks,
            phase=plan.phase,
            substates=tuple(substates),
            ledger=state.ledger + (entry,),
        )


def aggregate_chooser(spaces, sub_strategies=None, gamma_enum=None,
                      prod: ProductSpace | None = None,
                      variant: GameVariant = GameVariant.RESTRICTED) -> AggregateChooser:
    spaces = tuple(spaces)
    if sub_strategies is None:
        sub_strategies = [optimal_chooser(s, variant) for s in spaces]
    return AggregateChooser(spaces, sub_strategies, gamma_enum, prod, variant)
