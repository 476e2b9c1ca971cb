"""Exact solver and play engine for the open-point game.

One position of the game is the closure of the points picked so far: the
chooser offers a non-empty open set, the picker answers with a point (or a
non-empty subset in the multi-point variant), and play stops once the picks
are dense.  The chooser minimizes the number of stages, the picker
maximizes it; ``gd`` is the resulting minimax value from the empty
position.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .space import FiniteSpace, TooLarge, bits, minimal_opens, popcount

INFINITE = math.inf

MULTI_POINT_CAP = 12


class GameVariant(Enum):
    RESTRICTED = "restricted"    # offered opens must avoid the current closure
    FREE = "free"                # any non-empty open may be offered
    MULTI_POINT = "multi-point"  # free offers; picker takes any non-empty subset


class IllegalMove(Exception):
    """A policy broke the rules; carries enough context to point at it."""

    def __init__(self, offender: str, space: FiniteSpace, closed: int, move: int, why: str):
        self.offender = offender
        self.closed = closed
        self.move = move
        super().__init__(
            f"{offender} played {sorted(space.label_set(move))} at closed state "
            f"{sorted(space.label_set(closed))}: {why}"
        )


class InvariantViolation(AssertionError):
    """An internal guarantee failed (e.g. a pi-base with no legal member)."""


def _move_candidates(space: FiniteSpace, closed: int, variant: GameVariant):
    """Inclusion-minimal opens worth offering at a closed state.

    Any open contains a minimal one whose picker replies are a subset of
    its own, so restricting the chooser to minimal opens never changes the
    minimax value.  Minimal opens trace indiscretely on closed sets, hence
    each is either inside ``closed`` or disjoint from it.
    """
    mins = minimal_opens(space)
    if variant is GameVariant.RESTRICTED:
        return [m for m in mins if not m & closed]
    return list(mins)


def _multi_replies(move: int):
    pts = list(bits(move))
    if len(pts) > MULTI_POINT_CAP:
        raise TooLarge(
            f"multi-point replies over a {len(pts)}-point open exceed the cap of {MULTI_POINT_CAP}"
        )
    subsets = []
    for code in range(1, 1 << len(pts)):
        mask = 0
        for i, p in enumerate(pts):
            if code >> i & 1:
                mask |= 1 << p
        subsets.append(mask)
    return subsets


@dataclass(frozen=True)
class StrategyTable:
    """Memoized optimal play: remaining length and a best offer per state."""

    space: FiniteSpace
    variant: GameVariant
    value: dict[int, int]
    best_move: dict[int, int]

    @property
    def gd(self) -> int:
        return self.value[0]

    def records(self):
        for closed in sorted(self.value):
            rec = {
                "closed_set": sorted(self.space.label_set(closed)),
                "value": self.value[closed],
            }
            if closed in self.best_move:
                rec["best_move"] = sorted(self.space.label_set(self.best_move[closed]))
            yield rec


def solve_game(space: FiniteSpace, variant: GameVariant = GameVariant.RESTRICTED) -> StrategyTable:
    """Full minimax over every closed state reachable from the empty one."""
    clpt = space.point_closures()
    full = space.full
    value: dict[int, float] = {full: 0}
    best: dict[int, int] = {}

    def visit(closed: int) -> float:
        got = value.get(closed)
        if got is not None:
            return got
        best_val: float = INFINITE
        best_mv = None
        for m in _move_candidates(space, closed, variant):
            if m & closed:
                # the picker may re-pick a covered point forever
                branch: float = INFINITE
            elif variant is GameVariant.MULTI_POINT:
                branch = max(visit(closed | _close(clpt, s)) for s in _multi_replies(m))
            else:
                branch = max(visit(closed | clpt[x]) for x in bits(m))
            if branch < best_val:
                best_val, best_mv = branch, m
        if best_mv is None:
            raise InvariantViolation("no offerable open at a non-terminal state")
        value[closed] = best_val + 1
        best[closed] = best_mv
        return best_val + 1

    visit(0)
    assert all(v != INFINITE for v in value.values())
    return StrategyTable(space=space, variant=variant, value=dict(value), best_move=best)


def _close(clpt, mask: int) -> int:
    out = 0
    for x in bits(mask):
        out |= clpt[x]
    return out


def exact_force_set(space: FiniteSpace) -> frozenset[int]:
    """Lengths the chooser can force the game to have exactly.

    E(full) = {0}; otherwise k is forcible when some legal open makes every
    picker reply land in a state from which k-1 is forcible.  Offers follow
    the restricted rule, the formulation under which outcomes are unchanged
    and the recursion is well-founded.
    """
    clpt = space.point_closures()
    full = space.full
    memo: dict[int, frozenset[int]] = {full: frozenset({0})}

    def visit(closed: int) -> frozenset[int]:
        got = memo.get(closed)
        if got is not None:
            return got
        out: set[int] = set()
        for m in _move_candidates(space, closed, GameVariant.RESTRICTED):
            shared = None
            for x in bits(m):
                nxt = visit(closed | clpt[x])
                shared = nxt if shared is None else shared & nxt
                if not shared:
                    break
            if shared:
                out.update(k + 1 for k in shared)
        memo[closed] = frozenset(out)
        return memo[closed]

    return visit(0)


# ---------------------------------------------------------------------------
# Policy protocol and play engine
# ---------------------------------------------------------------------------
#
# A chooser is any object with:
#     initial_state() -> state            (hashable)
#     choose(closed, state) -> open mask
#     observe(state, closed, move, picks) -> state
# Plain callables f(closed, stage) are adapted automatically.
#
# A picker is a callable picker(closed, offered, stage, rng) -> pick mask.


class FunctionChooser:
    """Adapter giving a stage counter to a stateless (closed, stage) policy."""

    def __init__(self, fn):
        self.fn = fn

    def initial_state(self):
        return 0

    def choose(self, closed, state):
        return self.fn(closed, state)

    def observe(self, state, closed, move, picks):
        return state + 1


def as_chooser(policy):
    if hasattr(policy, "choose"):
        return policy
    return FunctionChooser(policy)


def _check_offer(space: FiniteSpace, closed: int, move: int, variant: GameVariant) -> None:
    if not move or not space.is_open(move):
        raise IllegalMove("chooser", space, closed, move, "offer is empty or not open")
    if variant is GameVariant.RESTRICTED and move & closed:
        raise IllegalMove("chooser", space, closed, move, "offer meets the closure")


def _check_pick(space: FiniteSpace, closed: int, offered: int, picks: int, variant: GameVariant) -> None:
    if not picks or picks & ~offered:
        raise IllegalMove("picker", space, closed, picks, "pick outside the offered open")
    if variant is not GameVariant.MULTI_POINT and popcount(picks) != 1:
        raise IllegalMove("picker", space, closed, picks, "exactly one point per stage")


def evaluate_chooser(space: FiniteSpace, policy, variant: GameVariant = GameVariant.RESTRICTED):
    """Worst-case game length for a chooser against every picker line.

    Full traversal of picker replies with memoization on (closed state,
    policy state).  Returns ``math.inf`` when some line never terminates,
    which only happens for policies that allow the picker to stall.
    """
    chooser = as_chooser(policy)
    clpt = space.point_closures()
    full = space.full
    memo: dict = {}

    def worst(closed: int, state) -> float:
        if closed == full:
            return 0
        key = (closed, state)
        got = memo.get(key)
        if got is not None:
            return got
        memo[key] = INFINITE  # cycle guard while this node is open
        move = chooser.choose(closed, state)
        _check_offer(space, closed, move, variant)
        if variant is GameVariant.MULTI_POINT:
            replies = _multi_replies(move)
        else:
            replies = [1 << x for x in bits(move)]
        val: float = 0
        for picks in replies:
            nxt = closed | _close(clpt, picks)
            if nxt == closed:
                val = INFINITE
                break
            val = max(val, worst(nxt, chooser.observe(state, closed, move, picks)))
        memo[key] = val + 1
        return val + 1

    return worst(0, chooser.initial_state())


@dataclass(frozen=True)
class Step:
    offered: int
    picks: int
    closure_after: int


@dataclass(frozen=True)
class Transcript:
    space: FiniteSpace
    steps: tuple[Step, ...]
    terminal: bool

    @property
    def length(self) -> int:
        return len(self.steps)

    def validate(self) -> None:
        prev = 0
        for step in self.steps:
            if not step.closure_after > prev or step.closure_after & prev != prev:
                raise InvariantViolation("closure sequence must strictly increase")
            prev = step.closure_after
        if self.terminal != (prev == self.space.full):
            raise InvariantViolation("terminal flag disagrees with the final closure")

    def records(self):
        for i, step in enumerate(self.steps):
            yield {
                "stage": i,
                "offered": sorted(self.space.label_set(step.offered)),
                "picked": sorted(self.space.label_set(step.picks)),
                "closure": sorted(self.space.label_set(step.closure_after)),
            }


def run_game(space: FiniteSpace, chooser_policy, picker, variant: GameVariant,
             rng=None, on_step=None):
    """Play one full game; returns the transcript and the chooser's last state.

    ``on_step`` is called with each Step as it happens, before the next
    offer, so interactive front-ends can echo the growing closure live.
    """
    chooser = as_chooser(chooser_policy)
    clpt = space.point_closures()
    full = space.full
    closed, state, stage = 0, chooser.initial_state(), 0
    steps: list[Step] = []
    while closed != full:
        move = chooser.choose(closed, state)
        _check_offer(space, closed, move, variant)
        picks = picker(closed, move, stage, rng)
        _check_pick(space, closed, move, picks, variant)
        nxt = closed | _close(clpt, picks)
        if nxt == closed:
            raise InvariantViolation("play stalled: the closure stopped growing")
        state = chooser.observe(state, closed, move, picks)
        step = Step(offered=move, picks=picks, closure_after=nxt)
        steps.append(step)
        if on_step is not None:
            on_step(stage, step)
        closed = nxt
        stage += 1
    transcript = Transcript(space=space, steps=tuple(steps), terminal=True)
    transcript.validate()
    return transcript, state


def play_transcript(space: FiniteSpace, chooser_policy, picker,
                    variant: GameVariant = GameVariant.RESTRICTED, seed: int = 0) -> Transcript:
    import random

    transcript, _ = run_game(space, chooser_policy, picker, variant, rng=random.Random(seed))
    return transcript


# A couple of reference pickers used by the CLI and the suites.

def random_picker(closed, offered, stage, rng):
    return 1 << rng.choice(list(bits(offered)))


def first_point_picker(closed, offered, stage, rng=None):
    return offered & -offered


def stalling_picker(space: FiniteSpace):
    """Greedy picker that grows the closure as little as possible."""
    clpt = space.point_closures()

    def pick(closed, offered, stage, rng=None):
        options = sorted(bits(offered), key=lambda x: (popcount(closed | clpt[x]), x))
        return 1 << options[0]

    return pick


def value_function(space: FiniteSpace, variant: GameVariant = GameVariant.RESTRICTED):
    """Memoized optimal remaining length, defined at every closed state."""
    clpt = space.point_closures()
    memo: dict[int, float] = {space.full: 0}

    def value(closed: int) -> float:
        got = memo.get(closed)
        if got is not None:
            return got
        best = INFINITE
        for m in _move_candidates(space, closed, variant):
            if m & closed:
                continue
            branch = max(value(closed | clpt[x]) for x in bits(m))
            best = min(best, branch + 1)
        memo[closed] = best
        return best

    return value


def optimal_picker(space: FiniteSpace, variant: GameVariant = GameVariant.RESTRICTED):
    """Picker that maximizes the remaining optimal length."""
    clpt = space.point_closures()
    value = value_function(space, variant)

    def pick(closed, offered, stage, rng=None):
        options = sorted(bits(offered), key=lambda x: (-value(closed | clpt[x]), x))
        return 1 << options[0]

    return pick
