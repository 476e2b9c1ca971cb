"""Exhaustive enumeration of finite topologies and the verification suite.

Two independent generators back each other: one filters subset families for
closure under union and intersection, the other walks reflexive transitive
relations and converts them to topologies.  The claims verified by the
suite are universally quantified over spaces, so exhaustiveness at small n
is the whole point.
"""

from __future__ import annotations

from itertools import permutations, product as iter_product

from .space import (
    FiniteSpace,
    Preorder,
    TooLarge,
    bits,
    from_preorder,
    space_from_masks,
)

FAMILY_METHOD_CAP = 4
PREORDER_METHOD_CAP = 5


def _label_names(n: int):
    return tuple(f"p{i}" for i in range(n))


def _family_closure_masks(n: int):
    """All union/intersection-closed families containing the empty and full set."""
    if n > FAMILY_METHOD_CAP:
        raise TooLarge(f"family-closure generation is capped at n = {FAMILY_METHOD_CAP}")
    full = (1 << n) - 1
    middles = [m for m in range(1, full)]
    out = []
    for code in range(1 << len(middles)):
        chosen = [m for i, m in enumerate(middles) if code >> i & 1]
        family = set(chosen)
        family.add(0)
        family.add(full)
        ok = True
        fam = sorted(family)
        for i, a in enumerate(fam):
            for b in fam[i + 1:]:
                if a | b not in family or a & b not in family:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(tuple(fam))
    return sorted(out)


def _preorder_masks(n: int):
    """Opens of every topology, via reflexive transitive relations."""
    if n > PREORDER_METHOD_CAP:
        raise TooLarge(f"preorder generation is capped at n = {PREORDER_METHOD_CAP}")
    row_choices = []
    for x in range(n):
        must = 1 << x
        opts = []
        for extra in range(1 << n):
            if extra & must == must:
                opts.append(extra)
        row_choices.append(opts)
    out = []
    for rows in iter_product(*row_choices):
        ok = True
        for x in range(n):
            rx = rows[x]
            r = rx
            while r:
                low = r & -r
                y = low.bit_length() - 1
                if rows[y] & ~rx:
                    ok = False
                    break
                r ^= low
            if not ok:
                break
        if ok:
            space = from_preorder(Preorder(n=n, rows=rows))
            out.append(space.opens)
    return sorted(set(out))


def enumerate_labeled(n: int, method: str = "preorder"):
    """Yield every topology on n labeled points, in canonical order.

    ``method``: "family" (n <= 4), "preorder" (n <= 5), or "both", which
    cross-validates the two generators and fails loudly if they disagree.
    """
    if not 1 <= n <= PREORDER_METHOD_CAP:
        raise TooLarge(f"labeled enumeration supports 1 <= n <= {PREORDER_METHOD_CAP}")
    if method == "family":
        families = _family_closure_masks(n)
    elif method == "preorder":
        families = _preorder_masks(n)
    elif method == "both":
        families = _preorder_masks(n)
        if families != _family_closure_masks(n):
            raise AssertionError("the two topology generators disagree")
    else:
        raise ValueError(f"unknown enumeration method {method!r}")
    labels = _label_names(n)
    for idx, fam in enumerate(families):
        yield space_from_masks(f"T{n}.{idx}", labels, fam)


def _permute_mask(mask: int, perm) -> int:
    out = 0
    for i in bits(mask):
        out |= 1 << perm[i]
    return out


def canonical_form(space: FiniteSpace) -> tuple[int, ...]:
    """Lexicographically least sorted-opens tuple over all relabelings."""
    best = None
    for perm in permutations(range(space.n)):
        cand = tuple(sorted(_permute_mask(u, perm) for u in space.opens))
        if best is None or cand < best:
            best = cand
    return best


def enumerate_unlabeled(n: int):
    """Yield one canonical representative per homeomorphism class."""
    seen = set()
    reps = []
    for space in enumerate_labeled(n):
        form = canonical_form(space)
        if form not in seen:
            seen.add(form)
            reps.append(form)
    labels = _label_names(n)
    for idx, fam in enumerate(sorted(reps)):
        yield space_from_masks(f"U{n}.{idx}", labels, fam)


# ---------------------------------------------------------------------------
# Verification suite
# ---------------------------------------------------------------------------


def _check_kuratowski(space):
    from .space import closure

    for s in range(space.full + 1):
        cs = closure(space, s)
        if cs & s != s or closure(space, cs) != cs:
            return {"subset": s}
        t = (s * 5 + 1) & space.full
        if closure(space, s | t) != cs | closure(space, t):
            return {"subset": s, "other": t}
    if closure(space, 0) != 0:
        return {"subset": 0}
    return None


def _check_roundtrip(space):
    from .space import from_preorder, to_preorder

    back = from_preorder(to_preorder(space))
    if back != space:
        return {"rebuilt_opens": list(back.opens)}
    return None


def _check_minimal_opens(space):
    from .space import minimal_opens

    mins = minimal_opens(space)
    for i, a in enumerate(mins):
        for b in mins[i + 1:]:
            if a & b:
                return {"overlap": [a, b]}
    for u in space.opens:
        if u and not any(m & u == m for m in mins):
            return {"uncovered_open": u}
    return None


def _check_chain(space):
    from .invariants import invariant_report

    rep = invariant_report(space)
    ok = rep.chain_ok and rep.t == 1
    if space.n >= 2:
        ok = ok and rep.w <= (1 << space.n) - 2
    if not ok:
        return rep.as_record(space)
    return None


def _check_collapse(space):
    from .invariants import invariant_report

    rep = invariant_report(space)
    if not rep.collapsed:
        return rep.as_record(space)
    return None


def _check_oracles(space):
    from .invariants import (
        delta,
        delta_oracle,
        density,
        density_brute,
        pi_weight,
        pi_weight_brute,
        tightness,
        weight,
        weight_brute,
    )

    pairs = {
        "d": (density(space), density_brute(space)),
        "pi": (pi_weight(space), pi_weight_brute(space)),
        "w": (weight(space), weight_brute(space)),
        "delta": (delta(space), delta_oracle(space)),
        "t": (tightness(space), 1),
    }
    bad = {k: v for k, v in pairs.items() if v[0] != v[1]}
    return bad or None


def _check_variants(space):
    from .game import GameVariant, solve_game

    gd_r = solve_game(space, GameVariant.RESTRICTED).gd
    gd_f = solve_game(space, GameVariant.FREE).gd
    gd_m = solve_game(space, GameVariant.MULTI_POINT).gd
    if gd_r != gd_f or gd_m > gd_f:
        return {"restricted": gd_r, "free": gd_f, "multi": gd_m}
    return {"_note": {"multi_equals_free": gd_m == gd_f}}


def _check_exact_force(space):
    from .game import exact_force_set, solve_game
    from .invariants import delta, density

    forced = exact_force_set(space)
    gd = solve_game(space).gd
    d = density(space)
    dl = delta(space)
    for k in forced:
        if not k == gd == dl == d:
            return {"forced": sorted(forced), "gd": gd, "delta": dl, "d": d}
    return None


def _check_pi_base_bound(space):
    from .game import evaluate_chooser
    from .invariants import pi_weight
    from .strategies import pi_base_chooser

    worst = evaluate_chooser(space, pi_base_chooser(space))
    if worst != pi_weight(space):
        return {"worst": worst, "pi": pi_weight(space)}
    return None


def _check_value_monotone(space):
    from .game import solve_game

    table = solve_game(space)
    states = sorted(table.value)
    for a in states:
        for b in states:
            if a & b == b and table.value[a] > table.value[b]:
                return {"larger": a, "smaller": b}
    return None


def _check_subspace_monotone(space):
    from .game import solve_game
    from .space import closure, interior, is_dense, subspace

    gd = solve_game(space).gd
    subjects = {u for u in space.opens if u}
    subjects |= {a for a in range(1, space.full + 1) if is_dense(space, a)}
    for s in sorted(subjects):
        cl_s = closure(space, s)
        if closure(space, interior(space, cl_s)) != cl_s:
            return {"subset": s, "reason": "regularity identity failed"}
        sub_gd = solve_game(subspace(space, s)).gd
        if sub_gd > gd:
            return {"subset": s, "sub_gd": sub_gd, "gd": gd}
    return None


def _check_dense_lower_bound(space):
    from .invariants import density
    from .space import is_dense, subspace
    from .strategies import dense_point_picker

    if space.n > 4:
        return None
    clpt = space.point_closures()
    for a in range(1, space.full + 1):
        if not is_dense(space, a):
            continue
        picker = dense_point_picker(space, a)
        target = density(subspace(space, a))
        shortest = None

        def walk(closed, stage, acc):
            nonlocal shortest
            if closed == space.full:
                shortest = acc if shortest is None else min(shortest, acc)
                return
            for u in space.opens:
                if u and not u & closed:
                    picks = picker(closed, u, stage, None)
                    walk(closed | clpt[(picks & -picks).bit_length() - 1],
                         stage + 1, acc + 1)

        walk(0, 0, 0)
        if shortest is None or shortest < target:
            return {"dense_set": a, "shortest": shortest, "target": target}
    return None


SPACE_CHECKS = {
    "kuratowski": _check_kuratowski,
    "roundtrip": _check_roundtrip,
    "minimal-opens": _check_minimal_opens,
    "chain": _check_chain,
    "collapse": _check_collapse,
    "oracles": _check_oracles,
    "variants": _check_variants,
    "exact-force": _check_exact_force,
    "pi-base-bound": _check_pi_base_bound,
    "value-monotone": _check_value_monotone,
    "subspace-monotone": _check_subspace_monotone,
    "dense-lower-bound": _check_dense_lower_bound,
}


def _check_pair_product(x, y):
    from .invariants import pi_weight
    from .products import minimal_open_boxes, minimal_opens_via_preorder, product
    from .space import minimal_opens

    prod = product([x, y])
    mins = minimal_opens(prod.space)
    boxes = minimal_open_boxes(prod)
    via_pre = minimal_opens_via_preorder([x, y])
    if not (mins == boxes == via_pre):
        return {"minimal": list(mins), "boxes": list(boxes), "preorder": list(via_pre)}
    if len(mins) != pi_weight(x) * pi_weight(y):
        return {"pi_product": len(mins), "pi_x": pi_weight(x), "pi_y": pi_weight(y)}
    return None


def _check_pair_gd(x, y):
    from .game import solve_game
    from .products import product

    prod = product([x, y])
    lhs = solve_game(prod.space).gd
    rhs = solve_game(x).gd * solve_game(y).gd
    if lhs != rhs:
        return {"gd_product": lhs, "gd_factors": rhs}
    return None


def _check_pair_strategies(x, y):
    from .game import evaluate_chooser, solve_game
    from .invariants import pi_weight
    from .products import product
    from .strategies import aggregate_chooser, product_chooser

    prod = product([x, y])
    gd_prod = solve_game(prod.space).gd
    gd_bound = solve_game(x).gd * solve_game(y).gd
    worst = evaluate_chooser(prod.space, product_chooser(x, y, prod=prod))
    if not gd_prod <= worst <= pi_weight(x) * solve_game(y).gd:
        return {"product_worst": worst}
    agg = aggregate_chooser([x, y], prod=prod)
    agg_worst = evaluate_chooser(prod.space, agg)
    if agg_worst > gd_bound:
        return {"aggregate_worst": agg_worst, "bound": gd_bound}
    return None


def _check_pair_fan_link(x, y):
    from .game import evaluate_chooser, solve_game
    from .products import FanStatus, fan_tightness_check, product
    from .strategies import aggregate_chooser

    gd_x, gd_y = solve_game(x).gd, solve_game(y).gd
    kappa = max(2, gd_x, gd_y)
    verdict = fan_tightness_check([x, y], kappa, "boxes")
    if verdict.status is FanStatus.UNKNOWN:
        return {"fan": "unknown"}
    # finite form of the main theorem: a positive fan verdict certifies the
    # aggregate strategy's product-of-gd bound (kappa itself only bounds gd
    # transfinitely, where kappa many stages absorb)
    prod = product([x, y])
    agg_worst = evaluate_chooser(prod.space, aggregate_chooser([x, y], prod=prod))
    if agg_worst > gd_x * gd_y:
        return {"aggregate_worst": agg_worst, "bound": gd_x * gd_y}
    return None


PAIR_CHECKS = {
    "product-pi": _check_pair_product,
    "product-gd": _check_pair_gd,
    "product-strategies": _check_pair_strategies,
    "fan-link": _check_pair_fan_link,
}


def _check_metric(seed: int):
    from .metric import greedy_run_violations, random_pseudometrics

    for sp in random_pseudometrics(count=20, max_points=8, seed=seed):
        bad = greedy_run_violations(sp)
        if bad:
            return {"space": sp.labels, "violations": bad}
    return None


def verify_suite(n: int, checks="all", seed: int = 0, jobs: int = 1,
                 pair_cap: int = 3):
    """Run the selected checks over the exhaustive corpus for size n.

    Space-level checks run on every labeled topology of exactly n points;
    pair-level checks run over all ordered pairs built from factors of at
    most min(n, pair_cap) points.  Returns (ok, records): one record per
    (subject, check) with a pass/fail status and a counterexample payload
    on failure.  Failures are data, not exceptions.
    """
    live_space = dict(SPACE_CHECKS)
    live_pair = dict(PAIR_CHECKS)
    want_metric = True
    if checks != "all":
        wanted = set(checks.split(",")) if isinstance(checks, str) else set(checks)
        unknown = wanted - set(live_space) - set(live_pair) - {"metric"}
        if unknown:
            raise ValueError(f"unknown checks: {sorted(unknown)}")
        live_space = {k: v for k, v in live_space.items() if k in wanted}
        live_pair = {k: v for k, v in live_pair.items() if k in wanted}
        want_metric = "metric" in wanted

    spaces = list(enumerate_labeled(n))
    pair_spaces = [
        s for size in range(1, min(n, pair_cap) + 1) for s in enumerate_labeled(size)
    ]

    def space_jobs():
        for space in spaces:
            for name, fn in live_space.items():
                yield (space.name, name, fn, (space,))

    def pair_jobs():
        for x in pair_spaces:
            for y in pair_spaces:
                for name, fn in live_pair.items():
                    yield (f"{x.name}*{y.name}", name, fn, (x, y))

    tasks = list(space_jobs()) + list(pair_jobs())
    if want_metric:
        tasks.append(("metric-corpus", "metric", lambda s=seed: _check_metric(s), ()))

    def run_one(task):
        subject, name, fn, args = task
        detail = fn(*args)
        note = None
        if isinstance(detail, dict) and set(detail) == {"_note"}:
            note, detail = detail["_note"], None
        rec = {
            "subject": subject,
            "check": name,
            "status": "fail" if detail else "pass",
        }
        if detail:
            rec["detail"] = detail
        if note:
            rec["note"] = note
        return rec

    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(run_one, tasks))
    else:
        records = [run_one(t) for t in tasks]
    records.sort(key=lambda r: (r["subject"], r["check"]))
    ok = all(r["status"] == "pass" for r in records)
    return ok, records
