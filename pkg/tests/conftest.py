"""Shared fixtures and definition-level brute helpers for the test suite."""

from __future__ import annotations

from itertools import combinations

import pytest

from matroidkit import core as C
from matroidkit.core import ElementSet, GroundSet, bit_indices, iter_submasks
from matroidkit.oracle import CorpusSpec, fuzz_corpus

CORPUS_SEED = 20260810


@pytest.fixture(scope="session")
def corpus():
    spec = CorpusSpec(
        seed=CORPUS_SEED,
        pairs=520,
        families=60,
        graphs=220,
        max_elements=10,
        max_graph_vertices=6,
        max_graph_edges=12,
    )
    return fuzz_corpus(spec)


def enumerate_matroids(labels: tuple[str, ...]) -> list[C.ExplicitMatroid]:
    """Every labeled matroid on the given universe, as explicit base lists."""
    n = len(labels)
    ground = GroundSet(labels)
    out = []
    for r in range(n + 1):
        subsets = [sum(1 << i for i in combo) for combo in combinations(range(n), r)]
        for pick in range(1, 1 << len(subsets)):
            bases = {subsets[i] for i in bit_indices(pick)}
            if _exchange_holds(bases):
                out.append(C.ExplicitMatroid(ground, sorted(bases)))
    return out


def _exchange_holds(bases: set[int]) -> bool:
    for a in bases:
        for b in bases:
            if a == b:
                continue
            for x in bit_indices(a & ~b):
                stripped = a ^ (1 << x)
                if not any(stripped | (1 << y) in bases for y in bit_indices(b & ~a)):
                    return False
    return True


# ---------------------------------------------------------------------------
# definition-level brute helpers


def oracle_equal(a: C.Matroid, b: C.Matroid) -> bool:
    if a.universe_mask != b.universe_mask:
        return False
    return all(a._indep(s) == b._indep(s) for s in iter_submasks(a.universe_mask))


def brute_common_bases(m: C.Matroid, n: C.Matroid, xmask: int) -> set[int]:
    """All common bases of M restricted to X and N contracted onto X.

    B works iff B is a base of M restricted to X, the rest of X is
    independent in the dual of N, and that rest spans B there.
    """
    nd = n.dual()
    rm = m._rank(xmask)
    out = set()
    for b in iter_submasks(xmask):
        if b.bit_count() != rm or not m._indep(b):
            continue
        rest = xmask & ~b
        if not nd._indep(rest):
            continue
        if b & ~nd._span(rest):
            continue
        out.add(b)
    return out


def brute_is_wave(m: C.Matroid, n: C.Matroid, wmask: int) -> int | None:
    """Definition-level wave test; returns a witness mask or None."""
    nd = n.dual()
    target = m._rank(wmask)
    for b in iter_submasks(wmask):
        if b.bit_count() != target or not m._indep(b):
            continue
        if not b & ~nd._span(wmask & ~b):
            return b
    return None


def brute_largest_wave_mask(m: C.Matroid, n: C.Matroid) -> int:
    union = 0
    for wmask in iter_submasks(m.universe_mask):
        if wmask & ~union and brute_is_wave(m, n, wmask) is not None:
            union |= wmask
    return union


def brute_cond(m: C.Matroid, n: C.Matroid) -> bool:
    for wmask in iter_submasks(m.universe_mask):
        if brute_is_wave(m, n, wmask) is None:
            continue
        nw = n.onto(ElementSet(m.ground, wmask))
        need = nw._rank(wmask)
        found = any(
            m._indep(b) and nw._indep(b) and b.bit_count() == need
            for b in iter_submasks(wmask)
        )
        if not found:
            return False
    return True


def brute_cond_plus(m: C.Matroid, n: C.Matroid) -> bool:
    union = brute_largest_wave_mask(m, n)
    if union & ~m._loops_mask():
        return False
    return n.onto(ElementSet(m.ground, union))._rank(union) == 0


def family_union_max(members: tuple[C.Matroid, ...]) -> int:
    """Largest union of per-member independent sets, by assignment search."""
    universe = members[0].universe_mask
    elems = list(bit_indices(universe))
    best = 0

    def go(pos: int, picks: tuple[int, ...], used: int) -> None:
        nonlocal best
        if pos == len(elems):
            best = max(best, used.bit_count())
            return
        if used.bit_count() + (len(elems) - pos) <= best:
            return
        b = 1 << elems[pos]
        for i, member in enumerate(members):
            if member._indep(picks[i] | b):
                go(pos + 1, picks[:i] + (picks[i] | b,) + picks[i + 1 :], used | b)
        go(pos + 1, picks, used)

    go(0, tuple(0 for _ in members), 0)
    return best


def family_minmax(members: tuple[C.Matroid, ...]) -> int:
    universe = members[0].universe_mask
    best = None
    for ep in iter_submasks(universe):
        value = (universe & ~ep).bit_count() + sum(m._rank(ep) for m in members)
        if best is None or value < best:
            best = value
    return best


# ---------------------------------------------------------------------------
# driving the mixed stack step by step (for replay tests)


def drive_mixed(m: C.Matroid, split, trace=None):
    """Replay the mixed solver's augmenting loop through the public API.

    Returns (wave, context, final state, records); each record is a tuple
    (state before, path, state after augmenting, state after extending).
    """
    from matroidkit.intersect import (
        FeasibleState,
        MixedContext,
        augment,
        extend_to_nice,
        find_aug_path,
    )
    from matroidkit.waves import PairContext, largest_wave

    split.validate()
    wave = largest_wave(PairContext(m, split.N))
    ground = m.ground
    e_n = m.universe_mask & ~wave.W.mask
    mq = m.contract(wave.W)
    nq = split.N.delete(wave.W)
    ctx = MixedContext(
        mq,
        nq,
        ElementSet(ground, split.E0.mask & e_n),
        ElementSet(ground, split.E1.mask & e_n),
    )
    state = FeasibleState.create(ctx, ground.empty())
    records = []
    for e in bit_indices(ctx.E0.mask):
        while not ctx.N._span(state.I.mask) >> e & 1:
            path = find_aug_path(state, trace=trace)
            assert path is not None
            augmented = augment(state, path, trace=trace)
            extended = extend_to_nice(ctx, augmented, trace=trace)
            records.append((state, path, augmented, extended))
            state = extended
    return wave, ctx, state, records


def replay_arc_persistence(record) -> int:
    """Check arc survival across one augmentation and one extension.

    Arcs whose tail and all of its out-neighbours avoid the path must
    survive the augmentation; arcs whose endpoints keep their membership
    must survive the extension.  Returns the number of arcs checked.
    """
    from matroidkit.intersect import build_exchange_digraph

    state, path, augmented, extended = record
    pset = set(path.elements)
    before = build_exchange_digraph(state)
    after = build_exchange_digraph(augmented)
    checked = 0
    for x, y, _rule in before.arcs:
        if x in pset or pset & set(before.out_neighbors(x)):
            continue
        assert after.has_arc(x, y), (x, y)
        checked += 1
    final = build_exchange_digraph(extended)
    ia, ij = augmented.I.mask, extended.I.mask
    for x, y, _rule in after.arcs:
        bx, by = 1 << x, 1 << y
        if (bx | by) & ij == (bx | by) & ia:
            assert final.has_arc(x, y), (x, y)
            checked += 1
    return checked
