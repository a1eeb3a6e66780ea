"""Wave layer: witnesses, the largest wave, quotient conditions, common bases."""

from __future__ import annotations

import pytest

from matroidkit import core as C
from matroidkit.core import ElementSet, GroundSet, bit_indices, iter_submasks
from matroidkit.waves import (
    PairContext,
    check_cond,
    check_cond_plus,
    common_base_B,
    feasible,
    is_wave,
    largest_wave,
    nice_feasible,
)

from conftest import (
    brute_common_bases,
    brute_cond,
    brute_cond_plus,
    brute_is_wave,
    brute_largest_wave_mask,
    oracle_equal,
)

G2 = GroundSet(tuple("ab"))
G3 = GroundSet(tuple("abc"))


def small_pairs(corpus, limit=40, max_size=7):
    picked = []
    for inst in corpus.pairs:
        if inst.M.size <= max_size:
            picked.append(inst)
        if len(picked) == limit:
            break
    return picked


def triangle():
    return C.graphic("xyz", [("x", "y", "a"), ("y", "z", "b"), ("z", "x", "c")])


# ---------------------------------------------------------------------------
# is_wave


def test_is_wave_free_n_any_set():
    m = C.uniform(G3, 2)
    ctx = PairContext(m, C.free(G3))
    for wmask in iter_submasks(G3.full_mask):
        w = ElementSet(G3, wmask)
        witness = is_wave(ctx, w)
        assert witness is not None
        assert m._rank(wmask) == len(witness)


def test_is_wave_rank0_m():
    ctx = PairContext(C.zero(G3), C.uniform(G3, 2))
    witness = is_wave(ctx, G3.full())
    assert witness is not None and witness.mask == 0


def test_is_wave_triangle_single_edge():
    ctx = PairContext(triangle(), triangle())
    assert is_wave(ctx, triangle().ground.subset("a")) is None


def test_is_wave_matches_brute(corpus):
    for inst in small_pairs(corpus, limit=25, max_size=6):
        ctx = PairContext(inst.M, inst.N)
        for wmask in iter_submasks(inst.M.universe_mask):
            got = is_wave(ctx, ElementSet(inst.M.ground, wmask))
            want = brute_is_wave(inst.M, inst.N, wmask)
            assert (got is not None) == (want is not None), (inst.name, wmask)


# ---------------------------------------------------------------------------
# largest_wave


def test_largest_wave_free_n_is_everything():
    wave = largest_wave(PairContext(C.uniform(G3, 1), C.free(G3)))
    assert wave.W.mask == G3.full_mask


def test_largest_wave_u31_pair():
    # union over all 8 subsets passing the wave test is the full set
    m = C.uniform(G3, 1)
    assert brute_largest_wave_mask(m, C.uniform(G3, 1)) == G3.full_mask
    wave = largest_wave(PairContext(m, C.uniform(G3, 1)))
    assert wave.W.mask == G3.full_mask


def test_largest_wave_matches_brute(corpus):
    for inst in small_pairs(corpus, limit=40):
        wave = largest_wave(PairContext(inst.M, inst.N))
        assert wave.W.mask == brute_largest_wave_mask(inst.M, inst.N), inst.name


def test_quotient_after_removal_has_empty_wave(corpus):
    for inst in small_pairs(corpus, limit=20):
        wave = largest_wave(PairContext(inst.M, inst.N))
        mq = inst.M.contract(wave.W)
        nq = inst.N.delete(wave.W)
        assert largest_wave(PairContext(mq, nq)).W.mask == 0
        assert check_cond_plus(PairContext(mq, nq))


# ---------------------------------------------------------------------------
# cond / cond+


def test_cond_plus_rank0_pair():
    assert check_cond_plus(PairContext(C.zero(G3), C.zero(G3)))


def test_cond_plus_fails_with_nonloop_in_wave():
    assert not check_cond_plus(PairContext(C.uniform(G2, 1), C.uniform(G2, 1)))


def test_cond_agrees_with_brute(corpus):
    for inst in small_pairs(corpus, limit=20, max_size=6):
        ctx = PairContext(inst.M, inst.N)
        assert check_cond(ctx) == brute_cond(inst.M, inst.N), inst.name
        assert check_cond_plus(ctx) == brute_cond_plus(inst.M, inst.N), inst.name


def test_cond_plus_implies_cond(corpus):
    seen = 0
    for inst in small_pairs(corpus, limit=40, max_size=6):
        ctx = PairContext(inst.M, inst.N)
        if check_cond_plus(ctx):
            seen += 1
            assert check_cond(ctx)
    assert seen > 0


def test_cond_too_large():
    big = GroundSet(tuple(f"e{i}" for i in range(13)))
    with pytest.raises(C.TooLarge):
        check_cond(PairContext(C.free(big), C.free(big)))


# ---------------------------------------------------------------------------
# feasible / nice feasible


def test_empty_set_nice_feasible_iff_cond_plus(corpus):
    for inst in small_pairs(corpus, limit=15, max_size=6):
        ctx = PairContext(inst.M, inst.N)
        empty = inst.M.ground.empty()
        assert nice_feasible(ctx, empty) == check_cond_plus(ctx)
        assert feasible(ctx, empty) == check_cond(ctx)


def test_feasible_requires_common_independent():
    ctx = PairContext(C.zero(G3), C.free(G3))
    with pytest.raises(C.NotCommonIndependent):
        feasible(ctx, G3.subset("a"))


def test_feasible_stacking(corpus):
    # a common independent set joined with a feasible set of its quotient
    # is feasible for the original pair, and niceness carries over too
    checked = 0
    for inst in small_pairs(corpus, limit=25, max_size=6):
        m, n = inst.M, inst.N
        ctx = PairContext(m, n)
        ground = m.ground
        i0 = m._max_indep(n._max_indep(m.universe_mask))
        if not (m._indep(i0) and n._indep(i0)):
            continue
        s0 = ElementSet(ground, i0)
        quotient = PairContext(m.contract(s0), n.contract(s0))
        for i1mask in iter_submasks(m.universe_mask & ~i0):
            s1 = ElementSet(ground, i1mask)
            if not (
                quotient.M._indep(i1mask) and quotient.N._indep(i1mask)
            ):
                continue
            if nice_feasible(quotient, s1):
                assert nice_feasible(ctx, s0 | s1), inst.name
                checked += 1
                break
        if checked >= 5:
            break
    assert checked > 0


# ---------------------------------------------------------------------------
# common_base_B


def test_common_base_empty_set():
    ctx = PairContext(C.uniform(G3, 1), C.free(G3))
    base = common_base_B(ctx, G3.empty())
    assert base is not None and base.mask == 0


def test_common_base_nonemptiness_matches_brute(corpus):
    for inst in small_pairs(corpus, limit=15, max_size=6):
        ctx = PairContext(inst.M, inst.N)
        for xmask in iter_submasks(inst.M.universe_mask):
            got = common_base_B(ctx, ElementSet(inst.M.ground, xmask))
            want = brute_common_bases(inst.M, inst.N, xmask)
            assert (got is not None) == bool(want), (inst.name, xmask)
            if got is not None:
                assert got.mask in want


def test_wave_base_members_are_nice_feasible(corpus):
    checked = 0
    for inst in small_pairs(corpus, limit=30, max_size=6):
        ctx = PairContext(inst.M, inst.N)
        wave = largest_wave(ctx)
        member = common_base_B(ctx, wave.W)
        if member is None:
            continue
        assert nice_feasible(ctx, member), inst.name
        checked += 1
        if checked >= 8:
            break
    assert checked > 0


# ---------------------------------------------------------------------------
# structural lemmas as property tests


def test_union_of_waves_is_wave(corpus):
    for inst in small_pairs(corpus, limit=10, max_size=5):
        m, n = inst.M, inst.N
        waves = [
            w
            for w in iter_submasks(m.universe_mask)
            if brute_is_wave(m, n, w) is not None
        ]
        for a in waves[:12]:
            for b in waves[:12]:
                assert brute_is_wave(m, n, a | b) is not None, inst.name


def test_wave_stacking(corpus):
    checked = 0
    for inst in small_pairs(corpus, limit=15, max_size=5):
        m, n = inst.M, inst.N
        ground = m.ground
        for w0 in iter_submasks(m.universe_mask):
            if brute_is_wave(m, n, w0) is None or w0 == 0:
                continue
            mq = m.contract(ElementSet(ground, w0))
            nq = n.delete(ElementSet(ground, w0))
            for w1 in iter_submasks(m.universe_mask & ~w0):
                if brute_is_wave(mq, nq, w1) is not None:
                    assert brute_is_wave(m, n, w0 | w1) is not None
                    checked += 1
                    break
            break
        if checked >= 5:
            break
    assert checked > 0


def test_wave_modify_lemma(corpus):
    # removing a rank-zero set of M-loops from a wave keeps the common
    # bases of the wave unchanged, computed in the deleted pair
    checked = 0
    for inst in small_pairs(corpus, limit=40, max_size=6):
        m, n = inst.M, inst.N
        ground = m.ground
        wave = largest_wave(PairContext(m, n))
        wmask = wave.W.mask
        loops = m._loops_mask() & wmask
        for lmask in iter_submasks(loops):
            if lmask == 0:
                continue
            if n.onto(ElementSet(ground, lmask))._rank(lmask) != 0:
                continue
            lset = ElementSet(ground, lmask)
            md, nd_ = m.delete(lset), n.delete(lset)
            left = brute_common_bases(m, n, wmask)
            right = brute_common_bases(md, nd_, wmask & ~lmask)
            assert left == right, (inst.name, lmask)
            if right:
                assert brute_is_wave(md, nd_, wmask & ~lmask) is not None
            checked += 1
            break
        if checked >= 6:
            break
    assert checked > 0


def test_common_loops_remove(corpus):
    checked = 0
    for inst in small_pairs(corpus, limit=40, max_size=6):
        m, n = inst.M, inst.N
        common_loops = m._loops_mask() & n._loops_mask()
        if not common_loops:
            continue
        for wmask in iter_submasks(m.universe_mask):
            if brute_is_wave(m, n, wmask) is None:
                continue
            lmask = common_loops & wmask
            if not lmask:
                continue
            assert brute_is_wave(m, n, wmask & ~lmask) is not None
            assert brute_common_bases(m, n, wmask) == brute_common_bases(
                m, n, wmask & ~lmask
            )
            checked += 1
            break
        if checked >= 4:
            break
    assert checked > 0


def test_cond_plus_loop_delete(corpus):
    checked = 0
    for inst in small_pairs(corpus, limit=40, max_size=6):
        m, n = inst.M, inst.N
        wave = largest_wave(PairContext(m, n))
        mq = m.contract(wave.W)
        nq = n.delete(wave.W)
        loops = mq._loops_mask()
        if not brute_cond_plus(mq, nq):
            continue
        for lmask in iter_submasks(loops):
            lset = ElementSet(m.ground, lmask)
            assert brute_cond_plus(mq.delete(lset), nq.delete(lset))
        checked += 1
        if checked >= 6:
            break
    assert checked > 0


def test_one_more_edge_lemma(corpus):
    # under the strengthened condition, every witness of a one-element
    # quotient wave already spans the wave in the contracted N
    checked = 0
    for inst in small_pairs(corpus, limit=40, max_size=6):
        m, n = inst.M, inst.N
        ground = m.ground
        wave = largest_wave(PairContext(m, n))
        mq = m.contract(wave.W)
        nq = n.delete(wave.W)
        universe = mq.universe_mask
        for e in bit_indices(universe):
            eset = ElementSet(ground, 1 << e)
            me, ne = mq.contract(eset), nq.contract(eset)
            nd = ne.dual()
            for wmask in iter_submasks(me.universe_mask):
                nw = ne.onto(ElementSet(ground, wmask))
                target = me._rank(wmask)
                for b in iter_submasks(wmask):
                    if b.bit_count() != target or not me._indep(b):
                        continue
                    if b & ~nd._span(wmask & ~b):
                        continue
                    assert nw._rank(b) == nw._rank(wmask), (inst.name, e, wmask, b)
                    checked += 1
        if checked >= 50:
            break
    assert checked > 0


def test_minors_changed_lemma():
    # contracting sets with equal spans and deleting sets with equal dual
    # spans produces identical minors
    m = C.graphic(
        ["u", "v", "w"],
        [("u", "v", "a"), ("v", "w", "b"), ("w", "u", "c"), ("v", "w", "d")],
    )
    n = C.PartitionMatroid(m.ground, ((0b0011, 1), (0b1100, 1)))
    nd = n.dual()
    universe = m.universe_mask
    cases = 0
    for zmask in iter_submasks(universe):
        for x0 in iter_submasks(zmask):
            for x1 in iter_submasks(zmask):
                y0, y1 = zmask & ~x0, zmask & ~x1
                if m._span(x0) != m._span(x1) or nd._span(y0) != nd._span(y1):
                    continue
                g = m.ground
                m0 = m.contract(ElementSet(g, x0)).delete(ElementSet(g, y0))
                m1 = m.contract(ElementSet(g, x1)).delete(ElementSet(g, y1))
                n0 = n.contract(ElementSet(g, x0)).delete(ElementSet(g, y0))
                n1 = n.contract(ElementSet(g, x1)).delete(ElementSet(g, y1))
                assert oracle_equal(m0, m1)
                assert oracle_equal(n0, n1)
                cases += 1
    assert cases > 0


def test_mloop_observation(corpus):
    # when the wave condition holds, any set of M-loops has rank zero in
    # the contraction of N onto it
    checked = 0
    for inst in small_pairs(corpus, limit=30, max_size=6):
        m, n = inst.M, inst.N
        if not brute_cond(m, n):
            continue
        loops = m._loops_mask()
        for lmask in iter_submasks(loops):
            assert n.onto(ElementSet(m.ground, lmask))._rank(lmask) == 0
        checked += 1
        if checked >= 6:
            break
    assert checked > 0
