"""Waves, the largest wave, quotient conditions and common bases.

A wave for an ordered pair of matroids on one universe is a set W such
that the restriction of the first matroid to W has a base that stays
independent in the contraction of the second matroid onto W.  These
objects and the two quotient conditions below are the structural layer
the mixed intersection solver leans on.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    ElementSet,
    Matroid,
    NotCommonIndependent,
    PostconditionFailed,
    TooLarge,
    UniverseMismatch,
    exhaustive_bound,
    iter_submasks,
)


@dataclass(frozen=True)
class PairContext:
    """Two matroids on one ground set and one universe."""

    M: Matroid
    N: Matroid

    def __post_init__(self) -> None:
        if self.M.ground.labels != self.N.ground.labels:
            raise UniverseMismatch("pair members live on different ground sets")
        if self.M.universe_mask != self.N.universe_mask:
            raise UniverseMismatch("pair members have different universes")

    @property
    def ground(self):
        return self.M.ground

    @property
    def universe_mask(self) -> int:
        return self.M.universe_mask

    def quotient(self, imask: int) -> "PairContext":
        """Contract a common independent set in both members."""
        s = ElementSet(self.ground, imask)
        return PairContext(self.M.contract(s), self.N.contract(s))


def _solve_masks(m: Matroid, n: Matroid) -> tuple[int, int, int]:
    """Classic solve returning (max common set, reach side, sink-coreach side)."""
    from .intersect import _classic_run

    run = _classic_run(m, n)
    return run.imask, run.reach_mask, run.coreach_mask


def is_wave(ctx: PairContext, w: ElementSet) -> ElementSet | None:
    """Witness that ``w`` is a wave, or None.

    A witness is a base of M restricted to ``w`` that is independent in
    N contracted onto ``w``; it is found by solving the intersection of
    those two minors and testing for M-spanningness.
    """
    wmask = ctx.M._check_subset(w)
    mw = ctx.M.restrict(w)
    nw = ctx.N.onto(w)
    imask, _, _ = _solve_masks(mw, nw)
    if imask.bit_count() == mw._rank(wmask):
        return ElementSet(ctx.ground, imask)
    return None


def largest_wave(ctx: PairContext) -> "Wave":
    """The union of all waves, with a witness.

    Accumulates the wave extracted from the failed-augmentation state of
    the classic solver on successive quotients until only the empty wave
    remains, then verifies the witness directly against the oracles.
    """
    m, n = ctx.M, ctx.N
    ground = ctx.ground
    acc = 0
    wit = 0
    while True:
        mq = m.contract(ElementSet(ground, acc))
        nq = n.delete(ElementSet(ground, acc))
        imask, _, coreach = _solve_masks(mq, nq)
        step = mq.universe_mask & ~coreach
        if step == 0:
            break
        wit |= imask & step
        acc |= step
    wave = Wave(ElementSet(ground, acc), ElementSet(ground, wit))
    _verify_wave(ctx, wave)
    return wave


def _verify_wave(ctx: PairContext, wave: "Wave") -> None:
    """Re-check the wave witness from raw oracles; failure is a solver bug."""
    wmask = wave.W.mask
    bmask = wave.witness.mask
    if bmask & ~wmask:
        raise PostconditionFailed("wave witness leaves the wave")
    if not ctx.M._indep(bmask):
        raise PostconditionFailed("wave witness is dependent in M")
    if wmask & ~ctx.M._span(bmask):
        raise PostconditionFailed("wave witness does not span the wave in M")
    ndual = ctx.N.dual()
    if bmask & ~ndual._span(wmask & ~bmask):
        raise PostconditionFailed("wave witness is dependent in N contracted onto W")


@dataclass(frozen=True)
class Wave:
    """A wave together with one witnessing base."""

    W: ElementSet
    witness: ElementSet


def check_cond(ctx: PairContext, bound: int | None = None) -> bool:
    """Every wave admits an M-independent base of N contracted onto it.

    Exhaustive over all subsets of the universe; guarded by the
    configured bound.
    """
    limit = bound if bound is not None else exhaustive_bound(12)
    size = ctx.universe_mask.bit_count()
    if size > limit:
        raise TooLarge(f"exhaustive wave scan over {size} elements exceeds {limit}")
    m, n = ctx.M, ctx.N
    for wmask in iter_submasks(ctx.universe_mask):
        w = ElementSet(ctx.ground, wmask)
        mw = m.restrict(w)
        nw = n.onto(w)
        common, _, _ = _solve_masks(mw, nw)
        s = common.bit_count()
        if s == mw._rank(wmask) and s < nw._rank(wmask):
            return False
    return True


def check_cond_plus(ctx: PairContext) -> bool:
    """The largest wave consists of M-loops and N contracted onto it has rank 0."""
    wave = largest_wave(ctx)
    if wave.W.mask & ~ctx.M._loops_mask():
        return False
    return ctx.N.onto(wave.W)._rank(wave.W.mask) == 0


def _require_common_independent(ctx: PairContext, s: ElementSet) -> int:
    mask = ctx.M._check_subset(s)
    if not (ctx.M._indep(mask) and ctx.N._indep(mask)):
        raise NotCommonIndependent("set is not independent in both matroids")
    return mask


def feasible(ctx: PairContext, s: ElementSet, bound: int | None = None) -> bool:
    """The quotient pair by ``s`` satisfies the wave condition."""
    mask = _require_common_independent(ctx, s)
    return check_cond(ctx.quotient(mask), bound)


def nice_feasible(ctx: PairContext, s: ElementSet) -> bool:
    """The quotient pair by ``s`` satisfies the strengthened wave condition."""
    mask = _require_common_independent(ctx, s)
    return check_cond_plus(ctx.quotient(mask))


def common_base_B(ctx: PairContext, x: ElementSet) -> ElementSet | None:
    """A common base of M restricted to ``x`` and N contracted onto ``x``.

    Deterministic smallest-index choice among solver outputs; None when
    the two minors have no common base.
    """
    xmask = ctx.M._check_subset(x)
    mx = ctx.M.restrict(x)
    nx = ctx.N.onto(x)
    imask, _, _ = _solve_masks(mx, nx)
    s = imask.bit_count()
    if s == mx._rank(xmask) == nx._rank(xmask):
        return ElementSet(ctx.ground, imask)
    return None
