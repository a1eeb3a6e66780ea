"""Matroid intersection solvers with verifiable certificates.

Two solvers share one certificate format: the classic augmenting-path
solver, and a mixed solver that treats a declared split E = E0 | E1 of
the second matroid's universe asymmetrically.  On E0 the exchange
digraph uses circuits of N; on E1 it walks cocircuits against the base
formed by the E1-part of the spanned-but-unused elements.  Every
augmentation is checked against its guaranteed span-preservation
properties, and every certificate is re-verified from raw oracles.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import (
    ElementSet,
    GroundSet,
    Matroid,
    NotCommonIndependent,
    PostconditionFailed,
    PreconditionViolated,
    ExtensionFailed,
    StateInvariantBroken,
    Stuck,
    UniverseMismatch,
    bit_indices,
)
from .waves import PairContext, check_cond_plus, common_base_B, largest_wave

RULE_M = "M-circuit"
RULE_N = "N-circuit"
RULE_NSTAR = "N*-cocircuit"


# ---------------------------------------------------------------------------
# traces and telemetry


@dataclass
class Trace:
    """Event log and counters for replay tests and telemetry."""

    events: list = field(default_factory=list)
    augmentations: int = 0
    extensions: int = 0
    repairs: int = 0

    def record(self, kind: str, **data) -> None:
        self.events.append({"kind": kind, **data})

    def as_dict(self) -> dict:
        return {
            "augmentations": self.augmentations,
            "extensions": self.extensions,
            "repairs": self.repairs,
            "events": self.events,
        }


# ---------------------------------------------------------------------------
# digraphs and paths


class ExchangeDigraph:
    """Arc list over the universe with a rule tag per arc."""

    def __init__(self, ground: GroundSet, arcs: list[tuple[int, int, str]]) -> None:
        self.ground = ground
        self.arcs = tuple(arcs)
        out: dict[int, list[int]] = {}
        inn: dict[int, list[int]] = {}
        pairs = set()
        for x, y, _rule in arcs:
            pairs.add((x, y))
            out.setdefault(x, []).append(y)
            inn.setdefault(y, []).append(x)
        self._out = {x: tuple(sorted(set(ys))) for x, ys in out.items()}
        self._in = {y: tuple(sorted(set(xs))) for y, xs in inn.items()}
        self._pairs = pairs

    def out_neighbors(self, x: int) -> tuple[int, ...]:
        return self._out.get(x, ())

    def in_neighbors(self, y: int) -> tuple[int, ...]:
        return self._in.get(y, ())

    def has_arc(self, x: int, y: int) -> bool:
        return (x, y) in self._pairs


@dataclass(frozen=True)
class AugPath:
    """Odd alternating element sequence from an N-unspanned to an M-unspanned element."""

    elements: tuple[int, ...]

    @property
    def first(self) -> int:
        return self.elements[0]

    @property
    def last(self) -> int:
        return self.elements[-1]

    @property
    def mask(self) -> int:
        out = 0
        for e in self.elements:
            out |= 1 << e
        return out

    def __len__(self) -> int:
        return len(self.elements)


@dataclass(frozen=True)
class IntersectionCertificate:
    """A common independent set with a two-sided spanning partition."""

    I: ElementSet
    E_M: ElementSet
    E_N: ElementSet


def verify_certificate(m: Matroid, n: Matroid, cert: IntersectionCertificate) -> bool:
    """Re-derive every certificate invariant from raw oracles."""
    universe = m.universe_mask
    if n.universe_mask != universe or m.ground.labels != n.ground.labels:
        return False
    imask, am, an = cert.I.mask, cert.E_M.mask, cert.E_N.mask
    if am & an or am | an != universe or imask & ~universe:
        return False
    if not (m._indep(imask) and n._indep(imask)):
        return False
    if am & ~m._span(imask & am):
        return False
    if an & ~n._span(imask & an):
        return False
    return True


# ---------------------------------------------------------------------------
# shortest-path machinery


def _bfs_path(dg: ExchangeDigraph, source: int, sinks_mask: int) -> list[int] | None:
    """Shortest path from ``source`` to the nearest sink, lexicographically least."""
    if sinks_mask >> source & 1:
        return [source]
    dist = {source: 0}
    frontier = [source]
    found: list[int] = []
    while frontier and not found:
        nxt = []
        for u in frontier:
            for v in dg.out_neighbors(u):
                if v not in dist:
                    dist[v] = dist[u] + 1
                    nxt.append(v)
                    if sinks_mask >> v & 1:
                        found.append(v)
        frontier = nxt
    if not found:
        return None
    t = min(found)
    dist_t = {t: 0}
    frontier = [t]
    while frontier:
        nxt = []
        for u in frontier:
            for w in dg.in_neighbors(u):
                if w not in dist_t:
                    dist_t[w] = dist_t[u] + 1
                    nxt.append(w)
        frontier = nxt
    total = dist[t]
    path = [source]
    cur = source
    while cur != t:
        step = dist[cur] + 1
        cur = min(
            v
            for v in dg.out_neighbors(cur)
            if dist.get(v) == step and dist_t.get(v) == total - step
        )
        path.append(cur)
    return path


def _strip_jumps(
    dg: ExchangeDigraph, path: list[int], trace: Trace | None
) -> list[int]:
    """Remove forward chords so no arc skips ahead along the path."""
    changed = True
    while changed:
        changed = False
        for k in range(len(path)):
            for ell in range(len(path) - 1, k + 1, -1):
                if dg.has_arc(path[k], path[ell]):
                    path = path[: k + 1] + path[ell:]
                    if trace is not None:
                        trace.repairs += 1
                        trace.record("repair", kept=tuple(path))
                    changed = True
                    break
            if changed:
                break
    return path


def _reach(dg: ExchangeDigraph, seeds: list[int]) -> int:
    seen = 0
    stack = list(seeds)
    for s in seeds:
        seen |= 1 << s
    while stack:
        u = stack.pop()
        for v in dg.out_neighbors(u):
            if not seen >> v & 1:
                seen |= 1 << v
                stack.append(v)
    return seen


def _coreach(dg: ExchangeDigraph, seeds_mask: int) -> int:
    seen = seeds_mask
    stack = list(bit_indices(seeds_mask))
    while stack:
        u = stack.pop()
        for w in dg.in_neighbors(u):
            if not seen >> w & 1:
                seen |= 1 << w
                stack.append(w)
    return seen


# ---------------------------------------------------------------------------
# classic solver


def _classic_arcs(m: Matroid, n: Matroid, imask: int) -> list[tuple[int, int, str]]:
    """Two-rule exchange digraph of the classic augmenting-path method."""
    arcs: list[tuple[int, int, str]] = []
    outside = m.universe_mask & ~imask
    for x in bit_indices(outside):
        bx = 1 << x
        if not m._indep(imask | bx):
            circ = m._fund_circuit(x, imask)
            for y in bit_indices(circ ^ bx):
                arcs.append((x, y, RULE_M))
        if not n._indep(imask | bx):
            circ = n._fund_circuit(x, imask)
            for y in bit_indices(circ ^ bx):
                arcs.append((y, x, RULE_N))
    return arcs


@dataclass(frozen=True)
class _ClassicRun:
    imask: int
    reach_mask: int
    coreach_mask: int
    digraph: ExchangeDigraph


def _classic_run(m: Matroid, n: Matroid, trace: Trace | None = None) -> _ClassicRun:
    """Run the classic solver to completion from the empty set."""
    if m.universe_mask != n.universe_mask or m.ground.labels != n.ground.labels:
        raise UniverseMismatch("intersection needs a shared universe")
    universe = m.universe_mask
    imask = 0
    for _ in range(universe.bit_count() + 1):
        step = _classic_step(m, n, imask, trace)
        if isinstance(step, _ClassicRun):
            return step
        imask = _apply_classic_path(m, n, imask, step, trace)
    raise Stuck("classic solver exceeded its augmentation budget")


def _classic_step(
    m: Matroid, n: Matroid, imask: int, trace: Trace | None
) -> "list[int] | _ClassicRun":
    """Find a shortest augmenting path, or report the final reachability split."""
    universe = m.universe_mask
    dg = ExchangeDigraph(m.ground, _classic_arcs(m, n, imask))
    span_n = n._span(imask)
    span_m = m._span(imask)
    sources = list(bit_indices(universe & ~span_n))
    sinks_mask = universe & ~span_m
    for s in sources:
        path = _bfs_path(dg, s, sinks_mask)
        if path is not None:
            return _strip_jumps(dg, path, trace)
    reach = _reach(dg, sources)
    coreach = _coreach(dg, sinks_mask)
    return _ClassicRun(imask, reach, coreach, dg)


def _apply_classic_path(
    m: Matroid, n: Matroid, imask: int, path: list[int], trace: Trace | None
) -> int:
    pmask = 0
    for e in path:
        pmask |= 1 << e
    new = imask ^ pmask
    if not (m._indep(new) and n._indep(new)):
        raise PostconditionFailed("classic augmentation broke independence")
    if m._span(new) != m._span(imask | (1 << path[-1])):
        raise PostconditionFailed("classic augmentation changed the M-span")
    if n._span(new) != n._span(imask | (1 << path[0])):
        raise PostconditionFailed("classic augmentation changed the N-span")
    if trace is not None:
        trace.augmentations += 1
        trace.record("classic-augment", before=imask, path=tuple(path), after=new)
    return new


def edmonds_step(
    ctx: PairContext, independent: ElementSet, trace: Trace | None = None
) -> IntersectionCertificate | AugPath:
    """One classic step: an augmenting path, or the reachability certificate."""
    imask = ctx.M._check_subset(independent)
    if not (ctx.M._indep(imask) and ctx.N._indep(imask)):
        raise NotCommonIndependent("starting set is not common independent")
    step = _classic_step(ctx.M, ctx.N, imask, trace)
    if isinstance(step, _ClassicRun):
        ground = ctx.ground
        e_m = ctx.universe_mask & ~step.coreach_mask
        return IntersectionCertificate(
            ElementSet(ground, imask),
            ElementSet(ground, e_m),
            ElementSet(ground, ctx.universe_mask & ~e_m),
        )
    return AugPath(tuple(step))


def edmonds_solve(ctx: PairContext, trace: Trace | None = None) -> IntersectionCertificate:
    """Maximum common independent set with the two-sided spanning partition.

    The emitted M-side is the set of elements that cannot reach an
    M-unspanned element in the final exchange digraph; this is the
    largest valid choice and coincides with the union of all waves.
    """
    run = _classic_run(ctx.M, ctx.N, trace)
    ground = ctx.ground
    e_m = ctx.universe_mask & ~run.coreach_mask
    cert = IntersectionCertificate(
        ElementSet(ground, run.imask),
        ElementSet(ground, e_m),
        ElementSet(ground, ctx.universe_mask & ~e_m),
    )
    if not verify_certificate(ctx.M, ctx.N, cert):
        raise PostconditionFailed("classic certificate failed raw verification")
    return cert


# ---------------------------------------------------------------------------
# the mixed stack


@dataclass(frozen=True)
class SplitInput:
    """The second matroid with a declared two-part split of its universe.

    Every component of N must lie wholly inside one part; the solver
    treats E0 through circuits of N and E1 through cocircuits.
    """

    N: Matroid
    E0: ElementSet
    E1: ElementSet

    def validate(self) -> None:
        e0 = self.N._check_subset(self.E0)
        e1 = self.N._check_subset(self.E1)
        if e0 & e1 or e0 | e1 != self.N.universe_mask:
            raise PreconditionViolated("split parts must partition the universe")
        for comp in self.N.components():
            cm = comp.mask
            if cm & e0 and cm & e1:
                raise PreconditionViolated(
                    f"component {comp.labels()} crosses the declared split"
                )


@dataclass(frozen=True)
class MixedContext:
    """Solver-internal pair with the split restricted to its universe."""

    M: Matroid
    N: Matroid
    E0: ElementSet
    E1: ElementSet

    def __post_init__(self) -> None:
        if self.M.universe_mask != self.N.universe_mask:
            raise UniverseMismatch("mixed context needs a shared universe")
        if (self.E0.mask | self.E1.mask) != self.M.universe_mask or (
            self.E0.mask & self.E1.mask
        ):
            raise PreconditionViolated("split must partition the context universe")

    @property
    def ground(self) -> GroundSet:
        return self.M.ground

    @property
    def universe_mask(self) -> int:
        return self.M.universe_mask

    @property
    def n_dual(self) -> Matroid:
        return self.N.dual()


@dataclass(frozen=True)
class FeasibleState:
    """Current common independent set with cached spans and safety data.

    ``ring`` is the set of elements spanned by I in M but outside I;
    ``safe_base`` is its E1 part, which stays a dual base of the E1 part
    of the M-span while the state is dually safe.
    """

    ctx: MixedContext
    I: ElementSet
    span_m: ElementSet
    ring: ElementSet
    safe_base: ElementSet

    @classmethod
    def create(cls, ctx: MixedContext, independent: ElementSet) -> "FeasibleState":
        imask = ctx.M._check_subset(independent)
        span_m = ctx.M._span(imask)
        ring = span_m & ~imask
        state = cls(
            ctx,
            ElementSet(ctx.ground, imask),
            ElementSet(ctx.ground, span_m),
            ElementSet(ctx.ground, ring),
            ElementSet(ctx.ground, ring & ctx.E1.mask),
        )
        state.validate()
        return state

    def validate(self) -> None:
        ctx = self.ctx
        imask = self.I.mask
        if not (ctx.M._indep(imask) and ctx.N._indep(imask)):
            raise StateInvariantBroken("state set is not common independent")
        span_m = ctx.M._span(imask)
        if self.span_m.mask != span_m or self.ring.mask != span_m & ~imask:
            raise StateInvariantBroken("cached spans are stale")
        if self.safe_base.mask != self.ring.mask & ctx.E1.mask:
            raise StateInvariantBroken("cached safe base is stale")
        nd = ctx.n_dual
        if not nd._indep(self.safe_base.mask):
            raise StateInvariantBroken("safe base is dependent in the dual")
        if imask & ctx.E1.mask & ~nd._span(self.safe_base.mask):
            raise StateInvariantBroken("state is not dually safe")


def build_exchange_digraph(state: FeasibleState) -> ExchangeDigraph:
    """The three-rule exchange digraph of the mixed method."""
    state.validate()
    ctx = state.ctx
    m, n, nd = ctx.M, ctx.N, ctx.n_dual
    imask = state.I.mask
    e0, e1 = ctx.E0.mask, ctx.E1.mask
    arcs: list[tuple[int, int, str]] = []
    for x in bit_indices(ctx.universe_mask & ~imask):
        bx = 1 << x
        if not m._indep(imask | bx):
            circ = m._fund_circuit(x, imask)
            for y in bit_indices(circ ^ bx):
                arcs.append((x, y, RULE_M))
        if not n._indep(imask | bx):
            circ = n._fund_circuit(x, imask)
            for y in bit_indices(circ & imask & e0):
                arcs.append((y, x, RULE_N))
    safe = state.safe_base.mask
    for x in bit_indices(imask & e1):
        circ = nd._fund_circuit(x, safe)
        for y in bit_indices(circ ^ (1 << x)):
            arcs.append((x, y, RULE_NSTAR))
    return ExchangeDigraph(ctx.ground, arcs)


def _has_arc(state: FeasibleState, x: int, y: int) -> bool:
    """Arc test straight from the three rules, without the full digraph."""
    ctx = state.ctx
    imask = state.I.mask
    bx, by = 1 << x, 1 << y
    if not bx & imask:
        if not ctx.M._indep(imask | bx):
            return bool(ctx.M._fund_circuit(x, imask) & by) and x != y
        return False
    if bx & ctx.E0.mask:
        if by & imask or not by & ctx.universe_mask:
            return False
        if ctx.N._indep(imask | by):
            return False
        return bool(ctx.N._fund_circuit(y, imask) & bx)
    circ = ctx.n_dual._fund_circuit(x, state.safe_base.mask)
    return bool(circ & by) and x != y


def _validate_path(state: FeasibleState, path: tuple[int, ...]) -> None:
    ctx = state.ctx
    if len(path) % 2 == 0 or len(set(path)) != len(path):
        raise PreconditionViolated("path must be an odd sequence of distinct elements")
    first, last = path[0], path[-1]
    if not (1 << first) & ctx.E0.mask or (1 << first) & ctx.N._span(state.I.mask):
        raise PreconditionViolated("path must start at an E0 element unspanned in N")
    if not (1 << last) & ctx.E0.mask or (1 << last) & state.span_m.mask:
        raise PreconditionViolated("path must end at an E0 element unspanned in M")
    for k in range(len(path) - 1):
        if not _has_arc(state, path[k], path[k + 1]):
            raise PreconditionViolated(f"missing arc at position {k}")
    for k in range(len(path)):
        for ell in range(k + 2, len(path)):
            if _has_arc(state, path[k], path[ell]):
                raise PreconditionViolated(f"jumping arc {k}->{ell} present")


def find_aug_path(
    state: FeasibleState,
    prec: list[int] | None = None,
    trace: Trace | None = None,
) -> AugPath | None:
    """Shortest augmenting path from the precedence-least possible source."""
    ctx = state.ctx
    dg = build_exchange_digraph(state)
    span_n = ctx.N._span(state.I.mask)
    source_mask = ctx.E0.mask & ~span_n
    sinks_mask = ctx.E0.mask & ~state.span_m.mask
    order = prec if prec is not None else list(bit_indices(ctx.universe_mask))
    for s in order:
        if not source_mask >> s & 1:
            continue
        path = _bfs_path(dg, s, sinks_mask)
        if path is None:
            continue
        path = _strip_jumps(dg, path, trace)
        out = AugPath(tuple(path))
        _validate_path(state, out.elements)
        return out
    return None


def augment(state: FeasibleState, path: AugPath, trace: Trace | None = None) -> FeasibleState:
    """Apply one augmenting path; all guaranteed properties are asserted."""
    _validate_path(state, path.elements)
    ctx = state.ctx
    m, n, nd = ctx.M, ctx.N, ctx.n_dual
    imask = state.I.mask
    pmask = path.mask
    new = imask ^ pmask
    if not (m._indep(new) and n._indep(new)):
        raise PostconditionFailed("augmented set is not common independent")
    if m._span(new) != m._span(imask | (1 << path.last)):
        raise PostconditionFailed("M-span was not preserved by the augmentation")
    e0 = ctx.E0.mask
    if n._span(new) & e0 != n._span(imask | (1 << path.first)) & e0:
        raise PostconditionFailed("N-span on E0 was not preserved by the augmentation")
    safe = state.safe_base.mask
    safe2 = safe ^ (pmask & ctx.E1.mask)
    if not nd._indep(safe2):
        raise PostconditionFailed("updated dual base is dependent")
    if nd._span(safe) != nd._span(safe2):
        raise PostconditionFailed("dual span was not preserved by the augmentation")
    try:
        out = FeasibleState.create(ctx, ElementSet(ctx.ground, new))
    except StateInvariantBroken as exc:
        raise PostconditionFailed(f"augmented state invalid: {exc}") from exc
    if trace is not None:
        trace.augmentations += 1
        trace.record("augment", before=imask, path=path.elements, after=new)
    return out


def extend_to_nice(
    ctx: MixedContext, state: FeasibleState, trace: Trace | None = None
) -> FeasibleState:
    """Adjoin a common base of the quotient's largest wave.

    Raises ExtensionFailed when no common base exists, which a valid
    augmentation never allows.
    """
    pair = PairContext(ctx.M.contract(state.I), ctx.N.contract(state.I))
    wave = largest_wave(pair)
    base = common_base_B(pair, wave.W)
    if base is None:
        raise ExtensionFailed("quotient wave admits no common base")
    new = FeasibleState.create(ctx, state.I | base)
    after = PairContext(ctx.M.contract(new.I), ctx.N.contract(new.I))
    if not check_cond_plus(after):
        raise PostconditionFailed("extension did not reach a nice state")
    if trace is not None:
        trace.extensions += 1
        trace.record(
            "extend", before=state.I.mask, added=base.mask, wave=wave.W.mask
        )
    return new


def key_step(
    ctx: MixedContext,
    state: FeasibleState,
    e: int,
    trace: Trace | None = None,
    prec: list[int] | None = None,
) -> FeasibleState:
    """Grow the state until element ``e`` of E0 is spanned in N."""
    if not (1 << e) & ctx.E0.mask:
        raise PreconditionViolated("target element must lie in E0")
    size = ctx.universe_mask.bit_count()
    cap = size * (size + 2) + 1
    rounds = 0
    while not ctx.N._span(state.I.mask) >> e & 1:
        rounds += 1
        if rounds > cap:
            raise Stuck(f"iteration cap {cap} reached while element {e} unspanned")
        path = find_aug_path(state, prec=prec, trace=trace)
        if path is None:
            raise Stuck(f"no augmenting path while element {e} is unspanned")
        before0 = ctx.N._span(state.I.mask) & ctx.E0.mask
        state = augment(state, path, trace)
        state = extend_to_nice(ctx, state, trace)
        if before0 & ~(ctx.N._span(state.I.mask) & ctx.E0.mask):
            raise PostconditionFailed("N-span on E0 stopped being ascending")
    return state


def mixed_solve(
    m: Matroid, split: SplitInput, trace: Trace | None = None
) -> IntersectionCertificate:
    """Wave removal plus the mixed augmenting loop, with a verified certificate."""
    split.validate()
    n = split.N
    if m.universe_mask != n.universe_mask or m.ground.labels != n.ground.labels:
        raise UniverseMismatch("pair members need a shared universe")
    ground = m.ground
    pair = PairContext(m, n)
    wave = largest_wave(pair)
    e_m = wave.W
    e_n = ElementSet(ground, m.universe_mask & ~e_m.mask)
    if trace is not None:
        trace.record("wave", W=e_m.mask, witness=wave.witness.mask)

    mq = m.contract(e_m)
    nq = n.delete(e_m)
    if not check_cond_plus(PairContext(mq, nq)):
        raise PostconditionFailed("quotient after wave removal is not clean")

    ctx = MixedContext(
        mq,
        nq,
        ElementSet(ground, split.E0.mask & e_n.mask),
        ElementSet(ground, split.E1.mask & e_n.mask),
    )
    state = FeasibleState.create(ctx, ElementSet(ground, 0))
    for e in bit_indices(ctx.E0.mask):
        if not ctx.N._span(state.I.mask) >> e & 1:
            state = key_step(ctx, state, e, trace)

    rest = ElementSet(ground, ctx.E1.mask & ~state.I.mask)
    tail_m = mq.contract(state.I).restrict(rest)
    tail_n = nq.onto(rest)
    tail = edmonds_solve(PairContext(tail_m, tail_n))
    if len(tail.I) != tail_n.rank():
        raise Stuck("cofinitary tail admits no spanning base")

    imask = wave.witness.mask | state.I.mask | tail.I.mask
    cert = IntersectionCertificate(
        ElementSet(ground, imask), e_m, e_n
    )
    if not verify_certificate(m, n, cert):
        raise PostconditionFailed("mixed certificate failed raw verification")
    return cert
