"""Packing/covering decomposition via the product reduction.

A family of matroids on one universe is lifted to a single intersection
instance on the product of the universe with the index set: one matroid
is the direct sum of re-indexed family members, the other allows at
most one copy per original element.  The certificate of the lifted
solve splits the universe into a part that the family packs and a part
it covers.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    ElementSet,
    GroundSet,
    InvalidInputPackCov,
    Matroid,
    PartitionMatroid,
    PostconditionFailed,
    RelabelMatroid,
    TooLarge,
    UniverseMismatch,
    bit_indices,
    direct_sum,
    exhaustive_bound,
)
from .intersect import (
    IntersectionCertificate,
    SplitInput,
    Trace,
    edmonds_solve,
    mixed_solve,
    verify_certificate,
)
from .waves import PairContext

LIFT_BOUND = 24


@dataclass(frozen=True)
class MatroidFamily:
    """Matroids sharing one full ground set."""

    ground: GroundSet
    members: tuple[Matroid, ...]

    def __post_init__(self) -> None:
        if not self.members:
            raise UniverseMismatch("family needs at least one member")
        for m in self.members:
            if m.ground.labels != self.ground.labels:
                raise UniverseMismatch("family members live on different ground sets")
            if m.universe_mask != self.ground.full_mask:
                raise UniverseMismatch("family members must use the full ground set")

    @property
    def k(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class LiftedFamily:
    """The product instance, with both directions of the index mapping."""

    family: MatroidFamily
    ground: GroundSet
    M: Matroid
    N: Matroid

    @property
    def k(self) -> int:
        return self.family.k

    def product_index(self, e: int, i: int) -> int:
        return e * self.k + i

    def split_index(self, idx: int) -> tuple[int, int]:
        return divmod(idx, self.k)


def lift_family(fam: MatroidFamily, bound: int | None = None) -> LiftedFamily:
    """Copies of the members on disjoint slices, against per-element blocks."""
    k = fam.k
    base = fam.ground
    total = k * base.size
    limit = bound if bound is not None else exhaustive_bound(LIFT_BOUND)
    if total > limit:
        raise TooLarge(f"lifted universe of {total} elements exceeds {limit}")
    labels = tuple(
        f"{base.label(e)}@{i}" for e in range(base.size) for i in range(k)
    )
    ground = GroundSet(labels)
    copies = []
    for i, member in enumerate(fam.members):
        mapping = {e: e * k + i for e in range(base.size)}
        copies.append(RelabelMatroid(ground, member, mapping))
    m = direct_sum(copies)
    blocks = tuple(
        (((1 << k) - 1) << (e * k), 1) for e in range(base.size)
    )
    n = PartitionMatroid(ground, blocks)
    return LiftedFamily(fam, ground, m, n)


@dataclass(frozen=True)
class PackCovResult:
    """A packing of one part and a covering of the other.

    ``J`` holds, per member, the full slice of the lifted solution for
    auditability; ``product_labels`` fixes the index mapping used.
    """

    E_p: ElementSet
    E_c: ElementSet
    S: tuple[ElementSet, ...]
    I: tuple[ElementSet, ...]
    J: tuple[ElementSet, ...]
    product_labels: tuple[str, ...]


def packcov_solve(
    fam: MatroidFamily,
    solver: str = "classic",
    e1: ElementSet | None = None,
    trace: Trace | None = None,
) -> PackCovResult:
    """Solve the lifted instance and extract the two-part decomposition."""
    lifted = lift_family(fam)
    if solver == "classic":
        cert = edmonds_solve(PairContext(lifted.M, lifted.N), trace)
    elif solver == "mixed":
        e1 = e1 if e1 is not None else lifted.ground.empty()
        e0 = ElementSet(lifted.ground, lifted.ground.full_mask & ~e1.mask)
        cert = mixed_solve(lifted.M, SplitInput(lifted.N, e0, e1), trace)
    else:
        raise InvalidInputPackCov(f"unknown solver {solver!r}")

    base = fam.ground
    k = fam.k
    ec = 0
    for idx in bit_indices(cert.E_N.mask):
        e, _i = lifted.split_index(idx)
        ec |= 1 << e
    ep = base.full_mask & ~ec

    js = []
    for i in range(k):
        j = 0
        for e in range(base.size):
            if cert.I.mask >> lifted.product_index(e, i) & 1:
                j |= 1 << e
        js.append(j)

    result = PackCovResult(
        ElementSet(base, ep),
        ElementSet(base, ec),
        tuple(ElementSet(base, j & ep) for j in js),
        tuple(ElementSet(base, j & ec) for j in js),
        tuple(ElementSet(base, j) for j in js),
        lifted.ground.labels,
    )
    if not verify_packcov(fam, result):
        raise PostconditionFailed("extracted packing/covering failed verification")
    return result


def verify_packcov(fam: MatroidFamily, res: PackCovResult) -> bool:
    """Re-check every decomposition invariant from raw oracles."""
    base = fam.ground
    ep, ec = res.E_p.mask, res.E_c.mask
    if ep & ec or ep | ec != base.full_mask:
        return False
    if len(res.S) != fam.k or len(res.I) != fam.k:
        return False
    seen = 0
    for i, member in enumerate(fam.members):
        s = res.S[i].mask
        if s & ~ep or s & seen:
            return False
        seen |= s
        if ep & ~member._span(s):
            return False
    covered = 0
    for i, member in enumerate(fam.members):
        part = res.I[i].mask
        if part & ~ec:
            return False
        onto = member.onto(ElementSet(base, ec))
        if not onto._indep(part):
            return False
        covered |= part
    return covered == ec


def derive_intersection(
    m: Matroid, n: Matroid, pc: PackCovResult
) -> IntersectionCertificate:
    """Intersection certificate from a packing/covering of (M, dual of N).

    The packed part carries a base of M drawn from M's packing member;
    the covered part carries an independent spanning subset of N drawn
    from M's covering member.
    """
    fam = MatroidFamily(m.ground, (m, n.dual()))
    if not verify_packcov(fam, pc):
        raise InvalidInputPackCov("result is not a packing/covering for (M, N*)")
    s_m = pc.S[0]
    r_n = pc.I[1]
    i_m = m._max_indep(s_m.mask)
    if pc.E_p.mask & ~m._span(i_m):
        raise InvalidInputPackCov("packing member does not span the packed part in M")
    candidates = pc.E_c.mask & ~r_n.mask
    i_n = n._max_indep(candidates)
    if pc.E_c.mask & ~n._span(i_n):
        raise InvalidInputPackCov("covering member does not span the covered part in N")
    cert = IntersectionCertificate(
        ElementSet(m.ground, i_m | i_n), pc.E_p, pc.E_c
    )
    if not verify_certificate(m, n, cert):
        raise PostconditionFailed("derived certificate failed raw verification")
    return cert
