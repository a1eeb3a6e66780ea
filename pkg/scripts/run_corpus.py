#!/usr/bin/env python3
"""Run a fuzzed corpus through every solver and report agreement.

For each generated pair the classic solver, the mixed solver (one run
per component-respecting split) and the exhaustive oracles must agree
on the optimum; every certificate is re-verified from raw oracles.
Families go through the packing/covering pipeline and demand graphs
through the orientation solver against the brute orientation scan.
"""

from __future__ import annotations

import argparse
import sys
import time

from matroidkit.core import Stuck, ExtensionFailed
from matroidkit.intersect import SplitInput, Trace, edmonds_solve, mixed_solve, verify_certificate
from matroidkit.oracle import (
    CorpusSpec,
    brute_largest_wave,
    brute_max_common,
    brute_minmax,
    brute_orientations,
    fuzz_corpus,
)
from matroidkit.orient import deficiency_counting_check, orient_solve, verify_outcome
from matroidkit.packcov import packcov_solve, verify_packcov
from matroidkit.waves import PairContext, largest_wave


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--pairs", type=int, default=200)
    parser.add_argument("--families", type=int, default=40)
    parser.add_argument("--graphs", type=int, default=80)
    parser.add_argument("--max-elements", type=int, default=9)
    args = parser.parse_args()

    spec = CorpusSpec(
        seed=args.seed,
        pairs=args.pairs,
        families=args.families,
        graphs=args.graphs,
        max_elements=args.max_elements,
    )
    corpus = fuzz_corpus(spec)
    trace = Trace()
    start = time.time()
    disagreements = 0
    stuck = 0

    mixed_runs = 0
    wave_checks = 0
    for inst in corpus.pairs:
        best, _ = brute_max_common(inst.M, inst.N)
        if best != brute_minmax(inst.M, inst.N):
            disagreements += 1
            print(f"  !! {inst.name}: min-max identity broken")
        classic = edmonds_solve(PairContext(inst.M, inst.N), trace)
        if len(classic.I) != best or not verify_certificate(inst.M, inst.N, classic):
            disagreements += 1
            print(f"  !! {inst.name}: classic solver off optimum")
        for e0, e1 in inst.splits:
            try:
                cert = mixed_solve(inst.M, SplitInput(inst.N, e0, e1), trace)
            except (Stuck, ExtensionFailed) as exc:
                stuck += 1
                print(f"  !! {inst.name}: {type(exc).__name__}: {exc}")
                continue
            mixed_runs += 1
            if len(cert.I) != best or not verify_certificate(inst.M, inst.N, cert):
                disagreements += 1
                print(f"  !! {inst.name}: mixed solver off optimum for E1={e1.labels()}")
        if inst.M.size <= 8:
            wave_checks += 1
            if largest_wave(PairContext(inst.M, inst.N)).W.mask != brute_largest_wave(
                inst.M, inst.N
            ).mask:
                disagreements += 1
                print(f"  !! {inst.name}: wave disagreement")

    for inst in corpus.families:
        res = packcov_solve(inst.family, trace=trace)
        if not verify_packcov(inst.family, res):
            disagreements += 1
            print(f"  !! {inst.name}: packing/covering failed verification")

    for inst in corpus.graphs:
        out = orient_solve(inst.graph, trace=trace)
        feasible = brute_orientations(inst.graph) is not None
        if (out.verdict == "above") != feasible or not verify_outcome(inst.graph, out):
            disagreements += 1
            print(f"  !! {inst.name}: orientation disagreement")
        if out.verdict == "deficient" and not deficiency_counting_check(
            inst.graph, out.v_prime
        ):
            disagreements += 1
            print(f"  !! {inst.name}: counting certificate failed")

    elapsed = time.time() - start
    print(f"seed {spec.seed}: {len(corpus.pairs)} pairs, {len(corpus.families)} families, {len(corpus.graphs)} graphs")
    print(f"  generator coverage : {dict(sorted(corpus.kind_counts.items()))}")
    print(f"  mixed-solver runs  : {mixed_runs} ({wave_checks} wave cross-checks)")
    print(f"  augmentations      : {trace.augmentations}")
    print(f"  extensions         : {trace.extensions}")
    print(f"  chordless repairs  : {trace.repairs}")
    print(f"  stuck/extension err: {stuck}")
    print(f"  disagreements      : {disagreements}")
    print(f"  elapsed            : {elapsed:.1f}s")
    return 1 if disagreements or stuck else 0


if __name__ == "__main__":
    sys.exit(main())
