"""Seeded sweep over random tame words and commutator specs.

Reports timings and counts; exits nonzero on the first failure.

    python3 scripts/property_sweep.py --seed 0 --words 100 --specs 50
"""

import argparse
import random
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from gen import alternating_word, compose_word, random_spec, tame_word  # noqa: E402

from polyauto.length import length  # noqa: E402
from polyauto.replay import replay_stable, replay_tame  # noqa: E402
from polyauto.structure import stable_tame_pipeline  # noqa: E402
from polyauto.tameness import TameCertificate, recompose, tame_check  # noqa: E402


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--words", type=int, default=100)
    ap.add_argument("--specs", type=int, default=50)
    args = ap.parse_args()
    rng = random.Random(args.seed)

    slowest = 0.0
    for i in range(args.words):
        F = compose_word(tame_word(rng))
        t0 = time.perf_counter()
        cert = tame_check(F)
        if not (isinstance(cert, TameCertificate) and recompose(cert) == F and replay_tame(cert)):
            print(f"word {i}: round trip failed for {F}")
            return 1
        k = rng.randint(1, 4)
        G = compose_word(alternating_word(rng, k))
        if length(G) != k:
            print(f"word {i}: expected length {k} for {G}")
            return 1
        slowest = max(slowest, time.perf_counter() - t0)
    print(f"{args.words} tame words and alternating words ok, slowest {slowest:.2f} s")

    slowest = 0.0
    for i in range(args.specs):
        spec = random_spec(rng)
        t0 = time.perf_counter()
        cert = stable_tame_pipeline(spec)
        replay_stable(cert)
        slowest = max(slowest, time.perf_counter() - t0)
    print(f"{args.specs} commutator specs ok, slowest pipeline {slowest:.2f} s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
