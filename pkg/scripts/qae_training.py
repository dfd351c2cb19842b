"""Train the autoencoder ansatz over many seeds and tabulate final costs.

    python3 scripts/qae_training.py --seeds 0-19 --method fourier
"""

import argparse
import sys
import time

from qxent import qae
from qxent.cli import to_csv
from qxent.otm import random_ensemble


def seed_range(text: str) -> list[int]:
    lo, _, hi = text.partition("-")
    return list(range(int(lo), int(hi or lo) + 1))


def main(argv=None) -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--seeds", type=seed_range, default=seed_range("0-19"))
    ap.add_argument("--layers", type=int, default=4)
    ap.add_argument("--rank", type=int, default=2)
    ap.add_argument("--max-evals", type=int, default=5000)
    ap.add_argument("--method", choices=["fourier", "coordinate", "fdgrad"], default="fourier")
    args = ap.parse_args(argv)

    ansatz = qae.Ansatz(2, 2, args.layers)
    rows = []
    for s in args.seeds:
        t0 = time.perf_counter()
        ens = random_ensemble(4, args.rank, [s, 20])
        res = qae.train(ens, ansatz, qae.TrainOptions(max_evals=args.max_evals, seed=s, method=args.method))
        rows.append([s, res.cost, res.n_evals, time.perf_counter() - t0])
    sys.stdout.write(to_csv(["seed", "cost", "evaluations", "seconds"], rows))
    worst = max(r[1] for r in rows)
    print(f"# worst cost {worst:.3e}, seeds above 1e-3: {[r[0] for r in rows if r[1] > 1e-3]}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
