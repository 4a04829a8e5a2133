"""Compare the diagrammatic integral with the Wick pairing under Lie weights.

Random perturbed Gaussians over one or two labels; prints both sides per
trial and a final count of disagreements.
"""

import argparse
import random
from fractions import Fraction

from aarhus.enumerate import enumerate_diagrams
from aarhus.gaussian import LinkingMatrix, PerturbedGaussian, integrate_fg
from aarhus.gradedsum import GradedSum
from aarhus.weights import PRESETS, tg_closed, tg_open, wick_pair


def random_gaussian(rng, labels, n, k):
    pool = [sc.canonical for m in range(1, n + 1)
            for sc in enumerate_diagrams("BplusX", m, labels)]
    while True:
        m = [[Fraction(rng.randint(-3, 3)) for _ in labels] for _ in labels]
        m = [[m[min(i, j)][max(i, j)] for j in range(len(labels))] for i in range(len(labels))]
        cov = LinkingMatrix(labels, m)
        if cov.is_invertible():
            break
    terms = [(d, Fraction(rng.randint(-3, 3), rng.randint(1, 4)))
             for d in rng.sample(pool, min(k, len(pool)))]
    return PerturbedGaussian(cov, GradedSum.one(n) + GradedSum(terms, n))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=10)
    ap.add_argument("--degree", type=int, default=3)
    ap.add_argument("--terms", type=int, default=4)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    bad = 0
    for t in range(args.trials):
        labels = rng.choice([["x"], ["x", "y"]])
        pg = random_gaussian(rng, labels, args.degree, args.terms)
        integral = integrate_fg(pg, args.degree)
        for name, make in sorted(PRESETS.items()):
            g = make()
            lhs = tg_closed(g, integral)
            rhs = wick_pair(tg_open(g, pg.perturbation), pg.covariance, g, args.degree)
            bad += lhs != rhs
            print(f"trial {t:>3} {name} labels={','.join(labels)}  {lhs}  {rhs}")
    print(f"disagreements: {bad}")


if __name__ == "__main__":
    main()
