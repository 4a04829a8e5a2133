"""Write the sample input files under data/.

These are external inputs, not derived by the kernel.  The unknot value uses
the wheels formula Omega = exp(sum b_2n w_2n) with b_2 = 1/48, truncated at
degree 2.  The surgery data for the +-1 framed unknots and the Hopf link keep
only the Gaussian part and the degree-2 wheel correction.  Treat the
numbers as illustrative: no test asserts them.
"""

from __future__ import annotations

import argparse
from fractions import Fraction
from pathlib import Path

from aarhus import io
from aarhus.diagrams import strut, w2
from aarhus.gaussian import LinkingMatrix, aarhus0
from aarhus.gradedsum import GradedSum
from aarhus.maps import chi, du_product, exp_union
from aarhus.weights import so3

N = 2


def gaussian(entries, labels):
    terms = []
    for i, x in enumerate(labels):
        for j, y in enumerate(labels):
            if i < j:
                terms.append((strut(x, y), entries[i][j]))
            elif i == j:
                terms.append((strut(x, x), Fraction(entries[i][i], 2)))
    return exp_union(GradedSum(terms, N), N)


def wheels(labels):
    s = GradedSum.one(N)
    for x in labels:
        s = du_product(s, GradedSum.one(N)
                       + GradedSum.of(w2(x), Fraction(1, 48), N))
    return s


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "data"))
    out = Path(ap.parse_args().out)
    out.mkdir(parents=True, exist_ok=True)

    nu = chi(wheels(["x"]), ["x"])
    io.write(out / "nu.aup", nu, space="AupX", labels=["x"])
    for name, f in (("uplus", 1), ("uminus", -1)):
        b = du_product(gaussian([[f]], ["x"]), wheels(["x"]))
        z = chi(b, ["x"])
        io.write(out / f"{name}.aup", z, space="AupX", labels=["x"])
        # unnormalized value, the form the normalized invariant consumes
        io.write(out / f"{name}.ae", aarhus0(z, N, ["x"]), space="Aempty", labels=[])
    hopf = [[0, 1], [1, 0]]
    b = du_product(gaussian(hopf, ["x", "y"]), wheels(["x", "y"]))
    io.write(out / "hopf.aup", chi(b, ["x", "y"]), space="AupX", labels=["x", "y"])
    io.write(out / "hopf.mat", LinkingMatrix(("x", "y"), hopf))
    io.write(out / "so3.lie", so3())
    print(f"wrote sample data to {out}")


if __name__ == "__main__":
    main()
