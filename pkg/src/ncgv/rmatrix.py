"""R-matrix data: entries of R and R^{-1} over Q(s) plus the r-form
normalization constant c, with exact inverse and Yang-Baxter checks on load.

Index convention: R maps e_j (x) e_l to sum_{i,k} R^{ik}_{jl} e_i (x) e_k;
the stored matrix is indexed by composite row (i,k) and column (j,l).
The universal r-form on matrix generators is r(v^i_j (x) v^k_l) = c*R^{ik}_{jl}.
"""

from __future__ import annotations

import json
from importlib import resources

from .exprparse import base_env, parse_scalar
from .scalars import ONE, ZERO


class RMatrixError(ValueError):
    pass


class RMatrixData:
    def __init__(self, name, n, c, R, Rinv, check=True):
        self.name = name
        self.n = n
        self.c = c
        self.c_inv = c.inverse()
        self.R = R          # dict (i,k,j,l) -> QScalar, 1-based indices
        self.Rinv = Rinv
        if check:
            self.validate()

    def entry(self, i, k, j, l):
        return self.R.get((i, k, j, l), ZERO)

    def inv_entry(self, i, k, j, l):
        return self.Rinv.get((i, k, j, l), ZERO)

    def r_form(self, i, j, k, l):
        """r(v^i_j (x) v^k_l) = c * R^{ik}_{jl}."""
        return self.c * self.entry(i, k, j, l)

    def rbar_form(self, i, j, k, l):
        """rbar(v^i_j (x) v^k_l) = c^{-1} * (R^{-1})^{ik}_{jl}."""
        return self.c_inv * self.inv_entry(i, k, j, l)

    def validate(self):
        n = self.n
        rng = range(1, n + 1)
        for i in rng:
            for k in rng:
                for j in rng:
                    for l in rng:
                        acc = ZERO
                        for a in rng:
                            for b in rng:
                                acc = acc + self.entry(i, k, a, b) * self.inv_entry(a, b, j, l)
                        want = ONE if (i == j and k == l) else ZERO
                        if acc != want:
                            raise RMatrixError(
                                f"R*Rinv != id at ({i}{k},{j}{l}) in {self.name!r}")
        if not self._yang_baxter():
            raise RMatrixError(f"Yang-Baxter equation fails for {self.name!r}")

    def _yang_baxter(self):
        # R12 R13 R23 = R23 R13 R12 on the triple tensor space, exactly
        n = self.n
        rng = range(1, n + 1)

        def r12(a, b, c, d, e, f):
            return self.entry(a, b, d, e) if c == f else ZERO

        def r13(a, b, c, d, e, f):
            return self.entry(a, c, d, f) if b == e else ZERO

        def r23(a, b, c, d, e, f):
            return self.entry(b, c, e, f) if a == d else ZERO

        def compose(f1, f2, out, inn):
            # (f1 . f2)(out; inn) with summation over the middle indices
            acc = ZERO
            for m1 in rng:
                for m2 in rng:
                    for m3 in rng:
                        acc = acc + f1(*out, m1, m2, m3) * f2(m1, m2, m3, *inn)
            return acc

        for a in rng:
            for b in rng:
                for c in rng:
                    for d in rng:
                        for e in rng:
                            for f in rng:
                                lhs = ZERO
                                rhs = ZERO
                                for m1 in rng:
                                    for m2 in rng:
                                        for m3 in rng:
                                            mid = (m1, m2, m3)
                                            lhs = lhs + r12(a, b, c, *mid) * compose(
                                                r13, r23, mid, (d, e, f))
                                            rhs = rhs + r23(a, b, c, *mid) * compose(
                                                r13, r12, mid, (d, e, f))
                                if lhs != rhs:
                                    return False
        return True


def _grid_to_dict(grid, n, env):
    out = {}
    for row in range(n * n):
        for col in range(n * n):
            v = parse_scalar(grid[row][col], env)
            if not v.is_zero():
                i, k = divmod(row, n)
                j, l = divmod(col, n)
                out[(i + 1, k + 1, j + 1, l + 1)] = v
    return out


def load_rmatrix(doc, check=True):
    """Load from document form {"n":..., "c":..., "R": [[...]], "Rinv": [[...]]}."""
    if isinstance(doc, str):
        with open(doc) as fh:
            doc = json.load(fh)
    env = base_env()
    n = int(doc["n"])
    c = parse_scalar(doc["c"], env)
    R = _grid_to_dict(doc["R"], n, env)
    Rinv = _grid_to_dict(doc["Rinv"], n, env)
    return RMatrixData(doc.get("name", "rmatrix"), n, c, R, Rinv, check=check)


def builtin_rmatrix(name="slq2", check=True):
    if name != "slq2":
        raise RMatrixError(f"no builtin R-matrix named {name!r}")
    text = resources.files("ncgv.data").joinpath("slq2_rmatrix.json").read_text()
    return load_rmatrix(json.loads(text), check=check)
