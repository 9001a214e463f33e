"""Hopf *-algebra structure on presented algebras: coproduct, counit and
antipode tables on generators, extended (anti)homomorphically, with a
corpus-based axiom checker.

Antipode tables for built-in algebras are not typed in: they are solved for
from the antipode axiom with a bounded-degree ansatz, then frozen on the
structure object.
"""

from __future__ import annotations

import json

from .algebra import NCPoly, _accum
from .linalg import solve_field
from .exprparse import base_env, parse_scalar, scalar_to_str
from .scalars import ONE, QScalar, ZERO


class HopfError(ValueError):
    pass


class Tensor:
    """Sum of elementary tensors with a fixed number of legs; every leg is a
    normal-form word, coefficients collected in front."""

    __slots__ = ("pres", "nlegs", "terms")

    def __init__(self, pres, nlegs, terms):
        self.pres = pres
        self.nlegs = nlegs
        self.terms = terms

    @classmethod
    def of_poly(cls, p):
        return cls(p.pres, 1, {(w,): c for w, c in p.terms.items()})

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            _accum(out, k, c)
        return Tensor(self.pres, self.nlegs, out)

    def __sub__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            _accum(out, k, -c)
        return Tensor(self.pres, self.nlegs, out)

    def scale(self, c):
        if isinstance(c, int):
            c = QScalar.from_int(c)
        if c.is_zero():
            return Tensor(self.pres, self.nlegs, {})
        return Tensor(self.pres, self.nlegs, {k: c * v for k, v in self.terms.items()})

    def mul(self, other):
        """Legwise product, re-normalizing every leg."""
        if self.nlegs != other.nlegs:
            raise HopfError("tensor leg mismatch")
        pres = self.pres
        out = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                # each leg product may split into several normal words
                pieces = [(k1[i] + k2[i]) for i in range(self.nlegs)]
                expanded = [((), c1 * c2)]
                for leg in pieces:
                    nf = pres.normal_form_word(leg)
                    expanded = [
                        (key + (w,), c * cw)
                        for key, c in expanded
                        for w, cw in nf.items()
                    ]
                for key, c in expanded:
                    _accum(out, key, c)
        return Tensor(pres, self.nlegs, out)

    def star_legwise(self):
        pres = self.pres
        out = {}
        mode = pres.star_mode
        for key, c in self.terms.items():
            coeff = c.star(mode)
            new_legs = []
            for w in key:
                sw, sc = pres.star_word(w)
                nf = pres.normal_form_word(sw)
                new_legs.append((nf, sc))
            expanded = [((), coeff)]
            for nf, sc in new_legs:
                expanded = [
                    (k + (w,), cc * sc * cw)
                    for k, cc in expanded
                    for w, cw in nf.items()
                ]
            for k, cc in expanded:
                _accum(out, k, cc)
        return Tensor(pres, self.nlegs, out)

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return (isinstance(other, Tensor) and self.pres is other.pres
                and self.nlegs == other.nlegs and self.terms == other.terms)

    def __repr__(self):
        parts = []
        for key, c in sorted(self.terms.items()):
            legs = " (x) ".join(" ".join(w) if w else "1" for w in key)
            parts.append(f"({scalar_to_str(c)})*[{legs}]")
        return " + ".join(parts) if parts else "0"


class HopfStructure:
    """Coproduct/counit/antipode tables on generators."""

    def __init__(self, pres, delta, counit, antipode):
        self.pres = pres
        self.delta = delta          # gen -> Tensor(2)
        self.counit_table = counit  # gen -> QScalar
        self.antipode_table = antipode  # gen -> NCPoly
        self._cop_cache = {}
        self._iter_cache = {}

    # -- algebra maps -----------------------------------------------------

    def coproduct_word(self, w):
        hit = self._cop_cache.get(w)
        if hit is not None:
            return hit
        pres = self.pres
        out = Tensor(pres, 2, {((), ()): ONE})
        for g in w:
            out = out.mul(self.delta[g])
        self._cop_cache[w] = out
        return out

    def coproduct(self, p):
        pres = self.pres
        total = Tensor(pres, 2, {})
        for w, c in p.terms.items():
            total = total + self.coproduct_word(tuple(w)).scale(c)
        return total

    def counit_word(self, w):
        v = ONE
        for g in w:
            v = v * self.counit_table[g]
            if v.is_zero():
                break
        return v

    def counit(self, p):
        total = ZERO
        for w, c in p.terms.items():
            total = total + c * self.counit_word(w)
        return total

    def antipode(self, p):
        pres = self.pres
        total = pres.zero()
        for w, c in p.terms.items():
            prod = pres.one()
            for g in reversed(w):
                prod = prod * self.antipode_table[g]
            total = total + prod.scale(c)
        return total

    def iterated_coproduct(self, p, m):
        """(Delta (x) id^{m-2}) ... Delta, as an m-leg tensor."""
        if m < 1:
            raise HopfError("iterated coproduct needs m >= 1")
        total = Tensor(self.pres, m, {})
        for w, c in p.terms.items():
            total = total + self.iterated_coproduct_word(w, m).scale(c)
        return total

    def iterated_coproduct_word(self, w, m):
        if m < 1:
            raise HopfError("iterated coproduct needs m >= 1")
        w = tuple(w)
        if m == 1:
            return Tensor(self.pres, 1, {(w,): ONE})
        key = (w, m)
        hit = self._iter_cache.get(key)
        if hit is not None:
            return hit
        out = {}
        for legs, c in self.iterated_coproduct_word(w, m - 1).terms.items():
            for hkey, hc in self.coproduct_word(legs[0]).terms.items():
                _accum(out, hkey + legs[1:], c * hc)
        cur = Tensor(self.pres, m, out)
        self._iter_cache[key] = cur
        return cur


# ---------------------------------------------------------------------------


def derive_antipode(pres, delta, counit, max_degree=1):
    """Solve m(S (x) id) Delta(g) = eps(g) 1 = m(id (x) S) Delta(g) for the
    generator antipodes with a degree-bounded ansatz, over Q(s)."""
    words = pres.normal_words(max_degree)
    gens = pres.generators
    unknowns = [(g, w) for g in gens for w in words]
    col = {k: i for i, k in enumerate(unknowns)}
    rows = []
    rhs = []

    def add_equations(g, left):
        # target word basis -> linear equation per basis word
        eq = {}
        target = {(): counit[g]}
        for (w1, w2), c in delta[g].terms.items():
            if left:
                # sum_h S-coeff over ansatz: S(w1-part) * w2
                anchor, other = w1, w2
            else:
                anchor, other = w2, w1
            if len(anchor) != 1:
                # products of generators in a coproduct leg: expand the
                # ansatz multiplicatively is not linear; generator tables
                # only is supported (matrix coalgebras and group-likes)
                raise HopfError("antipode solver needs generator-only coproduct legs")
            a = anchor[0]
            for w in words:
                prod = (NCPoly(pres, {w: ONE}) * NCPoly(pres, {other: ONE})
                        if left else
                        NCPoly(pres, {other: ONE}) * NCPoly(pres, {w: ONE}))
                for u, cu in prod.terms.items():
                    eq.setdefault(u, {})
                    key = (a, w)
                    eq[u][key] = eq[u].get(key, ZERO) + c * cu
        all_words = set(eq) | set(target)
        for u in sorted(all_words, key=pres.word_key):
            row = [ZERO] * len(unknowns)
            for key, cv in eq.get(u, {}).items():
                row[col[key]] = row[col[key]] + cv
            rows.append(row)
            rhs.append(target.get(u, ZERO))

    for g in gens:
        add_equations(g, left=True)
        add_equations(g, left=False)
    sol = solve_field(rows, rhs)
    table = {}
    for g in gens:
        terms = {}
        for w in words:
            c = sol[col[(g, w)]]
            if not c.is_zero():
                terms[w] = c
        table[g] = NCPoly(pres, terms)
    return table


def matrix_hopf(pres, n, gen_name):
    """Hopf structure with matrix coalgebra shape on the generators
    v^k_l: Delta(v^k_l) = sum_j v^k_j (x) v^j_l, eps(v^k_l) = delta_kl."""
    delta = {}
    counit = {}
    for k in range(1, n + 1):
        for l in range(1, n + 1):
            g = gen_name(k, l)
            terms = {}
            for j in range(1, n + 1):
                terms[((gen_name(k, j),), (gen_name(j, l),))] = ONE
            delta[g] = Tensor(pres, 2, terms)
            counit[g] = ONE if k == l else ZERO
    antipode = derive_antipode(pres, delta, counit, max_degree=1)
    return HopfStructure(pres, delta, counit, antipode)


def slq2_hopf(pres):
    return matrix_hopf(pres, 2, lambda i, j: f"v{i}{j}")


# ---------------------------------------------------------------------------
# axiom corpus checks
# ---------------------------------------------------------------------------


def hopf_axiom_report(H, degree=3):
    """Check coassociativity, counit, antipode and star compatibility on all
    normal words up to the given degree, and that the structure maps kill
    the relation ideal.  Returns a list of (check, ok, witness)."""
    pres = H.pres
    words = pres.normal_words(degree)
    results = []

    def poly_of(w):
        return NCPoly(pres, {w: ONE})

    bad = None
    for w in words:
        d = H.coproduct(poly_of(w))
        left = _expand_leg(H, d, 0)
        right = _expand_leg(H, d, 1)
        if left != right:
            bad = w
            break
    results.append(("coassociativity", bad is None, bad))

    bad = None
    for w in words:
        p = poly_of(w)
        d = H.coproduct(p)
        lhs = _contract_counit(H, d, 0)
        rhs = _contract_counit(H, d, 1)
        if lhs != p or rhs != p:
            bad = w
            break
    results.append(("counit", bad is None, bad))

    bad = None
    for w in words:
        p = poly_of(w)
        d = H.coproduct(p)
        left = pres.zero()
        right = pres.zero()
        for (w1, w2), c in d.terms.items():
            left = left + (H.antipode(poly_of(w1)) * poly_of(w2)).scale(c)
            right = right + (poly_of(w1) * H.antipode(poly_of(w2))).scale(c)
        target = pres.one().scale(H.counit(p))
        if left != target or right != target:
            bad = w
            break
    results.append(("antipode", bad is None, bad))

    if pres.star is not None:
        bad = None
        for w in words:
            p = poly_of(w)
            if H.coproduct(p.star()) != H.coproduct(p).star_legwise():
                bad = w
                break
        results.append(("star_compatibility", bad is None, bad))

    bad = None
    for lhs, rhs in pres.rules:
        rel = NCPoly(pres, pres.normal_form_terms(dict(rhs)))
        d_lhs = H.coproduct_word(lhs)
        if d_lhs != H.coproduct(rel):
            bad = lhs
            break
        if H.counit_word(lhs) != H.counit(rel):
            bad = lhs
            break
        s_lhs = pres.one()
        for g in reversed(lhs):
            s_lhs = s_lhs * H.antipode_table[g]
        if s_lhs != H.antipode(rel):
            bad = lhs
            break
    results.append(("relation_consistency", bad is None, bad))
    return results


def _expand_leg(H, tensor, leg):
    pres = H.pres
    out = {}
    for key, c in tensor.terms.items():
        head = NCPoly(pres, {key[leg]: ONE})
        for hkey, hc in H.coproduct(head).terms.items():
            full = key[:leg] + hkey + key[leg + 1:]
            _accum(out, full, c * hc)
    return Tensor(pres, tensor.nlegs + 1, out)


def _contract_counit(H, tensor, leg):
    pres = H.pres
    out = pres.zero()
    for key, c in tensor.terms.items():
        v = H.counit_word(key[leg])
        if v.is_zero():
            continue
        other = key[1 - leg]
        out = out + NCPoly(pres, {other: ONE}).scale(c * v)
    return out


# ---------------------------------------------------------------------------
# structured-text interface
# ---------------------------------------------------------------------------


def load_hopf(doc, pres, validate_degree=2):
    """Load Delta/eps/S tables keyed by generator name and validate them on
    the axiom corpus before use."""
    if isinstance(doc, str):
        with open(doc) as fh:
            doc = json.load(fh)
    env = base_env({name: val for name, val in pres.params.items()})
    delta = {}
    counit = {}
    antipode = {}
    for g in pres.generators:
        entries = doc["delta"][g]
        terms = {}
        for item in entries:
            key = (tuple(item["left"].split()), tuple(item["right"].split()))
            _accum(terms, key, parse_scalar(item["coeff"], env))
        delta[g] = Tensor(pres, 2, terms)
        counit[g] = parse_scalar(doc["counit"][g], env)
        sterm = {}
        for item in doc["antipode"][g]:
            _accum(sterm, tuple(item["word"].split()), parse_scalar(item["coeff"], env))
        antipode[g] = pres.poly(sterm)
    H = HopfStructure(pres, delta, counit, antipode)
    failures = [name for name, ok, _ in hopf_axiom_report(H, validate_degree) if not ok]
    if failures:
        raise HopfError(f"hopf structure fails axiom checks: {failures}")
    return H


def hopf_to_doc(H):
    doc = {"delta": {}, "counit": {}, "antipode": {}}
    for g in H.pres.generators:
        doc["delta"][g] = [
            {"coeff": scalar_to_str(c), "left": " ".join(k[0]), "right": " ".join(k[1])}
            for k, c in sorted(H.delta[g].terms.items())
        ]
        doc["counit"][g] = scalar_to_str(H.counit_table[g])
        doc["antipode"][g] = [
            {"coeff": scalar_to_str(c), "word": " ".join(w)}
            for w, c in H.antipode_table[g].sorted_terms()
        ]
    return doc
