"""Hall Lie algebras modulo q-1, Chevalley generators and the quotient algebra.

Elements are sparse dictionaries from iso-class keys to integers.  A
`FieldContext` computes brackets over one finite field with exact
(unreduced) Hall numbers; `Q1` combines a battery of fields and lifts each
coefficient to the unique small integer congruent to it modulo every q-1.
"""

from __future__ import annotations

import itertools
import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import sympy

from . import canon, ffla, hall, rep
from . import modbuild as mb
from .canon import CanonicalQuiver, Vec
from .ffla import Field
from .modbuild import HomSum, IsoKey, Root, TubeHom, TubeNH
from .rep import Rep

Elt = dict  # IsoKey -> int


class NonUniform(ArithmeticError):
    """A coefficient has no integer lift common to all fields of the battery."""


def add(a: Elt, b: Elt, s: int = 1) -> Elt:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + s * v
        if out[k] == 0:
            del out[k]
    return out


def scale(c: int, a: Elt) -> Elt:
    return {k: c * v for k, v in a.items() if c * v}


def fmt(a: Elt) -> str:
    if not a:
        return "0"
    return " + ".join(f"{v}*{k}" for k, v in sorted(a.items(), key=lambda kv: str(kv[0])))


# per-field brackets


class FieldContext:
    """Bracket computations in the Hall Lie algebra over one field."""

    def __init__(self, Q: CanonicalQuiver, F: Field):
        self.Q = Q
        self.F = F
        self.registry: dict = {}
        self._cache: dict = {}

    @property
    def modulus(self) -> int:
        return self.F.q - 1

    def module(self, key: IsoKey) -> Rep:
        if key in self.registry:
            return self.registry[key]
        M = mb.module_for_key(self.Q, self.F, key)
        self.registry[key] = M
        return M

    def key(self, Z: Rep) -> IsoKey:
        k = mb.key_of(Z)
        self.registry.setdefault(k, Z)
        return k

    def expand(self, a: Elt) -> Elt:
        """Replace HomSum keys by their individual homogeneous terms."""
        out: Elt = {}
        for k, v in a.items():
            if isinstance(k, HomSum):
                for c in mb.homogeneous_points(self.Q, self.F):
                    out = add(out, {TubeHom(c, k.ql): v})
            else:
                out = add(out, {k: v})
        return out

    def _candidates(self, X: Rep, Y: Rep) -> dict:
        """Indecomposable middle terms of extensions between X and Y, by key.

        A root dimension vector has a unique indecomposable, so only multiples
        of delta need a search through the extension groups.
        """
        Q = self.Q
        v = canon.vadd(X.dims, Y.dims)
        if canon.chi(Q, v) == 1:
            return {Root(v): self.module(Root(v))}
        if v != canon.vscale(v[0], canon.delta(Q)):
            return {}
        found = {}
        for A, B in ((X, Y), (Y, X)):
            g = rep.ext1(A, B)
            if g.dim == 0:
                continue
            for line in ffla.enumerate_space(self.F, ffla.Subspace.full(self.F, g.dim), "lines"):
                Z = g.middle_term(line.basis[0])
                if rep.is_indecomposable(Z):
                    k = self.key(Z)
                    found.setdefault(k, self.registry[k])
        return found

    def bracket_keys(self, k1: IsoKey, k2: IsoKey) -> Elt:
        """[u_X, u_Y] = sum_Z (F_XY^Z - F_YX^Z) u_Z with exact integer coefficients."""
        if k1 == k2:
            return {}
        hit = self._cache.get((k1, k2))
        if hit is not None:
            return hit
        X, Y = self.module(k1), self.module(k2)
        out: Elt = {}
        for kz, Z in self._candidates(X, Y).items():
            c = hall.hall_number(X, Y, Z) - hall.hall_number(Y, X, Z)
            if c:
                out[kz] = c
        self._cache[(k1, k2)] = out
        self._cache[(k2, k1)] = scale(-1, out)
        return out

    def bracket(self, a: Elt, b: Elt) -> Elt:
        a, b = self.expand(a), self.expand(b)
        out: Elt = {}
        for (k1, v1), (k2, v2) in itertools.product(a.items(), b.items()):
            out = add(out, scale(v1 * v2, self.bracket_keys(k1, k2)))
        return out

    def reduce(self, a: Elt) -> Elt:
        """Coefficients mod q-1, with complete degree-one homogeneous families folded into HomSum."""
        m = self.modulus
        a = self.expand(a)
        out = {k: v % m for k, v in a.items() if v % m}
        pts = mb.homogeneous_points(self.Q, self.F)
        qls = {k.ql for k in out if isinstance(k, TubeHom) and k.degree == 1}
        for ql in qls:
            vals = {out.get(TubeHom(c, ql), 0) for c in pts}
            if len(vals) == 1 and 0 not in vals:
                v = vals.pop()
                for c in pts:
                    del out[TubeHom(c, ql)]
                out[HomSum(ql)] = v
        return out

    def equal(self, a: Elt, b: Elt) -> bool:
        return not self.reduce(add(a, b, -1))


def canonical_elt(Q: CanonicalQuiver, F: Field, a: Elt) -> Elt:
    """Rewrite regular root keys into tube coordinates and back to the canonical form."""
    out: Elt = {}
    for k, v in a.items():
        out = add(out, {mb.canonical_key(Q, F, k): v})
    return out


# several fields at once


class Q1:
    """Brackets over a battery of fields, lifted to integers."""

    def __init__(self, Q: CanonicalQuiver, fields: Iterable[int]):
        self.Q = Q
        self.fields = tuple(fields)
        self.ctx = {q: FieldContext(Q, ffla.field_of_order(q)) for q in self.fields}

    def lift(self, per_field: dict[int, Elt]) -> Elt:
        keys = set()
        for q, a in per_field.items():
            for k in a:
                if isinstance(k, TubeHom):
                    raise NonUniform(f"field-dependent key {k} over GF({q})")
                keys.add(k)
        out: Elt = {}
        for k in keys:
            c = hall.crt_lift({q: a.get(k, 0) for q, a in per_field.items()})
            if c is None:
                raise NonUniform(f"no common integer lift for {k}")
            if c:
                out[k] = c
        return out

    def bracket(self, a: Elt, b: Elt) -> Elt:
        return self.lift({q: c.reduce(c.bracket(a, b)) for q, c in self.ctx.items()})

    def per_field(self, a: Elt, b: Elt) -> dict[int, Elt]:
        return {q: c.reduce(c.bracket(a, b)) for q, c in self.ctx.items()}


# tubes


def tube_bracket(Q: CanonicalQuiver, F: Field, k1: IsoKey, k2: IsoKey) -> Elt:
    """Closed-form bracket of two modules in the same tube, quasi-top convention."""
    c1 = mb.tube_coordinates(Q, F, k1)
    c2 = mb.tube_coordinates(Q, F, k2)
    if c1 is None or c2 is None or c1[0] != c2[0]:
        raise ValueError("keys are not in one tube")
    tube, i, j = c1
    _, f, g = c2
    if tube[0] == "hom":
        return {}
    arm = tube[1]
    p = Q.weights[arm - 1]

    def key(top: int, ql: int) -> IsoKey:
        k = TubeNH(arm, mb.socle_index(top, ql, p), ql)
        return mb.canonical_key(Q, F, k)

    out: Elt = {}
    if (i + j - f) % p == 0:
        out = add(out, {key(i, j + g): 1})
    if (f + g - i) % p == 0:
        out = add(out, {key(f, j + g): -1})
    return out


@dataclass
class TubeReport:
    type_name: str
    q: int
    pairs: int = 0
    mismatches: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def tube_keys(Q: CanonicalQuiver, F: Field, arm: int, max_ql: int) -> list[IsoKey]:
    p = Q.weights[arm - 1]
    return [mb.canonical_key(Q, F, TubeNH(arm, s, l)) for l in range(1, max_ql + 1) for s in range(1, p + 1)]


def tube_oracle(type_name: str, q: int, max_ql: int = 6, arms: Iterable[int] | None = None,
                ctx: FieldContext | None = None) -> TubeReport:
    """Closed-form tube brackets against Hall-number brackets, mod q-1, on all same-tube pairs."""
    Q = canon.build(type_name)
    F = ffla.field_of_order(q)
    ctx = ctx or FieldContext(Q, F)
    arms = [i for i in range(1, Q.r + 1) if Q.weights[i - 1] >= 2] if arms is None else list(arms)
    rep_ = TubeReport(type_name, q)
    for arm in arms:
        keys = tube_keys(Q, F, arm, max_ql)
        for k1, k2 in itertools.combinations(keys, 2):
            rep_.pairs += 1
            got = ctx.reduce(canonical_elt(Q, F, ctx.bracket_keys(k1, k2)))
            want = ctx.reduce(tube_bracket(Q, F, k1, k2))
            if got != want:
                rep_.mismatches.append((arm, k1, k2, got, want))
    return rep_


@dataclass
class KroneckerReport:
    """Hall numbers F_{X, M(e_1+l delta)}^{M(e_1+m delta)} and F_{M(e_inf+l delta), X}^{M(e_inf+m delta)}
    for every indecomposable X, tallied from one pass over the submodules."""

    q: int
    rows: list = field(default_factory=list)  # (form, l, m, key, F)
    mismatches: list = field(default_factory=list)
    decomposable: int = 0

    @property
    def ok(self) -> bool:
        return not self.mismatches


def _indecomposable_keys(Q: CanonicalQuiver, F: Field, s: int) -> list[IsoKey]:
    arms = [TubeNH(i, 1, s * Q.weights[i - 1]) for i in range(1, Q.r + 1)]
    return arms + mb.homogeneous_keys(Q, F, s)


def kronecker_table(q: int, max_lm: int = 4) -> KroneckerReport:
    Q = canon.build("A1")
    F = ffla.field_of_order(q)
    d = canon.delta(Q)
    out = KroneckerReport(q)
    for form, x in (("sub", Q.sink), ("quotient", Q.source)):
        e = canon.unit(Q, x)
        for l, m in itertools.combinations(range(max_lm + 1), 2):
            Z = mb.module_for_root(Q, F, canon.vadd(e, canon.vscale(m, d)))
            B = mb.module_for_root(Q, F, canon.vadd(e, canon.vscale(l, d)))
            tally: dict = {}
            target = B.dims if form == "sub" else canon.vscale(m - l, d)
            for U in rep.submodules(Z, target):
                sub, quo = rep.sub_rep(Z, U), rep.quotient(Z, U)
                fixed, other = (sub, quo) if form == "sub" else (quo, sub)
                if not rep.iso(B, fixed):
                    continue
                if not rep.is_indecomposable(other):
                    out.decomposable += 1
                    continue
                k = mb.key_of(other)
                tally[k] = tally.get(k, 0) + 1
            expected = _indecomposable_keys(Q, F, m - l)
            for k in expected:
                out.rows.append((form, l, m, k, tally.get(k, 0)))
                if tally.get(k, 0) != 1:
                    out.mismatches.append((form, l, m, k, tally.get(k, 0)))
            for k in set(tally) - set(expected):
                out.mismatches.append((form, l, m, k, tally[k]))
    return out


def kronecker_shift(q: int, t_max: int = 3) -> list:
    """[h_1, u_{m(e_1+t delta)}] - 2 u_{m(e_1+(t+1) delta)} mod q-1, for each t; all empty when it holds."""
    Q = canon.build("A1")
    ctx = FieldContext(Q, ffla.field_of_order(q))
    d = canon.delta(Q)
    h = eta(ctx, Q.sink)
    out = []
    for t in range(t_max + 1):
        v = canon.vadd(canon.unit(Q, Q.sink), canon.vscale(t, d))
        got = ctx.bracket(h, {Root(v): 1})
        out.append(ctx.reduce(add(got, {Root(canon.vadd(v, d)): 2}, -1)))
    return out


# generators


def dynkin_vertices(Q: CanonicalQuiver) -> tuple[int, ...]:
    return Q.dynkin_vertices


def eps(Q: CanonicalQuiver, x: int) -> Elt:
    return {Root(canon.unit(Q, x)): 1}


def zeta(Q: CanonicalQuiver, x: int) -> Elt:
    v = canon.vsub(canon.delta(Q), canon.unit(Q, x))
    return {Root(v): -1 if x == Q.sink else 1}


def eta_closed_form(Q: CanonicalQuiver, F: Field, x: int) -> Elt:
    """Closed forms of [eps_x, zeta_x] in terms of the delta-family."""
    def xkey(i, j):
        return mb.key_of(mb.X_ij(Q, F, i, j))

    if x == Q.sink:
        out: Elt = {HomSum(1): 1}
        for i in range(1, Q.r + 1):
            out = add(out, {xkey(i, 1): 1})
        return out
    for i, arm in enumerate(Q.arms, start=1):
        if x in arm[1:-1]:
            j = arm.index(x)
            return add({xkey(i, j + 1): 1}, {xkey(i, j): -1})
    raise ValueError(f"{x} is not a Dynkin vertex")


def eta(ctx: FieldContext, x: int) -> Elt:
    return ctx.bracket(eps(ctx.Q, x), zeta(ctx.Q, x))


def cartan_entry(Q: CanonicalQuiver, x: int, y: int) -> int:
    return Q.dynkin_cartan[x][y]


def known_unit_shift(Q: CanonicalQuiver, u: Vec) -> bool:
    """Roots whose delta-shift scalar is 1 a priori: simples, regular roots and delta - e_x."""
    w = canon.org(Q, u)
    if sum(w) == 1 or canon.rank(Q, u) == 0:
        return True
    d = canon.delta(Q)
    return any(w == canon.vsub(d, canon.unit(Q, x)) for x in Q.dynkin_vertices)


def shift_down(Q: CanonicalQuiver, a: Elt, scalars: dict | None = None) -> Elt:
    """Rewrite Root(v) as r * Root(org v), where u_{m(w+delta)} = r_w u_{m(w)}.

    Without a table only scalars known to be 1 are used; anything else raises.
    """
    d = canon.delta(Q)
    out: Elt = {}
    for k, v in a.items():
        if not isinstance(k, Root):
            out = add(out, {k: v})
            continue
        w, r = k.v, 1
        while min(w) > 0:
            u = canon.vsub(w, d)
            if not any(u):
                break
            if scalars is not None:
                if u not in scalars:
                    raise KeyError(f"no shift scalar for {u}")
                r *= scalars[u]
            elif not known_unit_shift(Q, u):
                raise KeyError(f"shift scalar for {u} is not known to be 1")
            w = u
        out = add(out, {Root(w): r * v})
    return out


# Serre relations


@dataclass
class SerreReport:
    type_name: str
    mode: str
    failures: list = field(default_factory=list)
    checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures


def _serre_items(Q: CanonicalQuiver):
    D = Q.dynkin_vertices
    for x in D:
        for y in D:
            yield x, y


def serre_check_field(Q: CanonicalQuiver, F: Field) -> SerreReport:
    """Relations among eps, zeta, eta over one field, modulo q-1."""
    ctx = FieldContext(Q, F)
    rpt = SerreReport(Q.ctype.name, f"GF({F.q})")
    D = Q.dynkin_vertices
    etas = {x: eta(ctx, x) for x in D}

    def check(label, lhs, rhs):
        rpt.checked += 1
        if not ctx.equal(lhs, rhs):
            rpt.failures.append((label, fmt(ctx.reduce(lhs)), fmt(ctx.reduce(rhs))))

    for x in D:
        check(("eta-closed", x), etas[x], eta_closed_form(Q, F, x))
    for x, y in _serre_items(Q):
        a = cartan_entry(Q, x, y)
        if x < y:
            check(("eta-eta", x, y), ctx.bracket(etas[x], etas[y]), {})
        if x != y:
            check(("eps-zeta", x, y), ctx.bracket(eps(Q, x), zeta(Q, y)), {})
        check(("eta-eps", x, y), shift_down(Q, ctx.bracket(etas[x], eps(Q, y))), scale(a, eps(Q, y)))
        check(("eta-zeta", x, y), shift_down(Q, ctx.bracket(etas[x], zeta(Q, y))), scale(-a, zeta(Q, y)))
        if x != y:
            e, z = eps(Q, y), zeta(Q, y)
            for _ in range(1 - a):
                e = ctx.bracket(eps(Q, x), e)
                z = ctx.bracket(zeta(Q, x), z)
            check(("eps-eps", x, y), e, {})
            check(("zeta-zeta", x, y), z, {})
    return rpt


def serre_check_q1(Q: CanonicalQuiver, fields: Iterable[int]) -> SerreReport:
    """The same relations with integer coefficients lifted across the battery."""
    Z = Q1(Q, fields)
    rpt = SerreReport(Q.ctype.name, "q1")
    D = Q.dynkin_vertices
    etas = {x: Z.bracket(eps(Q, x), zeta(Q, x)) for x in D}

    def check(label, lhs, rhs):
        rpt.checked += 1
        diff = add(lhs, rhs, -1)
        if diff:
            rpt.failures.append((label, fmt(lhs), fmt(rhs)))

    any_F = next(iter(Z.ctx.values())).F
    for x in D:
        check(("eta-closed", x), etas[x], eta_closed_form(Q, any_F, x))
    for x, y in _serre_items(Q):
        a = cartan_entry(Q, x, y)
        if x < y:
            check(("eta-eta", x, y), Z.bracket(etas[x], etas[y]), {})
        if x != y:
            check(("eps-zeta", x, y), Z.bracket(eps(Q, x), zeta(Q, y)), {})
        check(("eta-eps", x, y), shift_down(Q, Z.bracket(etas[x], eps(Q, y))), scale(a, eps(Q, y)))
        check(("eta-zeta", x, y), shift_down(Q, Z.bracket(etas[x], zeta(Q, y))), scale(-a, zeta(Q, y)))
        if x != y:
            e, z = eps(Q, y), zeta(Q, y)
            for _ in range(1 - a):
                e = Z.bracket(eps(Q, x), e)
                z = Z.bracket(zeta(Q, x), z)
            check(("eps-eps", x, y), e, {})
            check(("zeta-zeta", x, y), z, {})
    return rpt


def serre_check(type_name: str, fields: Iterable[int], q1: bool = True) -> list[SerreReport]:
    Q = canon.build(type_name)
    fields = tuple(fields)
    out = [serre_check_field(Q, ffla.field_of_order(q)) for q in fields]
    if q1:
        out.append(serre_check_q1(Q, fields))
    return out


# delta-shift scalars


@dataclass
class ShiftTable:
    """r_v with u_{m(v+delta)} = r_v u_{m(v)} in the quotient, with provenance."""

    scalars: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)
    multi_path_checks: int = 0
    conflicts: list = field(default_factory=list)
    edges: dict = field(default_factory=dict)

    @property
    def consistent(self) -> bool:
        return not self.conflicts

    def unusual(self) -> dict:
        return {v: r for v, r in self.scalars.items() if abs(r) != 1}


def _simple_coefficient(Z: Q1, x: int, v: Vec) -> int:
    """c with [u_{S_x}, u_{M(v)}] = c u_{M(v + e_x)}, lifted to an integer."""
    Q = Z.Q
    w = canon.vadd(v, canon.unit(Q, x))
    res = Z.bracket(eps(Q, x), {Root(v): 1})
    extra = {k: c for k, c in res.items() if k != Root(w)}
    if extra:
        raise ArithmeticError(f"unexpected terms {fmt(extra)}")
    return res.get(Root(w), 0)


def edge_coefficients(Z: Q1, v: Vec, x: int) -> tuple[int, int]:
    d = canon.delta(Z.Q)
    return _simple_coefficient(Z, x, v), _simple_coefficient(Z, x, canon.vadd(v, d))


def shift_scalars(Q: CanonicalQuiver, fields: Iterable[int], t_max: int = 1, Z: Q1 | None = None) -> ShiftTable:
    """Propagate r_v along edges v -> v + e_x from the anchors r = 1.

    Along an edge, [e_x, u_{m(v)}] = c1 u_{m(v+e_x)} and
    [e_x, u_{m(v+delta)}] = c2 u_{m(v+e_x+delta)} give c2 r_{v+e_x} = c1 r_v.
    Every edge between two known scalars is checked for consistency.
    """
    Z = Z or Q1(Q, fields)
    roots = set(canon.roots_enumerate(Q, t_max))
    tab = ShiftTable()
    for v in sorted(roots, key=lambda v: (sum(v), v)):
        if sum(canon.org(Q, v)) == 1 or canon.rank(Q, v) == 0:
            tab.scalars[v] = Fraction(1)
            tab.provenance[v] = ("anchor",)
    queue = deque(sorted(tab.scalars, key=lambda v: (sum(v), v)))

    def neighbours(v):
        for x in range(Q.nv):
            up = canon.vadd(v, canon.unit(Q, x))
            if up in roots:
                yield v, x, up
            down = canon.vsub(v, canon.unit(Q, x))
            if down in roots:
                yield down, x, v

    seen_edges = set()
    while queue:
        v = queue.popleft()
        for lo, x, hi in neighbours(v):
            if (lo, x) in seen_edges:
                continue
            seen_edges.add((lo, x))
            c1, c2 = edge_coefficients(Z, lo, x)
            tab.edges[(lo, x)] = (c1, c2)
            known_lo, known_hi = lo in tab.scalars, hi in tab.scalars
            if known_lo and known_hi:
                tab.multi_path_checks += 1
                if c2 * tab.scalars[hi] != c1 * tab.scalars[lo]:
                    tab.conflicts.append((lo, x, c1, c2, tab.provenance[lo], tab.provenance[hi]))
            elif known_lo and c2:
                tab.scalars[hi] = Fraction(c1) * tab.scalars[lo] / c2
                tab.provenance[hi] = ("edge", lo, x)
                queue.append(hi)
            elif known_hi and c1:
                tab.scalars[lo] = Fraction(c2) * tab.scalars[hi] / c1
                tab.provenance[lo] = ("edge", hi, -x - 1)
                queue.append(lo)
    return tab


@dataclass
class SignExample:
    """The two edge brackets [e_x, u_{m(v)}] and [e_x, u_{m(v+delta)}] with raw counts."""

    type_name: str
    v: Vec
    x: int
    raw: dict  # q -> (c1, c2), unreduced
    c1: hall.HallPoly
    c2: hall.HallPoly

    @property
    def ratio(self) -> Fraction:
        """r_{v+e_x} / r_v = c1 / c2 at q = 1."""
        return Fraction(self.c1.at_one, self.c2.at_one)

    def to_dict(self) -> dict:
        return {
            "type": self.type_name,
            "v": list(self.v),
            "vertex": self.x,
            "raw": {str(q): list(c) for q, c in self.raw.items()},
            "residues": {str(q): [c[0] % (q - 1), c[1] % (q - 1)] for q, c in self.raw.items()},
            "c1": self.c1.to_dict(),
            "c2": self.c2.to_dict(),
            "ratio": str(self.ratio),
        }


def _raw_edge_coefficient(Q: CanonicalQuiver, F: Field, x: int, v: Vec) -> int:
    S = mb.simple(Q, F, x)
    M = mb.module_for_root(Q, F, v)
    Z = mb.module_for_root(Q, F, canon.vadd(v, canon.unit(Q, x)))
    return hall.hall_number(S, M, Z) - hall.hall_number(M, S, Z)


def sign_example(type_name: str = "E8", v: Vec = (6, 5, 4, 3, 2, 4, 2, 3, 0), x: int | None = None,
                 fields: Iterable[int] = (3, 5, 7, 9)) -> SignExample:
    """Coefficients of the simple S_x against M(v) and M(v+delta), fitted across fields.

    Over one field the two coefficients are only known mod q-1, which cannot
    separate +1 from -1 at q=3; the fitted polynomials evaluated at 1 can.
    """
    Q = canon.build(type_name)
    x = Q.source if x is None else x
    v = tuple(v)
    w = canon.vadd(v, canon.delta(Q))
    for u in (v, w, canon.vadd(v, canon.unit(Q, x)), canon.vadd(w, canon.unit(Q, x))):
        if canon.chi(Q, u) != 1:
            raise ValueError(f"{u} is not a root")
    raw = {}
    for q in fields:
        F = ffla.field_of_order(q)
        raw[q] = (_raw_edge_coefficient(Q, F, x, v), _raw_edge_coefficient(Q, F, x, w))
    c1 = hall.fit_values({q: c[0] for q, c in raw.items()})
    c2 = hall.fit_values({q: c[1] for q, c in raw.items()})
    return SignExample(type_name, v, x, raw, c1, c2)


# the quotient algebra


def _label(alpha: Vec) -> str:
    return "b(" + ",".join(map(str, alpha)) + ")"


@dataclass
class QuotientAlgebra:
    type_name: str
    labels: list
    roots: list
    constants: dict  # (i, j) -> {k: Fraction}
    n: int
    shift_table: ShiftTable | None = None

    @property
    def dim(self) -> int:
        return len(self.labels)

    def bracket_basis(self, i: int, j: int) -> dict:
        if i == j:
            return {}
        if (i, j) in self.constants:
            return self.constants[(i, j)]
        if (j, i) in self.constants:
            return {k: -c for k, c in self.constants[(j, i)].items()}
        return {}

    def bracket(self, a: dict, b: dict) -> dict:
        out: dict = {}
        for i, x in a.items():
            for j, y in b.items():
                for k, c in self.bracket_basis(i, j).items():
                    out[k] = out.get(k, 0) + x * y * c
        return {k: c for k, c in out.items() if c}

    def jacobi(self, i: int, j: int, k: int) -> dict:
        e = lambda t: {t: Fraction(1)}  # noqa: E731
        s: dict = {}
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            for key, val in self.bracket(self.bracket(e(a), e(b)), e(c)).items():
                s[key] = s.get(key, 0) + val
        return {key: v for key, v in s.items() if v}

    def to_json(self) -> dict:
        triples = []
        for (i, j), res in sorted(self.constants.items()):
            for k, c in sorted(res.items()):
                triples.append([i, j, k, str(c)])
        gens = {}
        for x in range(self.n):
            gens[f"E{x}"] = self.labels.index(_label(tuple(int(t == x) for t in range(self.n))))
            gens[f"F{x}"] = self.labels.index(_label(tuple(-int(t == x) for t in range(self.n))))
            gens[f"H{x}"] = x
        # zeta at the sink is minus the basis vector
        signs = {"F0": -1}
        return {"type": self.type_name, "basis": self.labels, "constants": triples, "chevalley": gens, "chevalley_signs": signs}


def _rewrite_roots(Q: CanonicalQuiver, a: Elt, tab: ShiftTable, index: dict) -> dict:
    """Express Root keys on the basis b_alpha using the shift scalars."""
    out: dict = {}
    for k, c in shift_down(Q, a, tab.scalars).items():
        if not isinstance(k, Root):
            raise ArithmeticError(f"non-root key {k} in a root-space bracket")
        alpha = canon.deg_dynkin(Q, k.v)
        if canon.lift(Q, alpha) != k.v:
            raise ArithmeticError(f"{k.v} is not a canonical lift")
        i = index[alpha]
        out[i] = out.get(i, 0) + Fraction(c)
    return {i: c for i, c in out.items() if c}


def _eta_coordinates(Q: CanonicalQuiver, Z: Q1, a: Elt, b: Elt) -> dict:
    """Coordinates c_x of [a, b] (degree in Z delta) on the eta basis.

    Determined by [h, eps_y] = sum_x c_x a_xy eps_y, with the action read
    off per field and lifted to integers.
    """
    D = Q.dynkin_vertices
    d_y = {}
    for y in D:
        residues = {}
        for q, ctx in Z.ctx.items():
            h = ctx.bracket(a, b)
            res = shift_down(Q, ctx.bracket(h, eps(Q, y)))
            extra = {k: c for k, c in ctx.reduce(res).items() if k != Root(canon.unit(Q, y))}
            if extra:
                raise ArithmeticError(f"unexpected terms {fmt(extra)}")
            residues[q] = res.get(Root(canon.unit(Q, y)), 0)
        c = hall.crt_lift(residues)
        if c is None:
            raise NonUniform(f"no integer lift for the eta action on {y}")
        d_y[y] = c
    A = sympy.Matrix(Q.dynkin_cartan)
    sol = A.LUsolve(sympy.Matrix([d_y[y] for y in D]))
    return {x: Fraction(int(sympy.fraction(s)[0]), int(sympy.fraction(s)[1])) for x, s in zip(D, sol) if s != 0}


def build_quotient(type_name: str, fields: Iterable[int] = (3, 4, 5, 7), t_max: int = 2) -> QuotientAlgebra:
    """Structure constants of L/I on the basis eta_x, b_alpha."""
    Q = canon.build(type_name)
    Z = Q1(Q, fields)
    D = Q.dynkin_vertices
    n = len(D)
    roots = list(canon.dynkin_roots(Q))
    labels = [f"h{x}" for x in D] + [_label(a) for a in roots]
    index = {a: n + i for i, a in enumerate(roots)}
    tab = shift_scalars(Q, fields, t_max, Z)
    if tab.conflicts:
        raise ArithmeticError(f"inconsistent shift scalars: {tab.conflicts[:3]}")
    b = {a: {Root(canon.lift(Q, a)): 1} for a in roots}
    etas = {x: Z.bracket(eps(Q, x), zeta(Q, x)) for x in D}
    constants: dict = {}
    rootset = set(roots)
    for x in D:
        for a in roots:
            res = _rewrite_roots(Q, Z.bracket(etas[x], b[a]), tab, index)
            if res:
                constants[(x, index[a])] = res
    for a, c in itertools.combinations(roots, 2):
        s = canon.vadd(a, c)
        i, j = index[a], index[c]
        if s in rootset:
            res = _rewrite_roots(Q, Z.bracket(b[a], b[c]), tab, index)
        elif not any(s):
            res = _eta_coordinates(Q, Z, b[a], b[c])
        else:
            continue
        if res:
            constants[(i, j)] = res
    return QuotientAlgebra(type_name, labels, roots, constants, n, tab)


def check_jacobi(A: QuotientAlgebra, samples: int | None = None, seed: int = 0) -> list:
    """Failing triples; exhaustive when samples is None."""
    N = A.dim
    if samples is None:
        triples = itertools.combinations(range(N), 3)
    else:
        rng = random.Random(seed)
        triples = (tuple(rng.randrange(N) for _ in range(3)) for _ in range(samples))
    return [t for t in triples if A.jacobi(*t)]


def check_cartan_action(A: QuotientAlgebra, Q: CanonicalQuiver) -> list:
    """[eta_x, b_alpha] = <alpha, a_x> b_alpha for every x and alpha."""
    bad = []
    for x in range(A.n):
        for i, a in enumerate(A.roots):
            pair = sum(Q.dynkin_cartan[x][y] * a[y] for y in range(A.n))
            got = A.bracket_basis(x, A.n + i)
            want = {A.n + i: Fraction(pair)} if pair else {}
            if got != want:
                bad.append((x, a, got, want))
    return bad


# reports


def root_space_report(type_name: str) -> list[dict]:
    Q = canon.build(type_name)
    rows = []
    for a in canon.dynkin_roots(Q):
        v = canon.lift(Q, a)
        comp = canon.component(Q, v)
        row = {
            "alpha": a,
            "sign": "+" if sum(a) > 0 else "-",
            "lift": v,
            "component": comp,
        }
        if comp == "regular":
            arm, top, ql = mb._tube_of_dim(Q, v)
            row["tube"] = (arm, top, ql)
        rows.append(row)
    return rows


def basis_figure(type_name: str = "D5") -> list[dict]:
    """Basis classes per part and component, degree vectors included."""
    return root_space_report(type_name)
