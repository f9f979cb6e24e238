"""Hall numbers, the Riedtmann cross-check and Hall polynomials."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from . import ffla, rep
from .ffla import EnumerationTooLarge, Field, Subspace
from .rep import Rep

HOM_ROUTE_LIMIT = 4096
MAX_DEGREE = 6
DEFAULT_BATTERY = (3, 4, 5, 7, 8, 9, 11, 13)
E8_BATTERY = (3, 5, 7, 9, 11, 13)


def battery_for(type_name: str) -> tuple[int, ...]:
    return E8_BATTERY if type_name.upper() == "E8" else DEFAULT_BATTERY


def _dim_ok(X: Rep, Y: Rep, Z: Rep) -> bool:
    return all(x + y == z for x, y, z in zip(X.dims, Y.dims, Z.dims))


def hall_number_lattice(X: Rep, Y: Rep, Z: Rep, cap: int = rep.SUBMODULE_CAP) -> int:
    """Count submodules U of Z with U = Y and Z/U = X by walking the submodule lattice."""
    if not _dim_ok(X, Y, Z):
        return 0
    if X.dim == 1 or Y.dim == 1:
        cands = _simple_side_candidates(X, Y, Z)
    else:
        cands = rep.submodules(Z, Y.dims, cap)
    n = 0
    for U in cands:
        if rep.iso(Y, rep.sub_rep(Z, U)) and rep.iso(X, rep.quotient(Z, U)):
            n += 1
    return n


def _simple_side_candidates(X: Rep, Y: Rep, Z: Rep):
    """Submodules of Z with a simple quotient (hyperplanes over the arrow images) or a
    simple sub (lines in the joint kernel of the outgoing arrows)."""
    F, Q = Z.F, Z.Q
    full = [ffla.Subspace.full(F, d) for d in Z.dims]
    if X.dim == 1:
        x = X.dims.index(1)
        img = ffla.Subspace.zero(F, Z.dims[x])
        for k, a in enumerate(Q.arrows):
            if a.target == x:
                img = ffla.span_sum(F, img, ffla.image(F, Z.maps[k], full[a.source]))
        for H in ffla.subspaces_of(F, full[x], Z.dims[x] - 1):
            if all(H.contains(r) for r in img.basis):
                yield tuple(H if v == x else full[v] for v in range(Q.nv))
        return
    x = Y.dims.index(1)
    rows = [Z.maps[k] for k, a in enumerate(Q.arrows) if a.source == x and Z.maps[k].shape[0]]
    if rows:
        ker = ffla.Subspace(F, ffla.nullspace(F, np.vstack(rows)), Z.dims[x])
    else:
        ker = full[x]
    zero = [ffla.Subspace.zero(F, d) for d in Z.dims]
    for L in ffla.subspaces_of(F, ker, 1):
        yield tuple(L if v == x else zero[v] for v in range(Q.nv))


def _map_image(F: Field, f: Sequence[np.ndarray]) -> tuple:
    return tuple(ffla.Subspace(F, m.T, m.shape[0]) if m.shape[0] else ffla.Subspace.zero(F, 0) for m in f)


def hall_number_hom(X: Rep, Y: Rep, Z: Rep, cap: int = ffla.DEFAULT_CAP) -> int:
    """Count images of monomorphisms Y -> Z whose cokernel is X."""
    if not _dim_ok(X, Y, Z):
        return 0
    F = Z.F
    H = rep.hom(Y, Z)
    seen = set()
    n = 0
    for c in ffla.all_combinations(F, list(range(H.dim)), cap):
        f = H.element(c)
        if not rep.is_injective_map(F, f):
            continue
        U = _map_image(F, f)
        key = tuple(u.key() for u in U)
        if key in seen:
            continue
        seen.add(key)
        if rep.iso(X, rep.quotient(Z, U)):
            n += 1
    return n


@dataclass
class HallValue:
    count: int
    method: str


def _lattice_bound(Y: Rep, Z: Rep) -> int:
    out = 1
    for y, z in zip(Y.dims, Z.dims):
        out *= ffla.gaussian_binomial(z, y, Z.F.q)
    return out


def _choose_route(X: Rep, Y: Rep, Z: Rep) -> str:
    """Hom route when Hom(Y, Z) is small, otherwise the cheaper of the two estimates."""
    hom_cost = Z.F.q ** rep.hom(Y, Z).dim
    if hom_cost <= 64:
        return "hom"
    if X.dim == 1:
        return "lattice"
    if hom_cost <= HOM_ROUTE_LIMIT and hom_cost <= _lattice_bound(Y, Z):
        return "hom"
    return "lattice"


def hall_number(X: Rep, Y: Rep, Z: Rep, method: str = "auto") -> int:
    return hall_value(X, Y, Z, method).count


def hall_value(X: Rep, Y: Rep, Z: Rep, method: str = "auto") -> HallValue:
    """F_XY^Z: submodules of Z isomorphic to Y with quotient isomorphic to X."""
    if not _dim_ok(X, Y, Z):
        return HallValue(0, "dimension")
    if Y.dim == 0:
        return HallValue(int(rep.iso(X, Z)), "trivial")
    if X.dim == 0:
        return HallValue(int(rep.iso(Y, Z)), "trivial")
    if method == "auto":
        method = _choose_route(X, Y, Z)
    if method == "hom":
        return HallValue(hall_number_hom(X, Y, Z), "hom")
    if method == "lattice":
        return HallValue(hall_number_lattice(X, Y, Z), "lattice")
    raise ValueError(f"unknown method {method!r}")


def w_number(X: Rep, Y: Rep, Z: Rep, cap: int = ffla.DEFAULT_CAP) -> int:
    """Pairs (f, g) with 0 -> Y -f-> Z -g-> X -> 0 exact."""
    if not _dim_ok(X, Y, Z):
        return 0
    F = Z.F
    Hf = rep.hom(Y, Z)
    Hg = rep.hom(Z, X)
    gs = Hg.maps()
    total = 0
    for c in ffla.all_combinations(F, list(range(Hf.dim)), cap):
        f = Hf.element(c)
        if not rep.is_injective_map(F, f):
            continue
        # g f = 0 is linear in the coefficients of g
        cols = [rep._flatten(rep.compose(F, g, f)) for g in gs]
        if cols:
            A = np.array(cols, dtype=np.int64).T
            kern = ffla.nullspace(F, A) if A.shape[0] else ffla.identity(len(gs))
        else:
            kern = ffla.zeros(0, 0)
        kdim = kern.shape[0]
        for d in ffla.all_combinations(F, list(range(kdim)), cap):
            coeffs = ffla.mat_mul(F, np.asarray(d, dtype=np.int64)[None, :], kern)[0] if kdim else []
            g = Hg.element(coeffs) if kdim else [ffla.zeros(x, z) for x, z in zip(X.dims, Z.dims)]
            if all(ffla.mat_rank(F, m) == m.shape[0] for m in g if m.shape[0]):
                total += 1
    return total


@dataclass
class RiedtmannReport:
    ok: bool
    direct: int
    formula: Fraction
    ext_z: int
    ext_dim: int
    hom_dim: int
    aut: tuple[int, int, int]


def riedtmann_value(X: Rep, Y: Rep, Z: Rep, cap: int = ffla.DEFAULT_CAP) -> tuple[Fraction, int, int, int]:
    """|Ext(X,Y)_Z| |Aut Z| / (|Hom(X,Y)| |Aut X| |Aut Y|), counting Ext elements.

    Nonzero multiples of a class have isomorphic middle terms (rescale Y), so
    each line of Ext contributes q-1 elements at once.
    """
    F = Z.F
    g = rep.ext1(X, Y)
    ext_z = 0
    if _dim_ok(X, Y, Z):
        sig = rep.signature(Z)
        if rep.iso(Z, rep.direct_sum(X, Y)):
            ext_z += 1
        if g.dim:
            for line in ffla.enumerate_space(F, Subspace.full(F, g.dim), "lines", cap):
                M = g.middle_term(line.basis[0])
                if rep.signature(M) == sig and rep.iso(Z, M):
                    ext_z += F.q - 1
    q = F.q
    num = ext_z * rep.aut_count(Z)
    den = q**g.hom_dim * rep.aut_count(X) * rep.aut_count(Y)
    return Fraction(num, den), ext_z, g.dim, g.hom_dim


def riedtmann_check(X: Rep, Y: Rep, Z: Rep, method: str = "auto") -> RiedtmannReport:
    direct = hall_number(X, Y, Z, method)
    val, ext_z, ext_dim, hom_dim = riedtmann_value(X, Y, Z)
    aut = (rep.aut_count(X), rep.aut_count(Y), rep.aut_count(Z))
    return RiedtmannReport(val == direct, direct, val, ext_z, ext_dim, hom_dim, aut)


# polynomials


@dataclass
class HallPoly:
    coeffs: tuple[int, ...]
    fit_fields: tuple[int, ...]
    held_out: tuple[int, ...]
    values: dict = field(default_factory=dict)
    validated: bool = False

    def __call__(self, q) -> int:
        return sum(c * q**k for k, c in enumerate(self.coeffs))

    @property
    def at_one(self) -> int:
        return sum(self.coeffs)

    def to_dict(self) -> dict:
        return {
            "poly": list(self.coeffs),
            "fit_fields": list(self.fit_fields),
            "held_out": list(self.held_out),
            "per_field": {str(q): v for q, v in self.values.items()},
            "at_one": self.at_one,
            "validated": self.validated,
        }


class NoStablePolynomial(ArithmeticError):
    pass


def lagrange_fit(points: Sequence[tuple[int, int]]) -> list[Fraction]:
    """Coefficients (low degree first) of the interpolating polynomial."""
    n = len(points)
    coeffs = [Fraction(0)] * n
    for i, (xi, yi) in enumerate(points):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, (xj, _) in enumerate(points):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for k in range(len(basis) - 1):
                basis[k] -= xj * basis[k + 1]
            denom *= xi - xj
        for k in range(n):
            coeffs[k] += yi * basis[k] / denom
    return coeffs


def fit_values(values: dict[int, int], degree_bound: int | None = None) -> HallPoly:
    """Fit an integer polynomial to per-field values, validating on the remaining fields."""
    qs = sorted(values)
    if len(qs) < 2:
        raise ValueError("at least two fields are needed")
    start = 0 if degree_bound is None else degree_bound
    for deg in range(start, min(MAX_DEGREE, len(qs) - 2) + 1):
        fit, held = qs[: deg + 1], qs[deg + 1 :]
        c = lagrange_fit([(q, values[q]) for q in fit])
        if any(x.denominator != 1 for x in c):
            continue
        ints = [int(x) for x in c]
        while len(ints) > 1 and ints[-1] == 0:
            ints.pop()
        poly = HallPoly(tuple(ints), tuple(fit), tuple(held), dict(values))
        if all(poly(q) == values[q] for q in held):
            poly.validated = True
            return poly
    raise NoStablePolynomial(f"no stable integer polynomial for values {values}")


def hall_poly(
    build: Callable[[Field], tuple[Rep, Rep, Rep]],
    fields: Sequence[int] = DEFAULT_BATTERY,
    degree_bound: int | None = None,
) -> HallPoly:
    """Hall polynomial of a triple given by a per-field constructor."""
    values = {}
    ext_dim = 0
    for q in fields:
        F = ffla.field_of_order(q)
        X, Y, Z = build(F)
        values[q] = hall_number(X, Y, Z)
        ext_dim = max(ext_dim, rep.ext1(X, Y).dim)
    bound = ext_dim + 1 if degree_bound is None else degree_bound
    try:
        return fit_values(values, min(bound, MAX_DEGREE))
    except NoStablePolynomial:
        return fit_values(values, 0)


def count_poly(
    count: Callable[[Field], int], fields: Sequence[int] = DEFAULT_BATTERY, degree_bound: int = 0
) -> HallPoly:
    """Fit a polynomial to any per-field count (W numbers, bracket coefficients)."""
    values = {q: count(ffla.field_of_order(q)) for q in fields}
    return fit_values(values, degree_bound)


def crt_lift(residues: dict[int, int]) -> int | None:
    """The integer c of least absolute value with c = r_q mod (q - 1) for every field q."""
    from math import gcd

    c, m = 0, 1
    for q, r in residues.items():
        n = q - 1
        r %= n
        # solve c + m k = r mod n
        g = gcd(m, n)
        if (r - c) % g:
            return None
        if n == 1:
            continue
        mg, ng = m // g, n // g
        k = ((r - c) // g * pow(mg, -1, ng)) % ng if ng > 1 else 0
        c = c + m * k
        m = m * ng
        c %= m
    if c > m // 2:
        c -= m
    return c
