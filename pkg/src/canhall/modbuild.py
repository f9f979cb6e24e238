"""Constructors and canonical keys for indecomposable modules.

Modules with a root dimension vector are unique up to isomorphism, so they
are built by searching for a nonsplit extension with an indecomposable
middle term and cached.  Regular modules are located in their tube by
quasi-socle and quasi-length.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from typing import Union

import numpy as np

from . import canon, ffla, rep
from .canon import CanonicalQuiver, Vec
from .ffla import Field
from .rep import Rep

SEED = 20240531


class ConstructionError(RuntimeError):
    pass


# iso-class keys


@dataclass(frozen=True, order=True)
class Root:
    v: Vec

    def __str__(self) -> str:
        return "M(" + ",".join(map(str, self.v)) + ")"


@dataclass(frozen=True, order=True)
class TubeNH:
    """Module in the non-homogeneous tube of `arm` with given quasi-socle index and quasi-length."""

    arm: int
    socle: int
    ql: int

    def __str__(self) -> str:
        return f"T{self.arm}[{self.socle};{self.ql}]"


@dataclass(frozen=True, order=True)
class TubeHom:
    """W_point[ql] in a homogeneous tube.

    `point` is the field code of c for degree-one points, otherwise the
    coefficient tuple (constant term first) of the monic irreducible polynomial.
    """

    point: Union[int, tuple]
    ql: int

    @property
    def degree(self) -> int:
        return 1 if isinstance(self.point, int) else len(self.point) - 1

    def __str__(self) -> str:
        return f"W{self.point}[{self.ql}]"


@dataclass(frozen=True, order=True)
class HomSum:
    """The formal sum of W_c[ql] over all degree-one homogeneous points c."""

    ql: int

    def __str__(self) -> str:
        return f"SumW[{self.ql}]"


IsoKey = Union[Root, TubeNH, TubeHom, HomSum]


def key_dim(Q: CanonicalQuiver, F: Field, key: IsoKey) -> Vec:
    if isinstance(key, Root):
        return key.v
    if isinstance(key, HomSum):
        return canon.vscale(key.ql, canon.delta(Q))
    if isinstance(key, TubeHom):
        return canon.vscale(key.ql * key.degree, canon.delta(Q))
    dims = mouth_dims(Q, key.arm)
    p = len(dims)
    top = top_index(key.socle, key.ql, p)
    out = (0,) * Q.nv
    for t in range(key.ql):
        out = canon.vadd(out, dims[(top - 1 + t) % p])
    return out


def E_Delta(Q: CanonicalQuiver, F: Field) -> tuple[int, ...]:
    """Parameters of the delta-family that lie in non-homogeneous tubes."""
    return (0,) if Q.r == 2 else (0, int(F.neg(1)))


def homogeneous_points(Q: CanonicalQuiver, F: Field) -> list[int]:
    excl = set(E_Delta(Q, F))
    return [c for c in range(F.q) if c not in excl]


# closed forms


def _zero_maps(Q: CanonicalQuiver, dims: Vec) -> list[np.ndarray]:
    return [ffla.zeros(dims[a.target], dims[a.source]) for a in Q.arrows]


def simple(Q: CanonicalQuiver, F: Field, x) -> Rep:
    v = canon.unit(Q, x)
    return Rep(Q, F, v, _zero_maps(Q, v))


def W_c(Q: CanonicalQuiver, F: Field, c: int) -> Rep:
    c = int(c) % F.q
    maps = []
    for a in Q.arrows:
        if (a.arm, a.j) == (2, 1):
            val = c
        elif (a.arm, a.j) == (3, 1):
            val = int(F.neg(F.add(1, c)))
        else:
            val = 1
        maps.append([[val]])
    return Rep(Q, F, canon.delta(Q), maps)


def companion(F: Field, f: tuple) -> np.ndarray:
    """Companion matrix of a monic polynomial (constant term first)."""
    d = len(f) - 1
    C = ffla.zeros(d, d)
    for i in range(1, d):
        C[i, i - 1] = 1
    C[:, d - 1] = F.neg(np.asarray(f[:d], dtype=np.int64))
    return C


def W_poly(Q: CanonicalQuiver, F: Field, f: tuple) -> Rep:
    """Quasi-simple of the homogeneous tube at a point of degree d = deg f: the
    delta-family pattern with c replaced by the companion matrix of f."""
    d = len(f) - 1
    I = ffla.identity(d)
    C = companion(F, f)
    maps = []
    for a in Q.arrows:
        if (a.arm, a.j) == (2, 1):
            maps.append(C)
        elif (a.arm, a.j) == (3, 1):
            maps.append(F.neg(F.add(I, C)))
        else:
            maps.append(I)
    return Rep(Q, F, canon.vscale(d, canon.delta(Q)), maps)


def irreducible_polys(F: Field, d: int) -> list[tuple]:
    """Monic irreducible polynomials of degree d >= 2 (constant term first)."""
    return [f for f in _monic_polys(F, d) if f[0] and _irreducible(F, f)]


def homogeneous_keys(Q: CanonicalQuiver, F: Field, s: int) -> list:
    """Keys of all indecomposables of dimension s*delta in homogeneous tubes."""
    out = [TubeHom(c, s) for c in homogeneous_points(Q, F)]
    for d in range(2, s + 1):
        if s % d == 0:
            out += [TubeHom(f, s // d) for f in irreducible_polys(F, d)]
    return out


def X_ij(Q: CanonicalQuiver, F: Field, i: int, j: int) -> Rep:
    if (i, j) not in Q.arrows_by_pos:
        raise ValueError(f"no arrow a_{i}_{j}")
    minus = {(1, 3, 1), (2, 3, 1), (3, 2, 1)}
    maps = []
    for a in Q.arrows:
        if (a.arm, a.j) == (i, j):
            val = 0
        elif (i, a.arm, a.j) in minus:
            val = int(F.neg(1))
        else:
            val = 1
        maps.append([[val]])
    return Rep(Q, F, canon.delta(Q), maps)


def T_x(Q: CanonicalQuiver, F: Field, x) -> Rep:
    return module_for_root(Q, F, canon.vsub(canon.delta(Q), canon.unit(Q, x)))


# search-based construction


_memo: dict = {}
_lock = threading.Lock()


def _memo_key(Q: CanonicalQuiver, F: Field, tag, v) -> tuple:
    return (Q.ctype, F.p, F.e, tag, v)


def _memo_get(key):
    with _lock:
        return _memo.get(key)


def _memo_put(key, value):
    with _lock:
        return _memo.setdefault(key, value)


def clear_cache() -> None:
    with _lock:
        _memo.clear()


def _nonzero_classes(F: Field, dim: int, limit: int = 64):
    """Representatives of the nonzero classes up to scaling: basis vectors first."""
    for k in range(dim):
        yield tuple(int(i == k) for i in range(dim))
    seen = 0
    for line in ffla.enumerate_space(F, ffla.Subspace.full(F, dim), "lines", cap=ffla.DEFAULT_CAP):
        c = tuple(int(x) for x in line.basis[0])
        if sum(1 for x in c if x) > 1:
            yield c
            seen += 1
            if seen >= limit:
                return


def extension_indecomposable(X: Rep, Y: Rep) -> Rep | None:
    """An indecomposable middle term of 0 -> Y -> Z -> X -> 0, if one is found."""
    g = rep.ext1(X, Y)
    if g.dim == 0:
        return None
    for c in _nonzero_classes(X.F, g.dim):
        Z = g.middle_term(c)
        if rep.is_indecomposable(Z):
            return Z
    return None


def _is_positive_root(Q: CanonicalQuiver, v: Vec) -> bool:
    return all(x >= 0 for x in v) and any(v) and canon.chi(Q, v) == 1


def module_for_root(Q: CanonicalQuiver, F: Field, v: Vec) -> Rep:
    """The indecomposable module with root dimension vector v (unique up to iso)."""
    v = tuple(int(x) for x in v)
    if not _is_positive_root(Q, v):
        raise ValueError(f"{v} is not a positive root")
    key = _memo_key(Q, F, "root", v)
    hit = _memo_get(key)
    if hit is not None:
        return hit
    M = _construct(Q, F, v)
    return _memo_put(key, M)


def _construct(Q: CanonicalQuiver, F: Field, v: Vec) -> Rep:
    if sum(v) == 1:
        return simple(Q, F, v.index(1))
    # peel off one simple at the top or the socle
    for x in range(Q.nv):
        if not v[x]:
            continue
        w = canon.vsub(v, canon.unit(Q, x))
        if not _is_positive_root(Q, w):
            continue
        N = module_for_root(Q, F, w)
        S = simple(Q, F, x)
        for quot, sub in ((S, N), (N, S)):
            Z = extension_indecomposable(quot, sub)
            if Z is not None:
                return Z
    # any splitting into two smaller roots
    for w in _sub_roots(Q, v):
        u = canon.vsub(v, w)
        A, B = module_for_root(Q, F, w), module_for_root(Q, F, u)
        Z = extension_indecomposable(A, B)
        if Z is not None:
            return Z
    return _random_search(Q, F, v)


def _sub_roots(Q: CanonicalQuiver, v: Vec):
    ranges = [range(x + 1) for x in v]
    for w in itertools.product(*ranges):
        if w == v or not any(w):
            continue
        if _is_positive_root(Q, w) and _is_positive_root(Q, canon.vsub(v, w)):
            yield tuple(w)


def _random_search(Q: CanonicalQuiver, F: Field, v: Vec, tries: int = 500) -> Rep:
    rng = np.random.default_rng(SEED)
    for _ in range(tries):
        X = rep.random_rep(Q, F, v, rng)
        if X is not None and rep.is_indecomposable(X):
            return X
    raise ConstructionError(f"no indecomposable module of dimension {v} found")


# tubes


def mouth_dims(Q: CanonicalQuiver, arm: int) -> list[Vec]:
    """Dimension vectors E_1, ..., E_p on the mouth of the arm tube, E_{k+1} = tau E_k."""
    p = Q.weights[arm - 1]
    d = canon.delta(Q)
    if p == 1:
        return [d]
    first = d
    for x in Q.arms[arm - 1][1:-1]:
        first = canon.vsub(first, canon.unit(Q, x))
    out = [first]
    for _ in range(p - 1):
        out.append(canon.coxeter_shift(Q, out[-1], -1))
    return out


def top_index(socle: int, ql: int, p: int) -> int:
    return (socle - ql) % p + 1


def socle_index(top: int, ql: int, p: int) -> int:
    return (top + ql - 2) % p + 1


def mouth_modules(Q: CanonicalQuiver, F: Field, arm: int) -> list[Rep]:
    p = Q.weights[arm - 1]
    if p == 1:
        return [X_ij(Q, F, arm, 1)]
    return [module_for_root(Q, F, d) for d in mouth_dims(Q, arm)]


def tube_module(Q: CanonicalQuiver, F: Field, arm: int, top: int, ql: int) -> Rep:
    """m(top, ql): the uniserial module with quasi-top E_top and quasi-length ql."""
    p = Q.weights[arm - 1]
    top = (top - 1) % p + 1
    if ql < 1:
        raise ValueError("quasi-length must be positive")
    key = _memo_key(Q, F, ("tube", arm, top), ql)
    hit = _memo_get(key)
    if hit is not None:
        return hit
    E = mouth_modules(Q, F, arm)
    if ql == 1:
        Z = E[top - 1]
    else:
        rad = tube_module(Q, F, arm, top % p + 1, ql - 1)
        Z = extension_indecomposable(E[top - 1], rad)
        if Z is None:
            raise ConstructionError(f"no tube module m({top},{ql}) in arm {arm}")
    return _memo_put(key, Z)


def tube_module_nh(Q: CanonicalQuiver, F: Field, key: TubeNH) -> Rep:
    p = Q.weights[key.arm - 1]
    return tube_module(Q, F, key.arm, top_index(key.socle, key.ql, p), key.ql)


def homogeneous_module(Q: CanonicalQuiver, F: Field, c, ql: int) -> Rep:
    """W_c[ql]; c is a degree-one point outside E_Delta or a monic irreducible polynomial."""
    if isinstance(c, int) and c in E_Delta(Q, F):
        raise ValueError(f"{c} lies in a non-homogeneous tube")
    key = _memo_key(Q, F, ("hom", c), ql)
    hit = _memo_get(key)
    if hit is not None:
        return hit
    base = W_c(Q, F, c) if isinstance(c, int) else W_poly(Q, F, tuple(c))
    if ql == 1:
        Z = base
    else:
        Z = extension_indecomposable(base, homogeneous_module(Q, F, c, ql - 1))
        if Z is None:
            raise ConstructionError(f"no W_{c}[{ql}]")
    return _memo_put(key, Z)


def module_for_key(Q: CanonicalQuiver, F: Field, key: IsoKey) -> Rep:
    if isinstance(key, Root):
        return module_for_root(Q, F, key.v)
    if isinstance(key, TubeNH):
        return tube_module_nh(Q, F, key)
    if isinstance(key, TubeHom):
        return homogeneous_module(Q, F, key.point, key.ql)
    raise ValueError(f"no single module for key {key}")


# identification


def _window_index(dims: list[Vec], v: Vec, ql: int) -> int | None:
    p = len(dims)
    for top in range(1, p + 1):
        s = (0,) * len(v)
        for t in range(ql):
            s = canon.vadd(s, dims[(top - 1 + t) % p])
        if s == v:
            return top
    return None


def _tube_of_dim(Q: CanonicalQuiver, v: Vec) -> tuple[int, int, int] | None:
    """(arm, top, ql) for a regular root v, from its dimension vector alone."""
    for arm in range(1, Q.r + 1):
        dims = mouth_dims(Q, arm)
        total = sum(v)
        for ql in range(1, total + 1):
            top = _window_index(dims, v, ql)
            if top is not None:
                return arm, top, ql
    return None


def _pencil_point(X: Rep) -> tuple[str, object]:
    """Classify a regular module of dimension s*delta by its arm composites."""
    F = X.F
    P1, P2 = X.arm_composite(1), X.arm_composite(2)
    if not ffla.is_invertible(F, P1):
        return "arm", 1
    M = ffla.mat_mul(F, ffla.inverse(F, P1), P2)
    if not ffla.is_invertible(F, M):
        return "arm", 2
    n = M.shape[0]
    if X.Q.r == 3:
        if not ffla.is_invertible(F, F.add(M, ffla.identity(n))):
            return "arm", 3
    for c in range(F.q):
        if not ffla.is_invertible(F, F.sub(M, F.mul(c, ffla.identity(n)))):
            return "hom", c
    return "hom", _min_poly_factor(F, M)


def _poly_eval_matrix(F: Field, coeffs: tuple, M: np.ndarray) -> np.ndarray:
    n = M.shape[0]
    out = ffla.zeros(n, n)
    for c in reversed(coeffs):
        out = F.add(ffla.mat_mul(F, out, M), F.mul(int(c), ffla.identity(n)))
    return out


def _monic_polys(F: Field, d: int):
    for low in itertools.product(range(F.q), repeat=d):
        yield tuple(low) + (1,)


def _min_poly_factor(F: Field, M: np.ndarray) -> tuple:
    """A monic irreducible factor of the minimal polynomial of M, without linear factors."""
    n = M.shape[0]
    for d in range(2, n + 1):
        for f in _monic_polys(F, d):
            if not ffla.is_invertible(F, _poly_eval_matrix(F, f, M)) and _irreducible(F, f):
                return f
    raise ArithmeticError("no irreducible factor found")


def _irreducible(F: Field, f: tuple) -> bool:
    d = len(f) - 1
    # no factor of degree <= d/2
    for k in range(1, d // 2 + 1):
        for g in _monic_polys(F, k):
            if _poly_divides(F, g, f):
                return False
    return True


def _poly_divides(F: Field, g: tuple, f: tuple) -> bool:
    r = list(f)
    dg = len(g) - 1
    while len(r) - 1 >= dg:
        c = r[-1]
        if c:
            shift = len(r) - 1 - dg
            for i, gc in enumerate(g):
                r[shift + i] = int(F.sub(r[shift + i], F.mul(c, gc)))
        r.pop()
    return not any(r)


def quasi_socle(X: Rep, arm: int) -> int:
    """Index s of the mouth module E_s with Hom(E_s, X) nonzero."""
    Q, F = X.Q, X.F
    for s, E in enumerate(mouth_modules(Q, F, arm), start=1):
        if rep.hom(E, X).dim:
            return s
    raise ValueError("module does not lie in this tube")


def tube_key(X: Rep) -> IsoKey:
    """Tube coordinates of an indecomposable regular module."""
    Q, F = X.Q, X.F
    v = X.dims
    if canon.rank(Q, v) != 0:
        raise ValueError("module is not regular")
    d = canon.delta(Q)
    if canon.chi(Q, v) == 1:
        found = _tube_of_dim(Q, v)
        if found is None:
            raise ValueError(f"regular root {v} not located in any tube")
        arm, top, ql = found
        return TubeNH(arm, socle_index(top, ql, Q.weights[arm - 1]), ql)
    s = v[0]
    if v != canon.vscale(s, d):
        raise ValueError(f"{v} is neither a root nor a multiple of delta")
    kind, pt = _pencil_point(X)
    if kind == "arm":
        p = Q.weights[pt - 1]
        return TubeNH(pt, quasi_socle(X, pt), s * p)
    if isinstance(pt, int):
        return TubeHom(pt, s)
    return TubeHom(pt, s // (len(pt) - 1))


def key_of(X: Rep) -> IsoKey:
    """Canonical key: Root(v) when the dimension is a root, tube coordinates otherwise."""
    v = X.dims
    if canon.chi(X.Q, v) == 1:
        return Root(v)
    return tube_key(X)


def tube_coordinates(Q: CanonicalQuiver, F: Field, key: IsoKey) -> tuple | None:
    """(tube label, top index, quasi-length), or None for non-regular keys."""
    if isinstance(key, TubeNH):
        p = Q.weights[key.arm - 1]
        return (("arm", key.arm), top_index(key.socle, key.ql, p), key.ql)
    if isinstance(key, TubeHom):
        return (("hom", key.point), 1, key.ql)
    if isinstance(key, Root) and canon.rank(Q, key.v) == 0:
        arm, top, ql = _tube_of_dim(Q, key.v)
        return (("arm", arm), top, ql)
    return None


def to_tube_key(Q: CanonicalQuiver, F: Field, key: IsoKey) -> IsoKey:
    """Rewrite a regular Root key into TubeNH form."""
    if isinstance(key, Root) and canon.rank(Q, key.v) == 0:
        arm, top, ql = _tube_of_dim(Q, key.v)
        return TubeNH(arm, socle_index(top, ql, Q.weights[arm - 1]), ql)
    return key


def canonical_key(Q: CanonicalQuiver, F: Field, key: IsoKey) -> IsoKey:
    """Inverse of to_tube_key: Root form whenever the dimension is a root."""
    if isinstance(key, TubeNH):
        v = key_dim(Q, F, key)
        if canon.chi(Q, v) == 1:
            return Root(v)
    return key
