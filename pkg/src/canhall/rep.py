"""Finite-field representations of a canonical quiver.

A representation stores one matrix per arrow, of shape
(dim at target, dim at source).  Homomorphisms, extensions, submodules,
quotients, indecomposability and isomorphism are decided exactly by
linear algebra over the field.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from . import ffla
from .canon import CanonicalQuiver, Vec
from .ffla import EnumerationTooLarge, Field, Subspace

ENUM_CAP = 20000
SUBMODULE_CAP = 10**6


class Rep:
    """A representation of a canonical quiver over a finite field."""

    __slots__ = ("Q", "F", "dims", "maps", "_cache", "__weakref__")

    def __init__(self, Q: CanonicalQuiver, F: Field, dims: Sequence[int], maps, check: bool = True):
        self.Q = Q
        self.F = F
        self.dims = tuple(int(d) for d in dims)
        if len(self.dims) != Q.nv:
            raise ValueError(f"expected {Q.nv} dimensions, got {len(self.dims)}")
        if isinstance(maps, dict):
            maps = [_lookup(maps, a) for a in Q.arrows]
        mats = []
        for a, m in zip(Q.arrows, maps):
            m = np.asarray(m, dtype=np.int64).reshape(self.dims[a.target], self.dims[a.source])
            mats.append(m)
        if len(mats) != len(Q.arrows):
            raise ValueError("one matrix per arrow is required")
        self.maps = tuple(mats)
        self._cache: dict = {}
        if check and not check_relation(self):
            raise ValueError("representation violates the relation")

    @property
    def dim(self) -> int:
        return sum(self.dims)

    @property
    def dimvec(self) -> Vec:
        return self.dims

    def map(self, i: int, j: int) -> np.ndarray:
        return self.maps[self.Q.arrows.index(self.Q.arrow(i, j))]

    def arm_composite(self, i: int) -> np.ndarray:
        """Composite of the arm-i maps from inf down to 1."""
        Q, F = self.Q, self.F
        arm_arrows = [k for k, a in enumerate(Q.arrows) if a.arm == i]
        out = ffla.identity(self.dims[Q.source])
        for k in reversed(arm_arrows):
            out = ffla.mat_mul(F, self.maps[k], out)
        return out

    def __repr__(self) -> str:
        return f"Rep({self.Q.ctype.name}, {self.F}, dims={self.dims})"


def _lookup(maps: dict, a):
    for key in (a.name, (a.arm, a.j)):
        if key in maps:
            return maps[key]
    raise KeyError(f"missing map for arrow {a.name}")


def check_relation(X: Rep) -> bool:
    if not X.Q.has_relation:
        return True
    F = X.F
    total = ffla.zeros(X.dims[0], X.dims[-1])
    for i in range(1, X.Q.r + 1):
        total = F.add(total, X.arm_composite(i))
    return not np.any(total)


def zero_rep(Q: CanonicalQuiver, F: Field) -> Rep:
    return Rep(Q, F, (0,) * Q.nv, [ffla.zeros(0, 0) for _ in Q.arrows])


def direct_sum(X: Rep, Y: Rep) -> Rep:
    maps = []
    for a, mx, my in zip(X.Q.arrows, X.maps, Y.maps):
        m = ffla.zeros(X.dims[a.target] + Y.dims[a.target], X.dims[a.source] + Y.dims[a.source])
        m[: mx.shape[0], : mx.shape[1]] = mx
        m[mx.shape[0] :, mx.shape[1] :] = my
        maps.append(m)
    return Rep(X.Q, X.F, [a + b for a, b in zip(X.dims, Y.dims)], maps, check=False)


# Hom and Ext


def _offsets(sizes: Sequence[int]) -> list[int]:
    out = [0]
    for s in sizes:
        out.append(out[-1] + s)
    return out


def _kron(F: Field, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Kronecker product with field multiplication."""
    r1, c1 = A.shape
    r2, c2 = B.shape
    prod = F.mul(A[:, None, :, None], B[None, :, None, :])
    return np.asarray(prod).reshape(r1 * r2, c1 * c2)


def _coboundary(X: Rep, Y: Rep) -> tuple[np.ndarray, list[int], list[int]]:
    """Matrix of phi -> (Y(a) phi_s - phi_t X(a))_a from vertex maps to arrow maps."""
    Q, F = X.Q, X.F
    v, w = X.dims, Y.dims
    phi_off = _offsets([w[x] * v[x] for x in range(Q.nv)])
    eta_off = _offsets([w[a.target] * v[a.source] for a in Q.arrows])
    D = ffla.zeros(eta_off[-1], phi_off[-1])
    for k, a in enumerate(Q.arrows):
        s, t = a.source, a.target
        r0, r1 = eta_off[k], eta_off[k + 1]
        if r0 == r1:
            continue
        if w[s] * v[s]:
            D[r0:r1, phi_off[s] : phi_off[s + 1]] = np.kron(Y.maps[k], ffla.identity(v[s]))
        if w[t] * v[t]:
            block = np.kron(ffla.identity(w[t]), X.maps[k].T)
            D[r0:r1, phi_off[t] : phi_off[t + 1]] = F.neg(block)
    return D, phi_off, eta_off


@dataclass
class HomSpace:
    """Basis of Hom(X, Y); each row is a flattened tuple of vertex maps."""

    X: Rep
    Y: Rep
    basis: np.ndarray
    offsets: list[int]

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def unflatten(self, flat: np.ndarray) -> list[np.ndarray]:
        v, w = self.X.dims, self.Y.dims
        return [
            np.asarray(flat[self.offsets[x] : self.offsets[x + 1]]).reshape(w[x], v[x])
            for x in range(len(v))
        ]

    def maps(self) -> list[list[np.ndarray]]:
        return [self.unflatten(b) for b in self.basis]

    def element(self, coeffs) -> list[np.ndarray]:
        F = self.X.F
        flat = ffla.mat_mul(F, np.asarray(coeffs, dtype=np.int64)[None, :], self.basis)[0]
        return self.unflatten(flat)


def hom(X: Rep, Y: Rep) -> HomSpace:
    key = ("hom", id(Y))
    hit = X._cache.get(key)
    if hit is not None and hit[0] is Y:
        return hit[1]
    D, phi_off, _ = _coboundary(X, Y)
    basis = ffla.nullspace(X.F, D) if D.shape[1] else ffla.zeros(0, 0)
    hs = HomSpace(X, Y, basis, phi_off)
    X._cache[key] = (Y, hs)
    return hs


def end(X: Rep) -> HomSpace:
    return hom(X, X)


def compose(F: Field, g: Sequence[np.ndarray], f: Sequence[np.ndarray]) -> list[np.ndarray]:
    """g after f, vertexwise."""
    return [ffla.mat_mul(F, gx, fx) for gx, fx in zip(g, f)]


def is_iso_map(F: Field, f: Sequence[np.ndarray]) -> bool:
    return all(m.shape[0] == m.shape[1] and ffla.is_invertible(F, m) for m in f)


def is_injective_map(F: Field, f: Sequence[np.ndarray]) -> bool:
    return all(ffla.mat_rank(F, m) == m.shape[1] for m in f if m.shape[1])


@dataclass
class ExtGroup:
    """Ext^1(X, Y) as cocycles modulo coboundaries.

    `classes` holds cocycles whose cosets form a basis of the quotient, so
    every extension class is sum c_i classes[i] for a unique coefficient
    vector.
    """

    X: Rep
    Y: Rep
    cocycles: np.ndarray
    coboundaries: np.ndarray
    classes: np.ndarray
    eta_offsets: list[int]
    hom_dim: int

    @property
    def dim(self) -> int:
        return self.classes.shape[0]

    def cocycle(self, coeffs) -> np.ndarray:
        F = self.X.F
        if self.dim == 0:
            return np.zeros(self.eta_offsets[-1], dtype=np.int64)
        return ffla.mat_mul(F, np.asarray(coeffs, dtype=np.int64)[None, :], self.classes)[0]

    def middle_term(self, coeffs) -> Rep:
        return middle_term(self.X, self.Y, self.cocycle(coeffs), self.eta_offsets)

    def elements(self, cap: int = ffla.DEFAULT_CAP) -> Iterator[tuple[int, ...]]:
        yield from ffla.all_combinations(self.X.F, list(range(self.dim)), cap)


def _relation_map(X: Rep, Y: Rep, eta_off: list[int]) -> np.ndarray:
    """Linearised relation: eta -> sum over arms of the (1, inf) block of the composite."""
    Q, F = X.Q, X.F
    out = ffla.zeros(Y.dims[0] * X.dims[-1], eta_off[-1])
    for i in range(1, Q.r + 1):
        ks = [k for k, a in enumerate(Q.arrows) if a.arm == i]
        for pos, k in enumerate(ks):
            a = Q.arrows[k]
            L = ffla.identity(Y.dims[0])
            for kk in ks[:pos]:
                L = ffla.mat_mul(F, L, Y.maps[kk])
            R = ffla.identity(X.dims[a.source])
            for kk in ks[pos + 1 :]:
                R = ffla.mat_mul(F, R, X.maps[kk])
            if eta_off[k] == eta_off[k + 1] or out.shape[0] == 0:
                continue
            block = _kron(F, L, R.T)
            cols = slice(eta_off[k], eta_off[k + 1])
            out[:, cols] = F.add(out[:, cols], block)
    return out


def ext1(X: Rep, Y: Rep) -> ExtGroup:
    key = ("ext", id(Y))
    hit = X._cache.get(key)
    if hit is not None and hit[0] is Y:
        return hit[1]
    F = X.F
    D, phi_off, eta_off = _coboundary(X, Y)
    n_eta = eta_off[-1]
    hom_dim = D.shape[1] - ffla.mat_rank(F, D) if D.shape[1] else 0
    if n_eta == 0:
        empty = ffla.zeros(0, 0)
        g = ExtGroup(X, Y, empty, empty, empty, eta_off, hom_dim)
        X._cache[key] = (Y, g)
        return g
    B = ffla.rref(F, D.T)[0] if D.shape[1] else ffla.zeros(0, n_eta)
    if X.Q.has_relation:
        Zc = ffla.nullspace(F, _relation_map(X, Y, eta_off))
    else:
        Zc = ffla.identity(n_eta)
    span = Subspace(F, B, n_eta)
    chosen = []
    for z in Zc:
        if not span.contains(z):
            chosen.append(z)
            span = Subspace(F, np.vstack([span.basis, z[None, :]]), n_eta)
    classes = np.array(chosen, dtype=np.int64).reshape(len(chosen), n_eta)
    g = ExtGroup(X, Y, Zc, B, classes, eta_off, hom_dim)
    X._cache[key] = (Y, g)
    return g


def middle_term(X: Rep, Y: Rep, eta: np.ndarray, eta_off: list[int] | None = None) -> Rep:
    """Extension of X by Y: Y is the submodule spanned by the first block."""
    Q = X.Q
    if eta_off is None:
        eta_off = _offsets([Y.dims[a.target] * X.dims[a.source] for a in Q.arrows])
    maps = []
    for k, a in enumerate(Q.arrows):
        wt, ws = Y.dims[a.target], Y.dims[a.source]
        vt, vs = X.dims[a.target], X.dims[a.source]
        m = ffla.zeros(wt + vt, ws + vs)
        m[:wt, :ws] = Y.maps[k]
        m[wt:, ws:] = X.maps[k]
        m[:wt, ws:] = np.asarray(eta[eta_off[k] : eta_off[k + 1]]).reshape(wt, vs)
        maps.append(m)
    Z = Rep(Q, X.F, [a + b for a, b in zip(Y.dims, X.dims)], maps, check=False)
    if not check_relation(Z):
        raise ValueError("cocycle does not satisfy the linearised relation")
    return Z


# submodules and quotients


def _vertex_order(Q: CanonicalQuiver) -> list[int]:
    order = [Q.sink]
    for arm in Q.arms:
        order.extend(arm[1:-1])
    order.append(Q.source)
    return order


def _out_arrows(Q: CanonicalQuiver) -> dict[int, list[int]]:
    out: dict[int, list[int]] = {x: [] for x in range(Q.nv)}
    for k, a in enumerate(Q.arrows):
        out[a.source].append(k)
    return out


def submodules(
    Z: Rep, target: Sequence[int] | None = None, cap: int = SUBMODULE_CAP
) -> Iterator[tuple[Subspace, ...]]:
    """Every subrepresentation of Z (of dimension vector `target` if given).

    Subspaces are chosen from the sink towards the source; at each vertex
    the admissible subspaces are those inside the joint preimage of the
    subspaces already chosen at the targets of its arrows, so the
    enumeration is exhaustive and free of duplicates.
    """
    Q, F = Z.Q, Z.F
    order = _vertex_order(Q)
    outs = _out_arrows(Q)
    if target is not None:
        target = tuple(target)
        if any(t < 0 or t > d for t, d in zip(target, Z.dims)):
            return
    chosen: list[Subspace | None] = [None] * Q.nv
    count = [0]

    def rec(pos: int):
        if pos == len(order):
            count[0] += 1
            if count[0] > cap:
                raise EnumerationTooLarge(f"more than {cap} submodules")
            yield tuple(chosen)
            return
        x = order[pos]
        P = Subspace.full(F, Z.dims[x])
        for k in outs[x]:
            a = Q.arrows[k]
            P = ffla.intersect(F, P, ffla.preimage(F, Z.maps[k], chosen[a.target]))
        dims = [target[x]] if target is not None else range(P.dim + 1)
        for d in dims:
            if d > P.dim:
                continue
            for U in ffla.subspaces_of(F, P, d, cap):
                chosen[x] = U
                yield from rec(pos + 1)
        chosen[x] = None

    yield from rec(0)


def is_submodule(Z: Rep, U: Sequence[Subspace]) -> bool:
    F = Z.F
    for k, a in enumerate(Z.Q.arrows):
        img = ffla.image(F, Z.maps[k], U[a.source])
        for row in img.basis:
            if not U[a.target].contains(row):
                return False
    return True


def _coords(F: Field, U: Subspace, vecs: np.ndarray) -> np.ndarray:
    """Coordinates (columns) of column vectors lying in U w.r.t. its RREF basis."""
    return vecs[U.pivots, :] if U.dim else ffla.zeros(0, vecs.shape[1])


def sub_rep(Z: Rep, U: Sequence[Subspace]) -> Rep:
    if not is_submodule(Z, U):
        raise ValueError("subspaces are not closed under the arrows")
    F = Z.F
    maps = []
    for k, a in enumerate(Z.Q.arrows):
        Bs = U[a.source].basis
        imgs = ffla.mat_mul(F, Z.maps[k], Bs.T) if Bs.shape[0] else ffla.zeros(Z.dims[a.target], 0)
        maps.append(_coords(F, U[a.target], imgs))
    return Rep(Z.Q, F, [u.dim for u in U], maps, check=False)


def _reduce(F: Field, U: Subspace, vecs: np.ndarray) -> np.ndarray:
    """Reduce column vectors modulo U (RREF normal form)."""
    if U.dim == 0 or vecs.shape[1] == 0:
        return vecs
    c = vecs[U.pivots, :]
    return F.sub(vecs, ffla.mat_mul(F, U.basis.T, c))


def quotient(Z: Rep, U: Sequence[Subspace]) -> Rep:
    """Z/U on the complement spanned by the non-pivot coordinate vectors."""
    if not is_submodule(Z, U):
        raise ValueError("subspaces are not closed under the arrows")
    F = Z.F
    free = []
    for x in range(Z.Q.nv):
        piv = set(U[x].pivots)
        free.append([c for c in range(Z.dims[x]) if c not in piv])
    maps = []
    for k, a in enumerate(Z.Q.arrows):
        cols = Z.maps[k][:, free[a.source]]
        red = _reduce(F, U[a.target], cols)
        maps.append(red[free[a.target], :])
    return Rep(Z.Q, F, [len(f) for f in free], maps, check=False)


# endomorphisms, indecomposability, isomorphism


def _identity_maps(X: Rep) -> list[np.ndarray]:
    return [ffla.identity(d) for d in X.dims]


def _power(F: Field, f: Sequence[np.ndarray], n: int) -> list[np.ndarray]:
    out = [ffla.identity(m.shape[0]) for m in f]
    base = list(f)
    while n:
        if n & 1:
            out = compose(F, out, base)
        base = compose(F, base, base)
        n >>= 1
    return out


def _fitting(X: Rep, f: Sequence[np.ndarray]) -> str:
    """'zero', 'iso' or 'split' for the stable power of an endomorphism."""
    F = X.F
    g = _power(F, f, max(X.dims) if X.dims else 0)
    if all(not np.any(m) for m in g):
        return "zero"
    if is_iso_map(F, g):
        return "iso"
    return "split"


def _flatten(maps: Sequence[np.ndarray]) -> np.ndarray:
    if not maps:
        return np.zeros(0, dtype=np.int64)
    return np.concatenate([m.reshape(-1) for m in maps])


def _shift(F: Field, f: Sequence[np.ndarray], lam: int) -> list[np.ndarray]:
    """f - lam * id."""
    out = []
    for m in f:
        d = m.copy()
        if d.shape[0]:
            idx = np.arange(d.shape[0])
            d[idx, idx] = F.sub(d[idx, idx], lam)
        out.append(d)
    return out


def _is_nilpotent(X: Rep, f: Sequence[np.ndarray]) -> bool:
    return _fitting(X, f) == "zero"


def _local_residue_k(X: Rep) -> bool:
    """Certify End(X) local with residue field k.

    Each basis element is split as lam*1 + n with n nilpotent; the span S of
    these n must have codimension one, be closed under products and be a
    nilpotent algebra.  Then S is the radical and End(X)/S = k.
    """
    key = "local_k"
    if key in X._cache:
        return X._cache[key]
    F = X.F
    E = end(X)
    ok = _local_residue_k_uncached(X, E, F)
    X._cache[key] = ok
    return ok


def _local_residue_k_uncached(X: Rep, E: HomSpace, F: Field) -> bool:
    if X.dim == 0:
        return False
    if E.dim == 1:
        return True
    nil = []
    for f in E.maps():
        for lam in range(F.q):
            g = _shift(F, f, lam)
            if _is_nilpotent(X, g):
                nil.append(g)
                break
        else:
            return False
    N = len(E.offsets) and E.offsets[-1]
    S = Subspace(F, np.array([_flatten(g) for g in nil], dtype=np.int64), N)
    if S.dim != E.dim - 1:
        return False
    Sb = [E.unflatten(b) for b in S.basis]
    for a, b in itertools.product(Sb, Sb):
        if not S.contains(_flatten(compose(F, a, b))):
            return False
    # S^m shrinks to zero iff S is nilpotent
    cur = Sb
    for _ in range(max(X.dims) * len(X.dims) + 1):
        prods = [_flatten(compose(F, a, b)) for a in cur for b in Sb]
        if not prods:
            return True
        P = Subspace(F, np.array(prods, dtype=np.int64), N)
        if P.dim == 0:
            return True
        cur = [E.unflatten(b) for b in P.basis]
    return False


def _candidates(X: Rep, E: HomSpace) -> Iterator[list[np.ndarray]]:
    F = X.F
    maps = E.maps()
    for f in maps:
        yield f
        for lam in range(1, F.q):
            yield _shift(F, f, lam)
    for i, j in itertools.combinations(range(len(maps)), 2):
        for c in range(1, F.q):
            g = [F.add(a, F.mul(c, b)) for a, b in zip(maps[i], maps[j])]
            yield g
            for lam in range(1, F.q):
                yield _shift(F, g, lam)


def _find_split(X: Rep, enum_cap: int = ENUM_CAP) -> list[np.ndarray] | None | bool:
    """A splitting endomorphism, or False when End(X) is certified local."""
    E = end(X)
    for f in _candidates(X, E):
        if _fitting(X, f) == "split":
            return f
    if X.F.q ** E.dim > enum_cap:
        return None
    for coeffs in ffla.all_combinations(X.F, list(range(E.dim)), enum_cap):
        f = E.element(coeffs)
        if _fitting(X, f) == "split":
            return f
    return False


def is_indecomposable(X: Rep, enum_cap: int = ENUM_CAP) -> bool:
    if X.dim == 0:
        return False
    if "indec" in X._cache:
        return X._cache["indec"]
    if _local_residue_k(X):
        res = True
    else:
        f = _find_split(X, enum_cap)
        if f is None:
            raise EnumerationTooLarge("indecomposability undecided within the enumeration cap")
        res = f is False
    X._cache["indec"] = res
    return res


def _fitting_parts(X: Rep, f: Sequence[np.ndarray]) -> tuple[Rep, Rep]:
    F = X.F
    g = _power(F, f, max(X.dims))
    im = [Subspace(F, m.T, m.shape[0]) if m.shape[0] else Subspace.zero(F, 0) for m in g]
    ker = [Subspace(F, ffla.nullspace(F, m), m.shape[1]) if m.shape[1] else Subspace.zero(F, 0) for m in g]
    return sub_rep(X, im), sub_rep(X, ker)


def decompose(X: Rep, enum_cap: int = ENUM_CAP) -> list[Rep]:
    """Indecomposable summands of X (Krull-Schmidt), found by Fitting splitting."""
    if X.dim == 0:
        return []
    if _local_residue_k(X):
        return [X]
    f = _find_split(X, enum_cap)
    if f is None:
        raise EnumerationTooLarge("decomposition undecided within the enumeration cap")
    if f is False:
        X._cache["indec"] = True
        return [X]
    X._cache["indec"] = False
    A, B = _fitting_parts(X, f)
    return decompose(A, enum_cap) + decompose(B, enum_cap)


def _iso_indecomposable(X: Rep, Y: Rep) -> bool:
    """For X with local End: X = Y iff some g_j f_i is invertible."""
    F = X.F
    fs = hom(X, Y).maps()
    gs = hom(Y, X).maps()
    for f in fs:
        for g in gs:
            if is_iso_map(F, compose(F, g, f)):
                return True
    return False


def signature(X: Rep) -> tuple:
    """Cheap isomorphism invariants: ranks of arrow maps, arm composites and
    pencils of parallel arrows, and Hom dimensions against the simples."""
    hit = X._cache.get("sig")
    if hit is not None:
        return hit
    Q, F = X.Q, X.F
    ranks = [ffla.mat_rank(F, m) for m in X.maps]
    arms = [ffla.mat_rank(F, X.arm_composite(i)) for i in range(1, Q.r + 1)]
    pencils = []
    for k, l in itertools.combinations(range(len(Q.arrows)), 2):
        a, b = Q.arrows[k], Q.arrows[l]
        if (a.source, a.target) == (b.source, b.target):
            pencils.append(sorted(ffla.mat_rank(F, F.add(X.maps[k], F.mul(c, X.maps[l]))) for c in range(F.q)))
    socle, top = [], []
    for x in range(Q.nv):
        outs = [X.maps[k] for k, a in enumerate(Q.arrows) if a.source == x and X.dims[x]]
        socle.append(X.dims[x] - ffla.mat_rank(F, np.vstack(outs)) if outs else X.dims[x])
        ins = [X.maps[k] for k, a in enumerate(Q.arrows) if a.target == x and X.dims[x]]
        top.append(X.dims[x] - ffla.mat_rank(F, np.hstack(ins)) if ins else X.dims[x])
    out = (X.dims, tuple(ranks), tuple(arms), tuple(map(tuple, pencils)), tuple(socle), tuple(top))
    X._cache["sig"] = out
    return out


def iso(X: Rep, Y: Rep, enum_cap: int = ENUM_CAP) -> bool:
    if X.dims != Y.dims:
        return False
    if X.dim == 0:
        return True
    dX = end(X).dim
    if dX == 1:
        # X is a brick: Y = X iff Hom(X, Y) is a line spanned by an isomorphism
        h = hom(X, Y)
        return h.dim == 1 and is_iso_map(X.F, h.maps()[0])
    if hom(X, Y).dim != dX or end(Y).dim != dX or hom(Y, X).dim != dX:
        return False
    if is_indecomposable(X, enum_cap):
        return is_indecomposable(Y, enum_cap) and _iso_indecomposable(X, Y)
    if is_indecomposable(Y, enum_cap):
        return False
    xs, ys = decompose(X, enum_cap), decompose(Y, enum_cap)
    if len(xs) != len(ys):
        return False
    used = [False] * len(ys)
    for a in xs:
        for k, b in enumerate(ys):
            if not used[k] and a.dims == b.dims and _iso_indecomposable(a, b):
                used[k] = True
                break
        else:
            return False
    return True


def residue_degree(X: Rep, enum_cap: int = ENUM_CAP) -> int:
    """[End(X)/rad : k] for indecomposable X."""
    if _local_residue_k(X):
        return 1
    E = end(X)
    F = X.F
    if F.q**E.dim > enum_cap:
        raise EnumerationTooLarge("residue field undecided within the enumeration cap")
    nonunits = 0
    for coeffs in ffla.all_combinations(F, list(range(E.dim)), enum_cap):
        if not is_iso_map(F, E.element(coeffs)):
            nonunits += 1
    j = round(np.log(nonunits) / np.log(F.q)) if nonunits > 1 else 0
    if F.q**j != nonunits:
        raise ArithmeticError("non-units do not form a subspace; End is not local")
    return E.dim - j


def _gl_order(n: int, q: int) -> int:
    out = 1
    for i in range(n):
        out *= q**n - q**i
    return out


def aut_count(X: Rep, enum_cap: int = ENUM_CAP) -> int:
    """|Aut X| = |rad End X| * |units of End X / rad|, via the summand structure."""
    if "aut" in X._cache:
        return X._cache["aut"]
    q = X.F.q
    if X.dim == 0:
        return 1
    dim_end = end(X).dim
    if _local_residue_k(X):
        res = q**dim_end - q ** (dim_end - 1)
    else:
        parts = decompose(X, enum_cap)
        groups: list[list[Rep]] = []
        for a in parts:
            for g in groups:
                if g[0].dims == a.dims and _iso_indecomposable(g[0], a):
                    g.append(a)
                    break
            else:
                groups.append([a])
        semisimple_dim = 0
        units = 1
        for g in groups:
            d = residue_degree(g[0], enum_cap)
            n = len(g)
            semisimple_dim += n * n * d
            units *= _gl_order(n, q**d)
        res = q ** (dim_end - semisimple_dim) * units
    X._cache["aut"] = res
    return res


def aut_count_brute(X: Rep, cap: int = ffla.DEFAULT_CAP) -> int:
    """|Aut X| by enumerating End(X)."""
    E = end(X)
    F = X.F
    return sum(
        1 for c in ffla.all_combinations(F, list(range(E.dim)), cap) if is_iso_map(F, E.element(c))
    )


# Gabriel-Roiter measure


@dataclass(frozen=True)
class GRMeasure:
    lengths: tuple[int, ...]

    @property
    def value(self) -> Fraction:
        return sum((Fraction(1, 2**l) for l in self.lengths), Fraction(0))

    def __lt__(self, other: "GRMeasure") -> bool:
        return self.value < other.value


class _GRCache:
    def __init__(self):
        self.entries: dict[Vec, list[tuple[Rep, GRMeasure]]] = {}

    def find(self, X: Rep):
        for Y, m in self.entries.get(X.dims, []):
            if iso(X, Y):
                return m
        return None

    def add(self, X: Rep, m: GRMeasure) -> None:
        self.entries.setdefault(X.dims, []).append((X, m))


def _proper_submodules(M: Rep, cap: int):
    for U in submodules(M, None, cap):
        d = tuple(u.dim for u in U)
        if d != M.dims and any(d):
            yield U


def gr_measure(M: Rep, cap: int = 8, _memo: _GRCache | None = None) -> GRMeasure:
    """Exact Gabriel-Roiter measure, recursing over indecomposable submodules."""
    if M.dim > cap:
        raise EnumerationTooLarge(f"total dimension {M.dim} exceeds the measure cap {cap}")
    memo = _memo if _memo is not None else _GRCache()
    if M.dim == 0:
        return GRMeasure(())
    hit = memo.find(M)
    if hit is not None:
        return hit
    best = GRMeasure(())
    for U in _proper_submodules(M, SUBMODULE_CAP):
        N = sub_rep(M, U)
        if not is_indecomposable(N):
            continue
        m = gr_measure(N, cap, memo)
        if best < m:
            best = m
    if is_indecomposable(M):
        best = GRMeasure(tuple(sorted(best.lengths + (M.dim,))))
    memo.add(M, best)
    return best


def gr_submodules(M: Rep, cap: int = 8) -> list[tuple[tuple[Subspace, ...], Rep]]:
    """Indecomposable proper submodules of maximal measure, as (subspaces, rep)."""
    if not is_indecomposable(M):
        raise ValueError("GR-submodules are defined for indecomposable modules")
    memo = _GRCache()
    found = []
    best = None
    for U in _proper_submodules(M, SUBMODULE_CAP):
        N = sub_rep(M, U)
        if not is_indecomposable(N):
            continue
        m = gr_measure(N, cap, memo)
        if best is None or best < m:
            best, found = m, [(U, N)]
        elif m.value == best.value:
            found.append((U, N))
    return found


# serialisation


def rep_to_json(X: Rep) -> dict:
    return {
        "type": X.Q.ctype.name,
        "weights": list(X.Q.weights),
        "field": [X.F.p, X.F.e],
        "dims": list(X.dims),
        "maps": {a.name: [int(v) for v in m.reshape(-1)] for a, m in zip(X.Q.arrows, X.maps)},
    }


def rep_from_json(data: dict | str) -> Rep:
    from .canon import build, canonical_type

    if isinstance(data, str):
        data = json.loads(data)
    ctype = canonical_type(data["type"], tuple(data["weights"]) if data["type"][0] == "A" else None)
    Q = build(ctype)
    F = ffla.field_make(*data["field"])
    return Rep(Q, F, data["dims"], {k: np.array(v, dtype=np.int64) for k, v in data["maps"].items()})


def random_rep(
    Q: CanonicalQuiver, F: Field, dims: Sequence[int], rng: np.random.Generator, tries: int = 50
) -> Rep | None:
    """A random representation satisfying the relation, or None if none was found.

    All maps are drawn at random except the arm-3 map into vertex 1, which is
    a random solution of the relation (particular solution plus a random
    element of the kernel).
    """
    dims = tuple(dims)
    for _ in range(tries):
        maps = [ffla.random_matrix(F, dims[a.target], dims[a.source], rng) for a in Q.arrows]
        if not Q.has_relation:
            return Rep(Q, F, dims, maps, check=False)
        X = Rep(Q, F, dims, maps, check=False)
        k31 = Q.arrows.index(Q.arrow(3, 1))
        T = F.neg(F.add(X.arm_composite(1), X.arm_composite(2)))
        R = ffla.identity(dims[-1])
        for k in reversed([k for k, a in enumerate(Q.arrows) if a.arm == 3 and a.j > 1]):
            R = ffla.mat_mul(F, maps[k], R)
        # unknown A with A R = T, row by row: R^T a^T = t^T
        A = ffla.zeros(dims[0], R.shape[0])
        ok = True
        for i in range(dims[0]):
            sol = ffla.solve_linear(F, R.T, T[i])
            if sol is None:
                ok = False
                break
            row = sol.particular
            for b in sol.kernel.basis:
                row = F.add(row, F.mul(int(rng.integers(F.q)), b))
            A[i] = row
        if not ok:
            continue
        maps[k31] = A
        return Rep(Q, F, dims, maps)
    return None
