"""Canonical quivers of Dynkin weight type and their integral forms.

Vertices are ordered (1, x12..x1p1, x22..x2p2, x32, inf).  Arrow a_i_j runs
from x_{i,j+1} to x_{ij}, where x_{i1} = 1 and x_{i,p(i)+1} = inf, so inf is
the unique source and 1 the unique sink.  With three arms the arm paths
from inf to 1 sum to zero.

Dimension vectors are tuples of ints in vertex order and are treated as
row vectors throughout.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import sympy

Vec = tuple[int, ...]


@dataclass(frozen=True)
class CanonicalType:
    """A simply-laced Dynkin type with its arm weights."""

    name: str
    weights: tuple[int, ...]

    @property
    def family(self) -> str:
        return self.name[0]

    @property
    def r(self) -> int:
        return len(self.weights)

    @property
    def n(self) -> int:
        """Number of vertices of the Dynkin graph."""
        return sum(w - 1 for w in self.weights) + 1

    def __str__(self) -> str:
        return self.name


_E_WEIGHTS = {6: (3, 3, 2), 7: (4, 3, 2), 8: (5, 3, 2)}


def canonical_type(name: str, weights: tuple[int, ...] | None = None) -> CanonicalType:
    """Parse names like 'A3', 'D5', 'E8' (an optional underscore is accepted).

    For A_n the weights default to (ceil((n+1)/2), floor((n+1)/2)); any pair
    with p1 >= p2 >= 1 and p1 + p2 = n + 1 may be given instead.
    """
    m = re.fullmatch(r"([ADE])_?(\d+)", name.strip().upper())
    if not m:
        raise ValueError(f"unrecognised Dynkin type {name!r}")
    fam, n = m.group(1), int(m.group(2))
    label = f"{fam}{n}"
    if fam == "A":
        if n < 1:
            raise ValueError("A_n needs n >= 1")
        if weights is None:
            weights = ((n + 2) // 2, (n + 1) // 2)
        weights = tuple(weights)
        if len(weights) != 2 or sum(weights) != n + 1 or weights[0] < weights[1] or weights[1] < 1:
            raise ValueError(f"invalid weights {weights} for {label}")
        return CanonicalType(label, weights)
    if weights is not None:
        raise ValueError(f"weights are fixed for type {label}")
    if fam == "D":
        if n < 4:
            raise ValueError("D_n needs n >= 4")
        return CanonicalType(label, (n - 2, 2, 2))
    if n not in _E_WEIGHTS:
        raise ValueError("E_n needs n in {6, 7, 8}")
    return CanonicalType(label, _E_WEIGHTS[n])


def type_from_weights(weights: tuple[int, ...]) -> CanonicalType:
    w = tuple(weights)
    if len(w) == 2:
        return canonical_type(f"A{sum(w) - 1}", w)
    if len(w) == 3:
        if w[1:] == (2, 2) and w[0] >= 2:
            return CanonicalType(f"D{w[0] + 2}", w)
        for n, ew in _E_WEIGHTS.items():
            if ew == w:
                return CanonicalType(f"E{n}", w)
    raise ValueError(f"invalid weight triple {w}")


@dataclass(frozen=True)
class Arrow:
    name: str
    arm: int  # 1-based
    j: int  # 1-based position along the arm
    source: int
    target: int


def _int_matrix(M: sympy.Matrix) -> list[list[int]]:
    return [[int(M[i, j]) for j in range(M.cols)] for i in range(M.rows)]


@dataclass(frozen=True, eq=False)
class CanonicalQuiver:
    """Quiver, relation and integral forms of a canonical algebra."""

    ctype: CanonicalType
    labels: tuple[str, ...]
    arms: tuple[tuple[int, ...], ...]
    arrows: tuple[Arrow, ...]
    index: dict = field(repr=False)

    @property
    def weights(self) -> tuple[int, ...]:
        return self.ctype.weights

    @property
    def r(self) -> int:
        return self.ctype.r

    @property
    def has_relation(self) -> bool:
        return self.r == 3

    @property
    def nv(self) -> int:
        return len(self.labels)

    @property
    def sink(self) -> int:
        return 0

    @property
    def source(self) -> int:
        return self.nv - 1

    @property
    def dynkin_vertices(self) -> tuple[int, ...]:
        return tuple(range(self.nv - 1))

    def vertex(self, label) -> int:
        if isinstance(label, int):
            return label
        return self.index[label]

    def arrow(self, i: int, j: int) -> Arrow:
        return self.arrows_by_pos[(i, j)]

    @cached_property
    def arrows_by_pos(self) -> dict:
        return {(a.arm, a.j): a for a in self.arrows}

    @cached_property
    def paths(self) -> list[list[int]]:
        """paths[a][b] = number of paths a -> b in the quiver (no relation)."""
        nv = self.nv
        # inf first, then arm vertices from the inf end, then 1
        order = [self.source]
        for arm in self.arms:
            order.extend(reversed(arm[1:-1]))
        order.append(self.sink)
        P = [[0] * nv for _ in range(nv)]
        for a in range(nv):
            P[a][a] = 1
            for x in order:
                if P[a][x]:
                    for arr in self.arrows:
                        if arr.source == x:
                            P[a][arr.target] += P[a][x]
        return P

    @cached_property
    def cartan(self) -> list[list[int]]:
        """C[x][y] = dim e_x A e_y, the paths y -> x modulo the relation."""
        P = [row[:] for row in self.paths]
        if self.has_relation:
            P[self.source][self.sink] -= 1
        nv = self.nv
        return [[P[y][x] for y in range(nv)] for x in range(nv)]

    @cached_property
    def euler(self) -> list[list[int]]:
        """The matrix C^{-T}, so that B(v, w) = v C^{-T} w^T."""
        C = sympy.Matrix(self.cartan)
        if abs(C.det()) != 1:
            raise ArithmeticError("Cartan matrix is not unimodular")
        return _int_matrix(C.inv().T)

    @cached_property
    def coxeter(self) -> list[list[int]]:
        """Phi = -C^{-T} C."""
        return _int_matrix(-sympy.Matrix(self.euler) * sympy.Matrix(self.cartan))

    @cached_property
    def coxeter_inv(self) -> list[list[int]]:
        return _int_matrix(sympy.Matrix(self.coxeter).inv())

    @cached_property
    def dynkin_edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(
            (a.source, a.target) for a in self.arrows if a.source != self.source
        )

    @cached_property
    def dynkin_cartan(self) -> list[list[int]]:
        """a_xy over the Dynkin vertices: 2 on the diagonal, -1 for neighbours."""
        n = self.nv - 1
        a = [[2 * int(x == y) for y in range(n)] for x in range(n)]
        for s, t in self.dynkin_edges:
            a[s][t] = a[t][s] = -1
        return a

    def __repr__(self) -> str:
        return f"CanonicalQuiver({self.ctype.name}, weights={self.weights})"


def build(ctype: CanonicalType | str) -> CanonicalQuiver:
    if isinstance(ctype, str):
        ctype = canonical_type(ctype)
    return _build(ctype)


@lru_cache(maxsize=None)
def _build(ctype: CanonicalType) -> CanonicalQuiver:
    w = ctype.weights
    if ctype.r == 3:
        type_from_weights(w)
    labels = ["1"]
    for i, p in enumerate(w, start=1):
        labels.extend(f"x{i}{j}" for j in range(2, p + 1))
    labels.append("inf")
    index = {lab: k for k, lab in enumerate(labels)}
    inf = len(labels) - 1
    arms = []
    arrows = []
    for i, p in enumerate(w, start=1):
        arm = [0] + [index[f"x{i}{j}"] for j in range(2, p + 1)] + [inf]
        arms.append(tuple(arm))
        for j in range(1, p + 1):
            arrows.append(Arrow(f"a_{i}_{j}", i, j, arm[j], arm[j - 1]))
    return CanonicalQuiver(ctype, tuple(labels), tuple(arms), tuple(arrows), index)


# lattice operations


def delta(Q: CanonicalQuiver) -> Vec:
    return (1,) * Q.nv


def rho(Q: CanonicalQuiver) -> Vec:
    return (1,) + (0,) * (Q.nv - 2) + (-1,)


def unit(Q: CanonicalQuiver, x) -> Vec:
    x = Q.vertex(x)
    return tuple(int(k == x) for k in range(Q.nv))


def vadd(v: Vec, w: Vec) -> Vec:
    return tuple(a + b for a, b in zip(v, w))


def vsub(v: Vec, w: Vec) -> Vec:
    return tuple(a - b for a, b in zip(v, w))


def vscale(c: int, v: Vec) -> Vec:
    return tuple(c * a for a in v)


def _check(Q: CanonicalQuiver, *vs: Vec) -> None:
    for v in vs:
        if len(v) != Q.nv:
            raise ValueError(f"dimension vector {v} has length {len(v)}, expected {Q.nv}")


def euler_form(Q: CanonicalQuiver, v: Vec, w: Vec) -> int:
    _check(Q, v, w)
    E = Q.euler
    return sum(v[i] * E[i][j] * w[j] for i in range(Q.nv) if v[i] for j in range(Q.nv) if w[j])


def chi(Q: CanonicalQuiver, v: Vec) -> int:
    return euler_form(Q, v, v)


def is_root(Q: CanonicalQuiver, v: Vec) -> bool:
    return chi(Q, v) == 1


def is_radical(Q: CanonicalQuiver, v: Vec) -> bool:
    """v lies in the radical of the symmetrised form."""
    _check(Q, v)
    nv = Q.nv
    E = Q.euler
    return all(
        sum(v[i] * (E[i][j] + E[j][i]) for i in range(nv)) == 0 for j in range(nv)
    )


def rank(Q: CanonicalQuiver, v: Vec) -> int:
    _check(Q, v)
    return v[0] - v[-1]


def deg(Q: CanonicalQuiver, v: Vec) -> Vec:
    """v - v_inf * delta (the inf entry of the result is 0)."""
    _check(Q, v)
    return tuple(a - v[-1] for a in v)


def deg_dynkin(Q: CanonicalQuiver, v: Vec) -> Vec:
    """deg v restricted to the Dynkin vertices."""
    return deg(Q, v)[:-1]


def org(Q: CanonicalQuiver, v: Vec) -> Vec:
    """The minimal lift v - min(v) * delta of a positive root."""
    _check(Q, v)
    if min(v) < 0 or not any(v) or not is_root(Q, v):
        raise ValueError(f"{v} is not a positive root")
    m = min(v)
    return tuple(a - m for a in v)


def is_positive(v: Vec) -> bool:
    return min(v) >= 0 and any(v)


def component(Q: CanonicalQuiver, v: Vec) -> str:
    rk = rank(Q, v)
    if rk > 0:
        return "preprojective"
    if rk < 0:
        return "preinjective"
    return "regular"


# Dynkin roots


def dynkin_chi(Q: CanonicalQuiver, a: Vec) -> int:
    s = sum(x * x for x in a)
    for x, y in Q.dynkin_edges:
        s -= a[x] * a[y]
    return s


@lru_cache(maxsize=None)
def dynkin_positive_roots(Q: CanonicalQuiver) -> tuple[Vec, ...]:
    """Positive roots of the Dynkin graph, grown from the simple roots."""
    n = Q.nv - 1
    simples = [tuple(int(k == x) for k in range(n)) for x in range(n)]
    found = set(simples)
    frontier = list(simples)
    while frontier:
        nxt = []
        for a in frontier:
            for s in simples:
                b = vadd(a, s)
                if b not in found and dynkin_chi(Q, b) == 1:
                    found.add(b)
                    nxt.append(b)
        frontier = nxt
    return tuple(sorted(found, key=lambda a: (sum(a), a)))


def dynkin_roots(Q: CanonicalQuiver) -> tuple[Vec, ...]:
    pos = dynkin_positive_roots(Q)
    return pos + tuple(vscale(-1, a) for a in pos)


def lift(Q: CanonicalQuiver, alpha: Vec) -> Vec:
    """Reduced positive root of the canonical algebra with degree alpha."""
    v = tuple(alpha) + (0,)
    m = min(v)
    return tuple(a - m for a in v)


def roots_enumerate(Q: CanonicalQuiver, t_max: int = 0) -> list[Vec]:
    """All positive roots whose minimal entry is at most t_max."""
    if t_max < 0:
        raise ValueError("t_max must be non-negative")
    d = delta(Q)
    out = []
    for alpha in dynkin_roots(Q):
        w = lift(Q, alpha)
        for t in range(t_max + 1):
            out.append(vadd(w, vscale(t, d)))
    return sorted(out, key=lambda v: (sum(v), v))


def reduced_roots(Q: CanonicalQuiver) -> list[Vec]:
    return roots_enumerate(Q, 0)


# Coxeter transformation


def _row_times(v: Vec, M: list[list[int]]) -> Vec:
    n = len(v)
    return tuple(sum(v[i] * M[i][j] for i in range(n)) for j in range(n))


def coxeter_shift(Q: CanonicalQuiver, v: Vec, t: int = 1) -> Vec:
    """v Phi^{-t}; negative t applies Phi."""
    _check(Q, v)
    M = Q.coxeter_inv if t >= 0 else Q.coxeter
    for _ in range(abs(t)):
        v = _row_times(v, M)
    return v


def coxeter_inverse_display(Q: CanonicalQuiver) -> list[list[int]]:
    """Closed-form block pattern of Phi^{-1} for three-armed types."""
    if Q.r != 3:
        raise ValueError("closed form only available for three arms")
    nv = Q.nv
    M = [[0] * nv for _ in range(nv)]
    inf = Q.source
    arm_int = [list(arm[1:-1]) for arm in Q.arms]
    # first row
    for k in range(3):
        for x in arm_int[k][1:]:
            M[0][x] = -1
    M[0][inf] = -1
    # arm rows: shifted identity, last row of arm is ones outside the arm
    for k in range(3):
        verts = arm_int[k]
        for a, b in zip(verts, verts[1:]):
            M[a][b] = 1
        last = verts[-1]
        for y in range(nv):
            if y not in verts:
                M[last][y] = 1
    M[inf] = [-1] * nv
    M[inf][0] = -2
    return M


def tau_delta_pair(Q: CanonicalQuiver, v: Vec, t_max: int = 60) -> tuple[int, int] | None:
    """Smallest t >= 1 with v Phi^{-t} = v + m delta; returns (t, m) or None."""
    _check(Q, v)
    w = v
    for t in range(1, t_max + 1):
        w = _row_times(w, Q.coxeter_inv)
        diff = vsub(w, v)
        if len(set(diff)) == 1:
            return t, diff[0]
    return None
