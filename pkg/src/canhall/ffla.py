"""Exact arithmetic over GF(p^e) and the linear algebra built on it.

Field elements are integers 0..q-1.  For extension fields the base-p digits
of an element are the coefficients of a polynomial over GF(p), reduced
modulo a fixed irreducible polynomial.  Matrices are numpy int64 arrays and
act on column vectors; subspaces are stored by a basis of row vectors in
reduced row-echelon form.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

import numpy as np

DEFAULT_CAP = 10**6
# set by the command line to override every per-call cap
CAP_OVERRIDE: int | None = None
TABLE_LIMIT = 1024
MAX_ORDER = 2**16


class EnumerationTooLarge(RuntimeError):
    """Raised when an enumeration would exceed its configured cap."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _poly_mulmod(a: list[int], b: list[int], mod: list[int], p: int) -> list[int]:
    """Multiply coefficient lists (low degree first) modulo a monic polynomial."""
    e = len(mod) - 1
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    for k in range(len(out) - 1, e - 1, -1):
        c = out[k]
        if c:
            for j in range(e + 1):
                out[k - e + j] = (out[k - e + j] - c * mod[j]) % p
    out = out[:e] + [0] * max(0, e - len(out))
    return out


def _digits(n: int, p: int, e: int) -> list[int]:
    out = []
    for _ in range(e):
        n, r = divmod(n, p)
        out.append(r)
    return out


def _undigits(ds: list[int], p: int) -> int:
    n = 0
    for d in reversed(ds):
        n = n * p + d
    return n


def _is_irreducible(coeffs: list[int], p: int) -> bool:
    """Brute-force irreducibility test by trial division with monic factors."""
    e = len(coeffs) - 1
    for d in range(1, e // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            f = list(tail) + [1]
            # remainder of coeffs by f
            r = list(coeffs)
            for k in range(len(r) - 1, d - 1, -1):
                c = r[k]
                if c:
                    for j in range(d + 1):
                        r[k - d + j] = (r[k - d + j] - c * f[j]) % p
            if not any(r[:d]):
                return False
    return True


@lru_cache(maxsize=None)
def lowest_irreducible(p: int, e: int) -> tuple[int, ...]:
    """Monic irreducible of degree e with the smallest integer encoding sum c_i p^i."""
    if e == 1:
        return (0, 1)
    for n in range(p**e):
        coeffs = _digits(n, p, e) + [1]
        if coeffs[0] == 0:
            continue
        if _is_irreducible(coeffs, p):
            return tuple(coeffs)
    raise ValueError(f"no irreducible polynomial of degree {e} over GF({p})")


class Field:
    """The finite field GF(p^e) with vectorised arithmetic on integer codes."""

    def __init__(self, p: int, e: int = 1):
        if not is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if e < 1:
            raise ValueError("extension degree must be at least 1")
        q = p**e
        if q < 3:
            raise ValueError("field must have at least 3 elements")
        if q > MAX_ORDER:
            raise ValueError(f"field order {q} exceeds {MAX_ORDER}")
        self.p = p
        self.e = e
        self.q = q
        self.modulus = lowest_irreducible(p, e)
        self.prime = e == 1
        self.elements = np.arange(q, dtype=np.int64)
        if self.prime:
            self._neg = (-self.elements) % p
            self._inv = np.zeros(q, dtype=np.int64)
            for a in range(1, q):
                self._inv[a] = pow(a, p - 2, p)
            self._add = self._mul = None
        else:
            self._build_extension()

    def _build_extension(self) -> None:
        p, e, q = self.p, self.e, self.q
        mod = list(self.modulus)
        # exp/log tables from a primitive element
        gen = None
        for g in range(p, q):
            gd = _digits(g, p, e)
            x = [1] + [0] * (e - 1)
            order = 0
            while True:
                x = _poly_mulmod(x, gd, mod, p)
                order += 1
                if x == [1] + [0] * (e - 1):
                    break
            if order == q - 1:
                gen = gd
                break
        exp = np.zeros(2 * q, dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        x = [1] + [0] * (e - 1)
        for i in range(q - 1):
            v = _undigits(x, p)
            exp[i] = v
            log[v] = i
            x = _poly_mulmod(x, gen, mod, p)
        exp[q - 1 : 2 * q - 2] = exp[: q - 1]
        self._exp, self._log = exp, log
        self.primitive = int(exp[1])
        pw = p ** np.arange(e, dtype=np.int64)
        self._pw = pw
        digits = (self.elements[:, None] // pw[None, :]) % p
        self._neg = ((-digits) % p) @ pw
        self._inv = np.zeros(q, dtype=np.int64)
        self._inv[1:] = exp[(q - 1 - log[1:]) % (q - 1)]
        if q <= TABLE_LIMIT:
            self._add = ((digits[:, None, :] + digits[None, :, :]) % p) @ pw
            la = log[:, None] + log[None, :]
            mul = exp[la]
            mul[0, :] = 0
            mul[:, 0] = 0
            self._mul = mul
        else:
            self._add = self._mul = None

    # scalar and elementwise operations; arguments may be ints or arrays

    def add(self, a, b):
        if self.prime:
            return (np.asarray(a) + b) % self.p
        if self._add is not None:
            return self._add[a, b]
        if self.p == 2:
            return np.bitwise_xor(a, b)
        a, b = np.asarray(a), np.asarray(b)
        da = (a[..., None] // self._pw) % self.p
        db = (b[..., None] // self._pw) % self.p
        return ((da + db) % self.p) @ self._pw

    def neg(self, a):
        return self._neg[a]

    def sub(self, a, b):
        if self.prime:
            return (np.asarray(a) - b) % self.p
        return self.add(a, self._neg[b])

    def mul(self, a, b):
        if self.prime:
            return (np.asarray(a) * b) % self.p
        if self._mul is not None:
            return self._mul[a, b]
        a, b = np.asarray(a), np.asarray(b)
        r = self._exp[self._log[a] + self._log[b]]
        return np.where((a == 0) | (b == 0), 0, r)

    def inv(self, a):
        if np.any(np.asarray(a) == 0):
            raise ZeroDivisionError("zero has no inverse")
        return self._inv[a]

    def from_int(self, n: int) -> int:
        """Image of an integer in the prime subfield."""
        return int(n) % self.p

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and (self.p, self.e) == (other.p, other.e)

    def __hash__(self) -> int:
        return hash((self.p, self.e))

    def __repr__(self) -> str:
        return f"GF({self.q})" if self.prime else f"GF({self.p}^{self.e})"


@lru_cache(maxsize=None)
def field_make(p: int, e: int = 1) -> Field:
    return Field(p, e)


def field_of_order(q: int) -> Field:
    for p in range(2, q + 1):
        if q % p == 0:
            e = 0
            n = q
            while n % p == 0:
                n //= p
                e += 1
            if n != 1:
                raise ValueError(f"{q} is not a prime power")
            return field_make(p, e)
    raise ValueError(f"{q} is not a prime power")


# matrices


def zeros(r: int, c: int) -> np.ndarray:
    return np.zeros((r, c), dtype=np.int64)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def mat_mul(F: Field, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"shape mismatch {A.shape} x {B.shape}")
    if F.prime:
        return (A @ B) % F.p
    out = zeros(A.shape[0], B.shape[1])
    for k in range(A.shape[1]):
        out = F.add(out, F.mul(A[:, k : k + 1], B[k : k + 1, :]))
    return out


def mat_add(F: Field, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return F.add(A, B)


def mat_sub(F: Field, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return F.sub(A, B)


def mat_scale(F: Field, c: int, A: np.ndarray) -> np.ndarray:
    return F.mul(np.full_like(A, c), A)


def rref(F: Field, A: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form; returns the nonzero rows and pivot columns."""
    M = np.array(A, dtype=np.int64, copy=True)
    rows, cols = M.shape
    r = 0
    pivots: list[int] = []
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(M[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            M[[r, piv]] = M[[piv, r]]
        a = int(M[r, c])
        if a != 1:
            M[r] = F.mul(M[r], int(F.inv(a)))
        col = M[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            M[hit] = F.sub(M[hit], F.mul(col[hit][:, None], M[r][None, :]))
        pivots.append(c)
        r += 1
    return M[:r], pivots


def mat_rank(F: Field, A: np.ndarray) -> int:
    if A.size == 0:
        return 0
    return len(rref(F, A)[1])


def nullspace(F: Field, A: np.ndarray) -> np.ndarray:
    """Basis (as rows) of {x : A x = 0}."""
    n = A.shape[1]
    if A.shape[0] == 0:
        return identity(n)
    R, piv = rref(F, A)
    pset = set(piv)
    free = [c for c in range(n) if c not in pset]
    out = zeros(len(free), n)
    if free:
        out[np.arange(len(free)), free] = 1
        if piv:
            out[:, piv] = F.neg(R[:, free].T)
    return out


def inverse(F: Field, A: np.ndarray) -> np.ndarray:
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    R, piv = rref(F, np.hstack([A, identity(n)]))
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return R[:n, n:]


def is_invertible(F: Field, A: np.ndarray) -> bool:
    n = A.shape[0]
    if A.shape != (n, n):
        return False
    return n == 0 or mat_rank(F, A) == n


@dataclass(frozen=True)
class Solution:
    """Affine solution set: particular + span(kernel)."""

    particular: np.ndarray
    kernel: "Subspace"


def solve_linear(F: Field, A: np.ndarray, b: np.ndarray) -> Solution | None:
    """Solve A x = b exactly; returns None when the system is inconsistent."""
    b = np.asarray(b, dtype=np.int64).reshape(-1)
    if A.shape[0] != b.shape[0]:
        raise ValueError(f"shape mismatch: A is {A.shape}, b has {b.shape[0]} entries")
    n = A.shape[1]
    if A.shape[0] == 0:
        return Solution(np.zeros(n, dtype=np.int64), Subspace.full(F, n))
    R, piv = rref(F, np.hstack([A, b[:, None]]))
    if piv and piv[-1] == n:
        return None
    x = np.zeros(n, dtype=np.int64)
    for i, pc in enumerate(piv):
        x[pc] = R[i, n]
    return Solution(x, Subspace(F, nullspace(F, A), n))


class Subspace:
    """A subspace of F^n held by its canonical (RREF) basis."""

    __slots__ = ("field", "n", "basis", "pivots", "_key")

    def __init__(self, F: Field, rows, n: int, canonical: bool = False):
        rows = np.asarray(rows, dtype=np.int64)
        rows = rows.reshape(-1, n) if n else zeros(0, 0)
        self.field = F
        self.n = n
        if canonical:
            self.basis = rows
            self.pivots = [int(np.flatnonzero(r)[0]) for r in rows]
        elif rows.shape[0] == 0:
            self.basis = rows
            self.pivots = []
        else:
            self.basis, self.pivots = rref(F, rows)
        self._key = None

    @classmethod
    def full(cls, F: Field, n: int) -> "Subspace":
        s = cls.__new__(cls)
        s.field, s.n, s.basis, s.pivots, s._key = F, n, identity(n), list(range(n)), None
        return s

    @classmethod
    def zero(cls, F: Field, n: int) -> "Subspace":
        s = cls.__new__(cls)
        s.field, s.n, s.basis, s.pivots, s._key = F, n, zeros(0, n), [], None
        return s

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def key(self) -> tuple:
        if self._key is None:
            self._key = (self.n, self.basis.shape[0], self.basis.tobytes())
        return self._key

    def __eq__(self, other) -> bool:
        return isinstance(other, Subspace) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, n={self.n})"

    def contains(self, v) -> bool:
        v = np.asarray(v, dtype=np.int64).reshape(-1)
        F = self.field
        r = v.copy()
        for i, pc in enumerate(self.pivots):
            c = int(r[pc])
            if c:
                r = F.sub(r, F.mul(c, self.basis[i]))
        return not np.any(r)

    def annihilator(self) -> np.ndarray:
        """Rows C with: u in self iff C u = 0."""
        if self.dim == 0:
            return identity(self.n)
        return nullspace(self.field, self.basis)


def image(F: Field, A: np.ndarray, U: Subspace) -> Subspace:
    """A(U) for A of shape (m, n) and U inside F^n."""
    m = A.shape[0]
    if U.dim == 0 or m == 0:
        return Subspace.zero(F, m)
    return Subspace(F, mat_mul(F, U.basis, A.T), m)


def preimage(F: Field, A: np.ndarray, U: Subspace) -> Subspace:
    """{v : A v in U} for A of shape (m, n)."""
    n = A.shape[1]
    if U.dim == U.n:
        return Subspace.full(F, n)
    C = U.annihilator()
    if n == 0:
        return Subspace.zero(F, 0)
    return Subspace(F, nullspace(F, mat_mul(F, C, A)), n, canonical=False)


def intersect(F: Field, U: Subspace, V: Subspace) -> Subspace:
    C = np.vstack([U.annihilator(), V.annihilator()])
    return Subspace(F, nullspace(F, C), U.n)


def span_sum(F: Field, U: Subspace, V: Subspace) -> Subspace:
    return Subspace(F, np.vstack([U.basis, V.basis]), U.n)


# enumeration


def gaussian_binomial(d: int, k: int, q: int) -> int:
    if k < 0 or k > d:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (d - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def _check_cap(count: int, cap: int, what: str) -> None:
    cap = CAP_OVERRIDE if CAP_OVERRIDE is not None else cap
    if count > cap:
        raise EnumerationTooLarge(f"enumeration too large: {count} {what} exceeds cap {cap}")


def _coefficient_vectors(F: Field, d: int) -> np.ndarray:
    if d == 0:
        return zeros(1, 0)
    grids = np.indices((F.q,) * d).reshape(d, -1).T
    return grids[:, ::-1].astype(np.int64)


def _rref_patterns(F: Field, d: int, k: int) -> Iterator[np.ndarray]:
    """All k x d matrices in reduced row-echelon form of full rank k."""
    for piv in itertools.combinations(range(d), k):
        pset = set(piv)
        free = [(i, j) for i, pc in enumerate(piv) for j in range(pc + 1, d) if j not in pset]
        base = zeros(k, d)
        for i, pc in enumerate(piv):
            base[i, pc] = 1
        for vals in itertools.product(range(F.q), repeat=len(free)):
            M = base.copy()
            for (i, j), v in zip(free, vals):
                M[i, j] = v
            yield M


def subspaces_of(F: Field, space: Subspace, k: int, cap: int = DEFAULT_CAP) -> Iterator[Subspace]:
    """All k-dimensional subspaces of `space`, each once, in canonical form."""
    d = space.dim
    _check_cap(gaussian_binomial(d, k, F.q), cap, f"{k}-subspaces")
    if k == 0:
        yield Subspace.zero(F, space.n)
        return
    if k == d:
        yield space
        return
    for R in _rref_patterns(F, d, k):
        yield Subspace(F, mat_mul(F, R, space.basis), space.n)


def enumerate_space(F: Field, space: Subspace, kind: str = "vectors", cap: int = DEFAULT_CAP):
    """Iterate vectors, lines or hyperplanes of a subspace, each exactly once."""
    d = space.dim
    if kind == "vectors":
        _check_cap(F.q**d, cap, "vectors")
        coeffs = _coefficient_vectors(F, d)
        if d == 0:
            yield np.zeros(space.n, dtype=np.int64)
            return
        for c in coeffs:
            yield mat_mul(F, c[None, :], space.basis)[0]
    elif kind == "lines":
        yield from subspaces_of(F, space, 1, cap)
    elif kind == "hyperplanes":
        if d == 0:
            return
        yield from subspaces_of(F, space, d - 1, cap)
    else:
        raise ValueError(f"unknown enumeration kind {kind!r}")


def all_combinations(F: Field, basis: list, cap: int = DEFAULT_CAP) -> Iterator[tuple[int, ...]]:
    """Coefficient tuples for every element of the span of `basis`."""
    _check_cap(F.q ** len(basis), cap, "vectors")
    yield from itertools.product(range(F.q), repeat=len(basis))


def random_matrix(F: Field, r: int, c: int, rng: np.random.Generator) -> np.ndarray:
    return rng.integers(0, F.q, size=(r, c), dtype=np.int64)
