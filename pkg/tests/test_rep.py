import itertools
import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from canhall import canon, ffla, modbuild, rep
from canhall.ffla import Subspace
from canhall.rep import Rep
from oracles import brute_submodules


def _commutes(X, Y, f):
    F = X.F
    for k, a in enumerate(X.Q.arrows):
        lhs = ffla.mat_mul(F, f[a.target], X.maps[k])
        rhs = ffla.mat_mul(F, Y.maps[k], f[a.source])
        if not np.array_equal(lhs, rhs):
            return False
    return True


def _all_vertex_maps(X, Y):
    F = X.F
    shapes = [(Y.dims[x], X.dims[x]) for x in range(X.Q.nv)]
    sizes = [r * c for r, c in shapes]
    for flat in itertools.product(range(F.q), repeat=sum(sizes)):
        out, pos = [], 0
        for (r, c), s in zip(shapes, sizes):
            out.append(np.array(flat[pos : pos + s], dtype=np.int64).reshape(r, c))
            pos += s
        yield out


def brute_hom_count(X, Y):
    return sum(1 for f in _all_vertex_maps(X, Y) if _commutes(X, Y, f))


def brute_aut_count(X):
    return sum(1 for f in _all_vertex_maps(X, X) if _commutes(X, X, f) and rep.is_iso_map(X.F, f))


def brute_gr(M):
    """Largest sum of 2^-|N| over chains of indecomposable submodules ending at M."""
    subs = [U for U in brute_submodules(M) if any(u.dim for u in U)]
    ind = [U for U in subs if rep.is_indecomposable(rep.sub_rep(M, U))]

    def le(U, V):
        return all(ffla.intersect(M.F, u, v) == u for u, v in zip(U, V))

    ind.sort(key=lambda U: sum(u.dim for u in U))
    best = {}
    for i, U in enumerate(ind):
        size = sum(u.dim for u in U)
        b = Fraction(1, 2**size)
        for V in ind[:i]:
            if sum(v.dim for v in V) < size and le(V, U):
                b = max(b, best[V] + Fraction(1, 2**size))
        best[U] = b
    top = tuple(Subspace.full(M.F, d) for d in M.dims)
    return max(best[U] for U in ind if all(u == t for u, t in zip(U, top)))


def conjugate(X, rng):
    """X transported along random invertible vertex matrices."""
    F = X.F
    gs = []
    for d in X.dims:
        while True:
            g = ffla.random_matrix(F, d, d, rng)
            if d == 0 or ffla.is_invertible(F, g):
                break
        gs.append(g)
    maps = []
    for k, a in enumerate(X.Q.arrows):
        ginv = ffla.inverse(F, gs[a.source]) if X.dims[a.source] else gs[a.source]
        maps.append(ffla.mat_mul(F, ffla.mat_mul(F, gs[a.target], X.maps[k]), ginv))
    return Rep(X.Q, F, X.dims, maps)


F3 = ffla.field_of_order(3)
A1 = canon.build("A1")
A2 = canon.build("A2")
D4 = canon.build("D4")


def test_relation_enforced():
    maps = {a.name: [[1]] for a in D4.arrows}
    Rep(D4, F3, canon.delta(D4), maps)  # 1 + 1 + 1 = 0 in GF(3)
    with pytest.raises(ValueError):
        Rep(D4, ffla.field_of_order(5), canon.delta(D4), maps)
    X = modbuild.W_c(D4, F3, 1)
    assert rep.check_relation(X)
    with pytest.raises(ValueError):
        Rep(D4, F3, (1, 1), [])


def test_hom_examples():
    S0, S1 = modbuild.simple(A1, F3, 0), modbuild.simple(A1, F3, 1)
    assert rep.hom(S0, S0).dim == 1 and rep.hom(S0, S1).dim == 0
    P = modbuild.module_for_root(A1, F3, (2, 1))
    assert rep.hom(S0, P).dim == 2 and rep.hom(P, S1).dim == 1
    W1, W2 = modbuild.W_c(D4, F3, 1), modbuild.W_c(D4, ffla.field_of_order(3), 1)
    assert rep.hom(W1, W2).dim == 1


@pytest.mark.parametrize("Q,dx,dy", [
    (A1, (1, 1), (1, 1)), (A1, (2, 1), (1, 1)), (A1, (1, 2), (2, 1)),
    (A2, (1, 1, 1), (1, 1, 1)), (A2, (1, 0, 1), (1, 1, 1)),
])
def test_hom_matches_brute_force(Q, dx, dy):
    rng = np.random.default_rng(11)
    for _ in range(4):
        X, Y = rep.random_rep(Q, F3, dx, rng), rep.random_rep(Q, F3, dy, rng)
        h = rep.hom(X, Y)
        assert 3**h.dim == brute_hom_count(X, Y)
        for f in h.maps():
            assert _commutes(X, Y, f)


def test_indecomposability_examples():
    W = modbuild.W_c(D4, F3, 1)
    assert rep.is_indecomposable(W)
    assert not rep.is_indecomposable(rep.direct_sum(W, W))
    parts = rep.decompose(rep.direct_sum(W, modbuild.simple(D4, F3, 0)))
    assert sorted(p.dim for p in parts) == [1, 5]
    # the non-homogeneous points still give indecomposables, just not bricks in a homogeneous tube
    for c in (0, 2):
        Wc = modbuild.W_c(D4, F3, c)
        assert rep.is_indecomposable(Wc) and not rep.iso(Wc, W)


def test_iso_examples():
    rng = np.random.default_rng(5)
    W1, W0 = modbuild.W_c(D4, F3, 1), modbuild.W_c(D4, F3, 0)
    assert rep.iso(W1, conjugate(W1, rng))
    assert not rep.iso(W1, W0)
    X = rep.direct_sum(W1, modbuild.simple(D4, F3, 2))
    assert rep.iso(X, conjugate(X, rng))
    Y = rep.direct_sum(W0, modbuild.simple(D4, F3, 2))
    assert not rep.iso(X, Y)
    # same dimension vector, different decomposition
    S = modbuild.simple(A1, F3, 0)
    T = modbuild.simple(A1, F3, 1)
    P = modbuild.W_c(A1, F3, 1)
    assert not rep.iso(rep.direct_sum(S, T), P)


@pytest.mark.parametrize("build", [
    lambda: modbuild.simple(A1, F3, 0),
    lambda: rep.direct_sum(modbuild.simple(A1, F3, 0), modbuild.simple(A1, F3, 0)),
    lambda: rep.direct_sum(modbuild.simple(A1, F3, 0), modbuild.simple(A1, F3, 1)),
    lambda: modbuild.W_c(A1, F3, 1),
    lambda: rep.direct_sum(modbuild.W_c(A1, F3, 1), modbuild.W_c(A1, F3, 1)),
    lambda: rep.direct_sum(modbuild.W_c(A1, F3, 1), modbuild.simple(A1, F3, 0)),
    lambda: modbuild.homogeneous_module(A1, F3, (2, 0, 1), 1),
    lambda: rep.direct_sum(modbuild.W_c(D4, F3, 1), modbuild.simple(D4, F3, 4)),
])
def test_aut_count_matches_brute_force(build):
    X = build()
    n = rep.aut_count(X)
    assert n == rep.aut_count_brute(X)
    if sum(d * d for d in X.dims) <= 9:
        assert n == brute_aut_count(X)


def test_aut_count_semisimple():
    S = modbuild.simple(A1, F3, 0)
    X = rep.direct_sum(rep.direct_sum(S, S), S)
    assert rep.aut_count(X) == (27 - 1) * (27 - 3) * (27 - 9)


@pytest.mark.parametrize("Q,v", [(A1, (2, 1)), (A1, (1, 2)), (A2, (1, 1, 1)), (D4, (1, 1, 1, 1, 1))])
def test_submodules_match_brute_force(Q, v):
    rng = np.random.default_rng(2)
    Z = rep.random_rep(Q, F3, v, rng)
    fast = {tuple(u.key() for u in U) for U in rep.submodules(Z)}
    slow = {tuple(u.key() for u in U) for U in brute_submodules(Z)}
    assert fast == slow
    assert len(list(rep.submodules(Z))) == len(fast)
    target = tuple(d // 2 for d in v)
    fast_t = {tuple(u.key() for u in U) for U in rep.submodules(Z, target)}
    slow_t = {tuple(u.key() for u in U) for U in brute_submodules(Z) if tuple(u.dim for u in U) == target}
    assert fast_t == slow_t


def test_quotients_and_subs_are_representations():
    W = modbuild.W_c(D4, F3, 1)
    for U in rep.submodules(W):
        S, Qt = rep.sub_rep(W, U), rep.quotient(W, U)
        assert rep.check_relation(S) and rep.check_relation(Qt)
        assert canon.vadd(S.dims, Qt.dims) == W.dims
    with pytest.raises(ValueError):
        rep.quotient(W, tuple(Subspace.full(F3, d) if i else Subspace(F3, [], d) for i, d in enumerate(W.dims)))


def test_ext1_examples():
    S0, S1 = modbuild.simple(A1, F3, 0), modbuild.simple(A1, F3, 1)
    assert rep.ext1(S1, S0).dim == 2 and rep.ext1(S0, S1).dim == 0
    W1 = modbuild.W_c(D4, F3, 1)
    assert rep.ext1(W1, W1).dim == 1
    g = rep.ext1(W1, W1)
    assert rep.is_indecomposable(g.middle_term((1,)))
    assert not rep.is_indecomposable(g.middle_term((0,)))


@pytest.mark.parametrize("name", ["A1", "A2", "D4"])
def test_euler_form_from_hom_and_ext_on_preprojectives(name):
    Q = canon.build(name)
    pre = [v for v in canon.roots_enumerate(Q, 1) if canon.component(Q, v) == "preprojective" and sum(v) <= 7]
    mods = [modbuild.module_for_root(Q, F3, v) for v in pre]
    for X, Y in itertools.product(mods[:8], repeat=2):
        h, e = rep.hom(X, Y).dim, rep.ext1(X, Y).dim
        assert h - e == canon.euler_form(Q, X.dims, Y.dims)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_middle_terms_are_extensions(seed):
    rng = np.random.default_rng(seed)
    X = rep.random_rep(A2, F3, (1, 1, 1), rng)
    Y = rep.random_rep(A2, F3, (1, 0, 1), rng)
    g = rep.ext1(X, Y)
    for c in itertools.islice(g.elements(), 9):
        Z = g.middle_term(c)
        U = tuple(Subspace(F3, np.eye(Z.dims[x], dtype=np.int64)[: Y.dims[x]], Z.dims[x]) for x in range(A2.nv))
        assert rep.is_submodule(Z, U)
        assert rep.iso(rep.sub_rep(Z, U), Y) and rep.iso(rep.quotient(Z, U), X)
        assert rep.iso(Z, rep.direct_sum(X, Y)) == (not any(c))


@pytest.mark.parametrize("Q,v,lengths", [
    (A1, (1, 0), (1,)),
    (A1, (2, 1), (1, 3)),
    (A1, (1, 2), (1, 2, 3)),
])
def test_gr_measure_examples(Q, v, lengths):
    M = modbuild.module_for_root(Q, F3, v)
    assert rep.gr_measure(M).lengths == lengths


def test_gr_measure_homogeneous():
    M = modbuild.W_c(A1, F3, 1)
    assert rep.gr_measure(M).lengths == (1, 2)


@pytest.mark.parametrize("Q,v", [(A1, (2, 1)), (A1, (1, 2)), (A1, (2, 3)), (A2, (1, 0, 1)), (A2, (2, 1, 1)), (A2, (1, 1, 2))])
def test_gr_measure_matches_chain_oracle(Q, v):
    M = modbuild.module_for_root(Q, F3, v)
    assert rep.gr_measure(M).value == brute_gr(M)
    for U, N in rep.gr_submodules(M):
        assert rep.is_indecomposable(N)
        assert rep.gr_measure(N).value <= rep.gr_measure(M).value


def test_gr_cap_is_loud():
    M = modbuild.module_for_root(D4, F3, canon.vadd(canon.delta(D4), canon.unit(D4, 0)))
    with pytest.raises(ffla.EnumerationTooLarge):
        rep.gr_measure(M, cap=3)


def test_json_round_trip():
    for X in (modbuild.W_c(D4, F3, 1), modbuild.module_for_root(A1, ffla.field_of_order(4), (2, 1))):
        data = rep.rep_to_json(X)
        Y = rep.rep_from_json(json.dumps(data))
        assert Y.dims == X.dims and all(np.array_equal(a, b) for a, b in zip(X.maps, Y.maps))
        assert Y.Q is X.Q and Y.F.q == X.F.q


def test_relation_perturbation_breaks_it():
    W = modbuild.W_c(D4, F3, 1)
    maps = [m.copy() for m in W.maps]
    k = D4.arrows.index(D4.arrow(2, 1))
    maps[k] = (maps[k] + 1) % 3
    assert not rep.check_relation(Rep(D4, F3, W.dims, maps, check=False))


def test_endomorphism_and_automorphism_examples():
    for q in (3, 4, 5):
        F = ffla.field_of_order(q)
        for x in range(D4.nv):
            Sx = modbuild.simple(D4, F, x)
            assert rep.end(Sx).dim == 1 and rep.aut_count(Sx) == q - 1
            assert rep.submodules(Sx) and len(list(rep.submodules(Sx))) == 2
            SS = rep.direct_sum(Sx, Sx)
            assert rep.aut_count(SS) == (q * q - 1) * (q * q - q)
        W = modbuild.W_c(D4, F, 1)
        assert rep.end(W).dim == 1 and rep.aut_count(W) == q - 1
        assert rep.hom(modbuild.simple(D4, F, D4.source), W).dim == 0


def test_hom_between_distinct_tubes_vanishes():
    F = ffla.field_of_order(5)
    mods = [modbuild.W_c(D4, F, c) for c in modbuild.homogeneous_points(D4, F)]
    mods += [modbuild.X_ij(D4, F, 1, 1), modbuild.X_ij(D4, F, 2, 1), modbuild.X_ij(D4, F, 3, 2)]
    mods += [modbuild.W_poly(D4, F, f) for f in modbuild.irreducible_polys(F, 2)[:2]]
    for i, X in enumerate(mods):
        for j, Y in enumerate(mods):
            if i != j:
                assert rep.hom(X, Y).dim == 0


@pytest.mark.parametrize("q", [3, 4])
def test_corank_one_at_source_are_hyperplanes(q):
    F = ffla.field_of_order(q)
    d = canon.delta(D4)
    Z = modbuild.module_for_root(D4, F, canon.vadd(canon.vscale(2, d), canon.unit(D4, D4.source)))
    k = Z.dims[D4.source]
    target = canon.vsub(Z.dims, canon.unit(D4, D4.source))
    assert len(list(rep.submodules(Z, target))) == (q**k - 1) // (q - 1)


def test_trivial_quotients():
    W = modbuild.W_c(D4, F3, 1)
    zero = tuple(Subspace(F3, [], d) for d in W.dims)
    full = tuple(Subspace.full(F3, d) for d in W.dims)
    assert rep.iso(rep.quotient(W, zero), W)
    assert rep.quotient(W, full).dim == 0


@pytest.mark.parametrize("name", ["A2", "D4", "D5"])
def test_random_indecomposables_of_root_dimension_are_isomorphic(name):
    Q = canon.build(name)
    rng = np.random.default_rng(3)
    F = ffla.field_of_order(5)
    for v in [v for v in canon.reduced_roots(Q) if min(v) >= 0 and canon.rank(Q, v) != 0][:10]:
        M = modbuild.module_for_root(Q, F, v)
        for _ in range(10):
            X = rep.random_rep(Q, F, v, rng)
            if X is not None and rep.is_indecomposable(X):
                assert rep.iso(X, M)
                assert rep.aut_count(X) == rep.aut_count(M)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_iso_is_an_equivalence_on_samples(seed):
    rng = np.random.default_rng(seed)
    W = modbuild.W_c(D4, F3, int(rng.integers(0, 3)))
    base = rep.direct_sum(W, modbuild.simple(D4, F3, int(rng.integers(0, D4.nv))))
    X, Y = conjugate(base, rng), conjugate(base, rng)
    assert rep.iso(X, X) and rep.iso(X, Y) and rep.iso(Y, X)
    assert rep.iso(base, X) and rep.iso(base, Y)
    assert rep.aut_count(X) == rep.aut_count(Y)
    assert rep.signature(X) == rep.signature(Y)


def test_gr_simple_and_uniserial_values():
    assert rep.gr_measure(modbuild.simple(D4, F3, 2)).value == Fraction(1, 2)
    M = modbuild.module_for_root(D4, F3, canon.vadd(canon.unit(D4, 0), canon.unit(D4, 1)))
    assert rep.gr_measure(M).value == Fraction(3, 4)


@pytest.mark.parametrize("Q,v", [(A1, (1, 2)), (A1, (2, 3)), (A2, (1, 1, 2)), (D4, (1, 1, 1, 0, 1))])
def test_gr_quotients_are_indecomposable(Q, v):
    M = modbuild.module_for_root(Q, F3, v)
    for U, N in rep.gr_submodules(M):
        assert rep.is_indecomposable(rep.quotient(M, U))
