import random
from itertools import product

import pytest

from quiverhall.errors import (
    BudgetExceeded,
    NotASubmodule,
    NotInSubcategory,
    PreconditionError,
)
from quiverhall.linalg import FpMatrix
from quiverhall.quiver import Quiver, a_n_quiver
from quiverhall.reps import Rep, RepCategory, RepMorphism


def a2(p=2):
    return RepCategory(a_n_quiver(2), p)


def vect(p=2):
    return RepCategory(Quiver(1, []), p)


def brute_force_hom_count(cat, M, N):
    """Enumerate every per-vertex matrix tuple and count the intertwiners."""
    Q = cat.quiver
    p = cat.p
    spaces = []
    for i in range(Q.n):
        entries = N.dim[i] * M.dim[i]
        mats = [FpMatrix(p, [e[r * M.dim[i]:(r + 1) * M.dim[i]]
                             for r in range(N.dim[i])], cols=M.dim[i])
                for e in product(range(p), repeat=entries)]
        spaces.append(mats)
    count = 0
    for combo in product(*spaces):
        f = RepMorphism(M, N, list(combo))
        if f.check_intertwining():
            count += 1
    return count


def test_hom_basis_a2_simples_empty():
    cat = a2()
    S1, S2 = cat.simple(1), cat.simple(2)
    assert cat.hom_basis(S1, S2) == []
    # oracle: the full enumeration finds only the zero morphism
    assert brute_force_hom_count(cat, S1, S2) == 1


def test_hom_basis_end_of_simple():
    cat = a2()
    S1 = cat.simple(1)
    assert len(cat.hom_basis(S1, S1)) == 1


def test_hom_basis_p1_to_s1():
    cat = a2()
    B = cat.hom_basis(cat.projective(1), cat.simple(1))
    assert len(B) == 1
    assert brute_force_hom_count(cat, cat.projective(1), cat.simple(1)) == 2


def test_hom_dimension_matches_brute_force_pool():
    cat = a2()
    pool = [cat.simple(1), cat.simple(2), cat.projective(1)]
    for M in pool:
        for N in pool:
            assert cat.p ** cat.hom_dim(M, N) == brute_force_hom_count(cat, M, N)


def test_euler_form_examples():
    cat = a2()
    assert cat.euler_form_int((1, 0), (0, 1)) == -1
    assert cat.euler_form_int((2, 1), (0, 0)) == 0
    assert cat.euler_form_int((1, 1), (1, 1)) == 1


def test_ext1_examples():
    cat = a2()
    assert cat.ext1_dim(cat.simple(1), cat.simple(2)) == 1
    assert cat.ext1_dim(cat.simple(2), cat.simple(1)) == 0
    assert cat.ext1_dim(cat.projective(1), cat.simple(1)) == 0
    assert cat.ext1_dim(cat.projective(1), cat.simple(2)) == 0


def test_is_isomorphic_examples():
    cat = a2()
    P1 = cat.projective(1)
    assert cat.is_isomorphic(P1, P1)
    assert not cat.is_isomorphic(cat.simple(1), cat.simple(2))
    sum_rep = cat.rep((1, 1))  # zero map: S1 + S2
    assert not cat.is_isomorphic(P1, sum_rep)


def test_decompose_examples():
    cat = a2()
    S1 = cat.simple(1)
    assert cat.decompose(S1) == (cat.intern(S1),)
    two = cat.direct_sum([S1, S1])
    assert cat.decompose(two) == (cat.intern(S1), cat.intern(S1))
    mixed = cat.direct_sum([cat.projective(1), cat.simple(2)])
    assert sorted(k.dim for k in cat.decompose(mixed)) == [(0, 1), (1, 1)]


def test_submodules_examples():
    cat = a2()
    P1 = cat.projective(1)
    assert len(cat.submodules_with_dim(P1, P1.dim)) == 1
    assert len(cat.submodules_with_dim(P1, (0, 0))) == 1
    # lines in F_2^2 for the one-vertex quiver
    v = vect()
    k2 = v.rep((2,))
    assert len(v.submodules_with_dim(k2, (1,))) == 3
    # P_1 over A2 has a unique submodule of dimension (0,1)
    assert len(cat.submodules_with_dim(P1, (0, 1))) == 1
    # and no submodule of dimension (1,0): the arrow is injective
    assert len(cat.submodules_with_dim(P1, (1, 0))) == 0


def test_quotient_examples():
    cat = a2()
    P1 = cat.projective(1)
    Q0, _ = cat.quotient(P1, ((), ()))
    assert cat.is_isomorphic(Q0, P1)
    Uall = cat.submodules_with_dim(P1, P1.dim)[0]
    Qall, _ = cat.quotient(P1, Uall)
    assert Qall.is_zero()
    Usub = cat.submodules_with_dim(P1, (0, 1))[0]
    Qsub, _ = cat.quotient(P1, Usub)
    assert cat.is_isomorphic(Qsub, cat.simple(1))


def test_quotient_rejects_unstable_subspaces():
    cat = a2()
    P1 = cat.projective(1)
    with pytest.raises(NotASubmodule):
        cat.quotient(P1, (((1,),), ()))


def test_projective_dimensions():
    cat = a2()
    assert cat.projective(1).dim == (1, 1)
    assert cat.projective(2).dim == (0, 1)
    v = vect()
    assert v.projective(1).dim == v.simple(1).dim
    cat3 = RepCategory(a_n_quiver(3), 2)
    assert cat3.projective(1).dim == (1, 1, 1)


def test_min_proj_resolution():
    cat = a2()
    S1 = cat.simple(1)
    P1r, P0r, incl, proj = cat.min_proj_resolution(S1)
    assert P0r.dim == (1, 1)
    assert P1r.dim == (0, 1)
    # exactness: inclusion injective, projection surjective, composite zero
    assert all(m.rank() == P1r.dim[i] for i, m in enumerate(incl.mats))
    assert all(m.rank() == S1.dim[i] for i, m in enumerate(proj.mats))
    comp = proj.compose(incl)
    assert comp.is_zero()
    # a projective resolves trivially
    P1r, P0r, _, _ = cat.min_proj_resolution(cat.simple(2))
    assert P1r.is_zero() and P0r.dim == (0, 1)
    P1r, P0r, _, _ = cat.min_proj_resolution(cat.projective(1))
    assert P1r.is_zero() and P0r.dim == (1, 1)


def test_reflect_sink_examples():
    cat3 = RepCategory(a_n_quiver(3), 2)
    tgt3 = RepCategory(cat3.quiver.reflect_at_sink(3), 2)
    # a simple away from the sink is fixed
    img = cat3.reflect_sink(3, cat3.simple(1), tgt3)
    assert img.dim == (1, 0, 0)
    cat = a2()
    tgt = RepCategory(cat.quiver.reflect_at_sink(2), 2)
    img = cat.reflect_sink(2, cat.projective(1), tgt)
    assert img.dim == (1, 0)
    with pytest.raises(NotInSubcategory):
        cat.reflect_sink(2, cat.simple(2), tgt)
    with pytest.raises(PreconditionError):
        cat.reflect_sink(1, cat.simple(2), tgt)


def test_reflect_sink_is_weyl_reflection_on_indecomposables():
    for qv in (a_n_quiver(2), a_n_quiver(3)):
        cat = RepCategory(qv, 2)
        n = qv.n
        sink = n  # the linear orientation has its sink at the last vertex
        tgt = RepCategory(qv.reflect_at_sink(sink), 2)
        pool = []
        for d in product(range(3), repeat=n):
            if 0 < sum(d) <= 3:
                for R in cat.all_reps_of_dim(d):
                    if len(cat.decompose_reps(R)) == 1:
                        pool.append(R)
        seen = set()
        for M in pool:
            key = cat.intern(M)
            if key in seen:
                continue
            seen.add(key)
            if key == cat.intern(cat.simple(sink)):
                continue
            img = cat.reflect_sink(sink, M, tgt)
            assert img.dim == qv.simple_reflection(sink, M.dim)


def test_decompose_iso_invariant_under_base_change():
    cat = a2()
    rng = random.Random(5)
    P1 = cat.projective(1)
    M = cat.direct_sum([P1, cat.simple(1)])
    base = cat.decompose(M)
    gl = [g for g in cat._gl(2) ]
    for _ in range(50):
        g1 = rng.choice(cat._gl(M.dim[0]))
        g2 = rng.choice(cat._gl(M.dim[1]))
        conj = Rep(cat.quiver, cat.p, M.dim,
                   [g2 @ M.maps[0] @ g1.inverse()])
        assert cat.decompose(conj) == base


def test_submodule_quotient_duality():
    cat = a2()
    C = cat.direct_sum([cat.projective(1), cat.simple(2)])
    for d in product(range(3), repeat=2):
        if any(di > ci for di, ci in zip(d, C.dim)):
            continue
        for U in cat.submodules_with_dim(C, d):
            S, incl = cat.sub_rep(C, U)
            Qt, _ = cat.quotient(C, U)
            assert Qt.dim == tuple(c - x for c, x in zip(C.dim, d))
            assert incl.check_intertwining()


def test_is_isomorphic_equivalence_relation():
    cat = a2()
    rng = random.Random(9)
    pool = []
    for _ in range(30):
        d = (rng.randint(0, 2), rng.randint(0, 2))
        m = FpMatrix(2, [[rng.randrange(2) for _ in range(d[0])]
                         for _ in range(d[1])], cols=d[0])
        pool.append(cat.rep(d, [m]))
    for M in pool:
        assert cat.is_isomorphic(M, M)
    for M in pool:
        for N in pool:
            assert cat.is_isomorphic(M, N) == cat.is_isomorphic(N, M)
            # registry agreement
            assert cat.is_isomorphic(M, N) == (cat.intern(M) == cat.intern(N))
    for M in pool[:10]:
        for N in pool[:10]:
            for P in pool[:10]:
                if cat.is_isomorphic(M, N) and cat.is_isomorphic(N, P):
                    assert cat.is_isomorphic(M, P)


def test_hereditary_euler_identity_small_pool():
    cat = a2()
    keys = cat.iso_classes_up_to(4)
    for A in keys:
        for B in keys:
            if sum(A.dim) + sum(B.dim) > 4:
                continue
            h = cat.hom_dim(A.rep, B.rep)
            e = cat.ext1_dim(A.rep, B.rep)
            assert h - e == cat.euler_form_int(A.dim, B.dim)


def test_budget_guardrails():
    cat = a2()
    big = cat.rep((4, 4))
    with pytest.raises(BudgetExceeded):
        cat.submodules_with_dim(big, (2, 2))
    with pytest.raises(BudgetExceeded):
        cat.aut_count(big)


def test_quiver_rejects_cycles_and_bad_arrows():
    with pytest.raises(PreconditionError):
        Quiver(2, [(1, 2), (2, 1)])
    with pytest.raises(PreconditionError):
        Quiver(2, [(1, 3)])


def test_quiver_json_roundtrip():
    qv = a_n_quiver(3)
    assert Quiver.from_json(qv.to_json()) == qv
