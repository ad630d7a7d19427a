import random

import pytest

from quiverhall.cx2 import (
    direct_sum_cx2,
    make_KP,
    make_KPstar,
    minimal_complex,
    stalk_cx2,
)
from quiverhall.hall import HallAlgebra
from quiverhall.quiver import Quiver, a_n_quiver
from quiverhall.reps import RepCategory
from quiverhall.scalars import CoeffScalar, q_power, v_power
from quiverhall.sdh2 import SDH2Algebra


def a2(p=2):
    return RepCategory(a_n_quiver(2), p)


def vect(p=2):
    return RepCategory(Quiver(1, []), p)


def test_torus_euler_examples():
    cat = a2()
    alg = SDH2Algebra(cat)
    z = ((0, 0), (0, 0))
    t = ((1, 0), (0, 1))
    assert alg.torus_euler(z, t) == CoeffScalar.one(2)
    # <K_{P_i}, K_{P_j}> = q^{dim Hom(P_i, P_j)}, confirmed by enumeration
    for i in range(2):
        for j in range(2):
            gi = (tuple(1 if k == i else 0 for k in range(2)), (0, 0))
            gj = (tuple(1 if k == j else 0 for k in range(2)), (0, 0))
            hom = cat.hom_dim(cat.projective(i + 1), cat.projective(j + 1))
            assert alg.torus_euler(gi, gj) == q_power(2, hom)
            # oracle: chain maps between the contractible complexes
            KP_i = make_KP(cat, cat.projective(i + 1))
            KP_j = make_KP(cat, cat.projective(j + 1))
            assert alg.tools.hom_dim(KP_i, KP_j) == hom


def test_torus_euler_bilinear_seeded():
    cat = a2()
    alg = SDH2Algebra(cat)
    rng = random.Random(2)
    for _ in range(20):
        g1 = (tuple(rng.randint(-1, 1) for _ in range(2)),
              tuple(rng.randint(-1, 1) for _ in range(2)))
        g2 = (tuple(rng.randint(-1, 1) for _ in range(2)),
              tuple(rng.randint(-1, 1) for _ in range(2)))
        g3 = (tuple(rng.randint(-1, 1) for _ in range(2)),
              tuple(rng.randint(-1, 1) for _ in range(2)))
        s = (tuple(a + b for a, b in zip(g1[0], g2[0])),
             tuple(a + b for a, b in zip(g1[1], g2[1])))
        assert alg.torus_euler(s, g3) == alg.torus_euler(g1, g3) * alg.torus_euler(g2, g3)


def test_normal_form_examples():
    cat = a2()
    alg = SDH2Algebra(cat)
    S1 = cat.simple(1)
    X = minimal_complex(cat, S1, cat.simple(2))
    nf = alg.normal_form(X)
    assert nf.coeff == CoeffScalar.one(2)
    assert not any(nf.alpha) and not any(nf.beta)
    assert nf.key == (cat.intern(S1), cat.intern(cat.simple(2)))
    KP1 = make_KP(cat, cat.projective(1))
    nf = alg.normal_form(KP1)
    assert nf.coeff == CoeffScalar.one(2)
    assert nf.alpha == (1, 0) and nf.beta == (0, 0)
    assert nf.key == alg.zero_key2()
    X = direct_sum_cx2(cat, [KP1, minimal_complex(cat, S1, cat.rep((0, 0)))])
    nf = alg.normal_form(X)
    assert nf.alpha == (1, 0) and nf.beta == (0, 0)
    assert nf.key == (cat.intern(S1), cat.zero_key())
    hom = alg.tools.hom_dim(KP1, minimal_complex(cat, S1, cat.rep((0, 0))))
    assert nf.coeff == q_power(2, hom)


def test_normal_form_agrees_with_decomposition_route():
    """The rank-ledger torus coordinates match the Krull-Schmidt route."""
    cat = a2()
    alg = SDH2Algebra(cat)
    tools = alg.tools
    rng = random.Random(4)
    P1, P2 = cat.projective(1), cat.projective(2)
    reps = [cat.rep((0, 0)), cat.simple(1), cat.simple(2), P1]
    for _ in range(15):
        parts = [minimal_complex(cat, rng.choice(reps), rng.choice(reps))]
        for _ in range(rng.randint(0, 2)):
            P = rng.choice((P1, P2))
            parts.append(make_KP(cat, P) if rng.random() < 0.5
                         else make_KPstar(cat, P))
        X = direct_sum_cx2(cat, parts)
        if X.total_dim() > 10:
            continue
        nf = alg.normal_form(X)
        alpha = [0, 0]
        beta = [0, 0]
        for Z in tools.decompose2(X):
            if not tools.is_acyclic(Z):
                continue
            kind, P = tools.classify_acyclic_indec(Z)
            coords = alg.coords(P.dim)
            tgt = alpha if kind == "K" else beta
            for j in range(2):
                tgt[j] += coords[j]
        assert nf.alpha == tuple(alpha)
        assert nf.beta == tuple(beta)


def test_product2_unit():
    cat = a2()
    alg = SDH2Algebra(cat)
    x = alg.E_class(cat.simple(1)) + alg.F_class(cat.projective(1))
    assert alg.product2(alg.unit(), x) == x
    assert alg.product2(x, alg.unit()) == x


def test_product2_vect_stalks():
    """Stalk products over the one-vertex quiver: q extension classes, the
    nonsplit ones having contractible middle; no Hom-denominator because the
    stalks sit in opposite degrees."""
    v = vect()
    alg = SDH2Algebra(v)
    k = v.rep((1,))
    E = alg.E_class(k)
    F = alg.F_class(k)
    kk = v.intern(k)
    z = v.zero_key()
    EF = alg.product2(E, F)
    assert EF.terms[(((0,), (0,)), (kk, kk))] == CoeffScalar.one(2)
    assert EF.terms[(((0,), (1,)), (z, z))] == CoeffScalar.one(2)  # (q-1) K*
    assert len(EF.terms) == 2
    FE = alg.product2(F, E)
    assert FE.terms[(((0,), (0,)), (kk, kk))] == CoeffScalar.one(2)
    assert FE.terms[(((1,), (0,)), (z, z))] == CoeffScalar.one(2)  # (q-1) K
    assert len(FE.terms) == 2


def test_torus_absorption():
    cat = a2()
    alg = SDH2Algebra(cat)
    R = minimal_complex(cat, cat.simple(1), cat.simple(2))
    x = alg.element_of(R)
    KP1 = make_KP(cat, cat.projective(1))
    g = ((1, 0), (0, 0))
    got = alg.product2(alg.torus_term(g), x)
    # module rule: [K] . [M] = (1/<K, M>) [K + M]
    want = alg.element_of(direct_sum_cx2(cat, [KP1, R])).scale_scalar(
        q_power(2, -alg.tools.hom_dim(KP1, R)))
    assert (got - want).is_zero()
    # and the result is the plain basis term at the shifted lattice
    assert len(got.terms) == 1
    (gg, kk), c = next(iter(got.terms.items()))
    assert gg == g and kk == next(iter(x.terms))[1]
    assert c == CoeffScalar.one(2)


def test_cw_form_equals_euler_on_acyclics():
    cat = a2()
    alg = SDH2Algebra(cat)
    zero2 = alg.zero_key2()
    n = cat.quiver.n
    z = (0,) * n
    gens = []
    for j in range(n):
        e = tuple(1 if k == j else 0 for k in range(n))
        gens.append((e, z))
        gens.append((z, e))
    for g1 in gens:
        for g2 in gens:
            cw = alg.cw_exponent((g1, zero2), (g2, zero2))
            assert v_power(2, cw) == alg.torus_euler(g1, g2)


def test_twisted_unit_and_prefactor():
    cat = a2()
    alg = SDH2Algebra(cat)
    E1 = alg.E_class(cat.simple(1))
    E2 = alg.E_class(cat.simple(2))
    assert alg.twisted_product2(alg.unit(), E1) == E1
    tw = alg.twisted_product2(E1, E2)
    plain = alg.product2(E1, E2)
    # cw for two degree-1 stalk classes is the Euler form of the homologies
    assert tw == plain.scale_scalar(v_power(2, cat.euler_form_int(
        cat.simple(1).dim, cat.simple(2).dim)))


def test_reduce_examples():
    cat = a2()
    alg = SDH2Algebra(cat)
    S1 = cat.simple(1)
    K = alg.K_class(S1.dim)
    Ks = alg.Kstar_class(S1.dim)
    prod = alg.twisted_product2(K, Ks)
    red = alg.reduce(prod)
    assert red == alg.reduced_unit()
    # reduce is idempotent through lift
    x = alg.reduce(alg.E_class(S1))
    assert alg.reduce(alg.lift(x)) == x
    kp = alg.reduce(alg.torus_term(((1, 0), (0, 0))))
    assert list(kp.terms) == [((1, 0), alg.zero_key2())]


def test_generators():
    cat = a2()
    alg = SDH2Algebra(cat)
    S2 = cat.simple(2)
    E = alg.E_class(S2)
    ((g, key), c), = E.terms.items()
    assert g == ((0, 0), (0, 0))
    assert key == (cat.zero_key(), cat.intern(S2))
    assert c == CoeffScalar.one(2)
    # F is the star of E
    for A in (cat.simple(1), S2, cat.projective(1)):
        assert alg.F_class(A) == alg.star(alg.E_class(A))
    assert alg.K_class((0, 0)) == alg.unit()
    # the E generator class matches the normal form of the actual stalk
    got = alg.element_of(stalk_cx2(cat, S2, 1))
    assert got == E


def test_E_class_matches_stalk_resolution_route():
    """For non-projective A the stalk is not a valid normal-form input, but
    multiplying the K-part back must recover the minimal complex class."""
    cat = a2()
    alg = SDH2Algebra(cat)
    S1 = cat.simple(1)
    E = alg.E_class(S1)
    P1A = cat.min_proj_resolution(S1)[0]
    e1 = alg.coords(P1A.dim)
    back = alg.product2(alg.torus_term((e1, (0, 0))), E)
    want = alg.element_of(minimal_complex(cat, cat.rep((0, 0)), S1))
    assert back == want


@pytest.mark.parametrize("qv,p", [(1, 2), (1, 3), (2, 2), (2, 3)])
def test_quantum_group_relations(qv, p):
    quiver = a_n_quiver(qv) if qv > 1 else Quiver(1, [])
    cat = RepCategory(quiver, p)
    alg = SDH2Algebra(cat)
    checks = alg.verify_quantum_group()
    assert checks and all(c[1] == "pass" for c in checks)


def test_quantum_group_negative_control():
    cat = a2()
    alg = SDH2Algebra(cat)
    bad = [c for c in alg.verify_quantum_group(perturb=True) if c[1] != "pass"]
    assert any(c[0].startswith("[E") for c in bad)


def test_freeness_relation_seeded():
    """[X + K] = <K, X> [K] . [X] for acyclic projective K."""
    cat = a2()
    alg = SDH2Algebra(cat)
    rng = random.Random(23)
    reps = [cat.rep((0, 0)), cat.simple(1), cat.simple(2), cat.projective(1)]
    for _ in range(30):
        X = minimal_complex(cat, rng.choice(reps), rng.choice(reps))
        P = rng.choice((cat.projective(1), cat.projective(2)))
        K = make_KP(cat, P) if rng.random() < 0.5 else make_KPstar(cat, P)
        lhs = alg.element_of(direct_sum_cx2(cat, [K, X]))
        knf = alg.normal_form(K)
        g = (knf.alpha, knf.beta)
        rhs = alg.product2(alg.torus_term(g), alg.element_of(X)).scale_scalar(
            q_power(2, alg.exp_g_R(g, alg.normal_form(X).key)))
        assert (lhs - rhs).is_zero()


def test_embedding_multiplicative():
    """The degree-one stalk embedding intertwines the twisted Hall product
    with the twisted semi-derived product (executable content of the
    embedding of the twisted extended Hall algebra)."""
    cat = a2()
    hall = HallAlgebra(cat)
    alg = SDH2Algebra(cat)
    keys = cat.iso_classes_up_to(4)
    for A in keys:
        for B in keys:
            if sum(A.dim) + sum(B.dim) > 4:
                continue
            lhs = alg.twisted_product2(alg.E_class(A.rep), alg.E_class(B.rep))
            img = alg.zero()
            hw = hall.twisted_product(hall.cls(A), hall.cls(B))
            for C, c in hw.terms.items():
                img = img + alg.E_class(C.rep).scale_scalar(c)
            assert (lhs - img).is_zero(), f"{A.label} * {B.label}"


def test_product2_associativity_seeded():
    cat = a2()
    alg = SDH2Algebra(cat)
    rng = random.Random(0)
    reps = [cat.rep((0, 0)), cat.simple(1), cat.simple(2), cat.projective(1)]
    keys = [(cat.intern(a), cat.intern(b)) for a in reps for b in reps
            if a.total_dim() + b.total_dim() <= 3]
    lat = (-1, 0, 1)

    def rand_term():
        key = rng.choice(keys)
        g = (tuple(rng.choice(lat) for _ in range(2)),
             tuple(rng.choice(lat) for _ in range(2)))
        return alg.term(g, key)

    for _ in range(25):
        x, y, z = rand_term(), rand_term(), rand_term()
        assert (alg.product2(alg.product2(x, y), z)
                - alg.product2(x, alg.product2(y, z))).is_zero()
        assert (alg.twisted_product2(alg.twisted_product2(x, y), z)
                - alg.twisted_product2(x, alg.twisted_product2(y, z))).is_zero()


def test_star_is_algebra_involution_on_reduced():
    cat = a2()
    alg = SDH2Algebra(cat)
    xs = [alg.reduce(alg.E_class(cat.simple(1))),
          alg.reduce(alg.F_class(cat.simple(2))),
          alg.reduce(alg.K_class(cat.simple(1).dim))]
    for x in xs:
        assert (x.star().star() - x).is_zero()
    for x in xs:
        for y in xs:
            lhs = (x * y).star()
            rhs = x.star() * y.star()
            assert (lhs - rhs).is_zero()


def test_embedding_minus_side():
    """The degree-zero stalk embedding (the star of the plus side) is also
    multiplicative against the twisted Hall product."""
    cat = a2()
    hall = HallAlgebra(cat)
    alg = SDH2Algebra(cat)
    keys = cat.iso_classes_up_to(3)
    for A in keys:
        for B in keys:
            if sum(A.dim) + sum(B.dim) > 3:
                continue
            lhs = alg.twisted_product2(alg.F_class(A.rep), alg.F_class(B.rep))
            img = alg.zero()
            for C, c in hall.twisted_product(hall.cls(A), hall.cls(B)).terms.items():
                img = img + alg.F_class(C.rep).scale_scalar(c)
            assert (lhs - img).is_zero()
