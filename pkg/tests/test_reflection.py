import pytest

from quiverhall.errors import PreconditionError
from quiverhall.quiver import a_n_quiver
from quiverhall.reflection import SinkReflection, class_of_pieces, lift_through_epi
from quiverhall.reps import RepCategory
from quiverhall.scalars import v_power


def test_not_a_sink_rejected():
    cat = RepCategory(a_n_quiver(2), 2)
    with pytest.raises(PreconditionError):
        SinkReflection(cat, 1)


def test_tau_minus_of_sink_simple():
    cat = RepCategory(a_n_quiver(2), 2)
    refl = SinkReflection(cat, 2)
    assert cat.is_isomorphic(refl.tau_minus, cat.simple(1))


def test_lift_through_epi_solves():
    cat = RepCategory(a_n_quiver(2), 2)
    P1r, P0r, incl, proj = cat.min_proj_resolution(cat.simple(1))
    # lifting the projection against itself gives a section-free identity check
    g = lift_through_epi(cat, proj, proj)
    assert proj.compose(g).mats == proj.mats


def test_class_of_pieces_matches_generator_classes():
    """The piecewise deflation route recovers the stalk generator classes."""
    cat = RepCategory(a_n_quiver(2), 2)
    refl = SinkReflection(cat, 2)
    alg = refl.alg
    for A in (cat.simple(1), cat.projective(1)):
        key = (cat.intern(A), cat.zero_key())
        got = class_of_pieces(alg, refl.pieces_for_key(key))
        assert (got - alg.F_class(A)).is_zero()
        key = (cat.zero_key(), cat.intern(A))
        got = class_of_pieces(alg, refl.pieces_for_key(key))
        assert (got - alg.E_class(A)).is_zero()
    # the sink key uses the two-term piece; its class is a single term in
    # the right quasi-isomorphism class (torus part included)
    key = (cat.intern(cat.simple(2)), cat.zero_key())
    got = class_of_pieces(alg, refl.pieces_for_key(key))
    assert len(got.terms) == 1
    (_g, k), _c = next(iter(got.terms.items()))
    assert k == key


def test_transport_of_non_sink_generators():
    cat = RepCategory(a_n_quiver(2), 2)
    refl = SinkReflection(cat, 2)
    img = refl.reflect_rep(cat.simple(1))
    got = refl.t_hat(refl.alg.reduce(refl.alg.F_class(cat.simple(1))))
    want = refl.alg2.reduce(refl.alg2.F_class(img))
    assert (got - want).is_zero()


def test_full_reflection_suite_a2():
    cat = RepCategory(a_n_quiver(2), 2)
    checks = SinkReflection(cat, 2).checks()
    assert checks and all(c[1] == "pass" for c in checks)


def test_bgp_formula_direct():
    cat = RepCategory(a_n_quiver(2), 2)
    refl = SinkReflection(cat, 2)
    lhs = refl.t_hat(refl.alg.reduce(refl.alg.F_class(cat.simple(2))))
    Si2 = refl.cat2.simple(2)
    rhs = refl.alg2.reduced_product(
        refl.alg2.reduce(refl.alg2.E_class(Si2)),
        refl.alg2.reduce(refl.alg2.Kstar_class(Si2.dim))).scale_scalar(
            v_power(2, -1))
    assert (lhs - rhs).is_zero()


def test_reflection_respects_quantum_torus_structure():
    """s_i preserves the symmetrized Euler pairing on classes."""
    cat = RepCategory(a_n_quiver(2), 2)
    refl = SinkReflection(cat, 2)
    Q, Q2 = cat.quiver, refl.cat2.quiver
    classes = [(1, 0), (0, 1), (1, 1), (1, -1)]
    for a in classes:
        for b in classes:
            assert Q.symmetrized_euler(a, b) == \
                Q2.symmetrized_euler(refl.reflect_class(a), refl.reflect_class(b))
