import random
from collections import Counter

import pytest
from hypothesis import given

from _helpers import params, random_param
from glblocks.errors import (
    BlockError,
    DuplicateOrbitError,
    FrobeniusStabilityError,
    WeightError,
    WildParameterError,
)
from glblocks.local_fields import WILD_INERTIA, ExtShape, InertiaKind, ResidueDatum
from glblocks.parameters import (
    Component,
    GLFactor,
    GLTypeGroup,
    InertialParam,
    centralizer_shape,
    count_blocks,
    enumerate_blocks,
    factor_parameter,
    from_characters,
    fuse_blocks,
    hecke_descriptor,
    isotypic_decomposition,
    restrict_to_ell_prime,
    shapiro_lift,
    shapiro_transport,
    trivial_parameter,
    unipotent_group,
    validate,
)
from glblocks.tame_characters import TameChar

Q3, Q5 = ResidueDatum.from_q(3), ResidueDatum.from_q(5)

# Frozen from the brute-force oracle (tests/test_oracle.py re-derives them).
BLOCK_COUNTS = {
    2: {"GL:1": 1, "GL:2": 2, "GL:3": 4, "GL:4": 8, "Res:1,2:GL:2": 12},
    3: {"GL:1": 2, "GL:2": 6, "GL:3": 18, "GL:4": 54, "Res:1,2:GL:2": 72, "Res:2,1:GL:2": 6},
    4: {"GL:1": 3, "GL:2": 12, "GL:3": 48, "GL:4": 192, "Res:1,2:GL:2": 240},
    5: {"GL:1": 4, "GL:2": 20, "GL:3": 100, "GL:4": 500, "Res:1,2:GL:2": 600, "Res:2,1:GL:2": 20},
    7: {"GL:1": 6, "GL:2": 42, "GL:3": 294, "GL:4": 2058, "Res:1,2:GL:2": 2352, "Res:2,1:GL:2": 42},
}
CASES = [(q, g, n) for q, row in BLOCK_COUNTS.items() for g, n in row.items()]


def gl(n, base):
    return GLTypeGroup.gl(n, base)


def cusp():
    return validate(gl(2, Q5), [[((2, 8), 1)]])


def gl4_mixed():
    return validate(gl(4, Q3), [[((1, 0), 2), ((2, 1), 1)]])


def test_group_spec_roundtrip():
    g = GLTypeGroup.parse("Res:1,2:GL:2xGL:1", Q3)
    assert g.spec() == "Res:1,2:GL:2xGL:1" and g.rank == 3
    with pytest.raises(BlockError):
        GLTypeGroup.parse("GL2", Q3)
    with pytest.raises(BlockError):
        GLTypeGroup.parse("Res:3,1:GL:2", Q3)


def test_validate_examples():
    assert validate(gl(2, Q3), [[((1, 0), 2)]]) == trivial_parameter(gl(2, Q3))
    phi = cusp()
    assert [(sorted(o.residues()), m) for o, m in isotypic_decomposition(phi)[0]] == [([8, 16], 1)]
    with pytest.raises(WeightError):
        validate(gl(2, Q3), [[((1, 0), 1)]])
    with pytest.raises(DuplicateOrbitError):
        validate(gl(2, Q5), [[((2, 8), 1), ((2, 16), 1)]])


def test_any_orbit_element_names_the_same_piece():
    assert validate(gl(2, Q5), [[((2, 16), 1)]]) == cusp()


def test_wild_parameters_rejected():
    with pytest.raises(WildParameterError):
        trivial_parameter(gl(2, Q3), WILD_INERTIA)


def test_from_characters_needs_frobenius_stability():
    with pytest.raises(FrobeniusStabilityError):
        from_characters(gl(2, Q5), [Counter({TameChar(2, 8, Q5): 2})])


def test_isotypic_decomposition_examples():
    assert [(o.is_trivial, m) for o, m in isotypic_decomposition(trivial_parameter(gl(3, Q3)))[0]] == [
        (True, 3)
    ]
    assert len(isotypic_decomposition(gl4_mixed())[0]) == 2


def test_centralizer_examples():
    assert centralizer_shape(trivial_parameter(gl(3, Q3))).components == (Component(3, 1),)
    assert centralizer_shape(trivial_parameter(gl(3, Q3))).dim == 9
    shape = centralizer_shape(cusp())
    assert shape.components == (Component(1, 2),) and shape.dim == 2
    shape = centralizer_shape(gl4_mixed())
    assert set(shape.components) == {Component(2, 1), Component(1, 2)} and shape.dim == 6


def test_unipotent_group_examples():
    assert unipotent_group(trivial_parameter(gl(3, Q3))) == gl(3, Q3)
    assert unipotent_group(cusp()).spec() == "Res:1,2:GL:1"
    assert unipotent_group(gl4_mixed()).spec() == "GL:2xRes:1,2:GL:1"


def test_hecke_descriptor_examples():
    assert str(hecke_descriptor(trivial_parameter(gl(3, Q3)))) == "H(3,3)"
    assert str(hecke_descriptor(cusp())) == "H(1,25)"
    assert hecke_descriptor(gl4_mixed()).factors == ((1, 2), (2, 1))
    assert str(hecke_descriptor(gl4_mixed())) == "H(1,9) ⊗ H(2,3)"


@pytest.mark.parametrize("q, spec, expected", CASES)
def test_block_counts(q, spec, expected):
    group = GLTypeGroup.parse(spec, ResidueDatum.from_q(q))
    blocks = enumerate_blocks(group)
    assert len(blocks) == expected == count_blocks(group)
    assert len({phi.key() for phi in blocks}) == expected
    assert [phi.key() for phi in blocks] == sorted(phi.key() for phi in blocks)


def test_gl2_q2_blocks_explicitly():
    keys = [phi.key() for phi in enumerate_blocks(gl(2, ResidueDatum.from_q(2)))]
    assert keys == [(((1, 0, 2),),), (((2, 1, 1),),)]


def test_enumeration_rejects_wild_kind():
    with pytest.raises(WildParameterError):
        enumerate_blocks(gl(2, Q3), WILD_INERTIA)


def test_restrict_to_ell_prime_examples():
    assert restrict_to_ell_prime(cusp(), 3).is_trivial
    assert restrict_to_ell_prime(trivial_parameter(gl(2, Q3)), 2).is_trivial
    assert restrict_to_ell_prime(validate(gl(2, Q3), [[((2, 1), 1)]]), 2).is_trivial


@pytest.mark.parametrize(
    "n, q, ell, sizes", [(2, 3, 2, [6]), (2, 3, 5, [1] * 6), (1, 5, 2, [4])]
)
def test_fusion_examples(n, q, ell, sizes):
    classes = fuse_blocks(enumerate_blocks(gl(n, ResidueDatum.from_q(q))), ell)
    assert [c.size for c in classes] == sizes


def test_shapiro_examples():
    g = GLTypeGroup((GLFactor(1, ExtShape(1, 2)),), Q5)
    assert shapiro_transport(trivial_parameter(g)).is_trivial
    phi = validate(g, [[((2, 8), 1)]])
    assert phi.data[0][0].orbit.size == 1
    down = shapiro_transport(phi)
    assert down.base.q == 25 and down.key() == (((1, 8, 1),),)
    g3 = GLTypeGroup((GLFactor(2, ExtShape(3, 1)),), Q5)
    phi3 = validate(g3, [[((2, 8), 1)]])
    assert shapiro_transport(phi3).key() == phi3.key()


@given(params())
def test_parameter_invariants(phi):
    for i, fac in enumerate(phi.group.factors):
        assert sum(pc.weight for pc in phi.data[i]) == fac.n
    assert centralizer_shape(phi).dim == sum(c.e**2 * c.copies for c in centralizer_shape(phi).components)
    g_phi = unipotent_group(phi)
    assert centralizer_shape(trivial_parameter(g_phi)) == centralizer_shape(phi)
    assert hecke_descriptor(phi).factors == tuple(sorted((f.n, f.ext.f) for f in g_phi.factors))
    assert InertialParam.from_json(phi.to_json()) == phi


@given(params())
def test_shapiro_roundtrip_per_factor(phi):
    for i, fac in enumerate(phi.group.factors):
        one = factor_parameter(phi, i)
        down = shapiro_transport(one)
        assert sum(pc.weight for pc in down.data[0]) == fac.n
        assert shapiro_lift(down, fac.ext, phi.base) == one


@given(params(qs=(3, 5)))
def test_restriction_preserves_weight(phi):
    for ell in (2, 3, 5, 7):
        if ell == phi.base.p:
            continue
        res = restrict_to_ell_prime(phi, ell)
        assert res.kind == InertiaKind.ell_prime(ell)
        assert [sum(pc.weight for pc in pcs) for pcs in res.data] == [f.n for f in phi.group.factors]


def test_ell_prime_parameters_must_be_regular():
    with pytest.raises(BlockError):
        validate(gl(2, Q5), [[((2, 8), 1)]], InertiaKind.ell_prime(3))
    assert len(enumerate_blocks(gl(2, Q5), InertiaKind.ell_prime(3))) == count_blocks(
        gl(2, Q5), InertiaKind.ell_prime(3)
    )


def test_random_parameters_are_canonical():
    rng = random.Random(7)
    g = GLTypeGroup.parse("GL:2xRes:1,2:GL:2", Q3)
    for _ in range(50):
        phi = random_param(rng, g)
        assert validate(g, [[(pc.orbit.rep, pc.mult) for pc in pcs] for pcs in phi.data]) == phi
