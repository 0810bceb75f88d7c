import numpy as np
import pytest

from koflow import clifford as cl
from koflow.abs_index import Group, KOClass, abs_class, forgetful, group_of
from koflow.errors import ValidationError


def test_group_table():
    expected = {0: Group.Z, 1: Group.Z2, 2: Group.Z2, 3: Group.TRIVIAL,
                4: Group.Z, 5: Group.TRIVIAL, 6: Group.TRIVIAL, 7: Group.TRIVIAL}
    for degree, group in expected.items():
        assert group_of(degree) is group
        assert group_of(degree + 8) is group


def test_koclass_normalization():
    assert KOClass.of(1, 5).value == 1
    assert KOClass.of(3, 17).value == 0
    assert KOClass.of(4, -2).value == -2
    total = KOClass.of(2, 1) + KOClass.of(2, 1)
    assert total.value == 0
    with pytest.raises(ValidationError):
        KOClass.of(0, 1) + KOClass.of(4, 1)
    assert (-KOClass.of(4, 3)).value == -3
    assert KOClass.of(6, 0).to_json() == {"degree": 6, "group": "Trivial", "value": 0}


def test_abs_class_paper_generators():
    gen = cl.CliffordRep(1, 0, 1, E=(np.array([[1.0]]),))
    k = abs_class(gen)
    assert (k.degree, k.value) == (0, 1)

    gen = cl.CliffordRep(0, 1, 2, F=(cl.L1,))
    k = abs_class(gen)
    assert (k.degree, k.group, k.value) == (2, Group.Z2, 1)

    gen = cl.CliffordRep(1, 1, 2, E=(cl.K1,), F=(cl.L1,))
    k = abs_class(gen)
    assert (k.degree, k.group, k.value) == (1, Group.Z2, 1)


def test_doubles_vanish_in_z2_degrees():
    v = cl.irreducible_rep(0, 1)
    assert abs_class(cl.direct_sum(v, v)).value == 0
    v = cl.irreducible_rep(1, 1)
    assert abs_class(cl.direct_sum(v, v)).value == 0


def test_forgetful_theorem_chain():
    v = cl.CliffordRep(2, 1, 2, E=(cl.K1, cl.K2), F=(cl.L1,))
    assert abs_class(v).value == 1           # tau_{2,2} = 1
    v12 = forgetful(v, drop=1)               # drop K2
    assert np.array_equal(v12.E[0], cl.K1)
    assert abs_class(v12).value == 1         # tau_{1,2} = 1
    v02 = forgetful(v12, drop=0)             # drop K1
    assert np.array_equal(v02.F[0], cl.L1)
    assert abs_class(v02).value == 1         # tau_{0,2} = 1


def test_forgetful_mod2_collapse():
    v = cl.irreducible_rep(2, 1, "+")
    double = cl.direct_sum(v, v)
    assert abs_class(double).value == 2      # tau_{2,2} = 2
    assert abs_class(forgetful(double)).value == 0   # 2 mod 2


def test_forgetful_errors():
    v = cl.irreducible_rep(0, 1)
    with pytest.raises(ValidationError):
        forgetful(v)
    with pytest.raises(ValidationError):
        forgetful(cl.irreducible_rep(1, 0, "+"), drop=3)


def test_additivity():
    for (r, s) in [(1, 0), (0, 1), (2, 1), (0, 3)]:
        chis = ["+", "-"] if cl.has_two_irreducibles(r, s) else [None]
        for ch in chis:
            v = cl.irreducible_rep(r, s, ch)
            w = cl.irreducible_rep(r, s, chis[0])
            assert abs_class(cl.direct_sum(v, w)) == abs_class(v) + abs_class(w)


@pytest.mark.parametrize("r,s", [(r, t - r) for t in range(7) for r in range(t + 1)])
def test_mod8_periodicity(r, s):
    chis = ["+", "-"] if cl.has_two_irreducibles(r, s) else [None]
    for ch in chis:
        v = cl.irreducible_rep(r, s, ch)
        assert abs_class(cl.cl11_tensor(v)) == abs_class(v)


def test_orientation_sensitivity():
    straight = cl.CliffordRep(2, 1, 2, E=(cl.K1, cl.K2), F=(cl.L1,))
    swapped = cl.CliffordRep(2, 1, 2, E=(cl.K2, cl.K1), F=(cl.L1,))
    assert abs_class(straight).value == -abs_class(swapped).value == 1


def test_trivial_degrees_return_zero():
    v = cl.irreducible_rep(0, 2)
    assert abs_class(v).value == 0
    assert abs_class(cl.direct_sum(v, v)).value == 0
    v = cl.irreducible_rep(1, 3)
    assert abs_class(v).group is Group.TRIVIAL
