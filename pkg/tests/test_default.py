import pytest
from hypothesis import given, strategies as st

from liquidproxy.aggregation import majority
from liquidproxy.default import (DefaultEntry as E, decompose, default_profiles, plain_equivalent,
                                 pv_maj_default, translate_t_prime, validate_default_profile)
from liquidproxy.proxy import PV_MAJ, translate_t


def test_two_cycle_with_tail():
    # 0 <-> 1 disagree (hung); 2 votes 1 alone; 3 -> 0
    prof = ((E(1, 1),), (E(0, 0),), (E(1, 2),), (E(0, 0),))
    d = decompose(prof, 0)
    assert d.cycles == [(0, 1), (2,)]
    assert d.weight == [3, 1]
    assert d.hung(0) and d.verdict(1) == 1
    assert translate_t_prime(prof) == ((None,), (None,), (1,), (None,))
    assert pv_maj_default(prof) == (1,)


def test_cycle_weight_is_basin_size():
    # 3-cycle voting 1,1,0 with two followers against 4 self-loops voting 0
    prof = tuple((E(v, d),) for v, d in [(1, 1), (1, 2), (0, 0), (0, 0), (0, 3),
                                           (0, 5), (0, 6), (0, 7), (0, 8)])
    d = decompose(prof, 0)
    assert d.weight == [5, 1, 1, 1, 1]
    assert pv_maj_default(prof) == (1,)  # 5 against 4
    assert majority(translate_t_prime(prof)) == (1,)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_coherence_exhaustive(n):
    for prof in default_profiles(n, 1):
        assert pv_maj_default(prof) == majority(translate_t_prime(prof))


profiles = st.integers(1, 6).flatmap(lambda n: st.lists(
    st.tuples(st.builds(E, st.integers(0, 1), st.integers(0, n - 1)),
              st.builds(E, st.integers(0, 1), st.integers(0, n - 1))), min_size=n, max_size=n))


@given(profiles)
def test_coherence_two_issues(prof):
    prof = tuple(prof)
    validate_default_profile(prof)
    assert pv_maj_default(prof) == majority(translate_t_prime(prof))


@given(profiles)
def test_agrees_with_plain_proxy_when_no_long_cycles(prof):
    prof = tuple(prof)
    ok = all(len(c) == 1 for p in range(2) for c in decompose(prof, p).cycles)
    if ok:
        plain = plain_equivalent(prof)
        assert translate_t_prime(prof) == translate_t(plain)
        assert pv_maj_default(prof) == PV_MAJ(plain)


def test_validation():
    with pytest.raises(ValueError):
        validate_default_profile(((E(2, 0),),))
    with pytest.raises(ValueError):
        validate_default_profile(((E(1, 3),),))
