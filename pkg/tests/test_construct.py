"""The explicit large-field construction and the seeded random search."""

from __future__ import annotations

import time

import pytest

from convec import field
from convec.construct import (
    alpha_exponent_layout,
    build_complete_mdp,
    degree_bounds,
    random_code,
    staircase_certificate,
    staircase_exponents,
)
from convec.distance import (
    L_of,
    column_bound,
    column_distance,
    is_mdp,
    verify_complete_jmdp_via_g,
)
from convec.errors import DivisibilityViolated, FieldTooLarge, NotPrime, SearchExhausted


@pytest.fixture(scope="module")
def built311():
    return build_complete_mdp(3, 1, 1, 2)


def test_degree_bounds_reference():
    # general figure 4*2^5, quoted figure 6*2^5; the build takes max+1
    assert degree_bounds(3, 1, 1) == (128, 192)


def test_pinned_code_entries(built311):
    code = built311
    fld = code.field
    assert fld.p == 2 and fld.m == 193
    assert fld.modulus_packed == (1 << 193) | 503
    a = fld.el(2)
    assert [code.G.coeff(0).data[0][c] for c in range(3)] == [a, a ** 2, a ** 4]
    assert [code.G.coeff(1).data[0][c] for c in range(3)] == [a ** 8, a ** 16, a ** 32]
    assert (code.n, code.k, code.delta, code.mu) == (3, 1, 1, 1)


def test_provenance_metadata(built311):
    prov = built311.metadata["provenance"]
    assert prov["N"] == 193
    assert prov["bound_general"] == 128
    assert prov["bound_coarse"] == 192
    assert prov["alpha"] == "x"
    # 2^193 - 1 cannot be factored within budget, so no primitivity claim
    assert prov["alpha_primitive_verified"] is False
    assert prov["field"] == built311.field.ref()


def test_certification_speed(built311):
    t0 = time.perf_counter()
    rep = verify_complete_jmdp_via_g(built311, L_of(3, 1, 1))
    elapsed = time.perf_counter() - t0
    assert rep.passed and rep.sets_checked > 0
    assert elapsed < 5.0
    # complete MDP with k <= n-k is in particular MDP
    assert is_mdp(built311)


def test_structure_flags(built311):
    flags = built311.flags
    assert flags.delay_free and flags.row_reduced
    assert flags.noncatastrophic_certified


def test_layout_convention():
    assert alpha_exponent_layout(3, 1, 1) == [[[0, 1, 2]], [[3, 4, 5]]]
    lay = alpha_exponent_layout(4, 2, 2)
    for i, grid in enumerate(lay):
        assert grid[0][0] == i * 4
        assert grid[0][3] == (i + 1) * 4 - 1
        assert grid[1][0] == i * 4 + 1
        assert grid[1][3] == (i + 1) * 4


def test_divisibility_guard():
    with pytest.raises(DivisibilityViolated):
        build_complete_mdp(3, 2, 3, 2)


def test_field_cap():
    with pytest.raises(FieldTooLarge):
        build_complete_mdp(3, 1, 3, 2)
    with pytest.raises(FieldTooLarge) as exc:
        build_complete_mdp(3, 1, 1, 2, max_extension_degree=100)
    assert "193" in str(exc.value)


def test_prime_guard():
    with pytest.raises(NotPrime):
        build_complete_mdp(3, 1, 1, 4)


@pytest.mark.parametrize("params", [(3, 1, 1), (2, 1, 2), (4, 2, 2), (3, 2, 2)])
def test_staircase_conditions(params):
    n, k, delta = params
    cert = staircase_certificate(n, k, delta)
    mu, L = delta // k, L_of(n, k, delta)
    assert cert["rows"] == k * (L + 1 + 2 * mu)
    assert cert["cols"] == n * (L + 1 + mu)
    assert cert["max_term_exponent"] <= max(cert["bound_general"], cert["bound_coarse"])


def test_staircase_reference_grid():
    grid = staircase_exponents(3, 1, 1)
    # four rows, degree grows down and right, zeros confined to the corners
    assert grid[0] == [None] * 6 + [0, 1, 2]
    assert grid[1] == [None] * 3 + [0, 1, 2, 3, 4, 5]
    assert grid[2] == [0, 1, 2, 3, 4, 5] + [None] * 3
    assert grid[3] == [3, 4, 5] + [None] * 6
    # the worst surviving minor term for these parameters
    cert = staircase_certificate(3, 1, 1)
    assert cert["max_term_exponent"] == 100 < 193


def test_random_code_first_sample():
    code = random_code(3, 2, 3, 9, seed=2)
    assert (code.n, code.k, code.delta) == (3, 2, 3)
    assert code.field.q == 9
    assert code.flags.delay_free and code.flags.row_reduced
    again = random_code(3, 2, 3, 9, seed=2)
    assert code.G == again.G


def test_random_code_mdp_search():
    code = random_code(2, 1, 1, 8, seed=1, want="mdp")
    L = L_of(2, 1, 1)
    # independent check: brute-force column distance meets the bound at L
    assert column_distance(code, L) == column_bound(2, 1, L)


def test_random_code_complete_search():
    code = random_code(2, 1, 1, 8, seed=5, want="complete")
    assert verify_complete_jmdp_via_g(code, L_of(2, 1, 1)).passed


def test_random_code_small_field_exhausts():
    with pytest.raises(SearchExhausted):
        random_code(2, 1, 1, 2, seed=0, want="mdp", attempts=64)


def test_random_code_argument_guards():
    with pytest.raises(ValueError):
        random_code(2, 1, 1, 6, seed=0)
    with pytest.raises(ValueError):
        random_code(2, 1, 1, 8, seed=0, want="best")
    with pytest.raises(DivisibilityViolated):
        random_code(3, 2, 3, 8, seed=0, want="complete")


def test_built_code_encodes(built311):
    # desk check that the big-field code is usable end to end
    from convec.polymat import PolyMatrix
    from convec.stream import ErasureStream
    from convec.codec import gm_decode_forward

    fld = built311.field
    u = PolyMatrix.from_packed(fld, [[[5]], [[fld.el(3).val]], [[1]]])
    s = ErasureStream.from_codeword(built311.encode(u))
    s.blocks[1][0] = s.blocks[1][1] = None
    rep = gm_decode_forward(built311, s)
    assert rep.complete and rep.message() == u
