import numpy as np
import pytest

import acylsoliton as ak
from oracles import brute_force_spectrum, character_projection_spectrum

TWO_PI = 2 * np.pi


def as_dict(pairs):
    return {round(mu, 9): mult for mu, mult in pairs}


def test_square_torus_spectrum_small():
    cs = ak.CrossSection(TWO_PI, ak.square_lattice())
    got = as_dict(ak.spectrum(cs, 2.5))
    assert got == {0.0: 1, 1.0: 6, 2.0: 12}


def test_constant_mode_always_first():
    for lattice in (ak.square_lattice(), ak.hexagonal_lattice()):
        cs = ak.CrossSection(np.pi, lattice)
        pairs = ak.spectrum(cs, 1.5)
        assert pairs[0] == (0.0, 1)


def test_short_circle_ordering():
    # circle of length pi: circle modes enter at 4 j^2
    cs = ak.CrossSection(np.pi, ak.square_lattice())
    mus = [mu for mu, _ in ak.spectrum(cs, 3.9)]
    assert mus == [0.0, 1.0, 2.0]  # no mu in (2, 3.9]: x^2+y^2=3 has no solution
    mus_wide = [mu for mu, _ in ak.spectrum(cs, 4.1)]
    assert mus_wide == [0.0, 1.0, 2.0, 4.0]
    # at mu=4: torus (+-2, 0), (0, +-2) plus circle j=+-1 -> multiplicity 6
    assert as_dict(ak.spectrum(cs, 4.1))[4.0] == 6


@pytest.mark.parametrize("circle_length", [np.pi, TWO_PI])
@pytest.mark.parametrize("lattice_name", ["square", "hexagonal"])
def test_spectrum_matches_brute_force(circle_length, lattice_name):
    lattice = ak.square_lattice() if lattice_name == "square" else ak.hexagonal_lattice()
    cs = ak.CrossSection(circle_length, lattice)
    got = as_dict(ak.spectrum(cs, 9.0))
    want = as_dict(brute_force_spectrum(circle_length, lattice, 9.0))
    assert got == want


def test_invariant_spectrum_negation_quotient():
    cs = ak.CrossSection(TWO_PI, ak.square_lattice(), ak.negation_quotient())
    inv = as_dict(ak.invariant_spectrum(cs, 2.5))
    # constants survive
    assert inv[0.0] == 1
    # mu=1: the spec sheet quotes multiplicity 4, but the character projection
    # gives 2 (cos x1, cos x2 survive; the circle modes j=+-1 carry character -1)
    oracle = as_dict(character_projection_spectrum(TWO_PI, ak.square_lattice(), 2, -np.eye(2, dtype=int), 2.5))
    assert inv[1.0] == 2
    assert inv == oracle


def test_trivial_quotient_is_full_spectrum():
    base = ak.CrossSection(TWO_PI, ak.square_lattice())
    assert ak.invariant_spectrum(base, 6.0) == ak.spectrum(base, 6.0)


@pytest.mark.parametrize(
    "lattice_name,quotient_fn",
    [
        ("square", ak.negation_quotient),
        ("hexagonal", ak.negation_quotient),
        ("hexagonal", ak.hexagonal_rotation_quotient),
    ],
)
def test_invariant_spectrum_matches_character_projection(lattice_name, quotient_fn):
    lattice = ak.square_lattice() if lattice_name == "square" else ak.hexagonal_lattice()
    quotient = quotient_fn()
    cs = ak.CrossSection(TWO_PI, lattice, quotient)
    got = as_dict(ak.invariant_spectrum(cs, 9.0))
    want = as_dict(
        character_projection_spectrum(TWO_PI, lattice, quotient.order,
                                      quotient.lattice_map, 9.0)
    )
    assert got == want


def test_invariant_multiplicities_bounded_by_full():
    cs_full = ak.CrossSection(TWO_PI, ak.hexagonal_lattice())
    cs_quot = ak.CrossSection(TWO_PI, ak.hexagonal_lattice(),
                              ak.hexagonal_rotation_quotient())
    full = as_dict(ak.spectrum(cs_full, 9.0))
    inv = as_dict(ak.invariant_spectrum(cs_quot, 9.0))
    for mu, mult in inv.items():
        assert mu in full
        assert mult <= full[mu]


def test_isotypic_dimensions_sum_to_orbit_size():
    # over all characters, the isotypic dimensions fill each orbit span
    R = ak.hexagonal_rotation_quotient().lattice_map
    m = 3
    RT = R.T
    import itertools

    for j, alpha in itertools.product(range(-2, 3), itertools.product(range(-2, 3), repeat=2)):
        orbit = {tuple(alpha)}
        current = np.array(alpha)
        while True:
            current = RT @ current
            if tuple(current) in orbit:
                break
            orbit.add(tuple(current))
        o = len(orbit)
        dims = []
        for char in range(m):
            total = 0.0 + 0.0j
            for ell in range(m):
                fixed = o if ell % o == 0 else 0
                total += fixed * np.exp(2j * np.pi * (j - char) * ell / m)
            dims.append(round(total.real / m))
        assert sum(dims) == o


def test_enumeration_is_deterministic():
    cs = ak.CrossSection(TWO_PI, ak.hexagonal_lattice())
    assert ak.spectrum(cs, 7.0) == ak.spectrum(cs, 7.0)


def test_degenerate_lattice_rejected():
    with pytest.raises(ak.DomainError):
        ak.CrossSection(TWO_PI, np.array([[1.0, 2.0], [2.0, 4.0]]))


def test_non_isometric_lattice_map_rejected():
    # shear preserves the lattice but not the flat metric
    with pytest.raises(ak.DomainError):
        ak.CrossSection(
            TWO_PI, ak.square_lattice(),
            ak.CyclicQuotient(order=2, lattice_map=np.array([[1, 1], [0, -1]])),
        )


def test_non_unimodular_map_rejected():
    with pytest.raises(ak.DomainError):
        ak.CyclicQuotient(order=2, lattice_map=np.array([[2, 0], [0, 1]]))
