import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phasor.boundary import (
    BoundaryColoring,
    chrom_of_coloring,
    extend_analytic,
    extend_with_singularities,
    read_coloring,
    write_coloring,
)
from phasor.errors import (
    ChromaticMismatchError,
    DiscontinuousColoringError,
    LocationOnBoundaryError,
    NonzeroChromaticNumberError,
)
from phasor.render import Frame

FRAME = Frame(-1, 1, -1, 1, 96, 96)


def disk_points(rng, n=2000, r=0.9):
    return r * np.sqrt(rng.uniform(0, 1, n)) * np.exp(2j * np.pi * rng.uniform(0, 1, n))


def sup_phase_error(sol, f, z):
    w = f(z)
    return float(np.max(np.abs(sol.phase_at(z) - w / np.abs(w))))


def test_coloring_validation():
    with pytest.raises(ValueError):
        BoundaryColoring(np.ones(100))
    with pytest.raises(ValueError):
        BoundaryColoring(np.ones(32))
    with pytest.raises(ValueError):
        BoundaryColoring(1.001 * np.ones(64))
    with pytest.raises(LocationOnBoundaryError):
        BoundaryColoring.from_function(lambda z: z - 1, 64)


def test_chrom_examples():
    assert chrom_of_coloring(BoundaryColoring(np.ones(64))) == 0
    ident = BoundaryColoring.from_function(lambda z: z, 64)
    assert chrom_of_coloring(ident) == 1
    assert chrom_of_coloring(BoundaryColoring.from_function(lambda z: z - 2, 256)) == 0
    assert chrom_of_coloring(ident.rotate(-3)) == -2
    # four jumps of pi/2 are rejected
    with pytest.raises(DiscontinuousColoringError):
        chrom_of_coloring(BoundaryColoring.from_function(lambda z: z ** 16, 64))


def test_constant_coloring():
    c = cmath.exp(1j * math.pi / 4)
    sol = extend_analytic(BoundaryColoring(np.full(64, c)), FRAME)
    inside = sol.inside
    assert np.allclose(sol.phase[inside], c, atol=1e-14)
    assert np.all(np.isnan(sol.phase[~inside]))


@pytest.mark.parametrize("f", [
    lambda z: z - 2,
    lambda z: np.exp(z),
    lambda z: np.exp(np.sin(z)),
    lambda z: (z - 3) * (z - 2j) / 6j,
])
def test_round_trip(f, rng):
    B = BoundaryColoring.from_function(f, 256)
    sol = extend_analytic(B, FRAME)
    assert sup_phase_error(sol, f, disk_points(rng)) <= 1e-6
    # the boundary restriction reproduces the samples
    z = np.exp(1j * B.angles)
    assert np.max(np.abs(sol.phase_at(z) - B.samples)) <= 1e-6
    # interior values are unimodular
    ph = sol.phase[sol.inside]
    assert np.allclose(np.abs(ph), 1, atol=1e-12)


def test_uniqueness_across_resolutions(rng):
    f = lambda z: np.exp(np.sin(z)) * (z - 2)
    a = extend_analytic(BoundaryColoring.from_function(f, 256), FRAME)
    b = extend_analytic(BoundaryColoring.from_function(f, 512), FRAME)
    z = disk_points(rng)
    assert np.max(np.abs(a.phase_at(z) - b.phase_at(z))) <= 1e-8


def test_rejection():
    B = BoundaryColoring.from_function(lambda z: z, 256)
    with pytest.raises(NonzeroChromaticNumberError) as exc:
        extend_analytic(B, FRAME)
    assert "nonzero chromatic number" in str(exc.value)


@settings(max_examples=20, deadline=None)
@given(st.integers(-3, 3).filter(lambda k: k != 0), st.floats(0, 2 * math.pi))
def test_iff_direction(k, t):
    base = BoundaryColoring.from_function(lambda z: np.exp(0.3 * np.cos(z + t)) * (z - 2), 128)
    B = base.rotate(k)
    with pytest.raises(NonzeroChromaticNumberError):
        extend_analytic(B, FRAME)
    zeros, poles = ([(0, k)], []) if k > 0 else ([], [(0, -k)])
    sol = extend_with_singularities(B, zeros, poles, FRAME)
    z = np.array([0.3 + 0.2j, -0.5j, 0.7])
    f = lambda z: np.exp(0.3 * np.cos(z + t)) * (z - 2) * z ** k
    assert sup_phase_error(sol, f, z) <= 1e-6


def test_generalised_examples(rng):
    B = BoundaryColoring.from_function(lambda z: z, 256)
    sol = extend_with_singularities(B, [(0, 1)], [], FRAME)
    z = disk_points(rng)
    assert np.max(np.abs(sol.phase_at(z) - z / np.abs(z))) <= 1e-12
    f = lambda z: z ** 2 * (z - 2)
    sol = extend_with_singularities(BoundaryColoring.from_function(f, 256), [(0, 2)], [], FRAME)
    assert sup_phase_error(sol, f, z) <= 1e-6
    with pytest.raises(ChromaticMismatchError):
        extend_with_singularities(B, [], [], FRAME)
    with pytest.raises(LocationOnBoundaryError):
        extend_with_singularities(B, [(1.0, 1)], [], FRAME)


def test_off_centre_zero_and_pole(rng):
    f = lambda z: (z - 0.3j) * np.exp(z) / (z + 0.4) ** 2
    B = BoundaryColoring.from_function(f, 256)
    assert chrom_of_coloring(B) == -1
    sol = extend_with_singularities(B, [(0.3j, 1)], [(-0.4, 2)], FRAME)
    z = disk_points(rng)
    z = z[(np.abs(z - 0.3j) > 1e-3) & (np.abs(z + 0.4) > 1e-3)]
    assert sup_phase_error(sol, f, z) <= 1e-6


def _square_integral(F, c, h, n=64):
    # Gauss-Legendre on each side of the square centred at c with side h
    x, w = np.polynomial.legendre.leggauss(n)
    corners = c + h / 2 * np.array([-1 - 1j, 1 - 1j, 1 + 1j, -1 + 1j, -1 - 1j])
    total = 0
    for a, b in zip(corners[:-1], corners[1:]):
        t = (b - a) / 2 * x + (a + b) / 2
        total += np.sum(w * F(t)) * (b - a) / 2
    return total


def test_morera(rng):
    f = lambda z: np.exp(np.sin(z)) / (z - 2.5)
    sol = extend_analytic(BoundaryColoring.from_function(f, 256), FRAME)
    for _ in range(20):
        c = 0.6 * np.sqrt(rng.uniform()) * cmath.exp(2j * math.pi * rng.uniform())
        h = rng.uniform(0.02, 0.2)
        val = abs(_square_integral(sol.f, c, h))
        grid = c + h / 2 * (np.linspace(-1, 1, 9)[:, None] + 1j * np.linspace(-1, 1, 9)[None, :])
        bound = 1e-8 * 4 * h * np.max(np.abs(sol.f(grid)))
        assert val <= bound


def test_harmonic_parts(rng):
    f = lambda z: np.exp(z)
    sol = extend_analytic(BoundaryColoring.from_function(f, 256), FRAME)
    z = disk_points(rng, 50)
    # Phi = Im z and Psi = -Re z + const; Psi(0) = 0 fixes the constant
    assert np.allclose(sol.Phi(z), z.imag, atol=1e-12)
    assert np.allclose(sol.Psi(z), -z.real, atol=1e-12)
    assert abs(sol.Psi(np.array([0j]))[0]) < 1e-15


def test_file_round_trip(tmp_path):
    B = BoundaryColoring.from_function(lambda z: np.exp(z) * (z - 2), 64)
    p = tmp_path / "b.txt"
    write_coloring(B, p)
    text = p.read_text().splitlines()
    assert text[0] == "64" and len(text) == 65
    C = read_coloring(p)
    assert np.array_equal(B.samples, C.samples)
    p.write_text("65\n1 0\n")
    with pytest.raises(ValueError):
        read_coloring(p)
