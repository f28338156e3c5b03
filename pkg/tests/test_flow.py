import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phasor.errors import (
    BoundViolationError,
    NonUnimodularError,
    SeedClassificationError,
    ZeroOutsideDiskError,
)
from phasor.expr import parse
from phasor.flow import (
    BlaschkeProduct,
    PhaseFlow,
    basin_decomposition,
    boundary_phase_measure,
    classify_fixed_points,
    flow_field,
    integrate_orbit,
    label_points,
    structure_sequence,
    unstable_manifolds,
)
from phasor.flow.integrate import H_MAX, FixedPoint
from phasor.geometry import Disk, PathPolyline, Rect, circle_path

SQ2 = Rect(-2, 2, -2, 2)


def _cplx(t):
    return complex(t[0], t[1])


def random_rational(rng):
    nz, npole = rng.integers(1, 4), rng.integers(0, 3)
    z = [complex(*rng.uniform(-1.5, 1.5, 2)) for _ in range(nz)]
    p = [complex(*rng.uniform(-1.5, 1.5, 2)) for _ in range(npole)]
    num = "*".join(f"(z-({a.real}+{a.imag}*i))" for a in z)
    den = "*".join(f"(z-({a.real}+{a.imag}*i))" for a in p) or "1"
    c = complex(*rng.uniform(-2, 2, 2))
    return parse(f"({c.real}+{c.imag}*i)*{num}/({den})")


def random_blaschke(rng, n_max=6, r_max=0.8, sep=0.1):
    while True:
        n = int(rng.integers(2, n_max + 1))
        zs = [r_max * math.sqrt(rng.uniform()) * cmath.exp(2j * math.pi * rng.uniform())
              for _ in range(n)]
        if min(abs(a - b) for i, a in enumerate(zs) for b in zs[i + 1:]) > sep:
            return BlaschkeProduct(tuple(zs), cmath.exp(2j * math.pi * rng.uniform()))


def phase_drift(f, orbit):
    w = np.asarray(f(orbit.points), dtype=complex)
    ph = w / np.abs(w)
    return float(np.max(np.abs(ph - ph[0])))


# field ------------------------------------------------------------------------

def test_field_examples():
    assert flow_field(parse("z"), 1) == pytest.approx(0.5)
    assert flow_field(parse("z"), 0) == 0
    assert flow_field(parse("z^2"), 0.5) == pytest.approx(0.25 / 1.0625, abs=1e-15)
    assert flow_field(parse("1/z"), 0) == 0


def test_field_matches_direct_formula(rng):
    f = parse("(z-1)/(z^2+z+1)")
    df = f.derivative
    z = rng.uniform(-2, 2, 50) + 1j * rng.uniform(-2, 2, 50)
    fz, dfz = f(z), df(z)
    direct = fz * np.conj(dfz) / (np.abs(fz) ** 2 + np.abs(dfz) ** 2)
    assert np.allclose(flow_field(f, z), direct, atol=1e-14)


def test_field_bound(rng):
    for _ in range(10):
        f = random_rational(rng)
        z = rng.uniform(-2, 2, 10_000) + 1j * rng.uniform(-2, 2, 10_000)
        g = flow_field(f, z)
        assert np.all(np.isfinite(g))
        assert np.max(np.abs(g)) <= 0.5 + 1e-12


def test_blaschke_product():
    B = BlaschkeProduct((0.5, (0.5, 1), (-0.2j, 2)))
    assert B.zeros == ((0.5, 2), (-0.2j, 2)) and B.degree == 4
    z = np.exp(1j * np.linspace(0, 6, 50))
    assert np.allclose(np.abs(B(z)), 1)
    w = 0.3 + 0.1j
    num = (B(w + 1e-6) - B(w - 1e-6)) / 2e-6
    assert B.logderiv(w) == pytest.approx(num / B(w), rel=1e-7)
    assert np.allclose(PhaseFlow(B)(np.array([w])), PhaseFlow(B.expr)(np.array([w])), atol=1e-14)
    with pytest.raises(ZeroOutsideDiskError):
        BlaschkeProduct((1.2,))
    with pytest.raises(NonUnimodularError):
        BlaschkeProduct((0.1,), 2.0)


# orbits -----------------------------------------------------------------------

def test_orbit_examples():
    o = integrate_orbit(parse("z"), 0.5, "forward")
    assert o.termination == "exited-domain" and abs(o.end - 1) < 1e-8
    o = integrate_orbit(parse("z"), 0.5, "reversed")
    assert o.termination == "reached-zero" and abs(o.end) < 1e-6
    f = parse("(z-0.5)/(z+0.5)")
    o = integrate_orbit(f, 0.25j, "forward", Disk(0j, 1.0))
    assert o.termination == "reached-pole" and abs(o.end + 0.5) < 1e-6
    assert phase_drift(f, o) <= 1e-5
    with pytest.raises(ValueError):
        integrate_orbit(parse("z"), 0, "forward")
    with pytest.raises(ValueError):
        integrate_orbit(parse("z"), 0.5, "sideways")


def test_orbit_in_rect_domain():
    f = parse("z^2+1")
    o = integrate_orbit(f, 0.3 + 0.2j, "forward", SQ2)
    assert o.termination == "exited-domain"
    end = o.end
    assert abs(abs(end.real) - 2) < 1e-12 or abs(abs(end.imag) - 2) < 1e-12
    assert phase_drift(f, o) <= 1e-5


@settings(max_examples=15, deadline=None)
@given(st.tuples(st.floats(-0.85, 0.85), st.floats(-0.85, 0.85)), st.integers(0, 2**31 - 1))
def test_orbit_invariants(start, seed):
    rng = np.random.default_rng(seed)
    B = random_blaschke(rng, n_max=4)
    z0 = _cplx(start)
    fixed = [(b, "zero") for b, _ in B.zeros]
    if min(abs(z0 - b) for b, _ in B.zeros) < 1e-3 or abs(flow_field(B, z0)) < 1e-6:
        return
    o = integrate_orbit(B, z0, "forward", Disk(0j, 1.0), fixed)
    assert phase_drift(B, o) <= 1e-5
    mod = np.abs(B(o.points))
    assert np.all(np.diff(mod) > -1e-12)
    steps = np.abs(np.diff(o.points))
    assert np.all(steps <= H_MAX * (1 + 1e-9) + 1e-6)


def test_classify_fixed_points():
    rep = classify_fixed_points(parse("((z-0.5)/(1-0.5*z))*((z+0.5)/(1+0.5*z))"), Rect(-1, 1, -1, 1))
    inside = [e for e in rep.entries if abs(e.location) < 1]
    kinds = sorted(e.kind for e in inside)
    assert kinds == ["saddle", "zero", "zero"]
    sad = [e for e in inside if e.kind == "saddle"][0]
    assert abs(sad.location) < 1e-9
    rep = classify_fixed_points(parse("(z-1)/(z^2+z+1)"), SQ2)
    kinds = [e.kind for e in rep.entries]
    assert kinds.count("zero") == 1 and kinds.count("pole") == 2
    # f' = -(z^2 - 2z - 2)/(z^2+z+1)^2 vanishes at 1 -+ sqrt 3
    sad = [e.location for e in rep.entries if e.kind == "saddle"]
    assert len(sad) == 1 and abs(sad[0] - (1 - math.sqrt(3))) < 1e-3
    assert classify_fixed_points(parse("exp(z)"), SQ2).entries == ()


# manifolds --------------------------------------------------------------------

def test_manifolds_symmetric_pair():
    B = BlaschkeProduct((0.5, -0.5))
    rays = unstable_manifolds(B, (0j, 1))
    assert len(rays) == 2
    ends = sorted(o.end.imag for o in rays)
    for o, target in zip(sorted(rays, key=lambda o: o.end.imag), (-1, 1)):
        assert o.termination == "exited-domain"
        assert abs(o.end - 1j * target) < 1e-6
        assert np.max(np.abs(o.points.real)) < 1e-6
    assert ends[0] < 0 < ends[1]


def test_manifolds_z2_plus_1():
    rays = unstable_manifolds(parse("z^2+1"), (0j, 1), SQ2)
    assert len(rays) == 2
    assert sorted(round(o.end.real) for o in rays) == [-2, 2]


def test_manifolds_three_fold_symmetry():
    w = cmath.exp(2j * math.pi / 3)
    B = BlaschkeProduct((0.6, 0.6 * w, 0.6 / w))
    rays = unstable_manifolds(B, (0j, 2))
    ends = sorted(cmath.phase(o.end) % (2 * math.pi) for o in rays)
    assert len(ends) == 3
    gaps = np.diff(ends + [ends[0] + 2 * math.pi])
    assert np.allclose(gaps, 2 * math.pi / 3, atol=1e-6)


def test_seed_classification_error():
    with pytest.raises(SeedClassificationError):
        unstable_manifolds(parse("z^2"), (0j, 1), SQ2)


# basins -----------------------------------------------------------------------

def test_basins_single_zero():
    d = basin_decomposition(BlaschkeProduct(((0.3 + 0.1j, 2),)))
    assert d.s == 1 and d.k == 0
    assert d.arcs[0].end - d.arcs[0].start == pytest.approx(2 * math.pi)
    assert structure_sequence(d) == (1,)


def test_basins_symmetric_pair():
    d = basin_decomposition(BlaschkeProduct((0.5, -0.5)))
    assert d.s == 2
    assert np.allclose(np.array(d.separating_points) / (2 * math.pi), [0.25, 0.75], atol=1e-6)
    assert structure_sequence(d) == (1, 2)


def test_basin_exactness(rng):
    B = BlaschkeProduct((0.5, -0.5))
    r = np.sqrt(rng.uniform(0, 1, 1000))
    z = r * np.exp(2j * np.pi * rng.uniform(0, 1, 1000))
    lab = label_points(B, z)
    # the separatrix is the imaginary axis: zero 0 (at 0.5) owns Re z > 0
    expected = np.where(z.real > 0, 0, 1)
    far = np.abs(z.real) > 1e-3
    assert np.count_nonzero(lab[far] != expected[far]) == 0


def test_basin_grid_labels():
    from phasor.render import Frame

    frame = Frame(-1, 1, -1, 1, 64, 64)
    d = basin_decomposition(BlaschkeProduct((0.5, -0.5)), frame)
    Z = frame.grid()
    lab = d.labels
    assert np.all(lab[np.abs(Z) >= 1] == -1)
    inside = (np.abs(Z) < 1) & (np.abs(Z.real) > 2 * frame.dx)
    assert np.all(lab[inside] == np.where(Z[inside].real > 0, 0, 1))


def test_demo_configuration_sequence():
    d = basin_decomposition(BlaschkeProduct((0.5, 0.5j, -0.6, -0.3 - 0.3j, 0.2 + 0.6j)))
    seq = structure_sequence(d)
    assert seq == (1, 2, 3, 2, 4, 5, 4, 2)
    assert set(seq) == set(range(1, d.m + 1))
    assert d.m <= len(seq) <= d.m + d.k - 1


def test_random_sum_rules(rng):
    for _ in range(5):
        B = random_blaschke(rng)
        d = basin_decomposition(B)
        assert sum(al for _, al in d.saddles) == d.m - 1
        assert sum(beta for _, beta in d.zeros) == B.degree
        assert d.m <= d.s <= max(1, d.m + d.k - 1)
        seq = structure_sequence(d)
        assert set(seq) == set(range(1, d.m + 1))
        for o in d.manifolds:
            assert phase_drift(B, o) <= 1e-5


def test_bound_violation_is_raised():
    # forcing a wrong saddle list breaks the bound check
    with pytest.raises(BoundViolationError):
        basin_decomposition(BlaschkeProduct((0.5, -0.5)), saddles=())


def test_serialize_format():
    d = basin_decomposition(BlaschkeProduct((0.5, -0.5)))
    lines = d.serialize().splitlines()
    assert lines[0] == "ZEROS" and "SADDLES" in lines and lines[-2] == "SEQUENCE"
    i = lines.index("SEPARATING_POINTS")
    assert [float(x) for x in lines[i + 1:i + 3]] == pytest.approx([0.25, 0.75], abs=1e-9)
    assert lines[-1] == "1 2"
    assert d.serialize() == basin_decomposition(BlaschkeProduct((0.5, -0.5))).serialize()


def test_structure_sequence_normalisation():
    from phasor.flow import Arc, BasinDecomposition

    arcs = [Arc(0.5, 1.5, 3), Arc(1.5, 3.0, 1), Arc(3.0, 4.0, 2), Arc(4.0, 0.5 + 2 * math.pi, 1)]
    d = BasinDecomposition(((0.1, 1), (0.2, 1), (0.3, 1)), (), [], (0.5, 1.5, 3.0, 4.0), arcs)
    # raw from angle 0: 1 3 1 2 -> renamed 1 2 1 3 -> minimal rotation
    assert structure_sequence(d) == (1, 2, 1, 3)


# boundary measure -------------------------------------------------------------

def test_boundary_measure_examples():
    circ = circle_path(0, 1, 256)
    w = boundary_phase_measure(parse("z"), circ, 4)
    assert np.allclose(w, 0.25, atol=1e-9)
    w = boundary_phase_measure(parse("z-0.9"), circ, 4)
    assert w.sum() == pytest.approx(1, abs=1e-9)
    assert int(np.argmax(w)) in (0, 3)
    for bins in (1, 3, 7):
        assert boundary_phase_measure(parse("1/z"), circ, bins).sum() == pytest.approx(-1, abs=1e-9)
    with pytest.raises(ValueError):
        boundary_phase_measure(parse("z"), PathPolyline([1, 1j, -1], closed=False), 2)


@settings(max_examples=10, deadline=None)
@given(st.integers(1, 12), st.integers(0, 2**31 - 1))
def test_boundary_measure_sums_to_chrom(bins, seed):
    rng = np.random.default_rng(seed)
    B = random_blaschke(rng, n_max=4, r_max=0.8, sep=0.05)
    w = boundary_phase_measure(B, circle_path(0, 1, 128), bins)
    assert w.sum() == pytest.approx(B.degree, abs=1e-9)
