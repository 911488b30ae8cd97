import numpy as np
import pytest

from halfline import (
    ContourTooCloseError,
    ZeroEnergyError,
    find_resonances,
    free,
    jost_functions,
    jost_sweep,
    s_matrix,
    square_barrier,
    square_well,
    wave_matrices,
)


def well_pair_oracle(E, depth, R):
    """Single-segment matching formula, written independently."""
    k = np.sqrt(complex(E))
    kappa = np.sqrt(complex(E) + depth)
    phi = np.sin(kappa * R) / kappa
    dphi = np.cos(kappa * R)
    am = np.exp(-1j * k * R) * (phi + dphi / (1j * k)) / 2
    ap = np.exp(+1j * k * R) * (phi - dphi / (1j * k)) / 2
    return am, ap


def test_free_goldens():
    p = jost_functions(free(), 1.0)
    assert p.A_minus == pytest.approx(-0.5j, abs=1e-14)
    assert p.A_plus == pytest.approx(+0.5j, abs=1e-14)
    p4 = jost_functions(free(), 4.0)
    assert abs(p4.A_plus) == pytest.approx(0.25, rel=1e-14)


def test_free_matcher_reduction():
    # the generic matcher must reproduce 1/(+-2i sqrt(E)), not a shortcut
    for E in np.logspace(-2, 2, 50):
        p = jost_functions(free(), E)
        k = np.sqrt(E)
        assert abs(p.A_minus - 1 / (2j * k)) <= 1e-12 * abs(p.A_minus)
        assert abs(p.A_plus + 1 / (2j * k)) <= 1e-12 * abs(p.A_plus)


def test_square_well_matches_oracle():
    V = square_well(10.0, 1.0)
    for E in np.logspace(-2, 2, 50):
        p = jost_functions(V, E)
        am, ap = well_pair_oracle(E, 10.0, 1.0)
        assert abs(p.A_minus - am) <= 1e-9 * abs(am)
        assert abs(p.A_plus - ap) <= 1e-9 * abs(ap)


def test_conjugate_symmetry():
    V = square_well(10.0, 1.0)
    for p in jost_sweep(V, np.logspace(-2, 2, 50)):
        assert abs(p.A_plus - np.conj(p.A_minus)) <= 1e-10 * abs(p.A_plus)


def test_wave_matrix_free_identity():
    for E in (1.0, 7.3):
        w = wave_matrices(free(), E)
        assert w.W_plus == pytest.approx(1.0, abs=1e-12)
        assert w.W_minus == pytest.approx(1.0, abs=1e-12)


def test_unimodularity():
    V = square_well(10.0, 1.0)
    for E in np.logspace(-2, 2, 20):
        w = wave_matrices(V, E)
        assert abs(abs(w.W_plus) - 1.0) <= 1e-10
        assert abs(abs(w.W_minus) - 1.0) <= 1e-10
        assert abs(abs(s_matrix(V, E)) - 1.0) <= 1e-10


def test_s_matrix_free():
    assert s_matrix(free(), 1.0) == pytest.approx(-1.0, abs=1e-12)


def test_s_matrix_high_energy_approach():
    # large-E phase shift for the well: delta ~ depth*R/(2k), so
    # |S + 1| = 2|sin(delta)| ~ depth*R/sqrt(E); frozen from the oracle
    V = square_well(10.0, 1.0)
    s400 = s_matrix(V, 400.0)
    am, ap = well_pair_oracle(400.0, 10.0, 1.0)
    assert s400 == pytest.approx(am / ap, rel=1e-9)
    assert abs(s400 + 1.0) == pytest.approx(0.48782, abs=5e-4)
    # the -1 limit is reached at the asymptotic rate
    vals = [abs(s_matrix(V, E) + 1.0) for E in (4e2, 4e4, 4e6)]
    assert vals[0] > vals[1] > vals[2]
    assert vals[1] == pytest.approx(2 * abs(np.sin(10 / (2 * 200.0))), rel=0.01)
    assert vals[2] < 0.006


def test_zero_energy_guard():
    with pytest.raises(ZeroEnergyError):
        jost_functions(free(), 1e-13)
    with pytest.raises(ValueError):
        jost_functions(square_well(10, 1), -1.0)


# --- resonances ---------------------------------------------------------

BOX = (0.1, 6.0, -2.0, -0.01)


def scan_oracle(depth, R, box):
    """Dense |D| scan plus Newton on D(k) = ik sin(kR kappa) - kappa cos,
    independent of the argument-principle machinery."""

    def D(k):
        k = np.asarray(k, dtype=complex)
        kp = np.sqrt(k * k + depth)
        return 1j * k * np.sin(kp * R) - kp * np.cos(kp * R)

    re = np.linspace(box[0], box[1], 481)
    im = np.linspace(box[2], box[3], 321)
    Z = re[None, :] + 1j * im[:, None]
    W = np.abs(D(Z))
    m = np.ones_like(W, dtype=bool)
    m[1:, :] &= W[1:, :] <= W[:-1, :]
    m[:-1, :] &= W[:-1, :] <= W[1:, :]
    m[:, 1:] &= W[:, 1:] <= W[:, :-1]
    m[:, :-1] &= W[:, :-1] <= W[:, 1:]
    roots = []
    for z0 in Z[m]:
        z = complex(z0)
        for _ in range(60):
            h = 1e-7 * max(1, abs(z))
            step = D(z) / ((D(z + h) - D(z - h)) / (2 * h))
            z -= complex(step)
            if abs(step) < 1e-13:
                break
        if abs(D(z)) < 1e-10 and not any(abs(z - r) < 1e-6 for r in roots):
            if box[0] <= z.real <= box[1] and box[2] <= z.imag <= box[3]:
                roots.append(z)
    return sorted(roots, key=lambda z: z.real)


def test_free_has_no_resonances():
    assert find_resonances(free(), BOX) == []


def test_square_well_resonances_match_scan():
    found = find_resonances(square_well(10.0, 1.0), BOX)
    oracle = scan_oracle(10.0, 1.0, BOX)
    assert len(found) == len(oracle) > 0
    for r, z in zip(found, oracle):
        assert abs(r.k - z) < 1e-6
        assert r.E == pytest.approx(r.k * r.k)


def test_resonance_conjugation():
    # if k0 is a zero then -conj(k0) is one too
    from halfline.jost import _aplus_on

    V = square_well(10.0, 1.0)
    found = find_resonances(V, BOX)
    contour_scale = 1.0  # |A+| is O(0.1..1) on this box
    for r in found:
        assert abs(_aplus_on(V, [-np.conj(r.k)])[0]) < 1e-8 * contour_scale


def test_barrier_winding_consistency():
    found = find_resonances(square_barrier(4.0, 2.0), BOX)
    # count equals the winding number by construction; returned residuals obey the bound
    assert len(found) >= 1
    for r in found:
        assert r.residual < 1e-8
        assert r.k.imag < 0


def test_contour_too_close():
    V = square_well(10.0, 1.0)
    k0 = find_resonances(V, BOX)[0].k
    tight = (k0.real - 0.05, k0.real + 0.05, k0.imag - 1e-9, k0.imag + 0.05)
    with pytest.raises(ContourTooCloseError):
        find_resonances(V, tight)
