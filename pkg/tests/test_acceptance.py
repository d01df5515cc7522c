"""Acceptance gate: ten numbered criteria covering the full pipeline.

Each test checks one criterion at its stated tolerance and prints a PASS line
on success; the conftest summary hook repeats one PASS/FAIL line per
criterion at the end of the run.
"""

import itertools

import numpy as np
import pytest

from qubitflow import (
    GATES,
    LaurentField,
    QubitState,
    apply_gate,
    build_gram,
    charge_basis_fields,
    charge_map,
    check_linear_independence,
    circle_inner_product,
    cphase,
    detect_halos,
    deutsch_jozsa,
    eval_field,
    evaluation_matrix,
    exponent,
    extract_defects,
    factorizable_qubits,
    field_separability,
    inner,
    is_separable_geometric,
    is_separable_tensor,
    make_basis_state,
    make_named_state,
    make_position_config,
    nonsingularity_gap,
    north_pole_classify,
    position_basis_fields,
    position_map,
    qft,
    shor_period_find,
    tensor,
    ternary_exponent,
)
from qubitflow.states import bits_of_index


def random_state(rng, n):
    amps = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return QubitState(n, amps).normalized()


def random_separable(rng, n):
    st = random_state(rng, 1)
    for _ in range(n - 1):
        st = tensor(st, random_state(rng, 1))
    return st


def test_criterion_01_charge_exponents():
    assert exponent("01", 3) == 2
    assert exponent("00", 3) == -4
    assert exponent("10", 3) == -2
    assert exponent("11", 3) == 4
    for d in (2, 3):
        for n in range(1, 11):
            charges = {exponent(bits_of_index(i, n), d) for i in range(2**n)}
            assert len(charges) == 2**n, f"collision at d={d}, n={n}"
    print("criterion 01 (charge exponents, injectivity): PASS")


def test_criterion_02_variable_particle_collision():
    # The one-qubit |0> field and the two-qubit |10> field coincide at d=2.
    assert exponent("10", 2) == exponent("0", 2) == -1
    assert ternary_exponent("20", 2) == -1  # two-qubit string for z^-1
    assert ternary_exponent("01", 2) == -1  # one-qubit |0> padded with absence

    def family(n, d):
        flds = []
        for tau in itertools.product("012", repeat=n):
            if set(tau) == {"1"}:
                continue
            flds.append(LaurentField({ternary_exponent("".join(tau), d): 1.0}))
        return flds

    ok, rank = check_linear_independence(family(2, 2))
    assert not ok and rank < 8
    for n in range(1, 7):
        flds = family(n, 3)
        assert len(flds) == 3**n - 1
        ok, rank = check_linear_independence(flds)
        assert ok and rank == 3**n - 1, f"dependent at n={n}"
    print("criterion 02 (d=2 collision, d=3 independence to n=6): PASS")


def test_criterion_03_position_independence():
    cfg2 = make_position_config(2)  # d=1, defects (-1, 1)
    ok, _ = check_linear_independence(position_basis_fields(cfg2))
    assert ok
    cfg4 = make_position_config(4)  # d=3, defects (-1, i, 1, -i)
    ok, _ = check_linear_independence(position_basis_fields(cfg4))
    assert ok
    cfg3 = make_position_config(3, d=1)
    ok, rank = check_linear_independence(position_basis_fields(cfg3))
    assert not ok and rank == 6

    m2 = evaluation_matrix(cfg2, (0j, 1j, 2j, 3j))
    assert nonsingularity_gap(m2) >= 1e-6
    grid = [complex(x + 0.5, y - 0.5) for y in range(4) for x in range(4)]
    m4 = evaluation_matrix(cfg4, grid)
    assert m4.shape == (16, 16)
    assert nonsingularity_gap(m4) >= 1e-6
    print("criterion 03 (position independence, nonsingular sample matrices): PASS")


def test_criterion_04_gram_inner_product():
    rng = np.random.default_rng(99)
    pairs_per_n = {1: 20, 2: 40, 3: 40}  # 100 random pairs in total
    for n in (1, 2, 3):
        cfg = make_position_config(n)
        ctx = build_gram(cfg)
        basis = position_basis_fields(cfg)
        b = np.array([ctx.pi(f) for f in basis]).T
        gram = b.conj().T @ ctx.weight @ b
        assert np.max(np.abs(gram - np.eye(2**n))) < 1e-8
        for _ in range(pairs_per_n[n]):
            psi, phi = random_state(rng, n), random_state(rng, n)
            want = np.vdot(psi.amplitudes, phi.amplitudes)
            got = inner(position_map(psi, cfg), position_map(phi, cfg), ctx)
            assert abs(got - want) < 1e-7

    cfg = make_position_config(2)
    ctx = build_gram(cfg)

    def norm_of(state):
        v = ctx.pi(position_map(state, cfg))
        return float(np.sqrt(abs(np.vdot(v, ctx.weight @ v))))

    for name in ("H", "X", "Y", "Z", "SX", "S"):
        for target in (1, 2):
            st = random_state(rng, 2)
            out = apply_gate(st, GATES[name], [target])
            assert abs(norm_of(out) - norm_of(st)) < 1e-7, name
    st = random_state(rng, 2)
    assert abs(norm_of(apply_gate(st, cphase(0.7), [1, 2])) - norm_of(st)) < 1e-7
    assert abs(norm_of(qft(st)) - norm_of(st)) < 1e-7
    print("criterion 04 (orthonormal Gram, amplitude agreement, unitary norms): PASS")


def test_criterion_05_circle_inner_product():
    for n in (1, 2, 3):
        basis = charge_basis_fields(n, 3)
        for i, fi in enumerate(basis):
            for j, fj in enumerate(basis):
                got = circle_inner_product(fi, fj)
                want = 1.0 if i == j else 0.0
                assert abs(got - want) < 1e-12
    plus = charge_map(make_named_state("bell00+", 2))
    minus = charge_map(make_named_state("bell00-", 2))
    assert abs(circle_inner_product(plus, minus)) < 1e-12
    print("criterion 05 (circle quadrature orthonormality): PASS")


def test_criterion_06_separability_detection():
    cfg3 = make_position_config(3)
    for i in range(8):
        st = qft(make_basis_state(3, bits_of_index(i, 3)))
        sep, _ = is_separable_geometric(st, cfg3)
        assert sep, f"QFT|{bits_of_index(i, 3)}> not recognized"
        report = detect_halos(extract_defects(position_map(st, cfg3)), cfg3)
        regular = [h for h in report.halos if h.status == "regular"]
        for h in regular:
            assert len(h.vertices) == 6
            radii = [abs(v - h.center) for v in h.vertices]
            assert np.allclose(radii, np.mean(radii), atol=1e-6)
        assert len(regular) == 3
    cfg2 = make_position_config(2)
    assert not is_separable_geometric(make_named_state("ghz", 3), cfg3)[0]
    assert not is_separable_geometric(make_named_state("w", 3), cfg3)[0]
    for name in ("bell00+", "bell00-", "bell01+", "bell01-"):
        assert not is_separable_geometric(make_named_state(name, 2), cfg2)[0]

    rng = np.random.default_rng(7)
    disagreements = 0
    for k in range(200):
        n = 2 if k % 2 == 0 else 3
        cfg = cfg2 if n == 2 else cfg3
        sep_state = random_separable(rng, n)
        if is_separable_geometric(sep_state, cfg)[0] != is_separable_tensor(sep_state):
            disagreements += 1
        generic = random_state(rng, n)
        if is_separable_geometric(generic, cfg)[0] != is_separable_tensor(generic):
            disagreements += 1
    assert disagreements == 0
    print("criterion 06 (halo separability detector, 400-state agreement): PASS")


def test_criterion_07_deutsch_jozsa():
    result = deutsch_jozsa([0, 0, 0, 1, 1, 1, 1, 0])
    assert factorizable_qubits(result.post_oracle_inputs) == (1,)
    assert abs(result.final_inputs.amplitude("000")) < 1e-12
    assert result.all_zero_probability < 1e-12
    print("criterion 07 (Deutsch-Jozsa balanced oracle): PASS")


def test_criterion_08_shor_period_finding():
    r2 = shor_period_find([1, 3, 1, 3])
    assert set(np.nonzero(r2.measurement_distribution > 1e-12)[0]) == {0, 2}
    assert abs(r2.measurement_distribution.sum() - 1.0) < 1e-12
    r4 = shor_period_find([1, 2, 0, 3])
    assert set(np.nonzero(r4.measurement_distribution > 1e-12)[0]) == {0, 1, 2, 3}
    assert abs(r4.measurement_distribution.sum() - 1.0) < 1e-12
    rc = shor_period_find([2, 2, 2, 2])
    assert set(np.nonzero(rc.measurement_distribution > 1e-12)[0]) == {0}
    assert abs(rc.measurement_distribution.sum() - 1.0) < 1e-12
    print("criterion 08 (period-finding measurement support): PASS")


def test_criterion_09_north_pole_asymptotics():
    cfg = make_position_config(3)
    for i in range(8):
        bits = bits_of_index(i, 3)
        f = position_map(make_basis_state(3, bits), cfg)
        degree = 6 * sum(int(b) for b in bits) - 9
        report = north_pole_classify(f)
        assert report.degree == degree
        assert abs(report.fitted_exponent - (2 - degree)) < 0.1
        want = "vanishes" if degree < 2 else "diverges"
        assert report.category == want
    print("criterion 09 (stereographic north-pole exponents): PASS")


def test_criterion_10_halo_geometry():
    cfg = make_position_config(2)
    plus = QubitState(1, np.array([1.0, 1.0]) / np.sqrt(2))
    st = tensor(plus, make_basis_state(1, "0"))
    field = position_map(st, cfg)
    report = detect_halos(extract_defects(field), cfg)
    by_center = {h.center: h for h in report.halos}
    left = by_center[-1 + 0j]
    assert left.status == "regular"
    got = sorted(left.vertices, key=lambda z: z.imag)
    assert abs(got[0] - (-1 - 1j)) < 1e-8
    assert abs(got[1] - (-1 + 1j)) < 1e-8
    assert by_center[1 + 0j].status == "at-infinity"

    sep, witness = field_separability(field, cfg)
    assert sep
    zs = [0.5 + 0.3j, -2.1 + 0.4j, 1.3 - 1.7j, 0.2 - 2.5j]
    vals = np.array([eval_field(field, z)[0] for z in zs])
    rebuilt = np.array(
        [
            np.prod(
                [
                    (a + b * (z - c) ** (2 * cfg.d)) / (z - c) ** cfg.d
                    for (a, b), c in zip(witness, cfg.defects)
                ]
            )
            for z in zs
        ]
    )
    lam = np.vdot(rebuilt, vals) / np.vdot(rebuilt, rebuilt)
    assert np.max(np.abs(vals - lam * rebuilt)) < 1e-8 * np.max(np.abs(vals))
    print("criterion 10 (halo vertices, witness reconstruction): PASS")
