import numpy as np
import pytest

import anyonops as ao


@pytest.fixture(scope="module")
def fib3():
    return ao.LadderSet(ao.Model.builtin("fibonacci"), 3)


def test_builtins_validate():
    assert {"fibonacci", "fermion", "ising"} <= set(ao.builtin_names())
    for name in ("fibonacci", "fermion", "ising"):
        ok, checks = ao.Model.builtin(name).validate()
        assert ok
        assert checks["pentagon"][1] < 1e-10


def test_golden_ratio_f_symbol():
    phi = (1 + 5 ** 0.5) / 2
    m = ao.Model.builtin("fibonacci")
    assert abs(m.f_symbol("tau", "tau", "tau", "tau", "e", "e") - 1 / phi) < 1e-12


def test_fermion_car():
    s = ao.LadderSet(ao.Model.builtin("fermion"), 3)
    f = [s.annihilator("psi", k) for k in (1, 2, 3)]
    eye = np.eye(s.dim)
    for i, a in enumerate(f):
        for j, b in enumerate(f):
            assert np.abs(a @ b.conj().T + b.conj().T @ a - (eye if i == j else 0)).max() < 1e-12
            assert np.abs(a @ b + b @ a).max() < 1e-12


def test_fibonacci_ladder(fib3):
    assert fib3.dim == 13
    assert fib3.count("tau") == 2
    for k in (1, 2, 3):
        alpha, beta = fib3.fibonacci_pair(k)
        assert np.abs(alpha @ alpha).max() < 1e-12
        assert np.abs(alpha @ alpha.conj().T - beta @ beta.conj().T).max() < 1e-12


def _prefix_observable(ladder_set, rng):
    # Hermitian block per charge of the first two leaves, identity elsewhere.
    states = ladder_set.states()
    n = len(states)
    blocks = {}
    op = np.zeros((n, n), complex)
    for r, (lr, ir, tr) in enumerate(states):
        for c, (lc, ic, tc) in enumerate(states):
            if ir[0] != ic[0] or lr[2] != lc[2] or tr != tc:
                continue
            key = (tuple(lr[:2]), tuple(lc[:2]))
            if key not in blocks:
                z = rng.normal() + (1j * rng.normal() if key[0] != key[1] else 0)
                blocks[key] = z
                blocks[(key[1], key[0])] = np.conj(z)
            op[r, c] = blocks[key]
    return op


def test_decompose_round_trip(fib3):
    rng = np.random.default_rng(7)
    op = _prefix_observable(fib3, rng)
    out = ao.decompose(fib3, op, [1, 2])
    assert out["method"] == "elements"
    assert np.abs(out["matrix"] - op).max() < 1e-9
    ident = ao.decompose(fib3, np.eye(13), [1])
    assert ident["polynomial"] == "1"


def test_charge_violation_rejected(fib3):
    op = np.zeros((13, 13))
    op[0, 5] = op[5, 0] = 1.0
    with pytest.raises(ao.NotObservableError):
        ao.decompose(fib3, op, [1, 2])


def test_relations_and_fock(fib3):
    rel = ao.verify_relations(fib3)
    assert all(r["passed"] for r in rel if r["asserted"])
    assert sum(r["asserted"] for r in rel) == 6
    words = ao.fock_words(fib3)
    assert len(words) == 13 and max(r for _, r in words) < 1e-10
    assert ao.kernel_dimension(fib3) == 1


def test_hubbard():
    h = ao.hubbard_hamiltonian(2, t=1.0, mu=0.3)
    assert h.shape == (34, 34)
    assert np.abs(h - h.conj().T).max() < 1e-12
    dim_e, eig_e = ao.hubbard_spectrum(2, sector="e")
    dim_t, eig_t = ao.hubbard_spectrum(2, sector="tau")
    assert (dim_e, dim_t) == (13, 21)
    full = np.sort(np.linalg.eigvalsh(ao.hubbard_hamiltonian(2)))
    assert np.allclose(np.sort(eig_e + eig_t), full, atol=1e-10)
    with pytest.raises(ValueError):
        ao.hubbard_spectrum(0)
