import numpy as np
import pytest

from qpa import preset, random_cq, tensor_power

PRESET_NAMES = ["copy", "product", "tilted-qubit", "bb84(0.39269908169872414)", "depolarized(0.3)"]


@pytest.fixture(scope="session")
def preset_states():
    return {name: preset(name) for name in PRESET_NAMES}


@pytest.fixture(scope="session")
def corpus_states(preset_states):
    """Presets, their in-cap 2-fold powers, and 20 seeded random states."""
    out = dict(preset_states)
    for name, st in preset_states.items():
        if st.alphabet_size == 2 and st.eve_dim == 2:
            out[f"{name}^2"] = tensor_power(st, 2)
    for i in range(20):
        d_e = 2 if i % 2 == 0 else 3
        out[f"random{i}"] = random_cq(i, 4, d_e)
    return out


def random_psd(rng, dim, scale=1.0):
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return scale * (g @ g.conj().T)


def random_kraus(rng, dim, n_ops=2):
    """Random trace-preserving Kraus set from an orthonormalized stacked matrix."""
    g = rng.normal(size=(dim * n_ops, dim)) + 1j * rng.normal(size=(dim * n_ops, dim))
    q, _ = np.linalg.qr(g)
    return [q[i * dim : (i + 1) * dim, :] for i in range(n_ops)]
