"""Named measurement sets used throughout the examples and the CLI."""

import numpy as np

from .core import MeasurementSet, make_projective_measurement
from .errors import BadParameter

R2 = 1.0 / np.sqrt(2.0)


def sigma_z(label="Z"):
    return make_projective_measurement([(1, 0), (0, 1)], label)


def sigma_x(label="X"):
    return make_projective_measurement([(R2, R2), (R2, -R2)], label)


def pauli_zx() -> MeasurementSet:
    """{sigma_z, sigma_x} with outcomes ordered (+1, -1)."""
    return MeasurementSet((sigma_z(), sigma_x()), label="pauli-zx")


def pauli_zx_anti() -> MeasurementSet:
    """{sigma_z, sigma_x} with each basis reversed.

    Paired index-by-index with :func:`pauli_zx` this matches Alice's outcome
    to the anti-correlated outcome the singlet leaves on Bob's side.
    """
    return MeasurementSet(
        (sigma_z().relabel([1, 0], "Z-anti"), sigma_x().relabel([1, 0], "X-anti")),
        label="pauli-zx-anti",
    )


def gellmann_148() -> MeasurementSet:
    """Eigenbases of the Gell-Mann matrices lambda_1, lambda_4, lambda_8.

    lambda_8 is degenerate, so its measurement is fixed to the computational
    basis.
    """
    l1 = make_projective_measurement([(R2, R2, 0), (R2, -R2, 0), (0, 0, 1)], "lambda1")
    l4 = make_projective_measurement([(R2, 0, R2), (R2, 0, -R2), (0, 1, 0)], "lambda4")
    l8 = make_projective_measurement([(1, 0, 0), (0, 1, 0), (0, 0, 1)], "lambda8")
    return MeasurementSet((l1, l4, l8), label="gellmann-148")


def fig2_family(theta: float) -> MeasurementSet:
    """Three qutrit bases; the third is rotated by ``theta`` in the (0, 2) plane."""
    c, s = np.cos(theta), np.sin(theta)
    m1 = make_projective_measurement([(1, 0, 0), (0, 1, 0), (0, 0, 1)], "M1")
    m2 = make_projective_measurement([(1, 0, 0), (0, R2, R2), (0, R2, -R2)], "M2")
    m3 = make_projective_measurement([(c, 0, s), (0, 1, 0), (-s, 0, c)], "M3")
    return MeasurementSet((m1, m2, m3), label=f"fig2:{theta:.12g}")


def fourier_mubs(d: int, n: int) -> MeasurementSet:
    """The first ``n`` mutually unbiased bases of prime dimension ``d`` (n <= d + 1)."""
    if n > d + 1:
        raise BadParameter(f"at most {d + 1} MUBs exist in dimension {d}")
    omega = np.exp(2j * np.pi / d)
    bases = [np.eye(d)]
    for k in range(d):
        basis = [
            np.array([omega ** (k * j * j + m * j) for j in range(d)]) / np.sqrt(d)
            for m in range(d)
        ]
        bases.append(np.array(basis))
    return MeasurementSet(
        tuple(make_projective_measurement(list(b), f"mub{i}") for i, b in enumerate(bases[:n])),
        label=f"mub-{d}x{n}",
    )


BUILTINS = {
    "pauli-zx": pauli_zx,
    "pauli-zx-anti": pauli_zx_anti,
    "gellmann-148": gellmann_148,
}


def builtin_set(name: str) -> MeasurementSet:
    """Resolve ``pauli-zx``, ``pauli-zx-anti``, ``gellmann-148`` or ``fig2:<theta>``."""
    if name.startswith("fig2:"):
        try:
            theta = float(name.split(":", 1)[1])
        except ValueError:
            raise BadParameter(f"bad fig2 angle in {name!r}") from None
        return fig2_family(theta)
    try:
        return BUILTINS[name]()
    except KeyError:
        known = ", ".join(sorted(BUILTINS) + ["fig2:<theta>"])
        raise BadParameter(f"unknown builtin set {name!r} (known: {known})") from None
