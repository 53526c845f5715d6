"""Brute-force and sampling checks, independent of the main computation paths.

Everything here uses LAPACK (``numpy.linalg``) and plain enumeration rather
than the Jacobi kernels, so agreement with :mod:`qfgur.bounds` is a genuine
cross-check. All randomness flows from an explicit seed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import bounds
from .core import MeasurementSet, _random_state, born_vectors, make_projective_measurement
from .errors import BadParameter, DimTooLarge, PoolTooLarge, TooManyStrategies
from .families import gellmann_148, pauli_zx
from .functionals import (
    LhsModel,
    lhs_functional,
    separable_functional,
    zeta_quantum_diagonal,
    zeta_separable,
)
from .majorization import direct_sum, dot_sorted_bound, majorization_slack

BRUTE_MAX_POOL = 18
MAX_STRATEGIES = 10**5
MAX_GRID = 400
DEFAULT_GRID = 200
GRID_SLACK = 1e-3


@dataclass(frozen=True)
class OracleConfig:
    seed: int = 0
    samples: int = 1000
    grid_points: int = DEFAULT_GRID
    tolerance: float = 1e-9

    def __post_init__(self):
        if self.samples < 1:
            raise BadParameter("samples must be >= 1")
        if self.tolerance <= 0:
            raise BadParameter("tolerance must be positive")


def builtin_sets() -> dict[str, MeasurementSet]:
    return {"pauli-zx": pauli_zx(), "gellmann-148": gellmann_148()}


# ---------------------------------------------------------------------------
# subset norms
# ---------------------------------------------------------------------------


def _lambda_max(m):
    return float(np.linalg.eigvalsh(m)[-1])


def brute_subset_norm(mset: MeasurementSet, k: int) -> float:
    """Plain loop over every k-subset of the pooled elements."""
    pool = np.asarray(mset.pool)
    if len(pool) > BRUTE_MAX_POOL:
        raise PoolTooLarge(f"brute force is limited to {BRUTE_MAX_POOL} elements")
    best = -np.inf
    for combo in itertools.combinations(range(len(pool)), k):
        best = max(best, _lambda_max(pool[list(combo)].sum(axis=0)))
    return best


def brute_rank1_norm(mset: MeasurementSet, k: int) -> float:
    """Max over k-subsets of the squared top singular value of the picked basis vectors."""
    if not mset.is_projective:
        raise BadParameter("rank-1 form needs projective measurements")
    vecs = np.concatenate([m.vectors for m in mset])
    if len(vecs) > BRUTE_MAX_POOL:
        raise PoolTooLarge(f"brute force is limited to {BRUTE_MAX_POOL} elements")
    best = -np.inf
    for combo in itertools.combinations(range(len(vecs)), k):
        sigma = np.linalg.svd(vecs[list(combo)].T, compute_uv=False)
        best = max(best, float(sigma[0] ** 2))
    return best


def brute_spectrum_weighted(mset: MeasurementSet, lam, k: int) -> float:
    pool = np.asarray(mset.pool)
    lam = np.sort(np.asarray(lam, dtype=float))[::-1]
    best = -np.inf
    for combo in itertools.combinations(range(len(pool)), k):
        ev = np.linalg.eigvalsh(pool[list(combo)].sum(axis=0))[::-1]
        best = max(best, float(lam @ ev))
    return best


def aligned_hidden_states(mset: MeasurementSet, k: int | None = None, tol: float = 1e-9) -> list:
    """Top eigenvectors of every k-subset sum attaining the maximum (default k = N)."""
    k = len(mset) if k is None else k
    pool = np.asarray(mset.pool)
    sums = [pool[list(c)].sum(axis=0) for c in itertools.combinations(range(len(pool)), k)]
    tops = [np.linalg.eigh(s) for s in sums]
    best = max(w[-1] for w, _ in tops)
    out = []
    for w, v in tops:
        if w[-1] >= best - tol:
            out.append(np.outer(v[:, -1], v[:, -1].conj()))
    return out


# ---------------------------------------------------------------------------
# product-state grids
# ---------------------------------------------------------------------------


def bloch_grid(grid_points: int = DEFAULT_GRID) -> np.ndarray:
    """Qubit kets on an azimuth x polar grid (``grid_points`` x ``grid_points // 2``)."""
    if grid_points > MAX_GRID:
        raise BadParameter(f"grid_points is limited to {MAX_GRID}")
    theta = np.linspace(0.0, np.pi, max(2, grid_points // 2))
    phi = np.linspace(0.0, 2 * np.pi, grid_points, endpoint=False)
    t, f = np.meshgrid(theta, phi, indexing="ij")
    kets = np.stack([np.cos(t / 2), np.exp(1j * f) * np.sin(t / 2)], axis=-1)
    return kets.reshape(-1, 2)


def grid_zeta_separable(alice_set, bob_set, a, permutation=None, grid_points=DEFAULT_GRID, weights=None) -> float:
    """Product-state value of the fine-grained sum, Alice's qubit scanned on a Bloch grid.

    For each grid ket Bob's best response is the top eigenvalue of a 2x2
    Hermitian matrix, taken in closed form, so the result is the exact maximum
    over (grid ket) x (any Bob state).
    """
    if alice_set.dim != 2 or bob_set.dim != 2:
        raise DimTooLarge("the Bloch grid only covers qubits")
    weights = alice_set.weights if weights is None else np.asarray(weights, dtype=float)
    perm = list(range(2)) if permutation is None else list(permutation)
    kets = bloch_grid(grid_points)
    pa = np.stack([alice_set[x].elements[a[x]] for x in range(len(alice_set))])
    pb = np.stack([bob_set[x].elements[perm[a[x]]] for x in range(len(bob_set))])
    coeff = np.einsum("gi,xij,gj->gx", kets.conj(), pa, kets).real * weights
    h = np.einsum("gx,xij->gij", coeff, pb)
    half_trace = 0.5 * (h[:, 0, 0].real + h[:, 1, 1].real)
    radius = np.sqrt((0.5 * (h[:, 0, 0].real - h[:, 1, 1].real)) ** 2 + np.abs(h[:, 0, 1]) ** 2)
    return float(np.max(half_trace + radius))


# ---------------------------------------------------------------------------
# LHS and separable models
# ---------------------------------------------------------------------------


def deterministic_tables(n_settings: int, n_outcomes: int) -> np.ndarray:
    """All ``n_outcomes ** n_settings`` deterministic response tables, shape (T, N, d)."""
    count = n_outcomes**n_settings
    if count > MAX_STRATEGIES:
        raise TooManyStrategies(f"{count} deterministic strategies exceeds {MAX_STRATEGIES}")
    tables = np.zeros((count, n_settings, n_outcomes))
    for t, choice in enumerate(itertools.product(range(n_outcomes), repeat=n_settings)):
        tables[t, np.arange(n_settings), choice] = 1.0
    return tables


def enumerate_lhs_extremal(bob_set: MeasurementSet, hidden_states) -> float:
    """Best steering functional over every deterministic response and hidden state."""
    d = bob_set[0].n_outcomes
    if any(m.n_outcomes != d for m in bob_set):
        raise BadParameter("deterministic enumeration needs equal outcome counts")
    tables = deterministic_tables(len(bob_set), d)
    best = -np.inf
    for sigma in hidden_states:
        q = np.array(born_vectors(sigma, bob_set))  # (N, d)
        best = max(best, float(np.max(np.einsum("txa,xa->t", tables, q))))
    return best


def random_lhs_model(bob_set: MeasurementSet, rng, n_hidden: int, deterministic: bool) -> LhsModel:
    d, n = bob_set[0].n_outcomes, len(bob_set)
    weights = rng.dirichlet(np.ones(n_hidden))
    states = [_random_state(bob_set.dim, rng.choice(["pure", "mixed"]), rng).matrix for _ in range(n_hidden)]
    if deterministic:
        resp = np.zeros((n_hidden, n, d))
        for lam in range(n_hidden):
            resp[lam, np.arange(n), rng.integers(0, d, size=n)] = 1.0
    else:
        resp = rng.dirichlet(np.ones(d), size=(n_hidden, n))
    return LhsModel(weights, states, resp)


def random_separable_ensemble(da: int, db: int, rng, n_terms: int):
    weights = rng.dirichlet(np.ones(n_terms))
    alice = [_random_state(da, rng.choice(["pure", "mixed"]), rng) for _ in range(n_terms)]
    bob = [_random_state(db, rng.choice(["pure", "mixed"]), rng) for _ in range(n_terms)]
    return weights, alice, bob


def random_projective_set(dim: int, n_settings: int, rng) -> MeasurementSet:
    ms = []
    for x in range(n_settings):
        g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        q, _ = np.linalg.qr(g)
        ms.append(make_projective_measurement(list(q.T), f"rand{x}"))
    return MeasurementSet(tuple(ms), label=f"random-{dim}x{n_settings}")


def random_subset_dominance(mset: MeasurementSet, samples: int, rng) -> float:
    """Worst ``s(k) - lambda_max(random k-subset sum)`` over sampled subsets of every size."""
    pool = np.asarray(mset.pool)
    s = bounds.s_sequence(mset)
    worst = np.inf
    for k in range(1, len(pool) + 1):
        for _ in range(samples):
            pick = rng.choice(len(pool), size=k, replace=False)
            worst = min(worst, s[k - 1] - _lambda_max(pool[pick].sum(axis=0)))
    return float(worst)


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------


def _report(suite, config, violations, worst, **extra) -> dict:
    out = {
        "suite": suite,
        "samples": config.samples,
        "violations": int(violations),
        "worst_margin": float(worst),
        "seed": config.seed,
    }
    out.update(extra)
    return out


def sample_majorization_suite(config: OracleConfig, mset: MeasurementSet, w=None) -> dict:
    """Direct-sum Born vectors of random states against the set's W vector (or a supplied one)."""
    rng = np.random.default_rng(config.seed)
    w = bounds.w_vector(mset).components if w is None else np.asarray(w, dtype=float)
    violations, worst = 0, np.inf
    for i in range(config.samples):
        rho = _random_state(mset.dim, "pure" if i % 2 == 0 else "mixed", rng)
        slack = majorization_slack(w, direct_sum(born_vectors(rho, mset)))
        worst = min(worst, slack)
        violations += slack < -config.tolerance
    return _report("majorization", config, violations, worst, set=mset.label)


def appendix_a_suite(config: OracleConfig) -> dict:
    """``P.Q <= W_desc.Q_desc`` for random nonnegative triples with ``P`` weakly majorized by ``W``."""
    rng = np.random.default_rng(config.seed)
    violations, worst = 0, np.inf
    for _ in range(config.samples):
        n = int(rng.integers(1, 9))
        w = rng.exponential(size=n) * (rng.random(size=n) < 0.8)
        # p <= D w elementwise with D doubly stochastic keeps p weakly majorized by w
        perms = [rng.permutation(n) for _ in range(3)]
        mix = rng.dirichlet(np.ones(3))
        p = sum(c * w[perm] for c, perm in zip(mix, perms)) * rng.random(size=n)
        q = rng.exponential(size=n)
        lhs, rhs = dot_sorted_bound(p, q, w)
        margin = rhs - lhs
        worst = min(worst, margin)
        violations += margin < -config.tolerance
    return _report("dot-product", config, violations, worst)


def steering_suite(config: OracleConfig, sets=None, bound: float | None = None) -> dict:
    """Random and extremal LHS models never beat the steering bound."""
    rng = np.random.default_rng(config.seed)
    sets = list((sets or builtin_sets()).values())
    violations, worst = 0, np.inf
    per_set = {}
    override = bound
    for mset in sets:
        bound = bounds.steering_bound(mset) if override is None else override
        hidden = [_random_state(mset.dim, "pure", rng).matrix for _ in range(20)]
        extremal = enumerate_lhs_extremal(mset, hidden)
        saturated = enumerate_lhs_extremal(mset, aligned_hidden_states(mset))
        for value in (extremal, saturated):
            worst = min(worst, bound - value)
            violations += value > bound + config.tolerance
        per_set[mset.label] = {"bound": bound, "extremal_max": extremal, "aligned_max": saturated}
    for i in range(config.samples):
        mset = sets[i % len(sets)]
        bound = bounds.steering_bound(mset) if override is None else override
        model = random_lhs_model(mset, rng, int(rng.integers(1, 5)), deterministic=bool(i % 2))
        value = lhs_functional(model, mset)
        worst = min(worst, bound - value)
        violations += value > bound + config.tolerance
    return _report("steering", config, violations, worst, sets=per_set)


def entanglement_suite(config: OracleConfig, sets=None, bound: float | None = None) -> dict:
    """Random separable ensembles never beat the entanglement bound."""
    rng = np.random.default_rng(config.seed)
    sets = list((sets or builtin_sets()).values())
    violations, worst, best_found = 0, np.inf, {}
    override = bound
    for i in range(config.samples):
        mset = sets[i % len(sets)]
        bound = bounds.entanglement_bound(mset, mset) if override is None else override
        w, ra, rb = random_separable_ensemble(mset.dim, mset.dim, rng, int(rng.integers(1, 5)))
        value = separable_functional(w, ra, rb, mset, mset)
        best_found[mset.label] = float(max(best_found.get(mset.label, -np.inf), value))
        worst = min(worst, bound - value)
        violations += value > bound + config.tolerance
    return _report("entanglement", config, violations, worst, best_separable_found=best_found)


def _random_tuple(mset, rng):
    d = mset[0].n_outcomes
    a = [int(v) for v in rng.integers(0, d, size=len(mset))]
    return a, [int(v) for v in rng.permutation(d)]


def zeta_suite(config: OracleConfig, sets=None, restarts: int = 20, grid_checks: int = 50) -> dict:
    """Separable (seesaw) never beats the all-states value; the seesaw keeps up with the qubit grid.

    ``samples`` outcome tuples and permutations are drawn on ``sets``; the grid
    comparison runs on ``grid_checks`` random qubit sets with one to three
    settings.
    """
    rng = np.random.default_rng(config.seed)
    sets = list((sets or builtin_sets()).values())
    violations, worst = 0, np.inf
    for i in range(config.samples):
        mset = sets[i % len(sets)]
        a, perm = _random_tuple(mset, rng)
        zq = zeta_quantum_diagonal(mset, mset, a, perm)
        zs = zeta_separable(mset, mset, a, perm, restarts=restarts, seed=int(rng.integers(2**31)))
        worst = min(worst, zq - zs)
        violations += zq - zs < -config.tolerance
    grid_worst = np.inf
    for _ in range(grid_checks):
        mset = random_projective_set(2, int(rng.integers(1, 4)), rng)
        a, perm = _random_tuple(mset, rng)
        grid = grid_zeta_separable(mset, mset, a, perm, config.grid_points)
        zq = zeta_quantum_diagonal(mset, mset, a, perm)
        zs = zeta_separable(mset, mset, a, perm, restarts=restarts, seed=int(rng.integers(2**31)))
        m = min(zq - grid, zs - grid + GRID_SLACK)
        grid_worst = min(grid_worst, m)
        violations += m < -config.tolerance
    return _report("zeta", config, violations, min(worst, grid_worst), grid_checks=grid_checks,
                   grid_worst_margin=float(grid_worst))


SUITES = ("majorization", "steering", "entanglement", "zeta")


def run_suite(name: str, config: OracleConfig, sets=None, overrides: dict | None = None) -> list[dict]:
    """Run one named suite (or ``"all"``); returns one report per check.

    ``overrides`` may replace the computed ``steering_bound``,
    ``entanglement_bound`` or ``w_vector`` with externally supplied values,
    which lets a bound file be checked against the samplers.
    """
    sets = sets or builtin_sets()
    overrides = overrides or {}
    if name == "all":
        return [r for s in SUITES for r in run_suite(s, config, sets, overrides)]
    if name == "majorization":
        return [appendix_a_suite(config)] + [
            sample_majorization_suite(config, m, overrides.get("w_vector")) for m in sets.values()
        ]
    if name == "steering":
        return [steering_suite(config, sets, overrides.get("steering_bound"))]
    if name == "entanglement":
        return [entanglement_suite(config, sets, overrides.get("entanglement_bound"))]
    if name == "zeta":
        return [zeta_suite(config, sets)]
    raise BadParameter(f"unknown suite {name!r}")
