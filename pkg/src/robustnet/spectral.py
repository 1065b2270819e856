"""Symmetric eigensolvers over adjacency and Laplacian matrices.

Two routes: a dense full-spectrum path (LAPACK ``eigh``) used as the exact
backend at desk scale, and an iterative Lanczos path for partial top-k /
bottom-k spectra.  Bottom-k Laplacian pairs come from running the top-k solver
on the shifted matrix c*I - L with c above the Gershgorin bound 2*max_degree,
which avoids any factorization machinery.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.linalg import eigh_tridiagonal

from .errors import ContractError, ConvergenceError, ParameterError
from .graph import Graph

DENSE_CUTOFF = 2000


@dataclass(frozen=True)
class SolverConfig:
    """Knobs for the iterative path.  ``seed`` fixes the start vectors so runs
    are reproducible; ``k`` is the requested pair count."""

    tol: float = 1e-8
    max_iter: int = 5000
    k: int = 1
    seed: int = 0

    def validate(self, n: int) -> None:
        if self.tol <= 0:
            raise ParameterError(f"tol must be positive, got {self.tol}")
        if not 1 <= self.k <= n:
            raise ParameterError(f"k must lie in [1, {n}], got {self.k}")


@dataclass(frozen=True)
class SpectrumResult:
    """Eigenvalue/eigenvector bundle.

    ``eigenvalues`` are sorted descending for adjacency spectra and ascending
    for Laplacian spectra; eigenvector columns match and are unit-norm with the
    largest-magnitude entry made positive.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None
    matrix_kind: str  # "adjacency" | "laplacian"
    k_used: int


def node_index(g: Graph) -> dict[int, int]:
    return {v: i for i, v in enumerate(g.nodes())}


def adjacency_matrix(g: Graph, sparse: bool = False):
    idx = node_index(g)
    if sparse:
        rows, cols = [], []
        for u, v in g.edges():
            rows += [idx[u], idx[v]]
            cols += [idx[v], idx[u]]
        data = np.ones(len(rows))
        return sp.csr_matrix((data, (rows, cols)), shape=(g.n, g.n))
    a = np.zeros((g.n, g.n))
    for u, v in g.edges():
        a[idx[u], idx[v]] = 1.0
        a[idx[v], idx[u]] = 1.0
    return a


def laplacian_matrix(g: Graph, sparse: bool = False):
    degs = np.array([g.degree(v) for v in g.nodes()], dtype=float)
    if sparse:
        a = adjacency_matrix(g, sparse=True)
        return sp.diags(degs).tocsr() - a
    return np.diag(degs) - adjacency_matrix(g)


def _fix_signs(vecs: np.ndarray) -> np.ndarray:
    """Flip each column so its largest-magnitude entry is positive."""
    out = vecs.copy()
    for j in range(out.shape[1]):
        i = int(np.argmax(np.abs(out[:, j])))
        if out[i, j] < 0:
            out[:, j] = -out[:, j]
    return out


def dense_symmetric_eigen(matrix: np.ndarray, matrix_kind: str = "adjacency",
                          cutoff: int = DENSE_CUTOFF) -> SpectrumResult:
    """Full spectrum of a real symmetric matrix via LAPACK.

    Serves as the exact oracle for every spectral measure at desk scale; the
    iterative path is checked against it.
    """
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ContractError(f"matrix must be square, got shape {m.shape}")
    n = m.shape[0]
    if n > cutoff:
        raise ContractError(f"dense path limited to n <= {cutoff}, got {n}")
    if n > 0 and np.max(np.abs(m - m.T)) > 1e-12:
        raise ContractError("matrix is not symmetric within 1e-12")
    if n == 0:
        return SpectrumResult(np.empty(0), np.empty((0, 0)), matrix_kind, 0)
    vals, vecs = np.linalg.eigh(m)
    if matrix_kind == "adjacency":
        vals = vals[::-1]
        vecs = vecs[:, ::-1]
    return SpectrumResult(np.ascontiguousarray(vals), _fix_signs(vecs), matrix_kind, n)


def adjacency_spectrum(g: Graph, cutoff: int = DENSE_CUTOFF) -> SpectrumResult:
    return dense_symmetric_eigen(adjacency_matrix(g), "adjacency", cutoff)


def laplacian_spectrum(g: Graph, cutoff: int = DENSE_CUTOFF) -> SpectrumResult:
    return dense_symmetric_eigen(laplacian_matrix(g), "laplacian", cutoff)


# -- Lanczos ------------------------------------------------------------------


class _Workspace:
    """Growing column store with fast orthogonalization against its span."""

    def __init__(self, n: int):
        self.n = n
        self.cols = np.empty((n, 0))

    @property
    def size(self) -> int:
        return self.cols.shape[1]

    def append(self, v: np.ndarray) -> None:
        self.cols = np.column_stack([self.cols, v])

    def project_out(self, w: np.ndarray) -> np.ndarray:
        if self.size:
            w = w - self.cols @ (self.cols.T @ w)
        return w


def _fresh_direction(n, rng, *spans):
    """Random unit vector orthogonal to the given spans, or None if they
    already fill the space."""
    for _ in range(3):
        v = rng.standard_normal(n)
        for span in spans:
            v = span.project_out(v)
            v = span.project_out(v)
        norm = np.linalg.norm(v)
        if norm > 1e-8 * np.sqrt(n):
            return v / norm
    return None


def _krylov_pass(a, deflate: _Workspace, rng, steps: int, breakdown_tol: float):
    """One fully reorthogonalized Lanczos recurrence, deflated against
    ``deflate``.

    On breakdown (the current cyclic subspace is exhausted) the recurrence
    restarts with a fresh orthogonal direction so repeated eigenvalues are
    still reachable.  Returns Ritz values (descending), Ritz vectors, and
    whether the deflated complement was exhausted entirely.
    """
    n = a.shape[0]
    limit = min(steps, n - deflate.size)
    basis = _Workspace(n)
    exhausted = False
    if limit <= 0:
        return np.empty(0), np.empty((n, 0)), True

    q = _fresh_direction(n, rng, deflate)
    if q is None:
        return np.empty(0), np.empty((n, 0)), True
    basis.append(q)
    alphas: list[float] = []
    betas: list[float] = []
    q_prev = np.zeros(n)
    beta_prev = 0.0
    while len(alphas) < limit:
        w = a @ q
        alpha = float(q @ w)
        alphas.append(alpha)
        if len(alphas) == limit:
            break
        w = w - alpha * q - beta_prev * q_prev
        # Full reorthogonalization, applied twice: one pass is not enough to
        # keep the basis orthogonal over hundreds of steps.
        w = basis.project_out(w)
        w = deflate.project_out(w)
        w = basis.project_out(w)
        w = deflate.project_out(w)
        beta = float(np.linalg.norm(w))
        if beta <= breakdown_tol:
            fresh = _fresh_direction(n, rng, basis, deflate)
            if fresh is None:
                exhausted = True
                break
            betas.append(0.0)
            q_prev = q
            beta_prev = 0.0
            q = fresh
        else:
            betas.append(beta)
            q_prev = q
            beta_prev = beta
            q = w / beta
        basis.append(q)

    vals, s = eigh_tridiagonal(np.array(alphas), np.array(betas[: len(alphas) - 1]))
    order = np.argsort(vals)[::-1]
    ritz_vals = vals[order]
    ritz_vecs = basis.cols[:, : len(alphas)] @ s[:, order]
    return ritz_vals, ritz_vecs, exhausted


def _lanczos_topk(a, k: int, cfg: SolverConfig):
    """k largest (algebraic) eigenpairs of a sparse symmetric matrix.

    Converged pairs are locked in and deflated away; after k pairs are in
    hand, probe passes over the deflated complement verify that no remaining
    eigenvalue beats the smallest accepted one.  The probes are what make
    repeated eigenvalues come out with their full multiplicity, which a
    single Krylov space cannot deliver.
    """
    n = a.shape[0]
    rng = np.random.default_rng(cfg.seed)
    scale = max(1.0, float(np.abs(a).sum(axis=1).max()))  # infinity norm
    conv_tol = cfg.tol * scale
    order_slack = max(conv_tol, 1e-10 * scale)
    breakdown_tol = 1e-10 * scale

    accepted_vals: list[float] = []
    deflate = _Workspace(n)
    iters_left = cfg.max_iter
    best_residual = np.inf

    def residual(theta: float, y: np.ndarray) -> float:
        return float(np.linalg.norm(a @ y - theta * y))

    def harvest(want: int, steps: int):
        """Run one pass and lock in the converged leading Ritz pairs."""
        nonlocal iters_left, best_residual
        vals, vecs, exhausted = _krylov_pass(a, deflate, rng, steps, breakdown_tol)
        iters_left -= len(vals)
        taken = 0
        for j in range(min(len(vals), want)):
            res = residual(float(vals[j]), vecs[:, j])
            best_residual = min(best_residual, res)
            if res > conv_tol and not exhausted:
                break
            y = deflate.project_out(vecs[:, j])
            norm = np.linalg.norm(y)
            if norm < 0.5:  # degenerate with an accepted vector; skip
                continue
            deflate.append(y / norm)
            accepted_vals.append(float(vals[j]))
            taken += 1
        return taken, exhausted

    steps = min(n, max(2 * k + 20, 40))
    while len(accepted_vals) < k:
        taken, exhausted = harvest(k - len(accepted_vals), min(steps, max(iters_left, 1)))
        if len(accepted_vals) >= k:
            break
        if exhausted and taken == 0:
            raise ConvergenceError("eigenspace exhausted before k pairs converged", best_residual)
        if taken == 0:
            steps = min(n, steps * 2)
            if iters_left <= 0:
                raise ConvergenceError(
                    f"no convergence within max_iter={cfg.max_iter}", best_residual)

    # Order-verification probes: does anything in the complement beat our
    # smallest accepted value?  If so, swap it in and re-probe.
    for _ in range(n):
        if deflate.size >= n or iters_left <= 0:
            break
        vals, vecs, _ = _krylov_pass(a, deflate, rng, min(n, max(40, 2 * k), max(iters_left, 1)),
                                     breakdown_tol)
        iters_left -= len(vals)
        if len(vals) == 0:
            break
        theta = float(vals[0])
        if residual(theta, vecs[:, 0]) > conv_tol:
            continue  # probe not converged; try again with the budget left
        floor = min(accepted_vals)
        if theta > floor + order_slack:
            drop = accepted_vals.index(floor)
            y = vecs[:, 0] / np.linalg.norm(vecs[:, 0])
            cols = np.delete(deflate.cols, drop, axis=1)
            deflate.cols = np.column_stack([cols, y])
            accepted_vals.pop(drop)
            accepted_vals.append(theta)
        else:
            break

    order = np.argsort(accepted_vals)[::-1][:k]
    vals = np.array([accepted_vals[i] for i in order])
    vecs = deflate.cols[:, order]
    return vals, vecs


def top_k_adjacency(g: Graph, cfg: SolverConfig) -> SpectrumResult:
    """k largest adjacency eigenvalues (algebraic order) with eigenvectors."""
    if g.n == 0:
        raise ParameterError("graph is empty")
    cfg.validate(g.n)
    k = cfg.k
    if k == g.n:
        full = adjacency_spectrum(g)
        return SpectrumResult(full.eigenvalues[:k], full.eigenvectors[:, :k], "adjacency", k)
    a = adjacency_matrix(g, sparse=True)
    vals, vecs = _lanczos_topk(a, k, cfg)
    return SpectrumResult(vals, _fix_signs(vecs), "adjacency", k)


def bottom_k_laplacian(g: Graph, cfg: SolverConfig) -> SpectrumResult:
    """k smallest Laplacian eigenvalues (zero mode included) with eigenvectors."""
    if g.n == 0:
        raise ParameterError("graph is empty")
    cfg.validate(g.n)
    k = cfg.k
    if k == g.n:
        full = laplacian_spectrum(g)
        return SpectrumResult(full.eigenvalues[:k], full.eigenvectors[:, :k], "laplacian", k)
    lap = laplacian_matrix(g, sparse=True)
    shift = 2.0 * g.max_degree() + 1.0
    b = (sp.identity(g.n, format="csr") * shift - lap).tocsr()
    theta, vecs = _lanczos_topk(b, k, cfg)
    mus = shift - theta  # ascending because theta was descending
    return SpectrumResult(mus, _fix_signs(vecs), "laplacian", k)
