"""States on the operator fields and commutant closures.

A state is given by a density field: one positive semidefinite matrix
rho(x) per base point, normalized so sum_x tr(rho(x)) w(x) = 1.  It pairs
with an operator field R through

    Phi(R) = sum_x tr(rho(x) R(x)) w(x).

A caveat worth knowing: with non-unit weights the natural adjoint on a
fiber is the weighted one, W^-1 A^H W, and positivity of Phi on elements
R^dagger R is then guaranteed when rho(x) commutes with the weight
diagonal (in particular for the uniform density), not for arbitrary
positive semidefinite rho.  With unit weights every positive
semidefinite density works.

The commutant machinery assembles all fibers into one block-diagonal
matrix (one block per base point) and solves the linear commutation
equations exactly as a nullspace problem.  This is meant for small
ambient dimensions; a guard refuses anything past MAX_TOTAL_DIM.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .groupoid import Groupoid
from .representation import RandomOperator

MAX_TOTAL_DIM = 64

# rank decisions relative to the largest singular value
RANK_TOL = 1e-10


class DensityField:
    """One matrix per base point, sized by the point's fiber dimension.

    Unlike an operator field, the matrices may vary within a class; the
    field lives over points, not classes.
    """

    def __init__(self, groupoid: Groupoid, matrices):
        self.groupoid = groupoid
        mats = []
        for p, x in enumerate(groupoid.space.ids):
            m = len(groupoid.block_points(groupoid.block_index(x)))
            arr = np.asarray(matrices[p], dtype=complex)
            if arr.shape != (m, m):
                raise ValueError(
                    f"point {x}: density shape {arr.shape}, fiber dim is {m}"
                )
            arr = arr.copy()
            arr.flags.writeable = False
            mats.append(arr)
        self.matrices: tuple[np.ndarray, ...] = tuple(mats)

    @classmethod
    def uniform(cls, g: Groupoid) -> "DensityField":
        """Identity on every fiber, scaled to total mass one."""
        z = sum(
            len(g.block_points(g.block_index(x))) * g.space.weight(x)
            for x in g.space.ids
        )
        mats = [
            np.eye(len(g.block_points(g.block_index(x))), dtype=complex) / z
            for x in g.space.ids
        ]
        return cls(g, mats)

    def matrix(self, x: int) -> np.ndarray:
        return self.matrices[self.groupoid.space.index_of(x)]


@dataclass(frozen=True)
class StateReport:
    """Outcome of the four state conditions plus the faithfulness flag."""

    trace_class: bool
    integral: float
    positive: bool
    min_eigenvalue: float
    normalization: float
    faithful: bool


class State:
    """A validated normal state Phi on the operator fields of a groupoid."""

    def __init__(self, density: DensityField, report: StateReport):
        self.density = density
        self.report = report
        self.groupoid = density.groupoid

    @property
    def faithful(self) -> bool:
        return self.report.faithful

    def __repr__(self) -> str:
        return (
            f"State(norm={self.report.normalization!r}, "
            f"faithful={self.report.faithful})"
        )


def make_state(rho: DensityField, norm_tol: float = 1e-9) -> State:
    """Validate a density field and wrap it as a state.

    Checks, per point: finite entries (trace class is automatic in finite
    dimension, but infinities and NaNs are refused), Hermitian symmetry,
    positive semidefiniteness; and globally, finiteness of
    sum_x tr|rho(x)| w(x) and normalization sum_x tr(rho(x)) w(x) = 1
    within ``norm_tol``.  Violations raise ValueError.

    Faithfulness (all fibers strictly positive definite) is recorded as a
    flag, not enforced: a rank-deficient density is a legitimate state
    that simply vanishes somewhere.
    """
    g = rho.groupoid
    integral = 0.0
    total = 0.0
    min_eig = np.inf
    faithful = True
    for x, mat in zip(g.space.ids, rho.matrices):
        w = g.space.weight(x)
        if not np.all(np.isfinite(mat)):
            raise ValueError(f"point {x}: density has non-finite entries")
        scale = max(1.0, float(np.abs(mat).max()))
        if not np.allclose(mat, mat.conj().T, atol=1e-12 * scale, rtol=0.0):
            raise ValueError(f"point {x}: density is not Hermitian")
        eigs = np.linalg.eigvalsh(mat)
        tr = float(np.trace(mat).real)
        if eigs[0] < -1e-12 * max(1.0, tr, float(eigs[-1])):
            raise ValueError(
                f"point {x}: density has negative eigenvalue {eigs[0]:.3e}"
            )
        min_eig = min(min_eig, float(eigs[0]))
        if eigs[0] <= 1e-12 * max(tr, float(eigs[-1])):
            faithful = False
        integral += float(np.abs(eigs).sum()) * w
        total += tr * w
    if not np.isfinite(integral):
        raise ValueError("density is not integrable against the weights")
    if abs(total - 1.0) > norm_tol:
        raise ValueError(f"density normalizes to {total!r}, not 1")
    report = StateReport(
        trace_class=True,
        integral=integral,
        positive=True,
        min_eigenvalue=min_eig,
        normalization=total,
        faithful=faithful,
    )
    return State(DensityField(g, list(rho.matrices)), report)


def expect(state: State, R: RandomOperator) -> complex:
    """Phi(R) = sum_x tr(rho(x) R(x)) w(x)."""
    if not state.groupoid.same_structure(R.groupoid):
        raise ValueError("state and operator live on different groupoids")
    g = state.groupoid
    out = 0.0 + 0.0j
    for x in g.space.ids:
        out += g.space.weight(x) * np.trace(state.density.matrix(x) @ R.fiber(x))
    return complex(out)


@dataclass(frozen=True)
class NCProbabilitySpace:
    """A family of operator fields observed through one state."""

    generators: tuple[RandomOperator, ...]
    state: State

    def __post_init__(self):
        for G in self.generators:
            if not G.groupoid.same_structure(self.state.groupoid):
                raise ValueError("generators and state live on different groupoids")


def big_matrix(R: RandomOperator) -> np.ndarray:
    """All fibers of R as one block-diagonal matrix, one block per point.

    Points of one class repeat their class matrix; the ambient dimension
    is the sum of all fiber dimensions.
    """
    blocks = [R.fiber(x) for x in R.groupoid.space.ids]
    return scipy.linalg.block_diag(*blocks)


def _ambient_dim(g: Groupoid) -> int:
    return sum(len(g.block_points(g.block_index(x))) for x in g.space.ids)


class OperatorBasis:
    """An orthonormal basis (trace inner product) of a space of matrices."""

    def __init__(self, matrices, ambient_dim: int):
        self.matrices: tuple[np.ndarray, ...] = tuple(
            np.asarray(m, dtype=complex) for m in matrices
        )
        self.ambient_dim = int(ambient_dim)

    @property
    def dim(self) -> int:
        return len(self.matrices)

    def project(self, X: np.ndarray) -> np.ndarray:
        out = np.zeros_like(np.asarray(X, dtype=complex))
        for B in self.matrices:
            out += np.vdot(B, X) * B
        return out

    def residual(self, X: np.ndarray) -> float:
        """Frobenius distance of X from the span, relative to max(1, |X|_F)."""
        X = np.asarray(X, dtype=complex)
        r = float(np.linalg.norm(X - self.project(X)))
        return r / max(1.0, float(np.linalg.norm(X)))


def _gather(generators) -> tuple[Groupoid, list[np.ndarray], int]:
    gens = list(generators)
    if not gens:
        raise ValueError("need at least one generator")
    g = gens[0].groupoid
    for G in gens[1:]:
        if not G.groupoid.same_structure(g):
            raise ValueError("generators live on different groupoids")
    D = _ambient_dim(g)
    if D > MAX_TOTAL_DIM:
        raise ValueError(
            f"ambient dimension {D} exceeds MAX_TOTAL_DIM={MAX_TOTAL_DIM}"
        )
    return g, [big_matrix(G) for G in gens], D


def _commutant_basis(mats: list[np.ndarray], D: int, rcond: float) -> list[np.ndarray]:
    # vec is row-major: vec(G X - X G) = (kron(G, I) - kron(I, G^T)) vec(X)
    eye = np.eye(D)
    rows = [np.kron(G, eye) - np.kron(eye, G.T) for G in mats]
    K = np.vstack(rows)
    N = scipy.linalg.null_space(K, rcond=rcond)
    return [N[:, k].reshape(D, D) for k in range(N.shape[1])]


def commutant(generators, rcond: float = RANK_TOL) -> OperatorBasis:
    """Basis of {X : X G = G X for every generator G}, in the ambient matrices.

    The equations are solved in the full matrix algebra over the
    block-diagonal embedding, so the result contains everything that
    commutes, not only block-diagonal solutions.  The basis columns come
    out orthonormal under <A, B> = tr(A^H B).  For the commutant to be
    star-closed, pass a star-closed generating set.
    """
    _, mats, D = _gather(generators)
    return OperatorBasis(_commutant_basis(mats, D, rcond), D)


@dataclass(frozen=True)
class BicommutantReport:
    """Dimensions and containments around a double commutant computation."""

    commutant: OperatorBasis
    bicommutant: OperatorBasis
    span_dim: int
    generator_residual: float
    equals_span: bool


def double_commutant(generators, rcond: float = RANK_TOL) -> BicommutantReport:
    """Commutant of the commutant, with the span comparison made explicit.

    ``span_dim`` is the linear dimension of the generator span;
    ``generator_residual`` measures how far the generators are from the
    bicommutant (they must lie inside it); ``equals_span`` records whether
    the bicommutant is exactly the span, which is the closure statement
    for a unital star-closed generating set.
    """
    _, mats, D = _gather(generators)
    first = _commutant_basis(mats, D, rcond)
    if first:
        second = _commutant_basis(first, D, rcond)
    else:
        # empty commutant cannot happen (identity always commutes); guard anyway
        second = _commutant_basis([np.zeros((D, D))], D, rcond)
    stack = np.stack([G.reshape(-1) for G in mats])
    svals = np.linalg.svd(stack, compute_uv=False)
    span_dim = int(np.sum(svals > RANK_TOL * svals[0])) if svals.size else 0
    bic = OperatorBasis(second, D)
    gen_res = max(bic.residual(G) for G in mats)
    return BicommutantReport(
        commutant=OperatorBasis(first, D),
        bicommutant=bic,
        span_dim=span_dim,
        generator_residual=gen_res,
        equals_span=bic.dim == span_dim,
    )
