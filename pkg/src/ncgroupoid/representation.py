"""The regular representation: algebra elements as fields of matrices.

Over each point x sits a finite Hilbert space of functions on the arrows
ending there, identified with functions on the points of its class, with
the weighted inner product <psi, phi> = sum_z conj(psi(z)) phi(z) w(z).
An algebra element a acts fiberwise by

    (a . psi)(z) = sum_u a(z, u) psi(u) w(u),

i.e. by the matrix M[i, j] = a(z_i, z_j) w(z_j) in the point basis of the
class.  The assignment x -> M is constant on classes by construction (the
fibers of one class share a single matrix object), which at a finite
number of points is exactly what measurability of the field amounts to.
The operator field is bounded by its largest fiber norm, the essential
supremum with respect to the atomic measure (every point has positive
weight, so no fiber is negligible).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import AlgebraElement, convolve, involution
from .groupoid import Groupoid


@dataclass(frozen=True)
class FiberSpace:
    """The Hilbert space over one base point: its class, with quadrature weights."""

    base: int
    basis: tuple[int, ...]
    weights: tuple[float, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)


def fiber_space(g: Groupoid, x: int) -> FiberSpace:
    b = g.block_index(x)
    return FiberSpace(
        base=x,
        basis=g.block_points(b),
        weights=tuple(g.block_weights(b)),
    )


class RandomOperator:
    """A measurable field of fiber operators, one matrix per class.

    ``fiber(x)`` returns the matrix acting on the Hilbert space over x;
    points of one class return the very same array object.
    """

    def __init__(self, groupoid: Groupoid, class_matrices):
        self.groupoid = groupoid
        mats = []
        for b, block in enumerate(groupoid.blocks):
            m = len(block)
            arr = np.asarray(class_matrices[b], dtype=complex)
            if arr.shape != (m, m):
                raise ValueError(f"block {b}: matrix shape {arr.shape}, need ({m}, {m})")
            arr = arr.copy()
            arr.flags.writeable = False
            mats.append(arr)
        self.class_matrices: tuple[np.ndarray, ...] = tuple(mats)

    @classmethod
    def identity(cls, g: Groupoid) -> "RandomOperator":
        return cls(g, [np.eye(len(b), dtype=complex) for b in g.blocks])

    @classmethod
    def zeros(cls, g: Groupoid) -> "RandomOperator":
        return cls(g, [np.zeros((len(b), len(b)), dtype=complex) for b in g.blocks])

    def fiber(self, x: int) -> np.ndarray:
        return self.class_matrices[self.groupoid.block_index(x)]

    @property
    def fibers(self) -> dict[int, np.ndarray]:
        return {x: self.fiber(x) for x in self.groupoid.space.ids}

    def _binary(self, other, op):
        if not isinstance(other, RandomOperator):
            return NotImplemented
        if not self.groupoid.same_structure(other.groupoid):
            raise ValueError("operators live on different groupoids")
        return RandomOperator(
            self.groupoid,
            [op(a, b) for a, b in zip(self.class_matrices, other.class_matrices)],
        )

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __matmul__(self, other):
        return self._binary(other, lambda a, b: a @ b)

    def __mul__(self, scalar):
        c = complex(scalar)
        return RandomOperator(self.groupoid, [m * c for m in self.class_matrices])

    __rmul__ = __mul__

    def adjoint(self) -> "RandomOperator":
        """Adjoint with respect to the weighted inner product: W^-1 A^H W."""
        mats = []
        for b, A in enumerate(self.class_matrices):
            w = self.groupoid.block_weights(b)
            mats.append(A.conj().T * w[None, :] / w[:, None])
        return RandomOperator(self.groupoid, mats)

    def ess_sup(self) -> float:
        """Largest fiber operator norm; see the module docstring."""
        return max(float(np.linalg.norm(m, 2)) for m in self.class_matrices)

    def max_fiber_diff(self, other: "RandomOperator") -> float:
        """Largest operator-norm distance between corresponding fibers."""
        if not self.groupoid.same_structure(other.groupoid):
            raise ValueError("operators live on different groupoids")
        return max(
            float(np.linalg.norm(a - b, 2))
            for a, b in zip(self.class_matrices, other.class_matrices)
        )

    def __repr__(self) -> str:
        dims = [m.shape[0] for m in self.class_matrices]
        return f"RandomOperator(fiber dims {dims})"


def represent(a: AlgebraElement) -> RandomOperator:
    """The regular representation M[i, j] = a(z_i, z_j) w(z_j), per class."""
    g = a.groupoid
    mats = []
    for b in range(g.n_blocks):
        w = g.block_weights(b)
        mats.append(np.asarray(a.values[b], dtype=complex) * w[None, :])
    return RandomOperator(g, mats)


def homomorphism_defect(a: AlgebraElement, b: AlgebraElement) -> float:
    """max fiber norm of represent(a * b) - represent(a) represent(b).

    Zero in exact arithmetic: with W the weight diagonal, representing
    means right-multiplying by W, and (A W B) W = (A W)(B W).
    """
    lhs = represent(convolve(a, b))
    rhs = represent(a) @ represent(b)
    return lhs.max_fiber_diff(rhs)


def star_defect(a: AlgebraElement) -> float:
    """max fiber norm of represent(a^*) - represent(a)^dagger.

    The involution matches the weighted adjoint, not the plain conjugate
    transpose; with unit weights the two coincide.
    """
    lhs = represent(involution(a))
    rhs = represent(a).adjoint()
    return lhs.max_fiber_diff(rhs)


@dataclass(frozen=True)
class RandomOperatorReport:
    """Structural and metric facts about one operator field."""

    measurable: bool
    measurable_note: str
    ess_sup: float
    bounded: bool
    fiber_norms: dict[int, float]


def random_operator_report(R: RandomOperator) -> RandomOperatorReport:
    """Check measurability structurally and compute the essential supremum.

    Measurability asks that points of one class carry the same fiber
    operator; the check verifies the fibers are literally shared objects.
    Boundedness is finiteness of the largest fiber norm.
    """
    g = R.groupoid
    shared = all(
        R.fiber(x) is R.fiber(block[0])
        for block in g.blocks
        for x in block
    )
    norms = {
        x: float(np.linalg.norm(R.fiber(x), 2)) for x in g.space.ids
    }
    sup = R.ess_sup()
    note = (
        "fibers within each class are shared objects; on a finite atomic "
        "base every class-constant field is measurable"
        if shared
        else "fibers within a class are not shared; field is not class-constant"
    )
    return RandomOperatorReport(
        measurable=shared,
        measurable_note=note,
        ess_sup=sup,
        bounded=bool(np.isfinite(sup)),
        fiber_norms=norms,
    )
