"""Lifting first-order differential operators from points to arrows.

A derivation P = sum_i c_i(x) d/dx_i on the base has two natural lifts to
the arrow algebra: one differentiating through the source slot of an
arrow function (coefficients evaluated at the source point), one through
the destination slot (coefficients at the destination).  Their sum is the
symmetrized lift, which satisfies a generalized Leibniz rule with respect
to convolution,

    P(a * b) = P_hor(a) * b + a * P_ver(b),

and interacts with the point-function action through the commutator

    [P, Q(f)] a = Q(Pf) a.

Both identities are linear algebra over the stored jets, so they hold to
roundoff; the functions here measure the defects rather than assume them.
"""

from __future__ import annotations

import numpy as np
import sympy

from ._expr import ValueGradFn, coordinate_symbols, parse
from .algebra import AlgebraElement, BaseFunction, convolve, max_diff, module_action
from .diffspace import DiffSpace
from .groupoid import Groupoid


class Derivation:
    """A vector field on the space: coefficients c_i per point, one per coordinate.

    ``coeffs[p, i]`` is c_i at point index p; ``coeff_grads[p, i, k]`` is
    d c_i / d x_k there, needed only when derivations are iterated.  When
    built from expressions the symbolic form is kept so results of
    :meth:`apply_to` keep exact gradients.
    """

    def __init__(self, space: DiffSpace, coeffs, coeff_grads=None, exprs=None):
        self.space = space
        n = space.dimension
        self.coeffs = np.asarray(coeffs, dtype=complex)
        if self.coeffs.shape != (len(space.points), n):
            raise ValueError(f"coefficient shape {self.coeffs.shape}, "
                             f"need ({len(space.points)}, {n})")
        if coeff_grads is not None:
            coeff_grads = np.asarray(coeff_grads, dtype=complex)
            if coeff_grads.shape != (len(space.points), n, n):
                raise ValueError(f"bad coefficient gradient shape {coeff_grads.shape}")
        self.coeff_grads = coeff_grads
        self.exprs = tuple(exprs) if exprs is not None else None

    @classmethod
    def from_expressions(cls, space: DiffSpace, texts) -> "Derivation":
        """One coefficient expression in x1..xn per coordinate, n in total."""
        n = space.dimension
        texts = list(texts)
        if len(texts) != n:
            raise ValueError(f"need {n} coefficient expressions, got {len(texts)}")
        syms = coordinate_symbols(n)
        exprs = [parse(t, syms) for t in texts]
        bundles = [ValueGradFn(e, syms) for e in exprs]
        coeffs = np.zeros((len(space.points), n), dtype=complex)
        grads = np.zeros((len(space.points), n, n), dtype=complex)
        for p_i, p in enumerate(space.points):
            for i, bundle in enumerate(bundles):
                v, g = bundle(p.coords)
                coeffs[p_i, i] = v
                grads[p_i, i] = g
        return cls(space, coeffs, coeff_grads=grads, exprs=exprs)

    @classmethod
    def constant(cls, space: DiffSpace, vector) -> "Derivation":
        """A constant-coefficient field, e.g. a single d/dx_i."""
        vector = [sympy.nsimplify(v) if v == int(v) else sympy.Float(v)
                  for v in vector]
        return cls.from_expressions(space, [str(v) for v in vector])

    def apply_to(self, f: BaseFunction) -> BaseFunction:
        """Pf = sum_i c_i df/dx_i as a point function.

        When both sides are symbolic the result is re-derived symbolically,
        so it carries exact gradients and can be differentiated again.
        """
        if f.space is not self.space:
            raise ValueError("derivation and function live on different spaces")
        if f.grads is None:
            raise ValueError("function carries no gradient data")
        if self.exprs is not None and f.expr is not None:
            syms = coordinate_symbols(self.space.dimension)
            expr = sympy.Add(*[
                c * sympy.diff(f.expr, s) for c, s in zip(self.exprs, syms)
            ])
            return BaseFunction.from_expression(self.space, expr)
        values = np.einsum("pk,pk->p", self.coeffs, f.grads)
        return BaseFunction(self.space, values)

    def block_coeffs(self, g: Groupoid, b: int) -> np.ndarray:
        idx = [self.space.index_of(x) for x in g.block_points(b)]
        return self.coeffs[idx]

    def __repr__(self) -> str:
        if self.exprs is not None:
            return f"Derivation({[str(e) for e in self.exprs]})"
        return f"Derivation(tabulated, dim={self.space.dimension})"


def _check_pair(P: Derivation, a: AlgebraElement) -> AlgebraElement:
    if P.space is not a.groupoid.space:
        raise ValueError("derivation and element live on different spaces")
    return a.with_jets()


def _symbolic_lift(P: Derivation, a: AlgebraElement, slot: str):
    """Symbolic form of a lift, when both inputs carry expressions."""
    if P.exprs is None or a.expr is None:
        return None
    n = P.space.dimension
    xs = coordinate_symbols(n)
    ys = coordinate_symbols(n, prefix="y")
    if slot == "src":
        coeffs = P.exprs
        wrt = xs
    else:
        coeffs = [c.subs(dict(zip(xs, ys)), simultaneous=True) for c in P.exprs]
        wrt = ys
    return sympy.Add(*[c * sympy.diff(a.expr, s) for c, s in zip(coeffs, wrt)])


def lift_horizontal(P: Derivation, a: AlgebraElement) -> AlgebraElement:
    """Differentiate through the source slot, coefficients at the source point."""
    a = _check_pair(P, a)
    g = a.groupoid
    values = []
    for b in range(g.n_blocks):
        C = P.block_coeffs(g, b)
        values.append(np.einsum("ik,ijk->ij", C, a.d_src[b]))
    return AlgebraElement(g, values, expr=_symbolic_lift(P, a, "src"))


def lift_vertical(P: Derivation, a: AlgebraElement) -> AlgebraElement:
    """Differentiate through the destination slot, coefficients at the destination."""
    a = _check_pair(P, a)
    g = a.groupoid
    values = []
    for b in range(g.n_blocks):
        C = P.block_coeffs(g, b)
        values.append(np.einsum("jk,ijk->ij", C, a.d_dst[b]))
    return AlgebraElement(g, values, expr=_symbolic_lift(P, a, "dst"))


def lift_symmetrized(P: Derivation, a: AlgebraElement) -> AlgebraElement:
    """Sum of the horizontal and vertical lifts."""
    a = _check_pair(P, a)
    hor = lift_horizontal(P, a)
    ver = lift_vertical(P, a)
    values = [h + v for h, v in zip(hor.values, ver.values)]
    expr = None
    if hor.expr is not None and ver.expr is not None:
        expr = hor.expr + ver.expr
    return AlgebraElement(a.groupoid, values, expr=expr)


def leibniz_defect(P: Derivation, a: AlgebraElement, b: AlgebraElement) -> float:
    """max |P(a * b) - (P_hor(a) * b + a * P_ver(b))| over all arrows.

    Zero in exact arithmetic for every derivation and every pair of
    elements with jets; in floats this returns the roundoff level.
    """
    a = _check_pair(P, a)
    b = _check_pair(P, b)
    lhs = lift_symmetrized(P, convolve(a, b))
    rhs = convolve(lift_horizontal(P, a), b) + convolve(a, lift_vertical(P, b))
    return max_diff(lhs, rhs)


def commutator_apply(P: Derivation, f: BaseFunction, a: AlgebraElement) -> AlgebraElement:
    """[P, Q(f)] a = P(Q(f) a) - Q(f)(P a), with P the symmetrized lift."""
    a = _check_pair(P, a)
    if f.grads is None:
        raise ValueError("function carries no gradient data")
    lhs = lift_symmetrized(P, module_action(f, a))
    rhs = module_action(f, lift_symmetrized(P, a))
    return lhs - rhs


def commutator_defect(P: Derivation, f: BaseFunction, a: AlgebraElement) -> float:
    """max |[P, Q(f)] a - Q(Pf) a| over all arrows.

    The commutator of the lifted derivation with the action of f is the
    action of Pf; for f a coordinate projection and P the matching partial
    derivative, Pf = 1 and the commutator acts as the identity.
    """
    got = commutator_apply(P, f, a)
    expected = module_action(P.apply_to(f), a.with_jets())
    return max_diff(got, expected)
