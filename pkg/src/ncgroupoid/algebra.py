"""The convolution *-algebra on the arrows of a groupoid.

An element is a complex function on arrows; with a(x, y) arranged as a
matrix per orbit block, convolution is

    (a * b)(x, y) = sum_z a(x, z) b(z, y) w(z)    (z in the block of x)

which is a weighted matrix product per block.  The involution is
a^*(x, y) = conj(a(y, x)), and the unit is the diagonal delta(x, y)/w(x).

Elements may carry first-order jets: for each arrow, the partial
derivatives of the arrow value with respect to the source coordinates
(``d_src``) and the destination coordinates (``d_dst``).  Convolution,
involution and the module action all move jets along by the product
rule, exactly (the weights do not depend on the coordinates).

Values are complex128 by default.  Object-dtype arrays (for instance
``fractions.Fraction`` entries) are accepted for values and flow through
convolution, involution and the unit without rounding; jets are not
supported in that mode.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import sympy

from ._expr import ValueGradFn, coordinate_symbols, format_expr, parse
from .diffspace import DiffSpace
from .groupoid import Groupoid

_FLOAT_FMT = ".17g"


@dataclass(frozen=True)
class Jet:
    """Value and first-order partials of an element at one arrow."""

    value: complex
    d_src: tuple[complex, ...]
    d_dst: tuple[complex, ...]


class BaseFunction:
    """A function on the points of a space, with optional gradient data.

    These act on algebra elements from the left through
    :func:`module_action` and are what derivations differentiate.
    """

    def __init__(self, space: DiffSpace, values, grads=None, expr=None):
        self.space = space
        self.values = np.asarray(values, dtype=complex)
        if self.values.shape != (len(space.points),):
            raise ValueError(
                f"need one value per point, got shape {self.values.shape}"
            )
        if grads is not None:
            grads = np.asarray(grads, dtype=complex)
            if grads.shape != (len(space.points), space.dimension):
                raise ValueError(f"bad gradient shape {grads.shape}")
        self.grads = grads
        self.expr = expr
        self.values.flags.writeable = False
        if self.grads is not None:
            self.grads.flags.writeable = False

    @classmethod
    def from_expression(cls, space: DiffSpace, text) -> "BaseFunction":
        """Tabulate an expression in x1..xn over the points, with gradients."""
        syms = coordinate_symbols(space.dimension)
        expr = parse(text, syms)
        bundle = ValueGradFn(expr, syms)
        values = np.zeros(len(space.points), dtype=complex)
        grads = np.zeros((len(space.points), space.dimension), dtype=complex)
        for i, p in enumerate(space.points):
            v, g = bundle(p.coords)
            values[i] = v
            grads[i] = g
        return cls(space, values, grads, expr=expr)

    def value_at(self, pid: int) -> complex:
        return complex(self.values[self.space.index_of(pid)])

    def grad_at(self, pid: int) -> tuple[complex, ...] | None:
        if self.grads is None:
            return None
        return tuple(self.grads[self.space.index_of(pid)])

    def block_values(self, g: Groupoid, b: int) -> np.ndarray:
        idx = [self.space.index_of(x) for x in g.block_points(b)]
        return self.values[idx]

    def block_grads(self, g: Groupoid, b: int) -> np.ndarray:
        idx = [self.space.index_of(x) for x in g.block_points(b)]
        return self.grads[idx]

    def __mul__(self, other: "BaseFunction") -> "BaseFunction":
        """Pointwise product, gradients by the product rule."""
        if not isinstance(other, BaseFunction):
            return NotImplemented
        if self.space is not other.space:
            raise ValueError("functions live on different spaces")
        values = self.values * other.values
        grads = None
        if self.grads is not None and other.grads is not None:
            grads = (
                self.grads * other.values[:, None]
                + self.values[:, None] * other.grads
            )
        expr = None
        if self.expr is not None and other.expr is not None:
            expr = self.expr * other.expr
        return BaseFunction(self.space, values, grads, expr=expr)

    def __repr__(self) -> str:
        tag = format_expr(self.expr) if self.expr is not None else "tabulated"
        return f"BaseFunction({tag!r}, {len(self.values)} points)"


class AlgebraElement:
    """A function on the arrows of a groupoid, stored as one matrix per block.

    ``values[b][i, j]`` is the value at the arrow from the i-th to the j-th
    point of block b.  ``d_src[b][i, j, k]`` and ``d_dst[b][i, j, k]`` hold
    the partials with respect to the k-th source and destination coordinate;
    either both are present or neither.  ``expr`` optionally remembers a
    defining expression in x1..xn, y1..yn so jets can be re-tabulated.
    """

    def __init__(self, groupoid: Groupoid, values, d_src=None, d_dst=None, expr=None):
        self.groupoid = groupoid
        n = groupoid.space.dimension
        vals = []
        for b, block in enumerate(groupoid.blocks):
            m = len(block)
            arr = np.asarray(values[b])
            if arr.dtype != object:
                arr = arr.astype(complex)
            if arr.shape != (m, m):
                raise ValueError(f"block {b}: value shape {arr.shape}, need ({m}, {m})")
            arr = arr.copy()
            arr.flags.writeable = False
            vals.append(arr)
        self.values: tuple[np.ndarray, ...] = tuple(vals)

        if (d_src is None) != (d_dst is None):
            raise ValueError("d_src and d_dst must be given together")
        if d_src is not None:
            if any(v.dtype == object for v in self.values):
                raise ValueError("jets are not supported for object-dtype values")
            ds, dd = [], []
            for b, block in enumerate(groupoid.blocks):
                m = len(block)
                a_s = np.asarray(d_src[b], dtype=complex)
                a_d = np.asarray(d_dst[b], dtype=complex)
                if a_s.shape != (m, m, n) or a_d.shape != (m, m, n):
                    raise ValueError(f"block {b}: jet shape must be ({m}, {m}, {n})")
                a_s = a_s.copy()
                a_d = a_d.copy()
                a_s.flags.writeable = False
                a_d.flags.writeable = False
                ds.append(a_s)
                dd.append(a_d)
            self.d_src: tuple[np.ndarray, ...] | None = tuple(ds)
            self.d_dst: tuple[np.ndarray, ...] | None = tuple(dd)
        else:
            self.d_src = None
            self.d_dst = None
        self.expr = expr

    @property
    def has_jets(self) -> bool:
        return self.d_src is not None

    @classmethod
    def zeros(cls, g: Groupoid, jets: bool = False) -> "AlgebraElement":
        n = g.space.dimension
        values = [np.zeros((len(b), len(b)), dtype=complex) for b in g.blocks]
        if not jets:
            return cls(g, values)
        d = [np.zeros((len(b), len(b), n), dtype=complex) for b in g.blocks]
        return cls(g, values, d_src=d, d_dst=[a.copy() for a in d])

    def value_at(self, src: int, dst: int) -> complex:
        b, i = self.groupoid.position(src)
        b2, j = self.groupoid.position(dst)
        if b != b2:
            raise ValueError(f"({src}, {dst}) is not an arrow of the groupoid")
        v = self.values[b][i, j]
        return v if self.values[b].dtype == object else complex(v)

    def jet_at(self, src: int, dst: int) -> Jet:
        if not self.has_jets:
            raise ValueError("element carries no jets")
        b, i = self.groupoid.position(src)
        _, j = self.groupoid.position(dst)
        return Jet(
            value=complex(self.values[b][i, j]),
            d_src=tuple(self.d_src[b][i, j]),
            d_dst=tuple(self.d_dst[b][i, j]),
        )

    def max_abs(self) -> float:
        return max(float(max(abs(v).flat, default=0.0)) for v in self.values)

    def with_jets(self) -> "AlgebraElement":
        """This element with jets available.

        Returns self when jets are stored.  Otherwise the defining
        expression, if remembered, is re-tabulated (values included, so the
        result may differ from the stored values by roundoff).  Without
        either, raises.
        """
        if self.has_jets:
            return self
        if self.expr is not None:
            return from_expression(self.groupoid, self.expr)
        raise ValueError("element carries no jets and no defining expression")

    def _binary(self, other, op):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        if not self.groupoid.same_structure(other.groupoid):
            raise ValueError("elements live on different groupoids")
        values = [op(a, b) for a, b in zip(self.values, other.values)]
        d_src = d_dst = None
        if self.has_jets and other.has_jets:
            d_src = [op(a, b) for a, b in zip(self.d_src, other.d_src)]
            d_dst = [op(a, b) for a, b in zip(self.d_dst, other.d_dst)]
        return AlgebraElement(self.groupoid, values, d_src=d_src, d_dst=d_dst)

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __neg__(self):
        return self.__mul__(-1)

    def __mul__(self, scalar):
        if isinstance(scalar, AlgebraElement):
            raise TypeError("use convolve(a, b) for the algebra product")
        c = complex(scalar)
        values = [v * c for v in self.values]
        d_src = d_dst = None
        if self.has_jets:
            d_src = [d * c for d in self.d_src]
            d_dst = [d * c for d in self.d_dst]
        return AlgebraElement(self.groupoid, values, d_src=d_src, d_dst=d_dst)

    __rmul__ = __mul__

    def diagonal(self) -> dict[int, complex]:
        """Values on the unit arrows, keyed by point id."""
        out = {}
        for b, block in enumerate(self.groupoid.blocks):
            for i, x in enumerate(block):
                v = self.values[b][i, i]
                out[x] = v if self.values[b].dtype == object else complex(v)
        return out

    def to_records(self) -> list[tuple]:
        """Rows (src, dst, re, im, d_src..., d_dst...), sorted by (src, dst).

        Jet columns are interleaved re/im per coordinate and appear only
        when the element carries jets.
        """
        rows = []
        for b, block in enumerate(self.groupoid.blocks):
            for i, x in enumerate(block):
                for j, y in enumerate(block):
                    v = complex(self.values[b][i, j])
                    row = [x, y, v.real, v.imag]
                    if self.has_jets:
                        for k in range(self.groupoid.space.dimension):
                            d = complex(self.d_src[b][i, j, k])
                            row += [d.real, d.imag]
                        for k in range(self.groupoid.space.dimension):
                            d = complex(self.d_dst[b][i, j, k])
                            row += [d.real, d.imag]
                    rows.append(tuple(row))
        rows.sort(key=lambda r: (r[0], r[1]))
        return rows

    def to_csv(self, path) -> None:
        n = self.groupoid.space.dimension
        header = ["src", "dst", "re", "im"]
        if self.has_jets:
            for k in range(n):
                header += [f"d_src{k + 1}_re", f"d_src{k + 1}_im"]
            for k in range(n):
                header += [f"d_dst{k + 1}_re", f"d_dst{k + 1}_im"]
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            for row in self.to_records():
                writer.writerow(
                    [row[0], row[1]] + [format(v, _FLOAT_FMT) for v in row[2:]]
                )

    @classmethod
    def from_csv(cls, g: Groupoid, path) -> "AlgebraElement":
        n = g.space.dimension
        with open(path, "r", encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            with_jets = len(header) > 4
            expected = 4 + (4 * n if with_jets else 0)
            if len(header) != expected:
                raise ValueError(f"unexpected column count {len(header)}")
            values = [np.zeros((len(b), len(b)), dtype=complex) for b in g.blocks]
            d_src = d_dst = None
            if with_jets:
                d_src = [np.zeros((len(b), len(b), n), dtype=complex) for b in g.blocks]
                d_dst = [np.zeros((len(b), len(b), n), dtype=complex) for b in g.blocks]
            seen = 0
            for row in reader:
                src, dst = int(row[0]), int(row[1])
                b, i = g.position(src)
                b2, j = g.position(dst)
                if b != b2:
                    raise ValueError(f"({src}, {dst}) is not an arrow of the groupoid")
                nums = [float(v) for v in row[2:]]
                values[b][i, j] = complex(nums[0], nums[1])
                if with_jets:
                    for k in range(n):
                        d_src[b][i, j, k] = complex(nums[2 + 2 * k], nums[3 + 2 * k])
                        off = 2 + 2 * n
                        d_dst[b][i, j, k] = complex(
                            nums[off + 2 * k], nums[off + 2 * k + 1]
                        )
                seen += 1
        if seen != g.arrow_count:
            raise ValueError(f"file has {seen} arrows, groupoid has {g.arrow_count}")
        return cls(g, values, d_src=d_src, d_dst=d_dst)

    def __repr__(self) -> str:
        sizes = [len(b) for b in self.groupoid.blocks]
        jets = "with jets" if self.has_jets else "no jets"
        return f"AlgebraElement(blocks {sizes}, {jets})"


def _weight_column(g: Groupoid, b: int, like: np.ndarray) -> np.ndarray:
    w = g.block_weights(b)
    if like.dtype == object:
        # keep object arithmetic exact instead of decaying to float
        return np.array([Fraction(x) for x in w], dtype=object)
    return w


def from_expression(g: Groupoid, text) -> AlgebraElement:
    """Tabulate an expression in x1..xn (source) and y1..yn (destination).

    Values and both jet families come from one symbolic bundle, so the jets
    are the exact partials of the tabulated values.
    """
    n = g.space.dimension
    syms = coordinate_symbols(n) + coordinate_symbols(n, prefix="y")
    expr = parse(text, syms)
    bundle = ValueGradFn(expr, syms)
    values, d_src, d_dst = [], [], []
    for block in g.blocks:
        m = len(block)
        vals = np.zeros((m, m), dtype=complex)
        ds = np.zeros((m, m, n), dtype=complex)
        dd = np.zeros((m, m, n), dtype=complex)
        for i, x in enumerate(block):
            cx = g.space.point(x).coords
            for j, y in enumerate(block):
                cy = g.space.point(y).coords
                v, grad = bundle(cx + cy)
                vals[i, j] = v
                ds[i, j] = grad[:n]
                dd[i, j] = grad[n:]
        values.append(vals)
        d_src.append(ds)
        d_dst.append(dd)
    return AlgebraElement(g, values, d_src=d_src, d_dst=d_dst, expr=expr)


def convolve(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """(a * b)(x, y) = sum_z a(x, z) b(z, y) w(z), blockwise.

    Jets propagate when both factors carry them: the source partials hit
    the left factor, the destination partials the right one.  On singleton
    blocks with unit weight this degenerates to the plain pointwise product.
    """
    if not a.groupoid.same_structure(b.groupoid):
        raise ValueError("elements live on different groupoids")
    g = a.groupoid
    n = g.space.dimension
    values, d_src, d_dst = [], [], []
    jets = a.has_jets and b.has_jets
    for blk in range(g.n_blocks):
        A, B = a.values[blk], b.values[blk]
        w = _weight_column(g, blk, A)
        WB = B * w[:, None]
        values.append(np.dot(A, WB))
        if jets:
            m = len(g.blocks[blk])
            AW = A * w[None, :]
            ds = np.zeros((m, m, n), dtype=complex)
            dd = np.zeros((m, m, n), dtype=complex)
            for k in range(n):
                ds[:, :, k] = np.dot(a.d_src[blk][:, :, k], WB)
                dd[:, :, k] = np.dot(AW, b.d_dst[blk][:, :, k])
            d_src.append(ds)
            d_dst.append(dd)
    if not jets:
        d_src = d_dst = None
    return AlgebraElement(g, values, d_src=d_src, d_dst=d_dst)


def involution(a: AlgebraElement) -> AlgebraElement:
    """The star operation a^*(x, y) = conj(a(y, x)).

    Jets swap roles: the source partials of the result are the conjugated
    destination partials of the input, transposed, and vice versa.
    """
    values = [np.conjugate(v.T) for v in a.values]
    d_src = d_dst = None
    if a.has_jets:
        d_src = [np.conjugate(np.transpose(d, (1, 0, 2))) for d in a.d_dst]
        d_dst = [np.conjugate(np.transpose(d, (1, 0, 2))) for d in a.d_src]
    expr = None
    if a.expr is not None:
        n = a.groupoid.space.dimension
        xs = coordinate_symbols(n)
        ys = coordinate_symbols(n, prefix="y")
        swap = {**dict(zip(xs, ys)), **dict(zip(ys, xs))}
        # expressions are real-valued, so conjugation is a no-op here
        expr = a.expr.subs(swap, simultaneous=True)
    return AlgebraElement(a.groupoid, values, d_src=d_src, d_dst=d_dst, expr=expr)


def unit(g: Groupoid) -> AlgebraElement:
    """The convolution unit e(x, y) = delta(x, y) / w(x).

    Dividing by the weight cancels the measure in the convolution sum.  The
    unit carries no jets: it is measure data, not a function of the
    coordinates.
    """
    values = []
    for b, block in enumerate(g.blocks):
        w = g.block_weights(b)
        values.append(np.diag(1.0 / w).astype(complex))
    return AlgebraElement(g, values)


def module_action(f: BaseFunction, a: AlgebraElement) -> AlgebraElement:
    """Left action of a point function: (f . a)(x, y) = f(x) a(x, y).

    Source partials follow the product rule through f; destination partials
    just scale.  If f has no gradient data the result drops its jets.
    """
    if f.space is not a.groupoid.space:
        raise ValueError("function and element live on different spaces")
    g = a.groupoid
    n = g.space.dimension
    values, d_src, d_dst = [], [], []
    jets = a.has_jets and f.grads is not None
    for b in range(g.n_blocks):
        fv = f.block_values(g, b)
        values.append(fv[:, None] * a.values[b])
        if jets:
            df = f.block_grads(g, b)
            m = len(g.blocks[b])
            ds = np.zeros((m, m, n), dtype=complex)
            dd = np.zeros((m, m, n), dtype=complex)
            for k in range(n):
                ds[:, :, k] = (
                    df[:, k][:, None] * a.values[b]
                    + fv[:, None] * a.d_src[b][:, :, k]
                )
                dd[:, :, k] = fv[:, None] * a.d_dst[b][:, :, k]
            d_src.append(ds)
            d_dst.append(dd)
    if not jets:
        d_src = d_dst = None
    expr = None
    if f.expr is not None and a.expr is not None:
        expr = f.expr * a.expr
    return AlgebraElement(g, values, d_src=d_src, d_dst=d_dst, expr=expr)


def arrow_basis(g: Groupoid) -> list[AlgebraElement]:
    """Delta elements, one per arrow, in the groupoid's arrow order."""
    out = []
    for b, block in enumerate(g.blocks):
        m = len(block)
        for i in range(m):
            for j in range(m):
                values = [
                    np.zeros((len(blk), len(blk)), dtype=complex) for blk in g.blocks
                ]
                values[b][i, j] = 1.0
                out.append(AlgebraElement(g, values))
    return out


def random_element(
    g: Groupoid, rng: np.random.Generator,
    with_jets: bool = False, real: bool = False,
) -> AlgebraElement:
    """A random element with standard normal entries (complex by default)."""
    n = g.space.dimension

    def draw(shape):
        if real:
            return rng.standard_normal(shape).astype(complex)
        return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)

    values = [draw((len(b), len(b))) for b in g.blocks]
    if not with_jets:
        return AlgebraElement(g, values)
    d_src = [draw((len(b), len(b), n)) for b in g.blocks]
    d_dst = [draw((len(b), len(b), n)) for b in g.blocks]
    return AlgebraElement(g, values, d_src=d_src, d_dst=d_dst)


def max_abs(a: AlgebraElement) -> float:
    return a.max_abs()


def max_diff(a: AlgebraElement, b: AlgebraElement) -> float:
    """Largest absolute difference of values over all arrows."""
    if not a.groupoid.same_structure(b.groupoid):
        raise ValueError("elements live on different groupoids")
    out = 0.0
    for va, vb in zip(a.values, b.values):
        d = abs(va - vb)
        out = max(out, float(max(d.flat, default=0.0)))
    return out
