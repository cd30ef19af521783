"""Finite differential spaces: measured point sets with generating function families.

A space is a finite set of points in R^n, each carrying a positive weight
(an atomic measure), together with a family of smooth generating functions
of the coordinates.  The central construction is the relation that glues
together points no generator can separate; its classes are the fibers of
the joint evaluation map x -> (f1(x), ..., fm(x)).  Functions constant on
the classes of a relation descend to the quotient, and the quotient of the
space itself is again a space of the same kind.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field

import sympy

from ._expr import ExpressionError, ValueGradFn, coordinate_symbols, format_expr, parse


class ConfigError(ValueError):
    """A space description (dict or JSON file) is malformed."""


@dataclass(frozen=True)
class Point:
    """One atom of the space: an id, coordinates in R^n, a positive weight."""

    id: int
    coords: tuple[float, ...]
    weight: float


class GeneratorFunction:
    """A named smooth function of the coordinates with exact symbolic partials."""

    def __init__(self, name: str, expr, dimension: int):
        self.name = str(name)
        self.dimension = int(dimension)
        self.symbols = coordinate_symbols(self.dimension)
        self.expr = parse(expr, self.symbols)
        self._bundle = ValueGradFn(self.expr, self.symbols)

    def __call__(self, coords) -> float:
        return self._bundle.value(coords)

    def gradient(self, coords) -> tuple[float, ...]:
        return self._bundle(coords)[1]

    def value_and_gradient(self, coords) -> tuple[float, tuple[float, ...]]:
        return self._bundle(coords)

    @property
    def expr_text(self) -> str:
        return format_expr(self.expr)

    def __repr__(self) -> str:
        return f"GeneratorFunction({self.name!r}, {self.expr_text!r})"


class Partition:
    """A partition of point ids, canonically ordered.

    Blocks are stored sorted by smallest member, members sorted by id, so
    two partitions describing the same relation compare equal no matter how
    they were produced.  The equivalence relation itself is recovered
    through :meth:`relates` and :meth:`pairs`.
    """

    def __init__(self, blocks):
        cleaned = []
        seen: set[int] = set()
        for block in blocks:
            members = tuple(sorted(int(x) for x in block))
            if not members:
                raise ValueError("empty block in partition")
            overlap = seen.intersection(members)
            if overlap:
                raise ValueError(f"ids {sorted(overlap)} appear in more than one block")
            if len(set(members)) != len(members):
                raise ValueError("repeated id inside a block")
            seen.update(members)
            cleaned.append(members)
        cleaned.sort(key=lambda b: b[0])
        self.blocks: tuple[tuple[int, ...], ...] = tuple(cleaned)
        self.block_of: dict[int, int] = {
            x: i for i, block in enumerate(self.blocks) for x in block
        }

    @classmethod
    def identity(cls, ids) -> "Partition":
        return cls([(x,) for x in ids])

    @classmethod
    def total(cls, ids) -> "Partition":
        return cls([tuple(ids)])

    @property
    def ids(self) -> tuple[int, ...]:
        return tuple(sorted(self.block_of))

    @property
    def n_blocks(self) -> int:
        return len(self.blocks)

    @property
    def is_identity(self) -> bool:
        return all(len(b) == 1 for b in self.blocks)

    @property
    def is_total(self) -> bool:
        return len(self.blocks) == 1

    def relates(self, x: int, y: int) -> bool:
        return self.block_of[x] == self.block_of[y]

    def block_containing(self, x: int) -> tuple[int, ...]:
        return self.blocks[self.block_of[x]]

    def pairs(self):
        """All related ordered pairs, diagonal included."""
        for block in self.blocks:
            for x in block:
                for y in block:
                    yield (x, y)

    def refines(self, other: "Partition") -> bool:
        """True when every block of self sits inside one block of other."""
        if set(self.block_of) != set(other.block_of):
            raise ValueError("partitions cover different id sets")
        return all(
            len({other.block_of[x] for x in block}) == 1 for block in self.blocks
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, Partition) and self.blocks == other.blocks

    def __hash__(self) -> int:
        return hash(self.blocks)

    def __repr__(self) -> str:
        return f"Partition({list(self.blocks)!r})"


class DiffSpace:
    """A finite measured point set together with its generating functions.

    ``compare_mode`` fixes how generator values are compared when points are
    glued: ``"exact"`` uses bitwise equality of the evaluated floats,
    ``"quantized"`` rounds values to an ``eps`` grid first (still an
    equivalence, so transitivity survives).

    An empty generator family is only meaningful for the constants-only
    structure; pass ``constants_only=True`` to get it, in which case a
    single constant generator named ``one`` is stored.
    """

    def __init__(
        self,
        points,
        dimension: int,
        generators,
        compare_mode: str = "exact",
        eps: float | None = None,
        constants_only: bool = False,
    ):
        self.dimension = int(dimension)
        if self.dimension < 0:
            raise ValueError("dimension must be nonnegative")
        self.points: tuple[Point, ...] = tuple(points)
        if not self.points:
            raise ValueError("a space needs at least one point")
        self._index: dict[int, int] = {}
        for i, p in enumerate(self.points):
            if p.id in self._index:
                raise ValueError(f"duplicate point id {p.id}")
            if len(p.coords) != self.dimension:
                raise ValueError(
                    f"point {p.id}: got {len(p.coords)} coordinates, "
                    f"expected {self.dimension}"
                )
            if not (p.weight > 0):
                raise ValueError(f"point {p.id}: weight must be positive")
            self._index[p.id] = i

        gens = tuple(generators)
        if not gens:
            if not constants_only:
                raise ValueError(
                    "empty generator family (pass constants_only=True for the "
                    "trivial structure)"
                )
            gens = (GeneratorFunction("one", sympy.Integer(1), self.dimension),)
        self.constants_only = bool(constants_only)
        names = [g.name for g in gens]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate generator names in {names}")
        for g in gens:
            if g.dimension != self.dimension:
                raise ValueError(
                    f"generator {g.name}: dimension {g.dimension} != {self.dimension}"
                )
        self.generators: tuple[GeneratorFunction, ...] = gens

        if compare_mode not in ("exact", "quantized"):
            raise ValueError(f"unknown compare_mode {compare_mode!r}")
        if compare_mode == "quantized":
            if eps is None or not (float(eps) > 0):
                raise ValueError("quantized comparison needs a positive eps")
            eps = float(eps)
        else:
            eps = None
        self.compare_mode = compare_mode
        self.eps = eps

    @property
    def ids(self) -> tuple[int, ...]:
        return tuple(p.id for p in self.points)

    def point(self, pid: int) -> Point:
        return self.points[self._index[pid]]

    def index_of(self, pid: int) -> int:
        return self._index[pid]

    def weight(self, pid: int) -> float:
        return self.point(pid).weight

    def value_key(self, v: float):
        """Hashable key implementing the configured comparison of values."""
        if self.compare_mode == "quantized":
            return int(round(float(v) / self.eps))
        return struct.pack(">d", float(v))

    def generator_keys(self) -> dict[int, tuple]:
        """Per point, the tuple of comparison keys of all generator values."""
        table: dict[int, tuple] = {}
        for p in self.points:
            table[p.id] = tuple(self.value_key(g(p.coords)) for g in self.generators)
        return table

    def __repr__(self) -> str:
        return (
            f"DiffSpace({len(self.points)} points, dim={self.dimension}, "
            f"generators={[g.name for g in self.generators]}, "
            f"compare={self.compare_mode})"
        )


def hausdorff_relation(space: DiffSpace) -> Partition:
    """Glue points that every generator maps to the same value.

    The classes are exactly the fibers of x -> (f1(x), ..., fm(x)) under the
    space's comparison mode, so the result is an equivalence relation by
    construction.  The space is Hausdorff precisely when the result is the
    identity partition.
    """
    groups: dict[tuple, list[int]] = {}
    for pid, key in space.generator_keys().items():
        groups.setdefault(key, []).append(pid)
    return Partition(groups.values())


@dataclass(frozen=True)
class GeneratorConsistency:
    """Whether one function is constant on every class of a relation."""

    name: str
    consistent: bool
    max_spread: float
    witness: tuple[int, int] | None


@dataclass(frozen=True)
class ConsistencyReport:
    results: tuple[GeneratorConsistency, ...]
    all_consistent: bool

    @property
    def consistent_names(self) -> tuple[str, ...]:
        return tuple(r.name for r in self.results if r.consistent)

    @property
    def dropped_names(self) -> tuple[str, ...]:
        return tuple(r.name for r in self.results if not r.consistent)


def _check_consistency(space: DiffSpace, rho: Partition) -> ConsistencyReport:
    if set(rho.block_of) != set(space.ids):
        raise ValueError("partition does not cover the space's point ids")
    results = []
    for g in space.generators:
        consistent = True
        spread = 0.0
        witness = None
        for block in rho.blocks:
            vals = [g(space.point(x).coords) for x in block]
            keys = [space.value_key(v) for v in vals]
            spread = max(spread, max(vals) - min(vals))
            if len(set(keys)) > 1:
                consistent = False
                if witness is None:
                    base = keys[0]
                    other = next(i for i, k in enumerate(keys) if k != base)
                    witness = (block[0], block[other])
        results.append(GeneratorConsistency(g.name, consistent, spread, witness))
    return ConsistencyReport(tuple(results), all(r.consistent for r in results))


def consistent_family(space: DiffSpace, rho: Partition) -> ConsistencyReport:
    """Report which generators are constant on the classes of ``rho``.

    Against the space's own gluing relation every generator is consistent;
    for coarser relations some may fail, and those cannot descend to the
    quotient.
    """
    return _check_consistency(space, rho)


@dataclass(frozen=True)
class QuotientResult:
    """A quotient space plus what happened on the way down.

    ``projection`` maps each original point id to its class id in the new
    space; ``dropped`` lists generators that were not constant on classes
    and therefore did not descend.
    """

    space: DiffSpace
    dropped: tuple[str, ...]
    projection: dict[int, int] = field(compare=False)


def quotient(space: DiffSpace, rho: Partition) -> QuotientResult:
    """Collapse each class of ``rho`` to a single point.

    Class weights add.  The coordinates of a class are the values of the
    consistent generators on it, read off at the smallest member id (the
    members agree up to the comparison mode), and those generators push
    down to plain coordinate projections carrying the original names.  The
    composition (pushed-down generator) o (projection) reproduces the
    original generator on the nose, which is the sense in which nothing is
    lost.
    """
    report = _check_consistency(space, rho)
    kept = [g for g, r in zip(space.generators, report.results) if r.consistent]
    new_dim = len(kept)
    projection = {pid: rho.block_of[pid] for pid in space.ids}
    new_points = []
    for b, block in enumerate(rho.blocks):
        rep = space.point(block[0]).coords
        coords = tuple(g(rep) for g in kept)
        weight = sum(space.point(x).weight for x in block)
        new_points.append(Point(id=b, coords=coords, weight=weight))
    if kept:
        new_gens = [
            GeneratorFunction(g.name, f"x{i + 1}", new_dim)
            for i, g in enumerate(kept)
        ]
        q = DiffSpace(
            new_points, new_dim, new_gens,
            compare_mode=space.compare_mode, eps=space.eps,
        )
    else:
        q = DiffSpace(
            new_points, 0, (),
            compare_mode=space.compare_mode, eps=space.eps,
            constants_only=True,
        )
    return QuotientResult(space=q, dropped=report.dropped_names, projection=projection)


_POINT_KEYS = {"id", "coords", "weight"}
_GENERATOR_KEYS = {"name", "expr"}
_CONFIG_KEYS = {"dimension", "points", "generators", "compare_mode", "name", "comment"}


def build_space(config: dict) -> DiffSpace:
    """Build a space from a plain dict (the JSON config layout).

    Layout::

        {
          "dimension": 2,
          "points": [{"id": 0, "coords": [0.0, 0.0], "weight": 1.0}, ...],
          "generators": [{"name": "pi1", "expr": "x1"}, ...],
          "compare_mode": "exact"            # or {"quantized": 1e-9}
        }

    ``weight`` defaults to 1.0 and ``compare_mode`` to ``"exact"``.  An
    empty generator list declares the constants-only structure.  Malformed
    input raises :class:`ConfigError`.
    """
    if not isinstance(config, dict):
        raise ConfigError("space config must be a JSON object")
    unknown = set(config) - _CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config key(s): {sorted(unknown)}")
    for key in ("dimension", "points", "generators"):
        if key not in config:
            raise ConfigError(f"missing config key {key!r}")
    try:
        dimension = int(config["dimension"])
    except (TypeError, ValueError):
        raise ConfigError(f"dimension must be an integer, got {config['dimension']!r}")

    raw_points = config["points"]
    if not isinstance(raw_points, list) or not raw_points:
        raise ConfigError("points must be a non-empty list")
    points = []
    for entry in raw_points:
        if not isinstance(entry, dict):
            raise ConfigError(f"point entry must be an object, got {entry!r}")
        unknown = set(entry) - _POINT_KEYS
        if unknown:
            raise ConfigError(f"unknown point key(s): {sorted(unknown)}")
        if "id" not in entry or "coords" not in entry:
            raise ConfigError(f"point entry needs id and coords: {entry!r}")
        try:
            pid = int(entry["id"])
            coords = tuple(float(c) for c in entry["coords"])
            weight = float(entry.get("weight", 1.0))
        except (TypeError, ValueError):
            raise ConfigError(f"malformed point entry: {entry!r}")
        points.append(Point(id=pid, coords=coords, weight=weight))

    raw_gens = config["generators"]
    if not isinstance(raw_gens, list):
        raise ConfigError("generators must be a list")
    generators = []
    for entry in raw_gens:
        if not isinstance(entry, dict) or set(entry) - _GENERATOR_KEYS:
            raise ConfigError(f"malformed generator entry: {entry!r}")
        if "name" not in entry or "expr" not in entry:
            raise ConfigError(f"generator entry needs name and expr: {entry!r}")
        try:
            generators.append(
                GeneratorFunction(str(entry["name"]), entry["expr"], dimension)
            )
        except ExpressionError as exc:
            raise ConfigError(f"generator {entry.get('name')!r}: {exc}")

    mode = config.get("compare_mode", "exact")
    eps = None
    if isinstance(mode, dict):
        if set(mode) != {"quantized"}:
            raise ConfigError(f"malformed compare_mode: {mode!r}")
        eps = mode["quantized"]
        mode = "quantized"
    if mode not in ("exact", "quantized"):
        raise ConfigError(f"unknown compare_mode {mode!r}")

    try:
        return DiffSpace(
            points, dimension, generators,
            compare_mode=mode, eps=eps,
            constants_only=not generators,
        )
    except ValueError as exc:
        raise ConfigError(str(exc))


def load_space(path) -> DiffSpace:
    """Read a JSON space config from disk.  See :func:`build_space`."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            config = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}")
    return build_space(config)
