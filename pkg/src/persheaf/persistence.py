"""One-parameter persistence modules and their interval decomposition.

A module of length m is a chain of F_p spaces joined by forward maps;
a copersistence module runs the maps backward.  Decomposition is by the
rank formula: bar multiplicities are an inclusion-exclusion over ranks
of composite maps.  The diagram is implicitly continued to the right by
identity maps, so a class alive at the last index belongs to an
unbounded bar, written (a, None).
"""

from __future__ import annotations

from .linalg import Field, identity, matrix

__all__ = [
    "Barcode",
    "PersistenceModule",
    "CopersistenceModule",
    "decompose_by_ranks",
    "decompose_copersistence",
    "reflect",
    "barcodes_equal",
]


def _bar_key(bar):
    a, b = bar
    # finite bars of equal birth sort before the unbounded one
    return (a, 1, 0) if b is None else (a, 0, b)


class Barcode:
    """An immutable multiset of bars (a, b), with b = None meaning no death."""

    def __init__(self, bars=()):
        clean = []
        for a, b in bars:
            a = int(a)
            b = None if b is None else int(b)
            if a < 0:
                raise ValueError(f"bar cannot start at {a}")
            if b is not None and b < a:
                raise ValueError(f"bar ({a}, {b}) ends before it starts")
            clean.append((a, b))
        self.bars = tuple(sorted(clean, key=_bar_key))

    def __iter__(self):
        return iter(self.bars)

    def __len__(self):
        return len(self.bars)

    def __eq__(self, other):
        return isinstance(other, Barcode) and other.bars == self.bars

    def __hash__(self):
        return hash(self.bars)

    def __repr__(self):
        inner = ", ".join(
            f"[{a}, inf)" if b is None else f"[{a}, {b}]" for a, b in self.bars
        )
        return "Barcode({" + inner + "})"

    def closed(self, m: int) -> "Barcode":
        """Rewrite unbounded bars as [a, m-1], for an index range of length m."""
        out = []
        for a, b in self.bars:
            if b is None:
                if a > m - 1:
                    raise ValueError(f"bar starting at {a} exceeds {m} indices")
                b = m - 1
            out.append((a, b))
        return Barcode(out)


def barcodes_equal(x: Barcode, y: Barcode) -> bool:
    return Barcode(x).bars == Barcode(y).bars


def reflect(bc: Barcode, m: int) -> Barcode:
    """Reverse a barcode across an index range of length m.

    [a, b] becomes [m-1-b, m-1-a].  An unbounded bar is read as ending
    at m-1 first; the result keeps the unbounded marker only when it
    still touches the last index after reflection, i.e. when a = 0.
    """
    out = []
    for a, b in bc:
        if b is None:
            if a >= m:
                raise ValueError(f"bar start {a} outside range of length {m}")
            out.append((0, None) if a == 0 else (0, m - 1 - a))
        else:
            if b >= m:
                raise ValueError(f"bar end {b} outside range of length {m}")
            out.append((m - 1 - b, m - 1 - a))
    return Barcode(out)


class PersistenceModule:
    """Spaces of dimensions dims[i] with maps[i] running from i to i+1."""

    def __init__(self, field: Field, dims, maps):
        self.field = field
        self.dims = tuple(int(d) for d in dims)
        if not self.dims:
            raise ValueError("a persistence module needs at least one index")
        if any(d < 0 for d in self.dims):
            raise ValueError("dimensions must be nonnegative")
        self.maps = tuple(matrix(m, field.p) for m in maps)
        if len(self.maps) != len(self.dims) - 1:
            raise ValueError("expected one map per consecutive index pair")
        for i, mp in enumerate(self.maps):
            want = (self.dims[i + 1], self.dims[i])
            if mp.shape != want:
                raise ValueError(f"map {i} has shape {mp.shape}, expected {want}")

    @property
    def length(self) -> int:
        return len(self.dims)


class CopersistenceModule:
    """Spaces of dimensions dims[i] with maps[i] running from i+1 to i."""

    def __init__(self, field: Field, dims, maps):
        self.field = field
        self.dims = tuple(int(d) for d in dims)
        if not self.dims:
            raise ValueError("a copersistence module needs at least one index")
        if any(d < 0 for d in self.dims):
            raise ValueError("dimensions must be nonnegative")
        self.maps = tuple(matrix(m, field.p) for m in maps)
        if len(self.maps) != len(self.dims) - 1:
            raise ValueError("expected one map per consecutive index pair")
        for i, mp in enumerate(self.maps):
            want = (self.dims[i], self.dims[i + 1])
            if mp.shape != want:
                raise ValueError(f"map {i} has shape {mp.shape}, expected {want}")

    @property
    def length(self) -> int:
        return len(self.dims)

    def transposed(self) -> PersistenceModule:
        """The dual module: same dims, every map transposed to run forward."""
        return PersistenceModule(self.field, self.dims, [m.T for m in self.maps])


def _composite_ranks(module: PersistenceModule) -> list:
    """r[a][b] = rank of the composite map a -> b, r[a][a] = dims[a]."""
    m = module.length
    field = module.field
    r = [[0] * m for _ in range(m)]
    for a in range(m):
        comp = identity(module.dims[a])
        r[a][a] = module.dims[a]
        for b in range(a + 1, m):
            comp = field.matmul(module.maps[b - 1], comp)
            r[a][b] = field.rank(comp)
    return r


def decompose_by_ranks(module: PersistenceModule) -> Barcode:
    """Interval decomposition via the rank formula.

    mult[a, b] = r(a,b) - r(a-1,b) - r(a,b+1) + r(a-1,b+1) for b below
    the last index; classes alive at the last index become unbounded
    bars with multiplicity r(a, m-1) - r(a-1, m-1).
    """
    m = module.length
    table = _composite_ranks(module)

    def r(a, b):
        return 0 if a < 0 else table[a][b]

    bars = []
    for a in range(m):
        for b in range(a, m - 1):
            mult = r(a, b) - r(a - 1, b) - r(a, b + 1) + r(a - 1, b + 1)
            if mult < 0:
                raise AssertionError(f"negative multiplicity at [{a}, {b}]")
            bars.extend([(a, b)] * mult)
        mult = r(a, m - 1) - r(a - 1, m - 1)
        if mult < 0:
            raise AssertionError(f"negative multiplicity at [{a}, inf)")
        bars.extend([(a, None)] * mult)
    return Barcode(bars)


def decompose_copersistence(module: CopersistenceModule) -> Barcode:
    """Barcode of a backward diagram, via the transposed forward module."""
    return decompose_by_ranks(module.transposed())
