"""Homology-valued sheaves on a label simplex.

A labeling of the vertices of a filtered complex induces a simplicial
map to the full simplex on the label set.  Each label subset cuts out
the part of the complex carried by those labels; taking degree-n
homology of these parts gives a sheaf on the label simplex whose
cohomology separates features living inside single classes from
features needing several.  The two-label pipeline instead pulls a
fixed rank-one-into-rank-two sheaf back onto the complex and tracks
its sections over the filtration.
"""

from __future__ import annotations

from itertools import combinations

from .cohomology import (
    chain_inclusion_matrix,
    cosheaf_homology_basis,
    persistent_cohomology,
    simplicial_chain_complex,
)
from .complexes import FilteredComplex, SimplicialMap, Simplex, preimage_subcomplex
from .linalg import matrix
from .persistence import Barcode
from .sheaves import CellularSheaf, SheafDiagram, SheafMorphism, _codim1_pairs, pullback
from .typet import type_t_direct

__all__ = [
    "full_label_complex",
    "LabeledFiltration",
    "label_sheaf",
    "label_diagram",
    "mixed_feature_barcodes",
    "two_label_sheaf",
    "unicolored_pipeline",
]


def full_label_complex(field, names) -> FilteredComplex:
    """The full simplex on a set of label names, all entries zero.

    Vertex i is the i-th name in sorted order; a subset's id joins its
    sorted names with dots, so the names themselves must not contain
    dots.
    """
    names = sorted(set(names))
    for name in names:
        if "." in name:
            raise ValueError(f"label name {name!r} contains a dot")
    simplices = []
    for r in range(1, len(names) + 1):
        for combo in combinations(range(len(names)), r):
            sid = ".".join(names[i] for i in combo)
            simplices.append(Simplex(sid, combo, 0))
    return FilteredComplex(field, simplices, steps=1)


class LabeledFiltration:
    """A filtered complex with one label per vertex.

    Carries the induced simplicial map onto the full simplex over the
    occurring labels, and caches the labeled parts: for a label subset
    tau, preimage(tau) is the subcomplex of simplices all of whose
    vertices carry labels in tau, filtered like the ambient complex.
    """

    def __init__(self, filtration: FilteredComplex, labels: dict):
        self.filtration = filtration
        self.labels = dict(labels)
        missing = [v for v in filtration.vertices if v not in self.labels]
        if missing:
            raise ValueError(f"unlabeled vertices: {missing}")
        self.names = tuple(
            sorted({self.labels[v] for v in filtration.vertices})
        )
        self.label_complex = full_label_complex(filtration.field, self.names)
        index = {name: i for i, name in enumerate(self.names)}
        self.map = SimplicialMap(
            filtration,
            self.label_complex,
            {v: index[self.labels[v]] for v in filtration.vertices},
        )
        self._preimages: dict[str, FilteredComplex] = {}

    def preimage(self, tau) -> FilteredComplex:
        tid = tau if isinstance(tau, str) else tau.id
        got = self._preimages.get(tid)
        if got is None:
            got = preimage_subcomplex(self.map, tid)
            self._preimages[tid] = got
        return got


def _vertex_map(f) -> dict:
    return f.vertex_map if isinstance(f, SimplicialMap) else dict(f)


def _homology_layer(label_complex, parts: dict, n: int):
    """Chain complexes, homology bases and stalk dims per label simplex."""
    chains = {tid: simplicial_chain_complex(sub) for tid, sub in parts.items()}
    bases = {
        tid: cosheaf_homology_basis(None, n, chains=ch)
        for tid, ch in chains.items()
    }
    return chains, bases


def _sheaf_from_layer(label_complex, chains, bases, n) -> CellularSheaf:
    field = label_complex.field
    stalks = {tid: b.dim for tid, b in bases.items()}
    restrictions = {}
    for f, t in _codim1_pairs(label_complex):
        if stalks[f.id] == 0 or stalks[t.id] == 0:
            continue
        inc = chain_inclusion_matrix(chains[f.id], chains[t.id], n)
        restrictions[(f.id, t.id)] = bases[t.id].coords(
            field.matmul(inc, bases[f.id].representatives)
        )
    return CellularSheaf(label_complex, stalks, restrictions)


def label_sheaf(complex_, label_complex, f, n: int) -> CellularSheaf:
    """H_n of every labeled part, arranged as a sheaf on the label simplex.

    The stalk at a label subset tau is H_n of the part of complex_
    carried by tau's labels; restriction to a larger subset is induced
    by the inclusion of parts, computed on stored cycle representatives.
    """
    vm = _vertex_map(f)
    fi = SimplicialMap(
        complex_, label_complex, {v: vm[v] for v in complex_.vertices}
    )
    parts = {
        t.id: preimage_subcomplex(fi, t.id) for t in label_complex.simplices
    }
    chains, bases = _homology_layer(label_complex, parts, n)
    return _sheaf_from_layer(label_complex, chains, bases, n)


def label_diagram(lf: LabeledFiltration, n: int) -> SheafDiagram:
    """One label sheaf per filtration step, joined by inclusion-induced maps."""
    x = lf.filtration
    l = lf.label_complex
    field = x.field
    m = x.steps
    pre = {t.id: lf.preimage(t.id) for t in l.simplices}
    chains, bases, snapshots = [], [], []
    for i in range(m):
        parts = {tid: p.subcomplex(i) for tid, p in pre.items()}
        ch, bs = _homology_layer(l, parts, n)
        chains.append(ch)
        bases.append(bs)
        snapshots.append(_sheaf_from_layer(l, ch, bs, n))
    steps = []
    for i in range(m - 1):
        comp = {}
        for tid in pre:
            a, b = bases[i][tid], bases[i + 1][tid]
            if a.dim == 0 or b.dim == 0:
                continue
            inc = chain_inclusion_matrix(chains[i][tid], chains[i + 1][tid], n)
            comp[tid] = b.coords(field.matmul(inc, a.representatives))
        steps.append(SheafMorphism(snapshots[i], snapshots[i + 1], comp))
    return SheafDiagram(snapshots, steps)


def mixed_feature_barcodes(lf: LabeledFiltration, n: int, k: int) -> Barcode:
    """Persistence of H^k of the degree-n label sheaves along the filtration.

    Always computed pointwise: the inclusion-induced morphisms kill
    homology classes, so they are rarely stalk-wise injective.
    """
    _, barcode = persistent_cohomology(label_diagram(lf, n), k)
    return barcode


def two_label_sheaf(label_complex: FilteredComplex) -> CellularSheaf:
    """The fixed sheaf on a two-label simplex with no nonzero global sections.

    Both vertex stalks are one-dimensional and inject into the
    two-dimensional edge stalk on complementary coordinates, so a
    global section must vanish at both endpoints of any mixed edge.
    """
    vertices = label_complex.simplices_of_dim(0)
    edges = label_complex.simplices_of_dim(1)
    if len(vertices) != 2 or len(edges) != 1:
        raise ValueError("expected the full simplex on exactly 2 labels")
    left, right = vertices
    edge = edges[0]
    p = label_complex.field.p
    stalks = {left.id: 1, right.id: 1, edge.id: 2}
    restrictions = {
        (left.id, edge.id): matrix([[1], [0]], p),
        (right.id, edge.id): matrix([[0], [1]], p),
    }
    return CellularSheaf(label_complex, stalks, restrictions)


def unicolored_pipeline(lf: LabeledFiltration, k: int) -> Barcode:
    """Backward persistence of single-color information over the filtration.

    Pulls the two-label sheaf back onto the complex (one dimension on
    single-label simplices, two on mixed ones) and runs the backward
    cohomology construction; at k=0 the bars are the lifetimes of
    unicolored components.
    """
    if len(lf.names) != 2:
        raise ValueError("the unicolored pipeline needs exactly 2 labels")
    sheaf = pullback(lf.map, two_label_sheaf(lf.label_complex))
    _, barcode = type_t_direct(sheaf, k)
    return barcode
