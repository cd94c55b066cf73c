"""Simplicial posets: construction, validation, and face-order combinatorics.

A simplicial poset is a finite ranked poset with a unique minimal element
whose lower ideals are Boolean lattices.  Cells carry user-supplied string
identifiers; the canonical total order (rank, then identifier) fixes every
basis ordering downstream, which is what makes reports reproducible.

All values are immutable after validation and every operation is a pure
function, so shared instances are safe to use concurrently.
"""

from __future__ import annotations

import json
from math import comb
from typing import Iterable, Mapping, Sequence

from .errors import AxiomViolation, ParseError

#: Identifier reserved for the unique minimal cell.
MIN_ID = ""

#: Separator used to synthesize cell ids in from_facets.
_SEP = ","


def h_vector(f: Sequence[int], n: int) -> tuple[int, ...]:
    """h-numbers from the f-vector via exact integer polynomial expansion.

    Uses the generating identity sum_k h_k t^k = sum_i f_{i-1} t^i (1-t)^(n-i),
    with f indexed so that f[0] = f_{-1} = 1.
    """
    if len(f) != n + 1:
        raise ValueError(f"f-vector must have length n+1 = {n + 1}, got {len(f)}")
    return tuple(
        sum(f[i] * (-1) ** (k - i) * comb(n - i, k - i) for i in range(k + 1))
        for k in range(n + 1)
    )


class SimplicialComplex:
    """Abstract simplicial complex over labelled vertices with a fixed total order.

    The vertex order determines boundary signs, so complexes that are compared
    or paired (relative homology) must share the same ordering map.
    """

    __slots__ = ("vertex_key", "faces")

    def __init__(
        self,
        simplices: Iterable[Sequence[str]],
        vertex_key: Mapping[str, int],
        close: bool = False,
    ):
        seen: set[tuple[str, ...]] = set()
        for s in simplices:
            t = tuple(sorted(set(s), key=lambda v: vertex_key[v]))
            if len(t) != len(tuple(s)):
                raise ValueError(f"simplex with repeated vertices: {s!r}")
            seen.add(t)
        if close:
            stack = list(seen)
            while stack:
                t = stack.pop()
                if len(t) > 1:
                    for i in range(len(t)):
                        face = t[:i] + t[i + 1 :]
                        if face not in seen:
                            seen.add(face)
                            stack.append(face)
        by_dim: dict[int, list[tuple[str, ...]]] = {}
        for t in seen:
            by_dim.setdefault(len(t) - 1, []).append(t)
        top = max(by_dim) if by_dim else -1
        self.vertex_key = dict(vertex_key)
        self.faces: tuple[tuple[tuple[str, ...], ...], ...] = tuple(
            tuple(sorted(by_dim.get(k, []), key=self._tuple_key))
            for k in range(top + 1)
        )

    def _tuple_key(self, t: tuple[str, ...]):
        return tuple(self.vertex_key[v] for v in t)

    @property
    def dim(self) -> int:
        return len(self.faces) - 1

    @property
    def is_empty(self) -> bool:
        return not self.faces

    def counts(self) -> tuple[int, ...]:
        """Number of simplices per dimension."""
        return tuple(len(fs) for fs in self.faces)

    def simplex_set(self) -> frozenset[tuple[str, ...]]:
        return frozenset(t for fs in self.faces for t in fs)

    def contains(self, other: "SimplicialComplex") -> bool:
        return other.simplex_set() <= self.simplex_set()

    @classmethod
    def from_facets(cls, facets: Iterable[Sequence[str]]) -> "SimplicialComplex":
        facets = [tuple(str(v) for v in f) for f in facets]
        labels = sorted({v for f in facets for v in f})
        key = {v: i for i, v in enumerate(labels)}
        return cls(facets, key, close=True)


class SimplicialPoset:
    """Finite pure simplicial poset, validated on construction.

    Construction takes the rank of every proper cell and its cover relation
    (the list of codimension-one faces); the minimal cell is implicit.  The
    validator checks gradedness, uniqueness of the minimum, Boolean lower
    ideals, and purity, and names the offending cell on failure.
    """

    __slots__ = (
        "n",
        "cells",
        "rank",
        "below",
        "above",
        "vertices_of",
        "covers",
        "_index",
        "_mj_cache",
        "_order_complex",
    )

    def __init__(self, ranks: Mapping[str, int], covers: Mapping[str, Iterable[str]]):
        rank: dict[str, int] = {MIN_ID: 0}
        for cid, r in ranks.items():
            if not isinstance(cid, str) or not cid:
                raise ParseError(f"cell id must be a nonempty string, got {cid!r}")
            if not isinstance(r, int) or r < 1:
                raise ParseError(f"cell {cid!r}: rank must be a positive integer, got {r!r}")
            rank[cid] = r
        if len(rank) == 1:
            raise ParseError("poset has no cells")

        cover: dict[str, tuple[str, ...]] = {MIN_ID: ()}
        for cid in ranks:
            faces = tuple(covers.get(cid, ()))
            if len(set(faces)) != len(faces):
                raise ParseError(f"cell {cid!r}: duplicate face reference")
            if rank[cid] == 1:
                if faces:
                    raise ParseError(f"vertex {cid!r} must not list faces")
                faces = (MIN_ID,)
            else:
                for f in faces:
                    if f not in rank:
                        raise ParseError(f"cell {cid!r} references unknown cell {f!r}")
                    if rank[f] != rank[cid] - 1:
                        raise AxiomViolation(
                            f"cell {cid!r} (rank {rank[cid]}) covers {f!r} of rank "
                            f"{rank[f]}; covers must drop rank by exactly one",
                            cell=cid,
                            axiom="graded",
                        )
            cover[cid] = faces

        order = sorted(rank, key=lambda c: (rank[c], c))
        below: dict[str, frozenset[str]] = {}
        vertices_of: dict[str, tuple[str, ...]] = {}
        for cid in order:
            r = rank[cid]
            ideal: set[str] = {cid}
            for f in cover[cid]:
                ideal |= below[f]
            atoms = tuple(sorted(c for c in ideal if rank[c] == 1))
            if len(atoms) != r:
                raise AxiomViolation(
                    f"cell {cid!r} has rank {r} but {len(atoms)} vertices below it",
                    cell=cid,
                    axiom="boolean",
                )
            full = ideal | {MIN_ID}
            if len(full) != 2**r:
                raise AxiomViolation(
                    f"lower ideal of cell {cid!r} has {len(full)} cells, expected "
                    f"2^{r} = {2**r}",
                    cell=cid,
                    axiom="boolean",
                )
            atom_sets = {}
            for c in full:
                key = frozenset(vertices_of[c]) if c != cid else frozenset(atoms)
                if key in atom_sets:
                    raise AxiomViolation(
                        f"cells {atom_sets[key]!r} and {c!r} below {cid!r} share the "
                        f"vertex set {sorted(key)}; lower ideal is not Boolean",
                        cell=cid,
                        axiom="boolean",
                    )
                atom_sets[key] = c
            below[cid] = frozenset(full)
            vertices_of[cid] = atoms
        below[MIN_ID] = frozenset({MIN_ID})
        vertices_of[MIN_ID] = ()

        above: dict[str, set[str]] = {c: set() for c in rank}
        for cid, ideal in below.items():
            for c in ideal:
                above[c].add(cid)

        maximal = sorted(c for c in rank if c != MIN_ID and above[c] == {c})
        ranks_of_max = {rank[c] for c in maximal}
        if len(ranks_of_max) > 1:
            lo = min(maximal, key=lambda c: (rank[c], c))
            hi = max(maximal, key=lambda c: (rank[c], c))
            raise AxiomViolation(
                f"poset is not pure: maximal cells {lo!r} (rank {rank[lo]}) and "
                f"{hi!r} (rank {rank[hi]}) differ in rank",
                cell=hi,
                axiom="pure",
            )

        self.n = max(rank.values())
        self.rank = rank
        self.covers = cover
        self.below = below
        self.above = {c: frozenset(s) for c, s in above.items()}
        self.vertices_of = vertices_of
        self.cells = tuple(sorted(rank, key=lambda c: (rank[c], c)))
        self._index = {c: i for i, c in enumerate(self.cells)}
        self._mj_cache: dict[tuple[str, str], tuple[str | None, tuple[str, ...]]] = {}
        self._order_complex: SimplicialComplex | None = None

    # -- basic queries ---------------------------------------------------

    @property
    def proper_cells(self) -> tuple[str, ...]:
        return self.cells[1:]

    @property
    def vertices(self) -> tuple[str, ...]:
        return tuple(c for c in self.cells if self.rank[c] == 1)

    @property
    def m(self) -> int:
        return len(self.vertices)

    @property
    def facets(self) -> tuple[str, ...]:
        return tuple(c for c in self.cells if self.above[c] == {c})

    def leq(self, a: str, b: str) -> bool:
        return a in self.below[b]

    def cell_key(self, c: str) -> int:
        """Position in the canonical (rank, id) order; fixes basis orderings."""
        return self._index[c]

    def f_vector(self) -> tuple[int, ...]:
        counts = [0] * (self.n + 1)
        for c in self.cells:
            counts[self.rank[c]] += 1
        return tuple(counts)

    def h(self) -> tuple[int, ...]:
        return h_vector(self.f_vector(), self.n)

    # -- meets and joins -------------------------------------------------

    def meet_join(self, a: str, b: str) -> tuple[str | None, tuple[str, ...]]:
        """Intersection and the set of least upper bounds of two cells.

        Returns (meet, joins).  joins are the minimal common upper bounds in
        canonical order; the meet is only defined (non-None) when joins is
        nonempty, in which case it is computed inside the Boolean ideal of
        each join and checked for consistency across joins.
        """
        if a not in self.rank or b not in self.rank:
            raise KeyError(f"unknown cell {a!r} or {b!r}")
        key = (a, b) if self._index[a] <= self._index[b] else (b, a)
        cached = self._mj_cache.get(key)
        if cached is not None:
            return cached
        ups = self.above[a] & self.above[b]
        joins = tuple(
            sorted(
                (u for u in ups if len(self.below[u] & ups) == 1),
                key=self.cell_key,
            )
        )
        if not joins:
            result: tuple[str | None, tuple[str, ...]] = (None, ())
            self._mj_cache[key] = result
            return result
        lows = self.below[a] & self.below[b]
        target = frozenset(self.vertices_of[a]) & frozenset(self.vertices_of[b])
        meets = set()
        for j in joins:
            matches = [
                c
                for c in lows
                if c in self.below[j] and frozenset(self.vertices_of[c]) == target
            ]
            if len(matches) != 1:
                raise AxiomViolation(
                    f"cells {a!r} and {b!r} have no well-defined intersection "
                    f"inside join {j!r}",
                    cell=j,
                    axiom="boolean",
                )
            meets.add(matches[0])
        if len(meets) != 1:
            raise AxiomViolation(
                f"cells {a!r} and {b!r} give inconsistent meets across joins "
                f"{joins!r}",
                cell=a,
                axiom="boolean",
            )
        result = (meets.pop(), joins)
        self._mj_cache[key] = result
        return result

    # -- order complex and dual faces -------------------------------------

    def _chains_within(self, subset: frozenset[str]) -> list[tuple[str, ...]]:
        """All strict chains of proper cells inside subset, as tuples."""
        order = [c for c in self.cells if c != MIN_ID and c in subset]
        ending: dict[str, list[tuple[str, ...]]] = {}
        chains: list[tuple[str, ...]] = []
        for c in order:
            exts: list[tuple[str, ...]] = [(c,)]
            blw = self.below[c]
            for b in order:
                if b == c:
                    break
                if b in blw:
                    exts.extend(ch + (c,) for ch in ending[b])
            ending[c] = exts
            chains.extend(exts)
        return chains

    def order_complex(self) -> SimplicialComplex:
        """Barycentric subdivision: the flag complex of strict chains."""
        if self._order_complex is None:
            chains = self._chains_within(frozenset(self.proper_cells))
            self._order_complex = SimplicialComplex(chains, self._index)
        return self._order_complex

    def dual_face_pair(self, cell: str) -> tuple[SimplicialComplex, SimplicialComplex]:
        """The dual face G and its boundary, as subcomplexes of the subdivision.

        G is spanned by chains whose minimum is >= cell, the boundary by
        chains whose minimum is strictly above it.  dim G = n - rank(cell).
        """
        if cell == MIN_ID:
            raise ParseError("the dual face of the minimal cell is the whole space")
        if cell not in self.rank:
            raise KeyError(f"unknown cell {cell!r}")
        up = self.above[cell]
        g = SimplicialComplex(self._chains_within(up), self._index)
        dg = SimplicialComplex(self._chains_within(up - {cell}), self._index)
        return g, dg


# -- construction from input documents ------------------------------------


def from_facets(facets: Iterable[Iterable]) -> SimplicialPoset:
    """Poset of all subsets of the given facets, ordered by inclusion.

    Identical facets are deduplicated; a facet properly contained in another
    and facets of different sizes (non-pure input) are rejected.
    """
    norm: list[tuple[str, ...]] = []
    seen: set[frozenset[str]] = set()
    for f in facets:
        labels = [str(v) for v in f]
        if not labels:
            raise ParseError("empty facet")
        for v in labels:
            if _SEP in v:
                raise ParseError(f"vertex label {v!r} must not contain {_SEP!r}")
        fs = frozenset(labels)
        if len(fs) != len(labels):
            raise ParseError(f"facet {sorted(labels)} repeats a vertex")
        if fs in seen:
            continue
        seen.add(fs)
        norm.append(tuple(sorted(fs)))
    if not norm:
        raise ParseError("no facets given")
    for i, f in enumerate(norm):
        for g in norm[i + 1 :]:
            a, b = set(f), set(g)
            if a < b or b < a:
                small, big = (f, g) if len(f) < len(g) else (g, f)
                raise AxiomViolation(
                    f"facet {list(small)} is contained in facet {list(big)}; "
                    "input is non-pure or redundant",
                    cell=_SEP.join(small),
                    axiom="pure",
                )
    sizes = {len(f) for f in norm}
    if len(sizes) > 1:
        small = min(norm, key=len)
        big = max(norm, key=len)
        raise AxiomViolation(
            f"non-pure input: facet {list(small)} has {len(small)} vertices but "
            f"facet {list(big)} has {len(big)}",
            cell=_SEP.join(big),
            axiom="pure",
        )

    cells: set[tuple[str, ...]] = set()
    for f in norm:
        k = len(f)
        stack = [f]
        while stack:
            t = stack.pop()
            if t in cells or not t:
                continue
            cells.add(t)
            if len(t) > 1:
                for i in range(len(t)):
                    stack.append(t[:i] + t[i + 1 :])

    def cid(t: tuple[str, ...]) -> str:
        return _SEP.join(t)

    ranks = {cid(t): len(t) for t in cells}
    covers = {
        cid(t): [cid(t[:i] + t[i + 1 :]) for i in range(len(t))]
        for t in cells
        if len(t) > 1
    }
    return SimplicialPoset(ranks, covers)


def load_document(obj) -> SimplicialPoset:
    """Build a poset from a parsed input document.

    The document is an object with either complex.facets (a list of lists of
    vertex labels) or poset.cells (records {id, rank, facets}).  Rank-1 cells
    referenced but not declared are created automatically.
    """
    if not isinstance(obj, dict):
        raise ParseError("input document must be an object")
    if "complex" in obj:
        section = obj["complex"]
        if not isinstance(section, dict) or "facets" not in section:
            raise ParseError("'complex' must be an object with a 'facets' list")
        facets = section["facets"]
        if not isinstance(facets, list) or not all(isinstance(f, list) for f in facets):
            raise ParseError("'complex.facets' must be a list of lists of labels")
        return from_facets(facets)
    if "poset" in obj:
        section = obj["poset"]
        if not isinstance(section, dict) or "cells" not in section:
            raise ParseError("'poset' must be an object with a 'cells' list")
        records = section["cells"]
        if not isinstance(records, list):
            raise ParseError("'poset.cells' must be a list of records")
        ranks: dict[str, int] = {}
        covers: dict[str, list[str]] = {}
        for rec in records:
            if not isinstance(rec, dict) or "id" not in rec or "rank" not in rec:
                raise ParseError(f"cell record must have 'id' and 'rank': {rec!r}")
            cid = rec["id"]
            if not isinstance(cid, str):
                raise ParseError(f"cell id must be a string: {cid!r}")
            if cid in ranks:
                raise ParseError(f"duplicate cell id {cid!r}")
            rank = rec["rank"]
            faces = rec.get("facets", [])
            if not isinstance(faces, list) or not all(isinstance(x, str) for x in faces):
                raise ParseError(f"cell {cid!r}: 'facets' must be a list of ids")
            ranks[cid] = rank
            covers[cid] = list(faces)
        # auto-create rank-1 cells referenced from rank-2 cells
        for cid, faces in list(covers.items()):
            if ranks.get(cid) == 2:
                for f in faces:
                    if f not in ranks:
                        ranks[f] = 1
                        covers[f] = []
        return SimplicialPoset(ranks, covers)
    raise ParseError("input document needs a 'complex' or 'poset' section")


def load_poset(text: str) -> SimplicialPoset:
    """Parse a JSON document and build the validated poset."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    return load_document(obj)


def load_path(path) -> SimplicialPoset:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return load_poset(text)
