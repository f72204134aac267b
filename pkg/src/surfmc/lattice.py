"""Planar surface-code geometry.

Coordinates are stored doubled, so a qubit on the horizontal link
(i+1/2, j) lives at (2i+1, 2j) and one on the vertical link (i, j+1/2)
at (2i, 2j+1).  Plaquette (x, y) is the face centred at (x+1/2, y+1/2).

Layout for linear size L:

* horizontal qubits (i+1/2, j),  i in [0, L), j in [0, L)
* vertical qubits   (i, j+1/2),  i in [1, L), j in [0, L-1)
* stars at vertices (i, j),      i in [1, L), j in [0, L)
* plaquettes        (x+1/2, y+1/2), x in [0, L), y in [0, L-1)

Top and bottom (j = 0, j = L-1) are rough: dual strings end there.
"""

from dataclasses import dataclass, field

import numpy as np

# Squared doubled distances (4 d^2) of the first few neighbour shells.
# Shells beyond the fourth would need a larger offset search below.
MAX_NEIGHBOR_ORDER = 4


@dataclass(frozen=True)
class LatticeGeometry:
    L: int
    coords: np.ndarray          # (N, 2) doubled integer coordinates
    stars: tuple                # tuple of int arrays
    plaquettes: tuple           # tuple of int arrays
    logical_x_columns: np.ndarray  # (L, L): column i -> qubits (i+1/2, j), j = 0..L-1
    logical_z_rows: np.ndarray     # (L, L): row j -> qubits (i+1/2, j), i = 0..L-1
    grid: np.ndarray = field(repr=False)  # (2L+1, 2L+1) doubled coord -> index, -1 if empty
    plaquette_qubits: np.ndarray = field(repr=False)  # (P, 4), -1 padded
    plaquette_sizes: np.ndarray = field(repr=False)

    @property
    def n_qubits(self):
        return len(self.coords)

    @property
    def n_star(self):
        return len(self.stars)

    @property
    def n_plaquettes(self):
        return len(self.plaquettes)

    def qubit_at(self, X, Y):
        """Index of the qubit at doubled coordinate (X, Y), or -1."""
        if 0 <= X < self.grid.shape[0] and 0 <= Y < self.grid.shape[1]:
            return int(self.grid[X, Y])
        return -1

    def plaquette_index(self, x, y):
        if not (0 <= x < self.L and 0 <= y < self.L - 1):
            raise ValueError(f"plaquette ({x}, {y}) outside L={self.L} lattice")
        return x * (self.L - 1) + y

    def plaquette_coord(self, p):
        return divmod(int(p), self.L - 1)

    def central_qubit(self):
        """Horizontal qubit nearest the geometric centre."""
        centre = np.array([self.L, self.L - 1])
        d = ((self.coords - centre) ** 2).sum(axis=1)
        horiz = self.coords[:, 0] % 2 == 1
        d = np.where(horiz, d, np.iinfo(d.dtype).max)
        return int(np.argmin(d))

    def star_array(self):
        return _padded(self.stars)


def _padded(groups):
    arr = np.full((len(groups), 4), -1, dtype=np.int64)
    counts = np.zeros(len(groups), dtype=np.int64)
    for k, g in enumerate(groups):
        arr[k, : len(g)] = g
        counts[k] = len(g)
    return arr, counts


def build_lattice(L):
    """Build the planar surface code of linear size ``L`` (N = L^2 + (L-1)^2)."""
    if int(L) != L or L < 2:
        raise ValueError(f"lattice size must be an integer >= 2, got {L!r}")
    L = int(L)
    coords = []
    for i in range(L):
        for j in range(L):
            coords.append((2 * i + 1, 2 * j))
    for i in range(1, L):
        for j in range(L - 1):
            coords.append((2 * i, 2 * j + 1))
    coords = np.array(coords, dtype=np.int64)

    grid = np.full((2 * L + 1, 2 * L + 1), -1, dtype=np.int64)
    grid[coords[:, 0], coords[:, 1]] = np.arange(len(coords))

    def around(X, Y):
        out = []
        for dX, dY in ((-1, 0), (1, 0), (0, -1), (0, 1)):
            a, b = X + dX, Y + dY
            if 0 <= a <= 2 * L and 0 <= b <= 2 * L and grid[a, b] >= 0:
                out.append(int(grid[a, b]))
        return np.array(sorted(out), dtype=np.int64)

    stars = tuple(around(2 * i, 2 * j) for i in range(1, L) for j in range(L))
    plaquettes = tuple(around(2 * x + 1, 2 * y + 1)
                       for x in range(L) for y in range(L - 1))

    cols = np.array([[grid[2 * i + 1, 2 * j] for j in range(L)] for i in range(L)])
    rows = np.array([[grid[2 * i + 1, 2 * j] for i in range(L)] for j in range(L)])
    plaq_q, plaq_n = _padded(plaquettes)
    for a in (coords, grid, cols, rows, plaq_q, plaq_n):
        a.setflags(write=False)
    return LatticeGeometry(L=L, coords=coords, stars=stars, plaquettes=plaquettes,
                           logical_x_columns=cols, logical_z_rows=rows, grid=grid,
                           plaquette_qubits=plaq_q, plaquette_sizes=plaq_n)


# ---------------------------------------------------------------------------
# neighbour tables


@dataclass(frozen=True)
class NeighborTable:
    """Interacting pairs grouped by neighbour order plus a CSR adjacency.

    ``pairs[m-1]`` holds the unordered (i < j) pairs at the m-th distinct
    link-midpoint distance; orders with J_m = 0 are left empty.
    """
    J: np.ndarray
    shell_d2: np.ndarray     # squared distance (lattice units) of each shell
    pairs: tuple
    pair_i: np.ndarray
    pair_j: np.ndarray
    pair_J: np.ndarray
    indptr: np.ndarray
    indices: np.ndarray
    weights: np.ndarray

    @property
    def n_pairs(self):
        return len(self.pair_i)

    def pair_counts(self):
        return [len(p) for p in self.pairs]


def neighbor_shells(max_order=MAX_NEIGHBOR_ORDER):
    """Squared doubled distances of the first ``max_order`` shells.

    Horizontal-horizontal and vertical-vertical offsets are (even, even),
    mixed ones (odd, odd); the ranking is taken over both families.
    """
    if max_order > MAX_NEIGHBOR_ORDER:
        raise ValueError(f"neighbour order {max_order} unsupported "
                         f"(max {MAX_NEIGHBOR_ORDER})")
    r = 8
    d2 = set()
    for dX in range(-r, r + 1):
        for dY in range(-r, r + 1):
            if (dX + dY) % 2 == 0 and (dX, dY) != (0, 0):
                d2.add(dX * dX + dY * dY)
    return sorted(d2)[:max_order]


def neighbor_table(geom, couplings):
    """Enumerate interacting pairs for couplings J_1..J_M (M <= 4)."""
    J = np.asarray(getattr(couplings, "J", couplings), dtype=float)
    if J.ndim != 1 or len(J) == 0:
        raise ValueError("couplings must be a non-empty 1-D sequence")
    if len(J) > MAX_NEIGHBOR_ORDER:
        raise ValueError(f"neighbour order {len(J)} unsupported "
                         f"(max {MAX_NEIGHBOR_ORDER})")
    shells = neighbor_shells(len(J))
    grid, coords = geom.grid, geom.coords
    G = grid.shape[0]

    groups = []
    for m, D in enumerate(shells):
        if J[m] == 0:
            groups.append(np.zeros((0, 2), dtype=np.int64))
            continue
        offs = [(dX, dY) for dX in range(-4, 5) for dY in range(-4, 5)
                if dX * dX + dY * dY == D]
        found = []
        for dX, dY in offs:
            X2 = coords[:, 0] + dX
            Y2 = coords[:, 1] + dY
            ok = (X2 >= 0) & (X2 < G) & (Y2 >= 0) & (Y2 < G)
            src = np.nonzero(ok)[0]
            dst = grid[X2[ok], Y2[ok]]
            keep = (dst >= 0) & (dst > src)
            found.append(np.stack([src[keep], dst[keep]], axis=1))
        pm = np.concatenate(found) if found else np.zeros((0, 2), dtype=np.int64)
        pm = np.unique(pm, axis=0)
        groups.append(pm.astype(np.int64))

    all_pairs = np.concatenate(groups) if groups else np.zeros((0, 2), np.int64)
    pair_J = np.concatenate([np.full(len(g), J[m]) for m, g in enumerate(groups)])
    N = geom.n_qubits
    src = np.concatenate([all_pairs[:, 0], all_pairs[:, 1]])
    dst = np.concatenate([all_pairs[:, 1], all_pairs[:, 0]])
    w = np.concatenate([pair_J, pair_J])
    order = np.lexsort((dst, src))
    src, dst, w = src[order], dst[order], w[order]
    indptr = np.zeros(N + 1, dtype=np.int64)
    np.add.at(indptr, src + 1, 1)
    indptr = np.cumsum(indptr)
    return NeighborTable(
        J=J.copy(), shell_d2=np.array(shells, dtype=float) / 4.0,
        pairs=tuple(groups), pair_i=all_pairs[:, 0].copy(),
        pair_j=all_pairs[:, 1].copy(), pair_J=pair_J,
        indptr=indptr, indices=dst.astype(np.int64), weights=w.astype(float))


# ---------------------------------------------------------------------------
# syndromes


@dataclass(frozen=True)
class SyndromeSpec:
    """Plaquettes measured as -1, given as (x, y) for the face (x+1/2, y+1/2)."""
    flipped_plaquettes: tuple = ()

    def __post_init__(self):
        pl = tuple(tuple(int(c) for c in p) for p in self.flipped_plaquettes)
        if len(pl) > 2:
            raise ValueError("only 0, 1 or 2 flipped plaquettes are supported")
        if len(set(pl)) != len(pl):
            raise ValueError("flipped plaquettes must be distinct")
        object.__setattr__(self, "flipped_plaquettes", pl)

    @property
    def n_errors(self):
        return len(self.flipped_plaquettes)

    def label(self):
        if not self.flipped_plaquettes:
            return "none"
        return "+".join(f"p{x}_{y}" for x, y in self.flipped_plaquettes)

    def validate(self, geom):
        for x, y in self.flipped_plaquettes:
            geom.plaquette_index(x, y)


@dataclass(frozen=True)
class SyndromeString:
    qubits: np.ndarray
    spec: SyndromeSpec = SyndromeSpec()

    def __len__(self):
        return len(self.qubits)


def syndrome_string(geom, spec):
    """Canonical string of bit flips producing the given plaquette syndrome.

    One error at (x, y) is joined straight down to the bottom rough
    boundary; two errors are joined by a vertical-then-horizontal dual path.
    """
    spec.validate(geom)
    pl = spec.flipped_plaquettes
    qs = []
    if len(pl) == 1:
        x, y = pl[0]
        qs = [geom.qubit_at(2 * x + 1, 2 * j) for j in range(y + 1)]
    elif len(pl) == 2:
        (x1, y1), (x2, y2) = pl
        lo, hi = sorted((y1, y2))
        qs = [geom.qubit_at(2 * x1 + 1, 2 * j) for j in range(lo + 1, hi + 1)]
        lo, hi = sorted((x1, x2))
        qs += [geom.qubit_at(2 * i, 2 * y2 + 1) for i in range(lo + 1, hi + 1)]
    q = np.array(sorted(qs), dtype=np.int64)
    assert (q >= 0).all()
    q.setflags(write=False)
    return SyndromeString(qubits=q, spec=spec)


def incidence_matrix(geom, kind="plaquettes"):
    """Dense 0/1 matrix (stabilizers x qubits)."""
    groups = getattr(geom, kind)
    M = np.zeros((len(groups), geom.n_qubits), dtype=np.uint8)
    for k, g in enumerate(groups):
        M[k, g] = 1
    return M
