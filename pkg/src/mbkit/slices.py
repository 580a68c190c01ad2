"""Principal 3D slices of the tricomplex degree-p multibrot set.

A slice confines the parameter c to the span of three distinct basis units.
There are 56 such spans.  Slices whose dynamics are conjugate under a signed
coefficient permutation render identically; for p = 3 the conjugacy catalog
connects all 56 into exactly four classes (Tetrabric, Perplexbric,
Hourglassbric, Metabric).

Four catalog maps are fixed explicit permutations; the rest of the catalog
is found by a bounded deterministic search over signed unit permutations and
every map is validated numerically before classification uses it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, permutations, product

import numpy as np

from .dynamics import IterationParams, escape_bound, grid_counts_tricomplex
from .hypercomplex import (
    Tricomplex,
    UnitIndex,
    iteration_span_units,
    parse_unit,
    pow_batch,
    unit_product,
)

U = UnitIndex


@dataclass(frozen=True)
class SliceSpec:
    """Ordered triple of distinct basis units defining a 3D parameter span."""

    units: tuple[UnitIndex, UnitIndex, UnitIndex]

    def __post_init__(self):
        us = tuple(UnitIndex(u) for u in self.units)
        if len(set(us)) != 3:
            raise ValueError(f"slice units must be distinct, got {self.units}")
        object.__setattr__(self, "units", us)

    @staticmethod
    def of(*units: UnitIndex) -> "SliceSpec":
        return SliceSpec(tuple(units))

    @staticmethod
    def parse(text: str) -> "SliceSpec":
        parts = [parse_unit(tok) for tok in text.split(",")]
        if len(parts) != 3:
            raise ValueError(f"expected three comma-separated units, got {text!r}")
        return SliceSpec(tuple(parts))

    @property
    def canonical_key(self) -> tuple[int, int, int]:
        return tuple(sorted(int(u) for u in self.units))

    @property
    def span4(self) -> tuple[UnitIndex, ...]:
        """The 4 units spanning the iteration space of this slice."""
        return iteration_span_units(self.units)

    def label(self) -> str:
        return ",".join(u.label for u in self.units)

    def __str__(self) -> str:
        return f"T({self.label()})"


def enumerate_slices() -> list[SliceSpec]:
    """All 56 three-unit spans in ascending canonical order."""
    return [SliceSpec(tuple(c)) for c in combinations(UnitIndex, 3)]


def embed_slice_point(spec: SliceSpec, coords) -> Tricomplex:
    """Tricomplex number with exactly the slice's three coefficients set."""
    c = [0.0] * 8
    vals = tuple(coords)
    if len(vals) != 3:
        raise ValueError("need exactly three coordinates")
    for u, v in zip(spec.units, vals):
        c[u] = float(v)
    return Tricomplex(tuple(c))


# The four principal degree-3 slices and their conventional names.
PRINCIPAL_SLICES: dict[str, SliceSpec] = {
    "Tetrabric": SliceSpec.of(U.ONE, U.I1, U.I2),
    "Perplexbric": SliceSpec.of(U.ONE, U.J1, U.J2),
    "Hourglassbric": SliceSpec.of(U.ONE, U.I1, U.J1),
    "Metabric": SliceSpec.of(U.I1, U.I2, U.I3),
}


@dataclass(frozen=True)
class ConjugacyMap:
    """Signed coefficient permutation conjugating one slice's map into another's.

    phi maps each source iteration-span unit u to (sign, target unit); the
    parameter map is its restriction to the slice units.  Validity means
    phi(Q_{p,c}(phi^{-1}(eta))) = Q_{p,phi(c)}(eta) on the whole target span.
    """

    source: SliceSpec
    target: SliceSpec
    phi: tuple[tuple[UnitIndex, int, UnitIndex], ...]

    def __post_init__(self):
        src_units = set(self.source.span4)
        tgt_units = set(self.target.span4)
        dom = [e[0] for e in self.phi]
        img = [e[2] for e in self.phi]
        if set(dom) != src_units or len(dom) != 4:
            raise ValueError("phi domain must be the source iteration span")
        if set(img) != tgt_units or len(set(img)) != 4:
            raise ValueError("phi image must be the target iteration span")
        if any(s not in (-1, 1) for _, s, _ in self.phi):
            raise ValueError("phi signs must be +-1")
        moved = {u: v for u, _, v in self.phi}
        if {moved[u] for u in self.source.units} != set(self.target.units):
            raise ValueError("phi must map slice units onto slice units")
        object.__setattr__(self, "phi", tuple(sorted(self.phi)))

    @property
    def c_map(self) -> tuple[tuple[UnitIndex, int, UnitIndex], ...]:
        """Restriction of phi to the three parameter units."""
        keep = set(self.source.units)
        return tuple(e for e in self.phi if e[0] in keep)

    def _table(self) -> dict[UnitIndex, tuple[int, UnitIndex]]:
        return {u: (s, v) for u, s, v in self.phi}

    def inverse(self) -> "ConjugacyMap":
        inv = tuple((v, s, u) for u, s, v in self.phi)
        return ConjugacyMap(self.target, self.source, inv)

    def apply(self, t: Tricomplex) -> Tricomplex:
        tab = self._table()
        out = [0.0] * 8
        for k, val in enumerate(t.x):
            if val == 0.0:
                continue
            u = UnitIndex(k)
            if u not in tab:
                raise ValueError(f"{t} has support outside the source span")
            s, v = tab[u]
            out[v] += s * val
        return Tricomplex(tuple(out))

    def apply_batch(self, x8: np.ndarray) -> np.ndarray:
        out = np.zeros_like(x8)
        for u, s, v in self.phi:
            out[v] = s * x8[u]
        return out

    def apply_inverse_batch(self, x8: np.ndarray) -> np.ndarray:
        out = np.zeros_like(x8)
        for u, s, v in self.phi:
            out[u] = s * x8[v]
        return out


@dataclass(frozen=True)
class ConjugacyReport:
    """Residual summary of a numeric conjugacy check."""

    map: ConjugacyMap
    p: int
    n_samples: int
    max_residual: float
    passed: bool
    witness: tuple[Tricomplex, Tricomplex, float] | None = None


def verify_conjugacy(
    m: ConjugacyMap,
    p: int,
    n_samples: int = 10_000,
    tol: float = 1e-9,
    seed: int = 0,
) -> ConjugacyReport:
    """Check the conjugacy identity on random (eta, c) pairs in [-2, 2] coords.

    Residual is the ring norm of phi(Q_{p,c}(phi^-1(eta))) - Q_{p,phi(c)}(eta);
    on failure the worst offending pair is reported as a witness.
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    rng = np.random.default_rng(seed)
    eta = np.zeros((8, n_samples))
    for u in m.target.span4:
        eta[u] = rng.uniform(-2.0, 2.0, n_samples)
    c = np.zeros((8, n_samples))
    for u in m.source.units:
        c[u] = rng.uniform(-2.0, 2.0, n_samples)
    res = _conjugacy_residuals(m, p, eta, c)
    k = int(np.argmax(res))
    max_res = float(res[k])
    passed = max_res <= tol
    witness = None
    if not passed:
        witness = (
            Tricomplex(tuple(eta[:, k])),
            Tricomplex(tuple(c[:, k])),
            max_res,
        )
    return ConjugacyReport(m, p, n_samples, max_res, passed, witness)


def _conjugacy_residuals(m: ConjugacyMap, p: int, eta: np.ndarray, c: np.ndarray):
    pre = m.apply_inverse_batch(eta)
    lhs = m.apply_batch(pow_batch(pre, p) + c)
    rhs = pow_batch(eta, p) + m.apply_batch(c)
    diff = lhs - rhs
    return np.sqrt(np.einsum("ij,ij->j", diff, diff))


def _phi_from_pairs(source, target, unit_pairs) -> ConjugacyMap:
    return ConjugacyMap(source, target, tuple((u, s, v) for u, s, v in unit_pairs))


def _fixed_bridge_maps() -> list[ConjugacyMap]:
    # Explicit conjugacies linking the slice families; plain-coefficient form.
    return [
        # T(1,i1,i2) ~ T(i1,i2,j1): swap the 1 and j1 coefficients.
        _phi_from_pairs(
            SliceSpec.of(U.ONE, U.I1, U.I2),
            SliceSpec.of(U.I1, U.I2, U.J1),
            [(U.ONE, 1, U.J1), (U.I1, 1, U.I1), (U.I2, 1, U.I2), (U.J1, 1, U.ONE)],
        ),
        # T(1,i1,i2) ~ T(i1,i2,j2): 1 -> j2, j1 -> -j3.
        _phi_from_pairs(
            SliceSpec.of(U.ONE, U.I1, U.I2),
            SliceSpec.of(U.I1, U.I2, U.J2),
            [(U.ONE, 1, U.J2), (U.I1, 1, U.I1), (U.I2, 1, U.I2), (U.J1, -1, U.J3)],
        ),
        # T(1,i1,j1) ~ T(i1,j1,j2): 1 -> j2, i2 -> i4.
        _phi_from_pairs(
            SliceSpec.of(U.ONE, U.I1, U.J1),
            SliceSpec.of(U.I1, U.J1, U.J2),
            [(U.ONE, 1, U.J2), (U.I1, 1, U.I1), (U.I2, 1, U.I4), (U.J1, 1, U.J1)],
        ),
        # T(1,j1,j2) ~ T(j1,j2,j3): cyclic shift 1 -> j1 -> j2 -> j3 -> 1.
        _phi_from_pairs(
            SliceSpec.of(U.ONE, U.J1, U.J2),
            SliceSpec.of(U.J1, U.J2, U.J3),
            [(U.ONE, 1, U.J1), (U.J1, 1, U.J2), (U.J2, 1, U.J3), (U.J3, 1, U.ONE)],
        ),
    ]


_I_UNITS = (U.I1, U.I2, U.I3, U.I4)
_J_UNITS = (U.J1, U.J2, U.J3)


def _slice_families() -> list[list[SliceSpec]]:
    """Slice families whose members share dynamics, each to be connected."""
    fams: list[list[SliceSpec]] = []
    # 1 with two i-units.
    fams.append([SliceSpec.of(U.ONE, a, b) for a, b in combinations(_I_UNITS, 2)])
    # 1 with two j-units.
    fams.append([SliceSpec.of(U.ONE, a, b) for a, b in combinations(_J_UNITS, 2)])
    # Two i-units with their product unit.
    fams.append(
        [SliceSpec.of(a, b, unit_product(a, b)[1]) for a, b in combinations(_I_UNITS, 2)]
    )
    # 1, one i-unit, one j-unit.
    fams.append([SliceSpec.of(U.ONE, a, b) for a in _I_UNITS for b in _J_UNITS])
    # Three i-units.
    fams.append([SliceSpec(tuple(c)) for c in combinations(_I_UNITS, 3)])
    # Two i-units with a j-unit that is not their product.
    mixed = []
    for a, b in combinations(_I_UNITS, 2):
        prod = unit_product(a, b)[1]
        for j in _J_UNITS:
            if j != prod:
                mixed.append(SliceSpec.of(a, b, j))
    fams.append(mixed)
    # One i-unit with two j-units.
    fams.append(
        [SliceSpec.of(a, b, c) for a in _I_UNITS for b, c in combinations(_J_UNITS, 2)]
    )
    # T(j1,j2,j3) stands alone and is reached through a bridge map.
    return fams


def _search_phi(source: SliceSpec, target: SliceSpec, p: int) -> ConjugacyMap | None:
    """Deterministic bounded search for a signed-permutation conjugacy.

    Candidates map slice units onto slice units (so parameters stay valid)
    and the fourth span unit onto the fourth.  Acceptance is numeric: the
    identity must hold on a fixed random sample batch.
    """
    rng = np.random.default_rng(2024)
    n_probe = 8
    eta = np.zeros((8, n_probe))
    for u in target.span4:
        eta[u] = rng.uniform(-2.0, 2.0, n_probe)
    c = np.zeros((8, n_probe))
    for u in source.units:
        c[u] = rng.uniform(-2.0, 2.0, n_probe)
    src4 = [u for u in source.span4 if u not in source.units][0]
    tgt4 = [u for u in target.span4 if u not in target.units][0]
    for perm in permutations(target.units):
        for signs in product((1, -1), repeat=4):
            pairs = [
                (source.units[k], signs[k], perm[k]) for k in range(3)
            ] + [(src4, signs[3], tgt4)]
            cand = ConjugacyMap(source, target, tuple(pairs))
            res = _conjugacy_residuals(cand, p, eta, c)
            if float(res.max()) <= 1e-9:
                return cand
    return None


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb

    def classes(self):
        groups: dict = {}
        for x in self.parent:
            groups.setdefault(self.find(x), []).append(x)
        return list(groups.values())


@lru_cache(maxsize=None)
def conjugacy_catalog(p: int = 3) -> tuple[ConjugacyMap, ...]:
    """Conjugacy maps sufficient to connect the 56 slices into their classes.

    Holds the four fixed bridge maps plus searched spanning maps inside each
    family.  A family member that cannot be reached by any signed-permutation
    map is an error: the stated symmetry failed numeric validation.
    """
    if p != 3:
        raise ValueError("the conjugacy catalog is established for p = 3 only")
    maps = list(_fixed_bridge_maps())
    for family in _slice_families():
        keys = [s.canonical_key for s in family]
        uf = _UnionFind(keys)
        for a, b in combinations(range(len(family)), 2):
            if uf.find(keys[a]) == uf.find(keys[b]):
                continue
            found = _search_phi(family[a], family[b], p)
            if found is not None:
                maps.append(found)
                uf.union(keys[a], keys[b])
        if len(uf.classes()) != 1:
            stranded = sorted(min(cls) for cls in uf.classes())
            raise RuntimeError(
                f"no conjugacy found to connect slice family: components {stranded}"
            )
    return tuple(maps)


@dataclass(frozen=True)
class SliceClassification:
    """Partition of the 56 slices into dynamics classes with named reps."""

    classes: tuple[tuple[SliceSpec, ...], ...]
    representatives: dict[str, SliceSpec]

    @property
    def class_count(self) -> int:
        return len(self.classes)

    def class_of(self, spec: SliceSpec) -> tuple[SliceSpec, ...]:
        key = spec.canonical_key
        for cls in self.classes:
            if any(s.canonical_key == key for s in cls):
                return cls
        raise KeyError(f"{spec} not classified")

    def name_of(self, spec: SliceSpec) -> str | None:
        cls = self.class_of(spec)
        keys = {s.canonical_key for s in cls}
        for name, rep in self.representatives.items():
            if rep.canonical_key in keys:
                return name
        return None


def classify_principal(
    p: int = 3, n_samples: int = 1000, tol: float = 1e-9, seed: int = 0
) -> SliceClassification:
    """Union-find closure over the numerically verified conjugacy catalog."""
    specs = enumerate_slices()
    uf = _UnionFind([s.canonical_key for s in specs])
    for m in conjugacy_catalog(p):
        report = verify_conjugacy(m, p, n_samples=n_samples, tol=tol, seed=seed)
        if report.passed:
            uf.union(m.source.canonical_key, m.target.canonical_key)
    by_key = {s.canonical_key: s for s in specs}
    classes = tuple(
        tuple(by_key[k] for k in cls)
        for cls in sorted(sorted(cls) for cls in uf.classes())
    )
    return SliceClassification(classes, dict(PRINCIPAL_SLICES))


# --- voxel sampling -------------------------------------------------------------


@dataclass(frozen=True)
class VoxelGrid:
    """Iteration-count lattice over a slice window; max_iter marks members."""

    spec: SliceSpec
    origin: tuple[float, float, float]
    spacing: tuple[float, float, float]
    dims: tuple[int, int, int]
    max_iter: int
    cells: np.ndarray = field(compare=False)

    def member_mask(self) -> np.ndarray:
        return self.cells == self.max_iter

    def member_count(self) -> int:
        return int(self.member_mask().sum())

    def cell_volume(self) -> float:
        return self.spacing[0] * self.spacing[1] * self.spacing[2]

    def volume_estimate(self) -> float:
        return self.member_count() * self.cell_volume()

    def write_mbv1(self, path) -> None:
        """Header line, then row-major 32-bit little-endian iteration counts."""
        header = (
            "MBV1 dims {} {} {} origin {} {} {} spacing {} {} {} max_iter {}\n".format(
                *self.dims, *map(repr, self.origin), *map(repr, self.spacing),
                self.max_iter,
            )
        )
        with open(path, "wb") as fh:
            fh.write(header.encode("ascii"))
            fh.write(np.ascontiguousarray(self.cells, dtype="<u4").tobytes())

    def write_pointcloud(self, path) -> None:
        """One "x y z" text line per member cell center."""
        ox, oy, oz = self.origin
        sx, sy, sz = self.spacing
        with open(path, "w", encoding="ascii") as fh:
            for i, j, k in np.argwhere(self.member_mask()).tolist():
                fh.write(f"{ox + i * sx!r} {oy + j * sy!r} {oz + k * sz!r}\n")


def cell_centers(lo: float, hi: float, n: int) -> np.ndarray:
    """Cell-center coordinates; symmetric windows mirror bitwise exactly."""
    if n < 1:
        raise ValueError("need at least one cell")
    mid = (hi + lo) / 2.0
    width = hi - lo
    frac = (2.0 * np.arange(n) + 1.0 - n) / (2.0 * n)
    return frac * width + mid


def sample_slice(
    spec: SliceSpec,
    window,
    dims,
    params: IterationParams,
    prune: bool = False,
    threads: int = 1,
) -> VoxelGrid:
    """Escape counts at every cell center of a 3D window over a slice.

    With prune=True, cells outside the closed discus of radius 2^(1/(p-1))
    cannot be members and are marked escaped at iteration 1 without
    iterating.
    """
    (x0, x1), (y0, y1), (z0, z1) = window
    nx, ny, nz = (int(d) for d in dims)
    if min(nx, ny, nz) < 1:
        raise ValueError("dims must be >= 1")
    if not (x1 > x0 and y1 > y0 and z1 > z0):
        raise ValueError("window must be nonempty")
    xs = cell_centers(x0, x1, nx)
    ys = cell_centers(y0, y1, ny)
    zs = cell_centers(z0, z1, nz)
    gx, gy, gz = np.meshgrid(xs, ys, zs, indexing="ij")
    coords = (gx.ravel(), gy.ravel(), gz.ravel())
    x8 = np.zeros((8, nx * ny * nz))
    for u, vals in zip(spec.units, coords):
        x8[u] = vals

    if prune:
        keep = _inside_discus_batch(x8, escape_bound(params.p))
        counts = np.ones(x8.shape[1], dtype=np.uint32)
        if keep.any():
            inner, _ = grid_counts_tricomplex(x8[:, keep], params, threads=threads)
            counts[keep] = inner
    else:
        counts, _ = grid_counts_tricomplex(x8, params, threads=threads)

    origin = (float(xs[0]), float(ys[0]), float(zs[0]))
    spacing = (
        float((x1 - x0) / nx),
        float((y1 - y0) / ny),
        float((z1 - z0) / nz),
    )
    return VoxelGrid(
        spec=spec,
        origin=origin,
        spacing=spacing,
        dims=(nx, ny, nz),
        max_iter=params.max_iter,
        cells=counts.reshape(nx, ny, nz),
    )


def _inside_discus_batch(x8: np.ndarray, radius: float) -> np.ndarray:
    """Closed-discus membership (both idempotent component norms <= radius)."""
    x = x8
    u1 = np.stack([x[0] + x[7], x[1] + x[4], x[2] - x[3], x[5] - x[6]])
    u2 = np.stack([x[0] - x[7], x[1] - x[4], x[2] + x[3], x[5] + x[6]])
    r2 = radius * radius
    n1 = np.einsum("ij,ij->j", u1, u1)
    n2 = np.einsum("ij,ij->j", u2, u2)
    return (n1 <= r2) & (n2 <= r2)
