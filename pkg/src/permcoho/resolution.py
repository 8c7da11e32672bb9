"""Free resolutions of the trivial module over Z[G] (and over F2[G]).

Construction is degree by degree: realize the current boundary as an
integer matrix on coordinates (free generator, group element), compute a
kernel basis, then greedily extract a module generating set of the kernel
(membership is tested against the span of group translates of the chosen
generators).  Exactness holds by construction and is re-verified
independently via Smith-certified subquotients in ``validate_resolution``.

Boundary matrices are stored column-wise: ``boundaries[n-1][j]`` is the
image of the j-th free generator in degree n, a sorted tuple of
``(target_gen, element_index, coeff)``.
"""

from __future__ import annotations

import hashlib
import os
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from . import exactlin
from .exactlin import SparseIntMatrix, Subquotient, gf2
from .perm import PermGroup, group_from_generators, parse_generators

FORMAT_VERSION = 1
ALGORITHM_VERSION = "greedy-hnf-1"
DEFAULT_RANK_CAP = 512

Column = tuple[tuple[int, int, int], ...]  # ((target_gen, element, coeff), ...)


class ResolutionError(Exception):
    pass


class RankCapExceeded(ResolutionError):
    """Generator extraction hit the configured rank cap (resource limit)."""


class ValidationFailure(ResolutionError):
    """A resolution failed validation; the message names the degree."""


@dataclass
class FreeResolution:
    """A length-N free resolution of the trivial module."""

    group: PermGroup
    ring: str  # "Z" or "F2"
    ranks: list[int]  # a_0 .. a_N
    boundaries: list[list[Column]]  # boundaries[n-1] = columns of d_n
    telemetry: dict = field(default_factory=dict)

    @property
    def degree(self) -> int:
        return len(self.ranks) - 1

    def rank(self, n: int) -> int:
        return self.ranks[n]

    def boundary_columns(self, n: int) -> list[Column]:
        """Columns of d_n (1 <= n <= degree)."""
        return self.boundaries[n - 1]

    def content_hash(self) -> str:
        h = hashlib.sha256()
        h.update(f"{self.ring};{self.group.degree};".encode())
        h.update(self.group.generator_text().encode())
        h.update(group_element_hash(self.group).encode())
        for cols in self.boundaries:
            for col in cols:
                for i, e, c in col:
                    h.update(f"{i},{e},{c};".encode())
            h.update(b"|")
        return h.hexdigest()

    def truncate(self, n: int) -> "FreeResolution":
        if n > self.degree:
            raise ResolutionError(f"resolution only reaches degree {self.degree}")
        return FreeResolution(
            self.group, self.ring, self.ranks[: n + 1], self.boundaries[:n], dict(self.telemetry)
        )


def group_element_hash(G: PermGroup) -> str:
    h = hashlib.sha256()
    for p in G.elements:
        h.update(bytes(x % 256 for x in p.images))
        h.update(b",")
    return h.hexdigest()


# -- big-matrix realization ----------------------------------------------------


def boundary_triplets(G: PermGroup, rank_src: int, columns: Sequence[Column]) -> list[tuple[int, int, int]]:
    """Triplets of d_n as a Z-linear map on (generator, element) coordinates.

    Coordinate (j, g) holds g * e_j; its image is sum c * (g h) e_i over
    column entries (i, h, c), using left translation.
    """
    m = G.order
    trip = []
    for j, col in enumerate(columns):
        for g in range(m):
            tbl = G.left_table(g)
            base = j * m + g
            for i, e, c in col:
                trip.append((i * m + tbl[e], base, c))
    return trip


def augmentation_triplets(G: PermGroup) -> list[tuple[int, int, int]]:
    return [(0, g, 1) for g in range(G.order)]


def translate_vector(G: PermGroup, vec: dict[int, int], g: int) -> dict[int, int]:
    """Left action of element g on a coordinate vector over (gen, element)."""
    m = G.order
    tbl = G.left_table(g)
    return {(k // m) * m + tbl[k % m]: v for k, v in vec.items()}


def vector_to_column(G: PermGroup, vec: dict[int, int]) -> Column:
    m = G.order
    return tuple(sorted((k // m, k % m, v) for k, v in vec.items()))


def column_to_vector(G: PermGroup, col: Column) -> dict[int, int]:
    m = G.order
    return {i * m + e: c for i, e, c in col}


# -- construction ---------------------------------------------------------------


def _extract_generators_z(
    G: PermGroup,
    ambient_dim: int,
    kernel_rows: list[list[tuple[int, int]]],
    rank_cap: int,
    clock=None,
) -> list[dict[int, int]]:
    """Greedy Z[G]-generating set of the kernel lattice.

    Kernel rows arrive Hermite-reduced and are processed in ascending pivot
    order; a row is kept when it lies outside the span of the group
    translates of the rows already kept.
    """
    lattice = exactlin.incremental_lattice(ambient_dim)
    gens: list[dict[int, int]] = []
    for row in kernel_rows:
        vec = dict(row)
        if lattice.contains(vec):
            continue
        gens.append(vec)
        if len(gens) > rank_cap:
            raise RankCapExceeded(
                f"kernel generator extraction exceeded rank cap {rank_cap}"
            )
        for g in range(G.order):
            lattice.add(translate_vector(G, vec, g))
        if clock is not None:
            clock.check()
    return gens


def _extract_generators_f2(
    G: PermGroup,
    kernel_masks: list[int],
    gen_dim: int,
    rank_cap: int,
    clock=None,
) -> list[int]:
    m = G.order
    ech = gf2.GF2Echelon()
    gens: list[int] = []
    for mask in kernel_masks:
        if ech.contains(mask):
            continue
        gens.append(mask)
        if len(gens) > rank_cap:
            raise RankCapExceeded(
                f"kernel generator extraction exceeded rank cap {rank_cap}"
            )
        cols = gf2.mask_cols(mask)
        for g in range(m):
            tbl = G.left_table(g)
            ech.insert(gf2.mask_from_cols((k // m) * m + tbl[k % m] for k in cols))
        if clock is not None:
            clock.check()
    return gens


def build_resolution(
    G: PermGroup,
    N: int,
    ring: str = "Z",
    rank_cap: int = DEFAULT_RANK_CAP,
    clock=None,
    progress=None,
) -> FreeResolution:
    """Free resolution of the trivial module to homological degree N."""
    if N < 1:
        raise ResolutionError("degree must be >= 1")
    if ring not in ("Z", "F2"):
        raise ResolutionError(f"unsupported ring {ring!r}")
    m = G.order
    ranks = [1]
    boundaries: list[list[Column]] = []
    telem: dict = {"degrees": [], "ring": ring, "group_order": m}

    for n in range(N):
        t0 = time.monotonic()
        src_rank = ranks[n]
        ambient = src_rank * m
        if n == 0:
            trip = augmentation_triplets(G)
            nrows = 1
        else:
            trip = boundary_triplets(G, src_rank, boundaries[n - 1])
            nrows = ranks[n - 1] * m
        if ring == "Z":
            M = SparseIntMatrix.from_triplets(nrows, ambient, trip)
            kernel_rows = exactlin.kernel_basis_sparse(M)
            gens = _extract_generators_z(G, ambient, kernel_rows, rank_cap, clock)
            cols = [vector_to_column(G, v) for v in gens]
        else:
            col_masks = [0] * ambient
            for r, c, v in trip:
                if v % 2:
                    col_masks[c] ^= 1 << r
            kernel_masks = gf2.kernel(col_masks, ambient)
            gens_masks = _extract_generators_f2(G, kernel_masks, ambient, rank_cap, clock)
            cols = [
                vector_to_column(G, {k: 1 for k in gf2.mask_cols(mask)})
                for mask in gens_masks
            ]
        boundaries.append(cols)
        ranks.append(len(cols))
        telem["degrees"].append(
            {
                "degree": n + 1,
                "rank": len(cols),
                "kernel_rank": len(kernel_rows) if ring == "Z" else len(kernel_masks),
                "seconds": round(time.monotonic() - t0, 6),
            }
        )
        if progress is not None:
            progress(n + 1, len(cols))
        if clock is not None:
            clock.check()
    return FreeResolution(G, ring, ranks, boundaries, telem)


# -- validation -----------------------------------------------------------------


@dataclass
class ValidationReport:
    ok: bool
    failures: list[tuple[int, str]]
    per_degree: list[dict]
    seconds: float

    def raise_if_failed(self) -> None:
        if not self.ok:
            deg, cond = self.failures[0]
            raise ValidationFailure(f"validation failed at degree {deg}: {cond}")


def _compose_columns(G: PermGroup, outer: list[Column], inner_col: Column) -> dict[int, int]:
    """Apply d_n to a degree-(n+1) column; zero iff d.d = 0 on it."""
    m = G.order
    acc: dict[int, int] = {}
    for i, e, c in inner_col:
        tbl = G.left_table(e)
        for i2, e2, c2 in outer[i]:
            k = i2 * m + tbl[e2]
            nv = acc.get(k, 0) + c * c2
            if nv:
                acc[k] = nv
            elif k in acc:
                del acc[k]
    return acc


def validate_resolution(R: FreeResolution, clock=None) -> ValidationReport:
    """Assert d.d = 0, SNF-certified exactness, and augmentation conditions.

    Any violated condition names its degree in the failure list.
    """
    G = R.group
    m = G.order
    t_start = time.monotonic()
    failures: list[tuple[int, str]] = []
    per_degree: list[dict] = []
    mod2 = R.ring == "F2"

    # augmentation: eps surjective is structural; eps(d_1 columns) must vanish
    for j, col in enumerate(R.boundary_columns(1)):
        s = sum(c for _, _, c in col)
        if (s % 2 if mod2 else s) != 0:
            failures.append((1, f"augmentation of d_1 column {j} is {s}, not 0"))
            break

    # d.d = 0 exactly, in the group ring
    for n in range(2, R.degree + 1):
        outer = R.boundary_columns(n - 1)
        for j, col in enumerate(R.boundary_columns(n)):
            acc = _compose_columns(G, outer, col)
            if mod2:
                acc = {k: v for k, v in acc.items() if v % 2}
            if acc:
                failures.append((n, f"d_{n-1} . d_{n} != 0 on generator {j}"))
                break
        if clock is not None:
            clock.check()

    # exactness at each degree < N via kernel/image subquotient
    if not failures:
        for n in range(R.degree):
            t0 = time.monotonic()
            ambient = R.ranks[n] * m
            if n == 0:
                trip = augmentation_triplets(G)
                nrows = 1
            else:
                trip = boundary_triplets(G, R.ranks[n], R.boundary_columns(n))
                nrows = R.ranks[n - 1] * m
            next_cols = R.boundary_columns(n + 1)
            if mod2:
                col_masks = [0] * ambient
                for r, c, v in trip:
                    if v % 2:
                        col_masks[c] ^= 1 << r
                kernel_masks = gf2.kernel(col_masks, ambient)
                ech = gf2.GF2Echelon()
                for col in next_cols:
                    vec = column_to_vector(G, col)
                    cols_of = [k for k in vec]
                    for g in range(m):
                        tbl = G.left_table(g)
                        ech.insert(
                            gf2.mask_from_cols((k // m) * m + tbl[k % m] for k in cols_of)
                        )
                ker_dim = len(kernel_masks)
                ok_here = ech.rank == ker_dim and all(
                    ech.contains(mask) for mask in kernel_masks
                )
                if not ok_here:
                    failures.append((n, "mod-2 exactness failed"))
                    break
                quotient_trivial = True
            else:
                M = SparseIntMatrix.from_triplets(nrows, ambient, trip)
                kernel_rows = exactlin.kernel_basis_sparse(M)
                # Echelonize the image lattice first so the subquotient
                # presentation matrix is square and small.
                image = exactlin.incremental_lattice(ambient)
                for col in next_cols:
                    vec = column_to_vector(G, col)
                    for g in range(m):
                        image.add(translate_vector(G, vec, g))
                try:
                    sq = Subquotient(
                        ambient, kernel_rows, [dict(r) for r in image.basis_rows()]
                    )
                except exactlin.ExactLinError:
                    failures.append((n, "image does not lie inside the kernel"))
                    break
                quotient_trivial = sq.invariants.is_trivial
                if not quotient_trivial:
                    failures.append(
                        (n, f"homology at degree {n} is {sq.invariants.render()}, not 0")
                    )
                    break
            per_degree.append(
                {
                    "degree": n,
                    "rank": R.ranks[n],
                    "exact": quotient_trivial,
                    "seconds": round(time.monotonic() - t0, 6),
                }
            )
            if clock is not None:
                clock.check()

    return ValidationReport(not failures, failures, per_degree, time.monotonic() - t_start)


# -- restriction of scalars ------------------------------------------------------


@dataclass
class CosetData:
    """Right-coset bookkeeping for H <= G: G = union of H t."""

    H: PermGroup
    transversal: list[int]  # element indices in G, first representative per coset
    coset_of: list[int]  # g -> transversal position
    h_part: list[int]  # g -> index in H with g = h * t

    @property
    def index(self) -> int:
        return len(self.transversal)


def coset_decomposition(G: PermGroup, H: PermGroup) -> CosetData:
    if not H.is_subgroup_of(G):
        raise ResolutionError("H is not a subgroup of G")
    m = G.order
    h_in_g = [G.index(p) for p in H.elements]
    coset_of = [-1] * m
    h_part = [-1] * m
    transversal: list[int] = []
    for g in range(m):
        if coset_of[g] != -1:
            continue
        t_pos = len(transversal)
        transversal.append(g)
        for hi, hg in enumerate(h_in_g):
            x = G.mul(hg, g)
            coset_of[x] = t_pos
            h_part[x] = hi
    return CosetData(H, transversal, coset_of, h_part)


def restrict_scalars(R: FreeResolution, H: PermGroup) -> tuple[FreeResolution, CosetData]:
    """View a Z[G]-free resolution as a Z[H]-free resolution for H <= G.

    Free H-generators in degree n are pairs (i, t) over the fixed right
    transversal; ranks multiply by the index.  The same resolution of the
    trivial module results, so downstream cohomology of H matches H's own.
    """
    G = R.group
    cd = coset_decomposition(G, H)
    idx = cd.index
    ranks = [a * idx for a in R.ranks]
    boundaries: list[list[Column]] = []
    for n in range(1, R.degree + 1):
        cols: list[Column] = []
        for j in range(R.ranks[n]):
            col = R.boundary_columns(n)[j]
            for t_pos, t in enumerate(cd.transversal):
                tbl = G.left_table(t)
                entries = []
                for i, e, c in col:
                    ge = tbl[e]  # t * e in G
                    entries.append((i * idx + cd.coset_of[ge], cd.h_part[ge], c))
                cols.append(tuple(sorted(entries)))
        boundaries.append(cols)
    restricted = FreeResolution(H, R.ring, ranks, boundaries, {"restricted_from": R.content_hash()})
    return restricted, cd


# -- cache -----------------------------------------------------------------------


def default_cache_dir() -> Path:
    env = os.environ.get("PERMCOHO_CACHE_DIR")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "permcoho"


def _cache_key(G: PermGroup, ring: str) -> str:
    h = hashlib.sha256()
    h.update(ALGORITHM_VERSION.encode())
    h.update(b";")
    h.update(ring.encode())
    h.update(b";")
    h.update(G.generator_text().encode())
    h.update(b";")
    h.update(group_element_hash(G).encode())
    return h.hexdigest()[:24]


def save_resolution(R: FreeResolution, cache_dir: Path | None = None) -> Path:
    """Write the cache entry (atomic rename; content-addressed name)."""
    cache_dir = cache_dir or default_cache_dir()
    cache_dir.mkdir(parents=True, exist_ok=True)
    key = _cache_key(R.group, R.ring)
    path = cache_dir / f"{key}-deg{R.degree}.res"
    tmp = path.with_suffix(".tmp")
    with open(tmp, "w") as fh:
        fh.write(f"PERMCOHO-RESOLUTION {FORMAT_VERSION}\n")
        fh.write(f"algorithm: {ALGORITHM_VERSION}\n")
        fh.write(f"generators: {R.group.generator_text()}\n")
        fh.write(f"point-degree: {R.group.degree}\n")
        fh.write(f"ring: {R.ring}\n")
        fh.write(f"element-hash: {group_element_hash(R.group)}\n")
        fh.write(f"degree: {R.degree}\n")
        fh.write(f"ranks: {' '.join(map(str, R.ranks))}\n")
        for n in range(1, R.degree + 1):
            cols = R.boundary_columns(n)
            nnz = sum(len(col) for col in cols)
            fh.write(f"d {n} {nnz}\n")
            for j, col in enumerate(cols):
                for i, e, c in col:
                    fh.write(f"{i} {j} {e} {c}\n")
    os.replace(tmp, path)
    return path


def load_resolution(
    G: PermGroup, N: int, ring: str = "Z", cache_dir: Path | None = None
) -> FreeResolution | None:
    """Load a cached resolution of degree >= N, truncated to N; None on miss.

    The caller must revalidate (``validate_resolution``) before use; the
    loaders in ``cohomology`` do this.
    """
    cache_dir = cache_dir or default_cache_dir()
    if not cache_dir.is_dir():
        return None
    key = _cache_key(G, ring)
    best: tuple[int, Path] | None = None
    for path in cache_dir.glob(f"{key}-deg*.res"):
        try:
            deg = int(path.stem.split("-deg")[1])
        except (IndexError, ValueError):
            continue
        if deg >= N and (best is None or deg < best[0]):
            best = (deg, path)
    if best is None:
        return None
    R = _read_resolution_file(best[1], G)
    return R.truncate(N) if R is not None else None


def _read_resolution_file(path: Path, G: PermGroup) -> FreeResolution | None:
    with open(path) as fh:
        header = fh.readline().split()
        if header[:1] != ["PERMCOHO-RESOLUTION"] or int(header[1]) != FORMAT_VERSION:
            return None
        meta = {}
        for _ in range(7):
            k, _, v = fh.readline().partition(":")
            meta[k.strip()] = v.strip()
        if meta.get("algorithm") != ALGORITHM_VERSION:
            return None
        if meta.get("element-hash") != group_element_hash(G):
            return None
        ring = meta["ring"]
        degree = int(meta["degree"])
        ranks = list(map(int, meta["ranks"].split()))
        boundaries: list[list[Column]] = []
        for n in range(1, degree + 1):
            head = fh.readline().split()
            if len(head) != 3 or head[0] != "d" or int(head[1]) != n:
                return None
            nnz = int(head[2])
            cols: list[list[tuple[int, int, int]]] = [[] for _ in range(ranks[n])]
            for _ in range(nnz):
                i, j, e, c = map(int, fh.readline().split())
                cols[j].append((i, e, c))
            boundaries.append([tuple(sorted(col)) for col in cols])
    return FreeResolution(G, ring, ranks, boundaries, {"loaded_from": str(path)})


def get_resolution(
    G: PermGroup,
    N: int,
    ring: str = "Z",
    cache_dir: Path | None = None,
    rank_cap: int = DEFAULT_RANK_CAP,
    clock=None,
    validate: bool = True,
) -> FreeResolution:
    """Cached build: load + revalidate, or build + validate + save."""
    R = load_resolution(G, N, ring, cache_dir)
    if R is not None:
        if validate:
            validate_resolution(R, clock=clock).raise_if_failed()
        return R
    R = build_resolution(G, N, ring=ring, rank_cap=rank_cap, clock=clock)
    if validate:
        validate_resolution(R, clock=clock).raise_if_failed()
    save_resolution(R, cache_dir)
    return R
