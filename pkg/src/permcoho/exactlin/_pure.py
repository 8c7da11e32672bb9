"""Pure-Python sparse exact elimination engine.

This is the reference backend: each routine here has a compiled twin in
``_speedups`` that must reproduce its output bit-for-bit.  Elimination runs
in two phases.  Phase 1 is a Markowitz fill-minimizing reduction with the
deterministic tie-break (lowest row, then lowest column); it does the heavy
work and exposes the left kernel.  Phase 2 re-inserts the surviving rows
into a column-ordered echelon and applies the Hermite normalization, whose
output is canonical (unique for the input row lattice) and therefore
backend-independent.

Matrices enter as triplet lists and leave as sorted ``(col, value)`` row
lists; nothing from the public layer leaks in here.
"""

from __future__ import annotations

from heapq import heappush, heappop


BACKEND_NAME = "pure"


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (x, y, g) with x*a + y*b == g == gcd(a, b) >= 0."""
    x, nx = 1, 0
    y, ny = 0, 1
    g, ng = a, b
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    if g < 0:
        x, y, g = -x, -y, -g
    return x, y, g


class EngineStats:
    """Telemetry for one elimination run."""

    __slots__ = ("max_abs", "pivots", "row_ops")

    def __init__(self) -> None:
        self.max_abs = 0
        self.pivots = 0
        self.row_ops = 0

    def see(self, v: int) -> None:
        if v < 0:
            v = -v
        if v > self.max_abs:
            self.max_abs = v

    def as_dict(self) -> dict:
        return {
            "max_bits": self.max_abs.bit_length(),
            "pivots": self.pivots,
            "row_ops": self.row_ops,
        }


def _sorted_items(d: dict[int, int]) -> list[tuple[int, int]]:
    return sorted(d.items())


class _SparseVec:
    """A sparse vector walked by ascending column with lazy column heap."""

    __slots__ = ("data", "cols")

    def __init__(self, data: dict[int, int]):
        self.data = {c: v for c, v in data.items() if v}
        self.cols = sorted(self.data)

    def pop_leading(self) -> int | None:
        while self.cols:
            c = heappop(self.cols)
            if self.data.get(c):
                return c
        return None

    def axpy(self, other: dict[int, int], q: int, stats: EngineStats) -> None:
        data = self.data
        see = stats.see
        for c, v in other.items():
            nv = data.get(c, 0) + q * v
            if nv:
                if c not in data:
                    heappush(self.cols, c)
                data[c] = nv
                see(nv)
            elif c in data:
                del data[c]


class _Echelon:
    """Column-keyed echelon basis with optional transform tracking.

    Basis rows have pairwise distinct leading columns and support only at
    columns >= their own pivot.  Inserting a row either lands a new pivot or
    would reduce to zero (which callers here never feed it).
    """

    def __init__(self, stats: EngineStats, track: bool):
        self.stats = stats
        self.track = track
        self.rows: dict[int, dict[int, int]] = {}  # pivot col -> row
        self.trans: dict[int, dict[int, int]] = {}  # pivot col -> transform row

    def insert(self, vec: dict[int, int], tvec: dict[int, int] | None) -> int | None:
        """Insert; returns the new pivot column, or None if vec reduced to 0."""
        stats = self.stats
        w = _SparseVec(vec)
        tw = dict(tvec) if (self.track and tvec is not None) else None
        while True:
            c = w.pop_leading()
            if c is None:
                return None
            v = w.data[c]
            row = self.rows.get(c)
            if row is None:
                if v < 0:
                    w.data = {cc: -vv for cc, vv in w.data.items()}
                    if tw is not None:
                        tw = {cc: -vv for cc, vv in tw.items()}
                self.rows[c] = w.data
                if tw is not None:
                    self.trans[c] = tw
                return c
            a = row[c]
            if v % a == 0:
                q = -(v // a)
                stats.row_ops += 1
                w.axpy(row, q, stats)
                if tw is not None:
                    trow = self.trans[c]
                    for cc, vv in trow.items():
                        nv = tw.get(cc, 0) + q * vv
                        if nv:
                            tw[cc] = nv
                            stats.see(nv)
                        elif cc in tw:
                            del tw[cc]
            else:
                x, y, g = xgcd(a, v)
                u, t = -(v // g), a // g
                stats.row_ops += 2
                new_row: dict[int, int] = {}
                new_vec: dict[int, int] = {}
                for cc in row.keys() | w.data.keys():
                    aa = row.get(cc, 0)
                    bb = w.data.get(cc, 0)
                    nr = x * aa + y * bb
                    nv = u * aa + t * bb
                    if nr:
                        new_row[cc] = nr
                        stats.see(nr)
                    if nv:
                        if cc not in w.data:
                            heappush(w.cols, cc)
                        new_vec[cc] = nv
                        stats.see(nv)
                self.rows[c] = new_row
                w.data = new_vec
                if tw is not None:
                    trow = self.trans[c]
                    new_trow: dict[int, int] = {}
                    new_tw: dict[int, int] = {}
                    for cc in trow.keys() | tw.keys():
                        aa = trow.get(cc, 0)
                        bb = tw.get(cc, 0)
                        nr = x * aa + y * bb
                        nv = u * aa + t * bb
                        if nr:
                            new_trow[cc] = nr
                            stats.see(nr)
                        if nv:
                            new_tw[cc] = nv
                            stats.see(nv)
                    self.trans[c] = new_trow
                    tw = new_tw

    def hermite_normalize(self) -> list[int]:
        """Reduce entries above every pivot into [0, pivot); returns pivot cols."""
        piv_cols = sorted(self.rows)
        for i, c in enumerate(piv_cols):
            row = self.rows[c]
            d = row[c]
            for j in range(i):
                cj = piv_cols[j]
                rj = self.rows[cj]
                v = rj.get(c, 0)
                q = v // d  # floor leaves residue in [0, d)
                if q:
                    self.stats.row_ops += 1
                    for cc, vv in row.items():
                        nv = rj.get(cc, 0) - q * vv
                        if nv:
                            rj[cc] = nv
                            self.stats.see(nv)
                        elif cc in rj:
                            del rj[cc]
                    if self.track:
                        tj = self.trans[cj]
                        trow = self.trans[c]
                        for cc, vv in trow.items():
                            nv = tj.get(cc, 0) - q * vv
                            if nv:
                                tj[cc] = nv
                                self.stats.see(nv)
                            elif cc in tj:
                                del tj[cc]
        return piv_cols


class _Work:
    """Phase-1 workspace: sparse rows, a column index over active rows only."""

    def __init__(self, nrows: int, ncols: int, triplets, track: bool, stats: EngineStats):
        self.nrows = nrows
        self.ncols = ncols
        self.stats = stats
        rows: list[dict[int, int]] = [dict() for _ in range(nrows)]
        for r, c, v in triplets:
            if v:
                nv = rows[r].get(c, 0) + v
                if nv:
                    rows[r][c] = nv
                else:
                    del rows[r][c]
        self.rows = rows
        for row in rows:
            for v in row.values():
                stats.see(v)
        self.col_rows: dict[int, set[int]] = {}
        for r in range(nrows):
            for c in rows[r]:
                self.col_rows.setdefault(c, set()).add(r)
        self.trans: list[dict[int, int]] | None = None
        if track:
            self.trans = [{r: 1} for r in range(nrows)]

    def col_count(self, c: int) -> int:
        s = self.col_rows.get(c)
        return len(s) if s else 0

    def axpy(self, dst: int, src: int, q: int) -> None:
        """rows[dst] += q * rows[src]."""
        if not q:
            return
        self.stats.row_ops += 1
        see = self.stats.see
        row_d = self.rows[dst]
        for c, v in self.rows[src].items():
            nv = row_d.get(c, 0) + q * v
            if nv:
                if c not in row_d:
                    self.col_rows.setdefault(c, set()).add(dst)
                row_d[c] = nv
                see(nv)
            elif c in row_d:
                del row_d[c]
                self.col_rows[c].discard(dst)
        if self.trans is not None:
            t_d = self.trans[dst]
            for c, v in self.trans[src].items():
                nv = t_d.get(c, 0) + q * v
                if nv:
                    t_d[c] = nv
                    see(nv)
                elif c in t_d:
                    del t_d[c]

    def combine(self, r: int, k: int, x: int, y: int, u: int, v: int) -> None:
        """row_r' = x*row_r + y*row_k ; row_k' = u*row_r + v*row_k (unimodular)."""
        self.stats.row_ops += 2
        see = self.stats.see
        old_r, old_k = self.rows[r], self.rows[k]
        new_r: dict[int, int] = {}
        new_k: dict[int, int] = {}
        for c in old_r.keys() | old_k.keys():
            a = old_r.get(c, 0)
            b = old_k.get(c, 0)
            nr = x * a + y * b
            nk = u * a + v * b
            if nr:
                new_r[c] = nr
                see(nr)
                if not a:
                    self.col_rows.setdefault(c, set()).add(r)
            elif a:
                self.col_rows[c].discard(r)
            if nk:
                new_k[c] = nk
                see(nk)
                if not b:
                    self.col_rows.setdefault(c, set()).add(k)
            elif b:
                self.col_rows[c].discard(k)
        self.rows[r] = new_r
        self.rows[k] = new_k
        if self.trans is not None:
            old_tr, old_tk = self.trans[r], self.trans[k]
            new_tr: dict[int, int] = {}
            new_tk: dict[int, int] = {}
            for c in old_tr.keys() | old_tk.keys():
                a = old_tr.get(c, 0)
                b = old_tk.get(c, 0)
                nr = x * a + y * b
                nk = u * a + v * b
                if nr:
                    new_tr[c] = nr
                    see(nr)
                if nk:
                    new_tk[c] = nk
                    see(nk)
            self.trans[r] = new_tr
            self.trans[k] = new_tk

    def drop_from_index(self, r: int) -> None:
        for c in self.rows[r]:
            s = self.col_rows.get(c)
            if s is not None:
                s.discard(r)


def _markowitz_phase(w: _Work, stats: EngineStats) -> tuple[list[int], list[int]]:
    """Reduce to a time-order triangular set of frozen rows.

    Returns (frozen row ids in freeze order, zero row ids ascending).  After
    this phase every non-frozen row is zero, and frozen row k has a column
    where all later-frozen rows vanish, so the frozen rows are linearly
    independent and span the input row lattice.
    """
    active = {r for r in range(w.nrows) if w.rows[r]}

    def entry_key(r: int, c: int, v: int) -> tuple[int, int, int, int, int]:
        # Unit pivots first (no Bezout combinations, so no coefficient
        # blow-up), ordered by Markowitz cost; non-unit pivots by magnitude
        # (Euclidean shrinking), then cost.  Ties break on (row, column).
        cost = (len(w.rows[r]) - 1) * (w.col_count(c) - 1)
        if v in (1, -1):
            return (0, cost, 0, r, c)
        return (1, abs(v), cost, r, c)

    heap: list[tuple[int, int, int, int, int]] = []
    for r in sorted(active):
        for c, v in w.rows[r].items():
            heappush(heap, entry_key(r, c, v))

    frozen: list[int] = []
    while active:
        # Pop until a key matches the live state; stale keys are re-pushed
        # at the live key so the heap cannot starve.
        piv = None
        while heap:
            key = heappop(heap)
            r, c = key[3], key[4]
            if r not in active:
                continue
            v = w.rows[r].get(c)
            if not v:
                continue
            cur = entry_key(r, c, v)
            if cur != key:
                heappush(heap, cur)
                continue
            piv = (r, c)
            break
        if piv is None:
            break
        r, c = piv

        touched: set[int] = set()
        while True:
            others = w.col_rows.get(c, set()) - {r}
            if not others:
                break
            k = min(others)
            a = w.rows[r][c]
            b = w.rows[k][c]
            if b % a == 0:
                w.axpy(k, r, -(b // a))
                touched.add(k)
            else:
                x, y, g = xgcd(a, b)
                w.combine(r, k, x, y, -(b // g), a // g)
                touched.add(r)
                touched.add(k)
            if not w.rows[k]:
                active.discard(k)

        frozen.append(r)
        stats.pivots += 1
        active.discard(r)
        w.drop_from_index(r)
        touched.discard(r)
        for k in touched:
            if k in active and w.rows[k]:
                for cc, vv in w.rows[k].items():
                    heappush(heap, entry_key(k, cc, vv))

    frozen_set = set(frozen)
    zero_rows = [r for r in range(w.nrows) if r not in frozen_set]
    return frozen, zero_rows


def echelon_sparse(nrows, ncols, triplets, track=False, track_pivots=True, need_rows=True):
    """Canonical integer row echelonization (Hermite form of the row lattice).

    Returns ``(piv_cols, piv_rows, piv_trans, zero_trans, stats)``:

    * ``piv_cols``: strictly increasing pivot columns.
    * ``piv_rows``: the HNF rows (sorted ``(col, value)`` lists), pivots
      positive, entries above each pivot reduced into [0, pivot).
    * ``piv_trans``: transform rows with trans @ input == piv_rows, when
      ``track and track_pivots``; else None.
    * ``zero_trans``: a basis of the left kernel lattice (one row per
      vanished input row, ordered by original row index), when ``track``.

    With ``need_rows=False`` (kernel-only callers) the Hermite phase is
    skipped and the first three slots come back None; the rank is still
    available as ``stats["pivots"]``.
    """
    stats = EngineStats()
    w = _Work(nrows, ncols, triplets, track, stats)
    frozen, zero_rows = _markowitz_phase(w, stats)

    zero_trans = None
    if track:
        zero_trans = [_sorted_items(w.trans[r]) for r in zero_rows]
    if not need_rows:
        return None, None, None, zero_trans, stats.as_dict()

    keep_trans = bool(track and track_pivots)
    ech = _Echelon(stats, keep_trans)
    for r in frozen:
        tvec = w.trans[r] if keep_trans else None
        newc = ech.insert(w.rows[r], tvec)
        if newc is None:
            raise AssertionError("frozen rows must be independent")
    piv_cols = ech.hermite_normalize()

    piv_rows = [_sorted_items(ech.rows[c]) for c in piv_cols]
    piv_trans = [_sorted_items(ech.trans[c]) for c in piv_cols] if keep_trans else None
    return piv_cols, piv_rows, piv_trans, zero_trans, stats.as_dict()


def snf_sparse(nrows, ncols, triplets, want_u=False, want_v=False):
    """Smith normal form by row and column elimination.

    Returns ``(diag, u_rows, v_cols, stats)``: ``diag`` is the canonical
    divisor chain padded with zeros to min(nrows, ncols); the unimodular
    transforms U (as rows) and V (as columns) satisfy U @ M @ V = diag and
    are tracked only on request (kernel extraction wants V alone).
    """
    stats = EngineStats()
    w = _Work(nrows, ncols, triplets, want_u, stats)
    vcols: list[dict[int, int]] | None = None
    if want_v:
        vcols = [{c: 1} for c in range(ncols)]

    def negate_row(r: int) -> None:
        w.rows[r] = {c: -v for c, v in w.rows[r].items()}
        if w.trans is not None:
            w.trans[r] = {c: -v for c, v in w.trans[r].items()}

    def negate_col(c: int) -> None:
        for r in list(w.col_rows.get(c, ())):
            w.rows[r][c] = -w.rows[r][c]
        if vcols is not None:
            vcols[c] = {i: -v for i, v in vcols[c].items()}

    def col_axpy(dst: int, src: int, q: int) -> None:
        if not q:
            return
        stats.row_ops += 1
        for r in list(w.col_rows.get(src, ())):
            row = w.rows[r]
            nv = row.get(dst, 0) + q * row[src]
            if nv:
                if dst not in row:
                    w.col_rows.setdefault(dst, set()).add(r)
                row[dst] = nv
                stats.see(nv)
            elif dst in row:
                del row[dst]
                w.col_rows[dst].discard(r)
        if vcols is not None:
            vd, vs = vcols[dst], vcols[src]
            for i, v in vs.items():
                nv = vd.get(i, 0) + q * v
                if nv:
                    vd[i] = nv
                    stats.see(nv)
                elif i in vd:
                    del vd[i]

    def col_combine(c1: int, c2: int, x: int, y: int, u: int, t: int) -> None:
        # col_c1' = x*col_c1 + y*col_c2 ; col_c2' = u*col_c1 + t*col_c2
        stats.row_ops += 2
        rows_hit = sorted(set(w.col_rows.get(c1, ())) | set(w.col_rows.get(c2, ())))
        for r in rows_hit:
            row = w.rows[r]
            a = row.get(c1, 0)
            b = row.get(c2, 0)
            n1 = x * a + y * b
            n2 = u * a + t * b
            if n1:
                if c1 not in row:
                    w.col_rows.setdefault(c1, set()).add(r)
                row[c1] = n1
                stats.see(n1)
            elif c1 in row:
                del row[c1]
                w.col_rows[c1].discard(r)
            if n2:
                if c2 not in row:
                    w.col_rows.setdefault(c2, set()).add(r)
                row[c2] = n2
                stats.see(n2)
            elif c2 in row:
                del row[c2]
                w.col_rows[c2].discard(r)
        if vcols is not None:
            v1, v2 = vcols[c1], vcols[c2]
            nv1: dict[int, int] = {}
            nv2: dict[int, int] = {}
            for i in v1.keys() | v2.keys():
                a = v1.get(i, 0)
                b = v2.get(i, 0)
                w1 = x * a + y * b
                w2 = u * a + t * b
                if w1:
                    nv1[i] = w1
                    stats.see(w1)
                if w2:
                    nv2[i] = w2
                    stats.see(w2)
            vcols[c1] = nv1
            vcols[c2] = nv2

    active_rows = {r for r in range(nrows) if w.rows[r]}
    active_cols = {c for c, s in w.col_rows.items() if s}

    def entry_key(r: int, c: int, v: int) -> tuple[int, int, int, int, int]:
        # Same pivot policy as the echelon phase: units by fill, then
        # non-units by magnitude (see _markowitz_phase).
        cost = (len(w.rows[r]) - 1) * (w.col_count(c) - 1)
        if v in (1, -1):
            return (0, cost, 0, r, c)
        return (1, abs(v), cost, r, c)

    heap: list[tuple[int, int, int, int, int]] = []
    for r in sorted(active_rows):
        for c, v in w.rows[r].items():
            heappush(heap, entry_key(r, c, v))

    pivots: list[tuple[int, int]] = []
    while active_rows and active_cols:
        piv = None
        while heap:
            key = heappop(heap)
            r, c = key[3], key[4]
            if r not in active_rows or c not in active_cols:
                continue
            v = w.rows[r].get(c)
            if not v:
                continue
            cur = entry_key(r, c, v)
            if cur != key:
                heappush(heap, cur)
                continue
            piv = (r, c)
            break
        if piv is None:
            break
        r, c = piv

        touched: set[int] = set()
        while True:
            while True:  # clear column c
                others = w.col_rows.get(c, set()) - {r}
                if not others:
                    break
                k = min(others)
                a = w.rows[r][c]
                b = w.rows[k][c]
                if b % a == 0:
                    w.axpy(k, r, -(b // a))
                    touched.add(k)
                else:
                    x, y, g = xgcd(a, b)
                    w.combine(r, k, x, y, -(b // g), a // g)
                    touched.add(r)
                    touched.add(k)
                if not w.rows[k]:
                    active_rows.discard(k)
            dirty = False
            while True:  # clear row r
                rest = [cc for cc in w.rows[r] if cc != c]
                if not rest:
                    break
                c2 = min(rest)
                a = w.rows[r][c]
                b = w.rows[r][c2]
                if b % a == 0:
                    col_axpy(c2, c, -(b // a))
                else:
                    x, y, g = xgcd(a, b)
                    col_combine(c, c2, x, y, -(b // g), a // g)
                    dirty = True  # column c may have regained entries
                if not w.col_rows.get(c2):
                    active_cols.discard(c2)
            if not dirty or w.col_count(c) <= 1:
                break

        pivots.append((r, c))
        stats.pivots += 1
        active_rows.discard(r)
        active_cols.discard(c)
        touched.discard(r)
        for k in touched:
            if k in active_rows and w.rows[k]:
                for cc, vv in w.rows[k].items():
                    heappush(heap, entry_key(k, cc, vv))

    for r, c in pivots:
        if w.rows[r][c] < 0:
            negate_row(r)

    # Divisor-chain repair: merge any violating pivot pair with a 2x2 Smith
    # step, diag(a, b) -> diag(gcd, a*b/gcd).
    changed = True
    while changed:
        changed = False
        for i in range(len(pivots)):
            for j in range(i + 1, len(pivots)):
                ri, ci = pivots[i]
                rj, cj = pivots[j]
                a = w.rows[ri][ci]
                b = w.rows[rj][cj]
                if b % a == 0:
                    continue
                changed = True
                w.axpy(ri, rj, 1)
                x, y, g = xgcd(a, b)
                col_combine(ci, cj, x, y, -(b // g), a // g)
                leftover = w.rows[rj].get(ci, 0)
                w.axpy(rj, ri, -(leftover // g))
                if w.rows[ri][ci] < 0:
                    negate_row(ri)
                if w.rows[rj][cj] < 0:
                    negate_col(cj)

    pivots.sort(key=lambda rc: (w.rows[rc[0]][rc[1]], rc[0], rc[1]))
    diag = [w.rows[r][c] for r, c in pivots]
    diag += [0] * (min(nrows, ncols) - len(diag))

    u_rows = None
    v_cols = None
    used_r = [r for r, _ in pivots]
    used_c = [c for _, c in pivots]
    if want_u:
        seen_r = set(used_r)
        order_r = used_r + [r for r in range(nrows) if r not in seen_r]
        u_rows = [_sorted_items(w.trans[r]) for r in order_r]
    if want_v:
        seen_c = set(used_c)
        order_c = used_c + [c for c in range(ncols) if c not in seen_c]
        v_cols = [_sorted_items(vcols[c]) for c in order_c]
    return diag, u_rows, v_cols, stats.as_dict()


def rank_profile_mod_p(nrows, ncols, triplets, p):
    """Indices of a maximal set of rows independent mod p (greedy, in order).

    Used by the kernel pipeline to drop dependent rows, whose gcd
    elimination is the main source of coefficient explosion; the final
    kernel certification makes any mod-p misjudgement harmless.
    """
    rows: list[dict[int, int]] = [dict() for _ in range(nrows)]
    for r, c, v in triplets:
        nv = (rows[r].get(c, 0) + v) % p
        if nv:
            rows[r][c] = nv
        elif c in rows[r]:
            del rows[r][c]
    pivot_row: dict[int, dict[int, int]] = {}
    selected: list[int] = []
    for r in range(nrows):
        row = rows[r]
        while row:
            c = min(row)
            brow = pivot_row.get(c)
            if brow is None:
                inv = pow(row[c], p - 2, p)
                row = {cc: (vv * inv) % p for cc, vv in row.items()}
                row = {cc: vv for cc, vv in row.items() if vv}
                pivot_row[c] = row
                selected.append(r)
                break
            mult = row[c]
            new = dict(row)
            for cc, vv in brow.items():
                nv = (new.get(cc, 0) - mult * vv) % p
                if nv:
                    new[cc] = nv
                elif cc in new:
                    del new[cc]
            row = new
    return selected


def unit_coreduction(nrows, ncols, triplets):
    """Row+column elimination restricted to +-1 pivots, tracking V only.

    Eliminating with unit pivots needs no Bezout combinations, so entries
    grow slowly; the usual boundary-map matrices reduce almost completely.
    Returns ``(npivots, active_rows, nonpivot_cols, block_triplets, v_cols,
    stats)`` where the block holds the remaining active submatrix (original
    labels) and ``v_cols`` maps each non-pivot column to its V column.
    """
    stats = EngineStats()
    w = _Work(nrows, ncols, triplets, False, stats)
    vcols: dict[int, dict[int, int]] = {c: {c: 1} for c in range(ncols)}

    active_rows = {r for r in range(nrows) if w.rows[r]}
    active_cols = set(range(ncols))

    def entry_key(r: int, c: int) -> tuple[int, int, int]:
        return ((len(w.rows[r]) - 1) * (w.col_count(c) - 1), r, c)

    heap: list[tuple[int, int, int]] = []
    for r in sorted(active_rows):
        for c, v in w.rows[r].items():
            if v in (1, -1):
                heappush(heap, entry_key(r, c))

    pivots: list[tuple[int, int]] = []
    while heap:
        key = heappop(heap)
        r, c = key[1], key[2]
        if r not in active_rows or c not in active_cols:
            continue
        v = w.rows[r].get(c)
        if v not in (1, -1):
            continue
        cur = entry_key(r, c)
        if cur != key:
            heappush(heap, cur)
            continue

        touched: set[int] = set()
        # clear column c by row operations (all quotients exact: pivot unit)
        while True:
            others = w.col_rows.get(c, set()) - {r}
            if not others:
                break
            k = min(others)
            w.axpy(k, r, -(w.rows[k][c] // v))
            touched.add(k)
            if not w.rows[k]:
                active_rows.discard(k)
        # clear row r by column operations; column c has support {r} now,
        # so these touch row r only, plus the V bookkeeping
        vc = vcols[c]
        for c2 in sorted(cc for cc in w.rows[r] if cc != c):
            q = w.rows[r][c2] // v
            if not q:
                continue
            stats.row_ops += 1
            del w.rows[r][c2]
            w.col_rows[c2].discard(r)
            v2 = vcols[c2]
            for i, vv in vc.items():
                nv = v2.get(i, 0) - q * vv
                if nv:
                    v2[i] = nv
                    stats.see(nv)
                elif i in v2:
                    del v2[i]
        pivots.append((r, c))
        stats.pivots += 1
        active_rows.discard(r)
        active_cols.discard(c)
        w.drop_from_index(r)
        touched.discard(r)
        for k in touched:
            if k in active_rows:
                for cc, vv in w.rows[k].items():
                    if vv in (1, -1):
                        heappush(heap, entry_key(k, cc))

    act_rows = sorted(active_rows)
    nonpivot_cols = sorted(active_cols)
    block = []
    for r in act_rows:
        for c, v in w.rows[r].items():
            block.append((r, c, v))
    block.sort()
    v_out = {c: _sorted_items(vcols[c]) for c in nonpivot_cols}
    return len(pivots), act_rows, nonpivot_cols, block, v_out, stats.as_dict()


def rank_mod_p(nrows, ncols, triplets, p):
    """Rank over F_p by sparse elimination (bitmask fast path for p = 2)."""
    if p < 2:
        raise ValueError("modulus must be >= 2")
    if p == 2:
        masks: dict[int, int] = {}
        for r, c, v in triplets:
            if v % 2:
                masks[r] = masks.get(r, 0) ^ (1 << c)
        pivot_of: dict[int, int] = {}
        rank = 0
        for r in sorted(masks):
            m = masks[r]
            while m:
                low = (m & -m).bit_length() - 1
                q = pivot_of.get(low)
                if q is None:
                    pivot_of[low] = m
                    rank += 1
                    break
                m ^= q
        return rank
    rows: list[dict[int, int]] = [dict() for _ in range(nrows)]
    for r, c, v in triplets:
        nv = (rows[r].get(c, 0) + v) % p
        if nv:
            rows[r][c] = nv
        elif c in rows[r]:
            del rows[r][c]
    pivot_row: dict[int, dict[int, int]] = {}
    rank = 0
    for r in range(nrows):
        row = rows[r]
        while row:
            c = min(row)
            brow = pivot_row.get(c)
            if brow is None:
                inv = pow(row[c], p - 2, p)
                row = {cc: (vv * inv) % p for cc, vv in row.items()}
                row = {cc: vv for cc, vv in row.items() if vv}
                pivot_row[c] = row
                rank += 1
                break
            mult = row[c]
            new = dict(row)
            for cc, vv in brow.items():
                nv = (new.get(cc, 0) - mult * vv) % p
                if nv:
                    new[cc] = nv
                elif cc in new:
                    del new[cc]
            row = new
    return rank


class IncrementalLattice:
    """Mutable echelon basis of an integer lattice: insert and membership.

    Rows are sparse dicts with support only at columns >= their pivot.  The
    basis is not Hermite-reduced above pivots; membership answers do not
    depend on that and insertions stay cheaper without it.
    """

    __slots__ = ("ncols", "stats", "_ech")

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.stats = EngineStats()
        self._ech = _Echelon(self.stats, track=False)

    @property
    def rank(self) -> int:
        return len(self._ech.rows)

    def add(self, vec: dict[int, int]) -> bool:
        """Insert a vector; returns True if it enlarged the lattice."""
        data = {c: v for c, v in vec.items() if v}
        if not data:
            return False
        return self._ech.insert(data, None) is not None

    def contains(self, vec: dict[int, int]) -> bool:
        work = _SparseVec(vec)
        rows = self._ech.rows
        while True:
            c = work.pop_leading()
            if c is None:
                return True
            row = rows.get(c)
            if row is None:
                return False
            v = work.data[c]
            if v % row[c] != 0:
                return False
            work.axpy(row, -(v // row[c]), self.stats)

    def babai_reduce(self, vec: dict[int, int]) -> dict[int, int]:
        """Canonical residue of vec modulo the lattice.

        At each pivot column the result lies in [0, pivot); it is zero iff
        vec is a member.  Representation-independent given the lattice, so
        safe to embed in certificates.
        """
        work = _SparseVec(vec)
        rows = self._ech.rows
        out: dict[int, int] = {}
        while True:
            c = work.pop_leading()
            if c is None:
                return out
            v = work.data[c]
            row = rows.get(c)
            if row is None:
                out[c] = v
                del work.data[c]
                continue
            q = v // row[c]
            if q:
                work.axpy(row, -q, self.stats)
            rem = work.data.pop(c, 0)
            if rem:
                out[c] = rem

    def basis_rows(self) -> list[list[tuple[int, int]]]:
        return [_sorted_items(self._ech.rows[c]) for c in sorted(self._ech.rows)]
