"""Exact rational sparse linear algebra and weight/parity-graded spaces.

All elimination is deterministic: rows are processed in order and pivots are
taken on the lowest available column index, so kernel bases, solutions and
splittings are reproducible run to run.
"""
from __future__ import annotations

from fractions import Fraction


class InconsistentSystem(Exception):
    """Raised by solve() when the right-hand side is not in the image."""


class NotADifferential(Exception):
    """Raised by split_differential() when d*d != 0."""


class SparseMatrix:
    """Rational matrix stored as a map (row, col) -> nonzero Fraction."""

    __slots__ = ("nrows", "ncols", "entries")

    def __init__(self, nrows: int, ncols: int, entries=None):
        self.nrows = nrows
        self.ncols = ncols
        self.entries = {}
        if entries:
            for (i, j), v in entries.items():
                self[i, j] = v

    def __setitem__(self, key, value):
        i, j = key
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError(key)
        value = Fraction(value)
        if value:
            self.entries[(i, j)] = value
        else:
            self.entries.pop((i, j), None)

    def __getitem__(self, key):
        return self.entries.get(key, Fraction(0))

    def rows(self):
        out = [dict() for _ in range(self.nrows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def columns(self):
        out = [dict() for _ in range(self.ncols)]
        for (i, j), v in self.entries.items():
            out[j][i] = v
        return out

    def apply(self, vec):
        """Multiply by a dense vector (sequence of Fractions)."""
        out = [Fraction(0)] * self.nrows
        for (i, j), v in self.entries.items():
            if vec[j]:
                out[i] += v * vec[j]
        return out

    def compose(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.ncols != other.nrows:
            raise ValueError("dimension mismatch")
        out = SparseMatrix(self.nrows, other.ncols)
        self_cols = self.columns()
        for (k, j), v in other.entries.items():
            for i, w in self_cols[k].items():
                out[i, j] = out[i, j] + w * v
        return out

    def is_zero(self) -> bool:
        return not self.entries


def _row_reduce(rows, ncols, rhs=None):
    """In-place forward+back elimination; returns list of pivot columns.

    rows: list of dict col -> Fraction.  rhs: optional parallel list of values.
    """
    pivots = []
    pivot_rows = []
    used = set()
    for col in range(ncols):
        piv = None
        for r in range(len(rows)):
            if r in used:
                continue
            if rows[r].get(col):
                piv = r
                break
        if piv is None:
            continue
        used.add(piv)
        factor = rows[piv][col]
        rows[piv] = {c: v / factor for c, v in rows[piv].items()}
        if rhs is not None:
            rhs[piv] = rhs[piv] / factor
        for r in range(len(rows)):
            if r == piv:
                continue
            coeff = rows[r].get(col)
            if coeff:
                for c, v in rows[piv].items():
                    acc = rows[r].get(c, Fraction(0)) - coeff * v
                    if acc:
                        rows[r][c] = acc
                    else:
                        rows[r].pop(c, None)
                if rhs is not None:
                    rhs[r] = rhs[r] - coeff * rhs[piv]
        pivots.append(col)
        pivot_rows.append(piv)
    return pivots, pivot_rows


def kernel_basis(m: SparseMatrix):
    """Basis of the nullspace, each vector scaled so its first nonzero entry is 1.

    Vectors are ordered by their free column; the result is deterministic for
    a fixed row/column order.
    """
    rows = m.rows()
    pivots, pivot_rows = _row_reduce(rows, m.ncols)
    pivot_of_col = dict(zip(pivots, pivot_rows))
    free_cols = [c for c in range(m.ncols) if c not in pivot_of_col]
    basis = []
    for fc in free_cols:
        vec = [Fraction(0)] * m.ncols
        vec[fc] = Fraction(1)
        for pc, pr in pivot_of_col.items():
            coeff = rows[pr].get(fc)
            if coeff:
                vec[pc] = -coeff
        lead = next(v for v in vec if v)
        basis.append(tuple(v / lead for v in vec))
    return basis


def solve(m: SparseMatrix, rhs):
    """One exact solution of m*x = rhs (free variables set to 0).

    Raises InconsistentSystem when rhs is not in the image.
    """
    if len(rhs) != m.nrows:
        raise ValueError("rhs length mismatch")
    rows = m.rows()
    vals = [Fraction(v) for v in rhs]
    pivots, pivot_rows = _row_reduce(rows, m.ncols, vals)
    pivot_rows_set = set(pivot_rows)
    for r in range(m.nrows):
        if r not in pivot_rows_set and vals[r]:
            raise InconsistentSystem("rhs not in image")
    sol = [Fraction(0)] * m.ncols
    for pc, pr in zip(pivots, pivot_rows):
        sol[pc] = vals[pr]
    return tuple(sol)


def solve_opt(m: SparseMatrix, rhs):
    try:
        return solve(m, rhs)
    except InconsistentSystem:
        return None


def sparse_solve(columns, rhs):
    """Solve sum_j x_j * columns[j] = rhs for sparse dict-valued columns.

    Incremental echelon insertion with early exit: columns are inserted in
    order and the right-hand side is re-reduced after each insertion, so when
    a short combination suffices the remaining columns are never touched.
    Returns {j: Fraction} or None.
    """
    import heapq

    by_lead = {}

    def reduce(vec, combo):
        """Fully reduce vec against the echelon; returns (vec, combo, lead)."""
        vec = dict(vec)
        heap = list(vec)
        heapq.heapify(heap)
        lead = None
        while heap:
            idx = heapq.heappop(heap)
            v = vec.get(idx)
            if not v:
                continue
            hit = by_lead.get(idx)
            if hit is None:
                if lead is None:
                    lead = idx
                continue
            ovec, ocombo = hit
            coeff = v / ovec[idx]
            for k, val in ovec.items():
                acc = vec.get(k, Fraction(0)) - coeff * val
                if acc:
                    if k not in vec and k > idx:
                        heapq.heappush(heap, k)
                    vec[k] = acc
                else:
                    vec.pop(k, None)
            for k, val in ocombo.items():
                acc = combo.get(k, Fraction(0)) - coeff * val
                if acc:
                    combo[k] = acc
                else:
                    combo.pop(k, None)
        return vec, combo, lead

    rvec, rcombo, _ = reduce(rhs, {})
    if not rvec:
        return {k: -v for k, v in rcombo.items()}
    for j, col in enumerate(columns):
        if not col:
            continue
        vec, combo, lead = reduce(col, {j: Fraction(1)})
        if lead is None:
            continue
        by_lead[lead] = (vec, combo)
        if lead in rvec:
            rvec, rcombo, _ = reduce(rvec, rcombo)
            if not rvec:
                return {k: -v for k, v in rcombo.items()}
    return None


class _Echelon:
    """Grow an echelon family of vectors; used to pick deterministic complements."""

    def __init__(self, dim):
        self.dim = dim
        self.by_lead = {}

    def reduce(self, vec):
        vec = list(vec)
        while True:
            lead = next((i for i, v in enumerate(vec) if v), None)
            if lead is None or lead not in self.by_lead:
                return vec, lead
            other = self.by_lead[lead]
            coeff = vec[lead] / other[lead]
            for i in range(lead, self.dim):
                vec[i] -= coeff * other[i]

    def insert(self, vec):
        """Reduce and insert; returns True when vec enlarged the span."""
        vec, lead = self.reduce(vec)
        if lead is None:
            return False
        self.by_lead[lead] = vec
        return True

    def contains(self, vec):
        _, lead = self.reduce(vec)
        return lead is None


class GradedSpace:
    """Finite bases per integer weight; every label carries a parity bit."""

    def __init__(self):
        self._basis = {}

    def add(self, weight: int, label, parity: int):
        items = self._basis.setdefault(weight, [])
        for lbl, _ in items:
            if lbl == label:
                raise ValueError("duplicate label %r at weight %d" % (label, weight))
        items.append((label, parity & 1))

    def weights(self):
        return sorted(self._basis)

    def basis(self, weight: int):
        return list(self._basis.get(weight, ()))

    def dim(self, weight: int) -> int:
        return len(self._basis.get(weight, ()))


class WeightSplit:
    """Decomposition V_w = image(d) + homology part + transversal part.

    `image`, `homology`, `transversal` are lists of dense vectors in the
    weight-w basis; `pullback` sends the j-th image vector to the transversal
    basis vector of the previous weight whose differential it is.
    """

    __slots__ = ("dim", "image", "homology", "transversal", "pullback", "_solver")

    def __init__(self, dim, image, homology, transversal, pullback):
        self.dim = dim
        self.image = image
        self.homology = homology
        self.transversal = transversal
        self.pullback = pullback
        self._solver = None

    def coordinates(self, vec):
        """Coefficients of vec along (image | homology | transversal)."""
        if self._solver is None:
            cols = self.image + self.homology + self.transversal
            m = SparseMatrix(self.dim, len(cols))
            for j, c in enumerate(cols):
                for i, v in enumerate(c):
                    if v:
                        m[i, j] = v
            self._solver = m
        coords = solve(self._solver, list(vec))
        ni, nh = len(self.image), len(self.homology)
        return coords[:ni], coords[ni:ni + nh], coords[ni + nh:]

    def projectors(self):
        """The three projector matrices onto the summands, in basis order."""
        mats = []
        for block in range(3):
            m = SparseMatrix(self.dim, self.dim)
            for j in range(self.dim):
                unit = [Fraction(0)] * self.dim
                unit[j] = Fraction(1)
                parts = self.coordinates(unit)
                vecs = (self.image, self.homology, self.transversal)[block]
                for coeff, vec in zip(parts[block], vecs):
                    if coeff:
                        for i, v in enumerate(vec):
                            if v:
                                m[i, j] = m[i, j] + coeff * v
            mats.append(m)
        return mats


def split_differential(space: GradedSpace, matrices, step: int):
    """Split a weight-graded differential into image/homology/transversal parts.

    matrices maps weight w to the SparseMatrix of d: V_w -> V_{w+step}.
    Verifies d*d = 0 weight-wise and returns {weight: WeightSplit}.  The
    homology part is the deterministic lowest-pivot complement of the image
    inside the kernel; the transversal part maps isomorphically onto the image
    one step up.
    """
    weights = space.weights()
    for w in weights:
        dw = matrices.get(w)
        dn = matrices.get(w + step)
        if dw is not None and dn is not None and step != 0:
            if not dn.compose(dw).is_zero():
                raise NotADifferential("d*d != 0 from weight %d" % w)
        if step == 0 and dw is not None:
            if not dw.compose(dw).is_zero():
                raise NotADifferential("d*d != 0 at weight %d" % w)

    splits = {}
    order = weights if step >= 0 else list(reversed(weights))
    for w in order:
        dim = space.dim(w)
        out_mat = matrices.get(w) or SparseMatrix(space.dim(w + step), dim)
        if step == 0:
            prev_trans = None
        else:
            prev = splits.get(w - step)
            prev_trans = prev.transversal if prev else []
        in_mat = matrices.get(w - step) if step != 0 else out_mat

        # Kernel of the outgoing differential.
        ker = [list(v) for v in kernel_basis(out_mat)] if dim else []

        # Transversal: standard basis vectors completing the kernel.
        ech = _Echelon(dim)
        for v in ker:
            ech.insert(list(v))
        transversal = []
        for j in range(dim):
            unit = [Fraction(0)] * dim
            unit[j] = Fraction(1)
            if ech.insert(list(unit)):
                transversal.append(unit)

        splits[w] = (ker, transversal, in_mat, prev_trans)

    # Second pass: image = d(previous transversal); homology completes it in ker.
    result = {}
    for w in weights:
        ker, transversal, in_mat, prev_trans = splits[w]
        dim = space.dim(w)
        if step == 0:
            prev_trans = transversal
        image = []
        pullback = []
        if in_mat is not None and prev_trans:
            for t in prev_trans:
                img = in_mat.apply(t)
                if any(img):
                    image.append(img)
                    pullback.append(t)
        ech = _Echelon(dim)
        for v in image:
            if not ech.insert(list(v)):
                raise NotADifferential("image vectors dependent at weight %d" % w)
        homology = [v for v in ker if ech.insert(list(v))]
        result[w] = WeightSplit(dim, image, homology, transversal, pullback)
    return result
