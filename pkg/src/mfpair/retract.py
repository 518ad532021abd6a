"""Deformation retract data (p, i, h) with side conditions, built per weight.

For each weight w the algebra's piece splits deterministically as
image(d) + homology + transversal, with the differential carrying the
transversal isomorphically onto the image one step up.  The retract maps are
read off this splitting; the side conditions hold by construction and are
re-verified in verify().

Weight pieces are generated lazily, so the same code serves finite table
algebras and the infinite-dimensional matrix-factorization algebra.  Homology
is only collected inside the configured weight window; the margin bands on
both sides are checked to be acyclic, and a homology class found there raises
WindowTooSmall.
"""
from __future__ import annotations

from fractions import Fraction

from .exact import SparseMatrix, _Echelon, kernel_basis, solve


class WindowTooSmall(Exception):
    pass


class _Piece:
    __slots__ = ("labels", "index", "image", "homology", "transversal",
                 "pullback", "solver", "hom_parities")

    def __init__(self):
        self.labels = []
        self.index = {}
        self.image = []
        self.homology = []
        self.transversal = []
        self.pullback = []
        self.solver = None
        self.hom_parities = []


class RetractData:
    """Weight-graded (p, i, h) exhibiting the cohomology as a retract."""

    def __init__(self, A, window=None, margin=0):
        self.A = A
        self.step = A.d_weight
        self._pieces = {}
        if window is None:
            if not getattr(A, "is_finite", False):
                raise ValueError("infinite algebra needs an explicit window")
            weights = sorted({A.weight(l) for l in A.labels})
            window = (weights[0], weights[-1]) if weights else (0, 0)
            margin = 0
        self.window = (int(window[0]), int(window[1]))
        self.margin = int(margin)

        self.ha_basis = []  # (weight, parity, local index) in deterministic order
        lo, hi = self.window
        for w in range(lo - self.margin, hi + self.margin + 1):
            piece = self._piece(w)
            if not piece.homology:
                continue
            if not lo <= w <= hi:
                raise WindowTooSmall(
                    "window too small: homology of dimension %d at weight %d"
                    % (len(piece.homology), w))
            order = sorted(range(len(piece.homology)),
                           key=lambda k: (piece.hom_parities[k], k))
            for k in order:
                self.ha_basis.append((w, piece.hom_parities[k], k))
        self.ha_dim = len(self.ha_basis)

    # -- weight pieces ---------------------------------------------------------

    def _basis(self, w):
        return self._piece(w).labels

    def _piece(self, w) -> _Piece:
        piece = self._pieces.get(w)
        if piece is not None:
            return piece
        piece = _Piece()
        self._pieces[w] = piece
        labels = sorted(self.A.weight_basis(w))
        piece.labels = labels
        piece.index = {lbl: k for k, lbl in enumerate(labels)}
        dim = len(labels)
        if dim == 0:
            return piece

        nxt = sorted(self.A.weight_basis(w + self.step)) if self.step else labels
        nxt_index = {lbl: k for k, lbl in enumerate(nxt)}
        out = SparseMatrix(len(nxt), dim)
        for j, lbl in enumerate(labels):
            for lbl2, c in self.A.diff(lbl).items():
                out[nxt_index[lbl2], j] = c

        ker = [list(v) for v in kernel_basis(out)]
        ech = _Echelon(dim)
        for v in ker:
            ech.insert(list(v))
        transversal = []
        for j in range(dim):
            unit = [Fraction(0)] * dim
            unit[j] = Fraction(1)
            if ech.insert(list(unit)):
                transversal.append(unit)
        piece.transversal = transversal

        if self.step:
            prev = self._piece(w - self.step)
            prev_trans, prev_labels = prev.transversal, prev.labels
        else:
            prev_trans, prev_labels = transversal, labels
        image = []
        pullback = []
        for t in prev_trans:
            img = [Fraction(0)] * dim
            some = False
            for j, c in enumerate(t):
                if c:
                    for lbl2, v in self.A.diff(prev_labels[j]).items():
                        img[piece.index[lbl2]] += c * v
                        some = True
            if some and any(img):
                image.append(img)
                pullback.append(t)
        piece.image = image
        piece.pullback = pullback

        ech = _Echelon(dim)
        for v in image:
            ech.insert(list(v))
        homology = [v for v in ker if ech.insert(list(v))]
        piece.homology = homology
        piece.hom_parities = []
        for v in homology:
            pars = {self.A.parity(labels[j]) for j, c in enumerate(v) if c}
            if len(pars) != 1:
                raise ValueError("homology vector of mixed parity at weight %d" % w)
            piece.hom_parities.append(pars.pop())

        cols = image + homology + transversal
        solver = SparseMatrix(dim, len(cols))
        for j, cvec in enumerate(cols):
            for i, c in enumerate(cvec):
                if c:
                    solver[i, j] = c
        piece.solver = solver
        return piece

    # -- vector helpers --------------------------------------------------------

    def _by_weight(self, vec):
        grouped = {}
        for lbl, c in vec.items():
            if c:
                grouped.setdefault(self.A.weight(lbl), {})[lbl] = c
        return grouped

    def _coords(self, piece, dense):
        coords = solve(piece.solver, dense)
        ni, nh = len(piece.image), len(piece.homology)
        return coords[:ni], coords[ni:ni + nh], coords[ni + nh:]

    def _dense(self, piece, part):
        dense = [Fraction(0)] * len(piece.labels)
        for lbl, c in part.items():
            dense[piece.index[lbl]] = c
        return dense

    def apply_h(self, vec) -> dict:
        """The contracting homotopy, weight by weight."""
        out = {}
        for w, part in self._by_weight(vec).items():
            piece = self._piece(w)
            im_coords, _, _ = self._coords(piece, self._dense(piece, part))
            src = self._piece(w - self.step) if self.step else piece
            for coeff, pull in zip(im_coords, piece.pullback):
                if coeff:
                    for j, c in enumerate(pull):
                        if c:
                            lbl = src.labels[j]
                            acc = out.get(lbl, Fraction(0)) + coeff * c
                            if acc:
                                out[lbl] = acc
                            else:
                                out.pop(lbl, None)
        return out

    def apply_p(self, vec) -> dict:
        """Projection onto homology; returns {global index: Fraction}."""
        coords_by_weight = {}
        for w, part in self._by_weight(vec).items():
            piece = self._piece(w)
            _, hom, _ = self._coords(piece, self._dense(piece, part))
            coords_by_weight[w] = hom
        out = {}
        for g, (w, _, k) in enumerate(self.ha_basis):
            hom = coords_by_weight.get(w)
            if hom and hom[k]:
                out[g] = hom[k]
        return out

    def apply_i(self, ha_vec) -> dict:
        """Inclusion of homology; argument maps global index -> Fraction."""
        out = {}
        for g, coeff in ha_vec.items():
            if not coeff:
                continue
            w, _, k = self.ha_basis[g]
            piece = self._piece(w)
            for j, c in enumerate(piece.homology[k]):
                if c:
                    lbl = piece.labels[j]
                    acc = out.get(lbl, Fraction(0)) + coeff * c
                    if acc:
                        out[lbl] = acc
                    else:
                        out.pop(lbl, None)
        return out

    def apply_d(self, vec) -> dict:
        out = {}
        for lbl, c in vec.items():
            for lbl2, v in self.A.diff(lbl).items():
                acc = out.get(lbl2, Fraction(0)) + c * v
                if acc:
                    out[lbl2] = acc
                else:
                    out.pop(lbl2, None)
        return out

    def ha_parity(self, g: int) -> int:
        return self.ha_basis[g][1]

    def include_index(self, g: int) -> dict:
        return self.apply_i({g: Fraction(1)})

    # -- contract verification -------------------------------------------------

    def verify(self, weights=None) -> bool:
        """Check all five retract identities and three side conditions exactly."""
        if weights is None:
            lo, hi = self.window
            weights = range(lo - self.margin, hi + self.margin + 1)
        for w in weights:
            for lbl in self._basis(w):
                e = {lbl: Fraction(1)}
                if self.apply_p(self.apply_d(e)):
                    raise AssertionError("pd != 0 at %r" % (lbl,))
                ip = self.apply_i(self.apply_p(e))
                dh = self.apply_d(self.apply_h(e))
                hd = self.apply_h(self.apply_d(e))
                total = dict(ip)
                for part in (dh, hd):
                    for l2, c in part.items():
                        acc = total.get(l2, Fraction(0)) + c
                        if acc:
                            total[l2] = acc
                        else:
                            total.pop(l2, None)
                if total != e:
                    raise AssertionError("ip != id - dh - hd at %r" % (lbl,))
                if self.apply_p(self.apply_h(e)):
                    raise AssertionError("ph != 0 at %r" % (lbl,))
                if self.apply_h(self.apply_h(e)):
                    raise AssertionError("h^2 != 0 at %r" % (lbl,))
        for g in range(self.ha_dim):
            unit = {g: Fraction(1)}
            inc = self.apply_i(unit)
            if self.apply_d(inc):
                raise AssertionError("di != 0 at class %d" % g)
            if self.apply_p(inc) != unit:
                raise AssertionError("pi != id at class %d" % g)
            if self.apply_h(inc):
                raise AssertionError("hi != 0 at class %d" % g)
        return True


def compute_retract(A, window=None, margin=0) -> RetractData:
    return RetractData(A, window, margin)
