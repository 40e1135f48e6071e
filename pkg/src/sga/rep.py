"""Finite faithful block model of the left regular representation.

The representation space is a finite direct sum of blocks.  Every block is
indexed by the element set T: the T-block carries the action t·y on T
itself, and each marked block A (a nonempty subset of T) carries the same
action restricted to the suffix closure B_A = {y : y <= a for some a in A}.
Marked basis vectors outside B_A do not exist, so a product landing outside
the closure acts as zero.

Tuples of marks with repeats or reorderings generate blocks isomorphic to
the set-block, so one block per subset is enough for equality; the
duplicate-block invariance test guards this reduction.  Antichains-only
mode keeps one block per <=-antichain; the closures B_A of a subset and of
its antichain of maximal members coincide, so both modes expose the same
family of closures.

All matrices are exact (integer or rational); there is no floating point
anywhere in this module.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np

from .algebra import StandardWord, enumerate_projection_sets, enumerate_standard_words
from .report import CheckReport

DEFAULT_MAX_BLOCKS = 5000

T_BLOCK = "T"


class BlockCountError(RuntimeError):
    """Raised when a block family would exceed the configured cap."""


class Block:
    """One invariant subspace: a label, its basis mask, and basis ids."""

    def __init__(self, label, index, mask, basis):
        self.label = label
        self.index = index
        self.mask = mask
        self.basis = basis

    def label_str(self):
        if self.label == T_BLOCK:
            return "T"
        if isinstance(self.label, tuple) and self.label and self.label[0] == "dup":
            return f"dup[{self.label[1]}]#{self.label[2]}"
        return "{" + ",".join(sorted(self.label)) + "}"

    def __repr__(self):
        return f"<Block {self.label_str()} dim={len(self.basis)}>"


def _antichains(semigraph):
    """All nonempty antichains of (T, <=), in deterministic DFS order."""
    pool = semigraph.elements
    out = []

    def extend(prefix, start):
        for i in range(start, len(pool)):
            cand = pool[i]
            if any(semigraph.leq(cand, m) or semigraph.leq(m, cand) for m in prefix):
                continue
            chosen = prefix + [cand]
            out.append(tuple(chosen))
            extend(chosen, i + 1)

    extend([], 0)
    return out


def block_labels(semigraph, mode, max_blocks):
    """The T-block label plus one subset label per mode's family."""
    n = len(semigraph.elements)
    if mode == "all":
        count = 2 ** n  # includes the T-block
        if max_blocks is not None and count > max_blocks:
            raise BlockCountError(
                f"all-subsets mode needs {count} blocks for |T|={n}, cap is "
                f"{max_blocks}; raise max_blocks or use mode='antichains'")
        labels = [T_BLOCK]
        for size in range(1, n + 1):
            labels.extend(frozenset(c) for c in
                          itertools.combinations(semigraph.elements, size))
        return labels
    if mode == "antichains":
        chains = _antichains(semigraph)
        if max_blocks is not None and len(chains) + 1 > max_blocks:
            raise BlockCountError(
                f"antichains mode needs {len(chains) + 1} blocks, cap is {max_blocks}")
        return [T_BLOCK] + [frozenset(c) for c in chains]
    raise ValueError(f"unknown block mode {mode!r}")


class Model:
    """The block model of one semigraph, with exact generator actions.

    mode "all" (default) takes every nonempty subset of T as a marked
    block; mode "antichains" keeps antichains only.  corruptions is test
    plumbing: {t: {y: new_target_or_None}} deliberately rewires the action
    of t for negative-control tests.
    """

    def __init__(self, semigraph, mode="all", max_blocks=DEFAULT_MAX_BLOCKS,
                 corruptions=None, _labels=None):
        self.semigraph = semigraph
        self.mode = mode
        n = len(semigraph.elements)
        self.n = n
        self._arange = np.arange(n)

        lmul = {}
        for t in semigraph.elements:
            col = np.full(n, -1, dtype=np.int64)
            for y in semigraph.elements:
                z = semigraph.mul(t, y)
                if z is not None:
                    col[semigraph.index[y]] = semigraph.index[z]
            lmul[t] = col
        if corruptions:
            for t, patch in corruptions.items():
                col = lmul[t].copy()
                for y, tgt in patch.items():
                    col[semigraph.index[y]] = -1 if tgt is None else semigraph.index[tgt]
                lmul[t] = col
        for t, col in lmul.items():
            defined = col[col >= 0]
            if len(set(defined.tolist())) != len(defined):
                raise ValueError(f"action of {t!r} is not injective; "
                                 "the model needs partial permutations")
        self.lmul = lmul
        self.corruptions = corruptions or {}

        labels = _labels if _labels is not None else block_labels(
            semigraph, mode, max_blocks)
        masks = np.zeros((len(labels), n), dtype=bool)
        suffix_idx = {t: [semigraph.index[s] for s in semigraph.suffixes(t)]
                      for t in semigraph.elements}
        self.blocks = []
        for b, label in enumerate(labels):
            if label == T_BLOCK:
                masks[b, :] = True
            else:
                members = label[1] if (isinstance(label, tuple) and label
                                       and label[0] == "dup") else label
                for a in members:
                    masks[b, suffix_idx[a]] = True
            basis = [semigraph.elements[i] for i in np.nonzero(masks[b])[0]]
            self.blocks.append(Block(label, b, masks[b], basis))
        self.masks = masks
        self._block_by_label = {blk.label: blk for blk in self.blocks}

        self._maps = {}
        self._invs = {}
        self._mats = {}
        self._word_maps = {}

    @property
    def shape(self):
        return self.masks.shape

    def block(self, label):
        """The block with the given label (a frozenset of ids, or "T")."""
        if label != T_BLOCK:
            label = frozenset(label)
        return self._block_by_label[label]

    def with_duplicate_blocks(self, labels_with_repeats):
        """A new model with extra tuple-blocks appended.

        Each entry is a tuple of element ids, possibly with repeats or
        reorderings; its block is the set-block of the underlying set.
        """
        extra = [("dup", tuple(t), k) for k, t in enumerate(labels_with_repeats)]
        for _, tup, _ in extra:
            if not tup:
                raise ValueError("duplicate block label must be nonempty")
        labels = [blk.label for blk in self.blocks] + [
            ("dup", frozenset(tup), k) for _, tup, k in extra]
        return Model(self.semigraph, mode=self.mode, max_blocks=None,
                     corruptions=self.corruptions, _labels=labels)

    def with_corruption(self, t, patch):
        """A new model whose action of t is rewired by {y: target_or_None}."""
        corruptions = {u: dict(p) for u, p in self.corruptions.items()}
        corruptions.setdefault(t, {}).update(patch)
        labels = [blk.label for blk in self.blocks]
        return Model(self.semigraph, mode=self.mode, max_blocks=None,
                     corruptions=corruptions, _labels=labels)

    # ---- per-generator actions -------------------------------------------

    def gen_map(self, t):
        """(blocks, n) target indices of left multiplication by t; -1 kills."""
        if t not in self._maps:
            col = self.lmul[t]
            ok = col >= 0
            pos = np.where(ok, col, 0)
            cond = self.masks & ok[None, :] & self.masks[:, pos]
            self._maps[t] = np.where(cond, col[None, :], -1)
        return self._maps[t]

    def inv_map(self, t):
        """(blocks, n) indices of the adjoint action of t; -1 kills."""
        if t not in self._invs:
            m = self.gen_map(t)
            inv = np.full_like(m, -1)
            b_idx, y_idx = np.nonzero(m >= 0)
            inv[b_idx, m[b_idx, y_idx]] = y_idx
            self._invs[t] = inv
        return self._invs[t]

    def q_diag(self, t):
        """(blocks, n) boolean diagonal of the source projection of t."""
        return self.gen_map(t) >= 0

    def generator_matrix(self, t):
        """(blocks, n, n) dense 0/1 matrices of the action of t."""
        if t not in self._mats:
            m = self.gen_map(t)
            mats = np.zeros(m.shape + (self.n,), dtype=np.int16)
            b_idx, y_idx = np.nonzero(m >= 0)
            mats[b_idx, m[b_idx, y_idx], y_idx] = 1
            self._mats[t] = mats
        return self._mats[t]

    def identity_matrix(self):
        blocks = self.masks.shape[0]
        mats = np.zeros((blocks, self.n, self.n), dtype=np.int16)
        b_idx, y_idx = np.nonzero(self.masks)
        mats[b_idx, y_idx, y_idx] = 1
        return mats

    def lambda_matrix(self, t, block):
        """The compact 0/1 matrix of t on one block's own basis."""
        if not isinstance(block, Block):
            block = self.block(block)
        idxs = np.nonzero(block.mask)[0]
        local = {g: i for i, g in enumerate(idxs)}
        m = self.gen_map(t)[block.index]
        out = np.zeros((len(idxs), len(idxs)), dtype=np.int16)
        for j, y in enumerate(idxs):
            if m[y] >= 0:
                out[local[m[y]], j] = 1
        return out

    # ---- words and elements ----------------------------------------------

    def word_map(self, word):
        """(blocks, n) partial permutation realizing one standard word."""
        cached = self._word_maps.get(word)
        if cached is not None:
            return cached
        if word.right is not None:
            cur = self.inv_map(word.right).copy()
        else:
            cur = np.where(self.masks, self._arange[None, :], -1)
        for alpha in word.mid.members:
            alive = cur >= 0
            pos = np.where(alive, cur, 0)
            keep = alive & np.take_along_axis(self.q_diag(alpha), pos, axis=1)
            cur = np.where(keep, cur, -1)
        if word.left is not None:
            alive = cur >= 0
            pos = np.where(alive, cur, 0)
            tgt = np.take_along_axis(self.gen_map(word.left), pos, axis=1)
            cur = np.where(alive, tgt, -1)
        self._word_maps[word] = cur
        return cur

    def represent(self, x):
        """Exact RepOperator of an AlgebraElement or a single StandardWord."""
        if isinstance(x, StandardWord):
            terms = {x: Fraction(1)}
        else:
            if x.semigraph is not self.semigraph:
                raise ValueError("element belongs to a different semigraph")
            terms = x.terms
        blocks = self.masks.shape[0]
        integral = all(c.denominator == 1 for c in terms.values())
        dtype = np.int64 if integral else object
        dense = np.zeros((blocks, self.n, self.n), dtype=dtype)
        for word, coef in terms.items():
            m = self.word_map(word)
            b_idx, y_idx = np.nonzero(m >= 0)
            np.add.at(dense, (b_idx, m[b_idx, y_idx], y_idx),
                      int(coef) if integral else coef)
        return RepOperator(self, dense)

    # ---- diagonal fast paths ---------------------------------------------

    def diag_projection_set(self, pset):
        """(blocks, n) boolean diagonal of a ProjectionSet."""
        if pset.is_zero:
            return np.zeros_like(self.masks)
        out = self.masks.copy()
        for alpha in pset.members:
            out &= self.q_diag(alpha)
        return out

    def diag_half_standard(self, word):
        """(blocks, n) boolean diagonal of the range projection of s·p."""
        assert word.is_half
        inner = self.diag_projection_set(word.mid)
        if word.left is None:
            return inner
        m = self.gen_map(word.left)
        out = np.zeros_like(inner)
        b_idx, y_idx = np.nonzero(inner & (m >= 0))
        out[b_idx, m[b_idx, y_idx]] = True
        return out


class RepOperator:
    """One exact matrix per block, stored padded to the common index space."""

    __slots__ = ("model", "dense")

    def __init__(self, model, dense):
        self.model = model
        self.dense = dense

    def transposed(self):
        return RepOperator(self.model, self.dense.transpose(0, 2, 1))

    def entries(self):
        """Sorted ((block, row, col), value) pairs of nonzero entries."""
        b, i, j = np.nonzero(self.dense)
        return [((int(bb), int(ii), int(jj)), self.dense[bb, ii, jj])
                for bb, ii, jj in zip(b, i, j)]


def is_zero(op):
    return not op.dense.any()


def equals(op1, op2):
    if op1.model is not op2.model:
        raise ValueError("operators live in different models")
    return bool((op1.dense == op2.dense).all())


def algebra_dimension(semigraph, model=None, words=None):
    """Rank over the rationals of the represented standard-word span."""
    if model is None:
        model = Model(semigraph)
    if words is None:
        words = enumerate_standard_words(semigraph)
    n = model.n
    rows = []
    for w in words:
        m = model.word_map(w)
        b_idx, y_idx = np.nonzero(m >= 0)
        tgt = m[b_idx, y_idx]
        coords = (b_idx * n + tgt) * n + y_idx
        rows.append({int(c): Fraction(1) for c in coords})
    return exact_rank(rows)


def exact_rank(rows):
    """Rank of sparse rational row vectors, by exact Gaussian elimination."""
    echelon = {}
    rank = 0
    for row in rows:
        row = {k: Fraction(v) for k, v in row.items() if v != 0}
        while row:
            pivot = min(row)
            if pivot in echelon:
                factor = row.pop(pivot)
                for k, v in echelon[pivot].items():
                    if k == pivot:
                        continue
                    new = row.get(k, 0) - factor * v
                    if new:
                        row[k] = new
                    else:
                        row.pop(k, None)
            else:
                inv = 1 / row[pivot]
                echelon[pivot] = {k: v * inv for k, v in row.items()}
                rank += 1
                break
    return rank


def separation_check(semigraph, model=None):
    """Marked-vector separation: each nonzero ProjectionSet fixes its own
    marked basis vector, and every strictly smaller one kills it."""
    from .algebra import projection_leq

    if model is None:
        model = Model(semigraph)
    psets = enumerate_projection_sets(semigraph)
    diags = [model.diag_projection_set(p) for p in psets]
    witnesses = []
    checked = 0
    for p, diag in zip(psets, diags):
        blk = model.block(frozenset(p.members))
        src = semigraph.index[p.source]
        if not diag[blk.index, src]:
            witnesses.append(("fixes", tuple(p.members)))
        for q, qdiag in zip(psets, diags):
            if q == p or not projection_leq(semigraph, q, p):
                continue
            checked += 1
            if qdiag[blk.index, src]:
                witnesses.append(("kills", tuple(p.members), tuple(q.members)))
    verdict = "fail" if witnesses else "pass"
    return CheckReport("separation", verdict, witnesses,
                       bounds={"projection_sets": len(psets),
                               "strict_pairs": checked})
