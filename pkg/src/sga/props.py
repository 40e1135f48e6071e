"""Executable checkers for the structural laws of the semigraph algebra.

Each checker returns a CheckReport with a verdict of pass, bounded-pass
(exhaustive within the stated bounds), or fail; a fail always names a
concrete witness.  All verdicts are decided by exact arithmetic against the
block model, never numerically.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import algebra
from .algebra import (StandardWord, as_element, enumerate_half_standard,
                      enumerate_projection_sets, enumerate_standard_words,
                      gen_element, multiply, range_projection,
                      standard_projection)
from .rep import Model, equals, is_zero, separation_check
from .report import CheckReport
from .semigraph import zero_degree

_WITNESS_CAP = 10


def _compose(f_arr, g_arr):
    # partial-permutation composition f(g(y)) with -1 as "undefined"
    alive = g_arr >= 0
    pos = np.where(alive, g_arr, 0)
    tgt = np.take_along_axis(f_arr, pos, axis=1)
    return np.where(alive, tgt, -1)


def _ident_map(model):
    return np.where(model.masks, np.arange(model.n)[None, :], -1)


def _scatter(model, m, out=None):
    if out is None:
        out = np.zeros((model.masks.shape[0], model.n, model.n), dtype=np.int64)
    b_idx, y_idx = np.nonzero(m >= 0)
    np.add.at(out, (b_idx, m[b_idx, y_idx], y_idx), 1)
    return out


def check_relations(semigraph, model=None):
    """All six defining relations as exact operator identities.

    Exhaustive over T for the partial-isometry and projection laws, over
    T x T for products, commutation, and the adjoint-product expansion.
    """
    if model is None:
        model = Model(semigraph)
    S = semigraph
    witnesses = []
    ident = _ident_map(model)

    def note(*w):
        if len(witnesses) < _WITNESS_CAP:
            witnesses.append(w)

    for t in S.elements:
        m, inv = model.gen_map(t), model.inv_map(t)
        if not np.array_equal(_compose(m, _compose(inv, m)), m):
            note("partial-isometry", t)
    zero = zero_degree(S.rank)
    for e in S.vertices:
        m = model.gen_map(e)
        if not (np.array_equal(_compose(m, m), m)
                and np.array_equal(model.inv_map(e), m)):
            note("unit-projection", e)
    for s, t in itertools.product(S.elements, S.elements):
        prod = _compose(model.gen_map(s), model.gen_map(t))
        st = S.mul(s, t)
        target = model.gen_map(st) if st is not None else np.full_like(prod, -1)
        if not np.array_equal(prod, target):
            note("product", s, t)
    diags = {t: model.q_diag(t) for t in S.elements}
    for s, t in itertools.combinations(S.elements, 2):
        both = diags[s] & diags[t]
        if not np.array_equal(both, diags[t] & diags[s]):
            note("commuting-sources", s, t)
    for x, y in itertools.product(S.elements, S.elements):
        lhs = _scatter(model, _compose(model.inv_map(x), model.gen_map(y)))
        rhs = np.zeros_like(lhs)
        for e, f in S.min_common_extensions_unital(x, y):
            z = S.unital_mul(y, f)
            branch = model.inv_map(f) if f is not None else ident
            alive = branch >= 0
            pos = np.where(alive, branch, 0)
            keep = alive & np.take_along_axis(diags[z], pos, axis=1)
            branch = np.where(keep, branch, -1)
            if e is not None:
                branch = _compose(model.gen_map(e), branch)
            _scatter(model, branch, rhs)
        if not np.array_equal(lhs, rhs):
            note("adjoint-product", x, y)
    verdict = "fail" if witnesses else "pass"
    return CheckReport("relations", verdict, witnesses,
                       bounds={"elements": len(S.elements)})


def _token_words(semigraph, maxlen):
    """Normal forms of all token words up to maxlen, level by level."""
    letters = [(t, False) for t in semigraph.elements]
    letters += [(t, True) for t in semigraph.elements]
    gens = {tok: gen_element(semigraph, *tok) for tok in letters}
    frontier = [((tok,), gens[tok]) for tok in letters]
    out = list(frontier)
    for _ in range(maxlen - 1):
        frontier = [(toks + (tok,), multiply(el, gens[tok]))
                    for toks, el in frontier for tok in letters]
        out.extend(frontier)
    return out


def check_inverse_semigroup(semigraph, model=None, maxlen=3, pair_maxlen=None):
    """Inverse-semigroup laws of the word calculus.

    For every token word w up to maxlen: w·w*·w = w.  Source projections of
    words up to pair_maxlen commute pairwise, and range projections of
    distinct generators of equal degree are orthogonal.
    """
    if model is None:
        model = Model(semigraph)
    S = semigraph
    if pair_maxlen is None:
        pair_maxlen = max(1, maxlen // 2)
    witnesses = []
    words = _token_words(S, maxlen)
    for toks, el in words:
        back = multiply(multiply(el, el.adjoint()), el)
        if not equals(model.represent(back), model.represent(el)):
            witnesses.append(("www", toks))
            if len(witnesses) >= _WITNESS_CAP:
                break
    sources = {}
    for toks, el in words:
        if len(toks) > pair_maxlen:
            continue
        su = multiply(el.adjoint(), el)
        key = frozenset(su.terms.items())
        sources.setdefault(key, (toks, su))
    pairs = 0
    svals = list(sources.values())
    for (tu, su), (tv, sv) in itertools.combinations(svals, 2):
        pairs += 1
        if not equals(model.represent(multiply(su, sv)),
                      model.represent(multiply(sv, su))):
            witnesses.append(("commute", tu, tv))
            if len(witnesses) >= _WITNESS_CAP:
                break
    for x, y in itertools.combinations(S.elements, 2):
        if S.degree[x] != S.degree[y] or S.degree[x] == zero_degree(S.rank):
            continue
        px = multiply(gen_element(S, x), gen_element(S, x, star=True))
        py = multiply(gen_element(S, y), gen_element(S, y, star=True))
        if not is_zero(model.represent(multiply(px, py))):
            witnesses.append(("orthogonality", x, y))
    verdict = "fail" if witnesses else "bounded-pass"
    return CheckReport("inverse_semigroup", verdict, witnesses,
                       bounds={"maxlen": maxlen, "pair_maxlen": pair_maxlen,
                               "words": len(words), "source_pairs": pairs})


def check_order_laws(semigraph, model=None):
    """Source-projection order against word order, over all ordered pairs.

    Q_t = Q_s exactly when s = t; Q_t < Q_s exactly when s < t; and
    Q_s·Q_t < Q_t whenever s is not a right segment of t.
    """
    if model is None:
        model = Model(semigraph)
    S = semigraph
    witnesses = []
    diags = {t: model.q_diag(t) for t in S.elements}

    def strict_below(a, b):
        return bool((a <= b).all() and (a != b).any())

    for s, t in itertools.product(S.elements, S.elements):
        ds, dt = diags[s], diags[t]
        if (s == t) != np.array_equal(dt, ds):
            witnesses.append(("equality", s, t))
        if ((S.leq(s, t) and s != t) != strict_below(dt, ds)):
            witnesses.append(("strict-order", s, t))
        if not S.leq(s, t) and not strict_below(ds & dt, dt):
            witnesses.append(("meet-drop", s, t))
        if len(witnesses) >= _WITNESS_CAP:
            break
    verdict = "fail" if witnesses else "pass"
    return CheckReport("order_laws", verdict, witnesses,
                       bounds={"pairs": len(S.elements) ** 2})


def _half_diag(model, word):
    return model.diag_half_standard(word)


def check_free(semigraph, model=None, max_join=None):
    """Freeness of the generating family.

    (i) no range projection of a half-standard word with a non-unit leg
    coincides with a point of the source-projection semilattice; (ii) for
    every nonzero p there, the join of all strictly smaller half-standard
    range projections stays strictly below p (evaluated distributively).
    """
    if model is None:
        model = Model(semigraph)
    S = semigraph
    witnesses = []
    psets = enumerate_projection_sets(S)
    pdiags = [model.diag_projection_set(p) for p in psets]
    halfs = enumerate_half_standard(S)
    hdiags = [_half_diag(model, a) for a in halfs]

    for a, da in zip(halfs, hdiags):
        if a.left is None:
            continue
        if not da.any():
            witnesses.append(("not-free-i", a, "zero"))
            continue
        for q, dq in zip(psets, pdiags):
            if np.array_equal(da, dq):
                witnesses.append(("not-free-i", a, q))
                break

    checked_joins = 0
    for p, dp in zip(psets, pdiags):
        below = [a for a, da in zip(halfs, hdiags)
                 if (da <= dp).all() and (da != dp).any() and da.any()]
        if max_join is not None:
            below = below[:max_join]
        if not below:
            continue
        checked_joins += 1
        # p·(1-P_a1)···(1-P_am) expanded distributively; freeness (ii) says
        # the full complement product never collapses to zero, which covers
        # every smaller join by monotonicity
        rest = as_element(S, StandardWord(None, p, None))
        for a in below:
            rest = rest - multiply(rest, range_projection(S, a))
        if is_zero(model.represent(rest)):
            witnesses.append(("not-free-ii", p, tuple(below)))
        if len(witnesses) >= _WITNESS_CAP:
            break
    verdict = "fail" if witnesses else "pass"
    return CheckReport("free", verdict, witnesses,
                       bounds={"projection_sets": len(psets),
                               "half_standard": len(halfs),
                               "joins": checked_joins})


def _sub_half_standards(semigraph, coord):
    """Half-standard words whose ingredients all have coordinate-i degree 0."""
    out = []
    for w in enumerate_half_standard(semigraph):
        parts = list(w.mid.members)
        if w.left is not None:
            parts.append(w.left)
        if all(semigraph.degree[x][coord] == 0 for x in parts):
            out.append(w)
    return out


def _unit_degree_elements(semigraph, coord):
    unit = tuple(1 if i == coord else 0 for i in range(semigraph.rank))
    return [t for t in semigraph.elements if semigraph.degree[t] == unit]


def check_weakly_free(semigraph, model=None, max_complements=2):
    """No nonzero standard projection avoiding coordinate i sits under the
    sum of the range projections of the coordinate-i generators."""
    if model is None:
        model = Model(semigraph)
    S = semigraph
    witnesses = []
    enumerated = 0
    for coord in range(S.rank):
        gens = _unit_degree_elements(S, coord)
        if not gens:
            continue
        cover = np.zeros_like(model.masks)
        for b in gens:
            cover |= _half_diag(model, StandardWord(
                b, algebra.normalize_projection(S, [b]), None))
        subs = _sub_half_standards(S, coord)
        for a in subs:
            others = [b for b in subs if b != a]
            for m in range(0, max_complements + 1):
                for bs in itertools.combinations(others, m):
                    el = standard_projection(S, a, list(bs))
                    rep = model.represent(el)
                    if is_zero(rep):
                        continue
                    enumerated += 1
                    diag = np.einsum("bii->bi", rep.dense)
                    if ((diag != 0) <= cover).all():
                        witnesses.append(("dominated", coord, a, bs))
                        if len(witnesses) >= _WITNESS_CAP:
                            break
    verdict = "fail" if witnesses else "bounded-pass"
    return CheckReport("weakly_free", verdict, witnesses,
                       bounds={"max_complements": max_complements,
                               "projections": enumerated})


def _standard_projection_pool(semigraph, model, max_complements):
    """Deduplicated nonzero standard projections as boolean diagonals."""
    halfs = enumerate_half_standard(semigraph)
    hdiags = [_half_diag(model, a) for a in halfs]
    pool = {}
    for a, da in zip(halfs, hdiags):
        if not da.any():
            continue
        below = [(b, db) for b, db in zip(halfs, hdiags)
                 if (db <= da).all() and (db != da).any() and db.any()]
        for m in range(0, max_complements + 1):
            for combo in itertools.combinations(below, m):
                diag = da.copy()
                for _, db in combo:
                    diag &= ~db
                if diag.any():
                    key = diag.tobytes()
                    if key not in pool:
                        pool[key] = ((a, tuple(b for b, _ in combo)), diag)
    return list(pool.values())


def check_cancelling(semigraph, model=None, max_complements=1):
    """Every nonzero-degree standard word is crushed by some nonzero
    standard projection below any given one: exists q <= p with q·w·q = 0."""
    if model is None:
        model = Model(semigraph)
    S = semigraph
    zero = zero_degree(S.rank)
    words = [w for w in enumerate_standard_words(S) if w.word_degree(S) != zero]
    pool = _standard_projection_pool(S, model, max_complements)
    witnesses = []
    searched = 0

    def crushes(diag, wmap):
        alive = (wmap >= 0) & diag
        if not alive.any():
            return True
        pos = np.where(alive, wmap, 0)
        hits = alive & np.take_along_axis(diag, pos, axis=1)
        return not hits.any()

    for w in words:
        wmap = model.word_map(w)
        rdiag = _half_diag(model, StandardWord(w.left, w.mid, None))
        sdiag = _half_diag(model, StandardWord(w.right, w.mid, None))
        for (pdesc, pdiag) in pool:
            searched += 1
            found = False
            for qdiag in (pdiag, pdiag & ~rdiag, pdiag & ~sdiag):
                if qdiag.any() and crushes(qdiag, wmap):
                    found = True
                    break
            if not found:
                for _, qdiag in pool:
                    if (qdiag <= pdiag).all() and qdiag.any() and crushes(qdiag, wmap):
                        found = True
                        break
            if not found:
                witnesses.append(("no-witness", w, pdesc))
                if len(witnesses) >= _WITNESS_CAP:
                    break
        if len(witnesses) >= _WITNESS_CAP:
            break
    verdict = "fail" if witnesses else "bounded-pass"
    return CheckReport("cancelling", verdict, witnesses,
                       bounds={"words": len(words), "projections": len(pool),
                               "max_complements": max_complements,
                               "pairs": searched})


def check_lemma_mini22(semigraph, model=None):
    """Left units of one degree coordinate absorb: for a of unit degree e_i
    and any standard word w avoiding coordinate i, P_a·w is reproduced by
    the full coordinate-i cover, exactly."""
    if model is None:
        model = Model(semigraph)
    S = semigraph
    witnesses = []
    checked = 0
    zero = zero_degree(S.rank)
    for coord in range(S.rank):
        gens = _unit_degree_elements(S, coord)
        if not gens:
            continue
        cover = None
        for b in gens:
            pb = range_projection(S, StandardWord(
                b, algebra.normalize_projection(S, [b]), None))
            cover = pb if cover is None else cover + pb
        subwords = []
        for w in enumerate_standard_words(S):
            parts = list(w.mid.members) + [x for x in (w.left, w.right)
                                           if x is not None]
            if all(S.degree[x][coord] == 0 for x in parts):
                subwords.append(w)
        for a in gens:
            pa = range_projection(S, StandardWord(
                a, algebra.normalize_projection(S, [a]), None))
            for w in subwords:
                checked += 1
                left = multiply(pa, as_element(S, w))
                rest = left - multiply(left, cover)
                if not is_zero(model.represent(rest)):
                    witnesses.append(("not-absorbed", coord, a, w))
                    if len(witnesses) >= _WITNESS_CAP:
                        break
    verdict = "fail" if witnesses else "pass"
    return CheckReport("lemma_mini22", verdict, witnesses,
                       bounds={"checked": checked})


CHECKERS = {
    "relations": lambda S, model, bounds: check_relations(S, model),
    "inverse_semigroup": lambda S, model, bounds: check_inverse_semigroup(
        S, model, maxlen=bounds.get("maxlen", 3),
        pair_maxlen=bounds.get("pair_maxlen")),
    "order_laws": lambda S, model, bounds: check_order_laws(S, model),
    "separation": lambda S, model, bounds: separation_check(S, model),
    "free": lambda S, model, bounds: check_free(
        S, model, max_join=bounds.get("max_join")),
    "weakly_free": lambda S, model, bounds: check_weakly_free(
        S, model, max_complements=bounds.get("max_complements", 2)),
    "cancelling": lambda S, model, bounds: check_cancelling(
        S, model, max_complements=bounds.get("cancelling_complements", 1)),
    "lemma_mini22": lambda S, model, bounds: check_lemma_mini22(S, model),
}


def run_all(semigraph, model=None, bounds=None, names=None, jobs=None):
    """Run the named checkers (default: all) and return their reports.

    Parallelism comes from the SGA_JOBS environment variable or the jobs
    argument; results are always in registry order regardless of jobs.
    """
    if model is None:
        model = Model(semigraph)
    bounds = bounds or {}
    names = list(names) if names else list(CHECKERS)
    for name in names:
        if name not in CHECKERS:
            raise ValueError(f"unknown checker {name!r}")
    if jobs is None:
        jobs = int(os.environ.get("SGA_JOBS", "1"))
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(CHECKERS[n], semigraph, model, bounds)
                       for n in names]
            return [f.result() for f in futures]
    return [CHECKERS[n](semigraph, model, bounds) for n in names]
