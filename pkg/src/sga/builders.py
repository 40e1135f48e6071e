"""Constructors for standard families of finite semigraphs.

Every builder routes its raw tables through validate(), so a construction
with an axiom violation cannot be shipped silently.
"""

from __future__ import annotations

import itertools

from .semigraph import Semigraph, validate

# the default letter pool skips "v", the vertex id used by build_zeta
_LETTERS = "abcdefghijklmnopqrstuwxyz"


def build_zeta(loops, cut, letters=None):
    """Words of length <= cut over `loops` free letters, plus one vertex v.

    The product is concatenation when the result stays within the cut,
    undefined otherwise; the degree of a word is its length.
    """
    if loops < 1 or cut < 1:
        raise ValueError("loops and cut must be >= 1")
    if letters is None:
        if loops == 1:
            letters = ("t",)
        elif loops <= len(_LETTERS):
            letters = tuple(_LETTERS[:loops])
        else:
            raise ValueError(f"no default letter pool for {loops} loops; pass letters")
    letters = tuple(letters)
    if len(letters) != loops:
        raise ValueError(f"expected {loops} letters, got {len(letters)}")

    words = [""]
    frontier = [""]
    for _ in range(cut):
        frontier = [w + c for w in frontier for c in letters]
        words.extend(frontier)

    elements = [("v", (0,))] + [(w, (len(w),)) for w in words if w]
    products = [("v", "v", "v")]
    for w in words:
        if w:
            products.append(("v", w, w))
            products.append((w, "v", w))
    for u, w in itertools.product(words, words):
        if u and w and len(u) + len(w) <= cut:
            products.append((u, w, u + w))
    return validate(1, elements, products)


class DigraphSkeleton:
    """A finite directed graph: vertex ids plus edges with (range, source).

    An edge e with range r and source s composes on the left of anything
    that ends where e begins: e·p is defined when source(e) = range(p).
    """

    def __init__(self, vertices, edges):
        self.vertices = tuple(vertices)
        self.edges = dict(edges)
        seen = set(self.vertices)
        if len(seen) != len(self.vertices):
            raise ValueError("duplicate vertex ids")
        for name, (rng, src) in self.edges.items():
            if not name or not isinstance(name, str):
                raise ValueError(f"bad edge id {name!r}")
            if rng not in seen or src not in seen:
                raise ValueError(f"edge {name!r} endpoints ({rng!r}, {src!r}) missing")
            if name in seen:
                raise ValueError(f"edge id {name!r} collides with a vertex")


def build_path(skeleton, cut):
    """Composable edge paths of length <= cut in a digraph.

    Vertices are the degree-0 elements; a path's id is the concatenation of
    its edge ids in composition order; products compose paths when the ends
    match and the result stays within the cut.
    """
    if cut < 1:
        raise ValueError("cut must be >= 1")
    # path records: (id, range, source, length)
    paths = [(e, rng, src, 1) for e, (rng, src) in sorted(skeleton.edges.items())]
    frontier = list(paths)
    for _ in range(cut - 1):
        frontier = [(e + pid, rng, psrc, plen + 1)
                    for e, (rng, src) in sorted(skeleton.edges.items())
                    for pid, prng, psrc, plen in frontier
                    if src == prng]
        paths.extend(frontier)

    elements = [(v, (0,)) for v in skeleton.vertices]
    elements += [(pid, (plen,)) for pid, _, _, plen in paths]
    products = [(v, v, v) for v in skeleton.vertices]
    for pid, rng, src, _ in paths:
        products.append((rng, pid, pid))
        products.append((pid, src, pid))
    for (p, prng, psrc, plen), (q, qrng, qsrc, qlen) in itertools.product(paths, paths):
        if psrc == qrng and plen + qlen <= cut:
            products.append((p, q, p + q))
    return validate(1, elements, products)


class SftSpec:
    """Alphabet, forbidden factors, and a cut length for a subshift language."""

    def __init__(self, alphabet, forbidden, cut):
        self.alphabet = tuple(sorted(str(a) for a in alphabet))
        self.forbidden = tuple(sorted(str(f) for f in forbidden))
        self.cut = cut
        if not self.alphabet:
            raise ValueError("alphabet must be nonempty")
        if any(len(a) != 1 for a in self.alphabet):
            raise ValueError("alphabet symbols must be single characters")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("duplicate alphabet symbols")
        if any(not f for f in self.forbidden):
            raise ValueError("forbidden words must be nonempty strings")
        if cut < 1:
            raise ValueError("cut must be >= 1")


# id of the empty word in build_sft output; it cannot collide with an
# allowed word because alphabet symbols are single characters
EMPTY_WORD = "eps"


def build_sft(spec):
    """All factor-free words of length <= cut, with concatenation.

    The empty word (id "eps") is the unique degree-0 element.  A product is
    defined when the concatenation is within the cut and contains no
    forbidden factor.
    """
    def allowed(w):
        return not any(f in w for f in spec.forbidden)

    words = [""]
    frontier = [""]
    for _ in range(spec.cut):
        frontier = [w + c for w in frontier for c in spec.alphabet if allowed(w + c)]
        words.extend(frontier)

    elements = [(EMPTY_WORD, (0,))] + [(w, (len(w),)) for w in words if w]
    products = [(EMPTY_WORD, EMPTY_WORD, EMPTY_WORD)]
    for w in words:
        if w:
            products.append((EMPTY_WORD, w, w))
            products.append((w, EMPTY_WORD, w))
    for u, w in itertools.product(words, words):
        if u and w and len(u) + len(w) <= spec.cut and allowed(u + w):
            products.append((u, w, u + w))
    return validate(1, elements, products)


def build_product(s1, s2):
    """Componentwise product semigraph on pairs; ranks add.

    The pair (x, y) gets the concatenated degree vector, and products are
    defined exactly when both components are.
    """
    def pid(x, y):
        return f"({x},{y})"

    elements = [(pid(x, y), s1.degree[x] + s2.degree[y])
                for x in s1.elements for y in s2.elements]
    products = [(pid(x1, y1), pid(x2, y2), pid(x12, y12))
                for (x1, x2), x12 in s1.product.items()
                for (y1, y2), y12 in s2.product.items()]
    return validate(s1.rank + s2.rank, elements, products)


def close_subset(s, subset):
    """The smallest segment-closed subset containing `subset`, as a semigraph.

    Elements are all segments of members of `subset`; a product is defined
    when it is defined in `s` and its result lies in the closure.
    """
    subset = list(subset)
    for t in subset:
        if t not in s.degree:
            raise ValueError(f"unknown element {t!r}")
    closure = set()
    for t in subset:
        closure |= s.segments(t)
    elements = [(t, s.degree[t]) for t in sorted(closure, key=s.sort_key)]
    products = [(x, y, z) for (x, y), z in s.product.items()
                if x in closure and y in closure and z in closure]
    return validate(s.rank, elements, products)
