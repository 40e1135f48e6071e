"""Exact word calculus of the freely generated semigraph *-algebra.

Elements are finite rational combinations of standard words s·p·t*, where s
and t are non-vertex elements or the adjoined unit (None) and p is a
canonical ProjectionSet (an antichain of source projections Q_a).  The
multiplication kernel rewrites any product of standard words into standard
words again, so normal forms are closed under the *-algebra operations.

Equality of elements is not decided here: distinct canonical words need not
be linearly independent, so element equality is delegated to the faithful
block model in the rep module.  Equality of single words is syntactic.
"""

from __future__ import annotations

from fractions import Fraction

from .semigraph import UNDEFINED, zero_degree, degree_sub


class ProjectionSet:
    """A product of source projections Q_a, or Zero.

    Nonzero values store a canonical antichain: no member is a right segment
    of another, all members share one source vertex.  Absorption is sound
    because Q_t absorbs Q_s exactly when s <= t.
    """

    __slots__ = ("members", "source")

    def __init__(self, members, source):
        self.members = members
        self.source = source

    @property
    def is_zero(self):
        return self.members is None

    def __eq__(self, other):
        return isinstance(other, ProjectionSet) and self.members == other.members

    def __hash__(self):
        return hash(self.members)

    def __repr__(self):
        if self.is_zero:
            return "ProjectionSet(0)"
        return f"ProjectionSet({{{', '.join(self.members)}}})"


ZERO_PROJECTION = ProjectionSet(None, None)


def normalize_projection(semigraph, members):
    """Canonical form of a product of Q_a over the given members.

    Zero when two members have distinct sources; otherwise the antichain of
    <=-maximal members in canonical order.
    """
    members = set(members)
    if not members:
        raise ValueError("empty projection product has no canonical form")
    sources = {semigraph.source_of(m) for m in members}
    if len(sources) != 1:
        return ZERO_PROJECTION
    maximal = [m for m in members
               if not any(m != other and semigraph.leq(m, other) for other in members)]
    maximal.sort(key=semigraph.sort_key)
    return ProjectionSet(tuple(maximal), sources.pop())


def projection_product(semigraph, p, q):
    if p.is_zero or q.is_zero:
        return ZERO_PROJECTION
    return normalize_projection(semigraph, p.members + q.members)


def projection_leq(semigraph, p, q):
    """Operator order p <= q: every Q-factor of q dominates one of p.

    Zero is the least element.  Faithful on canonical forms because
    Q_t <= Q_s exactly when s <= t in the semigraph.
    """
    if p.is_zero:
        return True
    if q.is_zero:
        return False
    return all(any(semigraph.leq(beta, alpha) for alpha in p.members)
               for beta in q.members)


def commute_through(semigraph, p, t):
    """The q with p·t = t·q; Zero when the product p·t vanishes.

    Pulls each Q_a factor rightward through t: Q_a t = t Q_{at} when at is
    defined, and Q_a t = 0 otherwise.  t may be None (the unit).
    """
    if p.is_zero:
        return ZERO_PROJECTION
    if t is None:
        return p
    images = [semigraph.mul(alpha, t) for alpha in p.members]
    if any(img is None for img in images):
        return ZERO_PROJECTION
    return normalize_projection(semigraph, images)


class StandardWord:
    """A monomial s·p·t*; left/right are element ids or None (the unit).

    Canonical invariant: mid already absorbs both endpoints, i.e. the
    antichain of mid ∪ {s,t} equals mid, and all sources agree.  Words are
    compared syntactically; construct via make_standard_word.
    """

    __slots__ = ("left", "mid", "right")

    def __init__(self, left, mid, right):
        self.left = left
        self.mid = mid
        self.right = right

    def __eq__(self, other):
        return (isinstance(other, StandardWord) and self.left == other.left
                and self.mid == other.mid and self.right == other.right)

    def __hash__(self):
        return hash((self.left, self.mid, self.right))

    def __repr__(self):
        return f"StandardWord({render_word(self)})"

    @property
    def is_half(self):
        return self.right is None

    def adjoint(self):
        return StandardWord(self.right, self.mid, self.left)

    def word_degree(self, semigraph):
        zero = zero_degree(semigraph.rank)
        dl = semigraph.degree[self.left] if self.left is not None else zero
        dr = semigraph.degree[self.right] if self.right is not None else zero
        return degree_sub(dl, dr)


def make_standard_word(semigraph, left, members, right):
    """Canonical StandardWord for s·(∏Q_members)·t*, or None when it is 0."""
    zero = zero_degree(semigraph.rank)
    for end in (left, right):
        assert end is None or semigraph.degree[end] != zero
    ext = list(members)
    if left is not None:
        ext.append(left)
    if right is not None:
        ext.append(right)
    mid = normalize_projection(semigraph, ext)
    if mid.is_zero:
        return None
    return StandardWord(left, mid, right)


class AlgebraElement:
    """A finite rational combination of StandardWords over one semigraph."""

    __slots__ = ("semigraph", "terms")

    def __init__(self, semigraph, terms=None):
        self.semigraph = semigraph
        self.terms = {w: c for w, c in (terms or {}).items() if c != 0}

    @classmethod
    def zero(cls, semigraph):
        return cls(semigraph)

    @property
    def is_zero_form(self):
        # syntactic zero (no terms); operator zero is decided by the rep
        return not self.terms

    def __add__(self, other):
        self._check(other)
        terms = dict(self.terms)
        for w, c in other.terms.items():
            terms[w] = terms.get(w, 0) + c
        return AlgebraElement(self.semigraph, terms)

    def __sub__(self, other):
        return self + (-1) * other

    def __neg__(self):
        return (-1) * self

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return multiply(self, other)
        return self.scaled(other)

    def __rmul__(self, scalar):
        return self.scaled(scalar)

    def scaled(self, scalar):
        scalar = Fraction(scalar)
        return AlgebraElement(self.semigraph,
                              {w: scalar * c for w, c in self.terms.items()})

    def adjoint(self):
        return AlgebraElement(self.semigraph,
                              {w.adjoint(): c for w, c in self.terms.items()})

    def _check(self, other):
        if self.semigraph is not other.semigraph:
            raise ValueError("operands live over different semigraphs")

    def __repr__(self):
        return f"<AlgebraElement {render_element(self.semigraph, self)}>"


def as_element(semigraph, word, coefficient=1):
    return AlgebraElement(semigraph, {word: Fraction(coefficient)})


def gen_element(semigraph, t, star=False):
    """The generator t (or t*) as an AlgebraElement; vertices give Q_t."""
    if t not in semigraph.degree:
        raise ValueError(f"unknown element token {t!r}")
    if semigraph.degree[t] == zero_degree(semigraph.rank):
        word = StandardWord(None, normalize_projection(semigraph, [t]), None)
    elif star:
        word = StandardWord(None, normalize_projection(semigraph, [t]), t)
    else:
        word = StandardWord(t, normalize_projection(semigraph, [t]), None)
    return as_element(semigraph, word)


def adjoint(element):
    return element.adjoint()


def star_product(semigraph, x, y):
    """The expansion of x*·y over minimal common extensions.

    x and y are element ids or None (the unit); the unit-unit case is not an
    algebra element and is rejected.
    """
    if x is None and y is None:
        raise ValueError("unit*·unit is not an element of the algebra")
    zero = zero_degree(semigraph.rank)
    for end in (x, y):
        if end is not None and semigraph.degree[end] == zero:
            raise ValueError(f"{end!r} has degree zero; star_product expects T1 legs")
    terms = {}
    for e, f in semigraph.min_common_extensions_unital(x, y):
        z = semigraph.unital_mul(y, f)
        word = make_standard_word(semigraph, e, [z], f)
        if word is not None:
            terms[word] = terms.get(word, 0) + Fraction(1)
    return AlgebraElement(semigraph, terms)


def _mul_monomials(semigraph, w1, w2):
    """All standard words of w1·w2, each with coefficient +1."""
    out = []
    for e, f in semigraph.min_common_extensions_unital(w1.right, w2.left):
        left = semigraph.unital_mul(w1.left, e)
        if left is UNDEFINED:
            continue
        right = semigraph.unital_mul(w2.right, f)
        if right is UNDEFINED:
            continue
        q1 = commute_through(semigraph, w1.mid, e)
        if q1.is_zero:
            continue
        q2 = commute_through(semigraph, w2.mid, f)
        if q2.is_zero:
            continue
        z = semigraph.unital_mul(w1.right, e)
        members = q1.members + q2.members + (() if z is None else (z,))
        word = make_standard_word(semigraph, left, members, right)
        if word is not None:
            out.append(word)
    return out


def multiply(a, b):
    """Bilinear product; the result is again a combination of standard words."""
    a._check(b)
    semigraph = a.semigraph
    terms = {}
    for w1, c1 in a.terms.items():
        for w2, c2 in b.terms.items():
            c = c1 * c2
            for word in _mul_monomials(semigraph, w1, w2):
                terms[word] = terms.get(word, 0) + c
    return AlgebraElement(semigraph, terms)


def parse_token(token):
    """Split a token like "ab*" into (id, is_adjoint)."""
    if token.endswith("*"):
        return token[:-1], True
    return token, False


def normal_form(semigraph, tokens):
    """Reduce a word in generators and adjoints to its normal form.

    Tokens are element ids, optionally suffixed with * for the adjoint, or
    (id, bool) pairs.  The fold is left to right.
    """
    tokens = list(tokens)
    if not tokens:
        raise ValueError("empty token word")
    parsed = [parse_token(t) if isinstance(t, str) else t for t in tokens]
    result = gen_element(semigraph, *parsed[0])
    for t, star in parsed[1:]:
        result = multiply(result, gen_element(semigraph, t, star))
    return result


def range_projection(semigraph, word):
    """P_w = w·w* for a half-standard word, as an AlgebraElement."""
    el = as_element(semigraph, word)
    return multiply(el, el.adjoint())


def standard_projection(semigraph, a, bs):
    """The expansion of P_a·∏(1−P_b) as a combination of standard words."""
    for w in [a] + list(bs):
        if not w.is_half:
            raise ValueError(f"{w!r} is not half-standard")
    result = range_projection(semigraph, a)
    for b in bs:
        result = result - multiply(result, range_projection(semigraph, b))
    return result


def enumerate_projection_sets(semigraph):
    """All nonzero canonical ProjectionSets, in deterministic order."""
    out = []
    for src in semigraph.vertices:
        pool = [t for t in semigraph.elements if semigraph.source_of(t) == src]

        def extend(prefix, start):
            for i in range(start, len(pool)):
                cand = pool[i]
                if any(semigraph.leq(cand, m) or semigraph.leq(m, cand)
                       for m in prefix):
                    continue
                chosen = prefix + [cand]
                out.append(ProjectionSet(tuple(sorted(chosen, key=semigraph.sort_key)),
                                         src))
                extend(chosen, i + 1)

        extend([], 0)
    return out


def _dominated_legs(semigraph, pset):
    """Unit plus every non-vertex element lying below some member of pset."""
    zero = zero_degree(semigraph.rank)
    legs = [None]
    for x in semigraph.elements:
        if semigraph.degree[x] != zero and any(
                semigraph.leq(x, alpha) for alpha in pset.members):
            legs.append(x)
    return legs


def enumerate_half_standard(semigraph):
    """All distinct half-standard words (s, p, 1) in canonical form."""
    out = []
    for pset in enumerate_projection_sets(semigraph):
        for s in _dominated_legs(semigraph, pset):
            out.append(StandardWord(s, pset, None))
    return out


def enumerate_standard_words(semigraph):
    """All distinct standard words (s, p, t) in canonical form."""
    out = []
    for pset in enumerate_projection_sets(semigraph):
        legs = _dominated_legs(semigraph, pset)
        for s in legs:
            for t in legs:
                out.append(StandardWord(s, pset, t))
    return out


def _leg_key(semigraph, x):
    return (0,) if x is None else (1,) + tuple(semigraph.sort_key(x))


def word_sort_key(semigraph, word):
    return (tuple(semigraph.sort_key(m) for m in word.mid.members),
            _leg_key(semigraph, word.left), _leg_key(semigraph, word.right))


def render_word(word):
    parts = []
    if word.left is not None:
        parts.append(word.left)
    parts.append("".join(f"Q_{{{m}}}" for m in word.mid.members))
    if word.right is not None:
        parts.append(f"{word.right}*")
    return "·".join(parts)


def render_element(semigraph, element):
    if not element.terms:
        return "0"
    bits = []
    for word in sorted(element.terms, key=lambda w: word_sort_key(semigraph, w)):
        c = element.terms[word]
        if c == 1:
            coef = ""
        elif c == -1:
            coef = "-"
        else:
            coef = f"{c}·"
        bits.append(f"{coef}{render_word(word)}")
    return " + ".join(bits)
