"""Finite k-semigraph data model.

A k-semigraph is a finite set with a partially defined product and a degree
map into N_0^k such that degrees add along defined products, definedness is
associative, and every element factors uniquely across every componentwise
split of its degree.  The product table is extensional: exactly the defined
products appear in it.

Conventions used across the package:
  * elements are identified by nonempty strings
  * degrees are tuples of nonnegative ints, one entry per rank coordinate
  * the adjoined unit of the unital extension is the Python value None,
    which is never an element id
"""

from __future__ import annotations

import itertools

# result of unital_mul when the underlying product does not exist; distinct
# from None, which is the adjoined unit itself
UNDEFINED = object()


def zero_degree(rank):
    return (0,) * rank


def degree_add(m, n):
    return tuple(a + b for a, b in zip(m, n))


def degree_sub(m, n):
    return tuple(a - b for a, b in zip(m, n))


def degree_leq(m, n):
    return all(a <= b for a, b in zip(m, n))


def degree_join(m, n):
    return tuple(max(a, b) for a, b in zip(m, n))


def degree_splits(n):
    """All degrees m with 0 <= m <= n componentwise, lexicographically."""
    return itertools.product(*(range(c + 1) for c in n))


class Violation:
    """One failed axiom with a concrete witness tuple."""

    def __init__(self, code, witness, message):
        self.code = code
        self.witness = tuple(witness)
        self.message = message

    def as_dict(self):
        return {"code": self.code, "witness": list(self.witness),
                "message": self.message}

    def __repr__(self):
        return f"Violation({self.code!r}, {self.witness!r})"


class ValidationError(ValueError):
    """Raised by validate(); carries every violation found, not just the first."""

    def __init__(self, violations):
        self.violations = list(violations)
        lines = [v.message for v in self.violations]
        super().__init__("invalid semigraph:\n  " + "\n  ".join(lines))


def _schema_violations(rank, elements, products):
    out = []
    seen = set()
    for item in elements:
        try:
            ident, deg = item
        except (TypeError, ValueError):
            out.append(Violation("bad-element", (repr(item),),
                                 f"element entry {item!r} is not an (id, degree) pair"))
            continue
        if not isinstance(ident, str) or not ident:
            out.append(Violation("bad-id", (repr(ident),),
                                 f"element id {ident!r} is not a nonempty string"))
            continue
        if ident in seen:
            out.append(Violation("duplicate-id", (ident,),
                                 f"duplicate element id {ident!r}"))
            continue
        seen.add(ident)
        deg = tuple(deg)
        if len(deg) != rank or not all(isinstance(c, int) and c >= 0 for c in deg):
            out.append(Violation("bad-degree", (ident, deg),
                                 f"degree {deg!r} of {ident!r} is not in N_0^{rank}"))
    for trip in products:
        try:
            left, right, result = trip
        except (TypeError, ValueError):
            out.append(Violation("bad-product", (repr(trip),),
                                 f"product entry {trip!r} is not a (left, right, result) triple"))
            continue
        for ident in (left, right, result):
            if ident not in seen:
                out.append(Violation("unknown-id", (left, right, result),
                                     f"product ({left!r}, {right!r}) = {result!r} mentions unknown id {ident!r}"))
                break
    return out


def validate(rank, elements, products):
    """Check every axiom on a raw description and build a Semigraph.

    rank: number of degree coordinates, an int >= 1
    elements: iterable of (id, degree sequence) pairs
    products: iterable of (left id, right id, result id) triples

    Returns the validated Semigraph.  On failure raises ValidationError
    carrying one Violation per broken axiom, each with a witness; the scan
    does not stop at the first failure.
    """
    if not isinstance(rank, int) or rank < 1:
        raise ValidationError([Violation("bad-rank", (rank,),
                                         f"rank {rank!r} is not a positive int")])
    elements = list(elements)
    products = list(products)
    violations = _schema_violations(rank, elements, products)
    if violations:
        raise ValidationError(violations)

    degree = {ident: tuple(deg) for ident, deg in elements}
    product = {}
    for left, right, result in products:
        prev = product.get((left, right))
        if prev is not None and prev != result:
            violations.append(Violation(
                "conflicting-product", (left, right, prev, result),
                f"product ({left!r}, {right!r}) listed twice with results {prev!r} and {result!r}"))
            continue
        product[(left, right)] = result
        if degree[result] != degree_add(degree[left], degree[right]):
            violations.append(Violation(
                "degree-additivity", (left, right, result),
                f"d({left!r}·{right!r}) = {degree[result]} but d({left!r}) + d({right!r}) = "
                f"{degree_add(degree[left], degree[right])}"))
    if violations:
        raise ValidationError(violations)

    ids = [ident for ident, _ in elements]
    for s in ids:
        for t in ids:
            st = product.get((s, t))
            for u in ids:
                tu = product.get((t, u))
                lhs = product.get((st, u)) if st is not None else None
                rhs = product.get((s, tu)) if tu is not None else None
                if lhs != rhs:
                    violations.append(Violation(
                        "associativity", (s, t, u),
                        f"({s!r}·{t!r})·{u!r} = {lhs!r} but {s!r}·({t!r}·{u!r}) = {rhs!r}"))

    pairs_by_result = {ident: [] for ident in ids}
    for (left, right), result in product.items():
        pairs_by_result[result].append((left, right))
    factor = {}
    for x in ids:
        dx = degree[x]
        for n1 in degree_splits(dx):
            matches = [p for p in pairs_by_result[x] if degree[p[0]] == n1]
            if len(matches) == 1:
                factor[(x, n1)] = matches[0]
            elif not matches:
                violations.append(Violation(
                    "missing-factorization", (x, n1),
                    f"{x!r} has no factorization at split {n1}"))
            else:
                violations.append(Violation(
                    "nonunique-factorization", (x, n1, matches),
                    f"{x!r} factors {len(matches)} ways at split {n1}: {matches}"))

    zero = zero_degree(rank)
    units = [t for t in ids if degree[t] == zero]
    for e in units:
        if product.get((e, e)) != e:
            violations.append(Violation(
                "nonidempotent-unit", (e,),
                f"degree-zero element {e!r} is not idempotent"))
        for f in units:
            if f != e and (e, f) in product:
                violations.append(Violation(
                    "composable-units", (e, f),
                    f"distinct degree-zero elements {e!r}·{f!r} are composable"))

    if violations:
        raise ValidationError(violations)
    return Semigraph(rank, degree, product, factor)


class Semigraph:
    """A validated finite k-semigraph.  Immutable; construct via validate().

    Attributes:
      rank      number of degree coordinates
      elements  all ids in canonical order (by degree, then id)
      degree    id -> degree tuple
      product   (id, id) -> id, exactly the defined products
      vertices  the degree-zero elements, in canonical order
    """

    def __init__(self, rank, degree, product, factor):
        self.rank = rank
        self.degree = degree
        self.product = product
        self._factor = factor
        self.elements = sorted(degree, key=lambda t: (degree[t], t))
        self.index = {t: i for i, t in enumerate(self.elements)}
        self.vertices = tuple(t for t in self.elements
                              if degree[t] == zero_degree(rank))
        self._by_degree = {}
        for t in self.elements:
            self._by_degree.setdefault(degree[t], []).append(t)
        self._suffixes = {
            t: frozenset(factor[(t, n1)][1] for n1 in degree_splits(degree[t]))
            for t in self.elements}
        self._mce_cache = {}

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        return f"<Semigraph rank={self.rank} |T|={len(self.elements)}>"

    def sort_key(self, t):
        return (self.degree[t], t)

    def mul(self, x, y):
        """Product of x and y, or None when undefined."""
        return self.product.get((x, y))

    def defined(self, x, y):
        return (x, y) in self.product

    def by_degree(self, n):
        return self._by_degree.get(tuple(n), [])

    def factorize(self, t, n1):
        """The unique pair (t1, t2) with t = t1·t2 and d(t1) = n1."""
        key = (t, tuple(n1))
        if key not in self._factor:
            raise ValueError(f"split {tuple(n1)} not <= d({t!r}) = {self.degree[t]}")
        return self._factor[key]

    def segment(self, t, m, n):
        """The slice of t between degrees m and n, with 0 <= m <= n <= d(t)."""
        m, n = tuple(m), tuple(n)
        if not (degree_leq(m, n) and degree_leq(n, self.degree[t])):
            raise ValueError(f"bad segment bounds {m}..{n} for d({t!r}) = {self.degree[t]}")
        _, rest = self.factorize(t, m)
        seg, _ = self.factorize(rest, degree_sub(n, m))
        return seg

    def range_of(self, t):
        """The degree-zero left factor of t."""
        return self._factor[(t, zero_degree(self.rank))][0]

    def source_of(self, t):
        """The degree-zero right factor of t."""
        return self._factor[(t, self.degree[t])][1]

    def suffixes(self, t):
        """All right segments of t, i.e. every s with s <= t."""
        return self._suffixes[t]

    def leq(self, s, t):
        """Whether s is a right segment of t (s <= t iff a·s = t for some a)."""
        return s in self._suffixes[t]

    def segments(self, t):
        """Every slice of t, across all split pairs."""
        dt = self.degree[t]
        return {self.segment(t, m, n)
                for m in degree_splits(dt)
                for n in degree_splits(dt) if degree_leq(m, n)}

    def min_common_extensions(self, x, y):
        """All pairs (a, b) with x·a = y·b defined of degree d(x) v d(y).

        The common extensions z = x·a are exactly the elements of join degree
        with prefix x and prefix y; each z yields one pair.  Result is sorted
        canonically and may be empty.
        """
        key = (x, y)
        if key in self._mce_cache:
            return self._mce_cache[key]
        dx, dy = self.degree[x], self.degree[y]
        join = degree_join(dx, dy)
        out = []
        for z in self._by_degree.get(join, ()):
            if (self.factorize(z, dx)[0] == x and self.factorize(z, dy)[0] == y):
                out.append((self.segment(z, dx, join), self.segment(z, dy, join)))
        out.sort(key=lambda p: (self.sort_key(p[0]), self.sort_key(p[1])))
        result = tuple(out)
        self._mce_cache[key] = result
        return result

    def min_common_extensions_unital(self, x, y):
        """Minimal common extensions over the unital extension.

        x and y may be None (the adjoined unit); legs of degree zero are
        replaced by None in the output, so every returned (a, b) satisfies
        x·a = y·b with unit-absorbing products.
        """
        if x is None and y is None:
            return ((None, None),)
        if x is None:
            return (((y if self.degree[y] != zero_degree(self.rank) else None), None),)
        if y is None:
            return ((None, (x if self.degree[x] != zero_degree(self.rank) else None)),)
        zero = zero_degree(self.rank)
        return tuple(
            (a if self.degree[a] != zero else None,
             b if self.degree[b] != zero else None)
            for a, b in self.min_common_extensions(x, y))

    def unital_mul(self, x, y):
        """Product in the unital extension; None acts as the unit.

        Returns the product id (or None for the unit) on success and the
        module constant UNDEFINED when the semigraph product does not exist.
        """
        if x is None:
            return y
        if y is None:
            return x
        z = self.product.get((x, y))
        return z if z is not None else UNDEFINED
