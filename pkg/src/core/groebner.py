"""Algoritmo de Buchberger sobre Q y F_p, para contrastar el motor de Macaulay."""

import logging
from operator import add, sub
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from src.models.schemas import ResourceLimits

from .errors import DomainError, FieldMismatchError, ResourceLimitExceeded
from .fields import FieldSpec, RawValue
from .poly import DEFAULT_ORDER, Exponents, MonomialOrder, Polynomial

Terms = Dict[Exponents, RawValue]


def _divides(a: Exponents, b: Exponents) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Exponents, b: Exponents) -> Exponents:
    return tuple(map(max, a, b))


def _coprime(a: Exponents, b: Exponents) -> bool:
    return not any(x and y for x, y in zip(a, b))


def _lead(terms: Terms, order: MonomialOrder) -> Exponents:
    return max(terms, key=order.key)


def _monic(terms: Terms, field: FieldSpec, order: MonomialOrder) -> Terms:
    inv = field.inv(terms[_lead(terms, order)])
    return {e: field.mul(c, inv) for e, c in terms.items()}


def _sub_scaled(target: Terms, g: Terms, coeff: RawValue, shift: Exponents, field: FieldSpec):
    """target -= coeff * x^shift * g, en el sitio."""
    for e, c in g.items():
        m = tuple(map(add, e, shift))
        value = field.sub(target.get(m, 0), field.mul(coeff, c))
        if value:
            target[m] = value
        else:
            target.pop(m, None)


def spoly(f: Terms, g: Terms, lf: Exponents, lg: Exponents, field: FieldSpec) -> Terms:
    """S-polinomio de f y g mónicos."""
    lcm = _lcm(lf, lg)
    s: Terms = {}
    _sub_scaled(s, f, field.neg(1), tuple(map(sub, lcm, lf)), field)
    _sub_scaled(s, g, 1, tuple(map(sub, lcm, lg)), field)
    return s


def reduce(terms: Terms, basis: Sequence[Terms], leads: Sequence[Exponents],
           order: MonomialOrder, field: FieldSpec) -> Terms:
    """Obtener el resto completo de ``terms`` entre una base mónica."""
    p = dict(terms)
    remainder: Terms = {}
    while p:
        lm = _lead(p, order)
        c = p[lm]
        for g, lg in zip(basis, leads):
            if _divides(lg, lm):
                _sub_scaled(p, g, c, tuple(map(sub, lm, lg)), field)
                break
        else:
            remainder[lm] = p.pop(lm)
    return remainder


def select(pairs: Set[Tuple[int, int]], leads: Sequence[Exponents], order: MonomialOrder) -> Tuple[int, int]:
    """Estrategia normal: el par de menor mcm, primero el de menor grado."""
    def key(pair):
        lcm = _lcm(leads[pair[0]], leads[pair[1]])
        return sum(lcm), order.key(lcm), pair
    return min(pairs, key=key)


def minimalize(basis: List[Terms], leads: List[Exponents], order: MonomialOrder):
    kept, kept_leads = [], []
    for g, lg in sorted(zip(basis, leads), key=lambda t: order.key(t[1])):
        if not any(_divides(lk, lg) for lk in kept_leads):
            kept.append(g)
            kept_leads.append(lg)
    return kept, kept_leads


def interreduce(basis: List[Terms], leads: List[Exponents], order: MonomialOrder, field: FieldSpec) -> List[Terms]:
    reduced = []
    for i, g in enumerate(basis):
        others = basis[:i] + basis[i + 1:]
        other_leads = leads[:i] + leads[i + 1:]
        reduced.append(_monic(reduce(g, others, other_leads, order, field), field, order))
    return reduced


class GroebnerBasis:
    """Base de Groebner reducida; con ``truncation`` solo vale hasta ese grado."""

    def __init__(self, field: FieldSpec, n: int, order: MonomialOrder, basis: List[Polynomial],
                 reduced: bool = True, truncation: Optional[int] = None, pairs_processed: int = 0):
        self.field = field
        self.n = n
        self.order = order
        self.basis = basis
        self.reduced = reduced
        self.truncation = truncation
        self.pairs_processed = pairs_processed
        self._terms = [g.raw_terms for g in basis]
        self._leads = [g.leading_term(order)[0] for g in basis]

    def __len__(self):
        return len(self.basis)

    def normal_form(self, f: Polynomial) -> Polynomial:
        if f.n != self.n or f.field.characteristic != self.field.characteristic:
            raise FieldMismatchError("polynomial and basis live in different rings")
        rem = reduce(f.raw_terms, self._terms, self._leads, self.order, self.field)
        return Polynomial(self.field, self.n, rem, _trusted=True)

    def contains(self, f: Polynomial) -> bool:
        if self.truncation is not None and f.degree > self.truncation:
            raise DomainError(f"basis truncated at degree {self.truncation}, target has degree {f.degree}")
        return self.normal_form(f).is_zero


def buchberger(generators: Iterable[Polynomial], order: MonomialOrder = DEFAULT_ORDER,
               limits: ResourceLimits = None, truncate: Optional[int] = None,
               field: FieldSpec = None, n: int = None) -> GroebnerBasis:
    """Calcular la base de Groebner reducida del ideal generado por ``generators``.

    Args:
        generators: polinomios (o los ``generators`` de un HomogeneousIdeal)
        order: orden monomial
        limits: topes de pares y de grado; al alcanzarlos se lanza ResourceLimitExceeded
        truncate: descarta los S-pares cuyo mcm supera este grado
    Returns:
        GroebnerBasis
    """
    limits = limits or ResourceLimits()
    gens = [g for g in generators if not g.is_zero]
    if gens:
        field, n = gens[0].field, gens[0].n
    elif field is None or n is None:
        raise DomainError("an empty generator list needs an explicit field and n")
    for g in gens:
        if g.n != n or g.field.characteristic != field.characteristic:
            raise FieldMismatchError("generators live in different rings")

    basis: List[Terms] = []
    leads: List[Exponents] = []
    pairs: Set[Tuple[int, int]] = set()

    def update(h: Terms):
        lh = _lead(h, order)
        for i, lg in enumerate(leads):
            # criterio del producto
            if not _coprime(lg, lh):
                pairs.add((i, len(basis)))
        basis.append(h)
        leads.append(lh)

    for g in gens:
        update(_monic(g.raw_terms, field, order))

    processed = 0
    while pairs:
        i, j = select(pairs, leads, order)
        pairs.remove((i, j))
        degree = sum(_lcm(leads[i], leads[j]))
        if truncate is not None and degree > truncate:
            continue
        if truncate is None and degree > limits.max_degree:
            raise ResourceLimitExceeded(f"S-pair of degree {degree} above max_degree {limits.max_degree}",
                                        limit="max_degree", value=degree)
        processed += 1
        if processed > limits.max_pairs:
            raise ResourceLimitExceeded(f"more than {limits.max_pairs} S-pairs", limit="max_pairs", value=processed)
        r = reduce(spoly(basis[i], basis[j], leads[i], leads[j], field), basis, leads, order, field)
        if r:
            update(_monic(r, field, order))

    kept, kept_leads = minimalize(basis, leads, order)
    reduced = interreduce(kept, kept_leads, order, field)
    logging.info(f"Buchberger: {processed} pares, base reducida de {len(reduced)} elementos")
    return GroebnerBasis(field, n, order,
                         [Polynomial(field, n, t, _trusted=True) for t in reduced],
                         reduced=True, truncation=truncate, pairs_processed=processed)
