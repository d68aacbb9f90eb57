"""The Hain pipeline: expand the g-th power of the restricted
double-ramification divisor in the tree strata algebra and evaluate
against test classes under the top-Chern cap.

For the ramification profile (a, -a) every boundary divisor keeping both
markings on one side carries weight (a - a)^2 = 0, so after factoring one
a^2 out of each factor the working divisor is

    D = 1/2 (psi_1 + psi_2 - sum_{h=1..g-1} delta_h),

with delta_h the separating divisor whose marking-1 side has genus h, and
the coefficient of a^(2g) in the capped cycle pairs as (1/g!) int D^g ....
The cap vanishes outside compact type, so only chain strata ever appear;
on a chain it distributes as the top lambda class of each vertex, which
is what :func:`gdr.hodge.psi_lambda_g_integral` evaluates.

Multiplication rules: psi_1 and psi_2 decorate the outer legs; delta_h
either refines the chain by splitting the vertex containing cumulative
genus h (kappa decorations distribute over the two halves) or, when a
node already sits at h, contributes the excess terms -psi' - psi'' on the
two node branches.
"""
from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import List, Sequence, Tuple, Union

from .core import (
    ChainVertex,
    DecoratedChain,
    KappaMap,
    PsiKappaMonomial,
    kappa_degree,
    kappa_distributions,
)
from .hodge import psi_lambda_g_integral
from .kappa import kappa_to_psi

DivisorTerm = Union[str, Tuple[str, int]]  # "psi1" | "psi2" | ("delta", h)


def hain_divisor_terms(g: int) -> List[tuple]:
    """The weighted divisor terms (term, coefficient) making up D.

    Weights come from the squared ramification sums: a^2 for psi_1 and
    psi_2, a^2 for each marking-separating delta_h, and (a - a)^2 = 0 for
    divisors with both markings on one side (listed by
    :func:`weighted_divisor_candidates`, dropped here).
    """
    if g < 1:
        raise ValueError("genus must be >= 1")
    half = Fraction(1, 2)
    terms: List[tuple] = [("psi1", half), ("psi2", half)]
    for h in range(1, g):
        terms.append((("delta", h), -half))
    return terms


def weighted_divisor_candidates(g: int) -> List[tuple]:
    """Every degree-1 candidate with its weight as (term, marking split S,
    coefficient of a^2, a-degree).

    Each candidate is homogeneous of degree exactly 2 in the ramification
    parameter, so the g-fold product is homogeneous of degree exactly 2g:
    no other power of a can arise. Candidates whose weight vanishes are
    the divisors with both markings on one component.
    """
    if g < 1:
        raise ValueError("genus must be >= 1")
    ram = {1: 1, 2: -1}  # ramification values in units of a
    out: List[tuple] = []
    for i in (1, 2):
        out.append((f"psi{i}", (i,), Fraction(ram[i] ** 2, 2), 2))
    for h in range(1, g):
        # marking 1 alone on the genus-h side
        out.append((("delta", h), (1,), Fraction(-(ram[1] ** 2), 2), 2))
    for h in range(0, g):
        # both markings on the genus-h side: weight (a - a)^2 = 0
        out.append((("delta_both", h), (1, 2), Fraction(-((ram[1] + ram[2]) ** 2), 2), 2))
    return out


def coefficient_a_degree(g: int) -> int:
    """Total a-degree of the expanded g-fold divisor product (always 2g)."""
    degrees = {deg for _, _, _, deg in weighted_divisor_candidates(g)}
    if degrees != {2}:
        raise AssertionError(f"inhomogeneous divisor weights: degrees {degrees}")
    return 2 * g


def multiply_by_divisor(chain: DecoratedChain, term: DivisorTerm) -> List[DecoratedChain]:
    """Multiply a chain stratum by one divisor term of D.

    psi_1 / psi_2 increment the outer-leg psi powers. delta_h splits the
    vertex containing cumulative genus h (existing left decorations stay
    left, right stay right, kappa distributes) or triggers the excess rule
    at an existing node: two terms with coefficient * (-1) and one extra
    psi power on either node branch.
    """
    vertices = chain.vertices
    if term == "psi1":
        v = vertices[0]
        return [chain.with_vertex(0, ChainVertex(v.genus, v.left_psi + 1, v.right_psi, v.kappa))]
    if term == "psi2":
        last = len(vertices) - 1
        v = vertices[last]
        return [chain.with_vertex(last, ChainVertex(v.genus, v.left_psi, v.right_psi + 1, v.kappa))]
    if not (isinstance(term, tuple) and len(term) == 2 and term[0] == "delta"):
        raise ValueError(f"malformed divisor term {term!r}")
    h = term[1]
    if not 1 <= h <= chain.genus - 1:
        raise ValueError(f"delta index {h} out of range for genus {chain.genus}")
    cumulative = 0
    for j, v in enumerate(vertices):
        below = cumulative
        cumulative += v.genus
        if h == cumulative and j < len(vertices) - 1:
            # excess: -psi' - psi'' at the existing node
            right_of_node = vertices[j + 1]
            bumped_left = ChainVertex(v.genus, v.left_psi, v.right_psi + 1, v.kappa)
            bumped_right = ChainVertex(
                right_of_node.genus,
                right_of_node.left_psi + 1,
                right_of_node.right_psi,
                right_of_node.kappa,
            )
            return [
                chain.with_vertex(j, bumped_left).scaled(Fraction(-1)),
                chain.with_vertex(j + 1, bumped_right).scaled(Fraction(-1)),
            ]
        if below < h < cumulative:
            out = []
            for mult, (kappa_l, kappa_r) in kappa_distributions(v.kappa, 2):
                left = ChainVertex(h - below, v.left_psi, 0, kappa_l)
                right = ChainVertex(cumulative - h, 0, v.right_psi, kappa_r)
                refined = vertices[:j] + (left, right) + vertices[j + 1:]
                out.append(DecoratedChain(refined, chain.coefficient * mult))
            return out
    raise AssertionError("unreachable: every 1 <= h <= g-1 hits a node or a vertex")


def expand_divisor_power(g: int) -> List[DecoratedChain]:
    """All chain strata of D^g with aggregated coefficients (without the
    final 1/g! normalization), deterministically ordered."""
    chains = [DecoratedChain((ChainVertex(g),), Fraction(1))]
    terms = hain_divisor_terms(g)
    for _ in range(g):
        acc: dict = {}
        for chain in chains:
            for term, weight in terms:
                for product in multiply_by_divisor(chain, term):
                    coeff = product.coefficient * weight
                    acc[product.vertices] = acc.get(product.vertices, Fraction(0)) + coeff
        chains = [
            DecoratedChain(vs, coeff)
            for vs, coeff in sorted(acc.items(), key=lambda kv: _chain_sort_key(kv[0]))
            if coeff
        ]
    return chains


def _chain_sort_key(vertices: tuple) -> tuple:
    return tuple((v.genus, v.left_psi, v.right_psi, v.kappa) for v in vertices)


def evaluate_chain(chain: DecoratedChain) -> Fraction:
    """Integrate a capped decorated chain: product over vertices of the
    lambda-capped two-leg integral, times the chain coefficient."""
    value = chain.coefficient
    for v in chain.vertices:
        if not value:
            return Fraction(0)
        value *= _vertex_value(v.genus, v.left_psi, v.right_psi, v.kappa)
    return value


def _vertex_value(genus: int, left_psi: int, right_psi: int, kappa: KappaMap) -> Fraction:
    # support of the capped evaluation: decoration degree = 2g - 3 + n
    if left_psi + right_psi + kappa_degree(kappa) != 2 * genus - 1:
        return Fraction(0)
    total = Fraction(0)
    for coeff, exps in kappa_to_psi(2, (left_psi, right_psi), kappa):
        total += coeff * psi_lambda_g_integral(genus, exps)
    return total


def _attach_monomial(chain: DecoratedChain, omega: PsiKappaMonomial) -> List[DecoratedChain]:
    """Multiply omega into a chain: marking psi powers go to the outer
    legs, kappa factors distribute over the vertices."""
    vertices = list(chain.vertices)
    first = vertices[0]
    vertices[0] = ChainVertex(first.genus, first.left_psi + omega.d1, first.right_psi, first.kappa)
    last = vertices[-1]
    vertices[-1] = ChainVertex(last.genus, last.left_psi, last.right_psi + omega.d2, last.kappa)
    out = []
    for mult, parts in kappa_distributions(omega.kappa, len(vertices)):
        decorated = []
        for v, extra in zip(vertices, parts):
            merged = dict(v.kappa)
            for idx, c in extra:
                merged[idx] = merged.get(idx, 0) + c
            decorated.append(ChainVertex(v.genus, v.left_psi, v.right_psi, tuple(sorted(merged.items()))))
        out.append(DecoratedChain(tuple(decorated), chain.coefficient * mult))
    return out


def pair_dr_side(g: int, omega: PsiKappaMonomial) -> Fraction:
    """Coefficient of a^(2g) in the capped double-ramification pairing
    against omega, computed entirely in the tree strata algebra."""
    if g < 1:
        raise ValueError("genus must be >= 1")
    if omega.codim != g - 1:
        raise ValueError(f"omega must have codim {g - 1}, got {omega.codim}")
    total = Fraction(0)
    for chain in expand_divisor_power(g):
        for decorated in _attach_monomial(chain, omega):
            total += evaluate_chain(decorated)
    return total / factorial(g)


def pair_dr_boundary(omega: DecoratedChain) -> Fraction:
    """Pair against a decorated two-vertex boundary class by strata
    refinement: multiply each expanded chain by the underlying separating
    divisor, then lay omega's decorations around the resulting node."""
    if len(omega.vertices) != 2:
        raise ValueError("boundary test class must have exactly 2 vertices")
    g = omega.genus
    h = omega.vertices[0].genus
    total = Fraction(0)
    for chain in expand_divisor_power(g):
        for refined in multiply_by_divisor(chain, ("delta", h)):
            for decorated in _attach_boundary(refined, omega, h):
                total += evaluate_chain(decorated)
    return omega.coefficient * total / factorial(g)


def _attach_boundary(chain: DecoratedChain, omega: DecoratedChain, h: int) -> List[DecoratedChain]:
    """Attach the decorations of a two-vertex boundary class around the
    node of `chain` sitting at cumulative genus h."""
    vertices = list(chain.vertices)
    node = _node_at(vertices, h)
    left_deco, right_deco = omega.vertices

    first = vertices[0]
    vertices[0] = ChainVertex(first.genus, first.left_psi + left_deco.left_psi, first.right_psi, first.kappa)
    v = vertices[node]
    vertices[node] = ChainVertex(v.genus, v.left_psi, v.right_psi + left_deco.right_psi, v.kappa)
    v = vertices[node + 1]
    vertices[node + 1] = ChainVertex(v.genus, v.left_psi + right_deco.left_psi, v.right_psi, v.kappa)
    last = vertices[-1]
    vertices[-1] = ChainVertex(last.genus, last.left_psi, last.right_psi + right_deco.right_psi, last.kappa)

    out = []
    n_left = node + 1
    n_right = len(vertices) - n_left
    for mult_l, parts_l in kappa_distributions(left_deco.kappa, n_left):
        for mult_r, parts_r in kappa_distributions(right_deco.kappa, n_right):
            decorated = []
            for v, extra in zip(vertices, parts_l + parts_r):
                merged = dict(v.kappa)
                for idx, c in extra:
                    merged[idx] = merged.get(idx, 0) + c
                decorated.append(ChainVertex(v.genus, v.left_psi, v.right_psi, tuple(sorted(merged.items()))))
            out.append(DecoratedChain(tuple(decorated), chain.coefficient * mult_l * mult_r))
    return out


def _node_at(vertices: Sequence[ChainVertex], h: int) -> int:
    cumulative = 0
    for j, v in enumerate(vertices[:-1]):
        cumulative += v.genus
        if cumulative == h:
            return j
    raise ValueError(f"no node at cumulative genus {h}")
